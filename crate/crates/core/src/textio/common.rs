use crate::model::{AttrSet, Attribute, Formula, Instantiation, Schema};
use crate::textio::lexer::{Cursor, Diagnostic, Pos, Tok};

/// Leading `attr NAME : v1, v2, ...` declarations, turned into a schema.
pub fn parse_schema(c: &mut Cursor) -> Result<Schema, Diagnostic> {
    let mut attrs: Vec<Attribute> = Vec::new();
    let start = c.pos();
    while c.at_keyword("attr") {
        c.bump();
        let (name, pos) = c.name("an attribute name")?;
        if attrs.iter().any(|a| a.name == name) {
            return Err(Diagnostic::new(
                pos,
                format!("attribute `{name}` declared twice"),
            ));
        }
        c.expect(&Tok::Colon)?;
        let mut values = Vec::new();
        loop {
            let (v, vpos) = c.name("a value name")?;
            if values.contains(&v) {
                return Err(Diagnostic::new(
                    vpos,
                    format!("value `{v}` listed twice for `{name}`"),
                ));
            }
            values.push(v);
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        if values.len() < 2 {
            return Err(Diagnostic::new(
                pos,
                format!("attribute `{name}` needs at least two values"),
            ));
        }
        attrs.push(Attribute { name, values });
    }
    Schema::new(attrs).map_err(|e| Diagnostic::new(start, e.to_string()))
}

pub fn literal(c: &mut Cursor, schema: &Schema) -> Result<((usize, usize), Pos), Diagnostic> {
    let (attr, pos) = c.name("an attribute name")?;
    let a = schema
        .attr_index(&attr)
        .map_err(|_| Diagnostic::new(pos, format!("unknown attribute `{attr}`")))?;
    c.expect(&Tok::Eq)?;
    let (value, vpos) = c.name("a value name")?;
    let v = schema.value_index(a, &value).map_err(|_| {
        Diagnostic::new(
            vpos,
            format!("unknown value `{value}` for attribute `{attr}`"),
        )
    })?;
    Ok(((a, v), pos))
}

/// `A=a, B=b, ...`
pub fn instantiation(c: &mut Cursor, schema: &Schema) -> Result<(Instantiation, Pos), Diagnostic> {
    let mut pairs = Vec::new();
    let start = c.pos();
    loop {
        let ((a, v), pos) = literal(c, schema)?;
        if pairs.iter().any(|&(b, _)| b == a) {
            return Err(Diagnostic::new(
                pos,
                format!("attribute `{}` bound twice", schema.name(a)),
            ));
        }
        pairs.push((a, v));
        if !c.eat(&Tok::Comma) {
            break;
        }
    }
    Ok((
        Instantiation::new(pairs).expect("no attribute bound twice"),
        start,
    ))
}

/// `{ A, B }`
pub fn attr_set(c: &mut Cursor, schema: &Schema) -> Result<AttrSet, Diagnostic> {
    c.expect(&Tok::LBrace)?;
    let mut set = AttrSet::empty();
    if c.eat(&Tok::RBrace) {
        return Ok(set);
    }
    loop {
        let (name, pos) = c.name("an attribute name")?;
        let a = schema
            .attr_index(&name)
            .map_err(|_| Diagnostic::new(pos, format!("unknown attribute `{name}`")))?;
        if set.contains(a) {
            return Err(Diagnostic::new(
                pos,
                format!("attribute `{name}` listed twice"),
            ));
        }
        set.insert(a);
        if !c.eat(&Tok::Comma) {
            break;
        }
    }
    c.expect(&Tok::RBrace)?;
    Ok(set)
}

/// Precedence from loosest: `<->`, `->` (right associative), `or`, `and`, `not`.
pub fn formula(c: &mut Cursor, schema: &Schema) -> Result<Formula, Diagnostic> {
    let mut f = implication(c, schema)?;
    while c.eat(&Tok::DoubleArrow) {
        f = Formula::iff(f, implication(c, schema)?);
    }
    Ok(f)
}

fn implication(c: &mut Cursor, schema: &Schema) -> Result<Formula, Diagnostic> {
    let f = disjunction(c, schema)?;
    if c.eat(&Tok::Arrow) {
        return Ok(Formula::implies(f, implication(c, schema)?));
    }
    Ok(f)
}

fn disjunction(c: &mut Cursor, schema: &Schema) -> Result<Formula, Diagnostic> {
    let mut f = conjunction(c, schema)?;
    while c.eat_keyword("or") {
        f = Formula::or(f, conjunction(c, schema)?);
    }
    Ok(f)
}

fn conjunction(c: &mut Cursor, schema: &Schema) -> Result<Formula, Diagnostic> {
    let mut f = unary(c, schema)?;
    while c.eat_keyword("and") {
        f = Formula::and(f, unary(c, schema)?);
    }
    Ok(f)
}

fn unary(c: &mut Cursor, schema: &Schema) -> Result<Formula, Diagnostic> {
    if c.eat_keyword("not") {
        return Ok(Formula::not(unary(c, schema)?));
    }
    if c.eat_keyword("true") {
        return Ok(Formula::True);
    }
    if c.eat_keyword("false") {
        return Ok(Formula::False);
    }
    if c.eat(&Tok::LParen) {
        let f = formula(c, schema)?;
        c.expect(&Tok::RParen)?;
        return Ok(f);
    }
    match c.peek() {
        Tok::Ident(_) => {
            let ((a, v), _) = literal(c, schema)?;
            Ok(Formula::atom(a, v))
        }
        _ => Err(c.unexpected("a formula")),
    }
}
