use std::fmt::Write;

use crate::model::{AttrSet, CpStatement, CpTheory, Schema};
use crate::textio::common::{attr_set, formula, instantiation, parse_schema};
use crate::textio::lexer::{Cursor, Diagnostic, Tok};

/// Parse a theory document: `attr` declarations, then `stmt` lines.
///
/// ```text
/// attr W : w, nw
/// stmt true | {C, P} : W=nw >= W=w
/// stmt W=nw : P=p >= P=np
/// ```
pub fn parse_theory(text: &str) -> Result<CpTheory, Diagnostic> {
    let mut c = Cursor::new(text)?;
    let schema = parse_schema(&mut c)?;
    let mut statements = Vec::new();
    while !matches!(c.peek(), Tok::Eof) {
        if c.at_keyword("attr") {
            return Err(Diagnostic::new(
                c.pos(),
                "attribute declarations must precede statements",
            ));
        }
        c.expect_keyword("stmt")?;
        let condition = formula(&mut c, &schema)?;
        let free = if c.eat(&Tok::Bar) {
            attr_set(&mut c, &schema)?
        } else {
            AttrSet::empty()
        };
        c.expect(&Tok::Colon)?;
        let (mut prev, _) = instantiation(&mut c, &schema)?;
        let mut links = 0;
        while c.eat(&Tok::Geq) {
            let (next, pos) = instantiation(&mut c, &schema)?;
            let s = CpStatement::new(&schema, condition.clone(), free, prev, next.clone())
                .map_err(|e| Diagnostic::new(pos, e.to_string()))?;
            statements.push(s);
            prev = next;
            links += 1;
        }
        if links == 0 {
            return Err(c.unexpected("`>=`"));
        }
    }
    CpTheory::new(schema, statements).map_err(|e| Diagnostic::new(c.pos(), e.to_string()))
}

pub(crate) fn write_schema(schema: &Schema, out: &mut String) {
    for a in schema.attributes() {
        writeln!(out, "attr {} : {}", a.name, a.values.join(", ")).unwrap();
    }
}

/// Canonical text: declarations in schema order, then one `stmt` per statement.
pub fn serialize_theory(t: &CpTheory) -> String {
    let schema = t.schema();
    let mut out = String::new();
    write_schema(schema, &mut out);
    if !t.is_empty() {
        out.push('\n');
    }
    for s in t.statements() {
        out.push_str("stmt ");
        out.push_str(&s.condition().render(schema));
        if !s.free().is_empty() {
            write!(out, " | {{{}}}", schema.render_set(s.free())).unwrap();
        }
        writeln!(
            out,
            " : {} >= {}",
            schema.render_instantiation(s.better()),
            schema.render_instantiation(s.worse())
        )
        .unwrap();
    }
    out
}
