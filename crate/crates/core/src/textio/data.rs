use std::fmt::Write;

use crate::lexcompat::Cnf;
use crate::model::{Alternative, Schema};
use crate::semantics::ExplicitPreorder;
use crate::textio::common::instantiation;
use crate::textio::lexer::{Cursor, Diagnostic, Pos, Tok};

/// `A=a,B=b,...` binding every attribute of the schema.
pub fn parse_alternative(schema: &Schema, text: &str) -> Result<Alternative, Diagnostic> {
    let mut c = Cursor::new(text)?;
    let (inst, pos) = instantiation(&mut c, schema)?;
    if !matches!(c.peek(), Tok::Eof) {
        return Err(c.unexpected("end of alternative"));
    }
    let missing = schema.all().difference(inst.vars());
    if !missing.is_empty() {
        return Err(Diagnostic::new(
            pos,
            format!("no value for {}", schema.render_set(missing)),
        ));
    }
    Ok(Alternative(inst.iter().map(|(_, v)| v).collect()))
}

/// One alternative per non-blank line; `#` starts a comment.
pub fn parse_alternative_set(schema: &Schema, text: &str) -> Result<Vec<Alternative>, Diagnostic> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let alt = parse_alternative(schema, body).map_err(|d| Diagnostic {
            line: ln + 1,
            col: d.col,
            message: d.message,
        })?;
        out.push(alt);
    }
    Ok(out)
}

/// DIMACS CNF: `c` comment lines, a `p cnf VARS CLAUSES` header, then
/// clauses as integers terminated by `0`.
pub fn parse_dimacs(text: &str) -> Result<Cnf, Diagnostic> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last = Pos { line: 1, col: 1 };
    for (ln, line) in text.lines().enumerate() {
        let pos = Pos {
            line: ln + 1,
            col: 1,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Diagnostic::new(pos, "second problem line"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v
                        .parse()
                        .map_err(|_| Diagnostic::new(pos, "bad variable count"))?;
                    let c = c
                        .parse()
                        .map_err(|_| Diagnostic::new(pos, "bad clause count"))?;
                    header = Some((v, c));
                }
                _ => return Err(Diagnostic::new(pos, "expected `p cnf VARS CLAUSES`")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(Diagnostic::new(pos, "clause before the problem line"));
        };
        let mut col = 0;
        for word in line.split_whitespace() {
            col = line[col..].find(word).map_or(col, |i| col + i);
            let at = Pos {
                line: ln + 1,
                col: col + 1,
            };
            let lit: i64 = word
                .parse()
                .map_err(|_| Diagnostic::new(at, format!("`{word}` is not a literal")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(Diagnostic::new(
                    at,
                    format!("literal {lit} exceeds the {vars} declared variables"),
                ));
            } else {
                current.push(lit);
            }
            col += word.len();
            last = at;
        }
    }
    let Some((vars, count)) = header else {
        return Err(Diagnostic::new(last, "missing `p cnf` problem line"));
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(Diagnostic::new(
            last,
            format!(
                "problem line declares {count} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    Cnf::new(vars, clauses).map_err(|e| Diagnostic::new(last, e.to_string()))
}

/// DIMACS text for a CNF.
pub fn serialize_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// `o >= o'` per related pair, rows in rank order; `strict_only` drops the reflexive pairs.
pub fn serialize_preorder(p: &ExplicitPreorder, strict_only: bool) -> String {
    let schema = p.schema();
    let mut out = String::new();
    for (i, j) in p.pairs() {
        if strict_only && i == j {
            continue;
        }
        writeln!(
            out,
            "{} >= {}",
            schema.render_alternative(&p.alternative(i)),
            schema.render_alternative(&p.alternative(j))
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Schema {
        Schema::from_names(&[("A", &["a", "na"]), ("B", &["b", "nb"])]).unwrap()
    }

    #[test]
    fn alternatives() {
        let s = ab();
        assert_eq!(
            parse_alternative(&s, "B=nb, A=a").unwrap(),
            Alternative(vec![0, 1])
        );
        assert!(parse_alternative(&s, "A=a")
            .unwrap_err()
            .message
            .contains("no value for B"));
        let set =
            parse_alternative_set(&s, "# candidates\nA=a,B=b\n\nA=na,B=b  # second\n").unwrap();
        assert_eq!(set.len(), 2);
        let e = parse_alternative_set(&s, "A=a,B=b\nA=x,B=b\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }

    #[test]
    fn dimacs() {
        let cnf = parse_dimacs("c example\np cnf 3 2\n1 -3 0\n2 3\n-1 0\n").unwrap();
        assert_eq!(cnf.vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -3], vec![2, 3, -1]]);
        assert_eq!(parse_dimacs(&serialize_dimacs(&cnf)).unwrap(), cnf);
        let e = parse_dimacs("p cnf 2 1\n1 5 0\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
    }

    #[test]
    fn identity_preorder_dump() {
        let s = Schema::from_names(&[("A", &["a", "na"])]).unwrap();
        let p = ExplicitPreorder::identity(s).unwrap();
        assert_eq!(serialize_preorder(&p, false), "A=a >= A=a\nA=na >= A=na\n");
        assert_eq!(serialize_preorder(&p, true), "");
    }
}
