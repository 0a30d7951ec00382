use std::fmt::Write;

use crate::lptree::{Chain, Children, Link, LpNode, LpTree, Rule};
use crate::model::Schema;
use crate::textio::common::{attr_set, formula, instantiation, parse_schema};
use crate::textio::lexer::{Cursor, Diagnostic, Tok};
use crate::textio::theory::write_schema;

/// Parse a tree document: `attr` declarations followed by one root `node` block.
///
/// ```text
/// node {A}
///   rule true : A=a > A=na
///   edge A=a {
///     node {B}
///       rule true : B=b > B=nb
///   }
///   edge A=na {
///     node {B}
///       rule true : B=nb > B=b
///   }
/// ```
///
/// Structural constraints are left to [`LpTree::validate`].
pub fn parse_lptree(text: &str) -> Result<LpTree, Diagnostic> {
    let mut c = Cursor::new(text)?;
    let schema = parse_schema(&mut c)?;
    if c.at_keyword("attr") {
        return Err(Diagnostic::new(
            c.pos(),
            "attribute declarations must precede the tree",
        ));
    }
    let root = node(&mut c, &schema)?;
    if !matches!(c.peek(), Tok::Eof) {
        return Err(c.unexpected("end of input after the root node"));
    }
    Ok(LpTree::new(schema, root))
}

fn node(c: &mut Cursor, schema: &Schema) -> Result<LpNode, Diagnostic> {
    let pos = c.expect_keyword("node")?;
    let label = attr_set(c, schema)?;
    if label.is_empty() {
        return Err(Diagnostic::new(pos, "node label is empty"));
    }
    let mut rules = Vec::new();
    while c.at_keyword("rule") {
        let rpos = c.bump().1;
        let condition = formula(c, schema)?;
        c.expect(&Tok::Colon)?;
        let mut chains = vec![chain(c, schema)?];
        while c.eat(&Tok::Bar) {
            chains.push(chain(c, schema)?);
        }
        rules.push(
            Rule::new(schema, label, condition, chains)
                .map_err(|e| Diagnostic::new(rpos, e.to_string()))?,
        );
    }
    let mut single = None;
    let mut branches = Vec::new();
    while c.at_keyword("edge") {
        let epos = c.bump().1;
        if single.is_some() {
            return Err(Diagnostic::new(
                epos,
                "a node with an unlabelled edge has no other edge",
            ));
        }
        if c.eat(&Tok::Star) {
            if !branches.is_empty() {
                return Err(Diagnostic::new(
                    epos,
                    "an unlabelled edge cannot follow labelled edges",
                ));
            }
            c.expect(&Tok::LBrace)?;
            single = Some(node(c, schema)?);
        } else {
            let (edge, _) = instantiation(c, schema)?;
            c.expect(&Tok::LBrace)?;
            branches.push((edge, node(c, schema)?));
        }
        c.expect(&Tok::RBrace)?;
    }
    let children = match single {
        Some(n) => Children::Single(Box::new(n)),
        None if branches.is_empty() => Children::Leaf,
        None => Children::Branches(branches),
    };
    Ok(LpNode {
        label,
        rules,
        children,
    })
}

fn chain(c: &mut Cursor, schema: &Schema) -> Result<Chain, Diagnostic> {
    let (first, _) = instantiation(c, schema)?;
    let mut rest = Vec::new();
    loop {
        let link = if c.eat(&Tok::Gt) {
            Link::Better
        } else if c.eat(&Tok::Tilde) {
            Link::Tied
        } else {
            break;
        };
        rest.push((link, instantiation(c, schema)?.0));
    }
    Ok(Chain { first, rest })
}

/// Canonical text, two spaces of indentation per level.
pub fn serialize_lptree(tree: &LpTree) -> String {
    let mut out = String::new();
    write_schema(tree.schema(), &mut out);
    out.push('\n');
    write_node(tree.schema(), tree.root(), 0, &mut out);
    out
}

fn write_node(schema: &Schema, n: &LpNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    writeln!(out, "{pad}node {{{}}}", schema.render_set(n.label)).unwrap();
    for r in &n.rules {
        let chains: Vec<String> = r
            .chains()
            .iter()
            .map(|ch| render_chain(schema, ch))
            .collect();
        writeln!(
            out,
            "{pad}  rule {} : {}",
            r.condition().render(schema),
            chains.join(" | ")
        )
        .unwrap();
    }
    match &n.children {
        Children::Leaf => {}
        Children::Single(c) => {
            writeln!(out, "{pad}  edge * {{").unwrap();
            write_node(schema, c, depth + 2, out);
            writeln!(out, "{pad}  }}").unwrap();
        }
        Children::Branches(bs) => {
            for (edge, c) in bs {
                writeln!(out, "{pad}  edge {} {{", schema.render_instantiation(edge)).unwrap();
                write_node(schema, c, depth + 2, out);
                writeln!(out, "{pad}  }}").unwrap();
            }
        }
    }
}

fn render_chain(schema: &Schema, ch: &Chain) -> String {
    let mut s = schema.render_instantiation(&ch.first);
    for (link, inst) in &ch.rest {
        s.push_str(match link {
            Link::Better => " > ",
            Link::Tied => " ~ ",
        });
        s.push_str(&schema.render_instantiation(inst));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lptree::is_complete;

    const TWO_LEVELS: &str = "attr A : a, na
attr B : b, nb

node {A}
  rule true : A=a > A=na
  edge A=a {
    node {B}
      rule true : B=b > B=nb
  }
  edge A=na {
    node {B}
      rule true : B=nb > B=b
  }
";

    #[test]
    fn one_node() {
        let t = parse_lptree("attr A : a, na\nnode {A} rule true : A=a > A=na").unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(t.validate().is_ok());
    }

    #[test]
    fn two_levels_round_trip() {
        let t = parse_lptree(TWO_LEVELS).unwrap();
        assert!(t.validate().is_ok());
        assert!(is_complete(&t));
        assert_eq!(serialize_lptree(&t), TWO_LEVELS);
    }

    #[test]
    fn unlabelled_edges_and_conditional_rules() {
        let text = "attr A : a, na
attr B : b, nb, b3

node {A}
  rule true : A=a ~ A=na
  edge * {
    node {B}
      rule A=a : B=b > B=nb | B=b3
      rule not A=a : B=b3 ~ B=nb > B=b
  }
";
        let t = parse_lptree(text).unwrap();
        assert_eq!(t.validate(), Ok(()));
        assert_eq!(serialize_lptree(&t), text);
    }

    #[test]
    fn diagnostics() {
        let e = parse_lptree("attr A : a, na\nnode {A} rule true : A=a > B=b").unwrap_err();
        assert_eq!((e.line, e.col), (2, 28));
        let e = parse_lptree("attr A : a, na\nnode {A} rule true : A=a > A=na edge * { node {A} } edge * { node {A} }")
            .unwrap_err();
        assert!(e.message.contains("unlabelled edge"));
        let e = parse_lptree("attr A : a, na\nattr B : b, nb\nnode {A} rule true : B=b > B=nb")
            .unwrap_err();
        assert!(e.message.contains("does not instantiate exactly"), "{e}");
    }
}
