use std::fs;
use std::path::Path;

use anyhow::Context;
use cpref::lptree::{lptree_to_statements, LpTree};
use cpref::model::{Alternative, CpTheory, Schema};
use cpref::textio::{self, Diagnostic};

use crate::Failure;

/// A parsed input document.
pub enum Doc {
    Theory(CpTheory),
    Tree(LpTree),
}

impl Doc {
    pub fn schema(&self) -> &Schema {
        match self {
            Doc::Theory(t) => t.schema(),
            Doc::Tree(t) => t.schema(),
        }
    }

    /// Statements for commands that only work on theories; trees are translated.
    pub fn into_theory(self) -> Result<CpTheory, Failure> {
        match self {
            Doc::Theory(t) => Ok(t),
            Doc::Tree(t) => lptree_to_statements(&t).map_err(Failure::from),
        }
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::input)
}

fn located(path: &Path, d: Diagnostic) -> Failure {
    Failure::located(anyhow::anyhow!("{}:{d}", path.display()))
}

/// `.lpt` files hold trees; anything else is read as a theory.
pub fn load(path: &Path) -> Result<Doc, Failure> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "lpt") {
        let tree = textio::parse_lptree(&text).map_err(|d| located(path, d))?;
        if let Err(v) = tree.validate() {
            let lines: Vec<String> = v
                .iter()
                .map(|v| format!("{}: {v}", path.display()))
                .collect();
            return Err(Failure::located(anyhow::anyhow!(lines.join("\n"))));
        }
        Ok(Doc::Tree(tree))
    } else {
        textio::parse_theory(&text)
            .map(Doc::Theory)
            .map_err(|d| located(path, d))
    }
}

pub fn alternative(schema: &Schema, text: &str) -> Result<Alternative, Failure> {
    textio::parse_alternative(schema, text).map_err(|d| {
        Failure::input(anyhow::anyhow!(
            "alternative `{text}`: column {}: {}",
            d.col,
            d.message
        ))
    })
}

pub fn alternative_set(schema: &Schema, path: &Path) -> Result<Vec<Alternative>, Failure> {
    let text = read(path)?;
    textio::parse_alternative_set(schema, &text).map_err(|d| located(path, d))
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::input)
}
