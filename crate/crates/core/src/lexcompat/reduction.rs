use crate::error::{Error, Result};
use crate::model::{
    AttrSet, Attribute, CpStatement, CpTheory, Formula, Instantiation, Schema, MAX_ATTRIBUTES,
};

/// A CNF over variables `1..=vars`; literal `i` is `x_i`, `-i` its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::Precondition(format!(
                        "clause {}: literal {l} is not over variables 1..={vars}",
                        k + 1
                    )));
                }
            }
        }
        Ok(Cnf { vars, clauses })
    }

    /// Truth value of literal `l` under `assignment` (bit `i-1` set means `x_i` true).
    fn holds(l: i64, assignment: u64) -> bool {
        let bit = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
        bit == (l > 0)
    }

    /// Satisfiability by trying every assignment.
    pub fn is_satisfiable(&self) -> bool {
        assert!(self.vars < 32, "brute force is limited to small formulas");
        (0..1u64 << self.vars).any(|a| {
            self.clauses
                .iter()
                .all(|c| c.iter().any(|&l| Cnf::holds(l, a)))
        })
    }
}

/// The theory associated with a CNF `C₁ ∧ … ∧ Cₘ`: binary attributes
/// `X1..Xn`, `Y0..Ym`; for every literal `l` of `Cₖ` the statement
/// `l | Yₖ : yₖ₋₁ ≥ ¬yₖ₋₁`, and the closing statement `⊤ | Y0 : yₘ ≥ ¬yₘ`.
/// With no clause the closing statement has no free part.
///
/// `Xi` has values `xi`, `nxi` and `Yk` has `yk`, `nyk`.
pub fn gen_3sat_reduction(cnf: &Cnf) -> Result<CpTheory> {
    let (n, m) = (cnf.vars, cnf.clauses.len());
    if n + m + 1 > MAX_ATTRIBUTES {
        return Err(Error::Unsupported(format!(
            "{} attributes needed, at most {MAX_ATTRIBUTES} supported",
            n + m + 1
        )));
    }
    let mut attrs = Vec::with_capacity(n + m + 1);
    for i in 1..=n {
        attrs.push(Attribute::new(
            format!("X{i}"),
            [format!("x{i}"), format!("nx{i}")],
        ));
    }
    for k in 0..=m {
        attrs.push(Attribute::new(
            format!("Y{k}"),
            [format!("y{k}"), format!("ny{k}")],
        ));
    }
    let schema = Schema::new(attrs)?;
    let y = |k: usize| n + k;
    let swap = |k: usize| {
        (
            Instantiation::new([(y(k), 0)]).expect("one binding"),
            Instantiation::new([(y(k), 1)]).expect("one binding"),
        )
    };
    let mut statements = Vec::new();
    for (idx, clause) in cnf.clauses.iter().enumerate() {
        let k = idx + 1;
        let (better, worse) = swap(k - 1);
        for &l in clause {
            let x = l.unsigned_abs() as usize - 1;
            let cond = Formula::atom(x, if l > 0 { 0 } else { 1 });
            statements.push(CpStatement::new(
                &schema,
                cond,
                AttrSet::singleton(y(k)),
                better.clone(),
                worse.clone(),
            )?);
        }
    }
    let (better, worse) = swap(m);
    let free = if m == 0 {
        AttrSet::empty()
    } else {
        AttrSet::singleton(y(0))
    };
    statements.push(CpStatement::new(
        &schema,
        Formula::True,
        free,
        better,
        worse,
    )?);
    CpTheory::new(schema, statements)
}
