use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::affine::{AffineForm, Assignment};
use super::linalg::{self, Matrix};
use super::Rational;
use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
}

/// Comparison used by a claim: `≤` on the closed polytope, or strict `<`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClaimRelation {
    Le,
    Lt,
}

impl ClaimRelation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            ClaimRelation::Le => lhs <= rhs,
            ClaimRelation::Lt => lhs < rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ClaimRelation::Le => "<=",
            ClaimRelation::Lt => "<",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub form: AffineForm,
    pub relation: Relation,
    pub bound: Rational,
}

impl Constraint {
    pub fn holds_at(&self, at: &Assignment) -> Result<bool> {
        let v = self.form.eval(at)?;
        Ok(match self.relation {
            Relation::Le => v <= self.bound,
            Relation::Ge => v >= self.bound,
        })
    }

    /// `(row, rhs)` with the constraint rewritten as `row·x ≤ rhs`.
    fn as_le_row(&self, vars: &[String]) -> (Vec<Rational>, Rational) {
        let sign = match self.relation {
            Relation::Le => Rational::one(),
            Relation::Ge => Rational::integer(-1),
        };
        let row = vars
            .iter()
            .map(|v| &sign * self.form.coefficient(v))
            .collect();
        (row, &sign * (&self.bound - self.form.constant_term()))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        };
        write!(f, "{} {op} {}", self.form, self.bound)
    }
}

/// Polytope `{x : constraints}` in at most three named variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polytope {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
}

/// Outcome of checking one affine claim over a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Largest value of the claim over the polytope.
    pub max: Rational,
    /// A vertex attaining `max`; the counterexample when `holds` is false.
    pub witness: Assignment,
}

impl Polytope {
    pub fn new<S: AsRef<str>>(variables: &[S]) -> Result<Self> {
        if variables.len() > MAX_DIMENSION {
            return Err(Error::TooManyVariables(variables.len()));
        }
        Ok(Polytope {
            variables: variables.iter().map(|s| s.as_ref().to_string()).collect(),
            constraints: Vec::new(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constrain(&mut self, form: AffineForm, relation: Relation, bound: Rational) -> Result<()> {
        self.check_declared(&form)?;
        self.constraints.push(Constraint {
            form,
            relation,
            bound,
        });
        Ok(())
    }

    pub fn with(mut self, form: AffineForm, relation: Relation, bound: Rational) -> Result<Self> {
        self.constrain(form, relation, bound)?;
        Ok(self)
    }

    /// `lo ≤ var ≤ hi`.
    pub fn with_range(self, var: &str, lo: Rational, hi: Rational) -> Result<Self> {
        self.with(AffineForm::var(var), Relation::Ge, lo)?
            .with(AffineForm::var(var), Relation::Le, hi)
    }

    fn check_declared(&self, form: &AffineForm) -> Result<()> {
        match form.variables().find(|v| !self.variables.iter().any(|d| d == v)) {
            Some(v) => Err(Error::UnknownVariable(v.to_string())),
            None => Ok(()),
        }
    }

    fn constraint_strings(&self) -> Vec<String> {
        self.constraints.iter().map(|c| c.to_string()).collect()
    }

    fn rows(&self) -> (Matrix, Vec<Rational>) {
        self.constraints
            .iter()
            .map(|c| c.as_le_row(&self.variables))
            .unzip()
    }

    fn assignment(&self, x: &[Rational]) -> Assignment {
        self.variables.iter().cloned().zip(x.iter().cloned()).collect()
    }

    /// All vertices of a bounded nonempty polytope, in a deterministic order.
    pub fn vertices(&self) -> Result<Vec<Assignment>> {
        let n = self.variables.len();
        let (a, b) = self.rows();
        if n == 0 {
            if b.iter().all(|x| !x.is_negative()) {
                return Ok(alloc::vec![Assignment::new()]);
            }
            return Err(Error::EmptyPolytope {
                constraints: self.constraint_strings(),
            });
        }
        let pivots = linalg::rref(&a).1;
        if pivots.len() < n {
            // Feasibility is decided on the pivot coordinates alone.
            let sub: Matrix = a
                .iter()
                .map(|row| pivots.iter().map(|&p| row[p].clone()).collect())
                .collect();
            if basic_solutions(&sub, &b).is_empty() {
                return Err(self.empty());
            }
            let dir = linalg::nullspace(&a, n).swap_remove(0);
            return Err(self.unbounded(&dir));
        }
        let verts = basic_solutions(&a, &b);
        if verts.is_empty() {
            return Err(self.empty());
        }
        if let Some(dir) = recession_ray(&a) {
            return Err(self.unbounded(&dir));
        }
        Ok(verts.iter().map(|x| self.assignment(x)).collect())
    }

    fn empty(&self) -> Error {
        Error::EmptyPolytope {
            constraints: self.constraint_strings(),
        }
    }

    fn unbounded(&self, dir: &[Rational]) -> Error {
        Error::UnboundedPolytope {
            direction: self.variables.iter().cloned().zip(dir.iter().cloned()).collect(),
            constraints: self.constraint_strings(),
        }
    }

    /// Maximum of `form` and a vertex attaining it.
    pub fn maximize(&self, form: &AffineForm) -> Result<(Rational, Assignment)> {
        self.check_declared(form)?;
        let mut best: Option<(Rational, Assignment)> = None;
        for v in self.vertices()? {
            let val = form.eval(&v)?;
            if best.as_ref().is_none_or(|(b, _)| &val > b) {
                best = Some((val, v));
            }
        }
        Ok(best.expect("vertices nonempty"))
    }

    pub fn check(&self, claim: &AffineForm, relation: ClaimRelation, bound: &Rational) -> Result<Verdict> {
        let (max, witness) = self.maximize(claim)?;
        Ok(Verdict {
            holds: relation.holds(&max, bound),
            max,
            witness,
        })
    }

    pub fn contains(&self, at: &Assignment) -> Result<bool> {
        for c in &self.constraints {
            if !c.holds_at(at)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.constraint_strings().join(", "))
    }
}

/// Feasible points where `n` linearly independent constraints are tight.
fn basic_solutions(a: &Matrix, b: &[Rational]) -> Vec<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for subset in combinations(a.len(), n) {
        let m: Matrix = subset.iter().map(|&i| a[i].clone()).collect();
        let rhs: Vec<Rational> = subset.iter().map(|&i| b[i].clone()).collect();
        let Some(x) = linalg::solve(&m, &rhs) else {
            continue;
        };
        let feasible = a.iter().zip(b).all(|(row, bi)| dot(row, &x) <= *bi);
        if feasible && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// A nonzero `d` with `a·d ≤ 0`, assuming `a` has full column rank.
fn recession_ray(a: &Matrix) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    for subset in combinations(a.len(), n - 1) {
        let m: Matrix = subset.iter().map(|&i| a[i].clone()).collect();
        let ns = linalg::nullspace(&m, n);
        if ns.len() != 1 {
            continue;
        }
        for sign in [1, -1] {
            let d: Vec<Rational> = ns[0].iter().map(|x| x * Rational::integer(sign)).collect();
            if a.iter().all(|row| !dot(row, &d).is_positive()) {
                return Some(d);
            }
        }
    }
    None
}

fn dot(row: &[Rational], x: &[Rational]) -> Rational {
    row.iter().zip(x).map(|(r, v)| r * v).sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// True iff `claim relation bound` holds on all of `p`.
pub fn verify_affine(claim: &AffineForm, p: &Polytope, bound: &Rational, relation: ClaimRelation) -> Result<bool> {
    Ok(p.check(claim, relation, bound)?.holds)
}

/// Human-readable rendering of a vertex, e.g. `a=2/5, m=1/7`.
pub fn render_assignment(at: &Assignment) -> String {
    at.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}
