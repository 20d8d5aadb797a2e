//! Surface models: quotient singularities, named curves and the exact
//! intersection table.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::linalg::{self, Matrix};
use crate::exactnum::Rational;
use crate::wps::{self, Quintuple};

/// Cyclic quotient singularity `1/n(a,b)`; `n = 1` is a smooth point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientSingularity {
    pub label: String,
    pub n: u64,
    pub a: u64,
    pub b: u64,
}

impl QuotientSingularity {
    pub fn new(label: &str, n: u64, a: u64, b: u64) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidSingularity(format!("{label} 1/{n}({a},{b}): {why}")));
        if n == 0 {
            return bad("index must be positive");
        }
        if n > 1 && (a == 0 || b == 0 || a >= n || b >= n) {
            return bad("local weights must lie in (0, n)");
        }
        if n.gcd(&a) != 1 || n.gcd(&b) != 1 || a.gcd(&b) != 1 {
            return bad("weights must be coprime to the index and to each other");
        }
        Ok(QuotientSingularity {
            label: label.to_string(),
            n,
            a,
            b,
        })
    }

    /// Type `1/n(wa mod n, wb mod n)` for arbitrary integer weights.
    pub fn from_weights(label: &str, n: u64, wa: i64, wb: i64) -> Result<Self> {
        let r = |w: i64| w.rem_euclid(n as i64) as u64;
        if n == 1 {
            return QuotientSingularity::new(label, 1, 1, 1);
        }
        let (a, b) = (r(wa), r(wb));
        if a.gcd(&b) != 1 {
            if let Some(inv) = mod_inverse(a as i64, n as i64) {
                let t = (b as i64 * inv).rem_euclid(n as i64) as u64;
                return QuotientSingularity::new(label, n, 1, t);
            }
        }
        QuotientSingularity::new(label, n, a, b)
    }

    pub fn is_smooth(&self) -> bool {
        self.n == 1
    }

    /// Invariant of the type under rescaling by a unit and swapping the weights.
    pub fn canonical_key(&self) -> (u64, u64) {
        if self.n == 1 {
            return (1, 0);
        }
        let n = self.n as i64;
        let inv = |x: u64| mod_inverse(x as i64, n).expect("coprime weight");
        let r1 = (self.b as i64 * inv(self.a)).rem_euclid(n) as u64;
        let r2 = (self.a as i64 * inv(self.b)).rem_euclid(n) as u64;
        (self.n, r1.min(r2))
    }

    pub fn same_type(&self, other: &QuotientSingularity) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    pub fn type_string(&self) -> String {
        format!("1/{}({},{})", self.n, self.a, self.b)
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label, self.type_string())
    }
}

pub fn mod_inverse(x: i64, n: i64) -> Option<i64> {
    let e = x.rem_euclid(n).extended_gcd(&n);
    (e.gcd == 1).then(|| e.x.rem_euclid(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub label: String,
    /// `m` when the curve is cut out by a section of `O(m)`.
    pub hyperplane_degree: Option<u64>,
    /// Indices `(k, l)` with the curve equal to `{x_k = x_l = 0}`.
    pub coordinate_pair: Option<(usize, usize)>,
    /// Points where the pair `(S, C)` is plt, with their indices.
    pub plt_points: Vec<(String, u64)>,
    /// `μ` with `C ~ μ(-K)`.
    pub mu: Option<Rational>,
    /// Points where the curve itself is singular; adjunction is never applied.
    pub singular_at: Vec<String>,
    pub rational: bool,
}

impl CurveClass {
    pub fn hyperplane(label: &str, m: u64) -> Self {
        CurveClass {
            label: label.to_string(),
            hyperplane_degree: Some(m),
            coordinate_pair: None,
            plt_points: Vec::new(),
            mu: None,
            singular_at: Vec::new(),
            rational: false,
        }
    }

    pub fn coordinate(label: &str, pair: (usize, usize), plt_points: Vec<(String, u64)>) -> Self {
        CurveClass {
            label: label.to_string(),
            hyperplane_degree: None,
            coordinate_pair: Some(pair),
            plt_points,
            mu: None,
            singular_at: Vec::new(),
            rational: true,
        }
    }

    /// A curve known only through relations.
    pub fn residual(label: &str, singular_at: Vec<String>) -> Self {
        CurveClass {
            label: label.to_string(),
            hyperplane_degree: None,
            coordinate_pair: None,
            plt_points: Vec::new(),
            mu: None,
            singular_at,
            rational: false,
        }
    }

    pub fn with_mu(mut self, mu: Rational) -> Self {
        self.mu = Some(mu);
        self
    }

    /// Whether self-intersection may come from orbifold adjunction.
    pub fn adjunction_applies(&self) -> bool {
        self.rational && self.coordinate_pair.is_some() && self.singular_at.is_empty()
    }

    /// The index `j` when the curve is the full section `{x_j = 0}`.
    pub fn coordinate_section(&self, q: &Quintuple) -> Option<usize> {
        let m = self.hyperplane_degree?;
        let w = q.weights();
        let j = w.iter().position(|&a| a == m)?;
        (w.iter().filter(|&&a| a == m).count() == 1).then_some(j)
    }
}

/// `lhs ≡ Σ rhs` numerically, e.g. `C_x = L_xz + R_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRelation {
    pub lhs: String,
    pub rhs: Vec<String>,
}

/// How a table entry was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntrySource {
    Ambient,
    Restriction,
    Adjunction,
    Relations,
}

impl fmt::Display for EntrySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntrySource::Ambient => "ambient degree",
            EntrySource::Restriction => "restriction degree",
            EntrySource::Adjunction => "orbifold adjunction",
            EntrySource::Relations => "linear relations",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    basis: Vec<String>,
    entries: Matrix,
    sources: Vec<Vec<EntrySource>>,
}

impl IntersectionTable {
    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn get(&self, c1: &str, c2: &str) -> Result<&Rational> {
        Ok(&self.entries[self.index(c1)?][self.index(c2)?])
    }

    pub fn source(&self, c1: &str, c2: &str) -> Result<&EntrySource> {
        Ok(&self.sources[self.index(c1)?][self.index(c2)?])
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }
}

/// `O(m1)·O(m2)` on a hypersurface of the given type.
pub fn ambient_pairing(m1: i64, m2: i64, q: &Quintuple) -> Rational {
    Rational::frac(m1 * m2 * q.degree() as i64, q.weight_product() as i64)
}

/// Degree of `O(m)` on the coordinate curve `{x_k = x_l = 0}`: `m/(a_i a_j)`.
pub fn coordinate_restriction_degree(m: i64, c: &CurveClass, q: &Quintuple) -> Result<Rational> {
    let (k, l) = c
        .coordinate_pair
        .ok_or_else(|| Error::NotCoordinateCurve(c.label.clone()))?;
    let w = q.weights();
    let surviving: i64 = (0..4).filter(|&i| i != k && i != l).map(|i| w[i] as i64).product();
    Ok(Rational::frac(m, surviving))
}

/// `C² = -2 + Σ (n-1)/n - K·C` for a rational curve with plt singularities.
pub fn selfint_by_adjunction(c: &CurveClass, k_dot_c: &Rational) -> Result<Rational> {
    if !c.rational {
        return Err(Error::AdjunctionUndefined(format!("{} is not a rational curve", c.label)));
    }
    if !c.singular_at.is_empty() {
        return Err(Error::AdjunctionUndefined(format!(
            "{} is singular at {}",
            c.label,
            c.singular_at.join(", ")
        )));
    }
    let mut s = Rational::integer(-2);
    for (_, n) in &c.plt_points {
        if *n == 0 {
            return Err(Error::AdjunctionUndefined(format!("{}: zero index", c.label)));
        }
        s += Rational::frac(*n as i64 - 1, *n as i64);
    }
    Ok(s - k_dot_c)
}

/// Table over `curves`, completed through `relations`.
pub fn complete_table(q: &Quintuple, curves: &[CurveClass], relations: &[CurveRelation]) -> Result<IntersectionTable> {
    let n = curves.len();
    let labels: Vec<String> = curves.iter().map(|c| c.label.clone()).collect();
    let idx = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::UnknownCurve(l.to_string()))
    };
    let amp = wps::amplitude(q);
    let mut known: BTreeMap<(usize, usize), (Rational, EntrySource)> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let (ci, cj) = (&curves[i], &curves[j]);
            let entry = match (ci.hyperplane_degree, cj.hyperplane_degree) {
                (Some(m1), Some(m2)) => Some((ambient_pairing(m1 as i64, m2 as i64, q), EntrySource::Ambient)),
                (Some(m), None) if cj.coordinate_pair.is_some() => {
                    Some((coordinate_restriction_degree(m as i64, cj, q)?, EntrySource::Restriction))
                }
                (None, Some(m)) if ci.coordinate_pair.is_some() => {
                    Some((coordinate_restriction_degree(m as i64, ci, q)?, EntrySource::Restriction))
                }
                _ if i == j && ci.adjunction_applies() => {
                    let k_dot_c = coordinate_restriction_degree(-amp, ci, q)?;
                    Some((selfint_by_adjunction(ci, &k_dot_c)?, EntrySource::Adjunction))
                }
                _ => None,
            };
            if let Some(e) = entry {
                known.insert((i, j), e);
            }
        }
    }
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|p| !known.contains_key(p))
        .collect();
    let key = |i: usize, j: usize| if i <= j { (i, j) } else { (j, i) };
    let entry_name = |(i, j): (usize, usize)| format!("{}·{}", labels[i], labels[j]);

    // Each relation `lhs - Σ rhs ≡ 0` paired with every basis curve gives one equation.
    let u = unknowns.len();
    let mut rows: Matrix = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    for rel in relations {
        let mut combo: Vec<(usize, Rational)> = vec![(idx(&rel.lhs)?, Rational::one())];
        for r in &rel.rhs {
            combo.push((idx(r)?, Rational::integer(-1)));
        }
        for (x, label) in labels.iter().enumerate() {
            let mut row = vec![Rational::zero(); u];
            let mut constant = Rational::zero();
            for (c, coeff) in &combo {
                let k = key(*c, x);
                match known.get(&k) {
                    Some((v, _)) => constant += coeff * v,
                    None => {
                        let pos = unknowns.iter().position(|p| *p == k).unwrap();
                        row[pos] += coeff;
                    }
                }
            }
            rows.push(row);
            rhs.push(-constant);
            tags.push(format!("({} - {})·{label}", rel.lhs, rel.rhs.join(" - ")));
        }
    }
    let mut solved: Vec<Rational> = Vec::new();
    if u > 0 {
        let aug: Matrix = rows
            .iter()
            .zip(&rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                r.push(b.clone());
                r
            })
            .collect();
        if aug.is_empty() {
            return Err(Error::Underdetermined(entry_name(unknowns[0])));
        }
        let (red, pivots) = linalg::rref(&aug);
        if let Some(row) = pivots.iter().position(|&p| p == u) {
            let _ = row;
            let bad = red
                .iter()
                .zip(&tags)
                .find(|(r, _)| r[..u].iter().all(Rational::is_zero) && !r[u].is_zero());
            let at = bad.map_or_else(|| "relations".to_string(), |(_, t)| t.clone());
            return Err(Error::Inconsistent(at));
        }
        if let Some(free) = (0..u).find(|c| !pivots.contains(c)) {
            return Err(Error::Underdetermined(entry_name(unknowns[free])));
        }
        solved = (0..u).map(|c| red[c][u].clone()).collect();
    } else {
        // Fully known table: relations must still hold.
        for (r, t) in rhs.iter().zip(&tags) {
            if !r.is_zero() {
                return Err(Error::Inconsistent(t.clone()));
            }
        }
    }
    let mut entries = vec![vec![Rational::zero(); n]; n];
    let mut sources = vec![vec![EntrySource::Relations; n]; n];
    for (&(i, j), (v, s)) in &known {
        entries[i][j] = v.clone();
        entries[j][i] = v.clone();
        sources[i][j] = s.clone();
        sources[j][i] = s.clone();
    }
    for (&(i, j), v) in unknowns.iter().zip(solved) {
        entries[i][j] = v.clone();
        entries[j][i] = v;
    }
    Ok(IntersectionTable {
        basis: labels,
        entries,
        sources,
    })
}

/// A declared singular point, optionally located by its nonzero-coordinate pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub singularity: QuotientSingularity,
    /// `point[i] = true` iff `x_i ≠ 0` at the point.
    pub point: Option<[bool; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub name: String,
    pub quintuple: Quintuple,
    pub monomials: Vec<[u32; 4]>,
    pub singularities: Vec<SingularPoint>,
    pub curves: Vec<CurveClass>,
    pub relations: Vec<CurveRelation>,
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    spec: SurfaceSpec,
    table: IntersectionTable,
}

pub const COORDINATE_NAMES: [&str; 4] = ["x", "y", "z", "t"];

/// Local picture of `S` at a coordinate point `O_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChart {
    pub k: usize,
    /// Variable solved for through a monomial `x_k^e x_v`.
    pub eliminated: usize,
    /// The two local coordinates, in index order.
    pub local: [usize; 2],
    pub singularity: QuotientSingularity,
}

impl SurfaceModel {
    pub fn build(spec: SurfaceSpec) -> Result<Self> {
        let q = spec.quintuple;
        let amp = wps::amplitude(&q);
        if amp <= 0 {
            return Err(Error::NotFano(amp));
        }
        if !spec.alpha.is_positive() || spec.alpha > 1 {
            return Err(Error::InvalidSurface(format!("alpha {} outside (0, 1]", spec.alpha)));
        }
        for m in &spec.monomials {
            let deg: u64 = m.iter().zip(q.weights()).map(|(&e, w)| e as u64 * w).sum();
            if deg != q.degree() {
                return Err(Error::InvalidSurface(format!(
                    "monomial {} has degree {deg}, expected {}",
                    monomial_string(m),
                    q.degree()
                )));
            }
        }
        let mut seen: Vec<&str> = Vec::new();
        for l in spec
            .singularities
            .iter()
            .map(|s| s.singularity.label.as_str())
            .chain(spec.curves.iter().map(|c| c.label.as_str()))
        {
            if seen.contains(&l) {
                return Err(Error::InvalidSurface(format!("duplicate label {l:?}")));
            }
            seen.push(l);
        }
        let sing = |l: &str| {
            spec.singularities
                .iter()
                .find(|s| s.singularity.label == l)
                .ok_or_else(|| Error::UnknownSingularity(l.to_string()))
        };
        for c in &spec.curves {
            for (l, n) in &c.plt_points {
                let s = sing(l)?;
                if s.singularity.n != *n {
                    return Err(Error::InvalidSurface(format!(
                        "{}: plt index {n} at {l} differs from its index {}",
                        c.label, s.singularity.n
                    )));
                }
            }
            for l in &c.singular_at {
                sing(l)?;
            }
            if let Some((k, l)) = c.coordinate_pair {
                if k >= 4 || l >= 4 || k == l {
                    return Err(Error::InvalidSurface(format!("{}: bad coordinate pair", c.label)));
                }
                if let Some(m) = spec.monomials.iter().find(|m| m[k] == 0 && m[l] == 0) {
                    return Err(Error::InvalidSurface(format!(
                        "{} is not contained in the surface: monomial {} survives",
                        c.label,
                        monomial_string(m)
                    )));
                }
            }
            if let Some(mu) = &c.mu {
                if !mu.is_positive() {
                    return Err(Error::InvalidSurface(format!("{}: mu must be positive", c.label)));
                }
            }
        }
        let model_probe = SurfaceModel {
            table: IntersectionTable {
                basis: Vec::new(),
                entries: Vec::new(),
                sources: Vec::new(),
            },
            spec,
        };
        model_probe.check_singularities()?;
        let spec = model_probe.spec;
        let table = complete_table(&q, &spec.curves, &spec.relations)?;
        let model = SurfaceModel { spec, table };
        for c in &model.spec.curves {
            if let (Some(mu), Some(_)) = (&c.mu, c.hyperplane_degree) {
                let expect = model.hyperplane_mu(c).expect("hyperplane curve");
                if *mu != expect {
                    return Err(Error::InvalidSurface(format!(
                        "{}: declared mu {mu} but O(m) gives {expect}",
                        c.label
                    )));
                }
            }
        }
        Ok(model)
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn quintuple(&self) -> &Quintuple {
        &self.spec.quintuple
    }

    pub fn amplitude(&self) -> i64 {
        wps::amplitude(&self.spec.quintuple)
    }

    pub fn alpha(&self) -> &Rational {
        &self.spec.alpha
    }

    pub fn table(&self) -> &IntersectionTable {
        &self.table
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.spec.curves
    }

    pub fn curve(&self, label: &str) -> Result<&CurveClass> {
        self.spec
            .curves
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn singularities(&self) -> impl Iterator<Item = &QuotientSingularity> {
        self.spec.singularities.iter().map(|s| &s.singularity)
    }

    pub fn singularity(&self, label: &str) -> Result<&QuotientSingularity> {
        self.singularities()
            .find(|s| s.label == label)
            .ok_or_else(|| Error::UnknownSingularity(label.to_string()))
    }

    /// Curves that never appear as the left side of a relation.
    pub fn irreducible_curves(&self) -> Vec<&CurveClass> {
        self.spec
            .curves
            .iter()
            .filter(|c| !self.spec.relations.iter().any(|r| r.lhs == c.label))
            .collect()
    }

    /// `m/I` for a curve cut out by `O(m)`.
    pub fn hyperplane_mu(&self, c: &CurveClass) -> Option<Rational> {
        c.hyperplane_degree
            .map(|m| Rational::frac(m as i64, self.amplitude()))
    }

    /// First curve cut out by a hyperplane section, used to express `-K`.
    pub fn anticanonical_carrier(&self) -> Result<&CurveClass> {
        self.spec
            .curves
            .iter()
            .find(|c| c.hyperplane_degree.is_some())
            .ok_or_else(|| Error::InvalidSurface(format!("{} has no hyperplane curve", self.spec.name)))
    }

    /// `-K·C`.
    pub fn anticanonical_degree(&self, label: &str) -> Result<Rational> {
        let carrier = self.anticanonical_carrier()?;
        let m = carrier.hyperplane_degree.unwrap() as i64;
        Ok(Rational::frac(self.amplitude(), m) * self.table.get(&carrier.label, label)?)
    }

    /// `O(m)·C` for any basis curve.
    pub fn hyperplane_degree_on(&self, m: i64, label: &str) -> Result<Rational> {
        Ok(self.anticanonical_degree(label)? * Rational::frac(m, self.amplitude()))
    }

    /// Local chart at `O_k`, or `None` when `O_k` is not on the surface.
    pub fn coordinate_chart(&self, k: usize) -> Result<Option<CoordinateChart>> {
        let w = self.spec.quintuple.weights();
        let pure = |m: &[u32; 4]| (0..4).all(|i| i == k || m[i] == 0);
        if self.spec.monomials.iter().any(pure) {
            return Ok(None);
        }
        let linear = self.spec.monomials.iter().find_map(|m| {
            let others: Vec<usize> = (0..4).filter(|&i| i != k && m[i] > 0).collect();
            (others.len() == 1 && m[others[0]] == 1).then_some(others[0])
        });
        let Some(v) = linear else {
            return Err(Error::InvalidSurface(format!(
                "{} is not quasismooth at O_{}",
                self.spec.name, COORDINATE_NAMES[k]
            )));
        };
        let local: Vec<usize> = (0..4).filter(|&i| i != k && i != v).collect();
        let singularity = QuotientSingularity::from_weights(
            &format!("O_{}", COORDINATE_NAMES[k]),
            w[k],
            w[local[0]] as i64,
            w[local[1]] as i64,
        )?;
        Ok(Some(CoordinateChart {
            k,
            eliminated: v,
            local: [local[0], local[1]],
            singularity,
        }))
    }

    /// Type forced by the weights at a point with the given nonzero pattern.
    fn expected_type(&self, label: &str, pattern: [bool; 4]) -> Result<QuotientSingularity> {
        let w = self.spec.quintuple.weights();
        let nonzero: Vec<usize> = (0..4).filter(|&i| pattern[i]).collect();
        let zero: Vec<usize> = (0..4).filter(|&i| !pattern[i]).collect();
        match nonzero.len() {
            1 => {
                let k = nonzero[0];
                let chart = self.coordinate_chart(k)?.ok_or_else(|| {
                    Error::InvalidSurface(format!("{label}: O_{} is not on the surface", COORDINATE_NAMES[k]))
                })?;
                let mut s = chart.singularity;
                s.label = label.to_string();
                Ok(s)
            }
            2 => {
                let n = w[nonzero[0]].gcd(&w[nonzero[1]]);
                QuotientSingularity::from_weights(label, n, w[zero[0]] as i64, w[zero[1]] as i64)
            }
            _ => Err(Error::InvalidSurface(format!(
                "{label}: point pattern must have one or two nonzero coordinates"
            ))),
        }
    }

    fn check_singularities(&self) -> Result<()> {
        for sp in &self.spec.singularities {
            let Some(pattern) = sp.point else { continue };
            let expected = self.expected_type(&sp.singularity.label, pattern)?;
            if !expected.same_type(&sp.singularity) || expected.n != sp.singularity.n {
                return Err(Error::SingularityMismatch {
                    label: sp.singularity.label.clone(),
                    declared: sp.singularity.type_string(),
                    expected: expected.type_string(),
                });
            }
        }
        let w = self.spec.quintuple.weights();
        for k in 0..4 {
            if w[k] == 1 {
                continue;
            }
            let Some(chart) = self.coordinate_chart(k)? else { continue };
            let mut pattern = [false; 4];
            pattern[k] = true;
            if !self.spec.singularities.iter().any(|s| s.point == Some(pattern)) {
                return Err(Error::InvalidSurface(format!(
                    "singular point {} is not declared",
                    chart.singularity
                )));
            }
        }
        Ok(())
    }

    /// Chart at the declared coordinate point `label`.
    pub fn chart_at(&self, label: &str) -> Result<CoordinateChart> {
        let sp = self
            .spec
            .singularities
            .iter()
            .find(|s| s.singularity.label == label)
            .ok_or_else(|| Error::UnknownSingularity(label.to_string()))?;
        let k = match sp.point {
            Some(p) if p.iter().filter(|&&b| b).count() == 1 => p.iter().position(|&b| b).unwrap(),
            _ => {
                return Err(Error::InvalidArgument(format!("{label} is not a coordinate point")));
            }
        };
        let mut chart = self
            .coordinate_chart(k)?
            .ok_or_else(|| Error::UnknownSingularity(label.to_string()))?;
        chart.singularity = sp.singularity.clone();
        Ok(chart)
    }

    /// Orbifold weights of the two local coordinates at a coordinate point,
    /// matched to the declared type `1/n(a,b)`.
    pub fn local_weights(&self, chart: &CoordinateChart) -> Result<[(usize, u64); 2]> {
        let s = &chart.singularity;
        let n = s.n as i64;
        let w = self.spec.quintuple.weights();
        let (u0, u1) = (w[chart.local[0]] as i64, w[chart.local[1]] as i64);
        for (first, second) in [(chart.local[0], chart.local[1]), (chart.local[1], chart.local[0])] {
            let (wf, ws) = if first == chart.local[0] { (u0, u1) } else { (u1, u0) };
            let Some(inv) = mod_inverse(wf, n) else { continue };
            let unit = (s.a as i64 * inv).rem_euclid(n);
            if (ws * unit - s.b as i64).rem_euclid(n) == 0 {
                return Ok([(first, s.a), (second, s.b)]);
            }
        }
        Err(Error::SingularityMismatch {
            label: s.label.clone(),
            declared: s.type_string(),
            expected: chart.singularity.type_string(),
        })
    }
}

pub fn monomial_string(m: &[u32; 4]) -> String {
    let mut s = String::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(COORDINATE_NAMES[i]),
            _ => s.push_str(&format!("{}^{e}", COORDINATE_NAMES[i])),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn singularity_types() {
        let s = QuotientSingularity::new("O_t", 7, 3, 5).unwrap();
        assert!(s.same_type(&QuotientSingularity::new("p", 7, 5, 3).unwrap()));
        assert!(s.same_type(&QuotientSingularity::new("p", 7, 1, 4).unwrap()));
        assert!(!s.same_type(&QuotientSingularity::new("p", 7, 2, 5).unwrap()));
        assert!(QuotientSingularity::new("p", 7, 7, 1).is_err());
        assert!(QuotientSingularity::new("p", 10, 5, 3).is_err());
        let o = QuotientSingularity::from_weights("O_z", 19, 15, 32).unwrap();
        assert!(o.same_type(&QuotientSingularity::new("p", 19, 2, 3).unwrap()));
    }

    #[test]
    fn adjunction() {
        let smooth = CurveClass::coordinate("C", (0, 1), vec![]);
        assert_eq!(selfint_by_adjunction(&smooth, &q!(-2)).unwrap(), q!(0));
        let l = CurveClass::coordinate("L_xz", (0, 2), vec![("O_y".into(), 10), ("O_t".into(), 19)]);
        assert_eq!(selfint_by_adjunction(&l, &q!(-3, 95)).unwrap(), q!(-23, 190));
        let r = CurveClass::residual("R_x", vec!["O_t".into()]);
        assert!(selfint_by_adjunction(&r, &q!(-1)).is_err());
    }

    #[test]
    fn pairings() {
        let s45 = Quintuple::new([7, 10, 15, 19], 45).unwrap();
        let l = CurveClass::coordinate("L_xz", (0, 2), vec![]);
        assert_eq!(coordinate_restriction_degree(6, &l, &s45).unwrap(), q!(3, 95));
        assert_eq!(coordinate_restriction_degree(0, &l, &s45).unwrap(), q!(0));
        assert!(coordinate_restriction_degree(6, &CurveClass::hyperplane("C", 7), &s45).is_err());
        let s64 = Quintuple::new([7, 15, 19, 32], 64).unwrap();
        assert_eq!(ambient_pairing(7, 9, &s64), q!(6, 95));
        assert_eq!(ambient_pairing(0, 5, &s64), q!(0));
    }

    #[test]
    fn table_with_one_curve() {
        let s15 = Quintuple::new([1, 3, 5, 7], 15).unwrap();
        let t = complete_table(&s15, &[CurveClass::hyperplane("C_x", 1)], &[]).unwrap();
        assert_eq!(t.get("C_x", "C_x").unwrap(), &ambient_pairing(1, 1, &s15));
        assert_eq!(t.source("C_x", "C_x").unwrap(), &EntrySource::Ambient);
    }

    #[test]
    fn underdetermined_and_inconsistent() {
        let s45 = Quintuple::new([7, 10, 15, 19], 45).unwrap();
        let curves = [
            CurveClass::hyperplane("C_x", 7),
            CurveClass::residual("R_x", vec![]),
        ];
        match complete_table(&s45, &curves, &[]) {
            Err(Error::Underdetermined(e)) => assert_eq!(e, "C_x·R_x"),
            other => panic!("{other:?}"),
        }
        let curves = [CurveClass::hyperplane("A", 7), CurveClass::hyperplane("B", 10)];
        let rel = [CurveRelation {
            lhs: "A".into(),
            rhs: vec!["B".into()],
        }];
        assert!(matches!(complete_table(&s45, &curves, &rel), Err(Error::Inconsistent(_))));
    }
}
