//! Nef and pseudoeffective thresholds, Zariski decomposition and volumes
//! over the curve basis of a surface model.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::exactnum::linalg::{self, Matrix};
use crate::exactnum::{PiecewiseQuadratic, QuadPoly, Rational};
use crate::geometry::SurfaceModel;

/// Rational combination of named curves.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QDivisor {
    coefficients: BTreeMap<String, Rational>,
}

impl QDivisor {
    pub fn zero() -> Self {
        QDivisor::default()
    }

    pub fn curve(label: &str) -> Self {
        QDivisor::zero().with(label, Rational::one())
    }

    pub fn with(mut self, label: &str, c: Rational) -> Self {
        let slot = self
            .coefficients
            .entry(label.to_string())
            .or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(label);
        }
        self
    }

    pub fn coefficient(&self, label: &str) -> Rational {
        self.coefficients.get(label).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.coefficients.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.coefficients
            .iter()
            .fold(QDivisor::zero(), |acc, (k, v)| acc.with(k, v * c))
    }

    pub fn check_labels(&self, s: &SurfaceModel) -> Result<()> {
        for k in self.coefficients.keys() {
            s.table().index(k)?;
        }
        Ok(())
    }
}

impl Add<&QDivisor> for &QDivisor {
    type Output = QDivisor;
    fn add(self, rhs: &QDivisor) -> QDivisor {
        rhs.terms().fold(self.clone(), |acc, (k, v)| acc.with(k, v.clone()))
    }
}

impl Sub<&QDivisor> for &QDivisor {
    type Output = QDivisor;
    fn sub(self, rhs: &QDivisor) -> QDivisor {
        rhs.terms().fold(self.clone(), |acc, (k, v)| acc.with(k, -v))
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, v)) in self.coefficients.iter().enumerate() {
            let mag = v.abs();
            match (i, v.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag == 1 {
                f.write_str(k)?;
            } else {
                write!(f, "{mag}*{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `-K` written through the first hyperplane curve: `(I/m)·C`.
pub fn anticanonical(s: &SurfaceModel) -> Result<QDivisor> {
    let c = s.anticanonical_carrier()?;
    let m = c.hyperplane_degree.expect("carrier is a hyperplane curve") as i64;
    Ok(QDivisor::zero().with(&c.label, Rational::frac(s.amplitude(), m)))
}

pub fn dot(d1: &QDivisor, d2: &QDivisor, s: &SurfaceModel) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (k1, v1) in d1.terms() {
        for (k2, v2) in d2.terms() {
            acc += v1 * v2 * s.table().get(k1, k2)?;
        }
    }
    Ok(acc)
}

pub fn dot_curve(d: &QDivisor, label: &str, s: &SurfaceModel) -> Result<Rational> {
    dot(d, &QDivisor::curve(label), s)
}

fn irreducible_labels(s: &SurfaceModel) -> Vec<String> {
    s.irreducible_curves().iter().map(|c| c.label.clone()).collect()
}

pub fn is_nef(d: &QDivisor, s: &SurfaceModel) -> Result<bool> {
    for l in irreducible_labels(s) {
        if dot_curve(d, &l, s)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_nef(d: &QDivisor, s: &SurfaceModel) -> Result<()> {
    for l in irreducible_labels(s) {
        let v = dot_curve(d, &l, s)?;
        if v.is_negative() {
            return Err(Error::NotNef(format!("({d})·{l} = {v}")));
        }
    }
    Ok(())
}

/// `sup{x : D - xC nef}`.
pub fn nef_threshold(d: &QDivisor, c: &str, s: &SurfaceModel) -> Result<Rational> {
    d.check_labels(s)?;
    s.table().index(c)?;
    require_nef(d, s)?;
    let mut best: Option<Rational> = None;
    for l in irreducible_labels(s) {
        let slope = s.table().get(c, &l)?.clone();
        if slope.is_positive() {
            let x = dot_curve(d, &l, s)? / slope;
            best = Some(best.map_or(x.clone(), |b| b.min(x)));
        }
    }
    best.ok_or_else(|| Error::UnboundedThreshold(format!("({d}) - x·{c} stays nef for all x")))
}

/// Intersection vector of `D` against every basis curve.
fn numerical_class(d: &QDivisor, s: &SurfaceModel) -> Result<Vec<Rational>> {
    s.table().basis().iter().map(|b| dot_curve(d, b, s)).collect()
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize <= max {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Independent subsets of the cone generators.
fn generator_bases(gens: &[Vec<Rational>]) -> Vec<Vec<usize>> {
    let dim = gens.first().map_or(0, Vec::len);
    subsets(gens.len(), dim)
        .into_iter()
        .filter(|g| {
            let m: Matrix = g.iter().map(|&i| gens[i].clone()).collect();
            linalg::rank(&m) == g.len()
        })
        .collect()
}

fn transpose(cols: &[Vec<Rational>]) -> Matrix {
    let rows = cols.first().map_or(0, Vec::len);
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Membership in the cone spanned by the irreducible basis curves.
pub fn is_pseudoeffective(d: &QDivisor, s: &SurfaceModel) -> Result<bool> {
    d.check_labels(s)?;
    let v = numerical_class(d, s)?;
    if v.iter().all(Rational::is_zero) {
        return Ok(true);
    }
    let gens: Vec<Vec<Rational>> = irreducible_labels(s)
        .iter()
        .map(|l| numerical_class(&QDivisor::curve(l), s))
        .collect::<Result<_>>()?;
    for g in generator_bases(&gens) {
        let cols: Vec<Vec<Rational>> = g.iter().map(|&i| gens[i].clone()).collect();
        if let Some(c) = linalg::solve(&transpose(&cols), &v) {
            if c.iter().all(|x| !x.is_negative()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `sup{x : D - xC pseudoeffective}` over the cone of basis curves.
pub fn pe_threshold(d: &QDivisor, c: &str, s: &SurfaceModel) -> Result<Rational> {
    if !is_pseudoeffective(d, s)? {
        return Err(Error::NotPseudoeffective(d.to_string()));
    }
    s.table().index(c)?;
    let v = numerical_class(d, s)?;
    let vc = numerical_class(&QDivisor::curve(c), s)?;
    let gens: Vec<Vec<Rational>> = irreducible_labels(s)
        .iter()
        .map(|l| numerical_class(&QDivisor::curve(l), s))
        .collect::<Result<_>>()?;
    let mut best = Rational::zero();
    for g in generator_bases(&gens) {
        // Solve Σ c_i g_i + x·C = D with c ≥ 0, x ≥ 0 and maximize x.
        let mut cols: Vec<Vec<Rational>> = g.iter().map(|&i| gens[i].clone()).collect();
        cols.push(vc.clone());
        let m = transpose(&cols);
        let k = cols.len();
        let aug: Matrix = m
            .iter()
            .zip(&v)
            .map(|(r, b)| {
                let mut r = r.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let (red, pivots) = linalg::rref(&aug);
        if pivots.contains(&k) {
            continue;
        }
        let mut y0 = vec![Rational::zero(); k];
        for (r, &p) in pivots.iter().enumerate() {
            y0[p] = red[r][k].clone();
        }
        let null = linalg::nullspace(&m, k);
        match null.len() {
            0 => {
                if y0.iter().all(|t| !t.is_negative()) && y0[k - 1] > best {
                    best = y0[k - 1].clone();
                }
            }
            1 => {
                let dir = &null[0];
                let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
                let mut feasible = true;
                for (a, b) in y0.iter().zip(dir) {
                    // a + t·b ≥ 0
                    if b.is_zero() {
                        feasible &= !a.is_negative();
                    } else {
                        let t = -a / b;
                        if b.is_positive() {
                            lo = Some(lo.map_or(t.clone(), |l| l.max(t)));
                        } else {
                            hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
                        }
                    }
                }
                if let (Some(l), Some(h)) = (&lo, &hi) {
                    feasible &= l <= h;
                }
                if !feasible {
                    continue;
                }
                let slope = &dir[k - 1];
                let t = if slope.is_positive() {
                    hi.clone()
                } else if slope.is_negative() {
                    lo.clone()
                } else {
                    Some(lo.clone().or(hi.clone()).unwrap_or_default())
                };
                let Some(t) = t else {
                    return Err(Error::UnboundedThreshold(format!("({d}) - x·{c}")));
                };
                let x = &y0[k - 1] + &t * slope;
                if x > best {
                    best = x;
                }
            }
            _ => unreachable!("independent generators leave at most one free direction"),
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiResult {
    pub nef_part: QDivisor,
    pub negative_part: QDivisor,
}

/// Support of the negative part and its multiplicities for `D`.
fn negative_support(d: &QDivisor, s: &SurfaceModel) -> Result<Vec<(String, Rational)>> {
    let curves = irreducible_labels(s);
    let mut support: Vec<String> = Vec::new();
    for _ in 0..=curves.len() {
        let mult = solve_support(d, &support, s)?;
        let positive = mult
            .iter()
            .fold(d.clone(), |acc, (l, n)| &acc - &QDivisor::zero().with(l, n.clone()));
        let mut grew = false;
        for l in &curves {
            if !support.contains(l) && dot_curve(&positive, l, s)?.is_negative() {
                support.push(l.clone());
                grew = true;
            }
        }
        if !grew {
            return Ok(mult);
        }
    }
    Err(Error::ZariskiDiverged)
}

/// Multiplicities `n` with `(D - Σ n_j C_j)·C_j = 0` on the given support.
fn solve_support(d: &QDivisor, support: &[String], s: &SurfaceModel) -> Result<Vec<(String, Rational)>> {
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let gram: Matrix = support
        .iter()
        .map(|a| support.iter().map(|b| s.table().get(a, b).cloned()).collect())
        .collect::<Result<_>>()?;
    if !linalg::is_negative_definite(&gram) {
        return Err(Error::NotPseudoeffective(format!(
            "{d}: negative part support {{{}}} is not negative definite",
            support.join(", ")
        )));
    }
    let rhs: Vec<Rational> = support
        .iter()
        .map(|l| dot_curve(d, l, s))
        .collect::<Result<_>>()?;
    let n = linalg::solve(&gram, &rhs).expect("negative definite Gram matrix is invertible");
    Ok(support.iter().cloned().zip(n).collect())
}

pub fn zariski(d: &QDivisor, s: &SurfaceModel) -> Result<ZariskiResult> {
    if !is_pseudoeffective(d, s)? {
        return Err(Error::NotPseudoeffective(d.to_string()));
    }
    let mult = negative_support(d, s)?;
    let negative_part = mult
        .iter()
        .fold(QDivisor::zero(), |acc, (l, n)| acc.with(l, n.clone()));
    Ok(ZariskiResult {
        nef_part: d - &negative_part,
        negative_part,
    })
}

/// `P²` for the nef part `P`; zero when `D` is not pseudoeffective.
pub fn volume(d: &QDivisor, s: &SurfaceModel) -> Result<Rational> {
    d.check_labels(s)?;
    if !is_pseudoeffective(d, s)? {
        return Ok(Rational::zero());
    }
    let z = zariski(d, s)?;
    dot(&z.nef_part, &z.nef_part, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeProfile {
    pub divisor: QDivisor,
    pub direction: String,
    pub nef_threshold: Rational,
    pub pe_threshold: Rational,
    pub profile: PiecewiseQuadratic,
    /// Negative-part support on each piece.
    pub supports: Vec<Vec<String>>,
}

impl VolumeProfile {
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.profile.eval(x)
    }

    pub fn integral(&self) -> Rational {
        self.profile.integrate()
    }
}

/// Affine family `A + xB` of divisors.
struct AffineDivisor {
    base: QDivisor,
    slope: QDivisor,
}

/// `(curve, n0, n1)` for a multiplicity `n0 + x·n1`.
type AffineMultiplicity = (String, Rational, Rational);

/// Nef part of `D - xC` on a fixed support, as an affine family in `x`,
/// together with the multiplicities as affine functions `(n0, n1)`.
fn chamber_family(
    d: &QDivisor,
    c: &str,
    support: &[String],
    s: &SurfaceModel,
) -> Result<(AffineDivisor, Vec<AffineMultiplicity>)> {
    let at0 = solve_support(d, support, s)?;
    let minus_c = QDivisor::zero().with(c, Rational::integer(-1));
    let slope0 = solve_support(&minus_c, support, s)?;
    let mut base = d.clone();
    let mut slope = minus_c;
    let mut mults = Vec::new();
    for ((l, n0), (_, n1)) in at0.into_iter().zip(slope0) {
        base = &base - &QDivisor::zero().with(&l, n0.clone());
        slope = &slope - &QDivisor::zero().with(&l, n1.clone());
        mults.push((l, n0, n1));
    }
    Ok((AffineDivisor { base, slope }, mults))
}

/// Interval of `x` on which `p(x) = p0 + x·p1 ≥ 0`, intersected with `[lo, hi]`.
fn clip(lo: &mut Rational, hi: &mut Rational, p0: &Rational, p1: &Rational) {
    if p1.is_zero() {
        return;
    }
    let root = -p0 / p1;
    if p1.is_positive() {
        if root > *lo {
            *lo = root;
        }
    } else if root < *hi {
        *hi = root;
    }
}

/// `vol(D - xC)` on `[0, τ]`, one quadratic piece per Zariski chamber.
pub fn volume_profile(d: &QDivisor, c: &str, s: &SurfaceModel) -> Result<VolumeProfile> {
    d.check_labels(s)?;
    s.table().index(c)?;
    require_nef(d, s)?;
    let nef = nef_threshold(d, c, s).unwrap_or_else(|_| Rational::zero());
    let tau = pe_threshold(d, c, s)?;
    if !tau.is_positive() {
        return Err(Error::InvalidArgument(format!("({d}) - x·{c} is not big for any x > 0")));
    }
    let curves = irreducible_labels(s);
    let mut breakpoints = vec![Rational::zero()];
    let mut pieces: Vec<QuadPoly> = Vec::new();
    let mut supports: Vec<Vec<String>> = Vec::new();
    let mut x0 = Rational::zero();
    let two = Rational::integer(2);
    while x0 < tau {
        let mut hi = tau.clone();
        let (poly, support, end) = loop {
            let mid = (&x0 + &hi) / &two;
            let here = &d.clone() - &QDivisor::zero().with(c, mid.clone());
            let support: Vec<String> = negative_support(&here, s)?.into_iter().map(|(l, _)| l).collect();
            let (fam, mults) = chamber_family(d, c, &support, s)?;
            let mut lo = Rational::zero();
            let mut up = tau.clone();
            for (_, n0, n1) in &mults {
                clip(&mut lo, &mut up, n0, n1);
            }
            for l in curves.iter().filter(|l| !support.contains(l)) {
                let p0 = dot_curve(&fam.base, l, s)?;
                let p1 = dot_curve(&fam.slope, l, s)?;
                clip(&mut lo, &mut up, &p0, &p1);
            }
            if lo <= x0 {
                let a2 = dot(&fam.base, &fam.base, s)?;
                let ab = dot(&fam.base, &fam.slope, s)?;
                let b2 = dot(&fam.slope, &fam.slope, s)?;
                break (QuadPoly::new(a2, &two * ab, b2), support, up);
            }
            hi = lo;
        };
        match pieces.last() {
            Some(last) if *last == poly => {
                *breakpoints.last_mut().unwrap() = end.clone();
            }
            _ => {
                pieces.push(poly);
                supports.push(support);
                breakpoints.push(end.clone());
            }
        }
        x0 = end;
    }
    Ok(VolumeProfile {
        divisor: d.clone(),
        direction: c.to_string(),
        nef_threshold: nef,
        pe_threshold: tau,
        profile: PiecewiseQuadratic::new(breakpoints, pieces)?,
        supports,
    })
}
