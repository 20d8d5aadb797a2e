//! Weighted blow-ups at quotient points, germ log canonical thresholds and
//! the certificate engine that replays log-canonicity arguments as affine
//! inequalities over small polytopes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{AffineForm, ClaimRelation, Polytope, Rational, Relation, Verdict};
use crate::geometry::{self, mod_inverse, CoordinateChart, QuotientSingularity, SurfaceModel};
use crate::positivity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupChart {
    pub center: QuotientSingularity,
    /// `(a + b - n)/n`, the coefficient of `E` in `K = f*K + (..)E`.
    pub discrepancy: Rational,
    pub e_selfint: Rational,
    /// Singular points on `E`, normalized to `1/r(1, s)`.
    pub e_sings: Vec<QuotientSingularity>,
}

/// Weighted blow-up of `1/n(a,b)` with weights `(a,b)`.
pub fn blowup_chart(s: &QuotientSingularity) -> Result<BlowupChart> {
    let (n, a, b) = (s.n as i64, s.a as i64, s.b as i64);
    let normalized = |r: i64, u: i64, v: i64| -> Result<Option<QuotientSingularity>> {
        if r == 1 {
            return Ok(None);
        }
        let inv = mod_inverse(u, r).ok_or_else(|| Error::InvalidSingularity(format!("1/{r}({u},{v})")))?;
        let t = (v * inv).rem_euclid(r) as u64;
        QuotientSingularity::new(&format!("O_{r}"), r as u64, 1, t).map(Some)
    };
    let mut e_sings = Vec::new();
    e_sings.extend(normalized(a, n, -b)?);
    e_sings.extend(normalized(b, -a, n)?);
    Ok(BlowupChart {
        center: s.clone(),
        discrepancy: Rational::frac(a + b - n, n),
        e_selfint: Rational::frac(-n, a * b),
        e_sings,
    })
}

/// `min(e1·a + e2·b)/n` over the local monomials of a curve germ.
pub fn transform_coefficient(monomials: &[(u64, u64)], weights: (u64, u64), n: u64) -> Result<Rational> {
    let min = monomials
        .iter()
        .map(|&(e1, e2)| e1 * weights.0 + e2 * weights.1)
        .min()
        .ok_or_else(|| Error::InvalidArgument("empty monomial list".into()))?;
    if n == 0 {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::frac(min as i64, n as i64))
}

/// `min(1, (w1 + w2)/δ)` for a quasi-homogeneous germ of weighted degree `δ`.
pub fn lct_germ(w1: u64, w2: u64, delta: u64) -> Result<Rational> {
    if delta == 0 {
        return Err(Error::InvalidArgument("weighted degree must be positive".into()));
    }
    Ok(Rational::frac((w1 + w2) as i64, delta as i64).min(Rational::one()))
}

/// `O(m)·(-K) = m·I·d/(a0 a1 a2 a3)`.
pub fn pencil_degree_check(s: &SurfaceModel, m: i64) -> Rational {
    geometry::ambient_pairing(m, s.amplitude(), s.quintuple())
}

/// `(3α/2, 3α)`.
pub fn alpha_delta_window(alpha: &Rational) -> Result<(Rational, Rational)> {
    if !alpha.is_positive() {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must be positive")));
    }
    Ok((alpha * Rational::frac(3, 2), alpha * Rational::integer(3)))
}

/// A curve germ at a coordinate point in its orbifold local coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGerm {
    pub chart: CoordinateChart,
    /// `(index, weight)` of the two local coordinates.
    pub weights: [(usize, u64); 2],
    pub monomials: Vec<(u64, u64)>,
}

impl LocalGerm {
    pub fn weighted_degree(&self) -> u64 {
        self.monomials
            .iter()
            .map(|&(e1, e2)| e1 * self.weights[0].1 + e2 * self.weights[1].1)
            .min()
            .unwrap_or(0)
    }

    pub fn transform_coefficient(&self) -> Result<Rational> {
        transform_coefficient(
            &self.monomials,
            (self.weights[0].1, self.weights[1].1),
            self.chart.singularity.n,
        )
    }

    pub fn lct(&self) -> Result<Rational> {
        lct_germ(self.weights[0].1, self.weights[1].1, self.weighted_degree())
    }
}

/// Germ at `center` of `curve`, from explicit ambient monomials or, for a
/// coordinate section, from the defining equation.
pub fn curve_germ(s: &SurfaceModel, center: &str, curve: &str, explicit: Option<&[[u32; 4]]>) -> Result<LocalGerm> {
    let chart = s.chart_at(center)?;
    let weights = s.local_weights(&chart)?;
    let project = |m: &[u32; 4]| -> Result<(u64, u64)> {
        if m[chart.eliminated] != 0 {
            return Err(Error::InvalidArgument(format!(
                "germ of {curve} at {center} uses the eliminated coordinate {}",
                geometry::COORDINATE_NAMES[chart.eliminated]
            )));
        }
        Ok((m[weights[0].0] as u64, m[weights[1].0] as u64))
    };
    let ambient: Vec<[u32; 4]> = match explicit {
        Some(ms) => ms.to_vec(),
        None => {
            let c = s.curve(curve)?;
            let j = c
                .coordinate_section(s.quintuple())
                .ok_or_else(|| Error::NotCoordinateCurve(curve.to_string()))?;
            if j == chart.k {
                return Err(Error::InvalidArgument(format!("{center} does not lie on {curve}")));
            }
            if j == chart.eliminated {
                s.spec()
                    .monomials
                    .iter()
                    .filter(|m| m[j] == 0)
                    .cloned()
                    .collect()
            } else {
                let mut e = [0u32; 4];
                e[j] = 1;
                alloc::vec![e]
            }
        }
    };
    let monomials = ambient.iter().map(project).collect::<Result<Vec<_>>>()?;
    if monomials.is_empty() {
        return Err(Error::InvalidArgument(format!("empty germ for {curve} at {center}")));
    }
    Ok(LocalGerm {
        chart,
        weights,
        monomials,
    })
}

/// `lct` of the anticanonical multiple of a hyperplane curve, read off its germ.
pub fn alpha_from_germ(s: &SurfaceModel, center: &str, curve: &str) -> Result<Rational> {
    let c = s.curve(curve)?;
    let mu = s
        .hyperplane_mu(c)
        .ok_or_else(|| Error::NotCoordinateCurve(curve.to_string()))?;
    Ok(curve_germ(s, center, curve, None)?.lct()? * mu)
}

/// Laurent polynomial in `λ`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPoly {
    coefficients: BTreeMap<i32, Rational>,
}

impl LambdaPoly {
    pub fn constant(c: Rational) -> Self {
        LambdaPoly::monomial(c, 0)
    }

    pub fn monomial(c: Rational, power: i32) -> Self {
        let mut p = LambdaPoly::default();
        p.add_term(c, power);
        p
    }

    pub fn add_term(&mut self, c: Rational, power: i32) {
        let slot = self.coefficients.entry(power).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&power);
        }
    }

    pub fn add(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        for (p, c) in &other.coefficients {
            out.add_term(c.clone(), *p);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LambdaPoly {
        let mut out = LambdaPoly::default();
        for (p, v) in &self.coefficients {
            out.add_term(v * c, *p);
        }
        out
    }

    pub fn eval(&self, lambda: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (p, c) in &self.coefficients {
            if *p < 0 && lambda.is_zero() {
                return Err(Error::DivisionByZero);
            }
            acc += c * lambda.pow(*p);
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.coefficients.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let var = match p {
                0 => String::new(),
                1 => "lambda".to_string(),
                _ => format!("lambda^{p}"),
            };
            match (var.is_empty(), mag == 1) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&var)?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Affine form whose coefficients are Laurent polynomials in `λ`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ParamForm {
    pub constant: LambdaPoly,
    pub coefficients: BTreeMap<String, LambdaPoly>,
}

impl ParamForm {
    pub fn add_term(&mut self, var: Option<&str>, c: Rational, power: i32) {
        match var {
            None => self.constant.add_term(c, power),
            Some(v) => {
                let slot = self.coefficients.entry(v.to_string()).or_default();
                slot.add_term(c, power);
                if slot.is_zero() {
                    self.coefficients.remove(v);
                }
            }
        }
    }

    pub fn eval(&self, lambda: &Rational) -> Result<AffineForm> {
        let mut f = AffineForm::constant(self.constant.eval(lambda)?);
        for (v, p) in &self.coefficients {
            f.add_term(p.eval(lambda)?, v);
        }
        Ok(f)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.coefficients.keys().map(String::as_str)
    }

    pub fn is_lambda_free(&self) -> bool {
        core::iter::once(&self.constant)
            .chain(self.coefficients.values())
            .all(|p| p.coefficients.keys().all(|&k| k == 0))
    }
}

impl fmt::Display for ParamForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|(v, p)| format!("({p})*{v}"))
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(format!("{}", self.constant));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// What a claim asserts; the engine regenerates its form and bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    /// General member `C` of a pencil in `|O(degree)|` through the point: `C·D ≤ 1/λ`.
    Pencil { degree: i64 },
    /// `C·D' ≤ 1/(nλ)` for `D' ~ -K` not containing `C`.
    CurveDegree { curve: String, index: u64 },
    /// `(D - v·C)·C ≤ 1/(nλ)` at points of `C` with index `n`.
    Restriction { curve: String, index: u64 },
    /// `λv ≤ 1`.
    Multiplicity { var: String },
    /// Coefficient `μ` of `E` in the log pull-back stays at most the bound, itself at most 1.
    Pullback,
    /// `(Σ v_i C̃_i + Δ̃)·E ≤ 1/(nλ)` at a point of `E` of index `n`
    /// lying on the proper transforms of `through`.
    Exceptional { index: u64, through: Vec<String> },
}

impl ClaimKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimKind::Pencil { .. } => "pencil",
            ClaimKind::CurveDegree { .. } => "curve-degree",
            ClaimKind::Restriction { .. } => "restriction",
            ClaimKind::Multiplicity { .. } => "multiplicity",
            ClaimKind::Pullback => "pullback",
            ClaimKind::Exceptional { .. } => "exceptional",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimSpec {
    pub kind: ClaimKind,
    pub description: String,
    pub anchor: String,
    /// Form as written in the argument; checked against the generated one.
    pub form: Option<ParamForm>,
    pub relation: ClaimRelation,
    pub bound: Option<LambdaPoly>,
    /// Reported but not part of the verdict.
    pub advisory: bool,
}

/// `D = Σ var·curve + Δ` with `0 ≤ var ≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub var: String,
    pub curve: String,
    pub cap: Rational,
    pub cap_anchor: String,
    /// Ambient monomials of the curve germ at the blow-up center.
    pub germ: Option<Vec<[u32; 4]>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSetup {
    pub center: String,
    /// Decomposition curve whose proper transform meets `Δ̃` non-negatively.
    pub bounding_curve: String,
    /// `m ≤ cap(a, b)` as written; checked against the generated cap.
    pub m_cap: Option<ParamForm>,
    pub mu: Option<ParamForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateScript {
    pub id: String,
    pub surface: String,
    pub lambda: Rational,
    pub decomposition: Vec<DecompositionTerm>,
    pub blowup: Option<BlowupSetup>,
    pub claims: Vec<ClaimSpec>,
}

impl CertificateScript {
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self.decomposition.iter().map(|t| t.var.clone()).collect();
        if self.blowup.is_some() {
            vars.push("m".into());
        }
        vars
    }

    fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::MalformedScript(format!("{}: {why}", self.id)));
        if self.lambda <= 1 {
            return bad(format!("lambda = {} must exceed 1", self.lambda));
        }
        let mut seen: Vec<&str> = Vec::new();
        for t in &self.decomposition {
            if !matches!(t.var.as_str(), "a" | "b") || seen.contains(&t.var.as_str()) {
                return bad(format!("decomposition variable {:?} must be a distinct one of a, b", t.var));
            }
            if t.cap.is_negative() {
                return bad(format!("cap for {} is negative", t.var));
            }
            seen.push(&t.var);
        }
        if self.claims.is_empty() {
            return bad("no claims".into());
        }
        for c in &self.claims {
            if c.anchor.trim().is_empty() {
                return bad(format!("claim {:?} has no anchor", c.description));
            }
            let needs_blowup = matches!(c.kind, ClaimKind::Pullback | ClaimKind::Exceptional { .. });
            if needs_blowup && self.blowup.is_none() {
                return bad(format!("claim {:?} needs a blow-up", c.description));
            }
        }
        Ok(())
    }
}

/// Blow-up data derived for a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupData {
    pub chart: BlowupChart,
    /// Proper-transform coefficient of each decomposition curve.
    pub transforms: Vec<(String, Rational)>,
    pub m_cap: AffineForm,
    pub mu: AffineForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimResult {
    pub kind: ClaimKind,
    pub description: String,
    pub anchor: String,
    pub form: AffineForm,
    pub relation: ClaimRelation,
    pub bound: Rational,
    pub verdict: Verdict,
    pub advisory: bool,
}

impl ClaimResult {
    pub fn holds(&self) -> bool {
        self.verdict.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub id: String,
    pub surface: String,
    pub lambda: Rational,
    pub polytope: Polytope,
    pub blowup: Option<BlowupData>,
    pub claims: Vec<ClaimResult>,
}

impl Certificate {
    /// All non-advisory claims hold.
    pub fn pass(&self) -> bool {
        self.claims.iter().filter(|c| !c.advisory).all(ClaimResult::holds)
    }

    pub fn delta_bound(&self) -> Option<Rational> {
        self.pass().then(|| self.lambda.clone())
    }

    pub fn failing(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.holds())
    }
}

fn anticanonical_dot(s: &SurfaceModel, curve: &str) -> Result<Rational> {
    positivity::dot_curve(&positivity::anticanonical(s)?, curve, s)
}

/// `D·B - Σ v_i C_i·B` as an affine form in the decomposition variables.
fn residual_dot(script: &CertificateScript, s: &SurfaceModel, curve: &str) -> Result<AffineForm> {
    let mut f = AffineForm::constant(anticanonical_dot(s, curve)?);
    for t in &script.decomposition {
        f.add_term(-s.table().get(&t.curve, curve)?.clone(), &t.var);
    }
    Ok(f)
}

fn blowup_data(script: &CertificateScript, setup: &BlowupSetup, s: &SurfaceModel, lambda: &Rational) -> Result<BlowupData> {
    let center = s.singularity(&setup.center)?.clone();
    let chart = blowup_chart(&center)?;
    let minus_e2 = -&chart.e_selfint;
    let mut transforms = Vec::new();
    for t in &script.decomposition {
        let germ = curve_germ(s, &setup.center, &t.curve, t.germ.as_deref())?;
        transforms.push((t.curve.clone(), germ.transform_coefficient()?));
    }
    let t_of = |curve: &str| {
        transforms
            .iter()
            .find(|(c, _)| c == curve)
            .map(|(_, t)| t.clone())
            .ok_or_else(|| {
                Error::MalformedScript(format!("{}: {curve} is not a decomposition curve", script.id))
            })
    };
    let tb = t_of(&setup.bounding_curve)?;
    if !tb.is_positive() {
        return Err(Error::MalformedScript(format!(
            "{}: {} does not pass through {}",
            script.id, setup.bounding_curve, setup.center
        )));
    }
    let m_cap = residual_dot(script, s, &setup.bounding_curve)?.scale(&(&tb * &minus_e2).recip()?);
    let mut mu = AffineForm::term(lambda.clone(), "m").with_constant(-&chart.discrepancy);
    for t in &script.decomposition {
        mu.add_term(lambda * t_of(&t.curve)?, &t.var);
    }
    Ok(BlowupData {
        chart,
        transforms,
        m_cap,
        mu,
    })
}

fn mismatch(script: &CertificateScript, what: &str, declared: &dyn fmt::Display, expected: &dyn fmt::Display) -> Error {
    Error::MalformedScript(format!(
        "{}: {what} is written as {declared} but the surface data give {expected}",
        script.id
    ))
}

/// Replay a script on its surface, optionally at a different `λ`.
pub fn verify_certificate(script: &CertificateScript, s: &SurfaceModel, lambda_override: Option<&Rational>) -> Result<Certificate> {
    script.validate()?;
    if s.name() != script.surface {
        return Err(Error::MalformedScript(format!(
            "{} targets {} but was given {}",
            script.id,
            script.surface,
            s.name()
        )));
    }
    let lambda = lambda_override.unwrap_or(&script.lambda).clone();
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} must be positive")));
    }
    let inv = |n: u64| Rational::one() / (Rational::integer(n as i64) * &lambda);
    let vars = script.variables();
    let mut polytope = Polytope::new(&vars)?;
    for t in &script.decomposition {
        s.curve(&t.curve)?;
        polytope.constrain(AffineForm::var(&t.var), Relation::Ge, Rational::zero())?;
        polytope.constrain(AffineForm::var(&t.var), Relation::Le, t.cap.clone())?;
    }
    let blowup = match &script.blowup {
        Some(setup) => {
            let data = blowup_data(script, setup, s, &lambda)?;
            if let Some(declared) = &setup.m_cap {
                let declared = declared.eval(&lambda)?;
                if declared != data.m_cap {
                    return Err(mismatch(script, "the m cap", &declared, &data.m_cap));
                }
            }
            if let Some(declared) = &setup.mu {
                let declared = declared.eval(&lambda)?;
                if declared != data.mu {
                    return Err(mismatch(script, "the pull-back coefficient", &declared, &data.mu));
                }
            }
            polytope.constrain(AffineForm::var("m"), Relation::Ge, Rational::zero())?;
            polytope.constrain(AffineForm::var("m") - data.m_cap.clone(), Relation::Le, Rational::zero())?;
            Some(data)
        }
        None => None,
    };
    let var_of = |curve: &str| script.decomposition.iter().find(|t| t.curve == curve);
    let mut claims = Vec::new();
    for c in &script.claims {
        let (form, bound) = match &c.kind {
            ClaimKind::Pencil { degree } => (AffineForm::constant(pencil_degree_check(s, *degree)), inv(1)),
            ClaimKind::CurveDegree { curve, index } => (AffineForm::constant(anticanonical_dot(s, curve)?), inv(*index)),
            ClaimKind::Restriction { curve, index } => {
                let mut f = AffineForm::constant(anticanonical_dot(s, curve)?);
                if let Some(t) = var_of(curve) {
                    f.add_term(-s.table().get(curve, curve)?.clone(), &t.var);
                }
                (f, inv(*index))
            }
            ClaimKind::Multiplicity { var } => {
                if !vars.contains(var) {
                    return Err(Error::MalformedScript(format!("{}: unknown variable {var}", script.id)));
                }
                (AffineForm::var(var), inv(1))
            }
            ClaimKind::Pullback => {
                let data = blowup.as_ref().expect("validated");
                let declared = match &c.bound {
                    Some(b) => b.eval(&lambda)?,
                    None => Rational::one(),
                };
                (data.mu.clone(), declared.min(Rational::one()))
            }
            ClaimKind::Exceptional { index, through } => {
                let data = blowup.as_ref().expect("validated");
                let minus_e2 = -&data.chart.e_selfint;
                let mut f = AffineForm::term(minus_e2.clone(), "m");
                for curve in through {
                    let t = var_of(curve).ok_or_else(|| {
                        Error::MalformedScript(format!("{}: {curve} is not a decomposition curve", script.id))
                    })?;
                    let coeff = data
                        .transforms
                        .iter()
                        .find(|(l, _)| l == curve)
                        .map(|(_, t)| t * &minus_e2)
                        .expect("every decomposition curve has a transform");
                    f.add_term(coeff, &t.var);
                }
                (f, inv(*index))
            }
        };
        if let Some(declared) = &c.form {
            let declared = declared.eval(&lambda)?;
            if declared != form {
                return Err(mismatch(script, &format!("claim {:?}", c.description), &declared, &form));
            }
        }
        if let (Some(declared), false) = (&c.bound, matches!(c.kind, ClaimKind::Pullback)) {
            let declared = declared.eval(&lambda)?;
            if declared != bound {
                return Err(mismatch(script, &format!("bound of claim {:?}", c.description), &declared, &bound));
            }
        }
        let verdict = polytope.check(&form, c.relation, &bound)?;
        claims.push(ClaimResult {
            kind: c.kind.clone(),
            description: c.description.clone(),
            anchor: c.anchor.clone(),
            form,
            relation: c.relation,
            bound,
            verdict,
            advisory: c.advisory,
        });
    }
    Ok(Certificate {
        id: script.id.clone(),
        surface: script.surface.clone(),
        lambda,
        polytope,
        blowup,
        claims,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaSource {
    Certificate(String),
    /// `δ ≥ 3α/2` alone.
    Window,
}

/// Inputs for one surface of a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInput {
    pub surface: String,
    pub alpha: Rational,
    pub certificates: Vec<Certificate>,
    pub basis_bounds: Vec<crate::basisbound::Admissibility>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceReport {
    pub surface: String,
    pub alpha: Rational,
    pub window: (Rational, Rational),
    pub delta_lower: Option<Rational>,
    pub source: Option<DeltaSource>,
    pub certificates: Vec<Certificate>,
    pub basis_bounds: Vec<crate::basisbound::Admissibility>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DeltaReport {
    pub surfaces: Vec<SurfaceReport>,
}

impl DeltaReport {
    /// Every certificate passes and every surface has a bound.
    pub fn pass(&self) -> bool {
        self.surfaces.iter().all(|s| {
            s.delta_lower.is_some() && s.certificates.iter().all(Certificate::pass)
        })
    }

    pub fn warnings(&self) -> impl Iterator<Item = (&str, &str)> {
        self.surfaces
            .iter()
            .flat_map(|s| s.warnings.iter().map(move |w| (s.surface.as_str(), w.as_str())))
    }
}

/// Assemble per-surface bounds in input order.
///
/// A surface's bound is the smallest `λ` among its certificates when all of
/// them pass; when `3α/2 > 1` the window bound is used if it is larger.
pub fn build_report(inputs: Vec<SurfaceInput>) -> Result<DeltaReport> {
    let mut surfaces = Vec::new();
    for input in inputs {
        let window = alpha_delta_window(&input.alpha)?;
        let window_usable = window.0 > 1;
        if input.certificates.is_empty() && !window_usable {
            return Err(Error::MissingCertificate(input.surface));
        }
        let mut warnings = Vec::new();
        let all_pass = input.certificates.iter().all(Certificate::pass);
        let certified = if all_pass {
            input
                .certificates
                .iter()
                .min_by(|x, y| x.lambda.cmp(&y.lambda))
                .map(|c| (c.lambda.clone(), DeltaSource::Certificate(c.id.clone())))
        } else {
            None
        };
        let (delta_lower, source) = match (certified, window_usable && all_pass) {
            (Some((l, _)), true) if window.0 > l => (Some(window.0.clone()), Some(DeltaSource::Window)),
            (Some((l, src)), _) => (Some(l), Some(src)),
            (None, true) => (Some(window.0.clone()), Some(DeltaSource::Window)),
            (None, false) => (None, None),
        };
        for c in &input.certificates {
            for f in c.failing() {
                let tag = if f.advisory { "advisory claim" } else { "claim" };
                warnings.push(format!(
                    "{}: {tag} {:?} fails: max {} {} {} violated",
                    c.id,
                    f.description,
                    f.verdict.max,
                    f.relation.symbol(),
                    f.bound
                ));
            }
        }
        for b in &input.basis_bounds {
            if !b.admissible() {
                warnings.push(format!(
                    "cap {} on {} is below the basis-type bound {}",
                    b.cap, b.curve, b.s_value
                ));
            }
        }
        if let Some(d) = &delta_lower {
            if d > &window.1 {
                warnings.push(format!("delta bound {d} exceeds 3*alpha = {}", window.1));
            }
        }
        surfaces.push(SurfaceReport {
            surface: input.surface,
            alpha: input.alpha,
            window,
            delta_lower,
            source,
            certificates: input.certificates,
            basis_bounds: input.basis_bounds,
            warnings,
        });
    }
    Ok(DeltaReport { surfaces })
}
