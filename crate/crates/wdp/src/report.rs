//! Running certificates across surfaces and rendering the resulting report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::thread;

use serde::{Deserialize, Serialize};
use wdp_core::basisbound::{self, Admissibility};
use wdp_core::blowup_lc::{self, Certificate, DeltaReport, DeltaSource, SurfaceInput, SurfaceReport};
use wdp_core::exactnum::Assignment;
use wdp_core::geometry::SurfaceModel;
use wdp_core::positivity;
use wdp_core::Rational;

use crate::catalog::{Catalog, CatalogError};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub lambda: Option<Rational>,
    /// Also compare decomposition caps against basis-type bounds.
    pub basis_bounds: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{context}: {error}")]
    Core {
        context: String,
        error: wdp_core::Error,
    },
}

fn core_err(context: impl Into<String>) -> impl FnOnce(wdp_core::Error) -> RunError {
    let context = context.into();
    move |error| RunError::Core { context, error }
}

fn surface_input(s: &SurfaceModel, catalog: &Catalog, opts: &RunOptions) -> Result<SurfaceInput, RunError> {
    let mut certificates = Vec::new();
    for script in catalog.certificates_for(s.name()) {
        let c = blowup_lc::verify_certificate(script, s, opts.lambda.as_ref()).map_err(core_err(&script.id))?;
        certificates.push(c);
    }
    let mut basis_bounds = Vec::new();
    if opts.basis_bounds {
        let d = positivity::anticanonical(s).map_err(core_err(s.name()))?;
        for script in catalog.certificates_for(s.name()) {
            for t in &script.decomposition {
                let b = basisbound::s_invariant(&d, &t.curve, s).map_err(core_err(format!("{}: {}", s.name(), t.curve)))?;
                basis_bounds.push(Admissibility::new(&t.curve, t.cap.clone(), b.s_value));
            }
        }
    }
    Ok(SurfaceInput {
        surface: s.name().to_string(),
        alpha: s.alpha().clone(),
        certificates,
        basis_bounds,
    })
}

/// Verify the selected surfaces concurrently; output keeps selection order.
pub fn run(catalog: &Catalog, selection: &[&SurfaceModel], opts: &RunOptions) -> Result<DeltaReport, RunError> {
    let results: Vec<Result<SurfaceInput, RunError>> = thread::scope(|scope| {
        let handles: Vec<_> = selection
            .iter()
            .map(|s| scope.spawn(move || surface_input(s, catalog, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("surface worker panicked"))
            .collect()
    });
    let inputs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    blowup_lc::build_report(inputs).map_err(core_err("report"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub pass: bool,
    pub surfaces: Vec<SurfaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub alpha: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis_bounds: Vec<BasisJson>,
    pub certificates: Vec<CertificateJson>,
    pub claims: Vec<ClaimJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_lower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_source: Option<String>,
    pub surface: String,
    pub warnings: Vec<String>,
    pub window: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub admissible: bool,
    pub cap: String,
    pub curve: String,
    pub s_value: String,
    pub slack: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupJson>,
    pub id: String,
    pub lambda: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupJson {
    pub center: String,
    pub discrepancy: String,
    pub e_selfint: String,
    pub e_sings: Vec<String>,
    pub m_cap: String,
    pub mu: String,
    pub transforms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimJson {
    pub advisory: bool,
    pub anchor: String,
    pub bound: String,
    pub certificate: String,
    pub description: String,
    pub form: String,
    pub kind: String,
    pub max: String,
    pub relation: String,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_vertex: Option<BTreeMap<String, String>>,
}

fn assignment_json(at: &Assignment) -> BTreeMap<String, String> {
    at.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

fn certificate_json(c: &Certificate) -> CertificateJson {
    CertificateJson {
        blowup: c.blowup.as_ref().map(|b| BlowupJson {
            center: b.chart.center.label.clone(),
            discrepancy: b.chart.discrepancy.to_string(),
            e_selfint: b.chart.e_selfint.to_string(),
            e_sings: b.chart.e_sings.iter().map(|s| s.type_string()).collect(),
            m_cap: b.m_cap.to_string(),
            mu: b.mu.to_string(),
            transforms: b.transforms.iter().map(|(l, t)| (l.clone(), t.to_string())).collect(),
        }),
        id: c.id.clone(),
        lambda: c.lambda.to_string(),
        pass: c.pass(),
    }
}

fn surface_json(s: &SurfaceReport) -> SurfaceJson {
    let claims = s
        .certificates
        .iter()
        .flat_map(|c| {
            c.claims.iter().map(move |r| ClaimJson {
                advisory: r.advisory,
                anchor: r.anchor.clone(),
                bound: r.bound.to_string(),
                certificate: c.id.clone(),
                description: r.description.clone(),
                form: r.form.to_string(),
                kind: r.kind.name().to_string(),
                max: r.verdict.max.to_string(),
                relation: r.relation.symbol().to_string(),
                verdict: if r.holds() { "pass" } else { "fail" }.to_string(),
                witness_vertex: (!r.holds()).then(|| assignment_json(&r.verdict.witness)),
            })
        })
        .collect();
    SurfaceJson {
        alpha: s.alpha.to_string(),
        basis_bounds: s
            .basis_bounds
            .iter()
            .map(|b| BasisJson {
                admissible: b.admissible(),
                cap: b.cap.to_string(),
                curve: b.curve.clone(),
                s_value: b.s_value.to_string(),
                slack: b.slack.to_string(),
            })
            .collect(),
        certificates: s.certificates.iter().map(certificate_json).collect(),
        claims,
        delta_lower: s.delta_lower.as_ref().map(Rational::to_string),
        delta_source: s.source.as_ref().map(source_string),
        surface: s.surface.clone(),
        warnings: s.warnings.clone(),
        window: [s.window.0.to_string(), s.window.1.to_string()],
    }
}

fn source_string(src: &DeltaSource) -> String {
    match src {
        DeltaSource::Certificate(id) => id.clone(),
        DeltaSource::Window => "window".to_string(),
    }
}

pub fn to_json(r: &DeltaReport) -> ReportJson {
    ReportJson {
        pass: r.pass(),
        surfaces: r.surfaces.iter().map(surface_json).collect(),
    }
}

/// Pretty JSON with a trailing newline; field order is fixed, so equal reports give equal bytes.
pub fn render_json(r: &ReportJson) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// `p/q (~0.123456)`.
pub fn show(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        format!("{r} (~{})", r.approx())
    }
}

pub fn render_text(r: &DeltaReport) -> String {
    let mut out = String::new();
    for s in &r.surfaces {
        let _ = writeln!(out, "{}: alpha = {}", s.surface, show(&s.alpha));
        let _ = writeln!(out, "  window [3a/2, 3a] = [{}, {}]", show(&s.window.0), show(&s.window.1));
        for c in &s.certificates {
            let verdict = if c.pass() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  certificate {} at lambda = {}: {verdict}", c.id, show(&c.lambda));
            if let Some(b) = &c.blowup {
                let _ = writeln!(
                    out,
                    "    blow-up at {} {}: discrepancy {}, E^2 = {}",
                    b.chart.center.label,
                    b.chart.center.type_string(),
                    show(&b.chart.discrepancy),
                    show(&b.chart.e_selfint)
                );
                let _ = writeln!(out, "    m <= {}", b.m_cap);
                let _ = writeln!(out, "    mu = {}", b.mu);
            }
            for claim in &c.claims {
                let mark = match (claim.holds(), claim.advisory) {
                    (true, _) => "ok  ",
                    (false, false) => "FAIL",
                    (false, true) => "adv ",
                };
                let _ = writeln!(
                    out,
                    "    [{mark}] {}: {} {} {}  (max {})",
                    claim.kind.name(),
                    claim.form,
                    claim.relation.symbol(),
                    show(&claim.bound),
                    show(&claim.verdict.max)
                );
                let _ = writeln!(out, "           {} / {}", claim.description, claim.anchor);
                if !claim.holds() {
                    let _ = writeln!(
                        out,
                        "           witness vertex: {}",
                        wdp_core::exactnum::render_assignment(&claim.verdict.witness)
                    );
                }
            }
        }
        for b in &s.basis_bounds {
            let _ = writeln!(
                out,
                "  cap {} on {}: s = {} ({})",
                show(&b.cap),
                b.curve,
                show(&b.s_value),
                if b.admissible() { "admissible" } else { "not admissible" }
            );
        }
        match (&s.delta_lower, &s.source) {
            (Some(d), Some(src)) => {
                let _ = writeln!(out, "  delta >= {}  [{}]", show(d), source_string(src));
            }
            _ => {
                let _ = writeln!(out, "  delta: no bound");
            }
        }
        for w in &s.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
    }
    let _ = writeln!(out, "overall: {}", if r.pass() { "PASS" } else { "FAIL" });
    out
}
