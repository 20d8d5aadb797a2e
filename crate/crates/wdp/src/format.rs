//! TOML surface definitions and certificate scripts.

use std::ops::Range;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;
use wdp_core::blowup_lc::{BlowupSetup, CertificateScript, ClaimKind, ClaimSpec, DecompositionTerm};
use wdp_core::exactnum::ClaimRelation;
use wdp_core::geometry::{CurveClass, CurveRelation, QuotientSingularity, SingularPoint, SurfaceModel, SurfaceSpec, COORDINATE_NAMES};
use wdp_core::wps::Quintuple;

use crate::expr::{self, ExprError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{source_name}: {message}")]
    Toml { source_name: String, message: String },
    #[error("{source_name}:{line}: {field}: {error}")]
    Expr {
        source_name: String,
        line: usize,
        field: String,
        error: ExprError,
    },
    #[error("{source_name}:{line}: {message}")]
    Invalid {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}: {error}")]
    Model {
        source_name: String,
        error: wdp_core::Error,
    },
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

struct Ctx<'a> {
    name: &'a str,
    text: &'a str,
}

impl Ctx<'_> {
    fn expr<T>(&self, field: &str, v: &Spanned<String>, f: impl Fn(&str) -> Result<T, ExprError>) -> Result<T, FormatError> {
        f(v.get_ref()).map_err(|error| FormatError::Expr {
            source_name: self.name.to_string(),
            line: line_of(self.text, v.span()),
            field: field.to_string(),
            error,
        })
    }

    fn invalid<T: Clone>(&self, v: &Spanned<T>, message: String) -> FormatError {
        FormatError::Invalid {
            source_name: self.name.to_string(),
            line: line_of(self.text, v.span()),
            message,
        }
    }

    fn model(&self, error: wdp_core::Error) -> FormatError {
        FormatError::Model {
            source_name: self.name.to_string(),
            error,
        }
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, FormatError> {
        toml::from_str(self.text).map_err(|e| FormatError::Toml {
            source_name: self.name.to_string(),
            message: e.to_string().trim_end().to_string(),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    surface: SurfaceHeader,
    #[serde(default)]
    monomial: Vec<MonomialEntry>,
    #[serde(default)]
    singularity: Vec<SingularityEntry>,
    #[serde(default)]
    curve: Vec<CurveEntry>,
    #[serde(default)]
    relation: Vec<RelationEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceHeader {
    name: String,
    weights: [u64; 4],
    degree: u64,
    alpha: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialEntry {
    exponents: [u32; 4],
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum PointSpec {
    Pattern([u8; 4]),
    Symbolic(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SingularityEntry {
    label: String,
    n: u64,
    a: u64,
    b: u64,
    point: Option<Spanned<PointSpec>>,
}

#[derive(Deserialize, Clone)]
#[serde(untagged)]
enum CoordRef {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveEntry {
    label: String,
    hyperplane_degree: Option<u64>,
    coordinate_pair: Option<Spanned<[CoordRef; 2]>>,
    #[serde(default)]
    plt_points: Vec<(String, u64)>,
    mu: Option<Spanned<String>>,
    #[serde(default)]
    singular_at: Vec<String>,
    rational: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    lhs: String,
    rhs: Vec<String>,
}

fn coordinate_index(name: &str) -> Option<usize> {
    COORDINATE_NAMES.iter().position(|c| *c == name)
}

fn point_pattern(p: &PointSpec) -> Option<[bool; 4]> {
    match p {
        PointSpec::Pattern(bits) => bits
            .iter()
            .all(|&b| b <= 1)
            .then(|| bits.map(|b| b == 1)),
        PointSpec::Symbolic(s) => {
            let mut out = [false; 4];
            for c in s.chars() {
                out[coordinate_index(&c.to_string())?] = true;
            }
            out.iter().any(|&b| b).then_some(out)
        }
    }
}

/// Parse a surface definition; `source_name` labels error messages.
pub fn parse_surface(text: &str, source_name: &str) -> Result<SurfaceModel, FormatError> {
    let cx = Ctx { name: source_name, text };
    let file: SurfaceFile = cx.parse()?;
    let h = file.surface;
    let quintuple = Quintuple::new(h.weights, h.degree).map_err(|e| cx.model(e))?;
    let alpha = cx.expr("alpha", &h.alpha, expr::parse_rational)?;
    let mut singularities = Vec::new();
    for s in file.singularity {
        let point = match &s.point {
            None => None,
            Some(p) => Some(
                point_pattern(p.get_ref())
                    .ok_or_else(|| cx.invalid(p, format!("{}: bad point pattern", s.label)))?,
            ),
        };
        let singularity = QuotientSingularity::new(&s.label, s.n, s.a, s.b).map_err(|e| cx.model(e))?;
        singularities.push(SingularPoint { singularity, point });
    }
    let mut curves = Vec::new();
    for c in file.curve {
        let pair = match &c.coordinate_pair {
            None => None,
            Some(p) => {
                let idx = |r: &CoordRef| match r {
                    CoordRef::Index(i) => (*i < 4).then_some(*i),
                    CoordRef::Name(n) => coordinate_index(n),
                };
                let [k, l] = p.get_ref();
                match (idx(k), idx(l)) {
                    (Some(k), Some(l)) => Some((k, l)),
                    _ => return Err(cx.invalid(p, format!("{}: bad coordinate pair", c.label))),
                }
            }
        };
        let mu = match &c.mu {
            Some(m) => Some(cx.expr("mu", m, expr::parse_rational)?),
            None => None,
        };
        let mut class = CurveClass {
            label: c.label,
            hyperplane_degree: c.hyperplane_degree,
            coordinate_pair: pair,
            plt_points: c.plt_points,
            mu,
            singular_at: c.singular_at,
            rational: pair.is_some(),
        };
        if let Some(r) = c.rational {
            class.rational = r;
        }
        curves.push(class);
    }
    let spec = SurfaceSpec {
        name: h.name,
        quintuple,
        monomials: file.monomial.into_iter().map(|m| m.exponents).collect(),
        singularities,
        curves,
        relations: file
            .relation
            .into_iter()
            .map(|r| CurveRelation { lhs: r.lhs, rhs: r.rhs })
            .collect(),
        alpha,
    };
    SurfaceModel::build(spec).map_err(|e| cx.model(e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    certificate: CertificateHeader,
    #[serde(default)]
    term: Vec<TermEntry>,
    blowup: Option<BlowupEntry>,
    #[serde(default)]
    claim: Vec<ClaimEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateHeader {
    id: String,
    surface: String,
    lambda: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermEntry {
    var: String,
    curve: String,
    cap: Spanned<String>,
    anchor: String,
    germ: Option<Vec<[u32; 4]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BlowupEntry {
    center: String,
    bounding_curve: String,
    m_cap: Option<Spanned<String>>,
    mu: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimEntry {
    kind: Spanned<String>,
    description: String,
    anchor: String,
    degree: Option<i64>,
    curve: Option<String>,
    index: Option<u64>,
    var: Option<String>,
    through: Option<Vec<String>>,
    form: Option<Spanned<String>>,
    relation: Option<Spanned<String>>,
    bound: Option<Spanned<String>>,
    #[serde(default)]
    advisory: bool,
}

pub fn parse_certificate(text: &str, source_name: &str) -> Result<CertificateScript, FormatError> {
    let cx = Ctx { name: source_name, text };
    let file: CertificateFile = cx.parse()?;
    let h = file.certificate;
    let lambda = cx.expr("lambda", &h.lambda, expr::parse_rational)?;
    let mut decomposition = Vec::new();
    for t in file.term {
        decomposition.push(DecompositionTerm {
            cap: cx.expr("cap", &t.cap, expr::parse_rational)?,
            var: t.var,
            curve: t.curve,
            cap_anchor: t.anchor,
            germ: t.germ,
        });
    }
    let blowup = match file.blowup {
        None => None,
        Some(b) => Some(BlowupSetup {
            center: b.center,
            bounding_curve: b.bounding_curve,
            m_cap: b
                .m_cap
                .as_ref()
                .map(|f| cx.expr("m_cap", f, expr::parse_param_form))
                .transpose()?,
            mu: b
                .mu
                .as_ref()
                .map(|f| cx.expr("mu", f, expr::parse_param_form))
                .transpose()?,
        }),
    };
    let mut claims = Vec::new();
    for c in file.claim {
        let missing = |field: &str| cx.invalid(&c.kind, format!("{} claim needs `{field}`", c.kind.get_ref()));
        let kind = match c.kind.get_ref().as_str() {
            "pencil" => ClaimKind::Pencil {
                degree: c.degree.ok_or_else(|| missing("degree"))?,
            },
            "curve-degree" => ClaimKind::CurveDegree {
                curve: c.curve.clone().ok_or_else(|| missing("curve"))?,
                index: c.index.ok_or_else(|| missing("index"))?,
            },
            "restriction" => ClaimKind::Restriction {
                curve: c.curve.clone().ok_or_else(|| missing("curve"))?,
                index: c.index.ok_or_else(|| missing("index"))?,
            },
            "multiplicity" => ClaimKind::Multiplicity {
                var: c.var.clone().ok_or_else(|| missing("var"))?,
            },
            "pullback" => ClaimKind::Pullback,
            "exceptional" => ClaimKind::Exceptional {
                index: c.index.ok_or_else(|| missing("index"))?,
                through: c.through.clone().unwrap_or_default(),
            },
            other => return Err(cx.invalid(&c.kind, format!("unknown claim kind {other:?}"))),
        };
        let relation = match &c.relation {
            None => ClaimRelation::Le,
            Some(r) => match r.get_ref().as_str() {
                "le" | "<=" => ClaimRelation::Le,
                "lt" | "<" => ClaimRelation::Lt,
                other => return Err(cx.invalid(r, format!("unknown relation {other:?}"))),
            },
        };
        claims.push(ClaimSpec {
            kind,
            description: c.description,
            anchor: c.anchor,
            form: c
                .form
                .as_ref()
                .map(|f| cx.expr("form", f, expr::parse_param_form))
                .transpose()?,
            relation,
            bound: c
                .bound
                .as_ref()
                .map(|f| cx.expr("bound", f, expr::parse_lambda_poly))
                .transpose()?,
            advisory: c.advisory,
        });
    }
    Ok(CertificateScript {
        id: h.id,
        surface: h.surface,
        lambda,
        decomposition,
        blowup,
        claims,
    })
}

/// Whether a TOML document holds a surface or a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocumentKind {
    Surface,
    Certificate,
}

pub fn document_kind(text: &str, source_name: &str) -> Result<Option<DocumentKind>, FormatError> {
    let cx = Ctx { name: source_name, text };
    let table: toml::Table = cx.parse()?;
    Ok(if table.contains_key("surface") {
        Some(DocumentKind::Surface)
    } else if table.contains_key("certificate") {
        Some(DocumentKind::Certificate)
    } else {
        None
    })
}
