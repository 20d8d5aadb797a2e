//! Command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wdp_core::basisbound::{self, Method};
use wdp_core::blowup_lc;
use wdp_core::geometry::{self, EntrySource, SurfaceModel};
use wdp_core::positivity::{self, QDivisor};
use wdp_core::{wps, Rational};

use crate::catalog::{Catalog, SURFACE_DIR_ENV};
use crate::expr;
use crate::report::{self, show, RunOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wdp", version, about = "Exact intersection theory and delta-invariant certificates for weighted del Pezzo hypersurfaces")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Treat report warnings as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Extra surface or certificate definition files.
    #[arg(long, global = true)]
    pub file: Vec<PathBuf>,
    /// Directory of definition files overriding the shipped ones.
    #[arg(long, global = true, env = SURFACE_DIR_ENV)]
    pub surface_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quintuple, singularities, intersection table and alpha.
    Info { surface: String },
    /// Volume profile of D - xC, or its value at one x.
    Volume {
        surface: String,
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value = "-K", allow_hyphen_values = true)]
        divisor: String,
    },
    /// Zariski decomposition of a divisor such as "-K - 1/2*L_xz".
    Zariski {
        surface: String,
        #[arg(default_value = "-K", allow_hyphen_values = true)]
        divisor: String,
    },
    /// Weighted blow-up of a singular point.
    Blowup { surface: String, center: String },
    /// Basis-type bound along a curve, with an optional discrete ladder.
    BasisBound {
        surface: String,
        curve: String,
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
    },
    /// Log canonical threshold of a curve germ at a coordinate point.
    LctGerm { surface: String, center: String, curve: String },
    /// Replay certificate scripts.
    Verify {
        surfaces: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Certificates, basis-type admissibility and delta windows for every surface.
    Report { surfaces: Vec<String> },
}

/// Rendered output, diagnostics and exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub error: String,
    pub code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome::with_code(output, 0)
    }

    fn with_code(output: String, code: u8) -> Self {
        Outcome {
            output,
            error: String::new(),
            code,
        }
    }

    fn failure(error: String) -> Self {
        Outcome {
            output: String::new(),
            error,
            code: 2,
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational> {
    expr::parse_rational(s).with_context(|| format!("invalid rational {s:?}"))
}

fn divisor_arg(s: &SurfaceModel, text: &str) -> Result<QDivisor> {
    let k = positivity::anticanonical(s)?;
    let mut d = QDivisor::zero();
    for (var, c) in expr::parse_linear(text).with_context(|| format!("invalid divisor {text:?}"))? {
        match var.as_deref() {
            None => bail!("divisor {text:?} has a constant term"),
            Some("K") => d = &d + &k.scale(&-c),
            Some(label) => {
                s.curve(label)?;
                d = &d + &QDivisor::curve(label).scale(&c);
            }
        }
    }
    Ok(d)
}

fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn info(s: &SurfaceModel, format: Format) -> Result<String> {
    let q = s.quintuple();
    let k2 = wps::anticanonical_selfint(q)?;
    let vol = positivity::volume(&positivity::anticanonical(s)?, s)?;
    let table = s.table();
    let basis = table.basis();
    let mut entries = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i..] {
            let source = match table.source(a, b)? {
                EntrySource::Ambient => "ambient",
                EntrySource::Restriction => "restriction",
                EntrySource::Adjunction => "adjunction",
                EntrySource::Relations => "relations",
            };
            entries.push((a.clone(), b.clone(), table.get(a, b)?.clone(), source));
        }
    }
    let gmsy = wps::gmsy_obstructed(q);
    if format == Format::Json {
        let v = json!({
            "surface": s.name(),
            "quintuple": q.to_string(),
            "amplitude": s.amplitude(),
            "anticanonical_selfint": k2.to_string(),
            "volume_anticanonical": vol.to_string(),
            "well_formed": wps::is_well_formed(q),
            "gmsy_obstructed": gmsy,
            "alpha": s.alpha().to_string(),
            "singularities": s.singularities().map(|x| json!({"label": x.label, "type": x.type_string()})).collect::<Vec<_>>(),
            "intersections": entries.iter().map(|(a, b, v, src)| json!({"curves": [a, b], "value": v.to_string(), "source": src})).collect::<Vec<_>>(),
        });
        return Ok(json_string(&v));
    }
    let mut out = String::new();
    writeln!(out, "{} in P{}", s.name(), q)?;
    writeln!(out, "I = {}", s.amplitude())?;
    writeln!(out, "(-K)^2 = {}  (volume check {})", show(&k2), show(&vol))?;
    writeln!(out, "well-formed: {}", if wps::is_well_formed(q) { "yes" } else { "no" })?;
    writeln!(out, "GMSY obstruction (I > 3 a0): {}", if gmsy { "yes" } else { "no" })?;
    writeln!(out, "alpha = {}", show(s.alpha()))?;
    writeln!(out, "singularities:")?;
    for x in s.singularities() {
        writeln!(out, "  {} {}", x.label, x.type_string())?;
    }
    writeln!(out, "intersections:")?;
    for (a, b, v, src) in &entries {
        let lhs = if a == b { format!("{a}^2") } else { format!("{a}.{b}") };
        writeln!(out, "  {lhs} = {}  [{src}]", show(v))?;
    }
    Ok(out)
}

fn volume(s: &SurfaceModel, curve: &str, at: Option<&str>, divisor: &str, format: Format) -> Result<String> {
    let d = divisor_arg(s, divisor)?;
    let profile = positivity::volume_profile(&d, curve, s)?;
    if let Some(at) = at {
        let x = rational_arg(at)?;
        if x.is_negative() {
            bail!("x = {x} must be non-negative");
        }
        let v = profile.eval(&x).unwrap_or_else(Rational::zero);
        return Ok(match format {
            Format::Json => json_string(&json!({"curve": curve, "divisor": d.to_string(), "x": x.to_string(), "volume": v.to_string()})),
            Format::Text => format!("vol({d} - {x}*{curve}) = {}\n", show(&v)),
        });
    }
    let pw = &profile.profile;
    let pieces: Vec<(Rational, Rational, String, Vec<String>)> = pw
        .pieces()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            (
                pw.breakpoints()[i].clone(),
                pw.breakpoints()[i + 1].clone(),
                p.to_string(),
                profile.supports.get(i).cloned().unwrap_or_default(),
            )
        })
        .collect();
    if format == Format::Json {
        let v = json!({
            "surface": s.name(),
            "divisor": d.to_string(),
            "curve": curve,
            "nef_threshold": profile.nef_threshold.to_string(),
            "pe_threshold": profile.pe_threshold.to_string(),
            "integral": profile.integral().to_string(),
            "pieces": pieces.iter().map(|(lo, hi, f, sup)| json!({"from": lo.to_string(), "to": hi.to_string(), "volume": f, "negative_support": sup})).collect::<Vec<_>>(),
        });
        return Ok(json_string(&v));
    }
    let mut out = String::new();
    writeln!(out, "vol({d} - x*{curve}) on {}", s.name())?;
    for (lo, hi, f, sup) in &pieces {
        let support = if sup.is_empty() { "nef".to_string() } else { format!("negative part on {}", sup.join(", ")) };
        writeln!(out, "  {lo} <= x <= {hi}: {f}  [{support}]")?;
    }
    writeln!(out, "nef threshold = {}", show(&profile.nef_threshold))?;
    writeln!(out, "pseudoeffective threshold = {}", show(&profile.pe_threshold))?;
    writeln!(out, "integral = {}", show(&profile.integral()))?;
    Ok(out)
}

fn zariski(s: &SurfaceModel, divisor: &str, format: Format) -> Result<String> {
    let d = divisor_arg(s, divisor)?;
    let z = positivity::zariski(&d, s)?;
    let vol = positivity::dot(&z.nef_part, &z.nef_part, s)?;
    Ok(match format {
        Format::Json => json_string(&json!({
            "divisor": d.to_string(),
            "nef_part": z.nef_part.to_string(),
            "negative_part": z.negative_part.to_string(),
            "volume": vol.to_string(),
        })),
        Format::Text => format!(
            "D = {d}\nP = {}\nN = {}\nvol = P^2 = {}\n",
            z.nef_part,
            z.negative_part,
            show(&vol)
        ),
    })
}

fn blowup(s: &SurfaceModel, center: &str, format: Format) -> Result<String> {
    let chart = blowup_lc::blowup_chart(s.singularity(center)?)?;
    let transforms: Vec<(String, Rational)> = s
        .curves()
        .iter()
        .filter_map(|c| {
            let g = blowup_lc::curve_germ(s, center, &c.label, None).ok()?;
            Some((c.label.clone(), g.transform_coefficient().ok()?))
        })
        .collect();
    if format == Format::Json {
        return Ok(json_string(&json!({
            "center": center,
            "type": chart.center.type_string(),
            "discrepancy": chart.discrepancy.to_string(),
            "e_selfint": chart.e_selfint.to_string(),
            "e_sings": chart.e_sings.iter().map(|x| x.type_string()).collect::<Vec<_>>(),
            "transforms": transforms.iter().map(|(l, t)| (l.clone(), Value::String(t.to_string()))).collect::<serde_json::Map<_, _>>(),
        })));
    }
    let mut out = String::new();
    writeln!(out, "weighted blow-up of {} {}", center, chart.center.type_string())?;
    writeln!(out, "K~ = f*K + ({})E", show(&chart.discrepancy))?;
    writeln!(out, "E^2 = {}", show(&chart.e_selfint))?;
    let sings: Vec<String> = chart.e_sings.iter().map(|x| x.type_string()).collect();
    writeln!(out, "singular points on E: {}", if sings.is_empty() { "none".into() } else { sings.join(", ") })?;
    for (l, t) in &transforms {
        writeln!(out, "proper transform of {l} = f*{l} - {}E", show(t))?;
    }
    Ok(out)
}

fn basis_bound(s: &SurfaceModel, curve: &str, ks: &[u64], format: Format, strict: bool) -> Result<Outcome> {
    let d = positivity::anticanonical(s)?;
    let b = basisbound::s_invariant(&d, curve, s)?;
    let (ladder, warnings) = if ks.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        basisbound::filtration_ladder(s, curve, ks, &b.s_value)?
    };
    let method = match b.method {
        Method::Integral => "integral",
        Method::Proportional => "proportional",
    };
    let output = match format {
        Format::Json => json_string(&json!({
            "surface": s.name(),
            "curve": curve,
            "s": b.s_value.to_string(),
            "tau": b.tau.to_string(),
            "method": method,
            "ladder": ladder.iter().map(|c| json!({
                "k": c.k,
                "discrete_bound": c.discrete_bound.to_string(),
                "termination_index": c.termination_index(),
            })).collect::<Vec<_>>(),
            "warnings": warnings.iter().map(|w| w.message.clone()).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "S(-K; {curve}) = {}  [{method}, tau = {}]", show(&b.s_value), show(&b.tau))?;
            for c in &ladder {
                writeln!(
                    out,
                    "  k = {}: discrete bound {}  (r_i vanish from i = {})",
                    c.k,
                    show(&c.discrete_bound),
                    c.termination_index()
                )?;
            }
            for w in &warnings {
                writeln!(out, "  warning: {}", w.message)?;
            }
            out
        }
    };
    Ok(Outcome::with_code(output, u8::from(strict && !warnings.is_empty())))
}

fn lct_germ(s: &SurfaceModel, center: &str, curve: &str, format: Format) -> Result<String> {
    let g = blowup_lc::curve_germ(s, center, curve, None)?;
    let lct = g.lct()?;
    let c = s.curve(curve)?;
    let mu = s
        .hyperplane_mu(c)
        .ok_or_else(|| anyhow!("{curve} is not cut out by a coordinate hyperplane"))?;
    let alpha = &lct * &mu;
    let names = [geometry::COORDINATE_NAMES[g.weights[0].0], geometry::COORDINATE_NAMES[g.weights[1].0]];
    let germ: Vec<String> = g
        .monomials
        .iter()
        .map(|&(e1, e2)| {
            let mut m = [0u32; 4];
            m[g.weights[0].0] = e1 as u32;
            m[g.weights[1].0] = e2 as u32;
            geometry::monomial_string(&m)
        })
        .collect();
    Ok(match format {
        Format::Json => json_string(&json!({
            "surface": s.name(),
            "center": center,
            "curve": curve,
            "germ": germ,
            "weights": {names[0]: g.weights[0].1, names[1]: g.weights[1].1},
            "weighted_degree": g.weighted_degree(),
            "lct": lct.to_string(),
            "mu": mu.to_string(),
            "lct_anticanonical": alpha.to_string(),
        })),
        Format::Text => format!(
            "germ of {curve} at {center}: {}  wt({}) = {}, wt({}) = {}, degree {}\nlct = {}\nlct(S, {} {curve}) = {}  (alpha = {})\n",
            germ.join(" + "),
            names[0],
            g.weights[0].1,
            names[1],
            g.weights[1].1,
            g.weighted_degree(),
            show(&lct),
            mu.recip()?,
            show(&alpha),
            show(s.alpha())
        ),
    })
}

fn verify(catalog: &mut Catalog, selectors: &[String], all: bool, lambda: Option<Rational>, basis: bool, format: Format, strict: bool) -> Result<Outcome> {
    if all && !selectors.is_empty() {
        bail!("--all cannot be combined with surface names");
    }
    let names: Vec<String> = if all || selectors.is_empty() {
        catalog
            .surfaces
            .iter()
            .filter(|s| !catalog.certificates_for(s.name()).is_empty())
            .map(|s| s.name().to_string())
            .collect()
    } else {
        let mut names = Vec::new();
        for sel in selectors {
            names.push(catalog.surface(sel)?.name().to_string());
        }
        names
    };
    let selection: Vec<&SurfaceModel> = names
        .iter()
        .map(|n| catalog.surfaces.iter().find(|s| s.name() == n).expect("selected"))
        .collect();
    let report = report::run(catalog, &selection, &RunOptions { lambda, basis_bounds: basis })?;
    let output = match format {
        Format::Json => report::render_json(&report::to_json(&report)),
        Format::Text => report::render_text(&report),
    };
    let warned = report.warnings().next().is_some();
    let code = u8::from(!report.pass() || (strict && warned));
    Ok(Outcome::with_code(output, code))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let mut catalog = Catalog::load(cli.surface_dir.as_deref())?;
    for f in &cli.file {
        catalog.add_file(f)?;
    }
    let fmt = cli.format;
    match &cli.command {
        Command::Info { surface } => Ok(Outcome::ok(info(catalog.surface(surface)?, fmt)?)),
        Command::Volume { surface, curve, at, divisor } => Ok(Outcome::ok(volume(
            catalog.surface(surface)?,
            curve,
            at.as_deref(),
            divisor,
            fmt,
        )?)),
        Command::Zariski { surface, divisor } => Ok(Outcome::ok(zariski(catalog.surface(surface)?, divisor, fmt)?)),
        Command::Blowup { surface, center } => Ok(Outcome::ok(blowup(catalog.surface(surface)?, center, fmt)?)),
        Command::BasisBound { surface, curve, k } => basis_bound(catalog.surface(surface)?, curve, k, fmt, cli.strict),
        Command::LctGerm { surface, center, curve } => Ok(Outcome::ok(lct_germ(catalog.surface(surface)?, center, curve, fmt)?)),
        Command::Verify { surfaces, all, lambda } => {
            let lambda = lambda.as_deref().map(rational_arg).transpose()?;
            verify(&mut catalog, surfaces, *all, lambda, false, fmt, cli.strict)
        }
        Command::Report { surfaces } => verify(&mut catalog, surfaces, false, None, true, fmt, cli.strict),
    }
}

/// Run a parsed command; input and configuration errors give exit code 2.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(outcome) => match &cli.output {
            Some(path) => match fs::write(path, &outcome.output) {
                Ok(()) => Outcome::with_code(String::new(), outcome.code),
                Err(e) => Outcome::failure(format!("error: {}: {e}\n", path.display())),
            },
            None => outcome,
        },
        Err(e) => Outcome::failure(format!("error: {e:#}\n")),
    }
}
