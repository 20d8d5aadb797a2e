#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wdp::catalog::Catalog;
use wdp_core::blowup_lc::Certificate;
use wdp_core::exactnum::{linalg, Assignment};
use wdp_core::geometry::SurfaceModel;
use wdp_core::positivity::{self, QDivisor, VolumeProfile};
use wdp_core::Rational;

pub const CASE_C: [&str; 3] = ["S45", "S81", "S117"];

pub fn catalog() -> Catalog {
    Catalog::embedded().expect("embedded data parses")
}

pub fn surface(name: &str) -> SurfaceModel {
    catalog()
        .surfaces
        .into_iter()
        .find(|s| s.name() == name)
        .unwrap_or_else(|| panic!("no surface {name}"))
}

pub fn minus_k(s: &SurfaceModel) -> QDivisor {
    positivity::anticanonical(s).unwrap()
}

pub fn irreducible(s: &SurfaceModel) -> Vec<String> {
    s.irreducible_curves().iter().map(|c| c.label.clone()).collect()
}

/// `Σ c_i C_i` over the irreducible curves, each `c_i = n/d` with `n ≤ 24`, `d ≤ 12`.
pub fn random_effective(s: &SurfaceModel, rng: &mut ChaCha8Rng) -> QDivisor {
    loop {
        let mut d = QDivisor::zero();
        for l in irreducible(s) {
            if rng.gen_bool(0.75) {
                d = d.with(&l, Rational::frac(rng.gen_range(0..=24), rng.gen_range(1..=12)));
            }
        }
        if !d.is_zero() {
            return d;
        }
    }
}

/// Nef part, orthogonality, negative definiteness and `vol = P²` for one divisor.
pub fn zariski_invariants(d: &QDivisor, s: &SurfaceModel) -> Result<(), String> {
    let z = positivity::zariski(d, s).map_err(|e| format!("{d}: {e}"))?;
    let sum = &z.nef_part + &z.negative_part;
    for l in s.table().basis() {
        let lhs = positivity::dot_curve(&sum, l, s).unwrap();
        let rhs = positivity::dot_curve(d, l, s).unwrap();
        if lhs != rhs {
            return Err(format!("{d}: (P + N).{l} = {lhs} but D.{l} = {rhs}"));
        }
    }
    for l in irreducible(s) {
        let p = positivity::dot_curve(&z.nef_part, &l, s).unwrap();
        if p.is_negative() {
            return Err(format!("{d}: P.{l} = {p} < 0"));
        }
    }
    let support: Vec<String> = z.negative_part.terms().map(|(l, _)| l.to_string()).collect();
    for (l, c) in z.negative_part.terms() {
        if !c.is_positive() {
            return Err(format!("{d}: coefficient {c} of {l} in N"));
        }
        let p = positivity::dot_curve(&z.nef_part, l, s).unwrap();
        if !p.is_zero() {
            return Err(format!("{d}: P.{l} = {p} for {l} in supp N"));
        }
    }
    if !support.is_empty() {
        let gram: linalg::Matrix = support
            .iter()
            .map(|a| support.iter().map(|b| s.table().get(a, b).unwrap().clone()).collect())
            .collect();
        if !linalg::is_negative_definite(&gram) {
            return Err(format!("{d}: supp N = {support:?} is not negative definite"));
        }
    }
    let vol = positivity::volume(d, s).unwrap();
    let p2 = positivity::dot(&z.nef_part, &z.nef_part, s).unwrap();
    if vol != p2 {
        return Err(format!("{d}: vol = {vol} but P^2 = {p2}"));
    }
    Ok(())
}

/// Adjacent pieces agree at every interior breakpoint; zero at the end.
pub fn profile_continuity(p: &VolumeProfile) -> Result<(), String> {
    let bps = p.profile.breakpoints();
    let pieces = p.profile.pieces();
    for j in 1..pieces.len() {
        let (l, r) = (pieces[j - 1].eval(&bps[j]), pieces[j].eval(&bps[j]));
        if l != r {
            return Err(format!("{}: jump at {}: {l} vs {r}", p.direction, bps[j]));
        }
    }
    let end = pieces.last().unwrap().eval(bps.last().unwrap());
    if !end.is_zero() {
        return Err(format!("{}: vol at tau = {end}", p.direction));
    }
    Ok(())
}

fn on_grid(x: &Rational) -> bool {
    (x * &Rational::integer(64)).is_integer()
}

/// Every claim's exact maximum dominates the 1/64-grid maximum, with equality
/// when every vertex of the polytope lies on the grid.
pub fn grid_agreement(c: &Certificate) -> Result<usize, String> {
    let p = &c.polytope;
    let vars = p.variables().to_vec();
    let vertices = p.vertices().map_err(|e| e.to_string())?;
    let all_on_grid = vertices.iter().all(|v| v.values().all(on_grid));
    let steps: Vec<(i64, i64)> = vars
        .iter()
        .map(|v| {
            let lo = vertices.iter().map(|x| x[v].clone()).min().unwrap();
            let hi = vertices.iter().map(|x| x[v].clone()).max().unwrap();
            let lo = (&lo * &Rational::integer(64)).floor();
            let hi = (&hi * &Rational::integer(64)).floor();
            (i64::try_from(lo).unwrap(), i64::try_from(hi).unwrap() + 1)
        })
        .collect();
    let mut points: Vec<Assignment> = vec![Assignment::new()];
    for (v, &(lo, hi)) in vars.iter().zip(&steps) {
        points = points
            .into_iter()
            .flat_map(|at| {
                (lo..=hi).map(move |i| {
                    let mut at = at.clone();
                    at.insert(v.clone(), Rational::frac(i, 64));
                    at
                })
            })
            .collect();
    }
    let inside: Vec<Assignment> = points.into_iter().filter(|at| p.contains(at).unwrap()).collect();
    if inside.is_empty() {
        return Err(format!("{}: no grid point inside the polytope", c.id));
    }
    for claim in &c.claims {
        let grid_max = inside.iter().map(|at| claim.form.eval(at).unwrap()).max().unwrap();
        let exact = &claim.verdict.max;
        if grid_max > *exact {
            return Err(format!("{} {}: grid max {grid_max} exceeds exact max {exact}", c.id, claim.kind.name()));
        }
        if all_on_grid && grid_max != *exact {
            return Err(format!("{} {}: grid max {grid_max} differs from {exact}", c.id, claim.kind.name()));
        }
        if !p.contains(&claim.verdict.witness).unwrap() || claim.form.eval(&claim.verdict.witness).unwrap() != *exact {
            return Err(format!("{} {}: witness does not attain the maximum", c.id, claim.kind.name()));
        }
        let grid_holds = claim.relation.holds(&grid_max, &claim.bound);
        if claim.holds() && !grid_holds {
            return Err(format!("{} {}: holds exactly but fails on the grid", c.id, claim.kind.name()));
        }
    }
    Ok(inside.len())
}
