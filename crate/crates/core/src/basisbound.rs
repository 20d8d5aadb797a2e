//! Basis-type multiplicity bounds along a curve: the exact integral
//! invariant, the proportional shortcut and a discrete filtration count.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::geometry::SurfaceModel;
use crate::positivity::{self, QDivisor};
use crate::wps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Integral,
    Proportional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisBound {
    pub curve: String,
    pub s_value: Rational,
    pub tau: Rational,
    pub method: Method,
}

/// `(1/D²) ∫₀^τ vol(D - xC) dx`.
pub fn s_invariant(d: &QDivisor, c: &str, s: &SurfaceModel) -> Result<BasisBound> {
    let vol = positivity::volume(d, s)?;
    if !vol.is_positive() {
        return Err(Error::InvalidArgument(format!("{d} is not big")));
    }
    let profile = positivity::volume_profile(d, c, s)?;
    let s_value = profile.integral().checked_div(&vol)?;
    let proportional = profile.profile.pieces().len() == 1 && profile.nef_threshold == profile.pe_threshold;
    Ok(BasisBound {
        curve: c.to_string(),
        s_value,
        tau: profile.pe_threshold,
        method: if proportional {
            Method::Proportional
        } else {
            Method::Integral
        },
    })
}

/// `1/(3μ)` for a curve `C ~ μD`.
pub fn proportional_bound(mu: &Rational) -> Result<Rational> {
    if !mu.is_positive() {
        return Err(Error::InvalidArgument(format!("mu = {mu} must be positive")));
    }
    (Rational::integer(3) * mu).recip()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationCounts {
    pub k: u64,
    /// `r[i] = h⁰(kD - iC)`, down to the last nonzero term.
    pub r: Vec<u128>,
    pub discrete_bound: Rational,
}

impl FiltrationCounts {
    /// First `i` with `r_i = 0`.
    pub fn termination_index(&self) -> usize {
        self.r.len()
    }
}

/// Counts for `D = -K` filtered by order of vanishing along `{x_j = 0}`.
pub fn discrete_filtration(s: &SurfaceModel, curve: &str, k: u64) -> Result<FiltrationCounts> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let q = s.quintuple();
    let c = s.curve(curve)?;
    let undefined = |why: &str| Err(Error::OracleUndefined(format!("{curve}: {why}")));
    let Some(j) = c.coordinate_section(q) else {
        return undefined("not a full coordinate section");
    };
    if s.spec().relations.iter().any(|r| r.lhs == curve) {
        return undefined("the coordinate section is reducible");
    }
    if s.spec().monomials.iter().all(|m| m[j] > 0) {
        return undefined("the defining polynomial is divisible by the coordinate");
    }
    let top = k as i64 * s.amplitude();
    let aj = q.weights()[j] as i64;
    let table = wps::monomial_table(top as usize, q);
    let mut r: Vec<u128> = Vec::new();
    let mut i = 0i64;
    loop {
        let v = wps::section_dim_from(&table, top - i * aj, q);
        if v == 0 {
            break;
        }
        r.push(v);
        i += 1;
    }
    let r0 = r.first().copied().unwrap_or(0);
    if r0 == 0 {
        return Err(Error::InvalidArgument(format!("h0({k}(-K)) vanishes")));
    }
    let tail: u128 = r.iter().skip(1).sum();
    let discrete_bound = Rational::from_u128(tail) / (Rational::integer(k as i64) * Rational::from_u128(r0));
    Ok(FiltrationCounts {
        k,
        r,
        discrete_bound,
    })
}

/// One rung of a k-ladder that failed to approach `s` as expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderWarning {
    pub k: u64,
    pub next_k: u64,
    pub message: String,
}

/// Discrete bounds for each `k`, plus warnings where
/// `|b(k') - s| > |b(k) - s| + 1/k` for consecutive rungs.
pub fn filtration_ladder(
    s: &SurfaceModel,
    curve: &str,
    ks: &[u64],
    s_value: &Rational,
) -> Result<(Vec<FiltrationCounts>, Vec<LadderWarning>)> {
    if ks.windows(2).any(|w| w[0] >= w[1]) || ks.contains(&0) {
        return Err(Error::InvalidArgument("k ladder must be positive and increasing".into()));
    }
    let counts: Vec<FiltrationCounts> = ks
        .iter()
        .map(|&k| discrete_filtration(s, curve, k))
        .collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    for w in counts.windows(2) {
        let e0 = (&w[0].discrete_bound - s_value).abs();
        let e1 = (&w[1].discrete_bound - s_value).abs();
        if e1 > &e0 + Rational::frac(1, w[0].k as i64) {
            warnings.push(LadderWarning {
                k: w[0].k,
                next_k: w[1].k,
                message: format!(
                    "discrete bound moved away from {s_value}: |{} - s| > |{} - s| + 1/{}",
                    w[1].discrete_bound, w[0].discrete_bound, w[0].k
                ),
            });
        }
    }
    Ok((counts, warnings))
}

/// Whether a hypothesis cap covers the basis-type bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub curve: String,
    pub cap: Rational,
    pub s_value: Rational,
    /// `cap - s_value`; negative when the cap is too small.
    pub slack: Rational,
}

impl Admissibility {
    pub fn new(curve: &str, cap: Rational, s_value: Rational) -> Self {
        Admissibility {
            curve: curve.to_string(),
            slack: &cap - &s_value,
            cap,
            s_value,
        }
    }

    pub fn admissible(&self) -> bool {
        !self.slack.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn proportional() {
        assert_eq!(proportional_bound(&q!(1)).unwrap(), q!(1, 3));
        assert_eq!(proportional_bound(&q!(7, 9)).unwrap(), q!(3, 7));
        assert_eq!(proportional_bound(&q!(2)).unwrap(), q!(1, 6));
        assert!(proportional_bound(&q!(0)).is_err());
        assert!(proportional_bound(&q!(-1)).is_err());
    }

    #[test]
    fn admissibility() {
        let ok = Admissibility::new("C_x", q!(8, 21), q!(1, 3));
        assert!(ok.admissible());
        assert_eq!(ok.slack, q!(1, 21));
        assert!(!Admissibility::new("R_x", q!(1, 5), q!(676, 1701)).admissible());
    }
}
