//! Combinatorics of weighted projective 3-space.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Weights `a0 ≤ a1 ≤ a2 ≤ a3` and the degree `d` of a hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Quintuple {
    weights: [u64; 4],
    degree: u64,
}

impl Quintuple {
    pub fn new(weights: [u64; 4], degree: u64) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidQuintuple(format!("weights {weights:?} must be positive")));
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidQuintuple(format!("weights {weights:?} must be sorted ascending")));
        }
        if degree == 0 {
            return Err(Error::InvalidQuintuple("degree must be positive".into()));
        }
        Ok(Quintuple { weights, degree })
    }

    pub fn weights(&self) -> [u64; 4] {
        self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn weight_product(&self) -> u64 {
        self.weights.iter().product()
    }
}

impl fmt::Display for Quintuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3] = self.weights;
        write!(f, "({a0},{a1},{a2},{a3}; {})", self.degree)
    }
}

/// `I = a0 + a1 + a2 + a3 - d`.
pub fn amplitude(q: &Quintuple) -> i64 {
    q.weights.iter().sum::<u64>() as i64 - q.degree as i64
}

/// `(-K)² = I²d / (a0 a1 a2 a3)`.
pub fn anticanonical_selfint(q: &Quintuple) -> Result<Rational> {
    let i = amplitude(q);
    if i <= 0 {
        return Err(Error::NotFano(i));
    }
    Ok(Rational::frac(i * i * q.degree as i64, q.weight_product() as i64))
}

/// Every triple of weights is coprime and every pairwise gcd divides `d`.
pub fn is_well_formed(q: &Quintuple) -> bool {
    let w = q.weights;
    for i in 0..4 {
        for j in i + 1..4 {
            if !q.degree.is_multiple_of(w[i].gcd(&w[j])) {
                return false;
            }
            for k in j + 1..4 {
                if w[i].gcd(&w[j]).gcd(&w[k]) != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// `I > 3 a0`: no orbifold Kähler–Einstein metric exists.
pub fn gmsy_obstructed(q: &Quintuple) -> bool {
    amplitude(q) > 3 * q.weights[0] as i64
}

/// Number of monomials of weighted degree `m`, by one-weight-at-a-time DP.
pub fn count_monomials(m: i64, q: &Quintuple) -> u128 {
    if m < 0 {
        return 0;
    }
    monomial_table(m as usize, q)[m as usize]
}

/// `count[j]` for every `0 ≤ j ≤ m`.
pub fn monomial_table(m: usize, q: &Quintuple) -> Vec<u128> {
    let mut count = vec![0u128; m + 1];
    count[0] = 1;
    for &w in &q.weights {
        let w = w as usize;
        for j in w..=m {
            count[j] += count[j - w];
        }
    }
    count
}

/// `h⁰(S, O(m)) = count(m) - count(m - d)`.
pub fn section_dim(m: i64, q: &Quintuple) -> u128 {
    if m < 0 {
        return 0;
    }
    let table = monomial_table(m as usize, q);
    section_dim_from(&table, m, q)
}

/// `section_dim` read off a precomputed `monomial_table`.
pub fn section_dim_from(table: &[u128], m: i64, q: &Quintuple) -> u128 {
    if m < 0 {
        return 0;
    }
    let lower = m - q.degree as i64;
    let sub = if lower < 0 { 0 } else { table[lower as usize] };
    table[m as usize].saturating_sub(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn s15() -> Quintuple {
        Quintuple::new([1, 3, 5, 7], 15).unwrap()
    }

    #[test]
    fn amplitude_and_degree() {
        assert_eq!(amplitude(&s15()), 1);
        assert_eq!(amplitude(&Quintuple::new([7, 10, 15, 19], 45).unwrap()), 6);
        assert_eq!(anticanonical_selfint(&s15()).unwrap(), q!(1, 7));
        let bad = Quintuple::new([1, 1, 1, 1], 5).unwrap();
        assert_eq!(anticanonical_selfint(&bad), Err(Error::NotFano(-1)));
        assert!(Quintuple::new([3, 1, 5, 7], 15).is_err());
        assert!(Quintuple::new([0, 1, 5, 7], 15).is_err());
    }

    #[test]
    fn well_formed_and_obstruction() {
        assert!(is_well_formed(&s15()));
        assert!(is_well_formed(&Quintuple::new([7, 10, 15, 19], 45).unwrap()));
        assert!(!is_well_formed(&Quintuple::new([2, 4, 6, 9], 12).unwrap()));
        assert!(!gmsy_obstructed(&s15()));
        assert!(!gmsy_obstructed(&Quintuple::new([1, 1, 1, 1], 1).unwrap()));
        assert!(gmsy_obstructed(&Quintuple::new([1, 2, 2, 2], 2).unwrap()));
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_monomials(0, &s15()), 1);
        assert_eq!(count_monomials(-1, &s15()), 0);
        assert_eq!(count_monomials(3, &s15()), 2);
        assert_eq!(section_dim(0, &s15()), 1);
        assert_eq!(section_dim(14, &s15()), count_monomials(14, &s15()));
    }
}
