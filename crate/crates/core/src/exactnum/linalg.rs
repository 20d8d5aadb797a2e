//! Dense exact linear algebra on small rational matrices.

use alloc::vec;
use alloc::vec::Vec;

use super::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                let pivot = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Unique solution of the square or overdetermined system `m·x = rhs`.
///
/// `None` when the system is inconsistent or has free variables.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let aug: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut row = row.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&cols) || pivots.len() != cols {
        return None;
    }
    Some((0..cols).map(|i| red[i][cols].clone()).collect())
}

/// Basis of the null space `{x : m·x = 0}`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..cols)
            .map(|i| {
                let mut e = vec![Rational::zero(); cols];
                e[i] = Rational::one();
                e
            })
            .collect();
    }
    let (red, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&red[r][free];
        }
        basis.push(v);
    }
    basis
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] * &inv;
            let pivot = a[c].clone();
            for (x, p) in a[i].iter_mut().zip(&pivot).skip(c) {
                *x -= &(&factor * p);
            }
        }
    }
    det
}

/// Sylvester's criterion applied to `-m`.
pub fn is_negative_definite(m: &Matrix) -> bool {
    let n = m.len();
    (1..=n).all(|k| {
        let minor: Matrix = (0..k).map(|i| m[i][..k].to_vec()).collect();
        let d = determinant(&minor);
        if k % 2 == 1 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn solves_and_ranks() {
        let m = vec![vec![q!(2), q!(1)], vec![q!(1), q!(3)]];
        assert_eq!(solve(&m, &[q!(3), q!(4)]).unwrap(), vec![q!(1), q!(1)]);
        assert_eq!(determinant(&m), q!(5));
        let sing = vec![vec![q!(1), q!(2)], vec![q!(2), q!(4)]];
        assert_eq!(rank(&sing), 1);
        assert!(solve(&sing, &[q!(1), q!(2)]).is_none());
        let ns = nullspace(&sing, 2);
        assert_eq!(ns, vec![vec![q!(-2), q!(1)]]);
    }

    #[test]
    fn negative_definiteness() {
        let l = vec![vec![q!(-23, 190), q!(3, 19)], vec![q!(3, 19), q!(-8, 95)]];
        assert!(!is_negative_definite(&l));
        assert!(is_negative_definite(&vec![vec![q!(-8, 95)]]));
    }
}
