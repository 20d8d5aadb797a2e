use wdp_core::q;
use wdp_core::wps::{self, Quintuple};

const SHIPPED: [([u64; 4], u64); 7] = [
    ([1, 3, 5, 7], 15),
    ([2, 3, 4, 5], 12),
    ([7, 15, 19, 32], 64),
    ([7, 19, 25, 41], 82),
    ([7, 10, 15, 19], 45),
    ([7, 18, 27, 37], 81),
    ([7, 26, 39, 55], 117),
];

fn quintuples() -> impl Iterator<Item = Quintuple> {
    SHIPPED.iter().map(|&(w, d)| Quintuple::new(w, d).unwrap())
}

/// Coefficients of `∏(1 - t^{a_i})` up to degree `m`.
fn denominator(q: &Quintuple, m: usize) -> Vec<i128> {
    let mut p = vec![0i128; m + 1];
    p[0] = 1;
    for &w in &q.weights() {
        let w = w as usize;
        for j in (w..=m).rev() {
            p[j] -= p[j - w];
        }
    }
    p
}

fn brute_count(m: u64, w: [u64; 4]) -> u128 {
    let mut n = 0;
    for i in 0..=m / w[0] {
        for j in 0..=(m - i * w[0]) / w[1] {
            for k in 0..=(m - i * w[0] - j * w[1]) / w[2] {
                if (m - i * w[0] - j * w[1] - k * w[2]).is_multiple_of(w[3]) {
                    n += 1;
                }
            }
        }
    }
    n
}

#[test]
fn hilbert_series_identity_to_200() {
    const M: usize = 200;
    for q in quintuples() {
        let h: Vec<i128> = (0..=M as i64).map(|m| wps::section_dim(m, &q) as i128).collect();
        let p = denominator(&q, M);
        for m in 0..=M {
            let conv: i128 = (0..=m).map(|j| h[j] * p[m - j]).sum();
            let expected = i128::from(m == 0) - i128::from(m == q.degree() as usize);
            assert_eq!(conv, expected, "{q} at t^{m}");
        }
    }
}

#[test]
fn monomial_counts_match_enumeration() {
    for q in quintuples() {
        for m in 0..=120 {
            assert_eq!(wps::count_monomials(m as i64, &q), brute_count(m, q.weights()), "{q} degree {m}");
        }
    }
}

#[test]
fn section_dim_values() {
    let s15 = Quintuple::new([1, 3, 5, 7], 15).unwrap();
    assert_eq!(wps::section_dim(15, &s15), 18);
    assert_eq!(wps::count_monomials(15, &s15), 19);
    assert_eq!(wps::section_dim(-1, &s15), 0);
    assert_eq!(wps::section_dim(0, &s15), 1);
    let s45 = Quintuple::new([7, 10, 15, 19], 45).unwrap();
    assert_eq!(wps::section_dim(1, &s45), 0);
    assert_eq!(wps::section_dim(6, &s45), 0);
}

#[test]
fn anticanonical_squares_and_amplitudes() {
    let expected = [
        (1, q!(1, 7)),
        (2, q!(2, 5)),
        (9, q!(54, 665)),
        (10, q!(8, 133)),
        (6, q!(54, 665)),
        (8, q!(32, 777)),
        (10, q!(30, 1001)),
    ];
    for (q, (i, k2)) in quintuples().zip(expected) {
        assert_eq!(wps::amplitude(&q), i, "{q}");
        assert_eq!(wps::anticanonical_selfint(&q).unwrap(), k2, "{q}");
        assert!(wps::is_well_formed(&q), "{q}");
        assert!(!wps::gmsy_obstructed(&q), "{q}");
    }
}

#[test]
fn obstruction_and_well_formedness() {
    assert!(wps::gmsy_obstructed(&Quintuple::new([1, 2, 3, 5], 6).unwrap()));
    assert!(!wps::is_well_formed(&Quintuple::new([2, 2, 3, 5], 11).unwrap()));
    assert!(wps::anticanonical_selfint(&Quintuple::new([1, 1, 1, 1], 4).unwrap()).is_err());
    assert!(Quintuple::new([3, 1, 5, 7], 15).is_err());
    assert!(Quintuple::new([0, 1, 5, 7], 15).is_err());
}
