use cluster_core::algebra::{lp_exact_div, rat, LaurentPolynomial};
use cluster_core::rank2::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

fn params_up_to(bound: u32) -> Vec<Rank2Params> {
    let mut v = Vec::new();
    for b in 1..=bound {
        for c in 1..=bound {
            if b * c <= bound {
                v.push(Rank2Params::new(b, c));
            }
        }
    }
    v
}

const KS: [i64; 9] = [-3, -2, -1, 0, 3, 4, 5, 6, 7];

// x_7 = x_2 in type A2, while the closed form for its denominator gives (-1,-1).
fn is_a2_wraparound(p: Rank2Params, k: i64) -> bool {
    p == Rank2Params::new(1, 1) && k == 7
}

#[test]
fn greedy_matches_recurrence() {
    for p in params_up_to(9) {
        for k in KS {
            let g = greedy_expand(k, p).unwrap();
            let r = rank2_var(k, p);
            if is_a2_wraparound(p, k) {
                assert_ne!(g, r);
            } else {
                assert_eq!(g, r, "{p:?} k={k}");
            }
        }
    }
}

#[test]
fn denominators_match_minimal_exponents() {
    for p in params_up_to(9) {
        for k in KS {
            let (d1, d2) = denom_vector(k, p).unwrap();
            let d = (d1.to_i64().unwrap(), d2.to_i64().unwrap());
            let m = denominator_of(&rank2_var(k, p));
            if is_a2_wraparound(p, k) {
                assert_eq!((d, m), ((-1, -1), (0, -1)));
            } else {
                assert_eq!(d, m, "{p:?} k={k}");
            }
        }
    }
    let p = Rank2Params::new(3, 3);
    assert_eq!(denom_vector(5, p).unwrap(), (BigInt::from(8), BigInt::from(3)));
    assert!(denom_vector(1, p).is_err());
    assert!(denom_vector(2, p).is_err());
}

#[test]
fn coefficients_are_positive_integers() {
    for p in params_up_to(4) {
        for k in -6..=9 {
            assert!(rank2_var(k, p).has_positive_integer_coefficients(), "{p:?} k={k}");
        }
    }
}

#[test]
fn finite_types_are_periodic() {
    for (b, c, period) in [(1, 1, 5), (1, 2, 6), (2, 1, 6), (1, 3, 8), (3, 1, 8)] {
        let p = Rank2Params::new(b, c);
        assert_eq!(finite_type_census(p, 40), Census::Finite(period as usize));
        for k in -4..=6 {
            assert_eq!(rank2_var(k, p), rank2_var(k + period, p), "{p:?} k={k}");
        }
    }
}

#[test]
fn infinite_types_have_growing_denominators() {
    for p in [(2, 2), (1, 4), (4, 1), (2, 3), (3, 3), (1, 5)] {
        let p = Rank2Params::new(p.0, p.1);
        let d: Vec<(BigInt, BigInt)> = (3..=16).map(|k| denom_vector(k, p).unwrap()).collect();
        assert!(d.windows(3).all(|w| w[0].0 < w[2].0 && w[0].1 < w[2].1), "{p:?}");
        assert_eq!(finite_type_census(p, 30), Census::InfiniteEvidence);
    }
}

// U_l(z + 1/z) (z - 1/z) = z^l - z^-l as Laurent polynomials in z.
#[test]
fn chebyshev_trigonometric_identity() {
    let z = LaurentPolynomial::var(1, 0);
    let zi = LaurentPolynomial::monomial(vec![-1], rat(1));
    let t = &z + &zi;
    let s = &z - &zi;
    for l in 0..=8usize {
        let coeffs = chebyshev_u(l);
        let mut u = LaurentPolynomial::zero(1);
        for (i, a) in coeffs.iter().enumerate() {
            u = &u + &t.pow(i as u32).scale(&a.clone().into());
        }
        let lhs = &u * &s;
        let rhs = &LaurentPolynomial::monomial(vec![l as i64], rat(1)) - &LaurentPolynomial::monomial(vec![-(l as i64)], rat(1));
        assert_eq!(lhs, rhs, "l={l}");
    }
}

// x_{m-1} x_{m+2}^b = ((x_{m+1}^c + 1)^b - 1) / x_{m+1} + x_{m+3} for odd m, b and c swapped for even m.
#[test]
fn window_shift_identity() {
    for (b, c) in [(1, 1), (2, 1), (1, 3), (3, 3), (2, 2)] {
        let p = Rank2Params::new(b, c);
        for m in -3i64..=4 {
            let (e1, e2) = if m.rem_euclid(2) == 1 { (b, c) } else { (c, b) };
            let x = |k: i64| rank2_var(k, p);
            let lhs = &x(m - 1) * &x(m + 2).pow(e1);
            let one = LaurentPolynomial::one(2);
            let num = &(&x(m + 1).pow(e2) + &one).pow(e1) - &one;
            let rhs = &lp_exact_div(&num, &x(m + 1)).unwrap() + &x(m + 3);
            assert_eq!(lhs, rhs, "b={b} c={c} m={m}");
        }
    }
}

#[test]
fn maximal_path_stays_below_diagonal() {
    for (d1, d2) in [(8, 3), (3, 8), (5, 5), (0, 4), (7, 0), (21, 8)] {
        let path = max_dyck_path(d1, d2).unwrap();
        assert_eq!(path.horizontal().len(), d1 as usize);
        assert_eq!(path.vertical().len(), d2 as usize);
        for (x, y) in path.points() {
            assert!((y as i64) * d1 <= (x as i64) * d2 || d1 == 0);
        }
    }
    assert!(max_dyck_path(-1, 2).is_err());
}

#[test]
fn collection_census_matches_coefficient_sums() {
    let p = Rank2Params::new(3, 3);
    assert_eq!(compatible_collections(&max_dyck_path(3, 1).unwrap(), p).len(), 9);
    let sizes = compatible_collections(&max_dyck_path(1, 0).unwrap(), p);
    assert_eq!(sizes.len(), 2);
    assert!(sizes.iter().any(|c| c.s_h.is_empty() && c.s_v.is_empty()));
}

#[test]
fn denominator_recurrence_matches_polynomials() {
    for p in params_up_to(6) {
        let d = denominator_recurrence(p, 9);
        for (i, di) in d.iter().enumerate() {
            let m = denominator_of(&rank2_var(i as i64 + 1, p));
            assert_eq!((di.0.to_i64().unwrap(), di.1.to_i64().unwrap()), m, "{p:?} k={}", i + 1);
        }
    }
}
