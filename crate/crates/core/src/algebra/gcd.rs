//! Multivariate gcd over the rationals by recursive primitive remainder sequences.


use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::laurent::{poly_exact_div, LaurentPolynomial, Rat};
use super::modgcd::{coprime_by_specialization, modular_gcd, IntPoly};

/// Scale so that coefficients are coprime integers and the graded-lex leading coefficient is positive.
pub fn normalize(p: &LaurentPolynomial) -> LaurentPolynomial {
    if p.is_zero() {
        return p.clone();
    }
    let f = normalizing_factor(p);
    p.scale(&f)
}

/// The rational k with k*p integral, primitive and positively led.
pub(crate) fn normalizing_factor(p: &LaurentPolynomial) -> Rat {
    let mut den_lcm = BigInt::one();
    for c in p.terms().values() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in p.terms().values() {
        let scaled = c.numer() * (&den_lcm / c.denom());
        g = g.gcd(&scaled);
    }
    let mut k = BigRational::new(den_lcm, g);
    if p.leading_coeff().is_negative() {
        k = -k;
    }
    k
}

fn one_like(p: &LaurentPolynomial) -> LaurentPolynomial {
    LaurentPolynomial::one(p.arity())
}

/// Greatest common divisor of two polynomials with nonnegative exponents.
///
/// The result is primitive with positive leading coefficient; gcd(p, 0) is p normalized.
pub fn poly_gcd(a: &LaurentPolynomial, b: &LaurentPolynomial) -> LaurentPolynomial {
    assert_eq!(a.arity(), b.arity(), "arity mismatch");
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let m: Vec<i64> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let pa = a.shift(&ma.iter().map(|x| -x).collect::<Vec<_>>());
    let pb = b.shift(&mb.iter().map(|x| -x).collect::<Vec<_>>());
    let g = if pa.len() <= pb.len() && poly_exact_div(&pb, &pa).is_some() {
        pa
    } else if poly_exact_div(&pa, &pb).is_some() {
        pb
    } else if certainly_coprime(&pa, &pb) {
        one_like(&pa)
    } else if let Some(g) = modular(&normalize(&pa), &normalize(&pb)) {
        g
    } else {
        gcd_rec(&pa, &pb)
    };
    normalize(&g.shift(&m))
}

/// True only when gcd(a, b) is certainly a constant. For each variable x_v the other variables
/// are specialized mod p where the leading coefficient of a in x_v survives; the gcd then
/// specializes to a divisor of the univariate gcd of the same degree in x_v.
fn certainly_coprime(a: &LaurentPolynomial, b: &LaurentPolynomial) -> bool {
    coprime_by_specialization(&int_poly(&normalize(a)), &int_poly(&normalize(b)))
}

fn int_poly(p: &LaurentPolynomial) -> IntPoly {
    p.terms().iter().map(|(e, c)| (e.clone(), c.numer().clone())).collect()
}

/// Modular gcd; inputs must be primitive with integer coefficients, as `normalize` leaves them.
fn modular(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    let g = modular_gcd(&int_poly(a), &int_poly(b))?;
    Some(normalize(&LaurentPolynomial::from_terms(a.arity(), g.into_iter().map(|(e, c)| (e, Rat::from_integer(c))))))
}

fn main_variable(a: &LaurentPolynomial) -> Option<usize> {
    (0..a.arity()).rev().find(|&v| a.degree_in(v) > 0)
}

fn gcd_rec(a: &LaurentPolynomial, b: &LaurentPolynomial) -> LaurentPolynomial {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return one_like(a);
    }
    if a.len() <= b.len() && poly_exact_div(b, a).is_some() {
        return normalize(a);
    }
    if b.len() < a.len() && poly_exact_div(a, b).is_some() {
        return normalize(b);
    }
    if certainly_coprime(a, b) {
        return one_like(a);
    }
    let va = main_variable(a);
    let vb = main_variable(b);
    let v = va.max(vb).unwrap();
    let in_a = a.degree_in(v) > 0;
    let in_b = b.degree_in(v) > 0;
    if !in_b {
        return gcd_rec(&content(a, v), b);
    }
    if !in_a {
        return gcd_rec(a, &content(b, v));
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = poly_exact_div(a, &ca).expect("content divides");
    let pb = poly_exact_div(b, &cb).expect("content divides");
    let c = gcd_rec(&ca, &cb);
    let h = prs(pa, pb, v);
    normalize(&(&c * &h))
}

/// Gcd of the coefficients of p viewed as a polynomial in x_v.
fn content(p: &LaurentPolynomial, v: usize) -> LaurentPolynomial {
    let deg = p.degree_in(v);
    let mut g = LaurentPolynomial::zero(p.arity());
    for d in (0..=deg).rev() {
        let c = p.coeff_in(v, d);
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { normalize(&c) } else { gcd_rec(&g, &c) };
        if g.is_constant() {
            return one_like(p);
        }
    }
    g
}

fn primitive_part(p: &LaurentPolynomial, v: usize) -> LaurentPolynomial {
    let c = content(p, v);
    normalize(&poly_exact_div(p, &c).expect("content divides"))
}

fn prem(a: &LaurentPolynomial, b: &LaurentPolynomial, v: usize) -> LaurentPolynomial {
    let db = b.degree_in(v);
    let lcb = b.coeff_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = r.coeff_in(v, dr);
        let mut e = vec![0; a.arity()];
        e[v] = dr - db;
        let t = &lcr * &LaurentPolynomial::monomial(e, Rat::one());
        r = &(&lcb * &r) - &(&t * b);
        r = normalize(&r);
    }
    r
}

fn prs(a: LaurentPolynomial, b: LaurentPolynomial, v: usize) -> LaurentPolynomial {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            return primitive_part(&g, v);
        }
        if r.degree_in(v) == 0 {
            return one_like(&f);
        }
        f = g;
        g = primitive_part(&r, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::rat;

    fn x(i: usize) -> LaurentPolynomial {
        LaurentPolynomial::var(2, i)
    }
    fn c(k: i64) -> LaurentPolynomial {
        LaurentPolynomial::constant(2, rat(k))
    }

    #[test]
    fn univariate() {
        let a = &x(0).pow(2) - &c(1);
        let b = &x(0).pow(2) - &x(0);
        assert_eq!(poly_gcd(&a, &b), &x(0) - &c(1));
    }

    #[test]
    fn with_zero() {
        let p = &x(0).scale(&rat(-4)) + &c(6);
        assert_eq!(poly_gcd(&p, &LaurentPolynomial::zero(2)), &x(0).scale(&rat(2)) - &c(3));
    }

    #[test]
    fn bivariate_common_factor() {
        let f = &c(1) + &x(0);
        let a = &f.pow(2) * &x(1);
        let b = &f * &x(1).pow(2);
        let g = poly_gcd(&a, &b);
        assert_eq!(g, &f * &x(1));
        // trial division oracle
        assert!(poly_exact_div(&a, &g).is_some());
        assert!(poly_exact_div(&b, &g).is_some());
    }

    #[test]
    fn modular_agrees_with_prs() {
        let f = &(&x(0).pow(2) + &x(1).scale(&rat(3))) - &c(7);
        let g = &(&x(0) * &x(1)) + &c(2);
        let h = &x(1).pow(2) - &x(0);
        let a = &(&f * &g) * &h;
        let b = &(&f * &h).scale(&rat(6)) * &(&x(0) + &c(5));
        let heu = modular(&normalize(&a), &normalize(&b)).unwrap();
        assert_eq!(heu, normalize(&gcd_rec(&a, &b)));
        assert_eq!(heu, normalize(&(&f * &h)));
    }

    #[test]
    fn coprime() {
        let a = &(&x(0) + &x(1)) + &c(1);
        let b = &x(0) + &c(1);
        assert!(poly_gcd(&a, &b).is_one());
    }
}
