//! Reduced rational functions with polynomial numerator and denominator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gcd::poly_gcd;
use super::laurent::{poly_exact_div, LaurentPolynomial, Rat};
use super::AlgebraError;

/// A fraction num/den in lowest terms.
///
/// Both parts have nonnegative exponents, share no common factor, and are scaled so that
/// together they have coprime integer coefficients with a positively led denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl RationalFunction {
    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPolynomial {
        &self.den
    }

    pub fn arity(&self) -> usize {
        self.num.arity()
    }

    pub fn zero(arity: usize) -> Self {
        RationalFunction {
            num: LaurentPolynomial::zero(arity),
            den: LaurentPolynomial::one(arity),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        Self::from_laurent(&LaurentPolynomial::constant(arity, c))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        Self::from_laurent(&LaurentPolynomial::var(arity, i))
    }

    pub fn from_laurent(p: &LaurentPolynomial) -> Self {
        rf_make(p, &LaurentPolynomial::one(p.arity())).expect("unit denominator")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial equal to this function, if the denominator is a monomial.
    pub fn to_laurent(&self) -> Option<LaurentPolynomial> {
        if !self.den.is_monomial() {
            return None;
        }
        Some(super::laurent::lp_exact_div(&self.num, &self.den).expect("monomial divides"))
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return rf_make(&(&self.num + &o.num), &self.den).unwrap();
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        rf_make(&n, &(&self.den * &o.den)).unwrap()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.arity());
        }
        // Cross-cancel first so that the final gcd works on smaller inputs.
        let g1 = poly_gcd(&self.num, &o.den);
        let g2 = poly_gcd(&o.num, &self.den);
        let n1 = poly_exact_div(&self.num, &g1).unwrap();
        let d2 = poly_exact_div(&o.den, &g1).unwrap();
        let n2 = poly_exact_div(&o.num, &g2).unwrap();
        let d1 = poly_exact_div(&self.den, &g2).unwrap();
        rf_make_coprime(&n1 * &n2, &d1 * &d2)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(rf_make_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, k: i64) -> Result<Self, AlgebraError> {
        if k >= 0 {
            let k = k as u32;
            Ok(rf_make_coprime(self.num.pow(k), self.den.pow(k)))
        } else {
            self.inv()?.pow(-k)
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul(&Self::constant(self.arity(), c.clone()))
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    /// Partial derivative with respect to variable v.
    pub fn derivative(&self, v: usize) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        rf_make(&n, &(&self.den * &self.den)).unwrap()
    }

    pub fn substitute(&self, sigma: &[RationalFunction]) -> Result<Self, AlgebraError> {
        rf_substitute(self, sigma)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.format_with(names);
        }
        let n = self.num.format_with(names);
        let d = self.den.format_with(names);
        let wrap = |s: String, p: &LaurentPolynomial| if p.len() > 1 { format!("({})", s) } else { s };
        // a product of several factors is wrapped too, so x1/(x2*x3) is not read as (x1/x2)*x3
        let d = if self.den.len() == 1 && d.contains('*') { format!("({d})") } else { wrap(d, &self.den) };
        format!("{}/{}", wrap(n, &self.num), d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Scale a coprime polynomial pair to canonical constants.
fn rf_make_coprime(num: LaurentPolynomial, den: LaurentPolynomial) -> RationalFunction {
    if num.is_zero() {
        return RationalFunction::zero(num.arity());
    }
    let k = joint_factor(&num, &den);
    RationalFunction {
        num: num.scale(&k),
        den: den.scale(&k),
    }
}

/// The rational k making k*num and k*den jointly primitive integral with den positively led.
fn joint_factor(num: &LaurentPolynomial, den: &LaurentPolynomial) -> Rat {
    let mut l = BigInt::one();
    for c in num.terms().values().chain(den.terms().values()) {
        l = l.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for c in num.terms().values().chain(den.terms().values()) {
        g = g.gcd(&(c.numer() * (&l / c.denom())));
    }
    let k = Rat::new(l, g);
    if den.leading_coeff().is_negative() {
        -k
    } else {
        k
    }
}

/// Build a reduced fraction from Laurent numerator and denominator.
pub fn rf_make(num: &LaurentPolynomial, den: &LaurentPolynomial) -> Result<RationalFunction, AlgebraError> {
    if num.arity() != den.arity() {
        return Err(AlgebraError::Arity {
            left: num.arity(),
            right: den.arity(),
        });
    }
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RationalFunction::zero(num.arity()));
    }
    let mn = num.min_exponents();
    let md = den.min_exponents();
    let s: Vec<i64> = mn.iter().zip(&md).map(|(a, b)| -(*a.min(b))).collect();
    let n = num.shift(&s);
    let d = den.shift(&s);
    if d.is_constant() || n.is_constant() {
        return Ok(rf_make_coprime(n, d));
    }
    let g = poly_gcd(&n, &d);
    if g.is_one() {
        return Ok(rf_make_coprime(n, d));
    }
    let n = poly_exact_div(&n, &g).expect("gcd divides numerator");
    let d = poly_exact_div(&d, &g).expect("gcd divides denominator");
    Ok(rf_make_coprime(n, d))
}

/// Compose f with the substitution x_i -> sigma[i].
pub fn rf_substitute(f: &RationalFunction, sigma: &[RationalFunction]) -> Result<RationalFunction, AlgebraError> {
    let (top, bottom) = rf_substitute_parts(f, sigma)?;
    rf_make(&top, &bottom)
}

/// Numerator and denominator of f(sigma) without the final reduction.
pub fn rf_substitute_parts(
    f: &RationalFunction,
    sigma: &[RationalFunction],
) -> Result<(LaurentPolynomial, LaurentPolynomial), AlgebraError> {
    assert_eq!(sigma.len(), f.arity(), "substitution must cover every variable");
    let target = sigma.first().map(|s| s.arity()).unwrap_or(0);
    let (pn, dn) = eval_poly(&f.num, sigma, target);
    let (qn, dq) = eval_poly(&f.den, sigma, target);
    if qn.is_zero() {
        return Err(AlgebraError::IdenticallyZeroDenominator);
    }
    // f = (pn / prod d_i^dn_i) / (qn / prod d_i^dq_i)
    let mut top = pn;
    let mut bottom = qn;
    for (i, s) in sigma.iter().enumerate() {
        let e = dq[i] - dn[i];
        if e > 0 {
            top = &top * &s.den.pow(e as u32);
        } else if e < 0 {
            bottom = &bottom * &s.den.pow((-e) as u32);
        }
    }
    Ok((top, bottom))
}

/// Returns (N, D) where p(sigma) = N / prod_i den(sigma_i)^D_i.
fn eval_poly(p: &LaurentPolynomial, sigma: &[RationalFunction], target: usize) -> (LaurentPolynomial, Vec<i64>) {
    let m = p.arity();
    let degs: Vec<i64> = (0..m).map(|v| if p.is_zero() { 0 } else { p.degree_in(v) }).collect();
    let mut num_pows: Vec<Vec<LaurentPolynomial>> = Vec::with_capacity(m);
    let mut den_pows: Vec<Vec<LaurentPolynomial>> = Vec::with_capacity(m);
    for (i, s) in sigma.iter().enumerate() {
        let d = degs[i] as usize;
        let mut np = vec![LaurentPolynomial::one(target)];
        let mut dp = vec![LaurentPolynomial::one(target)];
        for k in 1..=d {
            np.push(&np[k - 1] * &s.num);
            dp.push(&dp[k - 1] * &s.den);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut acc = LaurentPolynomial::zero(target);
    for (e, c) in p.terms() {
        let mut t = LaurentPolynomial::constant(target, c.clone());
        for i in 0..m {
            let a = e[i] as usize;
            let d = degs[i] as usize;
            if a > 0 {
                t = &t * &num_pows[i][a];
            }
            if d > a {
                t = &t * &den_pows[i][d - a];
            }
        }
        acc = &acc + &t;
    }
    (acc, degs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::rat;

    fn x(i: usize) -> LaurentPolynomial {
        LaurentPolynomial::var(4, i)
    }
    fn one() -> LaurentPolynomial {
        LaurentPolynomial::one(4)
    }

    #[test]
    fn reduce_difference_of_squares() {
        let f = rf_make(&(&x(0).pow(2) - &x(1).pow(2)), &(&x(0) - &x(1))).unwrap();
        assert_eq!(f, RationalFunction::from_laurent(&(&x(0) + &x(1))));
        assert!(f.denominator().is_one());
    }

    #[test]
    fn content_reduction() {
        let f = rf_make(&x(0).scale(&rat(2)), &x(1).scale(&rat(4))).unwrap();
        assert_eq!(f.numerator(), &x(0));
        assert_eq!(f.denominator(), &x(1).scale(&rat(2)));
    }

    #[test]
    fn common_binomial_factor() {
        let y1 = x(0);
        let y2 = x(1);
        let f = &one() + &y1;
        let a = rf_make(&(&(&f * &y1) * &y2), &f.pow(2)).unwrap();
        let b = rf_make(&(&y1 * &y2), &f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_denominator() {
        assert!(matches!(rf_make(&x(0), &LaurentPolynomial::zero(4)), Err(AlgebraError::ZeroDenominator)));
    }

    #[test]
    fn negative_denominator_sign() {
        let f = rf_make(&x(0), &(-&x(1))).unwrap();
        assert_eq!(f.numerator(), &(-&x(0)));
        assert_eq!(f.denominator(), &x(1));
    }

    #[test]
    fn a2_composition() {
        // f = (x4+1)/x3 with x3 -> (x2+1)/x1 and x4 -> (x1+x2+1)/(x1 x2)
        let f = rf_make(&(&x(3) + &one()), &x(2)).unwrap();
        let x3 = rf_make(&(&x(1) + &one()), &x(0)).unwrap();
        let x4 = rf_make(&(&(&x(0) + &x(1)) + &one()), &(&x(0) * &x(1))).unwrap();
        let sigma = vec![RationalFunction::var(4, 0), RationalFunction::var(4, 1), x3, x4];
        let g = rf_substitute(&f, &sigma).unwrap();
        assert_eq!(g, rf_make(&(&x(0) + &one()), &x(1)).unwrap());
    }

    #[test]
    fn substitute_identity_and_single() {
        let f = RationalFunction::from_laurent(&(&x(0) * &x(1)));
        let id: Vec<_> = (0..4).map(|i| RationalFunction::var(4, i)).collect();
        assert_eq!(rf_substitute(&f, &id).unwrap(), f);
        let g = RationalFunction::var(4, 0);
        let mut s = id.clone();
        s[0] = rf_make(&(&x(1) + &one()), &x(0)).unwrap();
        assert_eq!(rf_substitute(&g, &s).unwrap(), s[0]);
    }

    #[test]
    fn identically_zero_denominator() {
        let f = rf_make(&one(), &(&x(0) - &x(1))).unwrap();
        let mut s: Vec<_> = (0..4).map(|i| RationalFunction::var(4, i)).collect();
        s[1] = RationalFunction::var(4, 0);
        assert!(matches!(rf_substitute(&f, &s), Err(AlgebraError::IdenticallyZeroDenominator)));
    }

    #[test]
    fn laurent_round_trip() {
        let p = &LaurentPolynomial::monomial(vec![-1, 2, 0, 0], rat(3)) + &x(2);
        let f = RationalFunction::from_laurent(&p);
        assert_eq!(f.to_laurent().unwrap(), p);
    }
}
