//! Sparse multivariate Laurent polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn common_denominator(terms: &BTreeMap<ExponentVector, Rat>) -> BigInt {
    terms.values().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()))
}

fn scaled_numer(c: &Rat, den: &BigInt) -> BigInt {
    c.numer() * (den / c.denom())
}

/// Exponents of a Laurent monomial, one entry per ambient variable.
pub type ExponentVector = Vec<i64>;

/// Graded lexicographic comparison: total degree first, then lex with x1 > x2 > ...
pub fn grlex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    arity: usize,
    terms: BTreeMap<ExponentVector, Rat>,
}

impl LaurentPolynomial {
    pub fn zero(arity: usize) -> Self {
        LaurentPolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    /// The variable x_i, 0-based.
    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exp: ExponentVector, c: Rat) -> Self {
        let arity = exp.len();
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, Rat)>>(arity: usize, it: I) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in it {
            assert_eq!(e.len(), arity, "exponent length differs from arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Rat> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(e, c)| c.is_one() && e.iter().all(|&a| a == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().all(|e| e.iter().all(|&a| a == 0)))
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn coeff(&self, e: &[i64]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, e: ExponentVector, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            Err(AlgebraError::Arity {
                left: self.arity,
                right: other.arity,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        if self.terms.len() * other.terms.len() < 64 {
            let mut r = Self::zero(self.arity);
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                    r.add_term(e, ca * cb);
                }
            }
            return Ok(r);
        }
        // Integer coefficients accumulate without rational normalisation; the common
        // denominator is divided out once at the end.
        let da = common_denominator(&self.terms);
        let db = common_denominator(&other.terms);
        let ia: Vec<(&ExponentVector, BigInt)> = self.terms.iter().map(|(e, c)| (e, scaled_numer(c, &da))).collect();
        let ib: Vec<(&ExponentVector, BigInt)> = other.terms.iter().map(|(e, c)| (e, scaled_numer(c, &db))).collect();
        let mut acc: HashMap<ExponentVector, BigInt> = HashMap::with_capacity(ia.len().max(ib.len()) * 4);
        for (ea, ca) in &ia {
            for (eb, cb) in &ib {
                let e: Vec<i64> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                }
            }
        }
        let den = da * db;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, BigRational::new(c, den.clone())))
            .collect();
        Ok(LaurentPolynomial { arity: self.arity, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Power with a possibly negative exponent; only defined for monomials when k < 0.
    pub fn monomial_pow(&self, k: i64) -> Option<Self> {
        if k >= 0 {
            return Some(self.pow(k as u32));
        }
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let ne: Vec<i64> = e.iter().map(|a| a * k).collect();
        let nc = c.recip().pow(-k as i32);
        Some(Self::monomial(ne, nc))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        LaurentPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiply by the monomial x^shift.
    pub fn shift(&self, shift: &[i64]) -> Self {
        LaurentPolynomial {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms (zero vector for the zero polynomial).
    pub fn min_exponents(&self) -> ExponentVector {
        let mut it = self.terms.keys();
        let mut m = match it.next() {
            Some(e) => e.clone(),
            None => return vec![0; self.arity],
        };
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                if *b < *a {
                    *a = *b;
                }
            }
        }
        m
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a >= 0))
    }

    /// True if every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// True if every coefficient is a positive integer.
    pub fn has_positive_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && c.is_positive())
    }

    pub fn leading_term(&self) -> Option<(&ExponentVector, &Rat)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    /// Largest exponent of variable v (meaningful for nonzero polynomials).
    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Evaluate at a point with all coordinates nonzero whenever negative exponents occur.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (a, x) in e.iter().zip(point) {
                if *a == 0 {
                    continue;
                }
                if x.is_zero() {
                    if *a < 0 {
                        return None;
                    }
                    t = Rat::zero();
                    break;
                }
                t *= x.pow(*a as i32);
            }
            s += t;
        }
        Some(s)
    }

    /// Substitute values for some variables, keeping the others symbolic.
    pub fn map_coefficients<F: Fn(&Rat) -> Rat>(&self, f: F) -> Self {
        let mut r = Self::zero(self.arity);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    /// Re-embed into a ring with a different number of variables, mapping variable i to index map[i].
    pub fn reindex(&self, new_arity: usize, map: &[usize]) -> Self {
        let mut r = Self::zero(new_arity);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_arity];
            for (i, a) in e.iter().enumerate() {
                ne[map[i]] += a;
            }
            r.add_term(ne, c.clone());
        }
        r
    }

    /// Partial derivative with respect to variable v.
    pub fn derivative(&self, v: usize) -> Self {
        let mut r = Self::zero(self.arity);
        for (e, c) in &self.terms {
            if e[v] != 0 {
                let mut ne = e.clone();
                ne[v] -= 1;
                r.add_term(ne, c * rat(e[v]));
            }
        }
        r
    }

    /// Exact quotient a / b in the Laurent ring.
    pub fn exact_div(&self, b: &Self) -> Result<Self, AlgebraError> {
        lp_exact_div(self, b)
    }

    /// Coefficient of x_v^d, as a polynomial not involving x_v.
    pub(crate) fn coeff_in(&self, v: usize, d: i64) -> Self {
        let mut r = Self::zero(self.arity);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut ne = e.clone();
                ne[v] = 0;
                r.terms.insert(ne, c.clone());
            }
        }
        r
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&ExponentVector> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_cmp(b, a));
        let mut out = String::new();
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != 0)
                .map(|(i, a)| {
                    let n = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                    if *a == 1 {
                        n
                    } else {
                        format!("{}^{}", n, a)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&[]))
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<'a> Add<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_add(o).expect("arity mismatch")
    }
}

impl<'a> Sub<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_sub(o).expect("arity mismatch")
    }
}

impl<'a> Mul<&'a LaurentPolynomial> for &'a LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_mul(o).expect("arity mismatch")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, o: LaurentPolynomial) -> LaurentPolynomial {
        &self + &o
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, o: LaurentPolynomial) -> LaurentPolynomial {
        &self - &o
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, o: LaurentPolynomial) -> LaurentPolynomial {
        &self * &o
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

/// Exact division in the Laurent polynomial ring.
pub fn lp_exact_div(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Result<LaurentPolynomial, AlgebraError> {
    a.check(b)?;
    if b.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if a.is_zero() {
        return Ok(LaurentPolynomial::zero(a.arity));
    }
    if b.is_monomial() {
        let (e, c) = b.terms.iter().next().unwrap();
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        return Ok(a.shift(&neg).scale(&c.recip()));
    }
    // Move both into the polynomial ring with b free of monomial factors.
    let ma = a.min_exponents();
    let mb = b.min_exponents();
    let na: Vec<i64> = ma.iter().map(|x| -x).collect();
    let nb: Vec<i64> = mb.iter().map(|x| -x).collect();
    let pa = a.shift(&na);
    let pb = b.shift(&nb);
    let q = poly_exact_div(&pa, &pb).ok_or(AlgebraError::NotDivisible)?;
    let back: Vec<i64> = ma.iter().zip(&mb).map(|(x, y)| x - y).collect();
    Ok(q.shift(&back))
}

/// Division of polynomials (nonnegative exponents) returning None unless exact.
///
/// Runs in lex order so the leading term of the remainder is the last map key.
pub(crate) fn poly_exact_div(a: &LaurentPolynomial, b: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    let (lb_e, lb_c) = {
        let (e, c) = b.terms.last_key_value()?;
        (e.clone(), c.clone())
    };
    // Cheap degree screen.
    for v in 0..a.arity {
        if !a.is_zero() && a.degree_in(v) < b.degree_in(v) {
            return None;
        }
    }
    let mut r = a.clone();
    let mut q = LaurentPolynomial::zero(a.arity);
    while let Some((le, lc)) = r.terms.last_key_value() {
        let d: Vec<i64> = le.iter().zip(&lb_e).map(|(x, y)| x - y).collect();
        if d.iter().any(|&x| x < 0) {
            return None;
        }
        let c = lc / &lb_c;
        for (e, bc) in &b.terms {
            let shifted: Vec<i64> = e.iter().zip(&d).map(|(x, y)| x + y).collect();
            r.add_term(shifted, -(&c * bc));
        }
        q.add_term(d, c);
    }
    Some(q)
}
