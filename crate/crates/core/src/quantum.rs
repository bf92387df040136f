//! Quantum tori, quantum compatibility and bar-invariant quantum mutation.
//!
//! Elements are stored in the basis X^a with X^a X^b = v^Lambda(a,b) X^(a+b); coefficients are
//! Laurent polynomials in the single variable v.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::algebra::{lp_exact_div, rat, LaurentPolynomial, Rat};
use crate::exchange::{ExchangeError, ExchangeMatrix};
use crate::poisson::{check_compatibility, Compatibility, PoissonCoefficients, PoissonError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantumError {
    #[error("skew form is {got}x{got}, expected {expected}x{expected}")]
    Dimension { expected: usize, got: usize },
    #[error("form is not skew-symmetric")]
    NotSkew,
    #[error("skew form is not compatible with the exchange matrix")]
    Incompatible,
    #[error("quantum exchange relation did not divide exactly")]
    NotDivisible,
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
}

impl From<PoissonError> for QuantumError {
    fn from(e: PoissonError) -> Self {
        match e {
            PoissonError::Dimension { expected, got } => QuantumError::Dimension { expected, got },
            PoissonError::NotSkew => QuantumError::NotSkew,
            PoissonError::Exchange(e) => QuantumError::Exchange(e),
        }
    }
}

/// Integer skew-symmetric bilinear form on Z^N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewForm {
    rows: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, QuantumError> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(QuantumError::Dimension { expected: n, got: r.len() });
            }
            for j in 0..n {
                if r[j] != -rows[j][i] {
                    return Err(QuantumError::NotSkew);
                }
            }
        }
        Ok(SkewForm { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                s += ai * self.rows[i][j] * bj;
            }
        }
        s
    }

    /// E^T Lambda E.
    pub fn transform(&self, e: &[Vec<i64>]) -> SkewForm {
        let n = self.size();
        let col = |j: usize| -> Vec<i64> { (0..n).map(|i| e[i][j]).collect() };
        let cols: Vec<Vec<i64>> = (0..n).map(col).collect();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.pair(&cols[i], &cols[j])).collect())
            .collect();
        SkewForm { rows }
    }

    pub fn as_poisson(&self) -> PoissonCoefficients {
        PoissonCoefficients::from_ints(&self.rows).expect("skew form is skew")
    }
}

/// Lambda(b_k, e_l) = 0 for k != l, with positive diagonal.
pub fn quantum_compatible(lambda: &SkewForm, b: &ExchangeMatrix) -> Result<Compatibility, QuantumError> {
    if lambda.size() != b.m() {
        return Err(QuantumError::Dimension {
            expected: b.m(),
            got: lambda.size(),
        });
    }
    let mut d = Vec::new();
    for k in 0..b.n() {
        let bk = b.column(k);
        for l in 0..b.m() {
            let mut e = vec![0; b.m()];
            e[l] = 1;
            let x = lambda.pair(&bk, &e);
            if l == k {
                if x <= 0 {
                    return Ok(Compatibility::Incompatible);
                }
                d.push(rat(x));
            } else if x != 0 {
                return Ok(Compatibility::Incompatible);
            }
        }
    }
    Ok(Compatibility::Compatible(d))
}

/// Same verdict through the Poisson test, for cross-checking.
pub fn poisson_verdict(lambda: &SkewForm, b: &ExchangeMatrix) -> Result<Compatibility, QuantumError> {
    Ok(check_compatibility(b, &lambda.as_poisson())?)
}

fn v_power(k: i64) -> LaurentPolynomial {
    LaurentPolynomial::monomial(vec![k], Rat::one())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumTorusElement {
    arity: usize,
    terms: BTreeMap<Vec<i64>, LaurentPolynomial>,
}

impl QuantumTorusElement {
    pub fn zero(arity: usize) -> Self {
        QuantumTorusElement {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::basis(vec![0; arity])
    }

    pub fn basis(a: Vec<i64>) -> Self {
        Self::term(a, LaurentPolynomial::one(1))
    }

    pub fn term(a: Vec<i64>, c: LaurentPolynomial) -> Self {
        let mut e = Self::zero(a.len());
        if !c.is_zero() {
            e.terms.insert(a, c);
        }
        e
    }

    pub fn generator(arity: usize, i: usize) -> Self {
        let mut a = vec![0; arity];
        a[i] = 1;
        Self::basis(a)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, LaurentPolynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, a: Vec<i64>, c: LaurentPolynomial) {
        let merged = match self.terms.remove(&a) {
            Some(old) => &old + &c,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(a, merged);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.arity, o.arity);
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(a.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        QuantumTorusElement {
            arity: self.arity,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &LaurentPolynomial) -> Self {
        let mut r = Self::zero(self.arity);
        for (a, x) in &self.terms {
            r.add_term(a.clone(), x * c);
        }
        r
    }

    /// Bar involution: fixes every X^a and sends v to 1/v.
    pub fn bar(&self) -> Self {
        QuantumTorusElement {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let flipped = LaurentPolynomial::from_terms(1, c.terms().iter().map(|(e, x)| (vec![-e[0]], x.clone())));
                    (a.clone(), flipped)
                })
                .collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    /// Commutative image at v = 1.
    pub fn specialize(&self) -> LaurentPolynomial {
        let one = [Rat::one()];
        let mut out = LaurentPolynomial::zero(self.arity);
        for (a, c) in &self.terms {
            let x = c.eval(&one).expect("v = 1 is a valid point");
            out = &out + &LaurentPolynomial::monomial(a.clone(), x);
        }
        out
    }

    fn min_exponents(&self) -> Vec<i64> {
        let mut m: Option<Vec<i64>> = None;
        for a in self.terms.keys() {
            m = Some(match m {
                None => a.clone(),
                Some(m) => m.iter().zip(a).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.arity])
    }

    fn leading(&self) -> Option<(&Vec<i64>, &LaurentPolynomial)> {
        self.terms
            .iter()
            .max_by(|a, b| crate::algebra::grlex_cmp(a.0, b.0))
    }
}

impl fmt::Display for QuantumTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["v".to_string()];
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let e: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                format!("({})X^({})", c.format_with(&names), e.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// X^a X^b = v^Lambda(a,b) X^(a+b), extended bilinearly.
pub fn qt_mul(x: &QuantumTorusElement, y: &QuantumTorusElement, lambda: &SkewForm) -> QuantumTorusElement {
    assert_eq!(x.arity, y.arity);
    let mut r = QuantumTorusElement::zero(x.arity);
    for (a, c) in &x.terms {
        for (b, d) in &y.terms {
            let s: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
            let coeff = &(c * d) * &v_power(lambda.pair(a, b));
            r.add_term(s, coeff);
        }
    }
    r
}

/// q with q * g = f, if it exists in the torus.
pub fn qt_right_div(
    f: &QuantumTorusElement,
    g: &QuantumTorusElement,
    lambda: &SkewForm,
) -> Option<QuantumTorusElement> {
    let arity = f.arity;
    if g.is_zero() {
        return None;
    }
    if f.is_zero() {
        return Some(QuantumTorusElement::zero(arity));
    }
    // g = g0 X^m with g0 free of monomial factors; f X^-m = q g0
    let m = g.min_exponents();
    let neg_m: Vec<i64> = m.iter().map(|x| -x).collect();
    let g0 = qt_mul(g, &QuantumTorusElement::basis(neg_m.clone()), lambda);
    let f1 = qt_mul(f, &QuantumTorusElement::basis(neg_m), lambda);
    // X^-s f1 is a polynomial; its quotient by g0 is then a polynomial too
    let s = f1.min_exponents();
    let neg_s: Vec<i64> = s.iter().map(|x| -x).collect();
    let mut r = qt_mul(&QuantumTorusElement::basis(neg_s), &f1, lambda);
    let (lb, lc) = {
        let (b, c) = g0.leading().expect("nonzero");
        (b.clone(), c.clone())
    };
    let mut q = QuantumTorusElement::zero(arity);
    while let Some((a, c)) = r.leading() {
        let e: Vec<i64> = a.iter().zip(&lb).map(|(x, y)| x - y).collect();
        if e.iter().any(|&x| x < 0) {
            return None;
        }
        // t X^e * lc X^lb = t lc v^Lambda(e,lb) X^a
        let denom = &lc * &v_power(lambda.pair(&e, &lb));
        let t = lp_exact_div(c, &denom).ok()?;
        let term = QuantumTorusElement::term(e, t);
        r = r.sub(&qt_mul(&term, &g0, lambda));
        q = q.add(&term);
    }
    Some(qt_mul(&QuantumTorusElement::basis(s), &q, lambda))
}

/// Quantum cluster: variables as elements of the initial torus, the current skew form and matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumSeed {
    initial_form: SkewForm,
    form: SkewForm,
    matrix: ExchangeMatrix,
    vars: Vec<QuantumTorusElement>,
}

impl QuantumSeed {
    pub fn initial(form: SkewForm, matrix: ExchangeMatrix) -> Result<Self, QuantumError> {
        if !quantum_compatible(&form, &matrix)?.is_compatible() {
            return Err(QuantumError::Incompatible);
        }
        let n = matrix.m();
        Ok(QuantumSeed {
            initial_form: form.clone(),
            form,
            matrix,
            vars: (0..n).map(|i| QuantumTorusElement::generator(n, i)).collect(),
        })
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn initial_form(&self) -> &SkewForm {
        &self.initial_form
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn vars(&self) -> &[QuantumTorusElement] {
        &self.vars
    }

    /// X^a of the current cluster for a >= 0, as an element of the initial torus.
    pub fn cluster_monomial(&self, a: &[i64]) -> QuantumTorusElement {
        let n = self.vars.len();
        let mut twist = 0;
        for i in 0..n {
            for j in i + 1..n {
                twist += a[i] * a[j] * self.form.get(i, j);
            }
        }
        let mut r = QuantumTorusElement::basis(vec![0; n]).scale(&v_power(-twist));
        for (i, &e) in a.iter().enumerate() {
            assert!(e >= 0, "cluster monomials with negative exponents need inverses");
            for _ in 0..e {
                r = qt_mul(&r, &self.vars[i], &self.initial_form);
            }
        }
        r
    }

    /// Y_i Y_j = v^(2 Lambda_ij) Y_j Y_i for the current form.
    pub fn quasi_commutes(&self) -> bool {
        let n = self.vars.len();
        for i in 0..n {
            for j in i + 1..n {
                let l = qt_mul(&self.vars[i], &self.vars[j], &self.initial_form);
                let r = qt_mul(&self.vars[j], &self.vars[i], &self.initial_form)
                    .scale(&v_power(2 * self.form.get(i, j)));
                if l != r {
                    return false;
                }
            }
        }
        true
    }

    /// X'_k = X^(-e_k + [b_k]_+) + X^(-e_k + [-b_k]_+); form becomes E^T Lambda E.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed, QuantumError> {
        let matrix = self.matrix.mutate(k)?;
        let n = self.vars.len();
        let col = self.matrix.column(k);
        let plus: Vec<i64> = col.iter().map(|&x| x.max(0)).collect();
        let minus: Vec<i64> = col.iter().map(|&x| (-x).max(0)).collect();
        let mut ek = vec![0; n];
        ek[k] = 1;
        // X^(c - e_k) = v^Lambda(c, e_k) X^c X_k^-1
        let p = self
            .cluster_monomial(&plus)
            .scale(&v_power(self.form.pair(&plus, &ek)))
            .add(&self.cluster_monomial(&minus).scale(&v_power(self.form.pair(&minus, &ek))));
        let new_var = qt_right_div(&p, &self.vars[k], &self.initial_form).ok_or(QuantumError::NotDivisible)?;
        let mut e: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for i in 0..n {
            e[i][k] = if i == k { -1 } else { plus[i] };
        }
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        Ok(QuantumSeed {
            initial_form: self.initial_form.clone(),
            form: self.form.transform(&e),
            matrix,
            vars,
        })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<QuantumSeed, QuantumError> {
        let mut s = self.clone();
        for &k in path {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    pub fn specialize(&self) -> Vec<LaurentPolynomial> {
        self.vars.iter().map(|x| x.specialize()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::square(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn a2_form() -> SkewForm {
        SkewForm::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn compatibility_a2() {
        assert_eq!(
            quantum_compatible(&a2_form(), &a2()).unwrap(),
            Compatibility::Compatible(vec![rat(1), rat(1)])
        );
        let zero = SkewForm::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(quantum_compatible(&zero, &a2()).unwrap(), Compatibility::Incompatible);
        assert_eq!(poisson_verdict(&a2_form(), &a2()).unwrap(), quantum_compatible(&a2_form(), &a2()).unwrap());
    }

    #[test]
    fn torus_basics() {
        let l = SkewForm::new(vec![vec![0, 1, -2], vec![-1, 0, 3], vec![2, -3, 0]]).unwrap();
        let x = |i| QuantumTorusElement::generator(3, i);
        let p = qt_mul(&x(0), &x(1), &l);
        assert_eq!(p, QuantumTorusElement::term(vec![1, 1, 0], v_power(1)));
        let a = QuantumTorusElement::basis(vec![2, -1, 3]);
        let b = QuantumTorusElement::basis(vec![-2, 1, -3]);
        assert_eq!(qt_mul(&a, &b, &l), QuantumTorusElement::one(3));
        let lhs = qt_mul(&qt_mul(&x(0), &x(1), &l), &x(2), &l);
        let rhs = qt_mul(&x(0), &qt_mul(&x(1), &x(2), &l), &l);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_division_round_trip() {
        let l = SkewForm::new(vec![vec![0, 1, -2], vec![-1, 0, 3], vec![2, -3, 0]]).unwrap();
        let x = |i| QuantumTorusElement::generator(3, i);
        let g = x(0).add(&x(1)).add(&QuantumTorusElement::basis(vec![0, -1, 1]));
        let q = x(2).add(&QuantumTorusElement::one(3).scale(&v_power(3))).add(&x(0));
        let f = qt_mul(&q, &g, &l);
        assert_eq!(qt_right_div(&f, &g, &l).unwrap(), q);
        assert!(qt_right_div(&x(0), &g, &l).is_none());
    }

    #[test]
    fn a2_quantum_mutation() {
        let s = QuantumSeed::initial(a2_form(), a2()).unwrap();
        let t = s.mutate(0).unwrap();
        let expected = QuantumTorusElement::basis(vec![-1, 1]).add(&QuantumTorusElement::basis(vec![-1, 0]));
        assert_eq!(t.vars()[0], expected);
        let x1 = LaurentPolynomial::var(2, 0);
        let x2 = LaurentPolynomial::var(2, 1);
        let classical = lp_exact_div(&(&x2 + &LaurentPolynomial::one(2)), &x1).unwrap();
        assert_eq!(t.vars()[0].specialize(), classical);
        assert!(t.quasi_commutes());
        assert!(quantum_compatible(t.form(), t.matrix()).unwrap().is_compatible());
        assert_eq!(t.mutate(0).unwrap(), s);
    }

    #[test]
    fn a2_pentagon() {
        let s = QuantumSeed::initial(a2_form(), a2()).unwrap();
        let mut t = s.clone();
        for i in 0..5 {
            t = t.mutate(i % 2).unwrap();
            assert!(t.vars().iter().all(|x| x.is_bar_invariant()));
            assert!(t.quasi_commutes());
        }
        // five steps swap the two positions
        assert_eq!(t.vars()[0], s.vars()[1]);
        assert_eq!(t.vars()[1], s.vars()[0]);
    }
}
