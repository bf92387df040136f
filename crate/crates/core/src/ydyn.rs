//! Y-seeds, tropical coefficients and the y-hat map from seeds.

use crate::algebra::{LaurentPolynomial, Rat, RationalFunction};
use crate::exchange::{ExchangeError, ExchangeMatrix};
use crate::seed::Seed;

use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSeed {
    ys: Vec<RationalFunction>,
    matrix: ExchangeMatrix,
}

impl YSeed {
    pub fn new(ys: Vec<RationalFunction>, matrix: ExchangeMatrix) -> Self {
        assert_eq!(ys.len(), matrix.n(), "one y per mutable direction");
        YSeed {
            ys,
            matrix: matrix.principal(),
        }
    }

    /// (y_1, ..., y_n) as independent variables.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        Self::new((0..n).map(|i| RationalFunction::var(n, i)).collect(), matrix)
    }

    pub fn ys(&self) -> &[RationalFunction] {
        &self.ys
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    /// y'_k = 1/y_k and y'_j = y_j y_k^[b_kj]+ (1+y_k)^-b_kj.
    pub fn mutate(&self, k: usize) -> Result<YSeed, ExchangeError> {
        let matrix = self.matrix.mutate(k)?;
        let yk = &self.ys[k];
        let arity = yk.arity();
        let one_plus = RationalFunction::one(arity).add(yk);
        let mut ys = Vec::with_capacity(self.ys.len());
        for (j, yj) in self.ys.iter().enumerate() {
            if j == k {
                ys.push(yk.inv().expect("y values are nonzero"));
                continue;
            }
            // -b_kj equals b_jk when B is skew-symmetric; this form keeps y-hat mutation correct
            // for skew-symmetrizable B as well
            let b = -self.matrix.get(k, j);
            if b == 0 {
                ys.push(yj.clone());
                continue;
            }
            let mut v = yj.mul(&one_plus.pow(b).expect("1 + y_k is nonzero"));
            if b < 0 {
                v = v.mul(&yk.pow(-b).unwrap());
            }
            ys.push(v);
        }
        Ok(YSeed { ys, matrix })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<YSeed, ExchangeError> {
        let mut t = self.clone();
        for &k in path {
            t = t.mutate(k)?;
        }
        Ok(t)
    }
}

/// A Laurent monomial in the frozen variables, stored by exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrozenMonomial {
    pub exponents: Vec<i64>,
}

impl FrozenMonomial {
    pub fn one(f: usize) -> Self {
        FrozenMonomial { exponents: vec![0; f] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.exponents.len(), o.exponents.len());
        FrozenMonomial {
            exponents: self.exponents.iter().zip(&o.exponents).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        FrozenMonomial {
            exponents: self.exponents.iter().map(|a| -a).collect(),
        }
    }

    /// As a Laurent polynomial in `arity` variables, frozen variable i sitting at offset + i.
    pub fn to_laurent(&self, arity: usize, offset: usize) -> LaurentPolynomial {
        let mut e = vec![0; arity];
        for (i, a) in self.exponents.iter().enumerate() {
            e[offset + i] = *a;
        }
        LaurentPolynomial::monomial(e, Rat::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("monomials over {0} and {1} variables")]
pub struct MonomialArityError(pub usize, pub usize);

/// Auxiliary addition: componentwise minimum of exponents.
pub fn aux_add(a: &FrozenMonomial, b: &FrozenMonomial) -> Result<FrozenMonomial, MonomialArityError> {
    if a.exponents.len() != b.exponents.len() {
        return Err(MonomialArityError(a.exponents.len(), b.exponents.len()));
    }
    Ok(FrozenMonomial {
        exponents: a.exponents.iter().zip(&b.exponents).map(|(x, y)| *x.min(y)).collect(),
    })
}

/// (y_k, plus, minus) read from the frozen rows of column k.
pub fn coefficient_parts(b: &ExchangeMatrix, k: usize) -> (FrozenMonomial, FrozenMonomial, FrozenMonomial) {
    let col: Vec<i64> = (b.n()..b.m()).map(|i| b.get(i, k)).collect();
    let plus = FrozenMonomial {
        exponents: col.iter().map(|&x| x.max(0)).collect(),
    };
    let minus = FrozenMonomial {
        exponents: col.iter().map(|&x| (-x).max(0)).collect(),
    };
    (FrozenMonomial { exponents: col }, plus, minus)
}

/// y-hat_j = prod_i x_i^b_ij over all N rows.
pub fn yhat_of_seed(s: &Seed) -> YSeed {
    let b = s.matrix();
    let arity = s.vars().first().map(|v| v.arity()).unwrap_or(0);
    let ys = (0..b.n())
        .map(|j| {
            let mut y = RationalFunction::one(arity);
            for i in 0..b.m() {
                let e = b.get(i, j);
                if e != 0 {
                    y = y.mul(&s.vars()[i].pow(e).expect("cluster variables are nonzero"));
                }
            }
            y
        })
        .collect();
    YSeed::new(ys, b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rf_make;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::square(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn single_vertex() {
        let t = YSeed::initial(ExchangeMatrix::zero(1));
        let u = t.mutate(0).unwrap();
        assert_eq!(u.ys()[0], RationalFunction::var(1, 0).inv().unwrap());
    }

    #[test]
    fn a2_mutation() {
        let t = YSeed::initial(a2());
        let u = t.mutate(0).unwrap();
        let y1 = LaurentPolynomial::var(2, 0);
        let y2 = LaurentPolynomial::var(2, 1);
        assert_eq!(u.ys()[0], rf_make(&LaurentPolynomial::one(2), &y1).unwrap());
        assert_eq!(u.ys()[1], rf_make(&(&y1 * &y2), &(&LaurentPolynomial::one(2) + &y1)).unwrap());
        assert_eq!(u.mutate(0).unwrap(), t);
    }

    #[test]
    fn auxiliary_addition() {
        let a = FrozenMonomial { exponents: vec![2, 1] };
        let b = FrozenMonomial { exponents: vec![1, 3] };
        assert_eq!(aux_add(&a, &b).unwrap().exponents, vec![1, 1]);
        assert_eq!(aux_add(&a, &a).unwrap(), a);
        let y = FrozenMonomial { exponents: vec![-1, 1] };
        assert_eq!(aux_add(&FrozenMonomial::one(2), &y).unwrap().exponents, vec![-1, 0]);
        assert!(aux_add(&a, &FrozenMonomial::one(3)).is_err());
    }

    #[test]
    fn coefficient_split() {
        let b = ExchangeMatrix::new(vec![vec![0], vec![-2]], 1).unwrap();
        let (y, plus, minus) = coefficient_parts(&b, 0);
        assert_eq!(y.exponents, vec![-2]);
        assert_eq!(plus.exponents, vec![0]);
        assert_eq!(minus.exponents, vec![2]);
        let z = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0], vec![0, 0]], 2).unwrap();
        let (y, plus, minus) = coefficient_parts(&z, 1);
        assert_eq!((y.exponents, plus.exponents, minus.exponents), (vec![0], vec![0], vec![0]));
    }

    #[test]
    fn yhat_a2_and_zero() {
        let t = yhat_of_seed(&Seed::initial(a2()));
        assert_eq!(t.ys()[0], RationalFunction::var(2, 1).inv().unwrap());
        assert_eq!(t.ys()[1], RationalFunction::var(2, 0));
        let z = yhat_of_seed(&Seed::initial(ExchangeMatrix::zero(2)));
        assert!(z.ys().iter().all(|y| y.is_one()));
    }

    #[test]
    fn yhat_commutes_on_a2() {
        let s = Seed::initial(a2());
        for k in 0..2 {
            assert_eq!(yhat_of_seed(&s.mutate(k).unwrap()), yhat_of_seed(&s).mutate(k).unwrap());
        }
    }
}
