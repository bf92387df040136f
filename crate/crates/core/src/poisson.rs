//! Log-canonical Poisson structures compatible with an extended exchange matrix, and the
//! standard bracket on matrix entries of GL_n.

use num_traits::{One, Signed, Zero};

use crate::algebra::{rat, ratio, LaurentPolynomial, Rat};
use crate::exchange::{find_symmetrizer, rho_components, ExchangeError, ExchangeMatrix};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PoissonError {
    #[error("coefficient matrix is {got}x{got}, expected {expected}x{expected}")]
    Dimension { expected: usize, got: usize },
    #[error("coefficient matrix is not skew-symmetric")]
    NotSkew,
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
}

/// Omega with {x_i, x_j} = Omega_ij x_i x_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonCoefficients {
    omega: Matrix,
}

impl PoissonCoefficients {
    pub fn new(omega: Matrix) -> Result<Self, PoissonError> {
        let n = omega.len();
        for (i, row) in omega.iter().enumerate() {
            if row.len() != n {
                return Err(PoissonError::Dimension { expected: n, got: row.len() });
            }
            for j in 0..n {
                if row[j] != -omega[j][i].clone() {
                    return Err(PoissonError::NotSkew);
                }
            }
        }
        Ok(PoissonCoefficients { omega })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self, PoissonError> {
        Self::new(linalg::from_ints(rows))
    }

    pub fn zero(n: usize) -> Self {
        PoissonCoefficients {
            omega: vec![vec![Rat::zero(); n]; n],
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.omega
    }

    pub fn size(&self) -> usize {
        self.omega.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.omega[i][j]
    }

    /// Bracket of two Laurent polynomials in the log-canonical coordinates.
    pub fn bracket(&self, f: &LaurentPolynomial, g: &LaurentPolynomial) -> LaurentPolynomial {
        let n = self.size();
        let mut out = LaurentPolynomial::zero(n);
        for i in 0..n {
            let fi = f.derivative(i);
            if fi.is_zero() {
                continue;
            }
            for j in 0..n {
                if self.omega[i][j].is_zero() {
                    continue;
                }
                let gj = g.derivative(j);
                if gj.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                let m = LaurentPolynomial::monomial(e, self.omega[i][j].clone());
                out = &out + &(&(&fi * &gj) * &m);
            }
        }
        out
    }
}

/// Verdict of a compatibility test: the diagonal of D, or the reason it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compatibility {
    Compatible(Vec<Rat>),
    Incompatible,
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Compatibility::Compatible(_))
    }
}

fn b_transpose(b: &ExchangeMatrix) -> Matrix {
    (0..b.n())
        .map(|k| (0..b.m()).map(|i| rat(b.get(i, k))).collect())
        .collect()
}

/// Reads off D from B^T Omega = [D 0]; positive diagonal required.
fn diagonal_block(product: &Matrix, n: usize) -> Compatibility {
    let mut d = Vec::with_capacity(n);
    for (k, row) in product.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if l == k {
                if !x.is_positive() {
                    return Compatibility::Incompatible;
                }
                d.push(x.clone());
            } else if !x.is_zero() {
                return Compatibility::Incompatible;
            }
        }
    }
    Compatibility::Compatible(d)
}

pub fn check_compatibility(b: &ExchangeMatrix, omega: &PoissonCoefficients) -> Result<Compatibility, PoissonError> {
    if omega.size() != b.m() {
        return Err(PoissonError::Dimension {
            expected: b.m(),
            got: omega.size(),
        });
    }
    let product = linalg::mat_mul(&b_transpose(b), &omega.omega);
    Ok(diagonal_block(&product, b.n()))
}

/// Compatible structures for a fixed D, plus the dimension of the D-free family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleFamily {
    /// Minimal skew-symmetrizer used to pin the slice.
    pub d: Vec<Rat>,
    pub base: PoissonCoefficients,
    /// Skew matrices Omega with B^T Omega = 0.
    pub kernel: Vec<Matrix>,
    /// Dimension of the affine slice at the pinned D.
    pub fixed_d_dimension: usize,
    /// Dimension of the solution space with D left free.
    pub dimension: usize,
    /// rho(B) + binom(f, 2), f the number of frozen rows.
    pub expected_dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatibleSolution {
    Found(CompatibleFamily),
    NoSolution,
}

/// Upper-triangle coordinates of an N x N skew matrix.
fn skew_coords(size: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            v.push((i, j));
        }
    }
    v
}

fn skew_from(coords: &[(usize, usize)], x: &[Rat], size: usize) -> Matrix {
    let mut m = vec![vec![Rat::zero(); size]; size];
    for (&(i, j), v) in coords.iter().zip(x) {
        m[i][j] = v.clone();
        m[j][i] = -v.clone();
    }
    m
}

/// Row (k, l) of the linear map Omega -> (B^T Omega)_kl in skew coordinates.
fn constraint_row(b: &ExchangeMatrix, coords: &[(usize, usize)], k: usize, l: usize) -> Vec<Rat> {
    coords
        .iter()
        .map(|&(i, j)| {
            // Omega_ij = x, Omega_ji = -x
            let mut c = 0;
            if j == l {
                c += b.get(i, k);
            }
            if i == l {
                c -= b.get(j, k);
            }
            rat(c)
        })
        .collect()
}

pub fn solve_compatible(b: &ExchangeMatrix) -> Result<CompatibleSolution, PoissonError> {
    let (n, size) = (b.n(), b.m());
    let bt = b_transpose(b);
    if linalg::rank(&bt) < n {
        return Ok(CompatibleSolution::NoSolution);
    }
    let sym = find_symmetrizer(&b.principal())?;
    let d: Vec<Rat> = sym.d.iter().map(|&x| rat(x)).collect();
    let coords = skew_coords(size);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..n {
        for l in 0..size {
            rows.push(constraint_row(b, &coords, k, l));
            rhs.push(if k == l { d[k].clone() } else { Rat::zero() });
        }
    }
    let Some((x, kern)) = linalg::solve_affine(&rows, &rhs, coords.len()) else {
        return Ok(CompatibleSolution::NoSolution);
    };
    // D-free system: unknowns are the skew coordinates followed by d_1..d_n.
    let free_rows: Matrix = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let (k, l) = (r / size, r % size);
            let mut full = row.clone();
            full.extend((0..n).map(|t| if k == l && t == k { -Rat::one() } else { Rat::zero() }));
            full
        })
        .collect();
    let dimension = linalg::nullspace(&free_rows, coords.len() + n).len();
    let f = size - n;
    Ok(CompatibleSolution::Found(CompatibleFamily {
        d,
        base: PoissonCoefficients::new(skew_from(&coords, &x, size))?,
        kernel: kern.iter().map(|v| skew_from(&coords, v, size)).collect(),
        fixed_d_dimension: kern.len(),
        dimension,
        expected_dimension: rho_components(&b.principal()) + f * f.saturating_sub(1) / 2,
    }))
}

/// Scales a rational skew matrix by the least common denominator.
pub fn clear_denominators(omega: &Matrix) -> Vec<Vec<i64>> {
    let mut l = num_bigint::BigInt::one();
    for row in omega {
        for x in row {
            l = num_integer::Integer::lcm(&l, x.denom());
        }
    }
    let scale = Rat::from_integer(l);
    omega
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let y = x * &scale;
                    i64::try_from(y.to_integer()).expect("entry fits in i64")
                })
                .collect()
        })
        .collect()
}

/// Variable index of x_ij (0-based) in an n x n matrix of entries.
pub fn gl_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

pub fn gl_entry(n: usize, i: usize, j: usize) -> LaurentPolynomial {
    LaurentPolynomial::var(n * n, gl_index(n, i, j))
}

fn sgn(a: usize, b: usize) -> i64 {
    (b as i64 - a as i64).signum()
}

/// {x_ij, x_kl} = (sgn(k-i) + sgn(l-j))/2 x_il x_kj, extended by Leibniz.
pub fn gl_bracket(n: usize, f: &LaurentPolynomial, g: &LaurentPolynomial) -> LaurentPolynomial {
    let size = n * n;
    assert_eq!(f.arity(), size);
    assert_eq!(g.arity(), size);
    let df: Vec<LaurentPolynomial> = (0..size).map(|a| f.derivative(a)).collect();
    let dg: Vec<LaurentPolynomial> = (0..size).map(|a| g.derivative(a)).collect();
    let mut out = LaurentPolynomial::zero(size);
    for a in 0..size {
        if df[a].is_zero() {
            continue;
        }
        let (i, j) = (a / n, a % n);
        for c in 0..size {
            if dg[c].is_zero() {
                continue;
            }
            let (k, l) = (c / n, c % n);
            let s = sgn(i, k) + sgn(j, l);
            if s == 0 {
                continue;
            }
            let mut e = vec![0; size];
            e[gl_index(n, i, l)] += 1;
            e[gl_index(n, k, j)] += 1;
            let m = LaurentPolynomial::monomial(e, ratio(s, 2));
            out = &out + &(&(&df[a] * &dg[c]) * &m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::square(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn a2_compatibility() {
        let om = PoissonCoefficients::from_ints(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(
            check_compatibility(&a2(), &om).unwrap(),
            Compatibility::Compatible(vec![rat(1), rat(1)])
        );
        assert_eq!(
            check_compatibility(&a2(), &PoissonCoefficients::zero(2)).unwrap(),
            Compatibility::Incompatible
        );
        assert!(check_compatibility(&a2(), &PoissonCoefficients::zero(3)).is_err());
        assert!(PoissonCoefficients::from_ints(&[vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn solver_dimensions() {
        let CompatibleSolution::Found(f) = solve_compatible(&a2()).unwrap() else {
            panic!("A2 has full rank")
        };
        assert_eq!((f.dimension, f.expected_dimension, f.fixed_d_dimension), (1, 1, 0));
        assert!(check_compatibility(&a2(), &f.base).unwrap().is_compatible());

        let b = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0], vec![1, 0]], 2).unwrap();
        let CompatibleSolution::Found(f) = solve_compatible(&b).unwrap() else {
            panic!("full rank")
        };
        assert_eq!(f.expected_dimension, 1);
        assert_eq!(f.dimension, 1);
        assert!(check_compatibility(&b, &f.base).unwrap().is_compatible());

        let z = ExchangeMatrix::new(vec![vec![0, 0], vec![0, 0], vec![1, 0]], 2).unwrap();
        assert_eq!(solve_compatible(&z).unwrap(), CompatibleSolution::NoSolution);
    }

    #[test]
    fn gl_examples() {
        let n = 2;
        let x = |i, j| gl_entry(n, i, j);
        assert_eq!(gl_bracket(n, &x(0, 0), &x(1, 1)), &x(0, 1) * &x(1, 0));
        assert_eq!(gl_bracket(n, &x(0, 0), &x(0, 1)), (&x(0, 0) * &x(0, 1)).scale(&ratio(1, 2)));
        let f = &(&x(0, 0) * &x(1, 1)) - &(&x(0, 1) * &x(1, 0));
        assert!(gl_bracket(n, &f, &f).is_zero());
    }

    #[test]
    fn log_canonical_bracket() {
        let om = PoissonCoefficients::from_ints(&[vec![0, 2], vec![-2, 0]]).unwrap();
        let x1 = LaurentPolynomial::var(2, 0);
        let x2 = LaurentPolynomial::var(2, 1);
        assert_eq!(om.bracket(&x1, &x2), (&x1 * &x2).scale(&rat(2)));
    }
}
