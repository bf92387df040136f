//! Determinants of small symbolic matrices.

use super::laurent::LaurentPolynomial;

pub const DET_SIZE_BOUND: usize = 6;

/// Determinant by cofactor expansion along the first row.
pub fn sym_det(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    let n = m.len();
    assert!(n <= DET_SIZE_BOUND, "matrix too large for cofactor expansion");
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        panic!("empty matrix has no ambient arity");
    }
    let arity = m[0][0].arity();
    let cols: Vec<usize> = (0..n).collect();
    expand(m, 0, &cols, arity)
}

fn expand(m: &[Vec<LaurentPolynomial>], row: usize, cols: &[usize], arity: usize) -> LaurentPolynomial {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = LaurentPolynomial::zero(arity);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = &m[row][c] * &expand(m, row + 1, &rest, arity);
        acc = if k % 2 == 0 { &acc + &minor } else { &acc - &minor };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let v = |i| LaurentPolynomial::var(4, i);
        let d = sym_det(&[vec![v(0), v(1)], vec![v(2), v(3)]]);
        assert_eq!(d, &(&v(0) * &v(3)) - &(&v(1) * &v(2)));
    }

    #[test]
    fn identity() {
        let one = LaurentPolynomial::one(1);
        let z = LaurentPolynomial::zero(1);
        let m: Vec<Vec<_>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { one.clone() } else { z.clone() }).collect())
            .collect();
        assert!(sym_det(&m).is_one());
    }
}
