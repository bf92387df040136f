use cluster_core::algebra::{rat, ratio, LaurentPolynomial, Rat};
use cluster_core::exchange::{random_exchange_matrix, ExchangeMatrix};
use cluster_core::models::Triangulation;
use cluster_core::poisson::*;
use cluster_core::quantum::{poisson_verdict, quantum_compatible, SkewForm};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over Q by fraction-free elimination, rows kept primitive.
fn int_rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r == rank || rows[r][c] == 0 {
                continue;
            }
            let (a, b) = (rows[rank][c], rows[r][c]);
            let row: Vec<i128> = (0..cols).map(|j| a * rows[r][j] - b * rows[rank][j]).collect();
            let g = row.iter().fold(0i128, |g, x| g.gcd(x));
            rows[r] = if g > 1 { row.iter().map(|x| x / g).collect() } else { row };
        }
        rank += 1;
    }
    rank
}

/// Dimension of {(Omega skew, d) : B^T Omega = [diag(d) 0]}, written out entry by entry.
fn dimension_oracle(b: &ExchangeMatrix) -> usize {
    let (m, n) = (b.m(), b.n());
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let unknowns = pairs.len() + n;
    let mut rows = Vec::new();
    for k in 0..n {
        for l in 0..m {
            let mut row = vec![0i128; unknowns];
            for i in 0..m {
                if i == l {
                    continue;
                }
                let (p, sign) = if i < l { ((i, l), 1) } else { ((l, i), -1) };
                let idx = pairs.iter().position(|&q| q == p).unwrap();
                row[idx] += sign * b.get(i, k) as i128;
            }
            if k == l {
                row[pairs.len() + k] = -1;
            }
            rows.push(row);
        }
    }
    unknowns - int_rank(rows)
}

fn battery() -> Vec<(&'static str, ExchangeMatrix)> {
    let a2 = |frozen: &[[i64; 2]]| {
        let mut rows = vec![vec![0, 1], vec![-1, 0]];
        rows.extend(frozen.iter().map(|r| r.to_vec()));
        ExchangeMatrix::new(rows, 2).unwrap()
    };
    vec![
        ("A2", a2(&[])),
        ("A2 f=1", a2(&[[1, 0]])),
        ("A2 f=2", a2(&[[1, 0], [2, -3]])),
        ("Gr(2,6)", Triangulation::fan(6, 1).unwrap().exchange_matrix()),
    ]
}

#[test]
fn compatible_dimensions_on_the_battery() {
    let expected = [1, 1, 2, 16];
    for ((name, b), want) in battery().into_iter().zip(expected) {
        let CompatibleSolution::Found(fam) = solve_compatible(&b).unwrap() else {
            panic!("{name} has full rank");
        };
        assert_eq!(fam.dimension, dimension_oracle(&b), "{name}");
        assert_eq!(fam.expected_dimension, want, "{name}");
        assert_eq!(fam.dimension, fam.expected_dimension, "{name}");
        assert_eq!(check_compatibility(&b, &fam.base).unwrap(), Compatibility::Compatible(fam.d.clone()), "{name}");
        for k in &fam.kernel {
            let om = PoissonCoefficients::new(k.clone()).unwrap();
            // B^T Omega vanishes on the kernel
            let bt_om: Vec<Vec<_>> = (0..b.n())
                .map(|c| (0..b.m()).map(|l| (0..b.m()).map(|i| rat(b.get(i, c)) * om.get(i, l)).sum()).collect())
                .collect();
            assert!(bt_om.iter().flatten().all(|x: &Rat| *x == rat(0)), "{name}");
        }
    }
}

#[test]
fn rank_deficient_has_no_solution() {
    let b = ExchangeMatrix::new(vec![vec![0, 0], vec![0, 0]], 2).unwrap();
    assert_eq!(solve_compatible(&b).unwrap(), CompatibleSolution::NoSolution);
}

proptest! {
    #[test]
    fn quantum_and_poisson_verdicts_agree(seed in any::<u64>(), n in 1usize..=3, f in 0usize..=2, use_solution in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_exchange_matrix(n, f, 2, &mut rng);
        let m = n + f;
        let solved = match solve_compatible(&b).unwrap() {
            CompatibleSolution::Found(fam) if use_solution => Some(clear_denominators(fam.base.matrix())),
            _ => None,
        };
        let from_solution = solved.is_some();
        let rows = match solved {
            Some(rows) => rows,
            None => {
                let mut rows = vec![vec![0i64; m]; m];
                for i in 0..m {
                    for j in i + 1..m {
                        let x = rng.gen_range(-2..=2);
                        rows[i][j] = x;
                        rows[j][i] = -x;
                    }
                }
                rows
            }
        };
        let lambda = SkewForm::new(rows).unwrap();
        let q = quantum_compatible(&lambda, &b).unwrap();
        prop_assert_eq!(&q, &poisson_verdict(&lambda, &b).unwrap());
        if from_solution {
            prop_assert!(q.is_compatible());
        }
    }
}

fn entries(n: usize) -> Vec<LaurentPolynomial> {
    (0..n).flat_map(|i| (0..n).map(move |j| gl_entry(n, i, j))).collect()
}

#[test]
fn gl3_bracket_on_entries() {
    let n = 3;
    let x = entries(n);
    for a in 0..9 {
        for c in 0..9 {
            let (i, j, k, l) = (a / 3, a % 3, c / 3, c % 3);
            let s = (k as i64 - i as i64).signum() + (l as i64 - j as i64).signum();
            let want = (&gl_entry(n, i, l) * &gl_entry(n, k, j)).scale(&ratio(s, 2));
            assert_eq!(gl_bracket(n, &x[a], &x[c]), want, "x{i}{j}, x{k}{l}");
        }
    }
}

#[test]
fn gl3_jacobi_on_all_triples() {
    let n = 3;
    let x = entries(n);
    let mut checked = 0;
    for f in &x {
        for g in &x {
            for h in &x {
                let j = &(&gl_bracket(n, f, &gl_bracket(n, g, h)) + &gl_bracket(n, g, &gl_bracket(n, h, f)))
                    + &gl_bracket(n, h, &gl_bracket(n, f, g));
                assert!(j.is_zero());
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 729);
}

#[test]
fn gl3_skew_symmetry() {
    let n = 3;
    let x = entries(n);
    for f in &x {
        for g in &x {
            assert_eq!(gl_bracket(n, f, g), -&gl_bracket(n, g, f));
        }
    }
}

proptest! {
    #[test]
    fn gl3_leibniz(a in 0usize..9, b in 0usize..9, c in 0usize..9, d in 0usize..9, k in -3i64..=3) {
        let n = 3;
        let x = entries(n);
        let f = &x[a] + &LaurentPolynomial::constant(9, rat(k));
        let g = &x[b] * &x[c];
        let h = &x[d];
        // {f g, h} = f {g, h} + g {f, h}, and likewise in the second slot
        let lhs = gl_bracket(n, &(&f * &g), h);
        let rhs = &(&f * &gl_bracket(n, &g, h)) + &(&g * &gl_bracket(n, &f, h));
        prop_assert_eq!(lhs, rhs);
        let lhs2 = gl_bracket(n, h, &(&f * &g));
        let rhs2 = &(&gl_bracket(n, h, &f) * &g) + &(&f * &gl_bracket(n, h, &g));
        prop_assert_eq!(lhs2, rhs2);
    }
}
