use cluster_core::algebra::{LaurentPolynomial, RationalFunction};
use cluster_core::exchange::{random_exchange_matrix, ExchangeMatrix, Quiver};
use cluster_core::poisson::{clear_denominators, solve_compatible, CompatibleSolution};
use cluster_core::quantum::{QuantumSeed, SkewForm};
use cluster_core::seed::{exchange_cost, Seed};
use cluster_core::ydyn::{yhat_of_seed, YSeed};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Words stop early once a single step would need more term products than this.
const STEP_BUDGET: u128 = 20_000_000;

fn matrix(seed: u64, n: usize, f: usize) -> ExchangeMatrix {
    random_exchange_matrix(n, f, 2, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn positive_laurent(v: &RationalFunction) -> Option<LaurentPolynomial> {
    let l = v.to_laurent()?;
    l.terms().values().all(|c| c.is_integer() && c.is_positive()).then_some(l)
}

/// [B; I]: principal coefficients always give full rank.
fn with_principal_coefficients(b: &ExchangeMatrix) -> ExchangeMatrix {
    let n = b.n();
    let mut rows: Vec<Vec<i64>> = b.rows()[..n].to_vec();
    rows.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()));
    ExchangeMatrix::new(rows, n).unwrap()
}

fn quantum_seed(b: &ExchangeMatrix) -> QuantumSeed {
    let full = with_principal_coefficients(b);
    let CompatibleSolution::Found(family) = solve_compatible(&full).unwrap() else {
        panic!("principal coefficients are full rank");
    };
    let form = SkewForm::new(clear_denominators(family.base.matrix())).unwrap();
    QuantumSeed::initial(form, full).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cluster_variables_are_positive_laurent(
        seed in any::<u64>(),
        n in 1usize..=4,
        f in 0usize..=2,
        word in proptest::collection::vec(0usize..4, 0..=8),
    ) {
        let mut s = Seed::initial(matrix(seed, n, f));
        for k in word.into_iter().map(|k| k % n) {
            if exchange_cost(&s, k) > STEP_BUDGET {
                break;
            }
            s = s.mutate(k).expect("exchange relation divides exactly");
            prop_assert!(positive_laurent(&s.vars()[k]).is_some(), "{}", s.vars()[k]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn yhat_commutes_with_mutation(
        seed in any::<u64>(),
        n in 1usize..=3,
        f in 0usize..=2,
        path in proptest::collection::vec(0usize..3, 0..=1),
    ) {
        let path: Vec<usize> = path.into_iter().map(|k| k % n).collect();
        let s = Seed::initial(matrix(seed, n, f)).mutate_path(&path).unwrap();
        let y = yhat_of_seed(&s);
        for k in 0..n {
            prop_assert_eq!(yhat_of_seed(&s.mutate(k).unwrap()), y.mutate(k).unwrap());
        }
    }

    #[test]
    fn mutations_are_involutions(seed in any::<u64>(), n in 1usize..=4, f in 0usize..=2, k in 0usize..4) {
        let k = k % n;
        let b = matrix(seed, n, f);
        prop_assert_eq!(b.mutate(k).unwrap().mutate(k).unwrap(), b.clone());
        let s = Seed::initial(b.clone()).mutate(k).unwrap();
        prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s.clone());
        let y = YSeed::initial(b.clone());
        prop_assert_eq!(y.mutate(k).unwrap().mutate(k).unwrap(), y);
        let q = quantum_seed(&b);
        prop_assert_eq!(q.mutate(k).unwrap().mutate(k).unwrap(), q);
    }

    #[test]
    fn quiver_mutation_is_an_involution(seed in any::<u64>(), n in 1usize..=5, k in 0usize..5) {
        let k = k % n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = rand::Rng::gen_range(&mut rng, -2..=2);
                rows[i][j] = x;
                rows[j][i] = -x;
            }
        }
        let q = Quiver::from_matrix(&ExchangeMatrix::square(rows).unwrap()).unwrap();
        prop_assert_eq!(q.mutate(k).unwrap().mutate(k).unwrap(), q.clone());
        prop_assert_eq!(q.mutate(k).unwrap().to_matrix(), q.to_matrix().mutate(k).unwrap());
    }

    #[test]
    fn quantum_mutation_specialises_and_is_bar_invariant(
        seed in any::<u64>(),
        n in 1usize..=3,
        path in proptest::collection::vec(0usize..3, 1..=4),
    ) {
        let path: Vec<usize> = path.into_iter().map(|k| k % n).collect();
        let b = matrix(seed, n, 0);
        let q = quantum_seed(&b).mutate_path(&path).unwrap();
        let c = Seed::initial(with_principal_coefficients(&b)).mutate_path(&path).unwrap();
        let classical: Vec<LaurentPolynomial> = c.vars().iter().map(|v| v.to_laurent().unwrap()).collect();
        prop_assert_eq!(q.specialize(), classical);
        prop_assert!(q.vars().iter().all(|x| x.is_bar_invariant()));
        prop_assert!(q.quasi_commutes());
    }
}
