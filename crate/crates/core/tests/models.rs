use std::collections::BTreeSet;

use cluster_core::algebra::{LaurentPolynomial, RationalFunction};
use cluster_core::models::*;
use num_integer::Roots;
use proptest::prelude::*;

/// All sorted solutions with entries up to `bound`, by solving the quadratic for c.
fn brute_force_markov(bound: u64) -> BTreeSet<(u64, u64, u64)> {
    let mut out = BTreeSet::new();
    for a in 1..=bound {
        for b in a..=bound {
            // c^2 - 3ab c + a^2 + b^2 = 0
            let p = 3 * a * b;
            let disc = (p * p) as i128 - 4 * (a * a + b * b) as i128;
            if disc < 0 {
                continue;
            }
            let r = (disc as u128).sqrt() as i128;
            if r * r != disc {
                continue;
            }
            for c in [(p as i128 - r) / 2, (p as i128 + r) / 2] {
                if c >= b as i128 && c <= bound as i128 && (p as i128 - r) % 2 == 0 {
                    out.insert((a, b, c as u64));
                }
            }
        }
    }
    out
}

fn as_tuples(s: &BTreeSet<MarkovTriple>) -> BTreeSet<(u64, u64, u64)> {
    let d = |x: &num_bigint::BigUint| u64::try_from(x).unwrap();
    s.iter().map(|t| (d(&t.a), d(&t.b), d(&t.c))).collect()
}

#[test]
fn markov_tree_up_to_a_thousand() {
    let found = markov_enumerate(1000);
    assert!(found.iter().all(|t| t.satisfies_equation()));
    assert_eq!(as_tuples(&found), brute_force_markov(1000));
    let repeats: Vec<_> = found.iter().filter(|t| t.has_repeat()).cloned().collect();
    assert_eq!(repeats, vec![MarkovTriple::new(1, 1, 1).unwrap(), MarkovTriple::new(1, 1, 2).unwrap()]);
    assert!(found.contains(&MarkovTriple::new(5, 29, 433).unwrap()));
}

#[test]
fn markov_matrix_class() {
    let b = markov_matrix();
    let literal = literal_mutation_class(&b, 100).unwrap();
    let expected: BTreeSet<_> = [b.rows().to_vec(), b.neg().rows().to_vec()].into();
    assert_eq!(literal, expected);
    assert_eq!(mutation_class_keys(&b, 100).unwrap().len(), 1);
}

proptest! {
    #[test]
    fn markov_exchanges_are_involutions(path in proptest::collection::vec(0usize..3, 0..12), pos in 0usize..3) {
        let mut t = MarkovTriple::new(1, 1, 1).unwrap();
        for k in path {
            t = t.exchange(k);
            prop_assert!(t.satisfies_equation());
        }
        prop_assert_eq!(t.exchange(pos).exchange(pos), t);
    }
}

#[test]
fn hexagon_fan_matrix() {
    let t = Triangulation::fan(6, 1).unwrap();
    assert_eq!(t.chords(), vec![(1, 3), (1, 4), (1, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]);
    let expected = vec![
        vec![0, 1, 0],
        vec![-1, 0, 1],
        vec![0, -1, 0],
        vec![1, 0, 0],
        vec![-1, 0, 0],
        vec![1, -1, 0],
        vec![0, 1, -1],
        vec![0, 0, 1],
        vec![0, 0, -1],
    ];
    assert_eq!(t.exchange_matrix().rows(), expected.as_slice());
}

#[test]
fn square_flip_gives_the_ptolemy_variable() {
    let t = Triangulation::new(4, &[(1, 3)]).unwrap();
    let s = gr2_seed(&t);
    assert_eq!(s.labels, vec![(1, 3), (1, 2), (2, 3), (3, 4), (1, 4)]);
    let x = |c| s.variable(c).unwrap().clone();
    let m = mutate_at_diagonal(&s, (1, 3)).unwrap();
    assert_eq!(m.triangulation.diagonals(), vec![(2, 4)]);
    let expected = x((1, 2)).mul(&x((3, 4))).add(&x((1, 4)).mul(&x((2, 3)))).div(&x((1, 3))).unwrap();
    assert_eq!(m.variable((2, 4)).unwrap(), &expected);
    // and it is the minor on columns 2, 4
    let p = gr2_plucker_seed(&t);
    let mp = mutate_at_diagonal(&p, (1, 3)).unwrap();
    assert_eq!(mp.variable((2, 4)).unwrap(), &RationalFunction::from_laurent(&plucker_coordinate(4, 2, 4)));
}

/// Triangulations of the polygon on the listed vertices, split by the triangle on the closing side.
fn triangulations(vs: &[usize]) -> Vec<BTreeSet<(usize, usize)>> {
    if vs.len() < 3 {
        return vec![BTreeSet::new()];
    }
    let (a, b) = (vs[0], vs[vs.len() - 1]);
    let mut out = Vec::new();
    for m in 1..vs.len() - 1 {
        for left in triangulations(&vs[..=m]) {
            for right in triangulations(&vs[m..]) {
                let mut d: BTreeSet<_> = left.union(&right).copied().collect();
                if m > 1 {
                    d.insert((a, vs[m]));
                }
                if m < vs.len() - 2 {
                    d.insert((vs[m], b));
                }
                out.push(d);
            }
        }
    }
    out
}

#[test]
fn hexagon_flip_closure() {
    let c = gr2_flip_closure(6).unwrap();
    let oracle: BTreeSet<Vec<(usize, usize)>> =
        triangulations(&[1, 2, 3, 4, 5, 6]).into_iter().map(|d| d.into_iter().collect()).collect();
    assert_eq!(oracle.len(), 14);
    let found: BTreeSet<Vec<(usize, usize)>> = c.triangulations.iter().map(|t| t.diagonals()).collect();
    assert_eq!(found, oracle);
    assert_eq!(c.diagonals.len(), 9);
    assert_eq!(c.chords.len(), 15);
    assert!(c.mismatches.is_empty(), "{:?}", c.mismatches);
    assert_eq!(c.seeds, 14);
    assert_eq!(c.cluster_variables, 9);
    assert!(c.variables_are_pluckers);
}

#[test]
fn flips_match_mutation_for_small_polygons() {
    for n in 4..=7 {
        let c = gr2_flip_closure(n).unwrap();
        let catalan = [1usize, 1, 2, 5, 14, 42][n - 2];
        assert_eq!(c.triangulations.len(), catalan, "n={n}");
        assert!(c.mismatches.is_empty(), "n={n}");
        assert_eq!(c.chords.len(), n * (n - 1) / 2);
    }
}

#[test]
fn plucker_relations() {
    let r4 = plucker_verify(4).unwrap();
    assert_eq!((r4.instances, r4.passed()), (1, true));
    let r6 = plucker_verify(6).unwrap();
    assert_eq!(r6.instances, 15);
    assert!(r6.passed(), "{:?}", r6.failures);
    assert!(plucker_verify(7).is_err());
    let d = |i, j| plucker_coordinate(4, i, j);
    let lhs: LaurentPolynomial = &d(1, 3) * &d(2, 4);
    assert_eq!(lhs, &(&d(1, 2) * &d(3, 4)) + &(&d(1, 4) * &d(2, 3)));
}

#[test]
fn minor_identities() {
    assert!(short_plucker_instance_4x4());
    for size in 2..=4 {
        let r = short_plucker_verify(size).unwrap();
        assert!(r.passed(), "{size}: {:?}", r.failures);
    }
    // 2x2: only I = J = {} with i,j = 1,2 and k,l = 1,2
    assert_eq!(short_plucker_verify(2).unwrap().instances, 1);
    assert!(short_plucker_verify(5).is_err());
}
