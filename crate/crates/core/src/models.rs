//! Small worked examples: Markov triples, triangulations of a polygon and the Grassmannian
//! Gr(2, n), and determinantal identities checked symbolically.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;

use crate::algebra::{sym_det, LaurentPolynomial, RationalFunction};
use crate::algebra::det::DET_SIZE_BOUND;
use crate::exchange::{canonical_principal, ExchangeMatrix};
use crate::seed::{enumerate_exchange_graph, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("({0}, {1}) is not a diagonal of the triangulation")]
    NotADiagonal(usize, usize),
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("size {0} is beyond the supported bound {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Seed(#[from] SeedError),
}

/// Positive integers with a^2 + b^2 + c^2 = 3abc.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkovTriple {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
}

impl MarkovTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Option<Self> {
        Self::from_big(a.into(), b.into(), c.into())
    }

    pub fn from_big(a: BigUint, b: BigUint, c: BigUint) -> Option<Self> {
        let t = MarkovTriple { a, b, c };
        t.satisfies_equation().then_some(t)
    }

    pub fn satisfies_equation(&self) -> bool {
        let zero = BigUint::from(0u32);
        if self.a == zero || self.b == zero || self.c == zero {
            return false;
        }
        let lhs = &self.a * &self.a + &self.b * &self.b + &self.c * &self.c;
        lhs == BigUint::from(3u32) * &self.a * &self.b * &self.c
    }

    pub fn entries(&self) -> [&BigUint; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn sorted(&self) -> MarkovTriple {
        let mut v = [self.a.clone(), self.b.clone(), self.c.clone()];
        v.sort();
        let [a, b, c] = v;
        MarkovTriple { a, b, c }
    }

    pub fn max_entry(&self) -> &BigUint {
        (&self.a).max(&self.b).max(&self.c)
    }

    pub fn has_repeat(&self) -> bool {
        self.a == self.b || self.b == self.c || self.a == self.c
    }

    /// Replaces one coordinate z by 3 (product of the others) - z.
    pub fn exchange(&self, pos: usize) -> MarkovTriple {
        let three = BigUint::from(3u32);
        let (a, b, c) = (&self.a, &self.b, &self.c);
        match pos {
            0 => MarkovTriple { a: three * b * c - a, b: b.clone(), c: c.clone() },
            1 => MarkovTriple { a: a.clone(), b: three * a * c - b, c: c.clone() },
            2 => MarkovTriple { a: a.clone(), b: b.clone(), c: three * a * b - c },
            _ => panic!("a triple has three positions"),
        }
    }
}

impl std::fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn markov_neighbors(t: &MarkovTriple) -> [MarkovTriple; 3] {
    [t.exchange(0), t.exchange(1), t.exchange(2)]
}

/// Breadth-first search from (1,1,1), triples stored sorted, pruning past `bound`.
pub fn markov_enumerate(bound: u64) -> BTreeSet<MarkovTriple> {
    let bound = BigUint::from(bound);
    let start = MarkovTriple::new(1, 1, 1).expect("(1,1,1) is a Markov triple");
    let mut seen = BTreeSet::new();
    if start.max_entry() > &bound {
        return seen;
    }
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for u in markov_neighbors(&t) {
            let u = u.sorted();
            if u.max_entry() > &bound || seen.contains(&u) {
                continue;
            }
            debug_assert!(u.satisfies_equation());
            seen.insert(u.clone());
            queue.push_back(u);
        }
    }
    seen
}

pub fn markov_matrix() -> ExchangeMatrix {
    ExchangeMatrix::square(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).expect("square")
}

/// Every matrix reachable from `b` by mutations, taken literally (no relabelling).
/// Returns None if more than `budget` matrices turn up.
pub fn literal_mutation_class(b: &ExchangeMatrix, budget: usize) -> Option<BTreeSet<Vec<Vec<i64>>>> {
    let mut seen = BTreeSet::from([b.rows().to_vec()]);
    let mut queue = VecDeque::from([b.clone()]);
    while let Some(m) = queue.pop_front() {
        for k in 0..m.n() {
            let next = m.mutate(k).expect("direction in range");
            if seen.insert(next.rows().to_vec()) {
                if seen.len() > budget {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen)
}

/// Canonical forms met in the mutation class of `b`; None past `budget`.
pub fn mutation_class_keys(b: &ExchangeMatrix, budget: usize) -> Option<BTreeSet<Vec<i64>>> {
    let start = b.principal();
    let mut seen = BTreeSet::from([canonical_principal(&start)]);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        for k in 0..m.n() {
            let next = m.mutate(k).expect("direction in range");
            if seen.insert(canonical_principal(&next)) {
                if seen.len() > budget {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(seen)
}

pub type Chord = (usize, usize);

fn chord(a: usize, b: usize) -> Chord {
    (a.min(b), a.max(b))
}

fn crosses(p: Chord, q: Chord) -> bool {
    let (i, j) = p;
    let (k, l) = q;
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

/// A triangulation of the n-gon with vertices 1..n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    n: usize,
    diagonals: BTreeSet<Chord>,
}

impl Triangulation {
    pub fn new(n: usize, diagonals: &[Chord]) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::Invalid(format!("a polygon needs 3 vertices, got {n}")));
        }
        let set: BTreeSet<Chord> = diagonals.iter().map(|&(a, b)| chord(a, b)).collect();
        if set.len() != diagonals.len() {
            return Err(ModelError::Invalid("repeated diagonal".into()));
        }
        if set.len() != n - 3 {
            return Err(ModelError::Invalid(format!("expected {} diagonals, got {}", n - 3, set.len())));
        }
        for &(i, j) in &set {
            if i < 1 || j > n || j - i < 2 || (i == 1 && j == n) {
                return Err(ModelError::Invalid(format!("({i}, {j}) is not a diagonal of the {n}-gon")));
            }
        }
        for &p in &set {
            for &q in &set {
                if crosses(p, q) {
                    return Err(ModelError::Invalid(format!("{p:?} crosses {q:?}")));
                }
            }
        }
        Ok(Triangulation { n, diagonals: set })
    }

    /// All diagonals from vertex v.
    pub fn fan(n: usize, v: usize) -> Result<Self, ModelError> {
        if v < 1 || v > n {
            return Err(ModelError::Invalid(format!("vertex {v} of an {n}-gon")));
        }
        let d: Vec<Chord> = (2..n - 1).map(|s| chord(v, (v - 1 + s) % n + 1)).collect();
        Self::new(n, &d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> Vec<Chord> {
        self.diagonals.iter().copied().collect()
    }

    /// Sides (1,2), (2,3), ..., (n-1,n), (1,n).
    pub fn sides(&self) -> Vec<Chord> {
        (1..=self.n).map(|i| chord(i, i % self.n + 1)).collect()
    }

    /// Diagonals, then sides.
    pub fn chords(&self) -> Vec<Chord> {
        let mut c = self.diagonals();
        c.extend(self.sides());
        c
    }

    pub fn is_chord(&self, c: Chord) -> bool {
        let (i, j) = chord(c.0, c.1);
        j - i == 1 || (i == 1 && j == self.n) || self.diagonals.contains(&(i, j))
    }

    /// The quadrilateral i < j < k, l outside [i, k] around a diagonal (i, k), as (i, j, k, l).
    pub fn quadrilateral(&self, d: Chord) -> Result<(usize, usize, usize, usize), ModelError> {
        let (i, k) = chord(d.0, d.1);
        if !self.diagonals.contains(&(i, k)) {
            return Err(ModelError::NotADiagonal(d.0, d.1));
        }
        let apex = |v: &usize| self.is_chord((i, *v)) && self.is_chord((*v, k));
        let j = (i + 1..k).find(apex).expect("a diagonal borders two triangles");
        let l = (k + 1..=self.n).chain(1..i).find(apex).expect("a diagonal borders two triangles");
        Ok((i, j, k, l))
    }

    pub fn flip(&self, d: Chord) -> Result<Triangulation, ModelError> {
        let (i, j, k, l) = self.quadrilateral(d)?;
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(&(i, k));
        diagonals.insert(chord(j, l));
        Ok(Triangulation { n: self.n, diagonals })
    }

    /// Rows indexed by `chords()`, columns by `diagonals()`.
    pub fn exchange_matrix(&self) -> ExchangeMatrix {
        let chords = self.chords();
        let pos: BTreeMap<Chord, usize> = chords.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let nd = self.diagonals.len();
        let mut rows = vec![vec![0i64; nd]; chords.len()];
        for (col, &d) in self.diagonals.iter().enumerate() {
            let (i, j, k, l) = self.quadrilateral(d).expect("own diagonal");
            for (c, s) in [((i, j), 1), ((k, l), 1), ((j, k), -1), ((i, l), -1)] {
                rows[pos[&chord(c.0, c.1)]][col] += s;
            }
        }
        ExchangeMatrix::new(rows, nd).expect("rectangular")
    }
}

/// A seed of Gr(2, n) with its variables labelled by chords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gr2Seed {
    pub triangulation: Triangulation,
    pub labels: Vec<Chord>,
    pub seed: Seed,
}

impl Gr2Seed {
    pub fn position(&self, c: Chord) -> Option<usize> {
        let c = chord(c.0, c.1);
        self.labels.iter().position(|&l| l == c)
    }

    pub fn variable(&self, c: Chord) -> Option<&RationalFunction> {
        self.position(c).map(|p| &self.seed.vars()[p])
    }
}

/// Formal symbols x_c, one per chord, in the order of `Triangulation::chords`.
pub fn gr2_seed(t: &Triangulation) -> Gr2Seed {
    Gr2Seed {
        triangulation: t.clone(),
        labels: t.chords(),
        seed: Seed::initial(t.exchange_matrix()),
    }
}

/// The same seed with x_ij specialised to the 2x2 minors of a generic 2 x n matrix.
pub fn gr2_plucker_seed(t: &Triangulation) -> Gr2Seed {
    let labels = t.chords();
    let vars = labels.iter().map(|&(i, j)| RationalFunction::from_laurent(&plucker_coordinate(t.n, i, j))).collect();
    Gr2Seed {
        triangulation: t.clone(),
        seed: Seed::new(vars, t.exchange_matrix()).expect("one variable per chord"),
        labels,
    }
}

/// Entry (r, c) of the generic 2 x n matrix, r in {1, 2} and c in 1..=n, as a variable.
pub fn generic_entry(n: usize, r: usize, c: usize) -> LaurentPolynomial {
    LaurentPolynomial::var(2 * n, (r - 1) * n + (c - 1))
}

pub fn plucker_coordinate(n: usize, i: usize, j: usize) -> LaurentPolynomial {
    let m = vec![vec![generic_entry(n, 1, i), generic_entry(n, 1, j)], vec![generic_entry(n, 2, i), generic_entry(n, 2, j)]];
    sym_det(&m)
}

/// Compares two labelled seeds as maps from chords to variables and chord pairs to entries.
pub fn same_labelled_seed(a: &Gr2Seed, b: &Gr2Seed) -> bool {
    if a.labels.len() != b.labels.len() || a.seed.n() != b.seed.n() {
        return false;
    }
    let Some(map): Option<Vec<usize>> = a.labels.iter().map(|&c| b.position(c)).collect() else {
        return false;
    };
    let n = a.seed.n();
    if map[..n].iter().any(|&q| q >= n) {
        return false;
    }
    (0..a.labels.len()).all(|p| a.seed.vars()[p] == b.seed.vars()[map[p]])
        && (0..a.labels.len()).all(|p| (0..n).all(|r| a.seed.matrix().get(p, r) == b.seed.matrix().get(map[p], map[r])))
}

/// Mutates the labelled seed at diagonal d, relabelling that position by the flipped diagonal.
pub fn mutate_at_diagonal(s: &Gr2Seed, d: Chord) -> Result<Gr2Seed, ModelError> {
    let (_, j, _, l) = s.triangulation.quadrilateral(d)?;
    let p = s.position(d).expect("diagonals are labelled");
    let mut labels = s.labels.clone();
    labels[p] = chord(j, l);
    Ok(Gr2Seed {
        triangulation: s.triangulation.flip(d)?,
        labels,
        seed: s.seed.mutate(p)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipClosure {
    pub triangulations: BTreeSet<Triangulation>,
    pub diagonals: BTreeSet<Chord>,
    pub chords: BTreeSet<Chord>,
    /// Pairs (T, d) where flipping d in T disagreed with mutating the Plücker seed.
    pub mismatches: Vec<(Triangulation, Chord)>,
    /// Mutable variables of the Plücker seed's exchange graph.
    pub cluster_variables: usize,
    /// Whether each of them is the Plücker coordinate of some diagonal.
    pub variables_are_pluckers: bool,
    pub seeds: usize,
}

/// Closure of the fan at vertex 1 under flips, checking each flip against seed mutation.
pub fn gr2_flip_closure(n: usize) -> Result<FlipClosure, ModelError> {
    let start = Triangulation::fan(n, 1)?;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut mismatches = Vec::new();
    while let Some(t) = queue.pop_front() {
        let s = gr2_plucker_seed(&t);
        for d in t.diagonals() {
            let u = t.flip(d)?;
            if !same_labelled_seed(&mutate_at_diagonal(&s, d)?, &gr2_plucker_seed(&u)) {
                mismatches.push((t.clone(), d));
            }
            if seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    let diagonals: BTreeSet<Chord> = seen.iter().flat_map(|t| t.diagonals()).collect();
    let chords: BTreeSet<Chord> = seen.iter().flat_map(|t| t.chords()).collect();
    let g = enumerate_exchange_graph(&gr2_plucker_seed(&start).seed, 10_000)?;
    let pluckers: BTreeSet<RationalFunction> =
        diagonals.iter().map(|&(i, j)| RationalFunction::from_laurent(&plucker_coordinate(n, i, j))).collect();
    Ok(FlipClosure {
        variables_are_pluckers: g.variables.is_subset(&pluckers),
        cluster_variables: g.variables.len(),
        seeds: g.nodes.len(),
        triangulations: seen,
        diagonals,
        chords,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub instances: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Δ_ik Δ_jl = Δ_ij Δ_kl + Δ_il Δ_jk for all i < j < k < l on a generic 2 x n matrix.
pub fn plucker_verify(n: usize) -> Result<IdentityReport, ModelError> {
    if n > 6 {
        return Err(ModelError::TooLarge(n, 6));
    }
    let d = |i, j| plucker_coordinate(n, i, j);
    let mut report = IdentityReport { instances: 0, failures: Vec::new() };
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    report.instances += 1;
                    let lhs = &d(i, k) * &d(j, l);
                    let rhs = &(&d(i, j) * &d(k, l)) + &(&d(i, l) * &d(j, k));
                    if lhs != rhs {
                        report.failures.push(format!("({i},{j},{k},{l})"));
                    }
                }
            }
        }
    }
    Ok(report)
}

fn subsets(ground: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if ground.len() < size {
        return vec![];
    }
    let mut out: Vec<Vec<usize>> = subsets(&ground[1..], size - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, ground[0]);
            s
        })
        .collect();
    out.extend(subsets(&ground[1..], size));
    out
}

struct Minors {
    size: usize,
    cache: BTreeMap<(Vec<usize>, Vec<usize>), LaurentPolynomial>,
}

impl Minors {
    /// Minor of the generic size x size matrix; rows and columns are 1-based and sorted here.
    fn get(&mut self, rows: &[usize], cols: &[usize]) -> LaurentPolynomial {
        let mut r = rows.to_vec();
        let mut c = cols.to_vec();
        r.sort();
        c.sort();
        let arity = self.size * self.size;
        if r.is_empty() {
            return LaurentPolynomial::one(arity);
        }
        let size = self.size;
        self.cache
            .entry((r.clone(), c.clone()))
            .or_insert_with(|| {
                let m: Vec<Vec<LaurentPolynomial>> =
                    r.iter().map(|&a| c.iter().map(|&b| LaurentPolynomial::var(arity, (a - 1) * size + (b - 1))).collect()).collect();
                sym_det(&m)
            })
            .clone()
    }
}

/// Δ_{I+i,J+k} Δ_{I+j,J+l} = Δ_{I,J} Δ_{I+ij,J+kl} + Δ_{I+i,J+l} Δ_{I+j,J+k} on a generic
/// size x size matrix, over all i < j, k < l and equal-size I, J avoiding them.
pub fn short_plucker_verify(size: usize) -> Result<IdentityReport, ModelError> {
    if size > 4 || size > DET_SIZE_BOUND {
        return Err(ModelError::TooLarge(size, 4));
    }
    let mut minors = Minors { size, cache: BTreeMap::new() };
    let ground: Vec<usize> = (1..=size).collect();
    let mut report = IdentityReport { instances: 0, failures: Vec::new() };
    let with = |s: &[usize], extra: &[usize]| -> Vec<usize> { s.iter().chain(extra).copied().collect() };
    for ij in subsets(&ground, 2) {
        for kl in subsets(&ground, 2) {
            let (i, j, k, l) = (ij[0], ij[1], kl[0], kl[1]);
            let rest_rows: Vec<usize> = ground.iter().copied().filter(|x| !ij.contains(x)).collect();
            let rest_cols: Vec<usize> = ground.iter().copied().filter(|x| !kl.contains(x)).collect();
            for t in 0..=size - 2 {
                for ri in subsets(&rest_rows, t) {
                    for cj in subsets(&rest_cols, t) {
                        report.instances += 1;
                        let lhs = &minors.get(&with(&ri, &[i]), &with(&cj, &[k])) * &minors.get(&with(&ri, &[j]), &with(&cj, &[l]));
                        let rhs = &(&minors.get(&ri, &cj) * &minors.get(&with(&ri, &[i, j]), &with(&cj, &[k, l])))
                            + &(&minors.get(&with(&ri, &[i]), &with(&cj, &[l])) * &minors.get(&with(&ri, &[j]), &with(&cj, &[k])));
                        if lhs != rhs {
                            report.failures.push(format!("I={ri:?} J={cj:?} i={i} j={j} k={k} l={l}"));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The single instance I = J = {}, rows {1,2}, columns {3,4} of a generic 4 x 4 matrix.
pub fn short_plucker_instance_4x4() -> bool {
    let mut minors = Minors { size: 4, cache: BTreeMap::new() };
    let lhs = &minors.get(&[1], &[3]) * &minors.get(&[2], &[4]);
    let rhs = &(&minors.get(&[], &[]) * &minors.get(&[1, 2], &[3, 4])) + &(&minors.get(&[1], &[4]) * &minors.get(&[2], &[3]));
    lhs == rhs && !lhs.is_zero() && minors.get(&[], &[]).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markov_basics() {
        let t = MarkovTriple::new(1, 1, 1).unwrap();
        let ns = markov_neighbors(&t);
        assert_eq!(ns[2], MarkovTriple::new(1, 1, 2).unwrap());
        assert_eq!(ns[0], MarkovTriple::new(2, 1, 1).unwrap());
        assert_eq!(ns[2].exchange(2), t);
        let u = MarkovTriple::new(1, 2, 5).unwrap();
        assert_eq!(u.exchange(0), MarkovTriple::new(29, 2, 5).unwrap());
        assert!(MarkovTriple::new(1, 2, 3).is_none());
        assert!(MarkovTriple::new(0, 0, 0).is_none());
    }

    #[test]
    fn small_enumerations() {
        let two: Vec<_> = markov_enumerate(2).into_iter().collect();
        assert_eq!(two, vec![MarkovTriple::new(1, 1, 1).unwrap(), MarkovTriple::new(1, 1, 2).unwrap()]);
        assert!(markov_enumerate(5).contains(&MarkovTriple::new(1, 2, 5).unwrap()));
        assert!(markov_enumerate(0).is_empty());
    }

    #[test]
    fn square_flip() {
        let t = Triangulation::new(4, &[(1, 3)]).unwrap();
        assert_eq!(t.flip((1, 3)).unwrap().diagonals(), vec![(2, 4)]);
        assert_eq!(t.flip((1, 2)), Err(ModelError::NotADiagonal(1, 2)));
        assert!(Triangulation::new(5, &[(1, 3), (2, 4)]).is_err());
        assert!(Triangulation::new(5, &[(1, 3)]).is_err());
        assert!(Triangulation::new(4, &[(1, 2)]).is_err());
    }

    #[test]
    fn fan_matrix_is_skew_on_diagonals() {
        for n in 4..=8 {
            let b = Triangulation::fan(n, 1).unwrap().exchange_matrix();
            assert!(b.is_skew_symmetric(), "n={n}");
            assert_eq!(b.m(), 2 * n - 3);
        }
    }
}
