//! Exchange matrices, quivers and their mutations, plus combinatorial classifiers.
//!
//! Directions are 0-based throughout the library.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExchangeError {
    #[error("direction {k} out of range for {n} mutable indices")]
    DirectionOutOfRange { k: usize, n: usize },
    #[error("matrix rows have inconsistent lengths or fewer rows than columns")]
    Shape,
    #[error("principal part is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("principal part is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("quiver has a loop or a 2-cycle")]
    InvalidQuiver,
}

fn pos(a: i64) -> i64 {
    a.max(0)
}

/// An N x n integer matrix whose first n rows form the principal part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeMatrix {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(rows: Vec<Vec<i64>>, n: usize) -> Result<Self, ExchangeError> {
        if rows.len() < n || rows.iter().any(|r| r.len() != n) {
            return Err(ExchangeError::Shape);
        }
        Ok(ExchangeMatrix { n, rows })
    }

    /// Square matrix without frozen rows.
    pub fn square(rows: Vec<Vec<i64>>) -> Result<Self, ExchangeError> {
        let n = rows.len();
        Self::new(rows, n)
    }

    pub fn zero(n: usize) -> Self {
        ExchangeMatrix {
            n,
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total row count N = n + f.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn frozen(&self) -> usize {
        self.rows.len() - self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn principal(&self) -> ExchangeMatrix {
        ExchangeMatrix {
            n: self.n,
            rows: self.rows[..self.n].to_vec(),
        }
    }

    pub fn neg(&self) -> ExchangeMatrix {
        ExchangeMatrix {
            n: self.n,
            rows: self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.rows[i][j] == -self.rows[j][i]))
    }

    /// Matrix mutation in direction k, applied to all rows.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix, ExchangeError> {
        if k >= self.n {
            return Err(ExchangeError::DirectionOutOfRange { k, n: self.n });
        }
        let mut out = self.rows.clone();
        for (i, row) in out.iter_mut().enumerate() {
            for j in 0..self.n {
                let b = self.rows[i][j];
                row[j] = if i == k || j == k {
                    -b
                } else {
                    let bik = self.rows[i][k];
                    let bkj = self.rows[k][j];
                    b + pos(bik) * pos(bkj) - pos(-bik) * pos(-bkj)
                };
            }
        }
        Ok(ExchangeMatrix { n: self.n, rows: out })
    }

    /// Mutate along a sequence of directions.
    pub fn mutate_path(&self, path: &[usize]) -> Result<ExchangeMatrix, ExchangeError> {
        let mut b = self.clone();
        for &k in path {
            b = b.mutate(k)?;
        }
        Ok(b)
    }

    /// Simultaneously relabel the mutable indices: new index i is old index perm[i].
    pub fn permute(&self, perm: &[usize]) -> ExchangeMatrix {
        let mut rows = Vec::with_capacity(self.m());
        for &pi in perm {
            rows.push(perm.iter().map(|&pj| self.rows[pi][pj]).collect());
        }
        for r in &self.rows[self.n..] {
            rows.push(perm.iter().map(|&pj| r[pj]).collect());
        }
        ExchangeMatrix { n: self.n, rows }
    }
}

/// Positive integer diagonal D with D*B skew-symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewSymmetrizer {
    pub d: Vec<i64>,
}

impl SkewSymmetrizer {
    pub fn certifies(&self, b: &ExchangeMatrix) -> bool {
        let n = b.n();
        self.d.len() == n
            && self.d.iter().all(|&x| x > 0)
            && (0..n).all(|i| (0..n).all(|j| self.d[i] * b.get(i, j) == -self.d[j] * b.get(j, i)))
    }
}

/// Minimal symmetrizer, normalized independently on each connected component.
pub fn find_symmetrizer(b: &ExchangeMatrix) -> Result<SkewSymmetrizer, ExchangeError> {
    let n = b.n();
    for i in 0..n {
        if b.get(i, i) != 0 {
            return Err(ExchangeError::NotSkewSymmetrizable);
        }
        for j in 0..n {
            let (x, y) = (b.get(i, j), b.get(j, i));
            if x * y > 0 || (x == 0) != (y == 0) {
                return Err(ExchangeError::NotSkewSymmetrizable);
            }
        }
    }
    let mut d: Vec<Option<Rat>> = vec![None; n];
    let mut result = vec![0i64; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(Rat::one());
        let mut comp = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if b.get(i, j) == 0 {
                    continue;
                }
                // d_i b_ij = -d_j b_ji
                let want = -&di * Rat::from_integer(BigInt::from(b.get(i, j))) / Rat::from_integer(BigInt::from(b.get(j, i)));
                match &d[j] {
                    Some(dj) => {
                        if *dj != want {
                            return Err(ExchangeError::NotSkewSymmetrizable);
                        }
                    }
                    None => {
                        d[j] = Some(want);
                        comp.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let mut l = BigInt::one();
        for &i in &comp {
            l = l.lcm(d[i].as_ref().unwrap().denom());
        }
        let mut g = BigInt::zero();
        for &i in &comp {
            let v = d[i].as_ref().unwrap();
            g = g.gcd(&(v.numer() * (&l / v.denom())));
        }
        for &i in &comp {
            let v = d[i].as_ref().unwrap();
            let x = v.numer() * (&l / v.denom()) / &g;
            result[i] = i64::try_from(x.abs()).expect("symmetrizer entry fits in i64");
        }
    }
    Ok(SkewSymmetrizer { d: result })
}

/// a_ii = 2, a_ij = -|b_ij| on the principal part.
pub fn cartan_companion(b: &ExchangeMatrix) -> Vec<Vec<i64>> {
    let n = b.n();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 2 } else { -b.get(i, j).abs() }).collect())
        .collect()
}

/// Number of connected components of the graph with an edge wherever b_ij != 0.
pub fn rho_components(b: &ExchangeMatrix) -> usize {
    let n = b.n();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && (b.get(i, j) != 0 || b.get(j, i) != 0) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}

/// A permutation sigma with b[sigma_i][sigma_j] <= 0 for i < j, if one exists.
pub fn is_acyclic(b: &ExchangeMatrix) -> Option<Vec<usize>> {
    let n = b.n();
    // Kahn's algorithm on the digraph i -> j whenever b_ij > 0; sinks go first.
    let mut out_deg: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| b.get(i, j) > 0).count()).collect();
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| out_deg[i] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for i in 0..n {
            if b.get(i, v) > 0 {
                out_deg[i] -= 1;
                if out_deg[i] == 0 {
                    ready.push(i);
                }
            }
        }
    }
    if order.len() == n {
        Some(order)
    } else {
        None
    }
}

/// Finite multiset of arrows on vertices 0..n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    arrows: BTreeMap<(usize, usize), u64>,
}

impl Quiver {
    pub fn new(n: usize, arrows: &[(usize, usize)]) -> Result<Self, ExchangeError> {
        let mut q = Quiver { n, arrows: BTreeMap::new() };
        for &(i, j) in arrows {
            if i == j || i >= n || j >= n {
                return Err(ExchangeError::InvalidQuiver);
            }
            *q.arrows.entry((i, j)).or_insert(0) += 1;
        }
        if q.arrows.keys().any(|&(i, j)| q.arrows.contains_key(&(j, i))) {
            return Err(ExchangeError::InvalidQuiver);
        }
        Ok(q)
    }

    pub fn from_matrix(b: &ExchangeMatrix) -> Result<Self, ExchangeError> {
        if !b.is_skew_symmetric() {
            return Err(ExchangeError::NotSkewSymmetric);
        }
        let n = b.n();
        let mut arrows = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if b.get(i, j) > 0 {
                    arrows.insert((i, j), b.get(i, j) as u64);
                }
            }
        }
        Ok(Quiver { n, arrows })
    }

    pub fn to_matrix(&self) -> ExchangeMatrix {
        let mut rows = vec![vec![0i64; self.n]; self.n];
        for (&(i, j), &c) in &self.arrows {
            rows[i][j] += c as i64;
            rows[j][i] -= c as i64;
        }
        ExchangeMatrix { n: self.n, rows }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arrow_count(&self) -> u64 {
        self.arrows.values().sum()
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u64 {
        self.arrows.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.arrows.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    /// Mutation at k by the three-step rule.
    pub fn mutate(&self, k: usize) -> Result<Quiver, ExchangeError> {
        if k >= self.n {
            return Err(ExchangeError::DirectionOutOfRange { k, n: self.n });
        }
        let mut multi: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (&a, &c) in &self.arrows {
            *multi.entry(a).or_insert(0) += c as i64;
        }
        // Step 1: one arrow i -> j for every path i -> k -> j.
        let ins: Vec<(usize, u64)> = self.arrows.iter().filter(|(&(_, j), _)| j == k).map(|(&(i, _), &c)| (i, c)).collect();
        let outs: Vec<(usize, u64)> = self.arrows.iter().filter(|(&(i, _), _)| i == k).map(|(&(_, j), &c)| (j, c)).collect();
        for &(i, a) in &ins {
            for &(j, c) in &outs {
                *multi.entry((i, j)).or_insert(0) += (a * c) as i64;
            }
        }
        // Step 2: reverse arrows incident to k.
        let mut reversed: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for ((i, j), c) in multi {
            let key = if i == k || j == k { (j, i) } else { (i, j) };
            *reversed.entry(key).or_insert(0) += c;
        }
        // Step 3: cancel oriented 2-cycles.
        let mut arrows = BTreeMap::new();
        for (&(i, j), &c) in &reversed {
            let back = reversed.get(&(j, i)).copied().unwrap_or(0);
            if c > back {
                arrows.insert((i, j), (c - back) as u64);
            }
        }
        Ok(Quiver { n: self.n, arrows })
    }
}

/// Canonical representative of the principal part under simultaneous permutation and global sign.
pub fn canonical_principal(b: &ExchangeMatrix) -> Vec<i64> {
    let p = b.principal();
    let a = canonical_under_permutation(&p);
    let c = canonical_under_permutation(&p.neg());
    a.min(c)
}

fn refine_colors(b: &ExchangeMatrix) -> Vec<usize> {
    let n = b.n();
    let mut colors = vec![0usize; n];
    for _ in 0..n.max(1) {
        let sigs: Vec<(usize, Vec<(i64, i64, usize)>)> = (0..n)
            .map(|i| {
                let mut s: Vec<(i64, i64, usize)> = (0..n)
                    .filter(|&j| j != i && (b.get(i, j) != 0 || b.get(j, i) != 0))
                    .map(|j| (b.get(i, j), b.get(j, i), colors[j]))
                    .collect();
                s.sort();
                (colors[i], s)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| uniq.binary_search(s).unwrap()).collect();
        let stable = {
            let a = colors.iter().collect::<HashSet<_>>().len();
            let b2 = next.iter().collect::<HashSet<_>>().len();
            a == b2
        };
        colors = next;
        if stable {
            break;
        }
    }
    colors
}

fn canonical_under_permutation(b: &ExchangeMatrix) -> Vec<i64> {
    let n = b.n();
    let colors = refine_colors(b);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    let groups: Vec<Vec<usize>> = classes.into_values().collect();
    let mut best: Option<Vec<i64>> = None;
    let mut current: Vec<usize> = Vec::with_capacity(n);
    permute_groups(&groups, 0, &mut current, &mut |perm| {
        let flat: Vec<i64> = perm.iter().flat_map(|&i| perm.iter().map(move |&j| (i, j))).map(|(i, j)| b.get(i, j)).collect();
        if best.as_ref().map_or(true, |bb| flat < *bb) {
            best = Some(flat);
        }
    });
    best.unwrap_or_default()
}

fn permute_groups(groups: &[Vec<usize>], g: usize, current: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if g == groups.len() {
        f(current);
        return;
    }
    let mut items = groups[g].clone();
    heap_permutations(&mut items, groups[g].len(), &mut |p| {
        let base = current.len();
        current.extend_from_slice(p);
        permute_groups(groups, g + 1, current, f);
        current.truncate(base);
    });
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, f);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, f);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoFiniteStatus {
    TwoFinite,
    /// Mutation path from the input to a matrix with |b_ij b_ji| >= 4.
    NotTwoFinite(Vec<usize>),
    Unknown,
}

fn violates(b: &ExchangeMatrix) -> bool {
    let n = b.n();
    (0..n).any(|i| (0..n).any(|j| (b.get(i, j) * b.get(j, i)).abs() >= 4))
}

/// Breadth-first search of the principal mutation class, at most `budget` classes.
pub fn two_finite_status(b: &ExchangeMatrix, budget: usize) -> TwoFiniteStatus {
    let start = b.principal();
    let mut seen = HashSet::new();
    seen.insert(canonical_principal(&start));
    let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
    let mut overflow = false;
    while let Some((m, path)) = queue.pop_front() {
        if violates(&m) {
            return TwoFiniteStatus::NotTwoFinite(path);
        }
        for k in 0..m.n() {
            let next = m.mutate(k).unwrap();
            let key = canonical_principal(&next);
            if seen.contains(&key) {
                continue;
            }
            if seen.len() >= budget {
                overflow = true;
                if violates(&next) {
                    let mut p = path.clone();
                    p.push(k);
                    return TwoFiniteStatus::NotTwoFinite(p);
                }
                continue;
            }
            seen.insert(key);
            let mut p = path.clone();
            p.push(k);
            queue.push_back((next, p));
        }
    }
    if overflow {
        TwoFiniteStatus::Unknown
    } else {
        TwoFiniteStatus::TwoFinite
    }
}

/// Random n x n skew-symmetrizable principal part with `frozen` extra rows, entries in [-bound, bound].
///
/// Half the time the principal part is skew-symmetric; otherwise b_ij = s_ij d_j with s skew and
/// d_j in {1, 2}.
pub fn random_exchange_matrix<R: rand::Rng + ?Sized>(n: usize, frozen: usize, bound: i64, rng: &mut R) -> ExchangeMatrix {
    let d: Vec<i64> = if bound >= 2 && rng.gen_bool(0.5) {
        (0..n).map(|_| rng.gen_range(1..=2)).collect()
    } else {
        vec![1; n]
    };
    let mut rows = vec![vec![0i64; n]; n + frozen];
    for i in 0..n {
        for j in i + 1..n {
            let s_max = bound / d[i].max(d[j]);
            let s = rng.gen_range(-s_max..=s_max);
            rows[i][j] = s * d[j];
            rows[j][i] = -s * d[i];
        }
    }
    for row in rows.iter_mut().skip(n) {
        for x in row.iter_mut() {
            *x = rng.gen_range(-bound..=bound);
        }
    }
    ExchangeMatrix::new(rows, n).expect("rectangular")
}
