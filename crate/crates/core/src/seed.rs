//! Seeds of geometric type, their mutation and exchange graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{lp_exact_div, poly_gcd, AlgebraError, LaurentPolynomial, Rat, RationalFunction};
use crate::exchange::{ExchangeError, ExchangeMatrix};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeedError {
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
    #[error("exchange relation did not divide exactly: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("cluster has {vars} entries but the matrix has {rows} rows")]
    Shape { vars: usize, rows: usize },
}

/// A cluster of N rational functions in the initial variables together with an N x n matrix.
///
/// `history` records the mutation path from the initial seed, with immediate repeats cancelled.
#[derive(Debug, Clone)]
pub struct Seed {
    vars: Vec<RationalFunction>,
    matrix: ExchangeMatrix,
    history: Vec<usize>,
}

impl PartialEq for Seed {
    fn eq(&self, o: &Self) -> bool {
        self.vars == o.vars && self.matrix == o.matrix
    }
}

impl Eq for Seed {}

impl Seed {
    /// The initial seed: cluster (x_1, ..., x_N) in N ambient variables.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let m = matrix.m();
        Seed {
            vars: (0..m).map(|i| RationalFunction::var(m, i)).collect(),
            matrix,
            history: Vec::new(),
        }
    }

    pub fn new(vars: Vec<RationalFunction>, matrix: ExchangeMatrix) -> Result<Self, SeedError> {
        if vars.len() != matrix.m() {
            return Err(SeedError::Shape {
                vars: vars.len(),
                rows: matrix.m(),
            });
        }
        Ok(Seed {
            vars,
            matrix,
            history: Vec::new(),
        })
    }

    pub fn vars(&self) -> &[RationalFunction] {
        &self.vars
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn mutable_vars(&self) -> &[RationalFunction] {
        &self.vars[..self.n()]
    }

    /// Seed mutation in direction k.
    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        let matrix = self.matrix.mutate(k)?;
        let col = self.matrix.column(k);
        let new_var = exchange(&self.vars, &col, k)?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        let mut history = self.history.clone();
        if history.last() == Some(&k) {
            history.pop();
        } else {
            history.push(k);
        }
        Ok(Seed { vars, matrix, history })
    }

    pub fn mutate_path(&self, path: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in path {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Positions of the mutable variables sorted by their canonical forms.
    fn sort_permutation(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&a, &b| self.vars[a].cmp(&self.vars[b]));
        idx
    }

    /// Key identifying a seed up to relabelling of its mutable indices.
    pub fn canonical_key(&self) -> (Vec<RationalFunction>, ExchangeMatrix) {
        let perm = self.sort_permutation();
        let vars = perm.iter().map(|&i| self.vars[i].clone()).collect();
        (vars, self.matrix.permute(&perm))
    }
}

/// Rough count of term products needed to mutate at k: the sizes of the two exchange monomials
/// expanded naively, plus the division by x_k. Saturates instead of overflowing.
pub fn exchange_cost(s: &Seed, k: usize) -> u128 {
    let col = s.matrix().column(k);
    let size = |v: &RationalFunction| (v.numerator().len() * v.denominator().len()).max(1) as u128;
    let mut plus: u128 = 1;
    let mut minus: u128 = 1;
    for (i, &b) in col.iter().enumerate() {
        let t = size(&s.vars()[i]).saturating_pow(b.unsigned_abs() as u32);
        if b > 0 {
            plus = plus.saturating_mul(t);
        } else if b < 0 {
            minus = minus.saturating_mul(t);
        }
    }
    let expanded = plus.saturating_add(minus);
    expanded.saturating_add(expanded.saturating_mul(size(&s.vars()[k])))
}

/// x'_k = (prod_{b_ik>0} x_i^b_ik + prod_{b_ik<0} x_i^-b_ik) / x_k.
fn exchange(vars: &[RationalFunction], col: &[i64], k: usize) -> Result<RationalFunction, SeedError> {
    let arity = vars[0].arity();
    let laurent: Option<Vec<LaurentPolynomial>> = vars.iter().map(|v| v.to_laurent()).collect();
    if let Some(l) = laurent {
        let mut plus = LaurentPolynomial::one(arity);
        let mut minus = LaurentPolynomial::one(arity);
        for (i, &b) in col.iter().enumerate() {
            if b > 0 {
                plus = &plus * &l[i].pow(b as u32);
            } else if b < 0 {
                minus = &minus * &l[i].pow((-b) as u32);
            }
        }
        let q = lp_exact_div(&(&plus + &minus), &l[k])?;
        return Ok(RationalFunction::from_laurent(&q));
    }
    let mut plus = RationalFunction::one(arity);
    let mut minus = RationalFunction::one(arity);
    for (i, &b) in col.iter().enumerate() {
        if b > 0 {
            plus = plus.mul(&vars[i].pow(b)?);
        } else if b < 0 {
            minus = minus.mul(&vars[i].pow(-b)?);
        }
    }
    Ok(plus.add(&minus).div(&vars[k])?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphStatus {
    Complete,
    Truncated,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    /// Seeds in discovery order; node 0 is the starting seed.
    pub nodes: Vec<Seed>,
    /// (from, direction in the labelling of `from`, to)
    pub edges: Vec<(usize, usize, usize)>,
    pub status: GraphStatus,
    /// Distinct mutable cluster variables met along the way.
    pub variables: BTreeSet<RationalFunction>,
}

impl ExchangeGraph {
    pub fn neighbour(&self, node: usize, k: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.0 == node && e.1 == k).map(|e| e.2)
    }
}

/// Breadth-first enumeration of seeds up to relabelling, stopping at `max_nodes` seeds.
pub fn enumerate_exchange_graph(s: &Seed, max_nodes: usize) -> Result<ExchangeGraph, SeedError> {
    let mut nodes = vec![s.clone()];
    let mut index: HashMap<(Vec<RationalFunction>, ExchangeMatrix), usize> = HashMap::new();
    index.insert(s.canonical_key(), 0);
    let mut variables: BTreeSet<RationalFunction> = s.mutable_vars().iter().cloned().collect();
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut status = GraphStatus::Complete;
    while let Some(u) = queue.pop_front() {
        for k in 0..s.n() {
            let next = nodes[u].mutate(k)?;
            variables.insert(next.vars()[k].clone());
            let key = next.canonical_key();
            let v = match index.get(&key) {
                Some(&v) => v,
                None => {
                    if nodes.len() >= max_nodes {
                        status = GraphStatus::Truncated;
                        continue;
                    }
                    let v = nodes.len();
                    index.insert(key, v);
                    nodes.push(next);
                    queue.push_back(v);
                    v
                }
            };
            edges.push((u, k, v));
        }
    }
    Ok(ExchangeGraph {
        nodes,
        edges,
        status,
        variables,
    })
}

/// The exchange binomial of direction k in formal cluster symbols.
pub fn exchange_binomial(b: &ExchangeMatrix, k: usize) -> LaurentPolynomial {
    let m = b.m();
    let mut plus = vec![0i64; m];
    let mut minus = vec![0i64; m];
    for i in 0..m {
        let x = b.get(i, k);
        if x > 0 {
            plus[i] = x;
        } else {
            minus[i] = -x;
        }
    }
    &LaurentPolynomial::monomial(plus, Rat::one()) + &LaurentPolynomial::monomial(minus, Rat::one())
}

fn integer_content(p: &LaurentPolynomial) -> BigInt {
    let mut g = BigInt::zero();
    for c in p.terms().values() {
        g = g.gcd(c.numer());
    }
    g
}

/// Pairwise coprimality of the exchange binomials over the integers.
pub fn is_coprime(s: &Seed) -> bool {
    let ps: Vec<LaurentPolynomial> = (0..s.n()).map(|k| exchange_binomial(s.matrix(), k)).collect();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if !integer_content(&ps[i]).gcd(&integer_content(&ps[j])).is_one() {
                return false;
            }
            if !poly_gcd(&ps[i], &ps[j]).is_one() {
                return false;
            }
        }
    }
    true
}

/// Initial variables written in the cluster of the seed reached from `s` by `extra` and
/// then its recorded history reversed.
fn initial_in_cluster(matrix: &ExchangeMatrix, path_back: &[usize]) -> Result<Vec<RationalFunction>, SeedError> {
    let formal = Seed::initial(matrix.clone());
    Ok(formal.mutate_path(path_back)?.vars)
}

fn laurent_after(f: &RationalFunction, matrix: &ExchangeMatrix, path_back: &[usize]) -> Result<bool, SeedError> {
    let sigma = initial_in_cluster(matrix, path_back)?;
    Ok(f.substitute(&sigma)?.is_laurent())
}

/// Laurent in the cluster of s and in each of its n neighbours.
pub fn upper_bound_member(f: &RationalFunction, s: &Seed) -> Result<bool, SeedError> {
    let back: Vec<usize> = s.history().iter().rev().copied().collect();
    if !laurent_after(f, s.matrix(), &back)? {
        return Ok(false);
    }
    for k in 0..s.n() {
        let mut path = vec![k];
        path.extend_from_slice(&back);
        if !laurent_after(f, &s.matrix().mutate(k)?, &path)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct StandardMonomialReport {
    pub degree_bound: u32,
    pub monomial_count: usize,
    pub rank: usize,
    pub independent: bool,
    /// Exponents over (x_1, x'_1, ..., x_n, x'_n, x_{n+1}, ..., x_m) of each monomial.
    pub monomials: Vec<Vec<u32>>,
    /// A vanishing linear combination, if any.
    pub dependency: Option<Vec<Rat>>,
}

fn exponent_vectors(len: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_total, &mut cur, &mut out);
    out
}

/// Expand the standard monomials of total degree at most `degree_bound` and test independence.
pub fn standard_monomial_check(s: &Seed, degree_bound: u32) -> Result<StandardMonomialReport, SeedError> {
    let n = s.n();
    let m = s.m();
    let arity = s.vars().first().map(|v| v.arity()).unwrap_or(0);
    let mut gens: Vec<RationalFunction> = Vec::with_capacity(2 * n + m - n);
    for k in 0..n {
        gens.push(s.vars()[k].clone());
        gens.push(s.mutate(k)?.vars()[k].clone());
    }
    for i in n..m {
        gens.push(s.vars()[i].clone());
    }
    let monomials: Vec<Vec<u32>> = exponent_vectors(gens.len(), degree_bound)
        .into_iter()
        .filter(|e| (0..n).all(|k| e[2 * k] == 0 || e[2 * k + 1] == 0))
        .collect();
    let mut expansions = Vec::with_capacity(monomials.len());
    for e in &monomials {
        let mut p = RationalFunction::one(arity);
        for (g, &a) in gens.iter().zip(e) {
            if a > 0 {
                p = p.mul(&g.pow(a as i64)?);
            }
        }
        expansions.push(p);
    }
    // Columns are monomials; rows are basis terms. Clear denominators with a common denominator.
    let mut common = RationalFunction::one(arity);
    for p in &expansions {
        common = common.mul(&RationalFunction::from_laurent(p.denominator()));
    }
    let mut rows: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut cols: Vec<BTreeMap<Vec<i64>, Rat>> = Vec::new();
    for p in &expansions {
        let scaled = p.mul(&common);
        let lp = scaled.to_laurent().expect("cleared denominators");
        for e in lp.terms().keys() {
            let len = rows.len();
            rows.entry(e.clone()).or_insert(len);
        }
        cols.push(lp.terms().clone());
    }
    let mut mat = vec![vec![Rat::zero(); cols.len()]; rows.len()];
    for (j, c) in cols.iter().enumerate() {
        for (e, v) in c {
            mat[rows[e]][j] = v.clone();
        }
    }
    let rank = linalg::rank(&mat);
    let dependency = if rank < monomials.len() {
        linalg::nullspace(&mat, monomials.len()).into_iter().next()
    } else {
        None
    };
    Ok(StandardMonomialReport {
        degree_bound,
        monomial_count: monomials.len(),
        rank,
        independent: rank == monomials.len(),
        monomials,
        dependency,
    })
}
