//! The pentagram map on exact rational polygons, its y-parameters and Y-pattern,
//! and the conserved quantities coming from perfect matchings on a torus graph.
//!
//! Labels run over 1..2n and alternate between vertices and sides. A polygon built by
//! [`Polygon::new`] has its vertices on the even labels: vertex m (0-based) carries label
//! 2m+2 and side 2m+1 joins vertices 2m and 2m+2. Each application of the map moves the
//! labels of the vertices up by one, so T(A) has its vertices on the odd labels. With this
//! offset one pentagram step acts on y-parameters by mu_even on Q_n, and the next one by mu_odd.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::algebra::{rat, rf_substitute_parts, LaurentPolynomial, Rat, RationalFunction};
use crate::exchange::{ExchangeMatrix, Quiver};
use crate::linalg::{rank, Matrix};
use crate::ydyn::YSeed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PentagramError {
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("a polygon needs at least 5 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
}

fn degenerate(what: &str) -> PentagramError {
    PentagramError::Degenerate(what.to_string())
}

fn cross(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Rat; 3], b: &[Rat; 3]) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn is_null(a: &[Rat; 3]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Homogeneous coordinates; equal when proportional.
#[derive(Debug, Clone)]
pub struct ProjectivePoint(pub [Rat; 3]);

/// Line {p : l . p = 0}.
#[derive(Debug, Clone)]
pub struct ProjectiveLine(pub [Rat; 3]);

impl ProjectivePoint {
    pub fn new(c: [Rat; 3]) -> Result<Self, PentagramError> {
        if is_null(&c) {
            return Err(degenerate("zero point"));
        }
        Ok(ProjectivePoint(c))
    }

    pub fn affine(x: Rat, y: Rat) -> Self {
        ProjectivePoint([x, y, Rat::one()])
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::affine(rat(x), rat(y))
    }

    /// Affine coordinates when the point is finite.
    pub fn to_affine(&self) -> Option<(Rat, Rat)> {
        if self.0[2].is_zero() {
            return None;
        }
        Some((&self.0[0] / &self.0[2], &self.0[1] / &self.0[2]))
    }

    pub fn transform(&self, h: &[[Rat; 3]; 3]) -> Self {
        let c = std::array::from_fn(|i| dot(&h[i], &self.0));
        ProjectivePoint(c)
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, o: &Self) -> bool {
        is_null(&cross(&self.0, &o.0))
    }
}

impl ProjectiveLine {
    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        dot(&self.0, &p.0).is_zero()
    }
}

impl PartialEq for ProjectiveLine {
    fn eq(&self, o: &Self) -> bool {
        is_null(&cross(&self.0, &o.0))
    }
}

pub fn join(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectiveLine, PentagramError> {
    let l = cross(&p.0, &q.0);
    if is_null(&l) {
        return Err(degenerate("joining a point to itself"));
    }
    Ok(ProjectiveLine(l))
}

pub fn meet(l: &ProjectiveLine, m: &ProjectiveLine) -> Result<ProjectivePoint, PentagramError> {
    let p = cross(&l.0, &m.0);
    if is_null(&p) {
        return Err(degenerate("meeting a line with itself"));
    }
    Ok(ProjectivePoint(p))
}

/// (x1-x2)(x3-x4) / ((x1-x3)(x2-x4)).
pub fn cross_ratio(x1: &Rat, x2: &Rat, x3: &Rat, x4: &Rat) -> Result<Rat, PentagramError> {
    let den = (x1 - x3) * (x2 - x4);
    if den.is_zero() {
        return Err(degenerate("cross ratio denominator vanishes"));
    }
    Ok((x1 - x2) * (x3 - x4) / den)
}

// Four vectors spanning a 2-plane of Q^3. The bracket [u,w] = (u x w) . c is, up to one
// common factor, the determinant of the affine parameters of u and w along the pencil.
fn pencil_cross_ratio(v: [&[Rat; 3]; 4]) -> Result<Rat, PentagramError> {
    let mut carrier = None;
    'outer: for i in 0..4 {
        for j in i + 1..4 {
            let c = cross(v[i], v[j]);
            if !is_null(&c) {
                carrier = Some(c);
                break 'outer;
            }
        }
    }
    let c = carrier.ok_or_else(|| degenerate("all four elements coincide"))?;
    if v.iter().any(|u| !dot(&c, u).is_zero()) {
        return Err(degenerate("not in one pencil"));
    }
    let br = |a: usize, b: usize| dot(&cross(v[a], v[b]), &c);
    let den = br(0, 2) * br(1, 3);
    if den.is_zero() {
        return Err(degenerate("cross ratio denominator vanishes"));
    }
    Ok(br(0, 1) * br(2, 3) / den)
}

/// Cross ratio of four collinear points.
pub fn cross_ratio_points(p: [&ProjectivePoint; 4]) -> Result<Rat, PentagramError> {
    pencil_cross_ratio([&p[0].0, &p[1].0, &p[2].0, &p[3].0])
}

/// Cross ratio of four concurrent lines.
pub fn cross_ratio_lines(l: [&ProjectiveLine; 4]) -> Result<Rat, PentagramError> {
    pencil_cross_ratio([&l[0].0, &l[1].0, &l[2].0, &l[3].0])
}

fn label_mod(l: i64, n2: usize) -> usize {
    (l - 1).rem_euclid(n2 as i64) as usize + 1
}

/// A closed polygon whose vertex m carries label `first_label + 2m` (mod 2n).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<ProjectivePoint>,
    first_label: usize,
}

impl Polygon {
    /// Vertices on the even labels 2, 4, ..., 2n.
    pub fn new(vertices: Vec<ProjectivePoint>) -> Result<Self, PentagramError> {
        Self::with_first_label(vertices, 2)
    }

    pub fn with_first_label(vertices: Vec<ProjectivePoint>, first_label: usize) -> Result<Self, PentagramError> {
        let n = vertices.len();
        if n < 5 {
            return Err(PentagramError::TooFewVertices(n));
        }
        for m in 0..n {
            let l = join(&vertices[m], &vertices[(m + 1) % n])?;
            if l.contains(&vertices[(m + 2) % n]) {
                return Err(degenerate("three consecutive vertices are collinear"));
            }
        }
        Ok(Polygon {
            first_label: label_mod(first_label as i64, 2 * n),
            vertices,
        })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<Self, PentagramError> {
        Self::new(pts.iter().map(|&(x, y)| ProjectivePoint::from_ints(x, y)).collect())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[ProjectivePoint] {
        &self.vertices
    }

    pub fn first_label(&self) -> usize {
        self.first_label
    }

    pub fn is_vertex_label(&self, l: i64) -> bool {
        (l - self.first_label as i64).rem_euclid(2) == 0
    }

    /// The vertex carrying label l.
    pub fn vertex(&self, l: i64) -> &ProjectivePoint {
        debug_assert!(self.is_vertex_label(l));
        let m = (l - self.first_label as i64).rem_euclid(2 * self.n() as i64) / 2;
        &self.vertices[m as usize]
    }

    /// The side carrying label l, through vertices l-1 and l+1.
    pub fn side(&self, l: i64) -> Result<ProjectiveLine, PentagramError> {
        join(self.vertex(l - 1), self.vertex(l + 1))
    }

    pub fn transform(&self, h: &[[Rat; 3]; 3]) -> Result<Self, PentagramError> {
        Self::with_first_label(self.vertices.iter().map(|p| p.transform(h)).collect(), self.first_label)
    }
}

/// Vertex i of T(A) is (v_{i-1} v_{i+1}) meet (v_i v_{i+2}); its label is one more than that of v_i.
pub fn pentagram_step(a: &Polygon) -> Result<Polygon, PentagramError> {
    let n = a.n();
    let v = &a.vertices;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d1 = join(&v[(i + n - 1) % n], &v[(i + 1) % n])?;
        let d2 = join(&v[i], &v[(i + 2) % n])?;
        out.push(meet(&d1, &d2)?);
    }
    Polygon::with_first_label(out, a.first_label + 1)
}

/// y_1..y_2n (index l-1 holds label l).
pub fn y_params(a: &Polygon) -> Result<Vec<Rat>, PentagramError> {
    let n2 = 2 * a.n();
    let mut y = Vec::with_capacity(n2);
    for l in 1..=n2 as i64 {
        let v = if a.is_vertex_label(l) {
            let p = a.vertex(l);
            let l1 = join(p, a.vertex(l - 4))?;
            let l2 = a.side(l - 1)?;
            let l3 = a.side(l + 1)?;
            let l4 = join(p, a.vertex(l + 4))?;
            let chi = cross_ratio_lines([&l1, &l2, &l3, &l4])?;
            if chi.is_zero() {
                return Err(degenerate("vanishing cross ratio at a vertex"));
            }
            -chi.recip()
        } else {
            let s = a.side(l)?;
            let p1 = meet(&s, &a.side(l - 4)?)?;
            let p4 = meet(&s, &a.side(l + 4)?)?;
            -cross_ratio_points([&p1, a.vertex(l - 1), a.vertex(l + 1), &p4])?
        };
        y.push(v);
    }
    Ok(y)
}

fn label_index(l: i64, n2: usize) -> usize {
    label_mod(l, n2) - 1
}

/// Q_n as an exchange matrix on labels 1..2n (row l-1): for odd j, j -> j+-1 and j+-3 -> j.
pub fn qn_matrix(n: usize) -> ExchangeMatrix {
    assert!(n >= 4, "Q_n needs n >= 4");
    let n2 = 2 * n;
    let mut b = vec![vec![0i64; n2]; n2];
    for j in (1..=n2 as i64).step_by(2) {
        let jj = label_index(j, n2);
        for d in [-1, 1] {
            let k = label_index(j + d, n2);
            b[jj][k] += 1;
            b[k][jj] -= 1;
            let k = label_index(j + 3 * d, n2);
            b[k][jj] += 1;
            b[jj][k] -= 1;
        }
    }
    ExchangeMatrix::square(b).expect("square")
}

pub fn qn_quiver(n: usize) -> Quiver {
    Quiver::from_matrix(&qn_matrix(n)).expect("skew-symmetric")
}

/// Indices of the labels with the given parity (0 for even labels).
pub fn label_class(n: usize, parity: usize) -> Vec<usize> {
    (1..=2 * n).filter(|l| l % 2 == parity).map(|l| l - 1).collect()
}

/// k compound mutations on (y, Q_n), alternating mu_even, mu_odd, mu_even, ...
pub fn pentagram_y_step(ys: &[RationalFunction], k: usize) -> Result<YSeed, PentagramError> {
    if ys.len() % 2 != 0 || ys.len() < 8 {
        return Err(PentagramError::Length { expected: 8, got: ys.len() });
    }
    let n = ys.len() / 2;
    let mut seed = YSeed::new(ys.to_vec(), qn_matrix(n));
    for step in 0..k {
        seed = seed.mutate_path(&label_class(n, step % 2)).expect("label in range");
    }
    Ok(seed)
}

/// [`pentagram_y_step`] on numbers.
pub fn pentagram_y_step_values(ys: &[Rat], k: usize) -> Result<Vec<Rat>, PentagramError> {
    let consts: Vec<RationalFunction> = ys.iter().map(|y| RationalFunction::constant(0, y.clone())).collect();
    let seed = pentagram_y_step(&consts, k)?;
    seed.ys()
        .iter()
        .map(|f| f.eval(&[]).ok_or_else(|| degenerate("y-parameter passes through -1")))
        .collect()
}

/// One step of the map on y-parameters, written out directly. `side_parity` is the parity of
/// the labels that are sides of T(A), i.e. 0 when A has its vertices on even labels.
pub fn y_step_formula(ys: &[RationalFunction], side_parity: usize) -> Result<Vec<RationalFunction>, PentagramError> {
    let n2 = ys.len();
    let one = RationalFunction::one(ys.first().map_or(0, RationalFunction::arity));
    let y = |l: i64| &ys[label_index(l, n2)];
    let fail = |_| degenerate("division by zero in the y-step");
    let mut out = Vec::with_capacity(n2);
    for l in 1..=n2 as i64 {
        if (l as usize) % 2 == side_parity {
            out.push(y(l).inv().map_err(fail)?);
            continue;
        }
        let num = y(l).mul(&one.add(y(l - 1))).mul(&one.add(y(l + 1)));
        let d1 = one.add(&y(l - 3).inv().map_err(fail)?);
        let d2 = one.add(&y(l + 3).inv().map_err(fail)?);
        out.push(num.div(&d1.mul(&d2)).map_err(fail)?);
    }
    Ok(out)
}

/// Random polygon with small integer vertices on which T, T^2, ..., T^depth and all their
/// y-parameters are defined, nonzero and different from -1.
pub fn random_polygon<R: Rng>(n: usize, depth: usize, rng: &mut R) -> Polygon {
    loop {
        let pts: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(-12..=12), rng.gen_range(-12..=12))).collect();
        let Ok(mut a) = Polygon::from_ints(&pts) else { continue };
        let mut ok = true;
        for step in 0..=depth {
            match y_params(&a) {
                Ok(y) if y.iter().all(|v| !v.is_zero() && *v != rat(-1)) => {}
                _ => {
                    ok = false;
                    break;
                }
            }
            if step < depth {
                match pentagram_step(&a) {
                    Ok(b) => a = b,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if ok {
            return Polygon::from_ints(&pts).expect("checked above");
        }
    }
}

/// Random invertible integer 3x3 matrix.
pub fn random_projectivity<R: Rng>(rng: &mut R) -> [[Rat; 3]; 3] {
    loop {
        let h: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-5..=5)));
        let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
            + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
        if det != 0 {
            return h.map(|r| r.map(rat));
        }
    }
}

// ---------------------------------------------------------------------------
// Torus graph and matchings

/// G_n: vertices 1..2n, edges i ~ i+-1 (horizontal) and i ~ i+-3 (vertical).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusMatchingGraph {
    n: usize,
}

pub type Edge = (usize, usize);

impl TorusMatchingGraph {
    pub fn new(n: usize) -> Self {
        assert!(n >= 4, "the torus graph needs n >= 4");
        TorusMatchingGraph { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn m(&self, l: i64) -> usize {
        label_mod(l, 2 * self.n)
    }

    fn diff(&self, from: usize, to: usize) -> i64 {
        let n2 = 2 * self.n as i64;
        let d = (to as i64 - from as i64).rem_euclid(n2);
        if d > self.n as i64 {
            d - n2
        } else {
            d
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut e = Vec::new();
        for i in 1..=2 * self.n as i64 {
            for d in [1, 3] {
                let j = self.m(i + d);
                e.push((self.m(i).min(j), self.m(i).max(j)));
            }
        }
        e.sort();
        e
    }

    pub fn neighbours(&self, i: usize) -> [usize; 4] {
        let i = i as i64;
        [self.m(i - 3), self.m(i - 1), self.m(i + 1), self.m(i + 3)]
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        matches!(self.diff(u, v).abs(), 1 | 3)
    }

    pub fn is_vertical(&self, u: usize, v: usize) -> bool {
        self.diff(u, v).abs() == 3
    }

    /// 1 on horizontal edges, (-1)^i x_i on the vertical edge {i-2, i+1}.
    pub fn edge_weight(&self, u: usize, v: usize) -> LaurentPolynomial {
        let arity = 2 * self.n;
        if !self.is_vertical(u, v) {
            return LaurentPolynomial::one(arity);
        }
        let low = if self.diff(u, v) == 3 { u } else { v };
        let i = self.m(low as i64 + 2);
        let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
        LaurentPolynomial::var(arity, i - 1).scale(&sign)
    }

    /// Displacement of the edge walked from its odd end to its even end, in the planar lift
    /// where label c + 3b sits at (c, b).
    fn displacement(&self, u: usize, v: usize) -> (i64, i64) {
        let (o, e) = if u % 2 == 1 { (u, v) } else { (v, u) };
        match self.diff(o, e) {
            1 => (1, 0),
            -1 => (-1, 0),
            3 => (0, 1),
            -3 => (0, -1),
            _ => panic!("not an edge"),
        }
    }

    pub fn reference_matching(&self) -> Vec<Edge> {
        (1..=self.n).map(|k| (2 * k - 1, 2 * k)).collect()
    }

    /// Winding of M - M0 in the basis (2n, 0), (-3, 1) of the period lattice.
    pub fn homology_class(&self, edges: &[Edge]) -> (i64, i64) {
        let mut dc = 0;
        let mut db = 0;
        for &(u, v) in edges {
            let (c, b) = self.displacement(u, v);
            dc += c;
            db += b;
        }
        for (u, v) in self.reference_matching() {
            let (c, b) = self.displacement(u, v);
            dc -= c;
            db -= b;
        }
        let n2 = 2 * self.n as i64;
        debug_assert_eq!((dc + 3 * db).rem_euclid(n2), 0);
        ((dc + 3 * db) / n2, db)
    }

    pub fn weight(&self, edges: &[Edge]) -> LaurentPolynomial {
        let mut w = LaurentPolynomial::one(2 * self.n);
        for &(u, v) in edges {
            w = &w * &self.edge_weight(u, v);
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<Edge>,
    pub class: (i64, i64),
}

impl Matching {
    pub fn is_perfect(&self, g: &TorusMatchingGraph) -> bool {
        let mut seen = vec![0; 2 * g.n()];
        for &(u, v) in &self.edges {
            if !g.is_edge(u, v) {
                return false;
            }
            seen[u - 1] += 1;
            seen[v - 1] += 1;
        }
        seen.iter().all(|&c| c == 1)
    }
}

pub fn enumerate_matchings(g: &TorusMatchingGraph) -> Vec<Matching> {
    fn go(g: &TorusMatchingGraph, used: &mut Vec<bool>, cur: &mut Vec<Edge>, out: &mut Vec<Matching>) {
        let Some(i) = used.iter().position(|u| !u) else {
            let mut edges = cur.clone();
            edges.sort();
            let class = g.homology_class(&edges);
            out.push(Matching { edges, class });
            return;
        };
        let v = i + 1;
        let mut nb = g.neighbours(v).to_vec();
        nb.sort();
        nb.dedup();
        for w in nb {
            if used[w - 1] {
                continue;
            }
            used[i] = true;
            used[w - 1] = true;
            cur.push((v.min(w), v.max(w)));
            go(g, used, cur, out);
            cur.pop();
            used[i] = false;
            used[w - 1] = false;
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![false; 2 * g.n()], &mut Vec::new(), &mut out);
    out.sort_by(|a, b| (a.class, &a.edges).cmp(&(b.class, &b.edges)));
    out
}

/// Sign-normalized so the lexicographically largest exponent vector has a positive coefficient.
pub fn normalize_sign(p: &LaurentPolynomial) -> LaurentPolynomial {
    match p.terms().iter().next_back() {
        Some((_, c)) if c.is_negative() => -p,
        _ => p.clone(),
    }
}

/// Class sums of matching weights.
pub fn conserved_quantities(n: usize) -> BTreeMap<(i64, i64), LaurentPolynomial> {
    let g = TorusMatchingGraph::new(n);
    let mut sums: BTreeMap<(i64, i64), LaurentPolynomial> = BTreeMap::new();
    for m in enumerate_matchings(&g) {
        let w = g.weight(&m.edges);
        let e = sums.entry(m.class).or_insert_with(|| LaurentPolynomial::zero(2 * n));
        *e = &*e + &w;
    }
    sums.into_iter().map(|(k, v)| (k, normalize_sign(&v))).collect()
}

// ---------------------------------------------------------------------------
// y-parameters of corner invariants and the bracket

/// Exponent s in y_l = -(x_l x_{l+1})^s: -1 on vertex labels, 1 on side labels.
fn y_orientation(l: usize, vertex_parity: usize) -> i64 {
    if l % 2 == vertex_parity {
        -1
    } else {
        1
    }
}

/// Rewrites c x^a as a y-monomial for a polygon with its vertices on labels of parity
/// `vertex_parity`; possible exactly when a has vanishing alternating sum. Among the
/// representatives differing by powers of prod y_i the one of least total degree is chosen.
pub fn x_monomial_in_y(a: &[i64], c: &Rat, vertex_parity: usize) -> Option<(Vec<i64>, Rat)> {
    let n2 = a.len();
    let alt: i64 = a.iter().enumerate().map(|(j, &e)| if j % 2 == 0 { -e } else { e }).sum();
    if alt != 0 {
        return None;
    }
    // u_l = s_l c_l, a_l = u_{l-1} + u_l
    let solve = |t: i64| {
        let mut u = vec![0i64; n2];
        let mut prev = t;
        for l in 0..n2 {
            u[l] = a[l] - prev;
            prev = u[l];
        }
        u
    };
    let bound = a.iter().map(|e| e.abs()).sum::<i64>() + 1;
    let best = (-bound..=bound).min_by_key(|&t| solve(t).iter().map(|x| x.abs()).sum::<i64>())?;
    let u = solve(best);
    let exps: Vec<i64> = u.iter().enumerate().map(|(l, &x)| x * y_orientation(l + 1, vertex_parity)).collect();
    let total: i64 = exps.iter().sum();
    let sign = if total.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    Some((exps, c * sign))
}

/// The polynomial in x as a Laurent polynomial in y, if every monomial rewrites.
pub fn x_polynomial_in_y(p: &LaurentPolynomial, vertex_parity: usize) -> Option<LaurentPolynomial> {
    let mut terms = Vec::new();
    for (a, c) in p.terms() {
        terms.push(x_monomial_in_y(a, c, vertex_parity)?);
    }
    Some(LaurentPolynomial::from_terms(p.arity(), terms))
}

/// {f, g} = sum b_ab y_a y_b df/dy_a dg/dy_b.
pub fn log_canonical_bracket(b: &ExchangeMatrix, f: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    let n = b.n();
    let ya = |a: usize| RationalFunction::var(n, a);
    let df: Vec<RationalFunction> = (0..n).map(|a| ya(a).mul(&f.derivative(a))).collect();
    let dg: Vec<RationalFunction> = (0..n).map(|a| ya(a).mul(&g.derivative(a))).collect();
    let mut out = RationalFunction::zero(n);
    for a in 0..n {
        if df[a].is_zero() {
            continue;
        }
        let mut inner = RationalFunction::zero(n);
        for (bb, dgb) in dg.iter().enumerate() {
            let c = b.get(a, bb);
            if c != 0 && !dgb.is_zero() {
                inner = inner.add(&dgb.scale(&rat(c)));
            }
        }
        out = out.add(&df[a].mul(&inner));
    }
    out
}

// y_a d(N/D)/dy_a times D^2
fn scaled_log_derivatives(f: &RationalFunction) -> Vec<LaurentPolynomial> {
    let (num, den) = (f.numerator(), f.denominator());
    (0..f.arity())
        .map(|a| {
            let d = &(&num.derivative(a) * den) - &(num * &den.derivative(a));
            &d * &LaurentPolynomial::var(f.arity(), a)
        })
        .collect()
}

/// Whether {f, g} = c f g, by clearing the denominators D_f^2 D_g^2 on both sides.
pub fn bracket_identity_holds(b: &ExchangeMatrix, f: &RationalFunction, g: &RationalFunction, c: i64) -> bool {
    let n = b.n();
    let fa = scaled_log_derivatives(f);
    let gb = scaled_log_derivatives(g);
    let mut lhs = LaurentPolynomial::zero(n);
    for a in 0..n {
        if fa[a].is_zero() {
            continue;
        }
        for bb in 0..n {
            let k = b.get(a, bb);
            if k != 0 && !gb[bb].is_zero() {
                lhs = &lhs + &(&fa[a] * &gb[bb]).scale(&rat(k));
            }
        }
    }
    let rhs = &(&(f.numerator() * f.denominator()) * &(g.numerator() * g.denominator())).scale(&rat(c));
    lhs == *rhs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketReport {
    pub n: usize,
    pub steps: usize,
    pub pairs_checked: usize,
    /// Pairs (i, j), 1-based labels, with {T*y_i, T*y_j} != b_ij T*y_i T*y_j.
    pub failures: Vec<(usize, usize)>,
    /// Failing pairs for which {T*y_i, T*y_j} = -b_ij T*y_i T*y_j instead.
    pub reversed: Vec<(usize, usize)>,
}

impl BracketReport {
    pub fn all_equal(&self) -> bool {
        self.failures.is_empty()
    }

    /// Every pair obeys the identity with B replaced by -B.
    pub fn anti_poisson(&self) -> bool {
        let nonzero = qn_matrix(self.n);
        let expected: Vec<(usize, usize)> = (0..2 * self.n)
            .flat_map(|i| (i + 1..2 * self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| nonzero.get(i, j) != 0)
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        self.failures == self.reversed && self.reversed == expected
    }
}

/// y-parameters after `steps` applications of the map, as functions of the initial ones.
pub fn symbolic_orbit(n: usize, steps: usize) -> Vec<RationalFunction> {
    let n2 = 2 * n;
    let mut ys: Vec<RationalFunction> = (0..n2).map(|i| RationalFunction::var(n2, i)).collect();
    for k in 0..steps {
        ys = y_step_formula(&ys, k % 2).expect("generic symbols");
    }
    ys
}

/// Compares {T^k*y_i, T^k*y_j} with {y_i, y_j} o T^k = b_ij T^k*y_i T^k*y_j for all i < j.
pub fn bracket_invariance_check_steps(n: usize, steps: usize) -> BracketReport {
    let b = qn_matrix(n);
    let ty = symbolic_orbit(n, steps);
    let mut failures = Vec::new();
    let mut reversed = Vec::new();
    let mut pairs = 0;
    for i in 0..2 * n {
        for j in i + 1..2 * n {
            pairs += 1;
            let c = b.get(i, j);
            if !bracket_identity_holds(&b, &ty[i], &ty[j], c) {
                failures.push((i + 1, j + 1));
                if bracket_identity_holds(&b, &ty[i], &ty[j], -c) {
                    reversed.push((i + 1, j + 1));
                }
            }
        }
    }
    BracketReport { n, steps, pairs_checked: pairs, failures, reversed }
}

/// One step of the map, with T*y_i computed from the y-step formula.
pub fn bracket_invariance_check(n: usize) -> BracketReport {
    bracket_invariance_check_steps(n, 1)
}

/// A product of two class sums that is a function of the y-parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YInvariant {
    pub classes: ((i64, i64), (i64, i64)),
    pub in_x: LaurentPolynomial,
    /// Written in the y-parameters of A (vertices on even labels).
    pub in_y: LaurentPolynomial,
    /// Written in the y-parameters of T(A) (vertices on odd labels).
    pub in_y_next: LaurentPolynomial,
    /// in_y(y) = in_y_next(T*y) once prod y_i = 1 is imposed.
    pub invariant: bool,
    /// Bracket with every y_i vanishes.
    pub casimir: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub n: usize,
    pub classes: usize,
    pub nonconstant: usize,
    pub jacobian_rank: usize,
    pub casimirs: usize,
    /// Nonconstant class sums that are not Casimirs.
    pub integrals: usize,
    pub dimension: usize,
    pub y_invariants: Vec<YInvariant>,
}

impl IntegrabilityReport {
    pub fn dimension_count_holds(&self) -> bool {
        self.casimirs + 2 * self.integrals == self.dimension
    }
}

// y_{2n} = 1 / (y_1 ... y_{2n-1}), a ring map on Laurent polynomials
fn impose_product_relation(p: &LaurentPolynomial) -> LaurentPolynomial {
    let n2 = p.arity();
    LaurentPolynomial::from_terms(
        n2,
        p.terms().iter().map(|(e, c)| {
            let last = e[n2 - 1];
            let mut f: Vec<i64> = e.iter().map(|x| x - last).collect();
            f[n2 - 1] = 0;
            (f, c.clone())
        }),
    )
}

/// Whether f(y) = g(T*y) on the locus prod y_i = 1.
pub fn invariant_under_step(f: &LaurentPolynomial, g: &LaurentPolynomial) -> bool {
    let n2 = f.arity();
    let ty = symbolic_orbit(n2 / 2, 1);
    let (top, bottom) = rf_substitute_parts(&RationalFunction::from_laurent(g), &ty).expect("generic substitution");
    let fr = RationalFunction::from_laurent(f);
    let lhs = &impose_product_relation(&top) * &impose_product_relation(fr.denominator());
    let rhs = &impose_product_relation(&bottom) * &impose_product_relation(fr.numerator());
    lhs == rhs
}

/// Independence of the class sums, the dimension count, and the products of class sums that
/// are functions of the y-parameters.
pub fn integrability_report(n: usize) -> IntegrabilityReport {
    let q = conserved_quantities(n);
    let n2 = 2 * n;
    let nonconst: Vec<(&(i64, i64), &LaurentPolynomial)> = q.iter().filter(|(_, p)| !p.is_constant()).collect();
    // a fixed generic point
    let point: Vec<Rat> = (0..n2).map(|i| Rat::new((3 * i as i64 + 2).into(), (i as i64 + 5).into())).collect();
    let jac: Matrix = nonconst
        .iter()
        .map(|(_, p)| (0..n2).map(|v| p.derivative(v).eval(&point).expect("polynomial")).collect())
        .collect();
    let jacobian_rank = rank(&jac);
    let b = qn_matrix(n);
    let ys: Vec<RationalFunction> = (0..n2).map(|i| RationalFunction::var(n2, i)).collect();
    let mut y_invariants = Vec::new();
    for (i, (ca, pa)) in nonconst.iter().enumerate() {
        for (cb, pb) in &nonconst[i + 1..] {
            let prod = *pa * *pb;
            let (Some(in_y), Some(in_y_next)) = (x_polynomial_in_y(&prod, 0), x_polynomial_in_y(&prod, 1)) else {
                continue;
            };
            let invariant = invariant_under_step(&in_y, &in_y_next);
            let f = RationalFunction::from_laurent(&in_y);
            let casimir = ys.iter().all(|y| log_canonical_bracket(&b, y, &f).is_zero());
            y_invariants.push(YInvariant { classes: (**ca, **cb), in_x: prod, in_y, in_y_next, invariant, casimir });
        }
    }
    // both factors of a Casimir product are Casimirs
    let casimirs = y_invariants.iter().filter(|y| y.casimir).count() * 2;
    IntegrabilityReport {
        n,
        classes: q.len(),
        nonconstant: nonconst.len(),
        jacobian_rank,
        casimirs,
        integrals: nonconst.len() - casimirs,
        dimension: n2,
        y_invariants,
    }
}
