//! The A_r x A_s Y-system on the grid quiver, by compound mutation and by direct recurrence.
//!
//! Grid vertices are (i, j) with 1 <= i <= r, 1 <= j <= s.

use std::collections::HashMap;

use crate::algebra::RationalFunction;
use crate::exchange::{ExchangeMatrix, Quiver};
use crate::ydyn::YSeed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(i: usize, j: usize) -> Parity {
        if (i + j) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridQuiver {
    r: usize,
    s: usize,
    matrix: ExchangeMatrix,
}

impl GridQuiver {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn quiver(&self) -> Quiver {
        Quiver::from_matrix(&self.matrix).expect("grid matrix is skew-symmetric")
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        grid_index(self.s, i, j)
    }

    pub fn vertices(&self, parity: Parity) -> Vec<usize> {
        let mut v = Vec::new();
        for i in 1..=self.r {
            for j in 1..=self.s {
                if Parity::of(i, j) == parity {
                    v.push(self.index(i, j));
                }
            }
        }
        v
    }
}

fn grid_index(s: usize, i: usize, j: usize) -> usize {
    (i - 1) * s + (j - 1)
}

/// Horizontal arrows run from odd to even vertices, vertical ones from even to odd.
pub fn build_grid_quiver(r: usize, s: usize) -> GridQuiver {
    assert!(r >= 1 && s >= 1);
    let n = r * s;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 1..=r {
        for j in 1..=s {
            if Parity::of(i, j) == Parity::Even {
                continue;
            }
            let o = grid_index(s, i, j);
            let mut link = |e: usize, w: i64| {
                rows[o][e] = w;
                rows[e][o] = -w;
            };
            if i > 1 {
                link(grid_index(s, i - 1, j), 1);
            }
            if i < r {
                link(grid_index(s, i + 1, j), 1);
            }
            if j > 1 {
                link(grid_index(s, i, j - 1), -1);
            }
            if j < s {
                link(grid_index(s, i, j + 1), -1);
            }
        }
    }
    GridQuiver {
        r,
        s,
        matrix: ExchangeMatrix::square(rows).expect("square"),
    }
}

/// Y-values on the grid together with the current quiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YGrid {
    r: usize,
    s: usize,
    seed: YSeed,
}

impl YGrid {
    /// Independent symbols Y_ij, numbered as the grid vertices.
    pub fn initial(q: &GridQuiver) -> YGrid {
        YGrid {
            r: q.r,
            s: q.s,
            seed: YSeed::initial(q.matrix.clone()),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.seed.ys()[grid_index(self.s, i, j)]
    }

    pub fn values(&self) -> &[RationalFunction] {
        self.seed.ys()
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        self.seed.matrix()
    }

    pub fn seed(&self) -> &YSeed {
        &self.seed
    }
}

/// Mutates at the given vertices in the given order.
pub fn mutate_in_order(g: &YGrid, order: &[usize]) -> YGrid {
    YGrid {
        r: g.r,
        s: g.s,
        seed: g.seed.mutate_path(order).expect("grid vertex"),
    }
}

pub fn compound_mutate(g: &YGrid, parity: Parity) -> YGrid {
    let q = GridQuiver {
        r: g.r,
        s: g.s,
        matrix: g.matrix().clone(),
    };
    mutate_in_order(g, &q.vertices(parity))
}

/// mu_odd after mu_even.
pub fn full_step(g: &YGrid) -> YGrid {
    compound_mutate(&compound_mutate(g, Parity::Even), Parity::Odd)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodReport {
    pub r: usize,
    pub s: usize,
    /// Least N with (mu_odd mu_even)^N = id, if found within the search bound.
    pub period_found: Option<usize>,
    pub expected: usize,
    /// Whether the composite raised to r+s+2 is the identity.
    pub power_is_identity: bool,
    pub matches: bool,
}

pub fn verify_period(r: usize, s: usize) -> PeriodReport {
    let q = build_grid_quiver(r, s);
    let start = YGrid::initial(&q);
    let expected = r + s + 2;
    let mut g = start.clone();
    let mut period_found = None;
    for n in 1..=2 * expected {
        g = full_step(&g);
        if g == start {
            period_found = Some(n);
            break;
        }
    }
    let power_is_identity = period_found.is_some_and(|n| expected % n == 0);
    PeriodReport {
        r,
        s,
        period_found,
        expected,
        power_is_identity,
        matches: period_found == Some(expected),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum YSystemError {
    #[error("Y_({i},{j},{t}) is not defined: i+j+t must be even")]
    Parity { i: usize, j: usize, t: i64 },
    #[error("({i},{j}) is outside the {r}x{s} grid")]
    Range { i: usize, j: usize, r: usize, s: usize },
}

/// Initial window: Y_ij0 for i+j even and Y_ij,-1 for i+j odd.
#[derive(Debug, Clone)]
pub struct YWindow {
    r: usize,
    s: usize,
    values: Vec<RationalFunction>,
    memo: HashMap<(usize, usize, i64), RationalFunction>,
}

impl YWindow {
    pub fn new(r: usize, s: usize, values: Vec<RationalFunction>) -> Self {
        assert_eq!(values.len(), r * s);
        YWindow {
            r,
            s,
            values,
            memo: HashMap::new(),
        }
    }

    /// The window read off a Y-grid seed at time 0; odd vertices hold Y_ij,-1 inverted.
    pub fn from_grid(g: &YGrid) -> Self {
        let mut values = Vec::with_capacity(g.r * g.s);
        for i in 1..=g.r {
            for j in 1..=g.s {
                let y = g.get(i, j).clone();
                values.push(match Parity::of(i, j) {
                    Parity::Even => y,
                    Parity::Odd => y.inv().expect("nonzero"),
                });
            }
        }
        Self::new(g.r, g.s, values)
    }

    /// prod (1 + Y_i'jt) / prod (1 + 1/Y_ij't) over grid neighbours.
    fn rhs(&mut self, i: usize, j: usize, t: i64) -> RationalFunction {
        let arity = self.values[0].arity();
        let one = RationalFunction::one(arity);
        let mut out = one.clone();
        for i2 in [i.wrapping_sub(1), i + 1] {
            if (1..=self.r).contains(&i2) {
                out = out.mul(&one.add(&self.value_unchecked(i2, j, t)));
            }
        }
        for j2 in [j.wrapping_sub(1), j + 1] {
            if (1..=self.s).contains(&j2) {
                let y = self.value_unchecked(i, j2, t);
                let f = one.add(&y.inv().expect("nonzero"));
                out = out.div(&f).expect("1 + 1/Y is nonzero");
            }
        }
        out
    }

    fn value_unchecked(&mut self, i: usize, j: usize, t: i64) -> RationalFunction {
        let base = if (i + j) % 2 == 0 { 0 } else { -1 };
        if t == base {
            return self.values[grid_index(self.s, i, j)].clone();
        }
        if let Some(v) = self.memo.get(&(i, j, t)) {
            return v.clone();
        }
        let v = if t > base {
            // Y_t = rhs(t-1) / Y_(t-2)
            let r = self.rhs(i, j, t - 1);
            r.div(&self.value_unchecked(i, j, t - 2)).expect("nonzero")
        } else {
            let r = self.rhs(i, j, t + 1);
            r.div(&self.value_unchecked(i, j, t + 2)).expect("nonzero")
        };
        self.memo.insert((i, j, t), v.clone());
        v
    }

    pub fn value(&mut self, i: usize, j: usize, t: i64) -> Result<RationalFunction, YSystemError> {
        if !(1..=self.r).contains(&i) || !(1..=self.s).contains(&j) {
            return Err(YSystemError::Range { i, j, r: self.r, s: self.s });
        }
        if (i as i64 + j as i64 + t).rem_euclid(2) != 0 {
            return Err(YSystemError::Parity { i, j, t });
        }
        Ok(self.value_unchecked(i, j, t))
    }
}

/// Y_ijt by the recurrence from the window.
pub fn ysystem_value(i: usize, j: usize, t: i64, window: &mut YWindow) -> Result<RationalFunction, YSystemError> {
    window.value(i, j, t)
}
