//! Bipartite power graphs: `a ~ b` iff `a·b + m` is a k-th power of a
//! positive integer.
//!
//! Edges are always enumerated from the power side. For a fixed row `a`,
//! [`right_neighbors`] walks `y` over the k-th roots covering `[a·lo + m,
//! a·hi + m]` and keeps `b = (y^k - m)/a` when the division is exact. For
//! whole boxes of edges (the 3×7 scan), [`upper_edges`] instead factors
//! `y^k - m` and reads the edges off its divisors.

use num_bigint::{BigInt, BigUint};
use num_prime::nt_funcs::{factorize128, factorize64};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::{self, ceil_root_u128, floor_root_u128, ShiftParams};
use crate::bigraph::{find_grid, Biclique, Bigraph, GridConstraints};
use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// `{b in [1, x] : a·b + m is a k-th power}`, ascending.
pub fn right_neighbors(a: u64, params: ShiftParams, x: u64) -> Vec<u64> {
    right_neighbors_in(a, params, 1, x)
}

/// `{b in [lo, hi] : a·b + m is a k-th power}`, ascending.
pub fn right_neighbors_in(a: u64, params: ShiftParams, lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(1);
    if a == 0 || lo > hi {
        return Vec::new();
    }
    let k = params.k();
    let m = params.m();
    let abs_m = u128::from(m.unsigned_abs());
    let a128 = u128::from(a);
    let shift = |product: u128| -> Option<u128> {
        if m >= 0 {
            Some(product.saturating_add(abs_m))
        } else {
            product.checked_sub(abs_m)
        }
    };
    let Some(v_max) = shift(a128 * u128::from(hi)).filter(|&v| v > 0) else {
        return Vec::new();
    };
    let v_min = shift(a128 * u128::from(lo)).unwrap_or(0);
    let y_min = ceil_root_u128(v_min.max(1), k);
    let y_max = floor_root_u128(v_max, k);
    if y_min > y_max {
        return Vec::new();
    }

    let mut out = Vec::new();
    // Every y^k in range is at most v_max; y^k - m then fits in u64 whenever
    // v_max + |m| does.
    if v_max.checked_add(abs_m).is_some_and(|v| v <= u128::from(u64::MAX)) {
        let (y_min, y_max) = (y_min as u64, y_max as u64);
        for y in y_min..=y_max {
            let power = y.pow(k);
            let value = if m >= 0 {
                power - m as u64
            } else {
                power + m.unsigned_abs()
            };
            if value % a == 0 {
                out.push(value / a);
            }
        }
    } else {
        let mut y = y_min;
        while y <= y_max {
            let power = y.pow(k);
            let value = if m >= 0 { power - abs_m } else { power + abs_m };
            if value % a128 == 0 {
                out.push((value / a128) as u64);
            }
            y += 1;
        }
    }
    debug_assert!(out.iter().all(|&b| (lo..=hi).contains(&b)));
    out
}

/// A power graph on a chosen left vertex list, with the right side being
/// every `b <= bound` adjacent to some left vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerGraph {
    params: ShiftParams,
    bound: u64,
    graph: Bigraph,
}

impl PowerGraph {
    pub fn params(&self) -> ShiftParams {
        self.params
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn graph(&self) -> &Bigraph {
        &self.graph
    }

    pub fn left(&self) -> &[u64] {
        self.graph.left()
    }

    pub fn right(&self) -> &[u64] {
        self.graph.right()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Grids with rows from the left side, each re-validated against the
    /// big-integer predicate.
    pub fn find_grid(&self, s: usize, t: usize, constraints: GridConstraints) -> Result<Vec<GridWitness>> {
        let found = find_grid(&self.graph, s, t, constraints)?;
        Ok(found
            .into_iter()
            .map(|b| GridWitness::from_biclique(b, self.params).expect("power graph edge failed re-validation"))
            .collect())
    }
}

/// Builds the power graph over `left` (strictly increasing, positive) with
/// right vertices in `[1, x]`.
pub fn build_graph(left: &[u64], params: ShiftParams, x: u64) -> Result<PowerGraph> {
    for (index, &value) in left.iter().enumerate() {
        if value == 0 || (index > 0 && left[index - 1] >= value) {
            return Err(Error::InvalidVertices { index, value });
        }
    }
    let rows: Vec<Vec<u64>> = left.par_iter().map(|&a| right_neighbors(a, params, x)).collect();
    let mut right: Vec<u64> = rows.iter().flatten().copied().collect();
    right.sort_unstable();
    right.dedup();
    let adj = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|b| right.binary_search(b).expect("neighbour collected") as u32)
                .collect()
        })
        .collect();
    Ok(PowerGraph {
        params,
        bound: x,
        graph: Bigraph::new(left.to_vec(), right, adj)?,
    })
}

/// A `K_{s,t}` of the power graph together with the roots `y` of every
/// `row·col + m = y^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWitness {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    /// `witnesses[i][j]` is the root for `rows[i]·cols[j] + m`.
    pub witnesses: Vec<Vec<BigUint>>,
}

impl GridWitness {
    /// `None` if any product fails the predicate.
    pub fn from_biclique(biclique: Biclique, params: ShiftParams) -> Option<Self> {
        let witnesses = biclique
            .rows
            .iter()
            .map(|&a| {
                biclique
                    .cols
                    .iter()
                    .map(|&b| arith::shifted_power_witness(&BigUint::from(a), &BigUint::from(b), params))
                    .collect::<Option<Vec<_>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            rows: biclique.rows,
            cols: biclique.cols,
            witnesses,
        })
    }

    /// Re-checks `row·col + m = y^k` for every stored `y`.
    pub fn validate(&self, params: ShiftParams) -> bool {
        self.witnesses.len() == self.rows.len()
            && self.rows.iter().zip(&self.witnesses).all(|(&a, ys)| {
                ys.len() == self.cols.len()
                    && self.cols.iter().zip(ys).all(|(&b, y)| {
                        let lhs = BigInt::from(a) * BigInt::from(b) + params.shift();
                        y > &BigUint::from(0u32) && lhs == BigInt::from(num_traits::Pow::pow(y, params.k()))
                    })
            })
    }
}

fn divisors_from(factors: Vec<(u128, usize)>) -> Vec<u128> {
    let mut divisors = vec![1u128];
    for (p, e) in factors {
        let len = divisors.len();
        let mut power = 1u128;
        for _ in 0..e {
            power *= p;
            for i in 0..len {
                divisors.push(divisors[i] * power);
            }
        }
    }
    divisors
}

fn divisors_of(n: u128) -> Vec<u128> {
    let factors: Vec<(u128, usize)> = match n.to_u64() {
        Some(small) => factorize64(small)
            .into_iter()
            .map(|(p, e)| (u128::from(p), e))
            .collect(),
        None => factorize128(n).into_iter().collect(),
    };
    divisors_from(factors)
}

/// Every edge `(a, b)` with `1 <= a <= b`, `min_col <= b <= x`, found by
/// factoring `y^k - m` over all `y` with `y^k - m <= x^2`.
///
/// Only pairs with `a <= b` are produced, so the result is a complete
/// power graph exactly for questions that constrain rows below columns.
pub fn upper_edges(params: ShiftParams, x: u64, min_col: u64) -> Vec<(u64, u64)> {
    let min_col = min_col.max(1);
    if min_col > x {
        return Vec::new();
    }
    let k = params.k();
    let m = params.m();
    let abs_m = u128::from(m.unsigned_abs());
    let x128 = u128::from(x);
    let top = if m >= 0 {
        (x128 * x128).saturating_add(abs_m)
    } else {
        x128 * x128 - abs_m.min(x128 * x128)
    };
    if top == 0 {
        return Vec::new();
    }
    // N = a·b >= min_col, so y^k >= min_col + m.
    let bottom = if m >= 0 {
        u128::from(min_col) + abs_m
    } else {
        u128::from(min_col).saturating_sub(abs_m)
    };
    let y_min = ceil_root_u128(bottom.max(1), k) as u64;
    let y_max = floor_root_u128(top, k) as u64;
    if y_min > y_max {
        return Vec::new();
    }
    let min_col128 = u128::from(min_col);
    (y_min..=y_max)
        .into_par_iter()
        .flat_map_iter(|y| {
            let power = u128::from(y).pow(k);
            let product = if m >= 0 {
                power.checked_sub(abs_m)
            } else {
                power.checked_add(abs_m)
            };
            let mut edges = Vec::new();
            let Some(product) = product.filter(|&n| n >= min_col128) else {
                return edges;
            };
            let a_floor = product.div_ceil(x128);
            let a_ceil = product / min_col128;
            for a in divisors_of(product) {
                if a >= a_floor && a <= a_ceil && a * a <= product {
                    edges.push((a as u64, (product / a) as u64));
                }
            }
            edges
        })
        .collect()
}

/// Outcome of the 3×7 grid scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor22Report {
    pub params: ShiftParams,
    pub bound: u64,
    /// `2|m|^17`, the least admissible first column.
    pub threshold: BigUint,
    /// The threshold exceeds the bound, so no grid can exist.
    pub vacuous: bool,
    pub edges_examined: usize,
    /// Grids found; each is a counterexample and expected never to occur.
    pub grids: Vec<GridWitness>,
}

/// All 3×7 grids `a1 < a2 < a3 <= b1 < ... < b7 <= x` with `b1 >= 2|m|^17`.
pub fn cor22_scan(params: ShiftParams, x: u64) -> Result<Cor22Report> {
    params.require_theorem_range()?;
    let threshold = arith::scaled_power(2, params.m(), 17);
    let mut report = Cor22Report {
        params,
        bound: x,
        threshold: threshold.clone(),
        vacuous: true,
        edges_examined: 0,
        grids: Vec::new(),
    };
    let Some(min_col) = threshold.to_u64().filter(|&t| t <= x) else {
        return Ok(report);
    };
    report.vacuous = false;
    let edges = upper_edges(params, x, min_col);
    report.edges_examined = edges.len();
    let graph = Bigraph::from_edges(edges)?;
    let constraints = GridConstraints {
        min_col: Some(min_col),
        rows_below_cols: true,
    };
    report.grids = find_grid(&graph, 3, 7, constraints)?
        .into_iter()
        .map(|b| GridWitness::from_biclique(b, params).expect("factored edge failed re-validation"))
        .collect();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop21Skip {
    TooFewRows {
        have: usize,
        need: usize,
    },
    TooFewCols {
        have: usize,
        need: usize,
    },
    /// `a_r > b_{|B| - s}` for the governing row index `r`.
    OrderCondition {
        row: u64,
        col: u64,
    },
    NotAPower {
        a: u64,
        b: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prop21Verdict {
    NotApplicable(Prop21Skip),
    Holds { large: usize, limit: u32 },
    Violation { large: usize, limit: u32 },
}

/// Evaluates the hypotheses of the large-element bound on `(A, B)` and, when
/// they hold, counts the elements of `B` that are at least `2|m|^{t_k}`.
///
/// Indices follow `b_1 < ... < b_|B|`. For `k = 3` the bound needs three rows;
/// two rows give `NotApplicable`.
pub fn prop21_check(a: &FiniteSet, b: &FiniteSet, params: ShiftParams) -> Result<Prop21Verdict> {
    params.require_theorem_range()?;
    let k = params.k();
    let limit = arith::sk(k)?;
    let (need_rows, row_index, tail) = if k == 3 { (3, 3, 6) } else { (2, 2, limit as usize) };
    let rows = a.as_slice();
    let cols = b.as_slice();
    if rows.len() < need_rows {
        return Ok(Prop21Verdict::NotApplicable(Prop21Skip::TooFewRows {
            have: rows.len(),
            need: need_rows,
        }));
    }
    if cols.len() < tail + 1 {
        return Ok(Prop21Verdict::NotApplicable(Prop21Skip::TooFewCols {
            have: cols.len(),
            need: tail + 1,
        }));
    }
    let row = rows[row_index - 1];
    let col = cols[cols.len() - tail - 1];
    if row > col {
        return Ok(Prop21Verdict::NotApplicable(Prop21Skip::OrderCondition { row, col }));
    }
    for &x in rows {
        for &y in cols {
            if arith::shifted_witness_u64(x, y, params).is_none() {
                return Ok(Prop21Verdict::NotApplicable(Prop21Skip::NotAPower { a: x, b: y }));
            }
        }
    }
    let t = arith::tk(k)?;
    let shift = params.shift();
    let two = BigUint::from(2u32);
    let large = cols
        .iter()
        .filter(|&&y| arith::ge_threshold(&BigUint::from(y), &shift, &t, &two))
        .count();
    Ok(if large > limit as usize {
        Prop21Verdict::Violation { large, limit }
    } else {
        Prop21Verdict::Holds { large, limit }
    })
}
