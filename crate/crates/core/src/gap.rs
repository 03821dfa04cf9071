//! The 2×2 gap bound `bd >= k^k (ac)^{k-1} / (4^{k-1} |m|^k)` and the scans
//! built on it: falsification over boxes of quadruples, the 2×2 exclusion
//! window `X^{1/3} < a1 < a2 <= X^{1/2} < b1 < b2 <= X`, and counting common
//! neighbours of a fixed pair of rows.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{self, ExactRational, ShiftParams};
use crate::bigraph::{find_grid, intersect_sorted, Bigraph, GridConstraints};
use crate::error::{Error, Result};
use crate::power_graph::{build_graph, right_neighbors, right_neighbors_in};

fn bound_parts(a: &BigUint, c: &BigUint, params: ShiftParams) -> (BigUint, BigUint) {
    let k = params.k();
    let numerator = Pow::pow(BigUint::from(k), k) * Pow::pow(a * c, k - 1);
    let denominator = Pow::pow(BigUint::from(4u32), k - 1) * Pow::pow(BigUint::from(params.abs_m()), k);
    (numerator, denominator)
}

/// `k^k (ac)^{k-1} / (4^{k-1} |m|^k)` in lowest terms.
pub fn gap_lower_bound(a: &BigUint, c: &BigUint, params: ShiftParams) -> ExactRational {
    let (numerator, denominator) = bound_parts(a, c, params);
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GapStatus {
    NotApplicable,
    Holds,
    Violation,
}

/// Result of testing one quadruple. The bound is kept unreduced as
/// `bound_num / bound_den` with `bound_den = 4^{k-1}|m|^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapVerdict {
    pub status: GapStatus,
    pub bound_num: BigUint,
    pub bound_den: BigUint,
    /// `b·d`.
    pub actual: BigUint,
}

impl GapVerdict {
    /// `actual / bound`, for reporting only.
    pub fn ratio(&self) -> f64 {
        let lhs = BigRational::new(
            BigInt::from(&self.actual * &self.bound_den),
            BigInt::from(self.bound_num.clone()),
        );
        lhs.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Evaluates the hypotheses `a < b`, `c < d`, `ac >= 2|m|` and the four
/// power conditions, then compares `bd · 4^{k-1}|m|^k` with `k^k (ac)^{k-1}`.
pub fn check_gap_instance(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
    params: ShiftParams,
) -> Result<GapVerdict> {
    params.require_theorem_range()?;
    let (bound_num, bound_den) = bound_parts(a, c, params);
    let actual = b * d;
    let applicable = a < b
        && c < d
        && a * c >= BigUint::from(2 * u128::from(params.abs_m()))
        && [(a, c), (b, c), (a, d), (b, d)]
            .iter()
            .all(|(x, y)| arith::shifted_power_witness(x, y, params).is_some());
    let status = if !applicable {
        GapStatus::NotApplicable
    } else if &actual * &bound_den < bound_num {
        GapStatus::Violation
    } else {
        GapStatus::Holds
    };
    Ok(GapVerdict {
        status,
        bound_num,
        bound_den,
        actual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapScanReport {
    pub params: ShiftParams,
    pub bound: u64,
    /// Quadruples with all four shifted products k-th powers.
    pub power_quadruples: usize,
    pub applicable: usize,
    /// Smallest `bd / bound` over applicable quadruples, with its witness.
    pub tightest: Option<([u64; 4], f64)>,
    pub violations: Vec<([u64; 4], GapVerdict)>,
}

/// Every `a < b <= bound`, `c < d <= bound` with all four products shifted
/// k-th powers, checked against the gap bound. Quadruples failing the power
/// conditions are `NotApplicable` by definition and are skipped via
/// common-neighbour intersection.
pub fn gap_scan(params: ShiftParams, bound: u64) -> Result<GapScanReport> {
    params.require_theorem_range()?;
    let left: Vec<u64> = (1..=bound).collect();
    let graph = build_graph(&left, params, bound)?;
    let g = graph.graph();
    let rows: Vec<Vec<u64>> = (0..left.len()).map(|i| g.neighbor_values(i).collect()).collect();

    struct Partial {
        power_quadruples: usize,
        applicable: usize,
        tightest: Option<([u64; 4], f64)>,
        violations: Vec<([u64; 4], GapVerdict)>,
    }
    let partials: Vec<Partial> = (0..rows.len())
        .into_par_iter()
        .map(|i| {
            let mut part = Partial {
                power_quadruples: 0,
                applicable: 0,
                tightest: None,
                violations: Vec::new(),
            };
            for j in i + 1..rows.len() {
                let common = intersect_sorted(&rows[i], &rows[j]);
                for (ci, &c) in common.iter().enumerate() {
                    for &d in &common[ci + 1..] {
                        part.power_quadruples += 1;
                        let quad = [left[i], left[j], c, d];
                        let [a, b, c, d] = quad.map(BigUint::from);
                        let verdict = check_gap_instance(&a, &b, &c, &d, params).expect("k checked");
                        match verdict.status {
                            GapStatus::NotApplicable => {}
                            GapStatus::Holds => {
                                part.applicable += 1;
                                let ratio = verdict.ratio();
                                if part.tightest.is_none_or(|(_, r)| ratio < r) {
                                    part.tightest = Some((quad, ratio));
                                }
                            }
                            GapStatus::Violation => {
                                part.applicable += 1;
                                part.violations.push((quad, verdict));
                            }
                        }
                    }
                }
            }
            part
        })
        .collect();

    let mut report = GapScanReport {
        params,
        bound,
        power_quadruples: 0,
        applicable: 0,
        tightest: None,
        violations: Vec::new(),
    };
    for part in partials {
        report.power_quadruples += part.power_quadruples;
        report.applicable += part.applicable;
        report.violations.extend(part.violations);
        if let Some((quad, ratio)) = part.tightest {
            if report.tightest.is_none_or(|(_, r)| ratio < r) {
                report.tightest = Some((quad, ratio));
            }
        }
    }
    Ok(report)
}

/// All `b in [1, x]` with both `a1·b + m` and `a2·b + m` k-th powers,
/// computed by intersecting the two neighbour enumerations.
pub fn common_shift_pairs(a1: u64, a2: u64, params: ShiftParams, x: u64) -> Result<Vec<u64>> {
    if a1 >= a2 {
        return Err(Error::UnorderedPair { a1, a2 });
    }
    if x == 0 {
        return Err(Error::BoundTooSmall { x, min: 1 });
    }
    Ok(intersect_sorted(
        &right_neighbors(a1, params, x),
        &right_neighbors(a2, params, x),
    ))
}

/// Common-neighbour count for one pair of rows against `2 ln ln X`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCountReport {
    pub a1: u64,
    pub a2: u64,
    pub bound: u64,
    pub pairs: Vec<u64>,
    /// `2 ln ln X`.
    pub threshold: f64,
    /// `count > threshold`, without margin.
    pub exceeds_threshold: bool,
    /// `count > threshold + 1`.
    pub flagged: bool,
}

pub const PAIR_GUARD_MARGIN: f64 = 1.0;
pub const PAIR_MIN_BOUND: u64 = 16;

fn pair_report(a1: u64, a2: u64, x: u64, pairs: Vec<u64>) -> PairCountReport {
    let threshold = 2.0 * (x as f64).ln().ln();
    let count = pairs.len() as f64;
    PairCountReport {
        a1,
        a2,
        bound: x,
        exceeds_threshold: count > threshold,
        flagged: count > threshold + PAIR_GUARD_MARGIN,
        threshold,
        pairs,
    }
}

pub fn cor25_audit(a1: u64, a2: u64, params: ShiftParams, x: u64) -> Result<PairCountReport> {
    params.require_theorem_range()?;
    if x < PAIR_MIN_BOUND {
        return Err(Error::BoundTooSmall { x, min: PAIR_MIN_BOUND });
    }
    let pairs = common_shift_pairs(a1, a2, params, x)?;
    Ok(pair_report(a1, a2, x, pairs))
}

/// [`cor25_audit`] for every `1 <= a1 < a2 <= a_max`, in lexicographic order.
pub fn cor25_sweep(a_max: u64, params: ShiftParams, x: u64) -> Result<Vec<PairCountReport>> {
    params.require_theorem_range()?;
    if x < PAIR_MIN_BOUND {
        return Err(Error::BoundTooSmall { x, min: PAIR_MIN_BOUND });
    }
    let rows: Vec<Vec<u64>> = (1..=a_max)
        .into_par_iter()
        .map(|a| right_neighbors(a, params, x))
        .collect();
    let reports = (0..rows.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let rows = &rows;
            (i + 1..rows.len()).map(move |j| {
                let pairs = intersect_sorted(&rows[i], &rows[j]);
                pair_report(i as u64 + 1, j as u64 + 1, x, pairs)
            })
        })
        .collect();
    Ok(reports)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor24Report {
    pub params: ShiftParams,
    pub bound: u64,
    /// Inclusive range of `a` with `X^{1/3} < a <= X^{1/2}`; empty when lo > hi.
    pub a_range: (u64, u64),
    /// Inclusive range of `b` with `X^{1/2} < b <= X`.
    pub b_range: (u64, u64),
    /// `X > 4^{6(k-1)} |m|^{6k}`; otherwise findings are informational.
    pub theorem_applicable: bool,
    /// `(a1, a2, b1, b2)` sorted lexicographically.
    pub quadruples: Vec<[u64; 4]>,
}

/// Every 2×2 grid in the window `X^{1/3} < a1 < a2 <= X^{1/2} < b1 < b2 <= X`.
/// Window edges are decided exactly: `a^3 > X`, `a^2 <= X`, `b^2 > X`.
pub fn cor24_scan(params: ShiftParams, x: u64) -> Result<Cor24Report> {
    params.require_theorem_range()?;
    let a_lo = arith::floor_root_u64(x, 3) + 1;
    let a_hi = arith::floor_root_u64(x, 2);
    let b_lo = a_hi + 1;
    let theorem_applicable = BigUint::from(x) > arith::grid_exclusion_threshold(params);
    let mut report = Cor24Report {
        params,
        bound: x,
        a_range: (a_lo, a_hi),
        b_range: (b_lo, x),
        theorem_applicable,
        quadruples: Vec::new(),
    };
    if a_lo > a_hi || b_lo > x {
        return Ok(report);
    }
    let edges: Vec<(u64, u64)> = (a_lo..=a_hi)
        .into_par_iter()
        .flat_map_iter(|a| right_neighbors_in(a, params, b_lo, x).into_iter().map(move |b| (a, b)))
        .collect();
    let graph = Bigraph::from_edges(edges)?;
    for grid in find_grid(&graph, 2, 2, GridConstraints::default())? {
        for (i, &b1) in grid.cols.iter().enumerate() {
            for &b2 in &grid.cols[i + 1..] {
                report.quadruples.push([grid.rows[0], grid.rows[1], b1, b2]);
            }
        }
    }
    report.quadruples.sort_unstable();
    Ok(report)
}
