//! Zarankiewicz-type edge bounds and the nine-term counting inequality.

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;

use crate::arith::{self, power_witness_u128};
use crate::bigraph::{find_grid, Bigraph, GridConstraints};
use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// Largest left side accepted by the brute-force freeness check.
pub const KST_FREE_LEFT_LIMIT: usize = 1000;

/// Nudges a non-negative float a few ulps upward so it bounds the real value.
fn round_up(value: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        (value * (1.0 + 8.0 * f64::EPSILON)).next_up()
    }
}

/// `(s-1)^{1/t} (nv-t+1) m^{1-1/t} + (t-1) m` for a `K_{s,t}`-free graph
/// with `|U| = m`, `|V| = nv`, where the forbidden `s`-set lies in `U`.
#[derive(Clone, Debug, PartialEq)]
pub struct KstBound {
    pub m: u64,
    pub nv: u64,
    pub s: u64,
    pub t: u64,
    /// Upward-rounded floating value.
    pub float_value: f64,
    /// `t > nv`: the first term is dropped (no `t`-subset of `V` exists).
    pub degenerate: bool,
}

impl KstBound {
    /// Exact test of `edges <= bound`:
    /// `E <= (t-1)m` or `(E - (t-1)m)^t <= (s-1)(nv-t+1)^t m^{t-1}`.
    pub fn admits(&self, edges: u64) -> bool {
        let linear = u128::from(self.t - 1) * u128::from(self.m);
        if u128::from(edges) <= linear {
            return true;
        }
        if self.degenerate {
            return false;
        }
        let t = self.t as u32;
        let excess = BigUint::from(u128::from(edges) - linear);
        let lhs = Pow::pow(excess, t);
        let rhs = BigUint::from(self.s - 1)
            * Pow::pow(BigUint::from(self.nv - self.t + 1), t)
            * Pow::pow(BigUint::from(self.m), t - 1);
        lhs <= rhs
    }
}

pub fn kst_edge_bound(m: u64, nv: u64, s: u64, t: u64) -> Result<KstBound> {
    if s == 0 || t == 0 {
        return Err(Error::BadGridShape {
            s: s as usize,
            t: t as usize,
        });
    }
    if t > u64::from(u32::MAX) {
        return Err(Error::Overflow("t exceeds u32"));
    }
    let degenerate = t > nv;
    let width = if degenerate { 0.0 } else { (nv - t + 1) as f64 };
    let tf = t as f64;
    let first = ((s - 1) as f64).powf(1.0 / tf) * width * (m as f64).powf(1.0 - 1.0 / tf);
    let second = (t - 1) as f64 * m as f64;
    Ok(KstBound {
        m,
        nv,
        s,
        t,
        float_value: round_up(round_up(first) + second),
        degenerate,
    })
}

/// No `s` left vertices share `t` right neighbours.
pub fn is_kst_free(graph: &Bigraph, s: usize, t: usize) -> Result<bool> {
    if graph.left().len() > KST_FREE_LEFT_LIMIT {
        return Err(Error::SizeGuard {
            what: "left side",
            size: graph.left().len() as u64,
            limit: KST_FREE_LEFT_LIMIT as u64,
        });
    }
    Ok(find_grid(graph, s, t, GridConstraints::default())?.is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditStatus {
    NotApplicable,
    Holds,
    Violation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KstAudit {
    pub status: AuditStatus,
    pub edges: u64,
    pub bound: KstBound,
}

/// Checks the edge bound with `U` = right side, `V` = left side: the graph
/// must have no `t` left vertices sharing `s` right neighbours.
pub fn kst_audit(graph: &Bigraph, s: usize, t: usize) -> Result<KstAudit> {
    let bound = kst_edge_bound(
        graph.right().len() as u64,
        graph.left().len() as u64,
        s as u64,
        t as u64,
    )?;
    let edges = graph.edge_count() as u64;
    let status = if !is_kst_free(graph, t, s)? {
        AuditStatus::NotApplicable
    } else if bound.admits(edges) {
        AuditStatus::Holds
    } else {
        AuditStatus::Violation
    };
    Ok(KstAudit { status, edges, bound })
}

/// The counting functions at the three scales `X^{1/3}`, `X^{1/2}`, `X`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScaleCounts {
    pub third: u64,
    pub half: u64,
    pub full: u64,
}

impl ScaleCounts {
    pub fn of(set: &FiniteSet, x: u64) -> Self {
        Self {
            third: set.count_up_to_root(x, 3) as u64,
            half: set.count_up_to_root(x, 2) as u64,
            full: set.count_up_to(x) as u64,
        }
    }
}

pub const CLAIM31_TERM_NAMES: [&str; 9] = [
    "A(X^1/2)B(X^1/2)",
    "2A(X^1/3)B(X)^2/3",
    "2B(X)",
    "2A(X^1/2)B(X)^1/2",
    "B(X)",
    "2B(X^1/3)A(X)^2/3",
    "2A(X)",
    "2B(X^1/2)A(X)^1/2",
    "A(X)",
];

/// Right-hand side of the counting inequality, term by term. Each term is
/// rounded upward, as is the total.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim31Terms {
    pub a: ScaleCounts,
    pub b: ScaleCounts,
    /// In the order of [`CLAIM31_TERM_NAMES`].
    pub terms: [f64; 9],
    pub total: f64,
}

impl Claim31Terms {
    pub fn named(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        CLAIM31_TERM_NAMES.iter().copied().zip(self.terms.iter().copied())
    }
}

fn two_thirds(count: u64) -> f64 {
    round_up((count as f64).cbrt().powi(2))
}

fn half_power(count: u64) -> f64 {
    round_up((count as f64).sqrt())
}

pub fn claim31_rhs(a: &FiniteSet, b: &FiniteSet, x: u64) -> Claim31Terms {
    let ca = ScaleCounts::of(a, x);
    let cb = ScaleCounts::of(b, x);
    let f = |v: u64| v as f64;
    let terms = [
        f(ca.half) * f(cb.half),
        round_up(2.0 * f(ca.third) * two_thirds(cb.full)),
        2.0 * f(cb.full),
        round_up(2.0 * f(ca.half) * half_power(cb.full)),
        f(cb.full),
        round_up(2.0 * f(cb.third) * two_thirds(ca.full)),
        2.0 * f(ca.full),
        round_up(2.0 * f(cb.half) * half_power(ca.full)),
        f(ca.full),
    ];
    let total = round_up(terms.iter().sum());
    Claim31Terms {
        a: ca,
        b: cb,
        terms,
        total,
    }
}

/// Audit of the counting inequality for one finite instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimAudit {
    /// Distinct products `v = ab <= X` with `v - n` a k-th power.
    pub qx: u64,
    pub rhs: Claim31Terms,
    pub x0: BigUint,
    /// `X >= X_0`.
    pub applicable: bool,
    /// `QX <= rhs.total`.
    pub holds: bool,
    /// `QX / X^{1/k}`, reported only.
    pub density_ratio: f64,
}

impl ClaimAudit {
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.holds
    }
}

/// Distinct products `a·b <= x` that lie in `{y^k + n : y >= 1}`.
pub fn count_shifted_products(a: &FiniteSet, b: &FiniteSet, n: i64, k: u32, x: u64) -> u64 {
    let found: Vec<Vec<u64>> = a
        .as_slice()
        .par_iter()
        .map(|&left| {
            b.iter()
                .map(|right| u128::from(left) * u128::from(right))
                .take_while(|&v| v <= u128::from(x))
                .filter(|&v| {
                    let shifted = i128::try_from(v).expect("fits") - i128::from(n);
                    shifted > 0 && power_witness_u128(shifted as u128, k).is_some()
                })
                .map(|v| v as u64)
                .collect()
        })
        .collect();
    let mut values: Vec<u64> = found.into_iter().flatten().collect();
    values.sort_unstable();
    values.dedup();
    values.len() as u64
}

pub fn claim31_audit(a: &FiniteSet, b: &FiniteSet, n: i64, k: u32, x: u64) -> Result<ClaimAudit> {
    let x0 = arith::x0_threshold(&BigInt::from(n), k)?;
    let qx = count_shifted_products(a, b, n, k, x);
    let rhs = claim31_rhs(a, b, x);
    let scale = (x as f64).powf(1.0 / f64::from(k));
    Ok(ClaimAudit {
        qx,
        applicable: BigUint::from(x) >= x0,
        holds: qx as f64 <= rhs.total,
        density_ratio: if scale > 0.0 { qx as f64 / scale } else { 0.0 },
        rhs,
        x0,
    })
}

/// Exact `u64` view of `X_0` when it fits.
pub fn x0_as_u64(n: i64, k: u32) -> Result<Option<u64>> {
    Ok(arith::x0_threshold(&BigInt::from(n), k)?.to_u64())
}
