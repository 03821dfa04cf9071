//! Product sets, the finite multiplicative-reducibility decision, shifted
//! power sets and their perturbations.
//!
//! Reducibility of a truncation says nothing about the infinite set it was
//! cut from: truncating `A·B` at `X` usually destroys the product structure,
//! and an irreducible truncation can come from a reducible infinite set.
//! The functions here only ever decide finite sets.

use std::collections::HashSet;

use crate::arith::{floor_root_u128, power_witness_u128};
use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// Largest set accepted by [`find_decomposition`].
pub const DECOMPOSE_MAX_LEN: usize = 64;
/// Largest element accepted by [`find_decomposition`].
pub const DECOMPOSE_MAX_ELEMENT: u64 = 1_000_000_000_000;

/// `S = A·B` with `|A|, |B| >= 2` and `min A <= min B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub a: FiniteSet,
    pub b: FiniteSet,
}

impl Decomposition {
    pub fn replays(&self, target: &FiniteSet) -> bool {
        self.a.len() >= 2 && self.b.len() >= 2 && product_set(&self.a, &self.b).is_ok_and(|p| &p == target)
    }
}

/// `{a·b : a in A, b in B}`.
pub fn product_set(a: &FiniteSet, b: &FiniteSet) -> Result<FiniteSet> {
    let mut products = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            products.push(x.checked_mul(y).ok_or(Error::Overflow("product exceeds u64"))?);
        }
    }
    products.sort_unstable();
    products.dedup();
    Ok(FiniteSet::from_sorted_unchecked(products))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Closed-set search for one choice of `(min A, min B) = (a0, b0)`.
///
/// For `A ⊆ candA` let `B(A) = {b in candB : A·b ⊆ S}` and dually `A(B)`.
/// If some `A·B = S`, then the closure `A(B(A))` paired with `B(A)` is also
/// a decomposition, so only closed sets need visiting. Closed sets are
/// generated in prefix-preserving order, each exactly once.
struct ClosedSearch<'s> {
    target: &'s FiniteSet,
    members: HashSet<u64>,
    cand_a: Vec<u64>,
    cand_b: Vec<u64>,
}

impl ClosedSearch<'_> {
    fn compatible_b(&self, b_set: &[u64], a: u64) -> Vec<u64> {
        b_set
            .iter()
            .copied()
            .filter(|&b| a.checked_mul(b).is_some_and(|v| self.members.contains(&v)))
            .collect()
    }

    fn closure_a(&self, b_set: &[u64]) -> Vec<bool> {
        self.cand_a
            .iter()
            .map(|&a| {
                b_set
                    .iter()
                    .all(|&b| a.checked_mul(b).is_some_and(|v| self.members.contains(&v)))
            })
            .collect()
    }

    fn covers(&self, a_mask: &[bool], b_set: &[u64]) -> bool {
        let mut hit = HashSet::with_capacity(self.target.len());
        for (i, &a) in self.cand_a.iter().enumerate() {
            if a_mask[i] {
                for &b in b_set {
                    hit.insert(a * b);
                }
            }
        }
        hit.len() == self.target.len()
    }

    fn run(&self) -> Option<Decomposition> {
        let b_all = self.cand_b.clone();
        let a_mask = self.closure_a(&b_all);
        self.visit(&a_mask, &b_all, 0)
    }

    fn visit(&self, a_mask: &[bool], b_set: &[u64], next: usize) -> Option<Decomposition> {
        let a_count = a_mask.iter().filter(|&&x| x).count();
        if a_count >= 2 && b_set.len() >= 2 && self.covers(a_mask, b_set) {
            let a: Vec<u64> = self
                .cand_a
                .iter()
                .zip(a_mask)
                .filter_map(|(&v, &keep)| keep.then_some(v))
                .collect();
            return Some(Decomposition {
                a: FiniteSet::from_sorted_unchecked(a),
                b: FiniteSet::from_sorted_unchecked(b_set.to_vec()),
            });
        }
        for c in next..self.cand_a.len() {
            if a_mask[c] {
                continue;
            }
            let b_next = self.compatible_b(b_set, self.cand_a[c]);
            if b_next.len() < 2 {
                continue;
            }
            let closed = self.closure_a(&b_next);
            if (0..c).any(|i| closed[i] != a_mask[i]) {
                continue;
            }
            if let Some(found) = self.visit(&closed, &b_next, c + 1) {
                return Some(found);
            }
        }
        None
    }
}

/// Decides whether `S = A·B` for some `A, B` with at least two elements
/// each, returning a witness. Complete for `|S| <= 64` and elements up to
/// `10^12`; larger inputs are rejected.
pub fn find_decomposition(target: &FiniteSet) -> Result<Option<Decomposition>> {
    if target.len() > DECOMPOSE_MAX_LEN {
        return Err(Error::SizeGuard {
            what: "set size",
            size: target.len() as u64,
            limit: DECOMPOSE_MAX_LEN as u64,
        });
    }
    if let Some(max) = target.max().filter(|&m| m > DECOMPOSE_MAX_ELEMENT) {
        return Err(Error::SizeGuard {
            what: "largest element",
            size: max,
            limit: DECOMPOSE_MAX_ELEMENT,
        });
    }
    // |A·B| >= |A| + |B| - 1 >= 3
    if target.len() < 3 {
        return Ok(None);
    }
    let s0 = target.min().expect("nonempty");
    let members: HashSet<u64> = target.iter().collect();
    for a0 in divisors(s0) {
        let b0 = s0 / a0;
        if a0 > b0 {
            break;
        }
        let quotients = |d: u64| -> Vec<u64> { target.iter().filter(|s| s % d == 0).map(|s| s / d).collect() };
        let search = ClosedSearch {
            target,
            members: members.clone(),
            cand_a: quotients(b0),
            cand_b: quotients(a0),
        };
        if let Some(found) = search.run() {
            debug_assert!(found.replays(target));
            return Ok(Some(found));
        }
    }
    Ok(None)
}

fn check_shift(k: u32, n: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::ExponentTooSmall { k, min: 2 });
    }
    if n == 0 {
        return Err(Error::ZeroShift);
    }
    Ok(())
}

/// `x^k + n` for `x >= 1`, skipping non-positive values, while `<= limit`.
fn shifted_powers_while(k: u32, n: i64, limit: u128) -> impl Iterator<Item = u64> {
    (1u128..)
        .map(move |x| x.checked_pow(k).map(|p| p as i128 + n as i128))
        .take_while(move |v| v.is_some_and(|v| v <= limit as i128))
        .flatten()
        .filter(|&v| v > 0)
        .map(|v| v as u64)
}

/// `{x^k + n : x >= 1} ∩ [1, X]`.
pub fn truncated_shifted_powers(k: u32, n: i64, x: u64) -> Result<FiniteSet> {
    check_shift(k, n)?;
    Ok(FiniteSet::from_sorted_unchecked(
        shifted_powers_while(k, n, u128::from(x)).collect(),
    ))
}

/// The first `count` positive elements of `{x^k + n : x >= 1}`.
pub fn shifted_powers_prefix(k: u32, n: i64, count: usize) -> Result<FiniteSet> {
    check_shift(k, n)?;
    let values: Vec<u64> = shifted_powers_while(k, n, u128::from(u64::MAX)).take(count).collect();
    if values.len() < count {
        return Err(Error::Overflow("shifted power exceeds u64"));
    }
    Ok(FiniteSet::from_sorted_unchecked(values))
}

/// `v = x^k + n` for some `x >= 1`.
pub fn is_shifted_power(v: u64, k: u32, n: i64) -> bool {
    let base = i128::from(v) - i128::from(n);
    v > 0 && base > 0 && power_witness_u128(base as u128, k).is_some()
}

/// `({1, m} · {x^k + n : x >= 1}) ∩ [1, X]`: the product set is truncated,
/// not the factors.
pub fn rm_example(m: u64, k: u32, n: i64, x: u64) -> Result<FiniteSet> {
    if m < 2 {
        return Err(Error::BadMultiplier(m));
    }
    let base = truncated_shifted_powers(k, n, x)?;
    let mut values: Vec<u64> = base.iter().collect();
    values.extend(base.iter().filter_map(|b| b.checked_mul(m)).filter(|&v| v <= x));
    values.sort_unstable();
    values.dedup();
    Ok(FiniteSet::from_sorted_unchecked(values))
}

/// `{1, m} · (first `count` elements of {x^k + n})`, an exact finite product.
pub fn rm_untruncated(m: u64, k: u32, n: i64, count: usize) -> Result<FiniteSet> {
    if m < 2 {
        return Err(Error::BadMultiplier(m));
    }
    let ones = FiniteSet::from_sorted_unchecked(vec![1, m]);
    product_set(&ones, &shifted_powers_prefix(k, n, count)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Perturbation {
    /// `|(R \ M) ∩ [1, X]|`.
    pub added: u64,
    /// `|(M \ R) ∩ [1, X]|`.
    pub removed: u64,
}

/// Counts of elements added to and removed from `M = {x^k + n}` up to `X`.
pub fn perturbation_distance(r: &FiniteSet, k: u32, n: i64, x: u64) -> Result<Perturbation> {
    let m = truncated_shifted_powers(k, n, x)?;
    let r = r.truncate(x);
    let added = r.iter().filter(|&v| !m.contains(v)).count() as u64;
    let removed = m.iter().filter(|&v| !r.contains(v)).count() as u64;
    Ok(Perturbation { added, removed })
}

/// `floor(X^{1/k})`, the natural scale of `|M ∩ [1, X]|`.
pub fn root_scale(x: u64, k: u32) -> u64 {
    floor_root_u128(u128::from(x), k) as u64
}
