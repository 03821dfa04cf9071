//! Exact integer primitives: k-th roots, k-th power witnesses, the shift
//! parameters of the power predicate, the constants `s_k`/`t_k`, and the
//! threshold predicates built on them.
//!
//! Two tiers live here. The arbitrary-precision functions take `BigUint` /
//! `BigInt` and never lose exactness at any magnitude. The `*_u128` helpers
//! are the fast path used by the graph scanners; they are exact too, and are
//! cross-checked against the big-integer path in tests.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// Arbitrary-precision non-negative integer.
pub type Nat = BigUint;

/// Exact rational with positive denominator, always kept in lowest terms.
pub type ExactRational = BigRational;

/// Exponent `k` and nonzero shift `m` of the predicate "a·b + m is a k-th power".
///
/// The shift is added: a caller modelling `{x^k + n}` membership of a product
/// `a·b` must pass `m = -n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftParams {
    k: u32,
    m: i64,
}

impl ShiftParams {
    pub fn new(k: u32, m: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::ExponentTooSmall { k, min: 2 });
        }
        if m == 0 {
            return Err(Error::ZeroShift);
        }
        Ok(Self { k, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn abs_m(&self) -> u64 {
        self.m.unsigned_abs()
    }

    pub fn shift(&self) -> BigInt {
        BigInt::from(self.m)
    }

    /// Theorem-level scanners need `k >= 3`; plumbing accepts `k = 2`.
    pub(crate) fn require_theorem_range(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::ExponentTooSmall { k: self.k, min: 3 });
        }
        Ok(())
    }
}

/// Largest `r` with `r^k <= x`.
///
/// Newton iteration from an over-estimate `2^ceil(bits/k)`; the sequence
/// decreases monotonically to the floor root, followed by a two-sided fix-up.
pub fn integer_kth_root(x: &BigUint, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::ExponentTooSmall { k, min: 1 });
    }
    if k == 1 || x <= &BigUint::one() {
        return Ok(x.clone());
    }
    if let Some(small) = x.to_u128() {
        return Ok(BigUint::from(floor_root_u128(small, k)));
    }

    let bits = x.bits();
    let k64 = u64::from(k);
    let mut root = BigUint::one() << bits.div_ceil(k64);
    let k_big = BigUint::from(k);
    let k_minus_one = BigUint::from(k - 1);
    loop {
        let next = (&k_minus_one * &root + x / Pow::pow(&root, k - 1)) / &k_big;
        if next >= root {
            break;
        }
        root = next;
    }
    while Pow::pow(&root, k) > *x {
        root -= 1u32;
    }
    loop {
        let up = &root + 1u32;
        if Pow::pow(&up, k) <= *x {
            root = up;
        } else {
            break;
        }
    }
    Ok(root)
}

/// `Some(y)` with `y >= 1` and `y^k = x`, or `None`. Zero and negatives are
/// never k-th powers of positive integers; `k = 0` yields `None`.
pub fn kth_power_witness(x: &BigInt, k: u32) -> Option<BigUint> {
    if k == 0 || x.sign() != Sign::Plus {
        return None;
    }
    let x = x.magnitude();
    if let Some(small) = x.to_u128() {
        return power_witness_u128(small, k).map(BigUint::from);
    }
    let root = integer_kth_root(x, k).ok()?;
    (Pow::pow(&root, k) == *x).then_some(root)
}

/// Witness `y` with `a·b + m = y^k`, if any.
pub fn shifted_power_witness(a: &BigUint, b: &BigUint, params: ShiftParams) -> Option<BigUint> {
    let value = BigInt::from(a * b) + params.shift();
    kth_power_witness(&value, params.k)
}

/// Number of elements of `set` that are `<= x`.
pub fn count_up_to(set: &FiniteSet, x: u64) -> usize {
    set.count_up_to(x)
}

pub fn checked_pow_u128(base: u128, k: u32) -> Option<u128> {
    base.checked_pow(k)
}

/// Largest `r` with `r^k <= x` on machine words.
pub fn floor_root_u128(x: u128, k: u32) -> u128 {
    assert!(k >= 1, "root index must be positive");
    if k == 1 || x < 2 {
        return x;
    }
    if k >= 128 {
        return 1;
    }
    // Seed strictly above the root, then Newton downwards.
    let estimate = (x as f64).powf(1.0 / f64::from(k));
    let mut root = (estimate * (1.0 + 1e-9)) as u128 + 2;
    let k128 = u128::from(k);
    loop {
        let denom = root.checked_pow(k - 1);
        let quotient = denom.map_or(0, |d| x / d);
        let next = ((k128 - 1) * root + quotient) / k128;
        if next >= root {
            break;
        }
        root = next;
    }
    while root.checked_pow(k).is_none_or(|p| p > x) {
        root -= 1;
    }
    while (root + 1).checked_pow(k).is_some_and(|p| p <= x) {
        root += 1;
    }
    root
}

/// Smallest `r` with `r^k >= x`.
pub fn ceil_root_u128(x: u128, k: u32) -> u128 {
    let r = floor_root_u128(x, k);
    if r.checked_pow(k) == Some(x) {
        r
    } else {
        r + 1
    }
}

pub fn floor_root_u64(x: u64, k: u32) -> u64 {
    floor_root_u128(u128::from(x), k) as u64
}

pub fn power_witness_u128(x: u128, k: u32) -> Option<u128> {
    if x == 0 || k == 0 {
        return None;
    }
    let r = floor_root_u128(x, k);
    (r.checked_pow(k) == Some(x)).then_some(r)
}

/// `a·b + m` when it is a positive machine word.
pub fn shifted_value(a: u64, b: u64, m: i64) -> Option<u128> {
    let product = u128::from(a) * u128::from(b);
    let value = if m >= 0 {
        product.checked_add(m as u128)?
    } else {
        product.checked_sub(u128::from(m.unsigned_abs()))?
    };
    (value > 0).then_some(value)
}

/// Fast-path witness for `a·b + m = y^k` on machine words.
pub fn shifted_witness_u64(a: u64, b: u64, params: ShiftParams) -> Option<u128> {
    power_witness_u128(shifted_value(a, b, params.m)?, params.k)
}

/// `s_k` of the local forbidden-structure results.
pub fn sk(k: u32) -> Result<u32> {
    match k {
        0..=2 => Err(Error::ExponentTooSmall { k, min: 3 }),
        3 => Ok(6),
        4 => Ok(4),
        5 => Ok(3),
        _ => Ok(2),
    }
}

/// `t_k`, the exponent of the large-element threshold `2|n|^{t_k}`.
pub fn tk(k: u32) -> Result<ExactRational> {
    let ratio = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    match k {
        0..=2 => Err(Error::ExponentTooSmall { k, min: 3 }),
        3 => Ok(ratio(15399, 938)),
        4 => Ok(ratio(34, 3)),
        5 => Ok(ratio(97, 23)),
        6 => Ok(ratio(29, 4)),
        _ => {
            let k = i64::from(k);
            Ok(ratio(k * k + k - 4, k * k - 6 * k + 6))
        }
    }
}

/// `b >= factor · |n|^{p/q}`, decided as `b^q >= factor^q · |n|^p` (or with
/// `|n|^{-p}` moved to the left side when `p < 0`).
///
/// Panics if `n = 0` or if the numerator or denominator of `t` exceeds `u32`.
pub fn ge_threshold(b: &BigUint, n: &BigInt, t: &ExactRational, factor: &BigUint) -> bool {
    assert!(!n.is_zero(), "threshold base must be nonzero");
    let q = t.denom().to_u32().expect("threshold denominator fits u32");
    let p_abs = t.numer().abs().to_u32().expect("threshold numerator fits u32");
    let base = n.magnitude();
    let lhs = Pow::pow(b, q);
    let factor_q = Pow::pow(factor, q);
    if t.numer().is_negative() {
        lhs * Pow::pow(base, p_abs) >= factor_q
    } else {
        lhs >= factor_q * Pow::pow(base, p_abs)
    }
}

/// `factor · |n|^e` for an integer exponent.
pub fn scaled_power(factor: u64, n: i64, e: u32) -> BigUint {
    BigUint::from(factor) * Pow::pow(BigUint::from(n.unsigned_abs()), e)
}

/// `max{4|n|^34, 4^{6(k-1)} |n|^{6k}}`.
pub fn x0_threshold(n: &BigInt, k: u32) -> Result<BigUint> {
    if n.is_zero() {
        return Err(Error::ZeroShift);
    }
    if k < 3 {
        return Err(Error::ExponentTooSmall { k, min: 3 });
    }
    let base = n.magnitude();
    let first = BigUint::from(4u32) * Pow::pow(base, 34u32);
    let second = Pow::pow(BigUint::from(4u32), 6 * (k - 1)) * Pow::pow(base, 6 * k);
    Ok(first.max(second))
}

/// `4^{6(k-1)} |m|^{6k}`, the strict lower bound on X in the 2×2 grid
/// exclusion.
pub fn grid_exclusion_threshold(params: ShiftParams) -> BigUint {
    Pow::pow(BigUint::from(4u32), 6 * (params.k - 1)) * Pow::pow(BigUint::from(params.abs_m()), 6 * params.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn rat(p: i64, q: i64) -> ExactRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn kth_root_examples() {
        assert_eq!(integer_kth_root(&big(8), 3).unwrap(), big(2));
        assert_eq!(integer_kth_root(&big(63), 3).unwrap(), big(3));
        assert_eq!(integer_kth_root(&big(0), 5).unwrap(), big(0));
        assert!(integer_kth_root(&big(8), 0).is_err());
    }

    #[test]
    fn kth_root_exhaustive_small() {
        for k in 2..=10u32 {
            for x in 0..=1_000_000u128 {
                let r = floor_root_u128(x, k);
                assert!(r.pow(k) <= x && (r + 1).pow(k) > x, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn kth_root_huge_values() {
        let x: BigUint = Pow::pow(big(3), 700u32) + 5u32;
        for k in [2u32, 3, 7, 64, 1000] {
            let r = integer_kth_root(&x, k).unwrap();
            assert!(Pow::pow(&r, k) <= x);
            assert!(Pow::pow(&(&r + 1u32), k) > x);
            assert_eq!(r, x.nth_root(k));
        }
        let exact: BigUint = Pow::pow(big(12345), 30u32);
        assert_eq!(integer_kth_root(&exact, 30).unwrap(), big(12345));
    }

    #[test]
    fn u128_root_near_limits() {
        assert_eq!(floor_root_u128(u128::MAX, 2), u64::MAX as u128);
        assert_eq!(floor_root_u128(u128::MAX, 127), 2);
        assert_eq!(floor_root_u128(u128::MAX, 200), 1);
        let y = (1u128 << 42) + 12345;
        assert_eq!(floor_root_u128(y.pow(3), 3), y);
        assert_eq!(floor_root_u128(y.pow(3) - 1, 3), y - 1);
    }

    #[test]
    fn witness_examples() {
        assert_eq!(kth_power_witness(&BigInt::from(64), 3), Some(big(4)));
        assert_eq!(kth_power_witness(&BigInt::from(63), 3), None);
        assert_eq!(kth_power_witness(&BigInt::from(0), 3), None);
        assert_eq!(kth_power_witness(&BigInt::from(-8), 3), None);
    }

    #[test]
    fn witness_round_trip_and_neighbours() {
        for k in 2..=8u32 {
            for y in 1..=1000u64 {
                let p = BigInt::from(Pow::pow(big(y), k));
                assert_eq!(kth_power_witness(&p, k), Some(big(y)));
                if y > 1 {
                    assert_eq!(kth_power_witness(&(&p + 1), k), None, "y={y} k={k}");
                }
                if y > 2 {
                    assert_eq!(kth_power_witness(&(&p - 1), k), None, "y={y} k={k}");
                }
            }
        }
    }

    #[test]
    fn shifted_witness_examples() {
        let p = |k, m| ShiftParams::new(k, m).unwrap();
        assert_eq!(shifted_power_witness(&big(1), &big(7), p(3, 1)), Some(big(2)));
        assert_eq!(shifted_power_witness(&big(2), &big(13), p(3, 1)), Some(big(3)));
        assert_eq!(shifted_power_witness(&big(1), &big(1), p(3, -1)), None);
        assert_eq!(shifted_witness_u64(1, 1, p(3, -1)), None);
        assert_eq!(shifted_witness_u64(2, 13, p(3, 1)), Some(3));
    }

    #[test]
    fn shift_params_validation() {
        assert!(ShiftParams::new(1, 1).is_err());
        assert!(ShiftParams::new(3, 0).is_err());
        assert!(ShiftParams::new(2, -4).is_ok());
    }

    #[test]
    fn constants() {
        assert_eq!(sk(3).unwrap(), 6);
        assert_eq!(sk(4).unwrap(), 4);
        assert_eq!(sk(5).unwrap(), 3);
        assert_eq!(sk(9).unwrap(), 2);
        assert!(sk(2).is_err());
        assert_eq!(tk(3).unwrap(), rat(15399, 938));
        assert_eq!(tk(4).unwrap(), rat(34, 3));
        assert_eq!(tk(5).unwrap(), rat(97, 23));
        assert_eq!(tk(6).unwrap(), rat(29, 4));
        assert_eq!(tk(7).unwrap(), rat(4, 1));
        assert!(tk(2).is_err());
        // every t_k stays at or below 17 and every s_k at or below 6
        for k in 3..200 {
            assert!(tk(k).unwrap() <= rat(17, 1));
            assert!(sk(k).unwrap() <= 6);
        }
    }

    #[test]
    fn threshold_examples() {
        let two = big(2);
        assert!(ge_threshold(&big(2), &BigInt::from(1), &rat(17, 1), &two));
        assert!(!ge_threshold(&big(1), &BigInt::from(1), &rat(17, 1), &two));
        // 5161^3 = 137467988281 >= 2^37 = 137438953472 > 5160^3
        assert!(ge_threshold(&big(5162), &BigInt::from(2), &rat(34, 3), &two));
        assert!(ge_threshold(&big(5161), &BigInt::from(2), &rat(34, 3), &two));
        assert!(!ge_threshold(&big(5160), &BigInt::from(2), &rat(34, 3), &two));
        assert!(ge_threshold(&big(1), &BigInt::from(4), &rat(-1, 2), &big(1)));
        assert!(!ge_threshold(&big(1), &BigInt::from(4), &rat(-1, 2), &big(3)));
    }

    #[test]
    fn x0_examples() {
        let n = |v: i64| BigInt::from(v);
        assert_eq!(x0_threshold(&n(1), 3).unwrap(), big(16_777_216));
        assert_eq!(x0_threshold(&n(1), 7).unwrap(), Pow::pow(big(4), 36u32));
        let expected = (big(4) * Pow::pow(big(2), 34u32)).max(Pow::pow(big(4), 12u32) * Pow::pow(big(2), 18u32));
        assert_eq!(expected, Pow::pow(big(2), 42u32));
        assert_eq!(x0_threshold(&n(-2), 3).unwrap(), expected);
        assert!(x0_threshold(&n(0), 3).is_err());
        assert!(x0_threshold(&n(1), 2).is_err());
    }

    #[test]
    fn count_up_to_examples() {
        let set = FiniteSet::new(vec![2, 9, 28, 65]).unwrap();
        assert_eq!(count_up_to(&set, 30), 3);
        assert_eq!(count_up_to(&FiniteSet::empty(), 100), 0);
        assert_eq!(count_up_to(&FiniteSet::new(vec![5]).unwrap(), 4), 0);
    }

    proptest! {
        #[test]
        fn big_root_matches_reference(x in any::<u128>(), hi in any::<u64>(), k in 1u32..40) {
            let value = (BigUint::from(hi) << 128u32) + BigUint::from(x);
            prop_assert_eq!(integer_kth_root(&value, k).unwrap(), value.nth_root(k));
        }

        #[test]
        fn u128_root_matches_reference(x in any::<u128>(), k in 1u32..130) {
            prop_assert_eq!(BigUint::from(floor_root_u128(x, k)), BigUint::from(x).nth_root(k));
        }

        #[test]
        fn ge_threshold_monotone_and_float_consistent(
            b in 1u64..10_000_000,
            n in 1i64..6,
            p in 1i64..40,
            q in 1i64..8,
            factor in 1u64..5,
        ) {
            let t = rat(p, q);
            let nb = BigInt::from(n);
            let f = big(factor);
            let here = ge_threshold(&big(b), &nb, &t, &f);
            if here {
                prop_assert!(ge_threshold(&big(b + 1), &nb, &t, &f));
            }
            let bound = factor as f64 * (n as f64).powf(p as f64 / q as f64);
            if (b as f64 - bound).abs() > 1.0 {
                prop_assert_eq!(here, b as f64 >= bound);
            }
        }

        #[test]
        fn count_up_to_monotone(mut v in proptest::collection::vec(1u64..1000, 0..40), x in 0u64..1000) {
            v.sort_unstable();
            v.dedup();
            let set = FiniteSet::new(v).unwrap();
            prop_assert!(count_up_to(&set, x) <= count_up_to(&set, x + 1));
        }
    }
}
