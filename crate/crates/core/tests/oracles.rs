use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftpow::arith::shifted_witness_u64;
use shiftpow::decomp::shifted_powers_prefix;
use shiftpow::{
    cor22_scan, cor24_scan, find_decomposition, gap_scan, product_set, right_neighbors, rm_untruncated,
    shifted_power_witness, with_workers, FiniteSet, ShiftParams,
};

fn p(k: u32, m: i64) -> ShiftParams {
    ShiftParams::new(k, m).unwrap()
}

/// Decides reducibility by trying every candidate `A` drawn from the
/// divisors of `S`, pairing it with the largest compatible `B`. Swapping
/// factors lets `|A| <= |B|`, and `|A| + |B| - 1 <= |S|` then caps `|A|`.
pub fn naive_reducible(s: &FiniteSet) -> bool {
    let members: BTreeSet<u64> = s.iter().collect();
    let divisors: Vec<u64> = s
        .iter()
        .flat_map(|v| (1..=v).filter(move |d| v % d == 0))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let max_a = s.len().div_ceil(2);
    let n = divisors.len();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(pick) = stack.pop() {
        if pick.len() >= 2 {
            let a: Vec<u64> = pick.iter().map(|&i| divisors[i]).collect();
            let b: Vec<u64> = divisors
                .iter()
                .copied()
                .filter(|&d| a.iter().all(|&x| members.contains(&(x * d))))
                .collect();
            if b.len() >= 2 {
                let products: BTreeSet<u64> = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect();
                if products == members {
                    return true;
                }
            }
        }
        if pick.len() < max_a {
            let last = *pick.last().unwrap();
            for next in last + 1..n {
                let mut grown = pick.clone();
                grown.push(next);
                stack.push(grown);
            }
        }
    }
    false
}

#[test]
fn decomposition_agrees_with_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut reducible = 0;
    for _ in 0..1500 {
        let size = rng.gen_range(1..=6);
        let values: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=60)).collect();
        let s = FiniteSet::from_unsorted(values).unwrap();
        let found = find_decomposition(&s).unwrap();
        assert_eq!(found.is_some(), naive_reducible(&s), "{s:?}");
        if let Some(d) = found {
            assert!(d.replays(&s));
            reducible += 1;
        }
    }
    assert!(reducible > 0);
}

#[test]
fn decomposition_of_structured_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let mut gen = |n: usize| {
            let v: Vec<u64> = (0..n).map(|_| rng.gen_range(1..200)).collect();
            FiniteSet::from_unsorted(v).unwrap()
        };
        let a = gen(3);
        let b = gen(4);
        if a.len() < 2 || b.len() < 2 {
            continue;
        }
        let s = product_set(&a, &b).unwrap();
        let d = find_decomposition(&s).unwrap().expect("product set is reducible");
        assert!(d.replays(&s));
    }
}

#[test]
fn shifted_power_products_are_reducible() {
    for m in 2..=10 {
        for k in 3..=5 {
            for t in 4..=32 {
                let s = rm_untruncated(m, k, 1, t).unwrap();
                let d = find_decomposition(&s).unwrap().expect("reducible");
                assert!(d.replays(&s), "m={m} k={k} t={t}");
            }
        }
    }
    // a plain prefix of shifted cubes, for contrast, is usually irreducible
    let prefix = shifted_powers_prefix(3, 1, 10).unwrap();
    assert!(find_decomposition(&prefix).unwrap().is_none());
}

#[test]
fn predicate_is_symmetric() {
    for m in [-3i64, -1, 1, 4] {
        let params = p(3, m);
        let rows: Vec<Vec<u64>> = (1..=300).map(|a| right_neighbors(a, params, 300)).collect();
        for a in 1..=300u64 {
            for &b in &rows[a as usize - 1] {
                assert!(rows[b as usize - 1].contains(&a), "a={a} b={b} m={m}");
            }
        }
    }
}

#[test]
fn fast_and_big_witness_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20_000 {
        let k = rng.gen_range(2..=6);
        let m = rng.gen_range(-20i64..=20);
        if m == 0 {
            continue;
        }
        let params = p(k, m);
        let a = rng.gen_range(1..5000u64);
        let y = rng.gen_range(1..200u64);
        // land on a power most of the time
        let target = i128::from(y).pow(k) - i128::from(m);
        let b = if target > 0 && target % i128::from(a) == 0 {
            (target / i128::from(a)) as u64
        } else {
            rng.gen_range(1..100_000)
        };
        let fast = shifted_witness_u64(a, b, params).map(BigUint::from);
        let slow = shifted_power_witness(&BigUint::from(a), &BigUint::from(b), params);
        assert_eq!(fast, slow);
    }
}

#[test]
fn scans_independent_of_worker_count() {
    let params = p(3, -1);
    let reference = with_workers(1, || {
        (
            cor22_scan(params, 200_000).unwrap(),
            cor24_scan(params, 1_000_000).unwrap(),
            gap_scan(params, 150).unwrap(),
        )
    });
    for workers in [2, 4, 8] {
        let again = with_workers(workers, || {
            (
                cor22_scan(params, 200_000).unwrap(),
                cor24_scan(params, 1_000_000).unwrap(),
                gap_scan(params, 150).unwrap(),
            )
        });
        assert_eq!(again, reference, "workers={workers}");
    }
}
