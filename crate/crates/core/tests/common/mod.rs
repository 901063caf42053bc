//! Random instances and straight-from-the-definition reference computations
//! shared by the integration tests. Nothing here calls the library's
//! latency, graph or assignment code.

#![allow(dead_code, clippy::needless_range_loop)]

use geoplace_core::model::NetworkSpec;
use geoplace_core::rational::{q, qi};
use geoplace_core::Q;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Symmetric RTTs, all distinct, drawn from `[n², 2n²]`. Any two exceed
/// the largest, so the triangle inequality holds.
pub fn distinct_rtts(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Q>> {
    let lo = (n * n) as i128;
    let mut pool: Vec<i128> = (lo..=2 * lo).collect();
    pool.shuffle(rng);
    let mut rtt = vec![vec![qi(0); n]; n];
    let mut next = pool.into_iter();
    for u in 0..n {
        for v in u + 1..n {
            let t = qi(next.next().unwrap());
            rtt[u][v] = t;
            rtt[v][u] = t;
        }
    }
    rtt
}

/// Integer weights in `1..=20`, normalized to total 1.
pub fn random_demands(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<Q>> {
    let w: Vec<Vec<i128>> = (0..n)
        .map(|_| (0..k).map(|_| rng.gen_range(1..=20)).collect())
        .collect();
    let total: i128 = w.iter().flatten().sum();
    w.iter()
        .map(|r| r.iter().map(|&x| q(x, total)).collect())
        .collect()
}

pub fn random_unit_spec(rng: &mut ChaCha8Rng, n: usize, k: usize) -> NetworkSpec {
    let rtt = distinct_rtts(rng, n);
    let demands = random_demands(rng, n, k);
    NetworkSpec::unit(ids(n), rtt, demands, k).unwrap()
}

pub fn random_multi_spec(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_capacity: u32,
    max_k: usize,
) -> NetworkSpec {
    let caps: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=max_capacity)).collect();
    let total = caps.iter().sum::<u32>() as usize;
    let k = rng.gen_range(1..=max_k.min(total));
    let rtt = distinct_rtts(rng, n);
    let demands = random_demands(rng, n, k);
    NetworkSpec::new(ids(n), caps, rtt, demands, k).unwrap()
}

/// In-sets under distinct RTTs: the `k-1` nearest other nodes.
pub fn naive_in_sets(spec: &NetworkSpec) -> Vec<Vec<usize>> {
    let (n, k) = (spec.node_count(), spec.file_count());
    (0..n)
        .map(|v| {
            let mut others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            others.sort_by(|&a, &b| spec.rtt(a, v).cmp(spec.rtt(b, v)).then(a.cmp(&b)));
            let mut set: Vec<usize> = others.into_iter().take(k - 1).collect();
            set.sort();
            set
        })
        .collect()
}

/// `ℓ_tx(s, j) = Σ_{v ∈ Γ⁺(s)} τ(s, v) p(v, j)`.
pub fn naive_tx(spec: &NetworkSpec, in_sets: &[Vec<usize>]) -> Vec<Vec<Q>> {
    let (n, k) = (spec.node_count(), spec.file_count());
    (0..n)
        .map(|s| {
            (0..k)
                .map(|j| {
                    let mut total = qi(0);
                    for v in 0..n {
                        if v == s || in_sets[v].contains(&s) {
                            total += spec.rtt(s, v) * spec.demand(v, j);
                        }
                    }
                    total
                })
                .collect()
        })
        .collect()
}

/// `λ(v, k-1)`: sort the RTTs into `v` (including 0 to itself) and take
/// position `k-1`.
pub fn naive_bounds(spec: &NetworkSpec) -> Vec<Q> {
    let n = spec.node_count();
    let k = spec.file_count();
    (0..n)
        .map(|v| {
            let mut col: Vec<Q> = (0..n).map(|u| *spec.rtt(u, v)).collect();
            col.sort();
            col[(k - 1).min(n - 1)]
        })
        .collect()
}

/// `held[v]` lists the files at node `v`. Returns `(ℓ(v, j), L_avg)`, or
/// `None` if some file is nowhere.
pub fn naive_latency(spec: &NetworkSpec, held: &[Vec<usize>]) -> Option<(Vec<Vec<Q>>, Q)> {
    let (n, k) = (spec.node_count(), spec.file_count());
    let mut lat = vec![vec![qi(0); k]; n];
    let mut avg = qi(0);
    for v in 0..n {
        for j in 0..k {
            let best = (0..n)
                .filter(|&u| held[u].contains(&j))
                .map(|u| *spec.rtt(u, v))
                .min()?;
            avg += best * spec.demand(v, j);
            lat[v][j] = best;
        }
    }
    Some((lat, avg))
}

/// Minimum of `Σ_i cost[i][π(i)]` over all permutations, by recursion.
pub fn naive_assignment(cost: &[Vec<Q>]) -> Q {
    fn go(cost: &[Vec<Q>], row: usize, used: &mut Vec<bool>) -> Q {
        if row == cost.len() {
            return qi(0);
        }
        let mut best: Option<Q> = None;
        for c in 0..cost.len() {
            if !used[c] {
                used[c] = true;
                let total = cost[row][c] + go(cost, row + 1, used);
                used[c] = false;
                if best.as_ref().is_none_or(|b| total < *b) {
                    best = Some(total);
                }
            }
        }
        best.unwrap()
    }
    go(cost, 0, &mut vec![false; cost.len()])
}

pub fn random_matrix(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<Q>> {
    (0..k)
        .map(|_| {
            (0..k)
                .map(|_| q(rng.gen_range(0..=60), rng.gen_range(1..=8)))
                .collect()
        })
        .collect()
}

pub fn smallest_prime_at_least(x: u64) -> u64 {
    (x.max(2)..)
        .find(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0))
        .unwrap()
}
