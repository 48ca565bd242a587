//! Brute-force reference computations over explicit fiber words, and a
//! seeded generator of small random systems. Used to cross-check the
//! layered algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph;
use crate::measure::markov::MarkovMeasure;
use crate::shift::{self, Limits, RawSystem, SystemBundle};
use crate::transition::DepthWitness;

/// Depth by trying every symbol subset at every interior position.
pub fn brute_depth(bundle: &SystemBundle, w: &[usize], limits: &Limits) -> Result<DepthWitness> {
    if w.len() < 3 {
        return Err(Error::TooShort(w.len()));
    }
    let fib = shift::fiber(bundle, w, limits)?;
    if fib.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let last = w.len() - 1;
    let mut best: Option<(usize, Vec<usize>, usize)> = None;
    for i in 1..last {
        let mut present: Vec<usize> = fib.iter().map(|x| x[i]).collect();
        present.sort_unstable();
        present.dedup();
        for mask in 1u32..(1 << present.len()) {
            let set: Vec<usize> = (0..present.len())
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| present[j])
                .collect();
            let routes = fib.iter().all(|x| {
                fib.iter()
                    .any(|y| y[0] == x[0] && y[last] == x[last] && set.contains(&y[i]))
            });
            if routes {
                let key = (set.len(), set, i + 1);
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
        }
    }
    let (value, set, position) = best.expect("the full set routes everything");
    Ok(DepthWitness { value, position, set })
}

/// Tau-depth by exhaustive search over partitions of the fiber words.
pub fn brute_tau(bundle: &SystemBundle, w: &[usize], limits: &Limits) -> Result<usize> {
    let fib = shift::fiber(bundle, w, limits)?;
    if fib.is_empty() {
        return Err(Error::EmptyFiber);
    }
    let last = w.len() - 1;
    let bridge = |x: &[usize], y: &[usize]| fib.iter().any(|z| z[0] == x[0] && z[last] == y[last]);
    let n = fib.len();
    let ok: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| bridge(&fib[i], &fib[j]) && bridge(&fib[j], &fib[i])).collect())
        .collect();
    let mut best = n;
    let mut parts: Vec<Vec<usize>> = Vec::new();
    place(0, n, &ok, &mut parts, &mut best);
    Ok(best)
}

fn place(i: usize, n: usize, ok: &[Vec<bool>], parts: &mut Vec<Vec<usize>>, best: &mut usize) {
    if parts.len() >= *best {
        return;
    }
    if i == n {
        *best = parts.len();
        return;
    }
    for k in 0..parts.len() {
        if parts[k].iter().all(|&j| ok[i][j]) {
            parts[k].push(i);
            place(i + 1, n, ok, parts, best);
            parts[k].pop();
        }
    }
    parts.push(vec![i]);
    place(i + 1, n, ok, parts, best);
    parts.pop();
}

/// Number of fiber words, by enumeration.
pub fn brute_fiber_size(bundle: &SystemBundle, w: &[usize], limits: &Limits) -> Result<usize> {
    Ok(shift::fiber(bundle, w, limits)?.len())
}

/// `nu[w]` as the unscaled product `initial * prod (P restricted to w_i)`.
pub fn product_cylinder(bundle: &SystemBundle, mu: &MarkovMeasure<f64>, w: &[usize]) -> f64 {
    let n = bundle.n_symbols();
    let mut v: Vec<f64> = (0..n)
        .map(|a| if bundle.label(a) == w[0] { mu.initial[a] } else { 0.0 })
        .collect();
    for &l in &w[1..] {
        v = (0..n)
            .map(|b| {
                if bundle.label(b) != l {
                    return 0.0;
                }
                (0..n).map(|a| v[a] * mu.transition[a][b]).sum()
            })
            .collect();
    }
    v.iter().sum()
}

const NAMES:[&str; 6] = ["a", "b", "c", "d", "e", "f"];
const LABELS: [&str; 3] = ["0", "1", "2"];

/// A random irreducible system with 2 to 6 symbols and 2 or 3 labels,
/// determined by `seed`.
pub fn random_system(seed: u64) -> SystemBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let k = rng.gen_range(2..=6);
        let n_labels = rng.gen_range(2..=3usize).min(k);
        let density = rng.gen_range(0.3..0.7);
        let mut allowed = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if rng.gen_bool(density) {
                    allowed.push((NAMES[a].to_string(), NAMES[b].to_string()));
                }
            }
        }
        let labels = (0..k)
            .map(|a| (NAMES[a].to_string(), LABELS[rng.gen_range(0..n_labels)].to_string()))
            .collect();
        let raw = RawSystem {
            alphabet: NAMES[..k].iter().map(|s| s.to_string()).collect(),
            allowed,
            labels,
        };
        let Ok(bundle) = shift::validate_system(&raw) else {
            continue;
        };
        let comps = graph::scc(bundle.sft().adjacency());
        if comps.len() == 1 && bundle.n_symbols() >= 2 {
            return bundle;
        }
    }
}

/// A random measure positive on exactly the allowed 2-blocks.
pub fn random_measure(bundle: &SystemBundle, seed: u64) -> MarkovMeasure<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = bundle.n_symbols();
    let matrix = (0..n)
        .map(|a| {
            let mut row: Vec<f64> = (0..n)
                .map(|b| if bundle.allowed(a, b) { rng.gen_range(0.1..1.0) } else { 0.0 })
                .collect();
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|x| *x /= s);
            row
        })
        .collect();
    MarkovMeasure::new(bundle, matrix, None).expect("irreducible system has a stationary vector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig4_depths() {
        let b = fixtures::fig4();
        let w = b.parse_label_word("2 0 a 1 2").unwrap();
        let d = brute_depth(&b, &w, &Limits::default()).unwrap();
        assert_eq!((d.value, d.position), (1, 3));
    }

    #[test]
    fn fig1_tau() {
        let b = fixtures::fig1();
        let w = b.parse_label_word("aaaaa").unwrap();
        assert_eq!(brute_tau(&b, &w, &Limits::default()).unwrap(), 2);
    }

    #[test]
    fn generator_is_deterministic() {
        for seed in 0..20 {
            let b = random_system(seed);
            assert_eq!(b, random_system(seed));
            assert_eq!(graph::scc(b.sft().adjacency()).len(), 1);
            let mu = random_measure(&b, seed);
            assert!(mu.fully_supported);
        }
    }
}
