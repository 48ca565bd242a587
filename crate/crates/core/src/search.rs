//! Exact combinatorial searches: minimum hitting sets and minimum clique
//! covers, both small enough in practice for exhaustive search.

use crate::bitset::BitSet;

/// Lexicographically least `k`-subset of `universe` (taken in its given
/// order) meeting every set in `sets`, if one exists.
pub fn hitting_set_of_size(universe: &[usize], sets: &[BitSet], k: usize) -> Option<Vec<usize>> {
    if sets.is_empty() {
        return if k == 0 { Some(Vec::new()) } else { universe.get(..k).map(<[usize]>::to_vec) };
    }
    if k == 0 || k > universe.len() {
        return None;
    }
    // last index in `universe` that can still hit each set
    let last_hit: Vec<Option<usize>> = sets
        .iter()
        .map(|s| universe.iter().rposition(|&x| s.contains(x)))
        .collect();
    if last_hit.iter().any(Option::is_none) {
        return None;
    }
    let mut chosen = Vec::with_capacity(k);
    let unhit: Vec<usize> = (0..sets.len()).collect();
    if extend(universe, sets, &last_hit, k, 0, &unhit, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend(
    universe: &[usize],
    sets: &[BitSet],
    last_hit: &[Option<usize>],
    k: usize,
    start: usize,
    unhit: &[usize],
    chosen: &mut Vec<usize>,
) -> bool {
    if unhit.is_empty() {
        // pad with the least remaining elements to reach size k
        let need = k - chosen.len();
        if universe.len() - start < need {
            return false;
        }
        chosen.extend_from_slice(&universe[start..start + need]);
        return true;
    }
    if chosen.len() == k {
        return false;
    }
    // every unhit set needs a hitter at index >= start
    if unhit.iter().any(|&s| last_hit[s].is_none_or(|l| l < start)) {
        return false;
    }
    let slots = k - chosen.len();
    for i in start..=universe.len() - slots {
        let x = universe[i];
        let rest: Vec<usize> = unhit.iter().copied().filter(|&s| !sets[s].contains(x)).collect();
        chosen.push(x);
        if extend(universe, sets, last_hit, k, i + 1, &rest, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A partition into cliques of a compatibility relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover {
    /// Cliques sorted by least member, members ascending.
    pub cliques: Vec<Vec<usize>>,
    /// False when the node count exceeded the exact-search limit and the
    /// greedy cover (an upper bound) was returned.
    pub exact: bool,
}

/// Minimum clique cover of nodes `0..n` under the symmetric relation
/// `compatible`. Exact branch and bound up to `exact_limit` nodes.
pub fn min_clique_cover(
    n: usize,
    compatible: impl Fn(usize, usize) -> bool,
    exact_limit: usize,
) -> CliqueCover {
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || compatible(i, j)).collect())
        .collect();
    let greedy = greedy_cover(&adj);
    if n > exact_limit {
        return CliqueCover {
            cliques: canonical(greedy),
            exact: false,
        };
    }
    let mut best = greedy;
    let mut current: Vec<Vec<usize>> = Vec::new();
    branch(&adj, 0, &mut current, &mut best);
    CliqueCover {
        cliques: canonical(best),
        exact: true,
    }
}

fn greedy_cover(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for v in 0..adj.len() {
        match cliques.iter_mut().find(|c| c.iter().all(|&u| adj[u][v])) {
            Some(c) => c.push(v),
            None => cliques.push(vec![v]),
        }
    }
    cliques
}

fn branch(adj: &[Vec<bool>], v: usize, current: &mut Vec<Vec<usize>>, best: &mut Vec<Vec<usize>>) {
    if current.len() >= best.len() {
        return;
    }
    if v == adj.len() {
        *best = current.clone();
        return;
    }
    for i in 0..current.len() {
        if current[i].iter().all(|&u| adj[u][v]) {
            current[i].push(v);
            branch(adj, v + 1, current, best);
            current[i].pop();
        }
    }
    current.push(vec![v]);
    branch(adj, v + 1, current, best);
    current.pop();
}

fn canonical(mut cliques: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort();
    cliques
}
