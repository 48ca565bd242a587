//! Small directed-graph routines on adjacency lists: strongly connected
//! components, cyclic periods, reachability and primitivity.

use std::collections::VecDeque;

/// Strongly connected components (Kosaraju, iterative). Components are
/// returned in topological order of the condensation (sources first), each
/// sorted ascending.
pub fn scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (u, vs) in adj.iter().enumerate() {
        for &v in vs {
            radj[v].push(u);
        }
    }

    // first pass: finishing order
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < adj[u].len() {
                stack.push((u, i + 1));
                let v = adj[u][i];
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
            }
        }
    }

    let mut comp = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &radj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// A component is nontrivial when it carries a cycle.
pub fn is_nontrivial(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

/// Cyclic period (gcd of cycle lengths) of a nontrivial strongly connected
/// component.
pub fn cyclic_period(adj: &[Vec<usize>], comp: &[usize]) -> usize {
    let n = adj.len();
    let mut inside = vec![false; n];
    for &v in comp {
        inside[v] = true;
    }
    let mut level = vec![usize::MAX; n];
    level[comp[0]] = 0;
    let mut queue = VecDeque::from([comp[0]]);
    let mut g = 0usize;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !inside[v] {
                continue;
            }
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                let diff = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, diff);
            }
        }
    }
    g
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Vertices reachable from `sources` (sources included).
pub fn reachable(adj: &[Vec<usize>], sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Smallest `k` with the k-th power of the 0/1 matrix entrywise positive,
/// searched up to the Wielandt bound `(n-1)^2 + 1`. On failure returns a
/// pair `(a, b)` with no path of length equal to the bound.
pub fn primitive_exponent(support: &[Vec<bool>]) -> Result<usize, (usize, usize)> {
    let n = support.len();
    if n == 0 {
        return Err((0, 0));
    }
    let bound = (n - 1) * (n - 1) + 1;
    let mut power: Vec<Vec<bool>> = support.to_vec();
    for k in 1..=bound {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return Ok(k);
        }
        if k == bound {
            break;
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for m in 0..n {
                if power[i][m] {
                    for j in 0..n {
                        if support[m][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        power = next;
    }
    for (i, row) in power.iter().enumerate() {
        if let Some(j) = row.iter().position(|&x| !x) {
            return Err((i, j));
        }
    }
    unreachable!("power became positive at the bound")
}
