//! The periodic fiber graph of a label cycle, optionally unrolled to a
//! multiple of its length.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::shift::SystemBundle;

/// Which vertices survive trimming.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trim {
    /// Vertices on some bi-infinite path.
    Both,
    /// Vertices with an infinite past (a left-infinite path ends there).
    Past,
    /// Vertices with an infinite future.
    Future,
}

/// Vertices are pairs `(residue, symbol)` with the symbol labeled by the
/// cycle letter at that residue; edges step the residue by one modulo the
/// period. Vertex ids are `residue * n_symbols + symbol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberGraph {
    word: Vec<usize>,
    period: usize,
    n: usize,
    alive: Vec<bool>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl FiberGraph {
    /// Fiber graph of `u` with period `|u|`, trimmed on both sides.
    pub fn periodic(bundle: &SystemBundle, u: &[usize]) -> Self {
        Self::build(bundle, u, u.len(), Trim::Both)
    }

    /// Fiber graph of `u` unrolled to period `q` (a multiple of `|u|`).
    pub fn build(bundle: &SystemBundle, u: &[usize], q: usize, trim: Trim) -> Self {
        assert!(!u.is_empty() && q % u.len() == 0, "period must be a multiple of |u|");
        let n = bundle.n_symbols();
        let p = u.len();
        let total = q * n;
        let mut alive: Vec<bool> = (0..total)
            .map(|v| bundle.label(v % n) == u[(v / n) % p])
            .collect();
        let mut succ = vec![Vec::new(); total];
        let mut pred = vec![Vec::new(); total];
        for i in 0..q {
            let j = (i + 1) % q;
            for a in 0..n {
                if !alive[i * n + a] {
                    continue;
                }
                for &b in bundle.sft().successors(a) {
                    if alive[j * n + b] {
                        succ[i * n + a].push(j * n + b);
                        pred[j * n + b].push(i * n + a);
                    }
                }
            }
        }

        let mut out_deg: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut in_deg: Vec<usize> = pred.iter().map(Vec::len).collect();
        let kill_sinks = trim != Trim::Past;
        let kill_sources = trim != Trim::Future;
        let mut queue: Vec<usize> = (0..total)
            .filter(|&v| alive[v] && ((kill_sinks && out_deg[v] == 0) || (kill_sources && in_deg[v] == 0)))
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &succ[v] {
                if alive[w] {
                    in_deg[w] -= 1;
                    if kill_sources && in_deg[w] == 0 {
                        queue.push(w);
                    }
                }
            }
            for &w in &pred[v] {
                if alive[w] {
                    out_deg[w] -= 1;
                    if kill_sinks && out_deg[w] == 0 {
                        queue.push(w);
                    }
                }
            }
        }
        for v in 0..total {
            if alive[v] {
                succ[v].retain(|&w| alive[w]);
                pred[v].retain(|&w| alive[w]);
            } else {
                succ[v].clear();
                pred[v].clear();
            }
        }
        FiberGraph {
            word: u.to_vec(),
            period: q,
            n,
            alive,
            succ,
            pred,
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Unrolled period `q`.
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn n_symbols(&self) -> usize {
        self.n
    }

    pub fn id(&self, residue: usize, symbol: usize) -> usize {
        residue * self.n + symbol
    }

    pub fn residue(&self, v: usize) -> usize {
        v / self.n
    }

    pub fn symbol(&self, v: usize) -> usize {
        v % self.n
    }

    pub fn contains(&self, residue: usize, symbol: usize) -> bool {
        residue < self.period && symbol < self.n && self.alive[self.id(residue, symbol)]
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn is_empty(&self) -> bool {
        !self.alive.iter().any(|&x| x)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(|&v| self.alive[v])
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&x| x).count()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    /// Adjacency over all ids (dead vertices have no edges).
    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn reverse_adjacency(&self) -> &[Vec<usize>] {
        &self.pred
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.succ[v].contains(&w)
    }

    /// Symbols alive at a residue.
    pub fn symbols_at(&self, residue: usize) -> BitSet {
        BitSet::from_indices(
            self.n,
            (0..self.n).filter(|&a| self.alive[self.id(residue, a)]),
        )
    }

    /// Edges as `((residue, symbol), (residue, symbol))`, sorted.
    pub fn edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for v in self.vertices() {
            for &w in &self.succ[v] {
                out.push((
                    (self.residue(v), self.symbol(v)),
                    (self.residue(w), self.symbol(w)),
                ));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn view(&self, bundle: &SystemBundle) -> FiberGraphView {
        let name = |s: usize| bundle.symbols().name(s).to_string();
        FiberGraphView {
            word: bundle.label_names(&self.word),
            period: self.period,
            vertices: self
                .vertices()
                .map(|v| (self.residue(v), name(self.symbol(v))))
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|((i, a), (j, b))| ((i, name(a)), (j, name(b))))
                .collect(),
        }
    }
}

/// Serializable rendering with symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberGraphView {
    pub word: Vec<String>,
    pub period: usize,
    pub vertices: Vec<(usize, String)>,
    pub edges: Vec<((usize, String), (usize, String))>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn edge_names(b: &SystemBundle, g: &FiberGraph) -> Vec<String> {
        g.edges()
            .iter()
            .map(|((_, a), (_, c))| format!("{}{}", b.symbols().name(*a), b.symbols().name(*c)))
            .collect()
    }

    #[test]
    fn fig1_a() {
        let b = fixtures::fig1();
        let g = FiberGraph::periodic(&b, &b.parse_label_word("a").unwrap());
        assert_eq!(g.symbols_at(0).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(
            edge_names(&b, &g),
            ["ee", "ef", "fg", "fh", "gg", "gh", "hg", "hh"]
        );
    }

    #[test]
    fn fig2_cycles() {
        let b = fixtures::fig2();
        let g = FiberGraph::periodic(&b, &b.parse_label_word("0").unwrap());
        assert_eq!(edge_names(&b, &g), ["fg", "gf"]);
        let g = FiberGraph::periodic(&b, &b.parse_label_word("1").unwrap());
        assert_eq!(edge_names(&b, &g), ["ee"]);
        let g = FiberGraph::periodic(&b, &b.parse_label_word("10").unwrap());
        assert!(g.is_empty());
    }

    #[test]
    fn one_sided_trims() {
        // over 3^inf, c and i have no 3-labeled predecessor
        let b = fixtures::fig3();
        let u = b.parse_label_word("3").unwrap();
        let both = FiberGraph::build(&b, &u, 1, Trim::Both);
        let past = FiberGraph::build(&b, &u, 1, Trim::Past);
        let fut = FiberGraph::build(&b, &u, 1, Trim::Future);
        assert_eq!(both.vertex_count(), 2);
        assert_eq!(past.vertex_count(), 2);
        assert_eq!(fut.vertex_count(), 4);
    }
}
