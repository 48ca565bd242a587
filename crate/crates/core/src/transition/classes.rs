//! Transition classes over a periodic point of the image.
//!
//! Let `y = u^inf` and let `G_q` be the fiber graph of `u` unrolled to a
//! period `q` for which every strongly connected component is invariant
//! under the shift by `q`. Periodic preimages of `y` are exactly the closed
//! walks of `G_q`, so every one lies in a nontrivial component.
//!
//! Transitions between periodic preimages reduce to a single bridge: if `x`
//! and `x'` are `q`-periodic and some point agrees with `x` left of `m` and
//! with `x'` right of `n`, shifting it by multiples of `q` yields such a
//! point for every `m`. Hence `x -> x'` iff the component of `x` reaches the
//! component of `x'` in `G_q`, and the classes are the nontrivial
//! components themselves.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph;
use crate::shift::{PeriodicPoint, SystemBundle};
use crate::transition::fiber_graph::{FiberGraph, Trim};
use crate::transition::Side;

/// Default cap on the analysis period, as a multiple of `|u|`.
pub const DEFAULT_PHASE_CAP: usize = 64;

/// One class of periodic preimages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    /// The component's vertices as `(residue, symbol)`, sorted.
    pub vertices: Vec<(usize, usize)>,
    /// Smallest `s` (a multiple of `|u|`) with the class shift-invariant
    /// under `s`.
    pub period: usize,
    /// A shortest closed walk through the least residue-0 vertex; the
    /// preimage `rep^inf` aligned with residue 0 at position 0.
    pub representative: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub point: PeriodicPoint,
    /// The label cycle in the alignment used for residues.
    pub word: Vec<usize>,
    pub side: Side,
    pub analysis_period: usize,
    pub classes: Vec<Class>,
    /// Transitions between distinct classes, sorted.
    pub transitions: Vec<(usize, usize)>,
    /// Parallel to `transitions`.
    pub nonstop: Vec<bool>,
    /// `languages[c][i]`: symbols at residue `i` of points in class `c`.
    pub languages: Vec<Vec<BitSet>>,
    /// `marked[c][i]`: symbols at residue `i` whose reachable classes are
    /// exactly the destinations of `c`.
    pub marked: Vec<Vec<BitSet>>,
    /// `core[c][i]`: the marked symbols lying on bi-infinite marked paths.
    pub core: Vec<Vec<BitSet>>,
    graph: FiberGraph,
    comp_of: Vec<Option<usize>>,
    reach: Vec<BitSet>,
}

/// Analysis period: the lcm of the cyclic periods of the nontrivial
/// components of the `|u|`-periodic fiber graph.
pub fn analysis_period(bundle: &SystemBundle, u: &[usize], phase_cap: usize) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let g = FiberGraph::periodic(bundle, u);
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let adj = g.adjacency();
    let mut q = u.len();
    for comp in graph::scc(adj) {
        if !g.is_alive(comp[0]) || !graph::is_nontrivial(adj, &comp) {
            continue;
        }
        q = graph::lcm(q, graph::cyclic_period(adj, &comp));
        if q > phase_cap * u.len() {
            return Err(Error::PhaseCap {
                required: q,
                cap: phase_cap * u.len(),
            });
        }
    }
    Ok(q)
}

/// Classes over `u^inf` on the given side.
pub fn periodic_classes(
    bundle: &SystemBundle,
    u: &[usize],
    side: Side,
    phase_cap: usize,
) -> Result<ClassReport> {
    let q = analysis_period(bundle, u, phase_cap)?;
    let p = u.len();
    let g = FiberGraph::build(bundle, u, q, Trim::Both);
    let adj = g.adjacency();
    let total = adj.len();

    let mut comps: Vec<Vec<usize>> = graph::scc(adj)
        .into_iter()
        .filter(|c| g.is_alive(c[0]) && graph::is_nontrivial(adj, c))
        .collect();
    // every closed walk meets residue 0, so each component has such a vertex
    comps.sort_by_key(|c| c.iter().copied().filter(|&v| g.residue(v) == 0).min());
    let k = comps.len();

    let mut comp_of = vec![None; total];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = Some(ci);
        }
    }

    // reach[v]: classes reachable from v (right) or reaching v (left)
    let mut reach = vec![BitSet::new(k); total];
    for (ci, c) in comps.iter().enumerate() {
        let hit = match side {
            Side::Right => graph::reachable(g.reverse_adjacency(), c.iter().copied()),
            Side::Left => graph::reachable(g.adjacency(), c.iter().copied()),
        };
        for v in 0..total {
            if hit[v] && g.is_alive(v) {
                reach[v].insert(ci);
            }
        }
    }
    let dest: Vec<BitSet> = comps.iter().map(|c| reach[c[0]].clone()).collect();

    let mut transitions = Vec::new();
    for (ci, d) in dest.iter().enumerate() {
        for cj in d.iter() {
            if cj != ci {
                transitions.push((ci, cj));
            }
        }
    }
    let nonstop = transitions
        .iter()
        .map(|&(a, b)| {
            !(0..k).any(|c| c != a && c != b && (dest[a].contains(c) || dest[c].contains(b)))
        })
        .collect();

    let n = g.n_symbols();
    let mut languages = vec![vec![BitSet::new(n); q]; k];
    let mut marked = vec![vec![BitSet::new(n); q]; k];
    for v in g.vertices() {
        let (i, a) = (g.residue(v), g.symbol(v));
        for ci in reach[v].iter() {
            languages[ci][i].insert(a);
        }
        for ci in 0..k {
            if reach[v] == dest[ci] {
                marked[ci][i].insert(a);
            }
        }
    }
    let core = (0..k).map(|ci| trim_core(&g, &marked[ci])).collect();

    let classes = comps
        .iter()
        .map(|c| Class {
            vertices: c.iter().map(|&v| (g.residue(v), g.symbol(v))).collect::<Vec<_>>(),
            period: class_period(&g, c, p),
            representative: representative(&g, c),
        })
        .map(|mut c| {
            c.vertices.sort_unstable();
            c
        })
        .collect();

    Ok(ClassReport {
        point: PeriodicPoint::new(u)?,
        word: u.to_vec(),
        side,
        analysis_period: q,
        classes,
        transitions,
        nonstop,
        languages,
        marked,
        core,
        graph: g,
        comp_of,
        reach,
    })
}

fn class_period(g: &FiberGraph, comp: &[usize], p: usize) -> usize {
    let q = g.period();
    let members: std::collections::HashSet<usize> = comp.iter().copied().collect();
    (1..=q / p)
        .map(|m| m * p)
        .filter(|s| q % s == 0)
        .find(|&s| {
            comp.iter()
                .all(|&v| members.contains(&g.id((g.residue(v) + s) % q, g.symbol(v))))
        })
        .unwrap_or(q)
}

fn representative(g: &FiberGraph, comp: &[usize]) -> Vec<usize> {
    let start = comp
        .iter()
        .copied()
        .filter(|&v| g.residue(v) == 0)
        .min()
        .expect("component meets residue 0");
    let inside: std::collections::HashSet<usize> = comp.iter().copied().collect();
    let mut parent: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut queue = std::collections::VecDeque::from([start]);
    let mut closing = None;
    while let Some(v) = queue.pop_front() {
        for &w in g.successors(v) {
            if !inside.contains(&w) {
                continue;
            }
            if w == start {
                closing = Some(v);
                break;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert(v);
                queue.push_back(w);
            }
        }
        if closing.is_some() {
            break;
        }
    }
    let mut walk = vec![];
    let mut v = closing.expect("nontrivial component has a cycle");
    while v != start {
        walk.push(g.symbol(v));
        v = parent[&v];
    }
    walk.push(g.symbol(start));
    walk.reverse();
    walk
}

fn trim_core(g: &FiberGraph, marked: &[BitSet]) -> Vec<BitSet> {
    let n = g.n_symbols();
    let q = g.period();
    let mut alive: Vec<bool> = (0..q * n)
        .map(|v| g.is_alive(v) && marked[g.residue(v)].contains(g.symbol(v)))
        .collect();
    loop {
        let mut changed = false;
        for v in 0..alive.len() {
            if alive[v]
                && (!g.successors(v).iter().any(|&w| alive[w])
                    || !g.predecessors(v).iter().any(|&w| alive[w]))
            {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..q)
        .map(|i| BitSet::from_indices(n, (0..n).filter(|&a| alive[g.id(i, a)])))
        .collect()
}

/// Smallest index at which a periodic preimage is marked by its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MkIndex {
    /// Every position is marked.
    NegInfinity,
    /// Smallest marked position.
    At(i64),
}

impl ClassReport {
    pub fn graph(&self) -> &FiberGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Destination set of a class, the class itself included.
    pub fn destinations(&self, c: usize) -> Vec<usize> {
        let v = self.vertex_of(self.classes[c].vertices[0]);
        self.reach[v].to_vec()
    }

    fn vertex_of(&self, (i, a): (usize, usize)) -> usize {
        self.graph.id(i, a)
    }

    /// Classes reachable from (right) or reaching (left) a vertex.
    pub fn reach_of(&self, residue: usize, symbol: usize) -> Option<&BitSet> {
        self.graph
            .contains(residue, symbol)
            .then(|| &self.reach[self.graph.id(residue, symbol)])
    }

    /// Class of a vertex lying in one of the components.
    pub fn class_of_vertex(&self, residue: usize, symbol: usize) -> Option<usize> {
        self.comp_of[self.graph.id(residue, symbol)]
    }

    /// Class of the periodic preimage `x^inf` (aligned with residue 0 at
    /// position 0), if it is one.
    pub fn class_of(&self, x: &[usize]) -> Option<usize> {
        if x.is_empty() {
            return None;
        }
        let q = self.analysis_period;
        let span = graph::lcm(x.len(), q);
        let mut class = None;
        for j in 0..span {
            let (i, a) = (j % q, x[j % x.len()]);
            if !self.graph.contains(i, a) {
                return None;
            }
            let next = self.graph.id((j + 1) % q, x[(j + 1) % x.len()]);
            if !self.graph.has_edge(self.graph.id(i, a), next) {
                return None;
            }
            let c = self.comp_of[self.graph.id(i, a)];
            if c.is_none() || (class.is_some() && class != c) {
                return None;
            }
            class = c;
        }
        class
    }

    /// Smallest position at which `x^inf` is marked by its own class.
    pub fn mk_index(&self, x: &[usize]) -> Result<MkIndex> {
        let c = self
            .class_of(x)
            .ok_or_else(|| Error::NotAPreimage(format!("{x:?}")))?;
        let q = self.analysis_period;
        let span = graph::lcm(x.len(), q);
        if (0..span).any(|j| self.marked[c][j % q].contains(x[j % x.len()])) {
            // by periodicity, marked somewhere means marked arbitrarily far left
            Ok(MkIndex::NegInfinity)
        } else {
            Err(Error::MarkedNever)
        }
    }

    pub fn view(&self, bundle: &SystemBundle) -> ClassReportView {
        let names = |s: &BitSet| s.iter().map(|a| bundle.symbols().name(a).to_string()).collect();
        let mut alphabets = Vec::new();
        for c in 0..self.classes.len() {
            for i in 0..self.analysis_period {
                alphabets.push(ClassAlphabetView {
                    class: c,
                    residue: i,
                    language: names(&self.languages[c][i]),
                    marked: names(&self.marked[c][i]),
                    core: names(&self.core[c][i]),
                });
            }
        }
        ClassReportView {
            word: bundle.label_names(&self.word),
            side: self.side,
            analysis_period: self.analysis_period,
            classes: self
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| ClassView {
                    index: i,
                    period: c.period,
                    representative: bundle.domain_names(&c.representative),
                    cycle: format!("({})^inf", bundle.show_domain(&c.representative)),
                    vertices: c
                        .vertices
                        .iter()
                        .map(|&(r, a)| (r, bundle.symbols().name(a).to_string()))
                        .collect(),
                })
                .collect(),
            transitions: self
                .transitions
                .iter()
                .zip(&self.nonstop)
                .map(|(&(from, to), &nonstop)| TransitionView { from, to, nonstop })
                .collect(),
            class_alphabets: alphabets,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReportView {
    pub word: Vec<String>,
    pub side: Side,
    pub analysis_period: usize,
    pub classes: Vec<ClassView>,
    pub transitions: Vec<TransitionView>,
    pub class_alphabets: Vec<ClassAlphabetView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassView {
    pub index: usize,
    pub period: usize,
    pub representative: Vec<String>,
    pub cycle: String,
    pub vertices: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionView {
    pub from: usize,
    pub to: usize,
    pub nonstop: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassAlphabetView {
    pub class: usize,
    pub residue: usize,
    pub language: Vec<String>,
    pub marked: Vec<String>,
    pub core: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn report(b: &SystemBundle, u: &str, side: Side) -> ClassReport {
        periodic_classes(b, &b.parse_label_word(u).unwrap(), side, DEFAULT_PHASE_CAP).unwrap()
    }

    #[test]
    fn fig1_transition() {
        let b = fixtures::fig1();
        let r = report(&b, "a", Side::Right);
        assert_eq!(r.analysis_period, 1);
        assert_eq!(r.classes.len(), 2);
        assert_eq!(b.show_domain(&r.classes[0].representative), "e");
        assert_eq!(b.show_domain(&r.classes[1].representative), "g");
        assert_eq!(r.transitions, vec![(0, 1)]);
        assert_eq!(r.nonstop, vec![true]);
        assert!(r.classes.iter().all(|c| c.period == 1));
        // the language of the e-class is {e}; of the g/h class, {e,f,g,h}
        assert_eq!(r.languages[0][0].to_vec(), vec![0]);
        assert_eq!(r.languages[1][0].to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(r.core[0][0].to_vec(), vec![0]);
        assert_eq!(r.core[1][0].to_vec(), vec![2, 3]);
    }

    #[test]
    fn fig1_left_side_reverses_transitions() {
        let b = fixtures::fig1();
        let r = report(&b, "a", Side::Left);
        assert_eq!(r.transitions, vec![(1, 0)]);
    }

    #[test]
    fn fig2_period_two_classes() {
        let b = fixtures::fig2();
        let r = report(&b, "0", Side::Right);
        assert_eq!(r.analysis_period, 2);
        assert_eq!(r.classes.len(), 2);
        assert!(r.classes.iter().all(|c| c.period == 2));
        assert!(r.transitions.is_empty());
        assert_eq!(b.show_domain(&r.classes[0].representative), "fg");
        assert_eq!(b.show_domain(&r.classes[1].representative), "gf");
    }

    #[test]
    fn fig3_and_fig4_counts() {
        let b = fixtures::fig3();
        assert_eq!(report(&b, "3", Side::Right).classes.len(), 2);
        let b = fixtures::fig4();
        let r = report(&b, "a", Side::Right);
        assert_eq!(r.classes.len(), 2);
        assert!(r.transitions.is_empty());
    }

    #[test]
    fn mk_index_is_minus_infinity() {
        let b = fixtures::fig1();
        let r = report(&b, "a", Side::Right);
        for x in ["e", "g", "gh", "hhg"] {
            let x = b.parse_domain_word(x).unwrap();
            assert_eq!(r.mk_index(&x), Ok(MkIndex::NegInfinity));
        }
        let bad = b.parse_domain_word("ef").unwrap();
        assert!(matches!(r.mk_index(&bad), Err(Error::NotAPreimage(_))));
        let b2 = fixtures::fig2();
        let r2 = report(&b2, "0", Side::Right);
        assert_eq!(r2.mk_index(&b2.parse_domain_word("fg").unwrap()), Ok(MkIndex::NegInfinity));
        // gf aligned at residue 0 lies in the other class
        assert_eq!(r2.class_of(&b2.parse_domain_word("gf").unwrap()), Some(1));
    }

    #[test]
    fn empty_graph_and_phase_cap() {
        let b = fixtures::fig2();
        let u = b.parse_label_word("10").unwrap();
        assert_eq!(
            periodic_classes(&b, &u, Side::Right, 64).unwrap_err(),
            Error::EmptyGraph
        );
        let z = b.parse_label_word("0").unwrap();
        assert!(matches!(
            periodic_classes(&b, &z, Side::Right, 1),
            Err(Error::PhaseCap { required: 2, cap: 1 })
        ));
    }
}
