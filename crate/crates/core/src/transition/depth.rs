//! Bridges, depth and tau-depth of image words, and the class degree
//! estimate built from them.
//!
//! Everything here depends on fiber words only through their endpoint
//! symbols: a bridge from `u` to `w` exists iff some fiber path joins
//! `u|_1` to `w|_{|w|}`, and `u` is routable through `s` at `n` iff some
//! fiber path from `u|_1` to `u|_{|u|}` visits `s` at `n`. Computations
//! therefore run on layered reachability sets and occurring endpoint pairs.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::search;
use crate::shift::{self, Limits, SystemBundle, Target};

/// Exact clique-cover search is used up to this many endpoint pairs.
pub const EXACT_COVER_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bridges {
    pub forward: bool,
    pub backward: bool,
}

/// Whether bridges exist from `u` to `w` and from `w` to `u`.
pub fn bridges(bundle: &SystemBundle, u: &[usize], w: &[usize]) -> Result<Bridges> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch(u.len(), w.len()));
    }
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    for x in [u, w] {
        if !bundle.sft().is_word(x) {
            return Err(Error::NotAWord(bundle.show_domain(x)));
        }
    }
    let labels = bundle.map().apply(u);
    if labels != bundle.map().apply(w) {
        return Err(Error::LabelMismatch);
    }
    let reaches = |from: usize, to: usize| {
        let mut set = BitSet::from_indices(bundle.n_symbols(), [from]);
        for &l in &labels[1..] {
            set = shift::step_forward(bundle, &set, l);
        }
        set.contains(to)
    };
    let last = u.len() - 1;
    Ok(Bridges {
        forward: reaches(u[0], w[last]),
        backward: reaches(w[0], u[last]),
    })
}

/// Layered reachability inside the fiber of a word.
struct Layers {
    len: usize,
    /// Symbols on some fiber path, per position.
    occupied: Vec<BitSet>,
    /// `forward[a][i]`: symbols at `i` on fiber paths starting with `a`.
    forward: Vec<Vec<BitSet>>,
    /// `backward[b][i]`: symbols at `i` on fiber paths ending with `b`.
    backward: Vec<Vec<BitSet>>,
    /// Occurring endpoint pairs, sorted.
    pairs: Vec<(usize, usize)>,
}

impl Layers {
    fn new(bundle: &SystemBundle, w: &[usize]) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = bundle.n_symbols();
        let len = w.len();
        let occupied = shift::fiber_layers(bundle, w);
        if occupied[0].is_empty() {
            return Err(Error::EmptyFiber);
        }
        let mut forward = vec![Vec::new(); n];
        for a in occupied[0].iter() {
            let mut layers = vec![BitSet::from_indices(n, [a])];
            for i in 1..len {
                let next = shift::step_forward(bundle, &layers[i - 1], w[i]).intersection(&occupied[i]);
                layers.push(next);
            }
            forward[a] = layers;
        }
        let mut backward = vec![Vec::new(); n];
        for b in occupied[len - 1].iter() {
            let mut layers = vec![BitSet::new(n); len];
            layers[len - 1] = BitSet::from_indices(n, [b]);
            for i in (0..len - 1).rev() {
                layers[i] = shift::step_backward(bundle, &layers[i + 1], w[i]).intersection(&occupied[i]);
            }
            backward[b] = layers;
        }
        let mut pairs = Vec::new();
        for a in occupied[0].iter() {
            for b in forward[a][len - 1].iter() {
                pairs.push((a, b));
            }
        }
        Ok(Layers {
            len,
            occupied,
            forward,
            backward,
            pairs,
        })
    }

    fn connects(&self, a: usize, b: usize) -> bool {
        self.forward[a][self.len - 1].contains(b)
    }
}

/// Minimal routing set of a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthWitness {
    pub value: usize,
    /// Interior position, 1-based.
    pub position: usize,
    /// Routing symbols, ascending.
    pub set: Vec<usize>,
}

/// Minimal tangled partition of a word's fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauWitness {
    pub value: usize,
    /// Parts as lists of occurring endpoint pairs `(first, last)`; fiber
    /// words sharing endpoints always share a part.
    pub partition: Vec<Vec<(usize, usize)>>,
    /// False when the greedy cover was used; `value` is then an upper bound.
    pub exact: bool,
}

/// Depth of an image word of length at least 3. Ties are broken toward the
/// lexicographically least routing set, then the least position.
pub fn depth(bundle: &SystemBundle, w: &[usize]) -> Result<DepthWitness> {
    if w.len() < 3 {
        return Err(Error::TooShort(w.len()));
    }
    let layers = Layers::new(bundle, w)?;
    depth_from(&layers)
}

fn depth_from(layers: &Layers) -> Result<DepthWitness> {
    let per_position: Vec<(Vec<usize>, Vec<BitSet>)> = (1..layers.len - 1)
        .map(|n| {
            let sets = layers
                .pairs
                .iter()
                .map(|&(a, b)| layers.forward[a][n].intersection(&layers.backward[b][n]))
                .collect();
            (layers.occupied[n].to_vec(), sets)
        })
        .collect();
    let max_k = per_position.iter().map(|(u, _)| u.len()).max().unwrap_or(0);
    for k in 1..=max_k {
        let best = per_position
            .iter()
            .enumerate()
            .filter_map(|(i, (universe, sets))| {
                search::hitting_set_of_size(universe, sets, k).map(|m| (m, i + 2))
            })
            .min();
        if let Some((set, position)) = best {
            return Ok(DepthWitness {
                value: k,
                position,
                set,
            });
        }
    }
    unreachable!("the full symbol set at any interior position routes every fiber word")
}

/// Tau-depth: minimum number of parts in a partition of the fiber whose
/// parts are pairwise two-way bridged.
pub fn tau_depth(bundle: &SystemBundle, w: &[usize]) -> Result<TauWitness> {
    let layers = Layers::new(bundle, w)?;
    Ok(tau_from(&layers))
}

fn tau_from(layers: &Layers) -> TauWitness {
    let pairs = &layers.pairs;
    let cover = search::min_clique_cover(
        pairs.len(),
        |i, j| {
            let ((a, b), (c, d)) = (pairs[i], pairs[j]);
            layers.connects(a, d) && layers.connects(c, b)
        },
        EXACT_COVER_LIMIT,
    );
    TauWitness {
        value: cover.cliques.len(),
        partition: cover
            .cliques
            .iter()
            .map(|c| c.iter().map(|&i| pairs[i]).collect())
            .collect(),
        exact: cover.exact,
    }
}

/// Depth and tau-depth of one word with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepthCertificate {
    pub word: Vec<usize>,
    pub fiber_size: u128,
    /// Absent for words shorter than 3.
    pub depth: Option<DepthWitness>,
    pub tau: TauWitness,
}

pub fn depth_certificate(bundle: &SystemBundle, w: &[usize]) -> Result<DepthCertificate> {
    let layers = Layers::new(bundle, w)?;
    let depth = if w.len() >= 3 { Some(depth_from(&layers)?) } else { None };
    Ok(DepthCertificate {
        word: w.to_vec(),
        fiber_size: fiber_size(bundle, &layers, w),
        depth,
        tau: tau_from(&layers),
    })
}

fn fiber_size(bundle: &SystemBundle, layers: &Layers, w: &[usize]) -> u128 {
    let n = bundle.n_symbols();
    let mut counts = vec![0u128; n];
    for a in layers.occupied[0].iter() {
        counts[a] = 1;
    }
    for i in 1..w.len() {
        let mut next = vec![0u128; n];
        for a in layers.occupied[i - 1].iter() {
            for &b in bundle.sft().successors(a) {
                if layers.occupied[i].contains(b) {
                    next[b] = next[b].saturating_add(counts[a]);
                }
            }
        }
        counts = next;
    }
    counts.iter().fold(0, |s: u128, &c| s.saturating_add(c))
}

/// Class degree estimated over image words of lengths `3..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEstimate {
    /// Minimum tau-depth seen.
    pub value: usize,
    /// Shortest, then lexicographically least, word with tau-depth and
    /// depth both equal to `value` (or, failing that, with tau = value).
    pub witness: Vec<usize>,
    pub witness_depth: usize,
    /// The minimum was first reached at length at most `N - ceil(N/2)`.
    pub stabilized: bool,
    /// Per length, the least tau-depth among words of that length.
    pub history: Vec<(usize, usize)>,
    /// Whether every tau computation was exact.
    pub exact: bool,
}

pub fn class_degree_estimate(
    bundle: &SystemBundle,
    horizon: usize,
    limits: &Limits,
) -> Result<DegreeEstimate> {
    if horizon < 3 {
        return Err(Error::TooShort(horizon));
    }
    let mut best: Option<(usize, Vec<usize>, usize)> = None;
    let mut first_reached = 3;
    let mut history = Vec::new();
    let mut exact = true;
    for n in 3..=horizon {
        let mut level_min = usize::MAX;
        for w in shift::blocks(bundle, n, Target::Image, limits)? {
            let layers = Layers::new(bundle, &w)?;
            let tau = tau_from(&layers);
            exact &= tau.exact;
            level_min = level_min.min(tau.value);
            let current = best.as_ref().map(|b| b.0);
            let improves = current.is_none_or(|v| tau.value < v);
            let candidate = improves
                || (current == Some(tau.value) && best.as_ref().is_some_and(|b| b.2 != tau.value));
            if candidate {
                let d = depth_from(&layers)?.value;
                if improves {
                    first_reached = n;
                    best = Some((tau.value, w, d));
                } else if d == tau.value {
                    best = Some((tau.value, w, d));
                }
            }
        }
        history.push((n, level_min));
    }
    let (value, witness, witness_depth) = best.ok_or(Error::EmptyFiber)?;
    Ok(DegreeEstimate {
        value,
        witness,
        witness_depth,
        stabilized: first_reached <= horizon - horizon.div_ceil(2),
        history,
        exact,
    })
}
