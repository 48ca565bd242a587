//! One-step shifts of finite type with one-block factor maps: validation,
//! languages, fibers and higher-block recoding.
//!
//! Symbols are opaque strings. Internally every symbol is an index into its
//! [`Alphabet`]; the alphabet order is canonical and every set-valued output
//! is sorted by it.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph;

/// Default cap on enumerated language sizes.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, s: &str) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Whether every symbol is a single character, so words can be written
    /// without separators.
    pub fn is_compact(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn render(&self, word: &[usize]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        word.iter()
            .map(|&i| self.symbols[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word: whitespace- or comma-separated tokens, or, for a
    /// single token that is not itself a symbol, one symbol per character.
    pub fn parse(&self, text: &str) -> Result<Vec<usize>> {
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            return Err(Error::EmptyWord);
        }
        if tokens.len() == 1 && self.index_of(tokens[0]).is_none() {
            return tokens[0]
                .chars()
                .map(|c| {
                    self.index_of(&c.to_string())
                        .ok_or_else(|| Error::UnknownSymbol(tokens[0].to_string()))
                })
                .collect();
        }
        tokens
            .iter()
            .map(|t| self.index_of(t).ok_or_else(|| Error::UnknownSymbol(t.to_string())))
            .collect()
    }
}

/// A one-step shift of finite type given by its allowed 2-blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    allowed: Vec<Vec<bool>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Sft {
    /// Builds the shift without trimming. `allowed` must be square.
    pub fn new(alphabet: Alphabet, allowed: Vec<Vec<bool>>) -> Self {
        let n = alphabet.len();
        assert_eq!(allowed.len(), n);
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if allowed[a][b] {
                    succ[a].push(b);
                    pred[b].push(a);
                }
            }
        }
        Sft {
            alphabet,
            allowed,
            succ,
            pred,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    pub fn allowed_matrix(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    pub fn predecessors(&self, a: usize) -> &[usize] {
        &self.pred[a]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// A word is in the language iff each of its 2-blocks is allowed.
    pub fn is_word(&self, w: &[usize]) -> bool {
        !w.is_empty() && w.windows(2).all(|p| self.allowed[p[0]][p[1]])
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }
}

/// A one-block map from the symbols of an SFT onto label symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorMap {
    labels: Alphabet,
    label_of: Vec<usize>,
}

impl FactorMap {
    pub fn labels(&self) -> &Alphabet {
        &self.labels
    }

    pub fn label(&self, a: usize) -> usize {
        self.label_of[a]
    }

    pub fn apply(&self, w: &[usize]) -> Vec<usize> {
        w.iter().map(|&a| self.label_of[a]).collect()
    }
}

/// Input description of a system, as stored in the system JSON files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSystem {
    pub alphabet: Vec<String>,
    pub allowed: Vec<(String, String)>,
    pub labels: BTreeMap<String, String>,
}

impl RawSystem {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A validated SFT together with its labeling: the universe of every
/// analysis. The image shift exists only as the image of the labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemBundle {
    sft: Sft,
    map: FactorMap,
    trimmed: Vec<String>,
}

impl SystemBundle {
    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn map(&self) -> &FactorMap {
        &self.map
    }

    pub fn symbols(&self) -> &Alphabet {
        self.sft.alphabet()
    }

    pub fn labels(&self) -> &Alphabet {
        self.map.labels()
    }

    pub fn n_symbols(&self) -> usize {
        self.sft.len()
    }

    pub fn n_labels(&self) -> usize {
        self.map.labels.len()
    }

    pub fn label(&self, a: usize) -> usize {
        self.map.label(a)
    }

    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.sft.allowed(a, b)
    }

    /// Symbols removed by essentiality trimming, in input order.
    pub fn trimmed(&self) -> &[String] {
        &self.trimmed
    }

    pub fn symbols_with_label(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_symbols()).filter(move |&a| self.map.label_of[a] == l)
    }

    pub fn label_set(&self, l: usize) -> BitSet {
        BitSet::from_indices(self.n_symbols(), self.symbols_with_label(l))
    }

    pub fn parse_domain_word(&self, text: &str) -> Result<Vec<usize>> {
        self.symbols().parse(text)
    }

    pub fn parse_label_word(&self, text: &str) -> Result<Vec<usize>> {
        self.labels().parse(text)
    }

    pub fn show_domain(&self, w: &[usize]) -> String {
        self.symbols().render(w)
    }

    pub fn show_label(&self, w: &[usize]) -> String {
        self.labels().render(w)
    }

    pub fn domain_names(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&a| self.symbols().name(a).to_string()).collect()
    }

    pub fn label_names(&self, w: &[usize]) -> Vec<String> {
        w.iter().map(|&a| self.labels().name(a).to_string()).collect()
    }

    pub fn to_raw(&self) -> RawSystem {
        let names = self.symbols();
        let mut allowed = Vec::new();
        for a in 0..self.n_symbols() {
            for &b in self.sft.successors(a) {
                allowed.push((names.name(a).to_string(), names.name(b).to_string()));
            }
        }
        RawSystem {
            alphabet: names.symbols().to_vec(),
            allowed,
            labels: (0..self.n_symbols())
                .map(|a| {
                    (
                        names.name(a).to_string(),
                        self.labels().name(self.label(a)).to_string(),
                    )
                })
                .collect(),
        }
    }

    /// Identity labeling of an SFT (every symbol is its own label).
    pub fn identity(sft: Sft) -> Self {
        let labels = sft.alphabet().clone();
        let label_of = (0..sft.len()).collect();
        SystemBundle {
            sft,
            map: FactorMap { labels, label_of },
            trimmed: Vec::new(),
        }
    }
}

/// Validates a system description. Symbols without an allowed successor or
/// predecessor are deleted repeatedly until the shift is essential; the
/// deletions are reported through [`SystemBundle::trimmed`].
pub fn validate_system(raw: &RawSystem) -> Result<SystemBundle> {
    let full = Alphabet::new(raw.alphabet.iter().cloned())?;
    let n = full.len();
    let mut allowed = vec![vec![false; n]; n];
    for (a, b) in &raw.allowed {
        let ia = full
            .index_of(a)
            .ok_or_else(|| Error::UnknownSymbolInRelation(a.clone()))?;
        let ib = full
            .index_of(b)
            .ok_or_else(|| Error::UnknownSymbolInRelation(b.clone()))?;
        allowed[ia][ib] = true;
    }
    for k in raw.labels.keys() {
        if full.index_of(k).is_none() {
            return Err(Error::UnknownSymbol(k.clone()));
        }
    }
    let mut labels_of = Vec::with_capacity(n);
    for s in full.symbols() {
        let l = raw
            .labels
            .get(s)
            .ok_or_else(|| Error::MissingLabel(s.clone()))?;
        labels_of.push(l.clone());
    }

    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let has_succ = (0..n).any(|b| alive[b] && allowed[a][b]);
            let has_pred = (0..n).any(|b| alive[b] && allowed[b][a]);
            if !has_succ || !has_pred {
                alive[a] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&a| alive[a]).collect();
    if keep.is_empty() {
        return Err(Error::EmptyAfterTrim);
    }
    let trimmed = (0..n)
        .filter(|&a| !alive[a])
        .map(|a| full.name(a).to_string())
        .collect();

    let alphabet = Alphabet::new(keep.iter().map(|&a| full.name(a).to_string()))?;
    let allowed: Vec<Vec<bool>> = keep
        .iter()
        .map(|&a| keep.iter().map(|&b| allowed[a][b]).collect())
        .collect();

    let mut label_names: Vec<String> = keep.iter().map(|&a| labels_of[a].clone()).collect();
    label_names.sort();
    label_names.dedup();
    let labels = Alphabet::new(label_names)?;
    let label_of = keep
        .iter()
        .map(|&a| labels.index_of(&labels_of[a]).expect("label collected above"))
        .collect();

    Ok(SystemBundle {
        sft: Sft::new(alphabet, allowed),
        map: FactorMap { labels, label_of },
        trimmed,
    })
}

pub fn load_system(json: &str) -> Result<SystemBundle> {
    validate_system(&RawSystem::from_json(json)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixingWitness {
    /// Smallest power of the transition matrix that is entrywise positive.
    Exponent { exponent: usize },
    /// No path of the Wielandt-bound length from `from` to `to`.
    Gap { from: String, to: String },
}

/// Primitivity of the allowed relation.
pub fn is_mixing(sft: &Sft) -> (bool, MixingWitness) {
    match graph::primitive_exponent(sft.allowed_matrix()) {
        Ok(k) => (true, MixingWitness::Exponent { exponent: k }),
        Err((a, b)) => (
            false,
            MixingWitness::Gap {
                from: sft.alphabet().name(a).to_string(),
                to: sft.alphabet().name(b).to_string(),
            },
        ),
    }
}

/// Result of recoding a system by its k-blocks.
#[derive(Debug, Clone)]
pub struct Recoded {
    pub bundle: SystemBundle,
    /// New symbol name -> the original k-block it stands for.
    pub dictionary: BTreeMap<String, Vec<String>>,
}

/// Higher-block presentation: symbols are the allowed k-blocks, two blocks
/// may follow each other iff they overlap in k-1 symbols, and each block is
/// labeled by the label of its first symbol.
pub fn higher_block_recode(bundle: &SystemBundle, k: usize, limits: &Limits) -> Result<Recoded> {
    if k == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    let blocks = domain_blocks(bundle, k, limits)?;
    let sep = if bundle.symbols().is_compact() { "" } else { "." };
    let names: Vec<String> = blocks
        .iter()
        .map(|b| bundle.domain_names(b).join(sep))
        .collect();
    let position: HashMap<&[usize], usize> =
        blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();

    let mut allowed = Vec::new();
    for b in &blocks {
        let last = *b.last().expect("k >= 1");
        for &c in bundle.sft().successors(last) {
            let mut next: Vec<usize> = b[1..].to_vec();
            next.push(c);
            if let Some(&j) = position.get(next.as_slice()) {
                let i = position[b.as_slice()];
                allowed.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let raw = RawSystem {
        alphabet: names.clone(),
        allowed,
        labels: blocks
            .iter()
            .zip(&names)
            .map(|(b, n)| (n.clone(), bundle.labels().name(bundle.label(b[0])).to_string()))
            .collect(),
    };
    let recoded = validate_system(&raw)?;
    let dictionary = blocks
        .iter()
        .zip(names)
        .map(|(b, n)| (n, bundle.domain_names(b)))
        .collect();
    Ok(Recoded {
        bundle: recoded,
        dictionary,
    })
}

/// Enumeration guard shared by the language operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub size_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

impl Limits {
    pub fn with_cap(size_cap: usize) -> Self {
        Limits { size_cap }
    }

    fn check(&self, count: u128) -> Result<()> {
        if count > self.size_cap as u128 {
            Err(Error::SizeGuard {
                count,
                cap: self.size_cap,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Domain,
    Image,
}

/// Number of allowed paths of length `n` (saturating).
pub fn count_domain_blocks(bundle: &SystemBundle, n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    let sft = bundle.sft();
    let mut counts = vec![1u128; sft.len()];
    for _ in 1..n {
        let mut next = vec![0u128; sft.len()];
        for (a, &c) in counts.iter().enumerate() {
            for &b in sft.successors(a) {
                next[b] = next[b].saturating_add(c);
            }
        }
        counts = next;
    }
    counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
}

fn domain_blocks(bundle: &SystemBundle, n: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    limits.check(count_domain_blocks(bundle, n))?;
    let sft = bundle.sft();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    fn extend(sft: &Sft, n: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == n {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("nonempty");
        for &b in sft.successors(last) {
            path.push(b);
            extend(sft, n, path, out);
            path.pop();
        }
    }
    for a in 0..sft.len() {
        path.push(a);
        extend(sft, n, &mut path, &mut out);
        path.pop();
    }
    Ok(out)
}

fn image_blocks(bundle: &SystemBundle, n: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    // depth-first over label words, carrying the set of fiber end symbols
    let mut out = Vec::new();
    let nl = bundle.n_labels();
    let mut word = Vec::with_capacity(n);
    let mut stack: Vec<(BitSet, usize)> = Vec::new();
    for l in 0..nl {
        let ends = bundle.label_set(l);
        if ends.is_empty() {
            continue;
        }
        word.push(l);
        if n == 1 {
            out.push(word.clone());
        } else {
            stack.push((ends, 0));
            while let Some((ends, next_label)) = stack.pop() {
                if next_label >= nl {
                    word.pop();
                    continue;
                }
                stack.push((ends.clone(), next_label + 1));
                let step = step_forward(bundle, &ends, next_label);
                if step.is_empty() {
                    continue;
                }
                word.push(next_label);
                if word.len() == n {
                    out.push(word.clone());
                    limits.check(out.len() as u128)?;
                    word.pop();
                } else {
                    stack.push((step, 0));
                }
            }
            continue;
        }
        word.pop();
        limits.check(out.len() as u128)?;
    }
    Ok(out)
}

/// Symbols labeled `label` that follow some symbol of `from`.
pub fn step_forward(bundle: &SystemBundle, from: &BitSet, label: usize) -> BitSet {
    let mut out = BitSet::new(bundle.n_symbols());
    for a in from.iter() {
        for &b in bundle.sft().successors(a) {
            if bundle.label(b) == label {
                out.insert(b);
            }
        }
    }
    out
}

/// Symbols labeled `label` that precede some symbol of `to`.
pub fn step_backward(bundle: &SystemBundle, to: &BitSet, label: usize) -> BitSet {
    let mut out = BitSet::new(bundle.n_symbols());
    for b in to.iter() {
        for &a in bundle.sft().predecessors(b) {
            if bundle.label(a) == label {
                out.insert(a);
            }
        }
    }
    out
}

/// All words of length `n` of the domain (allowed paths) or of the image
/// (deduplicated labelings), sorted lexicographically by alphabet order.
pub fn blocks(
    bundle: &SystemBundle,
    n: usize,
    target: Target,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    let mut out = match target {
        Target::Domain => domain_blocks(bundle, n, limits)?,
        Target::Image => image_blocks(bundle, n, limits)?,
    };
    out.sort();
    Ok(out)
}

/// Whether the label word occurs in the image language.
pub fn in_image(bundle: &SystemBundle, w: &[usize]) -> bool {
    if w.is_empty() {
        return false;
    }
    let mut ends = bundle.label_set(w[0]);
    for &l in &w[1..] {
        if ends.is_empty() {
            return false;
        }
        ends = step_forward(bundle, &ends, l);
    }
    !ends.is_empty()
}

/// Per position, the symbols that lie on some path labeled `w`
/// (0-based positions).
pub fn fiber_layers(bundle: &SystemBundle, w: &[usize]) -> Vec<BitSet> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut fwd = Vec::with_capacity(n);
    fwd.push(bundle.label_set(w[0]));
    for i in 1..n {
        let next = step_forward(bundle, &fwd[i - 1], w[i]);
        fwd.push(next);
    }
    let mut layers = vec![BitSet::new(bundle.n_symbols()); n];
    layers[n - 1] = fwd[n - 1].clone();
    for i in (0..n - 1).rev() {
        let back = step_backward(bundle, &layers[i + 1], w[i]);
        layers[i] = back.intersection(&fwd[i]);
    }
    layers
}

/// The exact fiber of a label word, sorted. Enumerated by depth-first
/// extension restricted to symbols that can still complete the word.
pub fn fiber(bundle: &SystemBundle, w: &[usize], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let layers = fiber_layers(bundle, w);
    // count first so the guard fires before allocating
    let n = w.len();
    let mut counts = vec![0u128; bundle.n_symbols()];
    for a in layers[n - 1].iter() {
        counts[a] = 1;
    }
    for i in (0..n - 1).rev() {
        let mut next = vec![0u128; bundle.n_symbols()];
        for a in layers[i].iter() {
            next[a] = bundle
                .sft()
                .successors(a)
                .iter()
                .filter(|&&b| layers[i + 1].contains(b))
                .fold(0u128, |acc, &b| acc.saturating_add(counts[b]));
        }
        counts = next;
    }
    limits.check(counts.iter().fold(0u128, |a, &c| a.saturating_add(c)))?;

    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    fn extend(
        bundle: &SystemBundle,
        layers: &[BitSet],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = path.len();
        if i == layers.len() {
            out.push(path.clone());
            return;
        }
        let last = *path.last().expect("nonempty");
        for &b in bundle.sft().successors(last) {
            if layers[i].contains(b) {
                path.push(b);
                extend(bundle, layers, path, out);
                path.pop();
            }
        }
    }
    for a in layers[0].iter() {
        path.push(a);
        extend(bundle, &layers, &mut path, &mut out);
        path.pop();
    }
    out.sort();
    Ok(out)
}

/// A periodic point `u^inf`, stored by its least rotation; `phase` is the
/// offset of the original alignment within the stored cycle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PeriodicPoint {
    pub cycle: Vec<usize>,
    pub phase: usize,
}

impl PeriodicPoint {
    pub fn new(u: &[usize]) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::EmptyWord);
        }
        let p = u.len();
        let best = (0..p)
            .min_by(|&i, &j| {
                let ri = u[i..].iter().chain(&u[..i]);
                let rj = u[j..].iter().chain(&u[..j]);
                ri.cmp(rj)
            })
            .expect("nonempty");
        let cycle: Vec<usize> = u[best..].iter().chain(&u[..best]).copied().collect();
        Ok(PeriodicPoint {
            cycle,
            phase: (p - best) % p,
        })
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// The cycle in its original alignment.
    pub fn aligned(&self) -> Vec<usize> {
        let s = self.phase;
        self.cycle[s..].iter().chain(&self.cycle[..s]).copied().collect()
    }

    /// Smallest period of the point.
    pub fn smallest_period(&self) -> usize {
        let p = self.cycle.len();
        (1..=p)
            .find(|&d| p % d == 0 && (0..p).all(|i| self.cycle[i] == self.cycle[(i + d) % p]))
            .expect("p itself works")
    }
}

/// Whether `u^inf` is a point of the image shift.
pub fn is_periodic_in_image(bundle: &SystemBundle, u: &[usize]) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(!crate::transition::fiber_graph::FiberGraph::periodic(bundle, u).is_empty())
}

/// Lyndon words (aperiodic least rotations) of length at most `max_len`
/// over `k` letters, in lexicographic order (Duval's generation).
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(b: &SystemBundle, ws: &[Vec<usize>], image: bool) -> Vec<String> {
        ws.iter()
            .map(|w| if image { b.show_label(w) } else { b.show_domain(w) })
            .collect()
    }

    #[test]
    fn fig1_validates() {
        let b = fixtures::fig1();
        assert_eq!(b.n_symbols(), 5);
        assert_eq!(b.sft().edge_count(), 13);
        assert!(b.trimmed().is_empty());
    }

    #[test]
    fn fixed_point_shift() {
        let raw = RawSystem {
            alphabet: vec!["a".into()],
            allowed: vec![("a".into(), "a".into())],
            labels: [("a".to_string(), "0".to_string())].into(),
        };
        let b = validate_system(&raw).unwrap();
        assert_eq!(b.n_symbols(), 1);
        assert_eq!(is_mixing(b.sft()), (true, MixingWitness::Exponent { exponent: 1 }));
    }

    #[test]
    fn trimming_to_nothing() {
        let raw = RawSystem {
            alphabet: vec!["a".into(), "b".into()],
            allowed: vec![("a".into(), "b".into())],
            labels: [("a".to_string(), "0".to_string()), ("b".to_string(), "0".to_string())].into(),
        };
        assert_eq!(validate_system(&raw), Err(Error::EmptyAfterTrim));
    }

    #[test]
    fn trimming_reports_stranded_symbols() {
        let raw = RawSystem {
            alphabet: vec!["a".into(), "b".into(), "c".into()],
            allowed: vec![("a".into(), "a".into()), ("b".into(), "a".into()), ("c".into(), "b".into())],
            labels: [("a", "0"), ("b", "0"), ("c", "1")]
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        let b = validate_system(&raw).unwrap();
        assert_eq!(b.trimmed(), &["b".to_string(), "c".to_string()]);
        assert_eq!(b.n_labels(), 1);
    }

    #[test]
    fn validation_errors() {
        let mut raw = RawSystem {
            alphabet: vec!["a".into(), "a".into()],
            allowed: vec![],
            labels: BTreeMap::new(),
        };
        assert_eq!(validate_system(&raw), Err(Error::DuplicateSymbol("a".into())));
        raw.alphabet = vec!["a".into()];
        raw.allowed = vec![("a".into(), "z".into())];
        assert_eq!(
            validate_system(&raw),
            Err(Error::UnknownSymbolInRelation("z".into()))
        );
        raw.allowed = vec![("a".into(), "a".into())];
        assert_eq!(validate_system(&raw), Err(Error::MissingLabel("a".into())));
    }

    #[test]
    fn mixing_examples() {
        assert!(is_mixing(fixtures::fig2().sft()).0);
        let raw = RawSystem {
            alphabet: vec!["a".into(), "b".into()],
            allowed: vec![("a".into(), "b".into()), ("b".into(), "a".into())],
            labels: [("a".to_string(), "0".to_string()), ("b".to_string(), "0".to_string())].into(),
        };
        let (mixing, witness) = is_mixing(validate_system(&raw).unwrap().sft());
        assert!(!mixing);
        assert!(matches!(witness, MixingWitness::Gap { .. }));
    }

    #[test]
    fn recode_fig2() {
        let b = fixtures::fig2();
        let r1 = higher_block_recode(&b, 1, &Limits::default()).unwrap();
        assert_eq!(r1.bundle.n_symbols(), 3);
        assert_eq!(r1.bundle.sft().edge_count(), b.sft().edge_count());
        let r2 = higher_block_recode(&b, 2, &Limits::default()).unwrap();
        assert_eq!(r2.bundle.symbols().symbols(), &["ee", "ef", "fg", "ge", "gf"]);
        assert_eq!(r2.dictionary["fg"], vec!["f".to_string(), "g".to_string()]);
        assert_eq!(r2.bundle.labels().name(r2.bundle.label(2)), "0");
    }

    #[test]
    fn recode_fixed_point() {
        let b = SystemBundle::identity(Sft::new(
            Alphabet::new(["a"]).unwrap(),
            vec![vec![true]],
        ));
        let r = higher_block_recode(&b, 3, &Limits::default()).unwrap();
        assert_eq!(r.bundle.n_symbols(), 1);
        assert_eq!(r.bundle.symbols().name(0), "aaa");
    }

    #[test]
    fn block_examples() {
        let f2 = fixtures::fig2();
        let img = blocks(&f2, 2, Target::Image, &Limits::default()).unwrap();
        assert_eq!(names(&f2, &img, true), ["00", "01", "10", "11"]);
        let f1 = fixtures::fig1();
        let img = blocks(&f1, 1, Target::Image, &Limits::default()).unwrap();
        assert_eq!(names(&f1, &img, true), ["a", "b"]);
        let one = SystemBundle::identity(Sft::new(Alphabet::new(["a"]).unwrap(), vec![vec![true]]));
        let dom = blocks(&one, 4, Target::Domain, &Limits::default()).unwrap();
        assert_eq!(names(&one, &dom, false), ["aaaa"]);
    }

    #[test]
    fn size_guard() {
        let f1 = fixtures::fig1();
        let err = blocks(&f1, 12, Target::Domain, &Limits::with_cap(100)).unwrap_err();
        assert!(matches!(err, Error::SizeGuard { .. }));
        let aa = f1.parse_label_word("aaaaaaaaaaaa").unwrap();
        assert!(matches!(fiber(&f1, &aa, &Limits::with_cap(10)), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn fiber_examples() {
        let f1 = fixtures::fig1();
        let lim = Limits::default();
        let show = |w: &str| {
            let w = f1.parse_label_word(w).unwrap();
            names(&f1, &fiber(&f1, &w, &lim).unwrap(), false)
        };
        assert_eq!(show("b"), ["i"]);
        assert_eq!(show("aa"), ["ee", "ef", "fg", "fh", "gg", "gh", "hg", "hh"]);
        assert_eq!(show("bab"), ["ifi"]);
        assert!(show("bb").is_empty());
    }

    #[test]
    fn periodic_membership() {
        let f1 = fixtures::fig1();
        let f2 = fixtures::fig2();
        assert!(is_periodic_in_image(&f1, &f1.parse_label_word("a").unwrap()).unwrap());
        assert!(is_periodic_in_image(&f2, &f2.parse_label_word("0").unwrap()).unwrap());
        assert!(!is_periodic_in_image(&f2, &f2.parse_label_word("10").unwrap()).unwrap());
        let w = f2.parse_label_word("101").unwrap();
        assert!(fiber(&f2, &w, &Limits::default()).unwrap().is_empty());
    }

    #[test]
    fn periodic_point_rotation() {
        let p = PeriodicPoint::new(&[2, 0, 1]).unwrap();
        assert_eq!(p.cycle, vec![0, 1, 2]);
        assert_eq!(p.aligned(), vec![2, 0, 1]);
        assert_eq!(PeriodicPoint::new(&[1, 0, 1, 0]).unwrap().smallest_period(), 2);
    }

    #[test]
    fn lyndon_enumeration() {
        let ws = lyndon_words(2, 4);
        let s: Vec<String> = ws
            .iter()
            .map(|w| w.iter().map(|d| d.to_string()).collect())
            .collect();
        assert_eq!(s, ["0", "0001", "001", "0011", "01", "011", "0111", "1"]);
    }

    #[test]
    fn word_parsing() {
        let f4 = fixtures::fig4();
        assert_eq!(f4.parse_label_word("2 0 a 1 2").unwrap().len(), 5);
        assert_eq!(f4.parse_label_word("20a12").unwrap().len(), 5);
        let w = f4.parse_domain_word("0_I a_I 1_I").unwrap();
        assert_eq!(f4.show_domain(&w), "0_I a_I 1_I");
        assert!(f4.parse_label_word("z").is_err());
    }
}
