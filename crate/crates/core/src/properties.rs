//! Map-level properties: eresolving, fiber-mixing, continuing, degree
//! constancy and the nearly fiber-mixing verdict.
//!
//! Checks that quantify over infinitely many points only scan periodic
//! points up to a period bound and words up to a length bound; those report
//! `UnknownAtHorizon` when neither a certificate nor a refutation appears.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph;
use crate::shift::{self, Limits, SystemBundle, Target};
use crate::transition::classes::{periodic_classes, ClassReport};
use crate::transition::depth::{self, DegreeEstimate};
use crate::transition::fiber_graph::{FiberGraph, Trim};
use crate::transition::Side;

pub const DEFAULT_PERIOD_BOUND: usize = 6;
pub const DEFAULT_WORD_BOUND: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    UnknownAtHorizon,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::UnknownAtHorizon => "unknown-at-horizon",
        }
    }

    /// Conjunction: fails dominates, then unknown.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Holds, Status::Holds) => Status::Holds,
            _ => Status::UnknownAtHorizon,
        }
    }
}

/// Bounds a verdict was computed under.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Horizon {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Every image 2-block and symbol was checked.
    ExhaustiveCheck { pairs_checked: usize },
    /// Image 2-blocks `ab` with a symbol over the fixed end that has no
    /// neighbor over the other letter, as `(ab, symbol)`.
    ExtensionFailures { failures: Vec<(String, String)> },
    /// All image words of this length have tau-depth 1.
    UniformTau { length: usize },
    /// A periodic point with more than one class.
    ManyClasses { point: String, side: Side, classes: usize },
    /// The deviation `delta` after (right) or before (left) the periodic
    /// point kills every preimage of one class but not of another.
    Deviation {
        point: String,
        residue: usize,
        delta: String,
        side: Side,
        emptied_class: usize,
        surviving_class: usize,
    },
    /// A class whose smallest period exceeds the point's.
    PeriodBlowUp { point: String, point_period: usize, class: usize, class_period: usize },
    /// A transition between distinct classes.
    Transition { point: String, from: usize, to: usize },
    /// Right eresolving, which suffices for right continuing (and mirrored).
    Eresolving { side: Side },
    /// The bound was exhausted.
    Exhausted { description: String },
    /// A conjunction, with the status of each part.
    SubVerdicts {
        bi_continuing: Status,
        period_preservation: Status,
        transition_free: Status,
        failed_by: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: String,
    pub status: Status,
    pub witness: Witness,
    pub horizon: Horizon,
}

impl PropertyVerdict {
    fn new(property: &str, status: Status, witness: Witness, horizon: Horizon) -> Self {
        PropertyVerdict {
            property: property.to_string(),
            status,
            witness,
            horizon,
        }
    }
}

/// Right: for every image 2-block `ab` and `e` over `a` there is `f` over
/// `b` with `ef` allowed. Left: mirrored.
pub fn eresolving_check(bundle: &SystemBundle, side: Side) -> Result<PropertyVerdict> {
    let two = shift::blocks(bundle, 2, Target::Image, &Limits::default())?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for ab in &two {
        let (fixed, free) = match side {
            Side::Right => (ab[0], ab[1]),
            Side::Left => (ab[1], ab[0]),
        };
        for e in bundle.symbols_with_label(fixed) {
            checked += 1;
            let ok = match side {
                Side::Right => bundle.sft().successors(e).iter().any(|&f| bundle.label(f) == free),
                Side::Left => bundle.sft().predecessors(e).iter().any(|&f| bundle.label(f) == free),
            };
            if !ok {
                failures.push((bundle.show_label(ab), bundle.symbols().name(e).to_string()));
            }
        }
    }
    let name = format!("{}-eresolving", side.as_str());
    Ok(if failures.is_empty() {
        PropertyVerdict::new(
            &name,
            Status::Holds,
            Witness::ExhaustiveCheck { pairs_checked: checked },
            Horizon::default(),
        )
    } else {
        PropertyVerdict::new(
            &name,
            Status::Fails,
            Witness::ExtensionFailures { failures },
            Horizon::default(),
        )
    })
}

/// Whether `w` is strictly below each of its proper rotations.
pub fn is_lyndon(w: &[usize]) -> bool {
    let n = w.len();
    n > 0
        && (1..n).all(|i| {
            let rot = w[i..].iter().chain(&w[..i]);
            w.iter().lt(rot)
        })
}

/// Periodic points of the image with least period at most `max_period`,
/// one per orbit, as Lyndon words ordered by length then lexicographically.
pub fn periodic_points(bundle: &SystemBundle, max_period: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for len in 1..=max_period {
        for w in shift::blocks(bundle, len, Target::Image, limits)? {
            if is_lyndon(&w) && !FiberGraph::periodic(bundle, &w).is_empty() {
                out.push(w);
            }
        }
    }
    Ok(out)
}

/// Holds when all image words of some length `n <= N` have tau-depth 1;
/// fails when a periodic point of period at most `N` has several right or
/// left classes.
pub fn fiber_mixing_certificate(
    bundle: &SystemBundle,
    horizon: usize,
    phase_cap: usize,
    limits: &Limits,
) -> Result<PropertyVerdict> {
    if horizon < 3 {
        return Err(Error::TooShort(horizon));
    }
    let h = Horizon {
        period_bound: Some(horizon),
        word_bound: Some(horizon),
    };
    for u in periodic_points(bundle, horizon, limits)? {
        let report = match periodic_classes(bundle, &u, Side::Right, phase_cap) {
            Ok(r) => r,
            Err(Error::PhaseCap { .. }) => continue,
            Err(e) => return Err(e),
        };
        // left classes are the same components, so one count serves both sides
        if report.classes.len() >= 2 {
            return Ok(PropertyVerdict::new(
                "fiber-mixing",
                Status::Fails,
                Witness::ManyClasses {
                    point: point_name(bundle, &u),
                    side: Side::Right,
                    classes: report.classes.len(),
                },
                h,
            ));
        }
    }
    if let Some(length) = uniform_tau_length(bundle, horizon, limits)? {
        return Ok(PropertyVerdict::new(
            "fiber-mixing",
            Status::Holds,
            Witness::UniformTau { length },
            h,
        ));
    }
    Ok(PropertyVerdict::new(
        "fiber-mixing",
        Status::UnknownAtHorizon,
        Witness::Exhausted {
            description: format!("periodic points up to period {horizon} and words up to length {horizon}"),
        },
        h,
    ))
}

/// Least `n` in `3..=horizon` such that every image word of length `n` has
/// tau-depth 1. Such an `n` certifies fiber-mixing.
pub fn uniform_tau_length(bundle: &SystemBundle, horizon: usize, limits: &Limits) -> Result<Option<usize>> {
    'lengths: for n in 3..=horizon {
        for w in shift::blocks(bundle, n, Target::Image, limits)? {
            if depth::tau_depth(bundle, &w)?.value != 1 {
                continue 'lengths;
            }
        }
        return Ok(Some(n));
    }
    Ok(None)
}

pub fn point_name(bundle: &SystemBundle, u: &[usize]) -> String {
    format!("({})^inf", bundle.show_label(u))
}

/// Class counts at one periodic point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub point: String,
    pub right: usize,
    pub left: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeBattery {
    pub entries: Vec<DegreeEntry>,
    /// Whether every scanned point has the same right and left counts.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuingReport {
    pub right: PropertyVerdict,
    pub left: PropertyVerdict,
    pub battery: DegreeBattery,
}

/// Right (left) continuing holds when the map is right (left) eresolving
/// and fails when some preimage class of a periodic point cannot follow a
/// deviation word that the other classes can follow.
pub fn continuing_diagnosis(
    bundle: &SystemBundle,
    period_bound: usize,
    deviation_bound: usize,
    phase_cap: usize,
    limits: &Limits,
) -> Result<ContinuingReport> {
    if period_bound == 0 {
        return Err(Error::InvalidArgument("period bound must be at least 1".into()));
    }
    let h = Horizon {
        period_bound: Some(period_bound),
        word_bound: Some(deviation_bound),
    };
    let points = periodic_points(bundle, period_bound, limits)?;
    let mut reports = Vec::new();
    for u in &points {
        let right = match periodic_classes(bundle, u, Side::Right, phase_cap) {
            Ok(r) => r,
            Err(Error::PhaseCap { .. }) => continue,
            Err(e) => return Err(e),
        };
        let left = periodic_classes(bundle, u, Side::Left, phase_cap)?;
        reports.push((u.clone(), right, left));
    }

    let mut uniform = None;
    let mut verdicts = Vec::new();
    for side in [Side::Right, Side::Left] {
        let name = format!("{}-continuing", side.as_str());
        let er = eresolving_check(bundle, side)?;
        if er.status == Status::Holds {
            verdicts.push(PropertyVerdict::new(&name, Status::Holds, Witness::Eresolving { side }, h));
            continue;
        }
        let mut found = None;
        for (u, report, _) in &reports {
            if let Some(w) = deviation_refutation(bundle, u, report, side, deviation_bound) {
                found = Some(w);
                break;
            }
        }
        if found.is_none() {
            // fiber-mixing maps are bi-continuing
            if uniform.is_none() {
                uniform = Some(uniform_tau_length(bundle, deviation_bound, limits)?);
            }
            if let Some(Some(length)) = uniform {
                verdicts.push(PropertyVerdict::new(&name, Status::Holds, Witness::UniformTau { length }, h));
                continue;
            }
        }
        verdicts.push(match found {
            Some(w) => PropertyVerdict::new(&name, Status::Fails, w, h),
            None => PropertyVerdict::new(
                &name,
                Status::UnknownAtHorizon,
                Witness::Exhausted {
                    description: format!(
                        "periodic points up to period {period_bound}, deviations up to length {deviation_bound}"
                    ),
                },
                h,
            ),
        });
    }
    let entries: Vec<DegreeEntry> = reports
        .iter()
        .map(|(u, r, l)| DegreeEntry {
            point: point_name(bundle, u),
            right: r.classes.len(),
            left: l.classes.len(),
        })
        .collect();
    let constant = entries
        .windows(2)
        .all(|p| p[0].right == p[1].right && p[0].left == p[1].left)
        && entries.iter().all(|e| e.right == e.left);
    let left = verdicts.pop().expect("two sides");
    let right = verdicts.pop().expect("two sides");
    Ok(ContinuingReport {
        right,
        left,
        battery: DegreeBattery { entries, constant },
    })
}

/// Breadth-first search over deviation words, tracking per class the set
/// of symbols that continue a preimage ray from that class.
fn deviation_refutation(
    bundle: &SystemBundle,
    u: &[usize],
    report: &ClassReport,
    side: Side,
    max_len: usize,
) -> Option<Witness> {
    let k = report.classes.len();
    if k < 2 {
        return None;
    }
    let q = report.analysis_period;
    let trim = match side {
        Side::Right => Trim::Past,
        Side::Left => Trim::Future,
    };
    let g = FiberGraph::build(bundle, u, q, trim);
    let n = bundle.n_symbols();
    let reach: Vec<Vec<bool>> = report
        .classes
        .iter()
        .map(|c| {
            let src = c.vertices.iter().map(|&(i, a)| g.id(i, a));
            match side {
                Side::Right => graph::reachable(g.adjacency(), src),
                Side::Left => graph::reachable(g.reverse_adjacency(), src),
            }
        })
        .collect();
    let nl = bundle.n_labels();
    for r in 0..q {
        // the ray ends at residue r - 1 (right) or starts at r + 1 (left)
        let anchor = match side {
            Side::Right => (r + q - 1) % q,
            Side::Left => (r + 1) % q,
        };
        let start: Vec<BitSet> = reach
            .iter()
            .map(|hit| BitSet::from_indices(n, (0..n).filter(|&a| hit[g.id(anchor, a)])))
            .collect();
        let mut seen: HashSet<Vec<BitSet>> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([(start, Vec::<usize>::new())]);
        while let Some((sets, delta)) = queue.pop_front() {
            if delta.len() == max_len {
                continue;
            }
            for b in 0..nl {
                let next: Vec<BitSet> = sets
                    .iter()
                    .map(|s| match side {
                        Side::Right => shift::step_forward(bundle, s, b),
                        Side::Left => shift::step_backward(bundle, s, b),
                    })
                    .collect();
                let emptied = next.iter().position(BitSet::is_empty);
                let surviving = next.iter().position(|s| !s.is_empty());
                let mut word = delta.clone();
                word.push(b);
                match (emptied, surviving) {
                    (Some(e), Some(s)) => {
                        if side == Side::Left {
                            word.reverse();
                        }
                        return Some(Witness::Deviation {
                            point: point_name(bundle, u),
                            residue: r,
                            delta: bundle.show_label(&word),
                            side,
                            emptied_class: e,
                            surviving_class: s,
                        });
                    }
                    (None, Some(_)) => {
                        if seen.insert(next.clone()) {
                            queue.push_back((next, word));
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearlyFiberMixingReport {
    pub verdict: PropertyVerdict,
    pub bi_continuing: Status,
    pub period_preservation: PropertyVerdict,
    pub transition_free: PropertyVerdict,
    pub continuing: ContinuingReport,
    /// Computed when the overall verdict holds; must then equal 1.
    pub degree: Option<DegreeEstimate>,
    /// Sub-verdicts that failed, in order.
    pub failed_by: Vec<String>,
}

/// Nearly fiber-mixing: bi-continuing, every class over a periodic point
/// keeps the point's period, and there are no transitions between distinct
/// classes, all at the given horizons.
pub fn nearly_fiber_mixing_verdict(
    bundle: &SystemBundle,
    period_bound: usize,
    word_bound: usize,
    phase_cap: usize,
    limits: &Limits,
) -> Result<NearlyFiberMixingReport> {
    let h = Horizon {
        period_bound: Some(period_bound),
        word_bound: Some(word_bound),
    };
    let continuing = continuing_diagnosis(bundle, period_bound, word_bound, phase_cap, limits)?;
    let bi = continuing.right.status.and(continuing.left.status);

    let mut blow_up = None;
    let mut transition = None;
    let mut skipped = 0;
    for u in periodic_points(bundle, period_bound, limits)? {
        let report = match periodic_classes(bundle, &u, Side::Right, phase_cap) {
            Ok(r) => r,
            Err(Error::PhaseCap { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if blow_up.is_none() {
            if let Some((i, c)) = report.classes.iter().enumerate().find(|(_, c)| c.period > u.len()) {
                blow_up = Some(Witness::PeriodBlowUp {
                    point: point_name(bundle, &u),
                    point_period: u.len(),
                    class: i,
                    class_period: c.period,
                });
            }
        }
        if transition.is_none() {
            if let Some(&(from, to)) = report.transitions.first() {
                transition = Some(Witness::Transition {
                    point: point_name(bundle, &u),
                    from,
                    to,
                });
            }
        }
    }
    let exhausted = |what: &str| Witness::Exhausted {
        description: format!(
            "{what} at periodic points up to period {period_bound} ({skipped} skipped at the phase cap)"
        ),
    };
    let open = if skipped > 0 { Status::UnknownAtHorizon } else { Status::Holds };
    let period_preservation = match blow_up {
        Some(w) => PropertyVerdict::new("period-preservation", Status::Fails, w, h),
        None => PropertyVerdict::new("period-preservation", open, exhausted("no period blow-up"), h),
    };
    let transition_free = match transition {
        Some(w) => PropertyVerdict::new("transition-free", Status::Fails, w, h),
        None => PropertyVerdict::new("transition-free", open, exhausted("no transitions"), h),
    };

    let status = bi.and(period_preservation.status).and(transition_free.status);
    let mut failed_by = Vec::new();
    if bi == Status::Fails {
        failed_by.push("bi-continuing".to_string());
    }
    if period_preservation.status == Status::Fails {
        failed_by.push("period-preservation".to_string());
    }
    if transition_free.status == Status::Fails {
        failed_by.push("transition-free".to_string());
    }
    let degree = if status == Status::Holds {
        Some(depth::class_degree_estimate(bundle, word_bound.max(3), limits)?)
    } else {
        None
    };
    let witness = Witness::SubVerdicts {
        bi_continuing: bi,
        period_preservation: period_preservation.status,
        transition_free: transition_free.status,
        failed_by: failed_by.clone(),
    };
    Ok(NearlyFiberMixingReport {
        verdict: PropertyVerdict::new("nearly-fiber-mixing", status, witness, h),
        bi_continuing: bi,
        period_preservation,
        transition_free,
        continuing,
        degree,
        failed_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::shift::{Alphabet, Sft};
    use crate::transition::classes::DEFAULT_PHASE_CAP;

    fn full_shift_identity(k: usize) -> SystemBundle {
        let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
        SystemBundle::identity(Sft::new(Alphabet::new(names).unwrap(), vec![vec![true; k]; k]))
    }

    #[test]
    fn eresolving_examples() {
        let f4 = fixtures::fig4();
        assert_eq!(eresolving_check(&f4, Side::Right).unwrap().status, Status::Holds);
        assert_eq!(eresolving_check(&f4, Side::Left).unwrap().status, Status::Holds);
        let f3 = fixtures::fig3();
        let v = eresolving_check(&f3, Side::Right).unwrap();
        assert_eq!(v.status, Status::Fails);
        let Witness::ExtensionFailures { failures } = v.witness else { panic!() };
        assert!(failures.contains(&("32".to_string(), "e".to_string())));
        let id = full_shift_identity(2);
        assert_eq!(eresolving_check(&id, Side::Right).unwrap().status, Status::Holds);
    }

    #[test]
    fn lyndon_test() {
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(!is_lyndon(&[0, 1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[1]));
    }

    #[test]
    fn fiber_mixing_examples() {
        let lim = Limits::default();
        let f4 = fixtures::fig4();
        let v = fiber_mixing_certificate(&f4, 6, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(
            v.witness,
            Witness::ManyClasses { point: "(a)^inf".into(), side: Side::Right, classes: 2 }
        );
        let f2 = fixtures::fig2();
        let v = fiber_mixing_certificate(&f2, 6, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert!(matches!(v.witness, Witness::ManyClasses { ref point, .. } if point == "(0)^inf"));
        let id = full_shift_identity(2);
        let v = fiber_mixing_certificate(&id, 3, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!((v.status, v.witness), (Status::Holds, Witness::UniformTau { length: 3 }));
    }

    #[test]
    fn continuing_examples() {
        let lim = Limits::default();
        let f3 = fixtures::fig3();
        let c = continuing_diagnosis(&f3, 4, 10, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(c.right.status, Status::Fails);
        assert_eq!(c.left.status, Status::Fails);
        let Witness::Deviation { ref delta, ref point, .. } = c.right.witness else { panic!() };
        // e has no 2-successor and f no 1-successor; the search finds "1" first
        assert_eq!((point.as_str(), delta.as_str()), ("(3)^inf", "1"));
        let f4 = fixtures::fig4();
        let c = continuing_diagnosis(&f4, 4, 10, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!((c.right.status, c.left.status), (Status::Holds, Status::Holds));
        let f1 = fixtures::fig1();
        let c = continuing_diagnosis(&f1, 4, 10, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert!(!c.battery.constant);
        let f2 = fixtures::fig2();
        let c = continuing_diagnosis(&f2, 4, 10, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(c.right.status, Status::Fails);
    }

    #[test]
    fn nearly_fiber_mixing_examples() {
        let lim = Limits::default();
        let f4 = fixtures::fig4();
        let r = nearly_fiber_mixing_verdict(&f4, 6, 6, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(r.verdict.status, Status::Holds);
        assert_eq!(r.degree.as_ref().unwrap().value, 1);
        let f1 = fixtures::fig1();
        let r = nearly_fiber_mixing_verdict(&f1, 6, 6, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(r.verdict.status, Status::Fails);
        assert_eq!(r.transition_free.status, Status::Fails);
        let f2 = fixtures::fig2();
        let r = nearly_fiber_mixing_verdict(&f2, 6, 6, DEFAULT_PHASE_CAP, &lim).unwrap();
        assert_eq!(r.period_preservation.status, Status::Fails);
    }
}
