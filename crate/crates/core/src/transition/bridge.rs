//! Lengths of single bridges between distinct right classes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::transition::classes::ClassReport;
use crate::transition::Side;

/// Positions along the bridged point `x|(-inf,m) v x'|(n,inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BridgeStats {
    /// Last position up to which the point agrees with `x` from `m` on.
    pub r_x: i64,
    /// Last position whose symbol can still continue into the class of `x`.
    pub r_class: i64,
    /// First position marked by the class of `x'`.
    pub mk: i64,
    /// `mk - r_class`.
    pub length: i64,
}

/// Statistics of the point following `x^inf` up to position `m - 1`, then
/// the word `v` on `[m, m + |v| - 1]`, then `x'^inf`. Both periodic
/// preimages are aligned with residue 0 at position 0.
pub fn bridge_stats(
    report: &ClassReport,
    x: &[usize],
    x2: &[usize],
    v: &[usize],
    m: i64,
) -> Result<BridgeStats> {
    if report.side != Side::Right {
        return Err(Error::InvalidBridge("bridge lengths are defined on the right side".into()));
    }
    let c1 = report
        .class_of(x)
        .ok_or_else(|| Error::NotAPreimage(format!("{x:?}")))?;
    let c2 = report
        .class_of(x2)
        .ok_or_else(|| Error::NotAPreimage(format!("{x2:?}")))?;
    if v.is_empty() {
        return Err(Error::InvalidBridge("empty middle word".into()));
    }
    if c1 == c2 {
        return Err(Error::InvalidBridge("both ends lie in the same class".into()));
    }
    let n = m + v.len() as i64 - 1;
    let at = |j: i64| -> usize {
        if j < m {
            x[j.rem_euclid(x.len() as i64) as usize]
        } else if j <= n {
            v[(j - m) as usize]
        } else {
            x2[j.rem_euclid(x2.len() as i64) as usize]
        }
    };
    let g = report.graph();
    let q = report.analysis_period as i64;
    let vertex = |j: i64| -> Option<usize> {
        let r = j.rem_euclid(q) as usize;
        g.contains(r, at(j)).then(|| g.id(r, at(j)))
    };
    for j in m - 1..=n {
        match (vertex(j), vertex(j + 1)) {
            (Some(a), Some(b)) if g.has_edge(a, b) => {}
            _ => {
                return Err(Error::InvalidBridge(format!(
                    "not a preimage of the periodic point at position {j}"
                )))
            }
        }
    }

    let span = graph::lcm(graph::lcm(x.len(), x2.len()), q as usize) as i64;
    let r_x = (m..=n + span)
        .find(|&j| at(j) != x[j.rem_euclid(x.len() as i64) as usize])
        .map(|j| j - 1)
        .ok_or_else(|| Error::InvalidBridge("point coincides with x".into()))?;

    let reach = |j: i64| {
        report
            .reach_of(j.rem_euclid(q) as usize, at(j))
            .expect("vertex checked above")
    };
    let r_class = (m - 1..=n)
        .rev()
        .find(|&j| reach(j).contains(c1))
        .expect("position m - 1 lies in the class of x");
    let dest2 = report.destinations(c2);
    let mk = (m - 1..=n + 1)
        .find(|&j| reach(j).to_vec() == dest2)
        .expect("position n + 1 lies in the class of x'");
    Ok(BridgeStats {
        r_x,
        r_class,
        mk,
        length: mk - r_class,
    })
}
