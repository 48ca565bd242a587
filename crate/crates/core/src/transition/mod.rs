//! Bridges, depth and tau-depth of words, fiber graphs of periodic points,
//! transition classes, marked symbols and bridge lengths.

pub mod bridge;
pub mod classes;
pub mod depth;
pub mod fiber_graph;

use serde::{Deserialize, Serialize};

pub use bridge::{bridge_stats, BridgeStats};
pub use classes::{periodic_classes, ClassReport, MkIndex, DEFAULT_PHASE_CAP};
pub use depth::{
    bridges, class_degree_estimate, depth, depth_certificate, tau_depth, Bridges, DegreeEstimate,
    DepthCertificate, DepthWitness, TauWitness,
};
pub use fiber_graph::{FiberGraph, Trim};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}
