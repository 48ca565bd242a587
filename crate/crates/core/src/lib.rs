//! Transition classes of one-block factor maps on one-step shifts of finite
//! type, and diagnostics for the loss of the Gibbs property under pushforward
//! of Markov measures.
//!
//! The combinatorial layers ([`shift`], [`transition`], [`properties`]) work
//! on symbol indices and bit sets. The [`measure`] engine is generic over a
//! [`Scalar`] type; the aliases at the crate root fix it to `f64`.

pub mod bitset;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod measure;
pub mod oracle;
pub mod properties;
pub mod reproduce;
pub mod scalar;
pub mod search;
pub mod shift;
pub mod transition;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use shift::{Limits, RawSystem, SystemBundle, Target};
pub use transition::{Side, ClassReport};

/// Markov measure over `f64`.
pub type MarkovMeasure = measure::markov::MarkovMeasure<f64>;
/// Growth profile over `f64`.
pub type GrowthProfile = measure::growth::GrowthProfile<f64>;
/// Obstruction report over `f64`.
pub type ObstructionReport = measure::diagnose::ObstructionReport<f64>;
/// Perron data over `f64`.
pub type Perron = measure::perron::Perron<f64>;
