//! Markov measures on the domain shift, exact pushforward cylinder
//! measures, class growth rates and the Gibbs-obstruction diagnostics.
//!
//! Cylinder arithmetic runs in log-space with a scaled forward pass so that
//! long periodic prefixes do not underflow.

pub mod diagnose;
pub mod growth;
pub mod linalg;
pub mod markov;
pub mod perron;
pub mod pushforward;
pub mod series;

pub use diagnose::{obstruction_diagnose, DiagnoseOptions, ObstructionReport, Verdict};
pub use growth::{class_matrix, growth_profile, row_family, tune_class_rate, ClassMatrix, GrowthProfile, Tuned};
pub use markov::{validate_markov, MarkovMeasure, RawMeasure};
pub use perron::{perron, Perron};
pub use pushforward::{log_cylinder, prefix_log_cylinders, pushforward, Mode, Pushforward};
pub use series::{gibbs_ratio_series, RatioSeries};
