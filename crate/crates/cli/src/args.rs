use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gibbsloss_core::measure::DiagnoseOptions;
use gibbsloss_core::properties::{DEFAULT_PERIOD_BOUND, DEFAULT_WORD_BOUND};
use gibbsloss_core::shift::DEFAULT_SIZE_CAP;
use gibbsloss_core::transition::DEFAULT_PHASE_CAP;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "gibbsloss", version, about = "Transition structure of 1-block factor maps and Gibbs diagnostics of their pushforward measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Domain,
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Transfer,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyArg {
    RightEresolving,
    LeftEresolving,
    FiberMixing,
    RightContinuing,
    LeftContinuing,
    NearlyFiberMixing,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest enumeration any operation may produce.
    #[arg(long, env = "GIBBSLOSS_SIZE_CAP", default_value_t = DEFAULT_SIZE_CAP)]
    pub size_cap: usize,
    /// Largest analysis period, as a multiple of the point's period.
    #[arg(long, default_value_t = DEFAULT_PHASE_CAP)]
    pub phase_cap: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemArg {
    /// System JSON file.
    pub system: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WordArg {
    /// Word over the image alphabet, e.g. `aba` or `a_I 1 2`.
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Thresholds {
    #[arg(long = "n-max", default_value_t = 60)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol_ratio: f64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub fit_tol: f64,
    #[arg(long, default_value_t = 0.05)]
    pub decay_margin: f64,
    /// Deviation labels to test, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub extensions: Option<Vec<String>>,
}

impl Thresholds {
    pub fn options(&self, extensions: Option<Vec<usize>>, phase_cap: usize) -> DiagnoseOptions {
        DiagnoseOptions {
            n_max: self.n_max,
            tol_ratio: self.tol_ratio,
            alpha_min: self.alpha_min,
            fit_tol: self.fit_tol,
            decay_margin: self.decay_margin,
            extensions,
            phase_cap,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Validate a system (and optionally a measure) and summarize it.
    Validate {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long)]
        measure: Option<PathBuf>,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// List the words of length n of the domain or image shift.
    Blocks {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TargetArg::Image)]
        target: TargetArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// List the domain words over an image word.
    Fiber {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Depth and tau-depth of an image word, with witnesses.
    Depth {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Tau-depth of an image word with a minimal tangled partition.
    Tau {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Class degree estimated from words of length 3..=N.
    Degree {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long = "horizon-N", default_value_t = 6)]
        horizon: usize,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Classes, transitions and class alphabets over a periodic point.
    Classes {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Structural properties of the factor map. The exit code reports the
    /// requested property (default: nearly fiber-mixing): 0 holds, 1 fails,
    /// 2 unknown at horizon.
    Properties {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long, value_enum)]
        property: Option<PropertyArg>,
        #[arg(long = "period-bound-P", default_value_t = DEFAULT_PERIOD_BOUND)]
        period_bound: usize,
        #[arg(long = "horizon-N", default_value_t = DEFAULT_WORD_BOUND)]
        horizon: usize,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Measure of an image cylinder under the pushforward.
    Pushforward {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Transfer)]
        mode: ModeArg,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Search for numerical signatures that rule out the Gibbs property
    /// along a periodic point.
    GibbsDiagnose {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        #[command(flatten)]
        #[serde(flatten)]
        thresholds: Thresholds,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Tune one transition probability until a class reaches a target rate.
    TuneRate {
        #[command(flatten)]
        #[serde(flatten)]
        system: SystemArg,
        #[arg(long)]
        measure: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        word: WordArg,
        /// Class index as reported by `classes`.
        #[arg(long)]
        class: usize,
        /// Source symbol of the tuned transition.
        #[arg(long)]
        row: String,
        /// Target symbol of the tuned transition.
        #[arg(long)]
        entry: String,
        /// Target growth rate per analysis period.
        #[arg(long)]
        target: f64,
        #[arg(long, default_value_t = 1e-6)]
        t_lo: f64,
        #[arg(long, default_value_t = 1.0 - 1e-6)]
        t_hi: f64,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
    /// Run the bundled reproduction suite and print a pass/fail matrix.
    Reproduce {
        /// Directory holding fixture files to check against the bundled
        /// copies before running.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Validate { common, .. }
            | Command::Blocks { common, .. }
            | Command::Fiber { common, .. }
            | Command::Depth { common, .. }
            | Command::Tau { common, .. }
            | Command::Degree { common, .. }
            | Command::Classes { common, .. }
            | Command::Properties { common, .. }
            | Command::Pushforward { common, .. }
            | Command::GibbsDiagnose { common, .. }
            | Command::TuneRate { common, .. }
            | Command::Reproduce { common, .. } => common,
        }
    }
}
