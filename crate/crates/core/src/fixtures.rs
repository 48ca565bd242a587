//! The four bundled example systems and their measures.

use crate::shift::{load_system, SystemBundle};

pub const FIG1_JSON: &str = include_str!("../fixtures/FIG1.json");
pub const FIG2_JSON: &str = include_str!("../fixtures/FIG2.json");
pub const FIG3_JSON: &str = include_str!("../fixtures/FIG3.json");
pub const FIG4_JSON: &str = include_str!("../fixtures/FIG4.json");

pub const FIG1_MEASURE_JSON: &str = include_str!("../fixtures/fig1_measure.json");
pub const FIG2_P03_JSON: &str = include_str!("../fixtures/fig2_p03.json");
pub const FIG2_P05_JSON: &str = include_str!("../fixtures/fig2_p05.json");
pub const FIG3_MEASURE_JSON: &str = include_str!("../fixtures/fig3_measure.json");
pub const FIG4_UNIFORM_JSON: &str = include_str!("../fixtures/fig4_uniform.json");

fn load(json: &str) -> SystemBundle {
    load_system(json).expect("bundled fixture is valid")
}

/// Two loops joined through a single crossing edge over the label `a`.
pub fn fig1() -> SystemBundle {
    load(FIG1_JSON)
}

/// Three symbols; `0^inf` has two right classes of period 2.
pub fn fig2() -> SystemBundle {
    load(FIG2_JSON)
}

/// Neither left nor right continuing.
pub fn fig3() -> SystemBundle {
    load(FIG3_JSON)
}

/// Nearly fiber-mixing but not fiber-mixing.
pub fn fig4() -> SystemBundle {
    load(FIG4_JSON)
}

/// All four systems with their names.
pub fn all() -> Vec<(&'static str, SystemBundle)> {
    vec![
        ("FIG1", fig1()),
        ("FIG2", fig2()),
        ("FIG3", fig3()),
        ("FIG4", fig4()),
    ]
}
