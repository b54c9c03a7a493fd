//! Fixtures shared by the benchmarks.

use boxplus::laws::DEFAULT_LAW_GRID;
use boxplus::{law_measure, validate, LawSpec, Measure, MeasureSpec};

pub fn semicircle() -> Measure {
    law_measure(LawSpec::Semicircle { variance: 1.0 }, DEFAULT_LAW_GRID).expect("valid law")
}

pub fn free_poisson() -> Measure {
    law_measure(LawSpec::FreePoisson { lambda: 0.5 }, DEFAULT_LAW_GRID).expect("valid law")
}

/// Two atoms and a triangular density.
pub fn mixed() -> Measure {
    let spec = MeasureSpec::from_json(include_str!("../../../fixtures/two_atoms_triangle.json"))
        .expect("fixture parses");
    validate(&spec).expect("fixture is a probability measure")
}
