//! Benchmark fixtures for the decision procedures.

use pfrep_core::{catalog, ninfty, FiniteAlgebra};

/// Closed algebras used by the benchmarks, keyed by a short label.
pub fn fixtures() -> Vec<(&'static str, FiniteAlgebra)> {
    let concrete = |c: pfrep_core::ConcreteAlgebra| c.to_abstract().expect("catalog algebras close");
    vec![
        ("boolean-3", FiniteAlgebra::boolean_as_algebra(3)),
        ("figure1", concrete(catalog::figure1_closure())),
        ("figure2", concrete(catalog::figure2_closure())),
        ("truncation-2", concrete(ninfty::truncate(2).expect("small truncation"))),
    ]
}
