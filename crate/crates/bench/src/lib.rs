//! Fixtures shared by the benchmarks in `benches/`.

use adsres_core::differential_ops::{RadialProfile, TestFunction};
use adsres_core::GroupElement;
use num_complex::Complex64;

/// The two-component even test function used throughout the benchmarks.
pub fn even_test_function() -> TestFunction {
    TestFunction::new(4.5)
        .and_then(|f| f.with_component(0, 0, RadialProfile::bump(2.1, 2.0, 20.0)))
        .and_then(|f| f.with_component(2, 2, RadialProfile::bump(2.1, 2.0, 20.0).scaled(Complex64::new(0.5, 0.0))))
        .expect("fixture is valid")
}

/// A fixed generic group element.
pub fn sample_element() -> GroupElement {
    GroupElement::from_cartan(0.8, 0.4, -1.1)
}
