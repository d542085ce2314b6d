//! Workloads shared by the benchmarks in `benches/`.

use sullivan::corpus;
use sullivan::SullivanModel;

/// Corpus models used as benchmark inputs, by name.
pub fn model(name: &str) -> SullivanModel {
    corpus::builtin(name)
        .unwrap_or_else(|e| panic!("{e}"))
        .model
}

/// A mid-sized workload: the purely odd five-generator example, a
/// two-stage model with even generators, and a three-stage product.
pub const WORKLOADS: [&str; 3] = [
    "appendix_Y",
    "two_stage_223",
    "product_appendix_X_sphere_odd_3",
];
