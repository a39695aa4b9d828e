//! Fixtures shared by the benchmarks.

use glars::simulation::{generate_replicate, SimulationConfig};
use glars::Dataset;

/// Train/test split of one simulated replicate with `m` predictors.
pub fn simulated(m: usize, rho: f64) -> (Dataset, Dataset) {
    let config = SimulationConfig {
        m,
        rho_collinearity: rho,
        ..SimulationConfig::default()
    };
    generate_replicate(&config, 0)
}
