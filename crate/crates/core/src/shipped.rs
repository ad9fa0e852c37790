//! The two frozen 15×15 maps bundled with the crate.

use crate::grid::{
    generate_gaussian_map, load_mask_map, CellIndex, GaussianSpec, GridMap, Thresholds,
};

/// Island importance overlay, traced by hand onto a 15×15 grid.
pub const ISLAND_MASK: &str = include_str!("../maps/island.mask");

/// Base locations used by the reference scenarios: summit and east coast.
pub const BASES: [CellIndex; 2] = [CellIndex::new(7, 6), CellIndex::new(13, 8)];

/// Battery capacities of the reference sweep.
pub const SWEEP_BATTERIES: [i64; 5] = [20, 30, 40, 50, 60];

pub fn island() -> GridMap {
    load_mask_map(ISLAND_MASK).expect("bundled island mask is well formed")
}

pub fn gaussian_spec() -> GaussianSpec {
    GaussianSpec {
        width: 15,
        height: 15,
        mean: [8.0, 7.0],
        covariance: [[6.0, 2.0], [2.0, 4.0]],
        thresholds: Thresholds {
            high: 0.025,
            medium: 0.009,
            low: 0.0015,
        },
        seed: 2021,
    }
}

pub fn gaussian() -> GridMap {
    generate_gaussian_map(&gaussian_spec()).expect("bundled gaussian parameters are valid")
}

/// Looks up a bundled map by name (`island` or `gaussian`).
pub fn by_name(name: &str) -> Option<GridMap> {
    match name {
        "island" => Some(island()),
        "gaussian" => Some(gaussian()),
        _ => None,
    }
}
