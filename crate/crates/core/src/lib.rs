//! Battery-constrained coverage planning over grids with nonuniform importance.
//!
//! A greedy planner repeatedly picks the most rewarding reachable cell,
//! commits the leg only when enough energy remains to get back to base, and
//! finally flies home along the return leg that avoids covered cells. The
//! [`objectives`] module scores the outcome, and [`oracle`] enumerates every
//! closed walk on small instances to check the planner against the optimum.

pub mod error;
pub mod grid;
pub mod objectives;
pub mod oracle;
pub mod planner;
pub mod reward;
pub mod route;
pub mod shipped;

pub use error::{PlanError, Result};
pub use grid::{
    build_grid, generate_gaussian_map, load_mask_map, CellIndex, ClassScores, GaussianSpec,
    GridMap, ImportanceClass, Thresholds,
};
pub use objectives::{ObjectiveReport, ObjectiveTerms, WeightVector};
pub use planner::{plan, replay, BatteryLedger, Energy, PlanResult, Segment, Trajectory};
pub use reward::{compute_reward_map, select_target, PenaltyConfig, RewardMap, VisitedSet};
pub use route::{cross_check_path, reward_shortest_path, shortest_return_path, Path};
