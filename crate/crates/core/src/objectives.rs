//! Outcome scoring: coverage `J₁`, unspent energy `J₂`, importance gain `J₃`,
//! their weighted total, and the accumulated-reward metric used in sweeps.
//!
//! `J₁` and `J₃` count each distinct cell once. `J₃` carries the `l²` area
//! factor, so its unit is importance × area. The accumulated reward does not:
//! it is the plain importance sum minus revisit and unspent-energy penalties.

use std::collections::HashSet;

use crate::error::{PlanError, Result};
use crate::grid::{CellIndex, GridMap};
use crate::planner::{Energy, Trajectory};
use crate::reward::PenaltyConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl Default for WeightVector {
    fn default() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 1.0,
            alpha3: 1.0,
        }
    }
}

impl WeightVector {
    pub fn new(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        if ![alpha1, alpha2, alpha3].iter().all(|a| a.is_finite()) {
            return Err(PlanError::Domain("weights must be finite".into()));
        }
        Ok(Self {
            alpha1,
            alpha2,
            alpha3,
        })
    }
}

/// The three raw objective terms before weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveTerms {
    pub j1: f64,
    pub j2: Energy,
    pub j3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveReport {
    /// Covered area.
    pub j1: f64,
    /// Energy left on return.
    pub j2: Energy,
    /// Importance-weighted covered area.
    pub j3: f64,
    pub j_total: f64,
    pub accumulated_reward: f64,
    /// Hops that entered an already-covered cell.
    pub revisit_count: u32,
    pub distinct_cells: u32,
}

fn first_visits(trajectory: &Trajectory) -> impl Iterator<Item = CellIndex> + '_ {
    let mut seen = HashSet::new();
    trajectory
        .waypoints
        .iter()
        .copied()
        .filter(move |&c| seen.insert(c))
}

pub fn distinct_cells(trajectory: &Trajectory) -> u32 {
    first_visits(trajectory).count() as u32
}

pub fn revisit_count(trajectory: &Trajectory) -> u32 {
    let distinct = distinct_cells(trajectory);
    trajectory.waypoints.len() as u32 - distinct
}

pub fn j1_coverage(trajectory: &Trajectory, cell_size: f64) -> f64 {
    cell_size * cell_size * distinct_cells(trajectory) as f64
}

pub fn j2_unspent(
    battery_start: Energy,
    leg_costs: &[Energy],
    final_return_cost: Energy,
) -> Result<Energy> {
    if battery_start < 0 || final_return_cost < 0 || leg_costs.iter().any(|&c| c < 0) {
        return Err(PlanError::Domain("energies must be nonnegative".into()));
    }
    let spent = leg_costs.iter().sum::<Energy>() + final_return_cost;
    if spent > battery_start {
        return Err(PlanError::Ledger {
            spent,
            start: battery_start,
        });
    }
    Ok(battery_start - spent)
}

fn importance_sum(trajectory: &Trajectory, grid: &GridMap) -> f64 {
    first_visits(trajectory).fold(0.0, |acc, c| acc + grid.importance(c))
}

pub fn j3_importance(trajectory: &Trajectory, grid: &GridMap) -> f64 {
    grid.cell_area() * importance_sum(trajectory, grid)
}

/// `−α₁J₁ + α₂J₂ − α₃J₃`; lower is better.
pub fn j_total(terms: &ObjectiveTerms, weights: &WeightVector) -> f64 {
    -weights.alpha1 * terms.j1 + weights.alpha2 * terms.j2 as f64 - weights.alpha3 * terms.j3
}

pub(crate) fn reward_from_counts(
    importance_sum: f64,
    revisits: u32,
    unspent: Energy,
    penalties: &PenaltyConfig,
) -> f64 {
    importance_sum
        - penalties.revisit_penalty * f64::from(revisits)
        - penalties.unspent_penalty * unspent as f64
}

pub fn accumulated_reward(
    trajectory: &Trajectory,
    grid: &GridMap,
    penalties: &PenaltyConfig,
    unspent: Energy,
) -> f64 {
    reward_from_counts(
        importance_sum(trajectory, grid),
        revisit_count(trajectory),
        unspent,
        penalties,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, ImportanceClass};
    use crate::planner::Trajectory;

    fn c(x: u32, y: u32) -> CellIndex {
        CellIndex::new(x, y)
    }

    fn walk(cells: &[(u32, u32)]) -> Trajectory {
        Trajectory::from_walk(cells.iter().map(|&(x, y)| c(x, y)).collect())
    }

    #[test]
    fn j1_counts_distinct_cells() {
        let five = walk(&[(1, 1), (2, 1), (3, 1), (3, 2), (2, 2), (1, 2), (1, 1)]);
        assert_eq!(distinct_cells(&five), 6);
        let t = walk(&[(1, 1), (2, 1), (2, 2), (1, 2), (1, 1)]);
        assert_eq!(j1_coverage(&t, 1.0), 4.0);
        let t5 = walk(&[(1, 1), (2, 1), (3, 1), (2, 1), (2, 2), (2, 1), (1, 1)]);
        assert_eq!(distinct_cells(&t5), 4);
        assert_eq!(j1_coverage(&t5, 2.0), 16.0);
        assert_eq!(j1_coverage(&walk(&[(1, 1)]), 1.0), 1.0);
    }

    #[test]
    fn j1_five_cells() {
        let t = walk(&[
            (1, 1),
            (2, 1),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 2),
            (3, 1),
            (2, 1),
            (1, 1),
        ]);
        assert_eq!(j1_coverage(&t, 1.0), 5.0);
    }

    #[test]
    fn j2_arithmetic() {
        assert_eq!(j2_unspent(25, &[17], 5), Ok(3));
        assert_eq!(j2_unspent(50, &[], 0), Ok(50));
        assert_eq!(
            j2_unspent(10, &[8], 5),
            Err(PlanError::Ledger {
                spent: 13,
                start: 10
            })
        );
        assert!(matches!(
            j2_unspent(10, &[-1], 0),
            Err(PlanError::Domain(_))
        ));
    }

    #[test]
    fn j3_counts_each_cell_once() {
        let g = build_grid(
            3,
            3,
            1.0,
            &[
                (c(2, 1), ImportanceClass::High),
                (c(3, 1), ImportanceClass::Medium),
                (c(3, 2), ImportanceClass::Low),
            ],
        )
        .unwrap();
        let t = walk(&[(1, 1), (2, 1), (3, 1), (3, 2), (3, 1), (2, 1), (1, 1)]);
        assert_eq!(j3_importance(&t, &g), 111.0);

        let zero = build_grid(3, 3, 1.0, &[]).unwrap();
        assert_eq!(j3_importance(&t, &zero), 0.0);

        let twice = walk(&[(1, 1), (2, 1), (1, 1), (2, 1), (1, 1)]);
        assert_eq!(j3_importance(&twice, &g), 100.0);
    }

    #[test]
    fn j_total_arithmetic() {
        let terms = ObjectiveTerms {
            j1: 5.0,
            j2: 3,
            j3: 111.0,
        };
        assert_eq!(j_total(&terms, &WeightVector::default()), -113.0);
        assert_eq!(
            j_total(&terms, &WeightVector::new(0.0, 0.0, 1.0).unwrap()),
            -111.0
        );
        assert_eq!(
            j_total(&terms, &WeightVector::new(0.0, 0.0, 0.0).unwrap()),
            0.0
        );
        assert!(WeightVector::new(f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn accumulated_reward_rules() {
        // distinct importance 210 = 100 + 100 + 10, one revisit hop, 2 unspent
        let g = build_grid(
            4,
            1,
            1.0,
            &[
                (c(2, 1), ImportanceClass::High),
                (c(3, 1), ImportanceClass::High),
                (c(4, 1), ImportanceClass::Medium),
            ],
        )
        .unwrap();
        let t = walk(&[(1, 1), (2, 1), (3, 1), (4, 1), (3, 1)]);
        assert_eq!(revisit_count(&t), 1);
        assert_eq!(
            accumulated_reward(&t, &g, &PenaltyConfig::default(), 2),
            108.0
        );

        let clean = walk(&[(1, 1), (2, 1), (3, 1), (4, 1)]);
        assert_eq!(
            accumulated_reward(&clean, &g, &PenaltyConfig::default(), 0),
            210.0
        );
    }
}
