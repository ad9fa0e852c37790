//! Exhaustive reference for small instances.
//!
//! Enumerates every closed walk from base within an energy budget and scores
//! walks with an evaluator written independently of [`crate::objectives`]:
//! it works in exact rational arithmetic and shares no helpers with the
//! planner's scoring path.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{PlanError, Result};
use crate::grid::{CellIndex, GridMap};
use crate::objectives::{ObjectiveReport, WeightVector};
use crate::planner::Energy;
use crate::reward::PenaltyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_cells: usize,
    pub max_budget: Energy,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self {
            max_cells: 25,
            max_budget: 12,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WalkSet {
    pub walks: Vec<Vec<CellIndex>>,
}

impl WalkSet {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn contains(&self, walk: &[CellIndex]) -> bool {
        self.walks.iter().any(|w| w == walk)
    }
}

fn check_caps(
    grid: &GridMap,
    base: CellIndex,
    budget: Energy,
    caps: &EnumerationCaps,
) -> Result<()> {
    grid.check(base)?;
    if budget < 0 {
        return Err(PlanError::Domain(format!(
            "budget must be nonnegative, got {budget}"
        )));
    }
    if grid.cell_count() > caps.max_cells {
        return Err(PlanError::Capacity(format!(
            "{} cells exceeds the cap of {}",
            grid.cell_count(),
            caps.max_cells
        )));
    }
    if budget > caps.max_budget {
        return Err(PlanError::Capacity(format!(
            "budget {budget} exceeds the cap of {}",
            caps.max_budget
        )));
    }
    Ok(())
}

/// Calls `visit` once per closed walk from `base` with at most `budget` hops,
/// in depth-first order (zero-hop walk first, moves tried up, down, left, right).
pub fn for_each_closed_walk(
    grid: &GridMap,
    base: CellIndex,
    budget: Energy,
    caps: &EnumerationCaps,
    mut visit: impl FnMut(&[CellIndex]),
) -> Result<()> {
    check_caps(grid, base, budget, caps)?;
    let budget = budget as u32;
    let mut walk = vec![base];
    descend(grid, base, budget, &mut walk, &mut visit);
    Ok(())
}

fn descend(
    grid: &GridMap,
    base: CellIndex,
    budget: u32,
    walk: &mut Vec<CellIndex>,
    visit: &mut impl FnMut(&[CellIndex]),
) {
    let here = *walk.last().unwrap();
    if here == base {
        visit(walk);
    }
    let used = walk.len() as u32 - 1;
    for next in grid.neighbors_unchecked(here) {
        // only continue if we can still make it home
        if used + 1 + next.manhattan(base) <= budget {
            walk.push(next);
            descend(grid, base, budget, walk, visit);
            walk.pop();
        }
    }
}

pub fn enumerate_closed_walks(grid: &GridMap, base: CellIndex, budget: Energy) -> Result<WalkSet> {
    enumerate_closed_walks_capped(grid, base, budget, &EnumerationCaps::default())
}

pub fn enumerate_closed_walks_capped(
    grid: &GridMap,
    base: CellIndex,
    budget: Energy,
    caps: &EnumerationCaps,
) -> Result<WalkSet> {
    let mut walks = Vec::new();
    for_each_closed_walk(grid, base, budget, caps, |w| walks.push(w.to_vec()))?;
    Ok(WalkSet { walks })
}

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

fn approx(v: &BigRational) -> f64 {
    v.to_f64().expect("representable value")
}

/// Exact objective values of a walk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub coverage: BigRational,
    pub unspent: BigRational,
    pub importance: BigRational,
    pub total: BigRational,
    pub reward: BigRational,
    pub revisits: u32,
    pub distinct: u32,
}

impl ExactReport {
    pub fn to_report(&self) -> ObjectiveReport {
        ObjectiveReport {
            j1: approx(&self.coverage),
            j2: self
                .unspent
                .to_integer()
                .to_i64()
                .expect("unspent fits i64"),
            j3: approx(&self.importance),
            j_total: approx(&self.total),
            accumulated_reward: approx(&self.reward),
            revisit_count: self.revisits,
            distinct_cells: self.distinct,
        }
    }
}

/// Scores a closed walk from first principles, in exact arithmetic.
pub fn evaluate_walk_exact(
    grid: &GridMap,
    walk: &[CellIndex],
    penalties: &PenaltyConfig,
    battery_start: Energy,
    weights: &WeightVector,
) -> Result<ExactReport> {
    if walk.is_empty() {
        return Err(PlanError::Trajectory("empty walk".into()));
    }
    if walk[0] != walk[walk.len() - 1] {
        return Err(PlanError::Trajectory("walk is not closed".into()));
    }
    let w = grid.width() as usize;
    let mut covered = vec![false; grid.cell_count()];
    let mut distinct = 0u32;
    let mut revisits = 0u32;
    let mut gamma_sum = BigRational::zero();
    for (i, &cell) in walk.iter().enumerate() {
        if cell.x < 1 || cell.y < 1 || cell.x > grid.width() || cell.y > grid.height() {
            return Err(PlanError::Trajectory(format!("{cell} is off the grid")));
        }
        if i > 0 {
            let prev = walk[i - 1];
            let dx = (i64::from(cell.x) - i64::from(prev.x)).abs();
            let dy = (i64::from(cell.y) - i64::from(prev.y)).abs();
            if dx + dy != 1 {
                return Err(PlanError::Trajectory(format!(
                    "{prev} -> {cell} is not one move"
                )));
            }
        }
        let slot = (cell.y as usize - 1) * w + cell.x as usize - 1;
        if covered[slot] {
            revisits += 1;
        } else {
            covered[slot] = true;
            distinct += 1;
            gamma_sum += exact(grid.importance(cell));
        }
    }
    let hops = walk.len() as i64 - 1;
    if hops > battery_start {
        return Err(PlanError::Ledger {
            spent: hops,
            start: battery_start,
        });
    }

    let l = exact(grid.cell_size());
    let area = &l * &l;
    let coverage = &area * BigRational::from_integer(BigInt::from(distinct));
    let importance = &area * &gamma_sum;
    let unspent = BigRational::from_integer(BigInt::from(battery_start - hops));
    let total = -exact(weights.alpha1) * &coverage + exact(weights.alpha2) * &unspent
        - exact(weights.alpha3) * &importance;
    let reward = gamma_sum
        - exact(penalties.revisit_penalty) * BigRational::from_integer(BigInt::from(revisits))
        - exact(penalties.unspent_penalty) * &unspent;
    Ok(ExactReport {
        coverage,
        unspent,
        importance,
        total,
        reward,
        revisits,
        distinct,
    })
}

pub fn evaluate_walk(
    grid: &GridMap,
    walk: &[CellIndex],
    penalties: &PenaltyConfig,
    battery_start: Energy,
    weights: &WeightVector,
) -> Result<ObjectiveReport> {
    evaluate_walk_exact(grid, walk, penalties, battery_start, weights).map(|r| r.to_report())
}

/// Walk minimizing `J_total`; ties go to fewer hops, then the lexicographically
/// smaller waypoint sequence.
pub fn optimal_walk(
    grid: &GridMap,
    base: CellIndex,
    budget: Energy,
    penalties: &PenaltyConfig,
    weights: &WeightVector,
) -> Result<(Vec<CellIndex>, ObjectiveReport)> {
    let mut best: Option<(Vec<CellIndex>, ExactReport)> = None;
    let mut failure = None;
    for_each_closed_walk(grid, base, budget, &EnumerationCaps::default(), |walk| {
        if failure.is_some() {
            return;
        }
        let report = match evaluate_walk_exact(grid, walk, penalties, budget, weights) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let better = match &best {
            None => true,
            Some((w, r)) => {
                report
                    .total
                    .cmp(&r.total)
                    .then_with(|| walk.len().cmp(&w.len()))
                    .then_with(|| walk.cmp(w.as_slice()))
                    == Ordering::Less
            }
        };
        if better {
            best = Some((walk.to_vec(), report));
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (walk, report) = best.expect("the zero-hop walk always exists");
    Ok((walk, report.to_report()))
}
