//! Greedy battery-gated coverage loop.
//!
//! Each round rebuilds the reward map from the current position, picks the
//! best positive-reward target, and prices two legs: the outgoing leg to the
//! target and the return leg from the target back to base. The outgoing leg
//! is committed only if the battery strictly exceeds both together. Exploration
//! ends at the first target that fails this gate (or when no target is left),
//! after which the planner flies home along the best minimum-hop return leg.

use std::fmt;
use std::str::FromStr;

use crate::error::{PlanError, Result};
use crate::grid::{CellIndex, GridMap};
use crate::objectives::{self, ObjectiveReport, WeightVector};
use crate::reward::{compute_reward_map, select_target, PenaltyConfig, VisitedSet};
use crate::route::{reward_shortest_path, shortest_return_path};

/// Battery energy. One unit buys one hop at the default move cost.
pub type Energy = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatteryLedger {
    pub start: Energy,
    pub remaining: Energy,
    pub move_cost: Energy,
}

impl BatteryLedger {
    pub fn new(start: Energy) -> Result<Self> {
        Self::with_move_cost(start, 1)
    }

    pub fn with_move_cost(start: Energy, move_cost: Energy) -> Result<Self> {
        if start < 0 {
            return Err(PlanError::Domain(format!(
                "battery must be nonnegative, got {start}"
            )));
        }
        if move_cost <= 0 {
            return Err(PlanError::Domain(format!(
                "move cost must be positive, got {move_cost}"
            )));
        }
        Ok(Self {
            start,
            remaining: start,
            move_cost,
        })
    }

    pub fn cost_of(&self, hops: u32) -> Energy {
        self.move_cost * Energy::from(hops)
    }

    pub fn spent(&self) -> Energy {
        self.start - self.remaining
    }

    fn spend(&mut self, hops: u32) -> Result<()> {
        let cost = self.cost_of(hops);
        if cost > self.remaining {
            return Err(PlanError::Ledger {
                spent: self.spent() + cost,
                start: self.start,
            });
        }
        self.remaining -= cost;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Segment {
    Outgoing,
    Return,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Outgoing => "outgoing",
            Segment::Return => "return",
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Segment {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "outgoing" => Ok(Segment::Outgoing),
            "return" => Ok(Segment::Return),
            other => Err(PlanError::Trajectory(format!(
                "unknown segment label {other:?}"
            ))),
        }
    }
}

/// Closed walk from base, with one segment label per hop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub waypoints: Vec<CellIndex>,
    pub segments: Vec<Segment>,
    pub targets: Vec<CellIndex>,
}

impl Trajectory {
    /// Wraps a raw walk; every hop is labelled outgoing.
    pub fn from_walk(walk: Vec<CellIndex>) -> Self {
        let hops = walk.len().saturating_sub(1);
        Self {
            waypoints: walk,
            segments: vec![Segment::Outgoing; hops],
            targets: Vec::new(),
        }
    }

    pub fn hops(&self) -> u32 {
        self.segments.len() as u32
    }

    pub fn base(&self) -> CellIndex {
        self.waypoints[0]
    }

    /// Checks adjacency, closure at `base`, and segment labelling against `grid`.
    pub fn validate(&self, grid: &GridMap, base: Option<CellIndex>) -> Result<()> {
        let Some(&first) = self.waypoints.first() else {
            return Err(PlanError::Trajectory("no waypoints".into()));
        };
        for &w in &self.waypoints {
            if !grid.contains(w) {
                return Err(PlanError::Trajectory(format!(
                    "waypoint {w} is off the grid"
                )));
            }
        }
        if let Some(base) = base {
            if first != base {
                return Err(PlanError::Trajectory(format!(
                    "starts at {first}, base is {base}"
                )));
            }
        }
        let last = *self.waypoints.last().unwrap();
        if last != first {
            return Err(PlanError::Trajectory(format!(
                "ends at {last}, not at base {first}"
            )));
        }
        for pair in self.waypoints.windows(2) {
            if pair[0].manhattan(pair[1]) != 1 {
                return Err(PlanError::Trajectory(format!(
                    "{} -> {} is not a single 4-adjacent move",
                    pair[0], pair[1]
                )));
            }
        }
        if self.segments.len() + 1 != self.waypoints.len() {
            return Err(PlanError::Trajectory(format!(
                "{} segment labels for {} hops",
                self.segments.len(),
                self.waypoints.len() - 1
            )));
        }
        if let Some(first_return) = self.segments.iter().position(|&s| s == Segment::Return) {
            if self.segments[first_return..].contains(&Segment::Outgoing) {
                return Err(PlanError::Trajectory(
                    "outgoing hop after the return segment began".into(),
                ));
            }
        }
        Ok(())
    }

    /// Hop counts of each committed outgoing leg and of the final return leg.
    pub fn leg_hops(&self) -> (Vec<u32>, u32) {
        let mut legs = Vec::new();
        let mut targets = self.targets.iter().peekable();
        let mut run = 0;
        let mut ret = 0;
        for (hop, seg) in self.segments.iter().enumerate() {
            match seg {
                Segment::Outgoing => {
                    run += 1;
                    if targets.peek() == Some(&&self.waypoints[hop + 1]) {
                        targets.next();
                        legs.push(run);
                        run = 0;
                    }
                }
                Segment::Return => ret += 1,
            }
        }
        if run > 0 {
            legs.push(run);
        }
        (legs, ret)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub trajectory: Trajectory,
    pub ledger: BatteryLedger,
    pub objectives: ObjectiveReport,
}

/// `remaining > leg_cost + return_reserve`, strictly.
pub fn feasibility_check(
    remaining: Energy,
    leg_cost: Energy,
    return_reserve: Energy,
) -> Result<bool> {
    if remaining < 0 || leg_cost < 0 || return_reserve < 0 {
        return Err(PlanError::Domain(format!(
            "energies must be nonnegative (remaining {remaining}, leg {leg_cost}, reserve {return_reserve})"
        )));
    }
    Ok(remaining > leg_cost + return_reserve)
}

pub fn plan(
    grid: &GridMap,
    base: CellIndex,
    battery_start: Energy,
    penalties: &PenaltyConfig,
    alphas: &WeightVector,
) -> Result<PlanResult> {
    plan_with_ledger(
        grid,
        base,
        BatteryLedger::new(battery_start)?,
        penalties,
        alphas,
    )
}

pub fn plan_with_ledger(
    grid: &GridMap,
    base: CellIndex,
    mut ledger: BatteryLedger,
    penalties: &PenaltyConfig,
    alphas: &WeightVector,
) -> Result<PlanResult> {
    grid.check(base)?;
    penalties.validate()?;
    if ledger.remaining != ledger.start {
        return Err(PlanError::Domain(
            "planning must start from a full ledger".into(),
        ));
    }

    let mut visited = VisitedSet::new(grid);
    visited.visit(base);
    let mut waypoints = vec![base];
    let mut segments = Vec::new();
    let mut targets = Vec::new();
    let mut leg_costs = Vec::new();
    let mut revisits = 0u32;
    let mut current = base;

    while ledger.remaining > 0 {
        let reward_map = compute_reward_map(grid, current, &visited, penalties)?;
        let Some(target) = select_target(&reward_map, current) else {
            break;
        };
        let outgoing = reward_shortest_path(grid, &reward_map, current, target)?;

        let mut after = visited.clone();
        for &c in &outgoing.cells[1..] {
            after.visit(c);
        }
        let reserve = shortest_return_path(grid, target, base, &after, penalties)?;

        let leg_cost = ledger.cost_of(outgoing.hop_count);
        if !feasibility_check(
            ledger.remaining,
            leg_cost,
            ledger.cost_of(reserve.hop_count),
        )? {
            break;
        }

        for &c in &outgoing.cells[1..] {
            if !visited.visit(c) {
                revisits += 1;
            }
            waypoints.push(c);
            segments.push(Segment::Outgoing);
        }
        ledger.spend(outgoing.hop_count)?;
        debug_assert!(ledger.remaining >= ledger.cost_of(target.manhattan(base)));
        leg_costs.push(leg_cost);
        targets.push(target);
        current = target;
    }

    let home = shortest_return_path(grid, current, base, &visited, penalties)?;
    for &c in &home.cells[1..] {
        if !visited.visit(c) {
            revisits += 1;
        }
        waypoints.push(c);
        segments.push(Segment::Return);
    }
    let final_return_cost = ledger.cost_of(home.hop_count);
    ledger.spend(home.hop_count)?;

    let unspent = objectives::j2_unspent(ledger.start, &leg_costs, final_return_cost)?;
    debug_assert_eq!(unspent, ledger.remaining);
    let importance_sum = visited
        .visit_order()
        .iter()
        .fold(0.0, |acc, &c| acc + grid.importance(c));
    let terms = objectives::ObjectiveTerms {
        j1: grid.cell_area() * visited.len() as f64,
        j2: unspent,
        j3: grid.cell_area() * importance_sum,
    };
    let report = ObjectiveReport {
        j1: terms.j1,
        j2: terms.j2,
        j3: terms.j3,
        j_total: objectives::j_total(&terms, alphas),
        accumulated_reward: objectives::reward_from_counts(
            importance_sum,
            revisits,
            unspent,
            penalties,
        ),
        revisit_count: revisits,
        distinct_cells: visited.len() as u32,
    };

    Ok(PlanResult {
        trajectory: Trajectory {
            waypoints,
            segments,
            targets,
        },
        ledger,
        objectives: report,
    })
}

/// Re-scores a stored trajectory from scratch.
pub fn replay(
    grid: &GridMap,
    trajectory: &Trajectory,
    battery: BatteryLedger,
    penalties: &PenaltyConfig,
    alphas: &WeightVector,
) -> Result<ObjectiveReport> {
    trajectory.validate(grid, None)?;
    penalties.validate()?;
    let (legs, ret) = trajectory.leg_hops();
    let leg_costs: Vec<Energy> = legs.iter().map(|&h| battery.cost_of(h)).collect();
    let unspent = objectives::j2_unspent(battery.start, &leg_costs, battery.cost_of(ret))?;
    let terms = objectives::ObjectiveTerms {
        j1: objectives::j1_coverage(trajectory, grid.cell_size()),
        j2: unspent,
        j3: objectives::j3_importance(trajectory, grid),
    };
    Ok(ObjectiveReport {
        j1: terms.j1,
        j2: terms.j2,
        j3: terms.j3,
        j_total: objectives::j_total(&terms, alphas),
        accumulated_reward: objectives::accumulated_reward(trajectory, grid, penalties, unspent),
        revisit_count: objectives::revisit_count(trajectory),
        distinct_cells: objectives::distinct_cells(trajectory),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, ImportanceClass};

    fn c(x: u32, y: u32) -> CellIndex {
        CellIndex::new(x, y)
    }

    #[test]
    fn feasibility_is_strict() {
        assert_eq!(feasibility_check(10, 4, 5), Ok(true));
        assert_eq!(feasibility_check(9, 4, 5), Ok(false));
        assert!(matches!(
            feasibility_check(10, -1, 5),
            Err(PlanError::Domain(_))
        ));
        assert!(matches!(
            feasibility_check(-1, 0, 0),
            Err(PlanError::Domain(_))
        ));
    }

    #[test]
    fn zero_battery_stays_home() {
        let g = build_grid(3, 3, 1.0, &[(c(3, 1), ImportanceClass::High)]).unwrap();
        let r = plan(
            &g,
            c(1, 1),
            0,
            &PenaltyConfig::default(),
            &WeightVector::default(),
        )
        .unwrap();
        assert_eq!(r.trajectory.waypoints, vec![c(1, 1)]);
        assert_eq!(r.objectives.j2, 0);
    }

    #[test]
    fn featureless_map_stays_home() {
        let g = build_grid(6, 6, 1.0, &[]).unwrap();
        let r = plan(
            &g,
            c(3, 3),
            40,
            &PenaltyConfig::default(),
            &WeightVector::default(),
        )
        .unwrap();
        assert_eq!(r.trajectory.waypoints, vec![c(3, 3)]);
        assert_eq!(r.objectives.j2, 40);
    }

    #[test]
    fn single_target_out_and_back() {
        // 2 hops out + 2 hops back needs battery > 4 under the strict gate
        let g = build_grid(3, 3, 1.0, &[(c(3, 1), ImportanceClass::High)]).unwrap();
        let pen = PenaltyConfig::default();
        let r = plan(&g, c(1, 1), 5, &pen, &WeightVector::default()).unwrap();
        assert_eq!(r.trajectory.targets, vec![c(3, 1)]);
        assert_eq!(r.trajectory.hops(), 4);
        assert_eq!(r.trajectory.waypoints[2], c(3, 1));
        assert_eq!(r.objectives.j2, 1);
        assert_eq!(r.objectives.j3, 100.0);
        assert_eq!(r.ledger.remaining, 1);

        let boundary = plan(&g, c(1, 1), 4, &pen, &WeightVector::default()).unwrap();
        assert_eq!(boundary.trajectory.waypoints, vec![c(1, 1)]);
        assert_eq!(boundary.objectives.j2, 4);
    }

    #[test]
    fn replay_matches_plan() {
        let g = build_grid(
            5,
            5,
            1.0,
            &[
                (c(4, 4), ImportanceClass::High),
                (c(2, 5), ImportanceClass::Medium),
                (c(5, 1), ImportanceClass::Low),
            ],
        )
        .unwrap();
        let pen = PenaltyConfig::default();
        let alphas = WeightVector::default();
        for battery in 0..20 {
            let r = plan(&g, c(1, 1), battery, &pen, &alphas).unwrap();
            let again = replay(
                &g,
                &r.trajectory,
                BatteryLedger::new(battery).unwrap(),
                &pen,
                &alphas,
            )
            .unwrap();
            assert_eq!(again, r.objectives, "battery {battery}");
            assert_eq!(
                i64::from(r.trajectory.hops()),
                battery - r.objectives.j2,
                "ledger consistency"
            );
        }
    }

    #[test]
    fn out_and_back_replay() {
        let g = build_grid(3, 3, 1.0, &[(c(2, 1), ImportanceClass::Medium)]).unwrap();
        let t = Trajectory {
            waypoints: vec![c(1, 1), c(2, 1), c(1, 1)],
            segments: vec![Segment::Outgoing, Segment::Return],
            targets: vec![c(2, 1)],
        };
        let pen = PenaltyConfig::default();
        let r = replay(
            &g,
            &t,
            BatteryLedger::new(3).unwrap(),
            &pen,
            &WeightVector::default(),
        )
        .unwrap();
        assert_eq!(r.j1, 2.0);
        assert_eq!(r.revisit_count, 1);
        assert_eq!(r.j2, 1);
        assert_eq!(r.accumulated_reward, 10.0 - 100.0 - 1.0);
    }

    #[test]
    fn replay_rejects_bad_walks() {
        let g = build_grid(3, 3, 1.0, &[]).unwrap();
        let pen = PenaltyConfig::default();
        let w = WeightVector::default();
        let ledger = BatteryLedger::new(10).unwrap();
        let jump = Trajectory::from_walk(vec![c(1, 1), c(3, 1)]);
        assert!(matches!(
            replay(&g, &jump, ledger, &pen, &w),
            Err(PlanError::Trajectory(_))
        ));
        let open = Trajectory::from_walk(vec![c(1, 1), c(2, 1)]);
        assert!(matches!(
            replay(&g, &open, ledger, &pen, &w),
            Err(PlanError::Trajectory(_))
        ));
        let mut mixed = Trajectory::from_walk(vec![c(1, 1), c(2, 1), c(2, 2), c(2, 1), c(1, 1)]);
        mixed.segments = vec![
            Segment::Outgoing,
            Segment::Return,
            Segment::Outgoing,
            Segment::Return,
        ];
        assert!(matches!(
            replay(&g, &mixed, ledger, &pen, &w),
            Err(PlanError::Trajectory(_))
        ));
        let long = Trajectory::from_walk(vec![c(1, 1), c(2, 1), c(1, 1), c(2, 1), c(1, 1)]);
        assert!(matches!(
            replay(&g, &long, BatteryLedger::new(3).unwrap(), &pen, &w),
            Err(PlanError::Ledger { .. })
        ));
    }

    #[test]
    fn negative_battery_is_rejected() {
        let g = build_grid(3, 3, 1.0, &[]).unwrap();
        assert!(plan(
            &g,
            c(1, 1),
            -1,
            &PenaltyConfig::default(),
            &WeightVector::default()
        )
        .is_err());
        assert!(matches!(
            plan(
                &g,
                c(4, 4),
                5,
                &PenaltyConfig::default(),
                &WeightVector::default()
            ),
            Err(PlanError::OutOfBounds { .. })
        ));
    }
}
