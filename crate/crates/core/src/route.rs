//! Path legs on the grid graph.
//!
//! Every leg minimizes hop count first and, among minimum-hop paths,
//! maximizes the reward collected on entered cells (the source cell is not
//! counted). The objective is encoded as a lexicographic edge cost
//! `(1 hop, -gain(entered cell))`; since every edge costs exactly one hop the
//! cost is strictly positive in its leading component and label-setting
//! search is exact. A relaxation-based search over the same costs serves as a
//! cross-check.
//!
//! Both searches break cost ties the same way: a cell keeps the row-major
//! smallest predecessor among all predecessors achieving its optimal cost,
//! so they reconstruct identical cell sequences.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{PlanError, Result};
use crate::grid::{CellIndex, GridMap};
use crate::reward::{PenaltyConfig, RewardMap, VisitedSet};

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub cells: Vec<CellIndex>,
    pub hop_count: u32,
    pub accumulated_reward: f64,
}

impl Path {
    pub fn start(&self) -> CellIndex {
        self.cells[0]
    }

    pub fn end(&self) -> CellIndex {
        *self.cells.last().expect("path has at least one cell")
    }

    fn from_cells(cells: Vec<CellIndex>, gain: impl Fn(CellIndex) -> f64) -> Self {
        let accumulated_reward = cells[1..].iter().fold(0.0, |acc, &c| acc + gain(c));
        Self {
            hop_count: (cells.len() - 1) as u32,
            cells,
            accumulated_reward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct LegCost {
    hops: u32,
    loss: f64,
}

impl LegCost {
    const ZERO: LegCost = LegCost { hops: 0, loss: 0.0 };

    fn enter(self, gain: f64) -> Self {
        Self {
            hops: self.hops + 1,
            // + 0.0 folds -0.0 into +0.0 so total_cmp treats them alike
            loss: (self.loss - gain) + 0.0,
        }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.hops
            .cmp(&other.hops)
            .then_with(|| self.loss.total_cmp(&other.loss))
    }
}

#[derive(Clone, Copy)]
struct Label {
    cost: Option<LegCost>,
    pred: Option<usize>,
}

const UNREACHED: Label = Label {
    cost: None,
    pred: None,
};

/// Applies the shared relaxation rule. Returns whether `target` changed.
fn relax(labels: &mut [Label], from: usize, to: usize, candidate: LegCost) -> bool {
    let label = &mut labels[to];
    let improves = match label.cost {
        None => true,
        Some(current) => match candidate.cmp(&current) {
            Ordering::Less => true,
            Ordering::Equal => label.pred.is_some_and(|p| from < p),
            Ordering::Greater => false,
        },
    };
    if improves {
        label.cost = Some(candidate);
        label.pred = Some(from);
    }
    improves
}

fn reconstruct(grid: &GridMap, labels: &[Label], from: usize, to: usize) -> Vec<CellIndex> {
    let mut cells = vec![grid.cell_at(to)];
    let mut at = to;
    while at != from {
        at = labels[at].pred.expect("reachable cell has a predecessor");
        cells.push(grid.cell_at(at));
    }
    cells.reverse();
    cells
}

#[derive(PartialEq)]
struct Frontier {
    cost: LegCost,
    offset: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for smallest-cost-first
        other
            .cost
            .cmp(&self.cost)
            .then_with(|| other.offset.cmp(&self.offset))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn label_setting(
    grid: &GridMap,
    from: CellIndex,
    to: CellIndex,
    gain: &dyn Fn(CellIndex) -> f64,
) -> Vec<CellIndex> {
    let (src, dst) = (grid.offset(from), grid.offset(to));
    let mut labels = vec![UNREACHED; grid.cell_count()];
    let mut settled = vec![false; grid.cell_count()];
    labels[src].cost = Some(LegCost::ZERO);
    let mut heap = BinaryHeap::new();
    heap.push(Frontier {
        cost: LegCost::ZERO,
        offset: src,
    });

    while let Some(Frontier { cost, offset }) = heap.pop() {
        if settled[offset] {
            continue;
        }
        settled[offset] = true;
        if offset == dst {
            break;
        }
        let cell = grid.cell_at(offset);
        for next in grid.neighbors_unchecked(cell) {
            let n = grid.offset(next);
            if settled[n] {
                continue;
            }
            let candidate = cost.enter(gain(next));
            let improves_cost = labels[n].cost.is_none_or(|c| candidate.cmp(&c).is_lt());
            if relax(&mut labels, offset, n, candidate) && improves_cost {
                heap.push(Frontier {
                    cost: candidate,
                    offset: n,
                });
            }
        }
    }
    reconstruct(grid, &labels, src, dst)
}

fn relaxation(
    grid: &GridMap,
    from: CellIndex,
    to: CellIndex,
    gain: &dyn Fn(CellIndex) -> f64,
) -> Vec<CellIndex> {
    let (src, dst) = (grid.offset(from), grid.offset(to));
    let n = grid.cell_count();
    let mut labels = vec![UNREACHED; n];
    labels[src].cost = Some(LegCost::ZERO);

    // Costs are lexicographically positive, so a pass without changes is reached
    // within |V| rounds; the extra round confirms predecessor ties have settled.
    for _ in 0..=n {
        let mut changed = false;
        for u in 0..n {
            let Some(cost) = labels[u].cost else { continue };
            let cell = grid.cell_at(u);
            for next in grid.neighbors_unchecked(cell) {
                let v = grid.offset(next);
                changed |= relax(&mut labels, u, v, cost.enter(gain(next)));
            }
        }
        if !changed {
            break;
        }
    }
    reconstruct(grid, &labels, src, dst)
}

fn check_reward_map(grid: &GridMap, reward_map: &RewardMap) -> Result<()> {
    if reward_map.width() != grid.width() || reward_map.height() != grid.height() {
        return Err(PlanError::Shape(format!(
            "reward map is {}x{}, grid is {}x{}",
            reward_map.width(),
            reward_map.height(),
            grid.width(),
            grid.height()
        )));
    }
    Ok(())
}

/// Minimum-hop path from `from` to `to` collecting the most reward `W`.
pub fn reward_shortest_path(
    grid: &GridMap,
    reward_map: &RewardMap,
    from: CellIndex,
    to: CellIndex,
) -> Result<Path> {
    grid.check(from)?;
    grid.check(to)?;
    check_reward_map(grid, reward_map)?;
    let gain = |c: CellIndex| reward_map.get(c);
    let cells = label_setting(grid, from, to, &gain);
    Ok(Path::from_cells(cells, gain))
}

/// Same objective as [`reward_shortest_path`], solved by repeated edge relaxation.
pub fn cross_check_path(
    grid: &GridMap,
    reward_map: &RewardMap,
    from: CellIndex,
    to: CellIndex,
) -> Result<Path> {
    grid.check(from)?;
    grid.check(to)?;
    check_reward_map(grid, reward_map)?;
    let gain = |c: CellIndex| reward_map.get(c);
    let cells = relaxation(grid, from, to, &gain);
    Ok(Path::from_cells(cells, gain))
}

/// Reward earned by entering `cell` on the way home.
pub fn return_gain(
    grid: &GridMap,
    visited: &VisitedSet,
    penalties: &PenaltyConfig,
    cell: CellIndex,
) -> f64 {
    if visited.contains(cell) {
        -penalties.revisit_penalty
    } else {
        grid.importance(cell)
    }
}

/// Minimum-hop path to `base`, preferring uncovered cells and avoiding revisits.
pub fn shortest_return_path(
    grid: &GridMap,
    from: CellIndex,
    base: CellIndex,
    visited: &VisitedSet,
    penalties: &PenaltyConfig,
) -> Result<Path> {
    grid.check(from)?;
    grid.check(base)?;
    let gain = |c: CellIndex| return_gain(grid, visited, penalties, c);
    let cells = label_setting(grid, from, base, &gain);
    Ok(Path::from_cells(cells, gain))
}

/// Relaxation-based counterpart of [`shortest_return_path`].
pub fn cross_check_return_path(
    grid: &GridMap,
    from: CellIndex,
    base: CellIndex,
    visited: &VisitedSet,
    penalties: &PenaltyConfig,
) -> Result<Path> {
    grid.check(from)?;
    grid.check(base)?;
    let gain = |c: CellIndex| return_gain(grid, visited, penalties, c);
    let cells = relaxation(grid, from, base, &gain);
    Ok(Path::from_cells(cells, gain))
}
