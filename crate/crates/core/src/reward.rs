//! Visit history and the dynamic reward map used for target selection.

use crate::error::{PlanError, Result};
use crate::grid::{CellIndex, GridMap};

/// Cells already covered, plus the order in which they were first entered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitedSet {
    width: u32,
    flags: Vec<bool>,
    order: Vec<CellIndex>,
}

impl VisitedSet {
    pub fn new(grid: &GridMap) -> Self {
        Self {
            width: grid.width(),
            flags: vec![false; grid.cell_count()],
            order: Vec::new(),
        }
    }

    fn slot(&self, cell: CellIndex) -> Option<usize> {
        let height = self.flags.len() as u32 / self.width;
        if (1..=self.width).contains(&cell.x) && (1..=height).contains(&cell.y) {
            Some(((cell.y - 1) * self.width + cell.x - 1) as usize)
        } else {
            None
        }
    }

    /// Marks `cell` visited. Returns `true` the first time a cell is seen.
    pub fn visit(&mut self, cell: CellIndex) -> bool {
        let Some(i) = self.slot(cell) else {
            return false;
        };
        if self.flags[i] {
            return false;
        }
        self.flags[i] = true;
        self.order.push(cell);
        true
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        self.slot(cell).is_some_and(|i| self.flags[i])
    }

    /// Coverage indicator ν: 1 while the cell is still uncovered, 0 once accounted for.
    pub fn indicator(&self, cell: CellIndex) -> u8 {
        u8::from(!self.contains(cell))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Distinct cells in first-visit order.
    pub fn visit_order(&self) -> &[CellIndex] {
        &self.order
    }
}

/// Penalties used in reward shaping and outcome accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    /// Deducted whenever a cell is entered again.
    pub revisit_penalty: f64,
    /// Deducted per unit of energy left on return.
    pub unspent_penalty: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            revisit_penalty: 100.0,
            unspent_penalty: 1.0,
        }
    }
}

impl PenaltyConfig {
    pub fn new(revisit_penalty: f64, unspent_penalty: f64) -> Result<Self> {
        let cfg = Self {
            revisit_penalty,
            unspent_penalty,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("revisit penalty", self.revisit_penalty),
            ("unspent penalty", self.unspent_penalty),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(PlanError::Domain(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-cell reward `W` as seen from one position.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardMap {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl RewardMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, cell: CellIndex) -> f64 {
        self.values[((cell.y - 1) * self.width + cell.x - 1) as usize]
    }

    /// `(cell, W)` pairs in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (CellIndex, f64)> + '_ {
        let w = self.width;
        self.values.iter().enumerate().map(move |(i, &v)| {
            let i = i as u32;
            (CellIndex::new(i % w + 1, i / w + 1), v)
        })
    }

    /// Builds a map from raw row-major values. Mostly useful for tests and tooling.
    pub fn from_values(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || values.len() != (width * height) as usize {
            return Err(PlanError::Shape(format!(
                "{} reward values for a {width}x{height} grid",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }
}

/// `W(c) = γ(c) − l·|current − c|₁ − (revisit_penalty if c visited)`.
pub fn compute_reward_map(
    grid: &GridMap,
    current: CellIndex,
    visited: &VisitedSet,
    penalties: &PenaltyConfig,
) -> Result<RewardMap> {
    grid.check(current)?;
    let l = grid.cell_size();
    let values = grid
        .cells()
        .map(|c| {
            let mut w = grid.importance(c) - l * f64::from(current.manhattan(c));
            if visited.contains(c) {
                w -= penalties.revisit_penalty;
            }
            w
        })
        .collect();
    Ok(RewardMap {
        width: grid.width(),
        height: grid.height(),
        values,
    })
}

/// Highest-reward cell other than `current` with strictly positive `W`.
///
/// Ties go to the cell nearer to `current`, then to the row-major first.
pub fn select_target(reward_map: &RewardMap, current: CellIndex) -> Option<CellIndex> {
    reward_map
        .iter()
        .filter(|&(c, w)| c != current && w > 0.0)
        .min_by(|&(a, wa), &(b, wb)| {
            wb.total_cmp(&wa)
                .then_with(|| current.manhattan(a).cmp(&current.manhattan(b)))
                .then_with(|| a.cmp(&b))
        })
        .map(|(c, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, ImportanceClass};

    fn c(x: u32, y: u32) -> CellIndex {
        CellIndex::new(x, y)
    }

    #[test]
    fn reward_is_importance_minus_distance() {
        let g = build_grid(5, 5, 1.0, &[(c(4, 3), ImportanceClass::High)]).unwrap();
        let v = VisitedSet::new(&g);
        let w = compute_reward_map(&g, c(2, 2), &v, &PenaltyConfig::default()).unwrap();
        assert_eq!(w.get(c(4, 3)), 97.0);
        assert_eq!(w.get(c(2, 2)), 0.0);
        assert_eq!(w.get(c(1, 1)), -2.0);
    }

    #[test]
    fn visited_cells_lose_the_revisit_penalty() {
        let g = build_grid(3, 3, 1.0, &[(c(3, 2), ImportanceClass::High)]).unwrap();
        let mut v = VisitedSet::new(&g);
        v.visit(c(3, 2));
        let w = compute_reward_map(&g, c(2, 1), &v, &PenaltyConfig::default()).unwrap();
        assert_eq!(w.get(c(3, 2)), -2.0);
    }

    #[test]
    fn cell_size_scales_distance() {
        let g = build_grid(3, 1, 2.5, &[(c(3, 1), ImportanceClass::Medium)]).unwrap();
        let w = compute_reward_map(&g, c(1, 1), &VisitedSet::new(&g), &PenaltyConfig::default())
            .unwrap();
        assert_eq!(w.get(c(3, 1)), 5.0);
    }

    #[test]
    fn out_of_bounds_current() {
        let g = build_grid(3, 3, 1.0, &[]).unwrap();
        let err = compute_reward_map(&g, c(4, 1), &VisitedSet::new(&g), &PenaltyConfig::default());
        assert!(matches!(err, Err(PlanError::OutOfBounds { .. })));
    }

    #[test]
    fn no_positive_reward_means_no_target() {
        let w = RewardMap::from_values(2, 2, vec![5.0, 0.0, -1.0, -3.0]).unwrap();
        assert_eq!(select_target(&w, c(1, 1)), None);
    }

    #[test]
    fn unique_maximum_is_selected() {
        let mut values = vec![1.0; 36];
        values[4 * 6 + 4] = 50.0;
        let w = RewardMap::from_values(6, 6, values).unwrap();
        assert_eq!(select_target(&w, c(1, 1)), Some(c(5, 5)));
    }

    #[test]
    fn ties_prefer_nearer_then_row_major() {
        // (3,1) is 2 hops from (1,1); (1,5) is 4 hops away
        let mut values = vec![0.0; 25];
        values[2] = 9.0;
        values[4 * 5] = 9.0;
        let w = RewardMap::from_values(5, 5, values).unwrap();
        assert_eq!(select_target(&w, c(1, 1)), Some(c(3, 1)));

        // equal distance: row-major first
        let mut values = vec![0.0; 9];
        values[1] = 9.0; // (2,1)
        values[3] = 9.0; // (1,2)
        let w = RewardMap::from_values(3, 3, values).unwrap();
        assert_eq!(select_target(&w, c(1, 1)), Some(c(2, 1)));
    }

    #[test]
    fn visited_set_tracks_first_visits() {
        let g = build_grid(3, 3, 1.0, &[]).unwrap();
        let mut v = VisitedSet::new(&g);
        assert_eq!(v.indicator(c(1, 1)), 1);
        assert!(v.visit(c(1, 1)));
        assert!(v.visit(c(2, 1)));
        assert!(!v.visit(c(1, 1)));
        assert_eq!(v.visit_order(), &[c(1, 1), c(2, 1)]);
        assert_eq!(v.indicator(c(1, 1)), 0);
        assert!(!v.contains(c(9, 9)));
    }

    #[test]
    fn penalties_must_be_nonnegative() {
        assert!(PenaltyConfig::new(-1.0, 1.0).is_err());
        assert!(PenaltyConfig::new(1.0, f64::NAN).is_err());
        assert!(PenaltyConfig::new(0.0, 0.0).is_ok());
    }
}
