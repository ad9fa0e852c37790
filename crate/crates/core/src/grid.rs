//! Cell lattice, importance overlay and map construction.
//!
//! Cells are addressed with 1-based `(x, y)` indices: `x` is the column and
//! `y` is the row, with row 1 at the top of every rendered or serialized map.
//! Every cell is traversable; cells outside the surveyed area simply carry
//! the zero importance class.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{PlanError, Result};

/// A 1-based `(column, row)` cell address.
///
/// Ordering is row-major: smaller `y` first, then smaller `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub x: u32,
    pub y: u32,
}

impl CellIndex {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn manhattan(self, other: CellIndex) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

impl Ord for CellIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for CellIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for CellIndex {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .trim()
            .split_once(',')
            .ok_or_else(|| PlanError::Domain(format!("expected `x,y`, got {s:?}")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<u32>()
                .map_err(|_| PlanError::Domain(format!("bad cell coordinate {v:?} in {s:?}")))
        };
        Ok(Self::new(parse(x)?, parse(y)?))
    }
}

impl From<(u32, u32)> for CellIndex {
    fn from((x, y): (u32, u32)) -> Self {
        Self::new(x, y)
    }
}

/// Importance class of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ImportanceClass {
    #[default]
    Zero,
    Low,
    Medium,
    High,
}

impl ImportanceClass {
    pub const ALL: [ImportanceClass; 4] = [
        ImportanceClass::Zero,
        ImportanceClass::Low,
        ImportanceClass::Medium,
        ImportanceClass::High,
    ];

    /// Mask alphabet: `B`lue, `G`reen, `Y`ellow, `R`ed.
    pub fn mask_char(self) -> char {
        match self {
            ImportanceClass::Zero => 'B',
            ImportanceClass::Low => 'G',
            ImportanceClass::Medium => 'Y',
            ImportanceClass::High => 'R',
        }
    }

    pub fn from_mask_char(ch: char) -> Option<Self> {
        match ch {
            'B' => Some(ImportanceClass::Zero),
            'G' => Some(ImportanceClass::Low),
            'Y' => Some(ImportanceClass::Medium),
            'R' => Some(ImportanceClass::High),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ImportanceClass::Zero => "zero",
            ImportanceClass::Low => "low",
            ImportanceClass::Medium => "medium",
            ImportanceClass::High => "high",
        }
    }
}

impl FromStr for ImportanceClass {
    type Err = PlanError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" | "b" => Ok(ImportanceClass::Zero),
            "low" | "g" => Ok(ImportanceClass::Low),
            "medium" | "y" => Ok(ImportanceClass::Medium),
            "high" | "r" => Ok(ImportanceClass::High),
            other => Err(PlanError::Domain(format!(
                "unknown importance class {other:?}"
            ))),
        }
    }
}

/// Score assigned to each importance class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassScores {
    pub zero: f64,
    pub low: f64,
    pub medium: f64,
    pub high: f64,
}

impl Default for ClassScores {
    fn default() -> Self {
        Self {
            zero: 0.0,
            low: 1.0,
            medium: 10.0,
            high: 100.0,
        }
    }
}

impl ClassScores {
    pub fn new(zero: f64, low: f64, medium: f64, high: f64) -> Result<Self> {
        let scores = Self {
            zero,
            low,
            medium,
            high,
        };
        for s in [zero, low, medium, high] {
            if !s.is_finite() || s < 0.0 {
                return Err(PlanError::Domain(format!(
                    "class scores must be finite and nonnegative (got {s})"
                )));
            }
        }
        Ok(scores)
    }

    pub fn score(&self, class: ImportanceClass) -> f64 {
        match class {
            ImportanceClass::Zero => self.zero,
            ImportanceClass::Low => self.low,
            ImportanceClass::Medium => self.medium,
            ImportanceClass::High => self.high,
        }
    }
}

/// Rectangular lattice with a per-cell importance class. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    width: u32,
    height: u32,
    cell_size: f64,
    scores: ClassScores,
    classes: Vec<ImportanceClass>,
}

impl GridMap {
    fn blank(width: u32, height: u32, cell_size: f64) -> Result<Self> {
        if width == 0 || height == 0 || cell_size <= 0.0 || !cell_size.is_finite() {
            return Err(PlanError::Dimension {
                width,
                height,
                cell_size,
            });
        }
        Ok(Self {
            width,
            height,
            cell_size,
            scores: ClassScores::default(),
            classes: vec![ImportanceClass::Zero; (width * height) as usize],
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.classes.len()
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Area of one cell, `l²`.
    pub fn cell_area(&self) -> f64 {
        self.cell_size * self.cell_size
    }

    pub fn scores(&self) -> &ClassScores {
        &self.scores
    }

    /// Returns the same map scored with a different class→score table.
    pub fn with_scores(mut self, scores: ClassScores) -> Self {
        self.scores = scores;
        self
    }

    pub fn with_cell_size(mut self, cell_size: f64) -> Result<Self> {
        if cell_size <= 0.0 || !cell_size.is_finite() {
            return Err(PlanError::Dimension {
                width: self.width,
                height: self.height,
                cell_size,
            });
        }
        self.cell_size = cell_size;
        Ok(self)
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        (1..=self.width).contains(&cell.x) && (1..=self.height).contains(&cell.y)
    }

    pub fn check(&self, cell: CellIndex) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(PlanError::OutOfBounds {
                cell,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Row-major position of an in-bounds cell.
    pub fn offset(&self, cell: CellIndex) -> usize {
        debug_assert!(self.contains(cell));
        ((cell.y - 1) * self.width + (cell.x - 1)) as usize
    }

    pub fn cell_at(&self, offset: usize) -> CellIndex {
        let w = self.width as usize;
        CellIndex::new((offset % w) as u32 + 1, (offset / w) as u32 + 1)
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.classes.len()).map(|i| self.cell_at(i))
    }

    pub fn class_of(&self, cell: CellIndex) -> ImportanceClass {
        self.classes[self.offset(cell)]
    }

    /// Importance score γ of a cell.
    pub fn importance(&self, cell: CellIndex) -> f64 {
        self.scores.score(self.class_of(cell))
    }

    pub fn max_importance(&self) -> f64 {
        self.classes
            .iter()
            .map(|&c| self.scores.score(c))
            .fold(0.0, f64::max)
    }

    /// 4-adjacent in-bounds cells in the fixed order up, down, left, right.
    pub fn neighbors(&self, cell: CellIndex) -> Result<Vec<CellIndex>> {
        self.check(cell)?;
        Ok(self.neighbors_unchecked(cell).collect())
    }

    pub(crate) fn neighbors_unchecked(
        &self,
        cell: CellIndex,
    ) -> impl Iterator<Item = CellIndex> + '_ {
        let CellIndex { x, y } = cell;
        [
            (y > 1).then(|| CellIndex::new(x, y - 1)),
            (y < self.height).then(|| CellIndex::new(x, y + 1)),
            (x > 1).then(|| CellIndex::new(x - 1, y)),
            (x < self.width).then(|| CellIndex::new(x + 1, y)),
        ]
        .into_iter()
        .flatten()
    }

    /// Serializes the class layout with the `B/G/Y/R` mask alphabet, row 1 first.
    pub fn to_mask(&self) -> String {
        let mut out = String::with_capacity(self.classes.len() + self.height as usize);
        for (i, row) in self.classes.chunks(self.width as usize).enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.extend(row.iter().map(|c| c.mask_char()));
        }
        out
    }
}

/// Builds a map from explicit class assignments; unassigned cells are class zero.
pub fn build_grid(
    width: u32,
    height: u32,
    cell_size: f64,
    assignments: &[(CellIndex, ImportanceClass)],
) -> Result<GridMap> {
    let mut grid = GridMap::blank(width, height, cell_size)?;
    let mut assigned = vec![false; grid.cell_count()];
    for &(cell, class) in assignments {
        grid.check(cell)?;
        let i = grid.offset(cell);
        if std::mem::replace(&mut assigned[i], true) {
            return Err(PlanError::Conflict(cell));
        }
        grid.classes[i] = class;
    }
    Ok(grid)
}

/// Parses a `B/G/Y/R` character mask. A single trailing newline is accepted.
pub fn load_mask_map(text: &str) -> Result<GridMap> {
    let body = text
        .strip_suffix("\r\n")
        .or_else(|| text.strip_suffix('\n'))
        .unwrap_or(text);
    if body.is_empty() {
        return Err(PlanError::Shape("mask is empty".into()));
    }
    let rows: Vec<&str> = body
        .split('\n')
        .map(|r| r.strip_suffix('\r').unwrap_or(r))
        .collect();
    let width = rows[0].chars().count();
    let mut classes = Vec::with_capacity(width * rows.len());
    for (r, row) in rows.iter().enumerate() {
        let len = row.chars().count();
        if len != width || len == 0 {
            return Err(PlanError::Shape(format!(
                "row {} has {len} cells, expected {width}",
                r + 1
            )));
        }
        for (c, ch) in row.chars().enumerate() {
            let class = ImportanceClass::from_mask_char(ch).ok_or(PlanError::Alphabet {
                ch,
                row: r + 1,
                column: c + 1,
            })?;
            classes.push(class);
        }
    }
    let mut grid = GridMap::blank(width as u32, rows.len() as u32, 1.0)?;
    grid.classes = classes;
    Ok(grid)
}

/// Density thresholds separating the importance classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub high: f64,
    pub medium: f64,
    pub low: f64,
}

/// Parameters of a procedurally generated bivariate-normal importance map.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    pub width: u32,
    pub height: u32,
    /// Peak location in cell coordinates (cell `(x, y)` has its centre at `(x, y)`).
    pub mean: [f64; 2],
    pub covariance: [[f64; 2]; 2],
    pub thresholds: Thresholds,
    /// Identifies the parameter set; the density field itself is noise-free.
    pub seed: u64,
}

/// Thresholds a bivariate normal density, evaluated at cell centres, into classes.
pub fn generate_gaussian_map(spec: &GaussianSpec) -> Result<GridMap> {
    let [[a, b], [c, d]] = spec.covariance;
    if [a, b, c, d].iter().any(|v| !v.is_finite()) {
        return Err(PlanError::Matrix("non-finite entry".into()));
    }
    if b != c {
        return Err(PlanError::Matrix(format!(
            "off-diagonal entries differ ({b} vs {c})"
        )));
    }
    let det = a * d - b * c;
    if !(a > 0.0 && det > 0.0) {
        return Err(PlanError::Matrix(format!(
            "leading minor {a} and determinant {det} must be positive"
        )));
    }
    let Thresholds { high, medium, low } = spec.thresholds;
    if !(high > medium && medium > low && low > 0.0) {
        return Err(PlanError::Threshold { high, medium, low });
    }

    let mut grid = GridMap::blank(spec.width, spec.height, 1.0)?;
    let norm = 1.0 / (2.0 * PI * det.sqrt());
    for i in 0..grid.classes.len() {
        let cell = grid.cell_at(i);
        let dx = cell.x as f64 - spec.mean[0];
        let dy = cell.y as f64 - spec.mean[1];
        // quadratic form with the inverse covariance [[d, -b], [-b, a]] / det
        let q = (d * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
        let density = norm * (-0.5 * q).exp();
        grid.classes[i] = if density >= high {
            ImportanceClass::High
        } else if density >= medium {
            ImportanceClass::Medium
        } else if density >= low {
            ImportanceClass::Low
        } else {
            ImportanceClass::Zero
        };
    }
    Ok(grid)
}
