//! Plain-text trajectory files.
//!
//! ```text
//! # covplan trajectory v1
//! # map: shipped:island
//! # base: 7,6
//! # battery: 50
//! # move_cost: 1
//! # revisit_penalty: 100
//! # unspent_penalty: 1
//! # alphas: 1,1,1
//! # targets: 6,6;8,6
//! x,y,segment
//! 7,6,base
//! 6,6,outgoing
//! 7,6,return
//! ```

use std::fmt::Write as _;
use std::path::Path;

use covplan_core::{
    BatteryLedger, CellIndex, Energy, PenaltyConfig, Segment, Trajectory, WeightVector,
};

use crate::error::{CliError, Result};

const MAGIC: &str = "# covplan trajectory v1";
const COLUMNS: &str = "x,y,segment";

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryFile {
    pub map: String,
    pub base: CellIndex,
    pub battery: Energy,
    pub move_cost: Energy,
    pub penalties: PenaltyConfig,
    pub weights: WeightVector,
    pub trajectory: Trajectory,
}

impl TrajectoryFile {
    pub fn ledger(&self) -> Result<BatteryLedger> {
        Ok(BatteryLedger::with_move_cost(self.battery, self.move_cost)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &self.weights;
        let targets: Vec<String> = self
            .trajectory
            .targets
            .iter()
            .map(|t| t.to_string())
            .collect();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "# map: {}", self.map);
        let _ = writeln!(out, "# base: {}", self.base);
        let _ = writeln!(out, "# battery: {}", self.battery);
        let _ = writeln!(out, "# move_cost: {}", self.move_cost);
        let _ = writeln!(out, "# revisit_penalty: {}", self.penalties.revisit_penalty);
        let _ = writeln!(out, "# unspent_penalty: {}", self.penalties.unspent_penalty);
        let _ = writeln!(out, "# alphas: {},{},{}", w.alpha1, w.alpha2, w.alpha3);
        let _ = writeln!(out, "# targets: {}", targets.join(";"));
        let _ = writeln!(out, "{COLUMNS}");
        for (i, cell) in self.trajectory.waypoints.iter().enumerate() {
            let label = match i {
                0 => "base",
                _ => self.trajectory.segments[i - 1].as_str(),
            };
            let _ = writeln!(out, "{},{},{label}", cell.x, cell.y);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|(line, message)| CliError::TrajectoryFile {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    /// Parses file contents; errors carry the 1-based line number.
    pub fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err((1, format!("expected `{MAGIC}`"))),
        }

        let mut map = None;
        let mut base = None;
        let mut battery = None;
        let mut move_cost = 1;
        let mut revisit = None;
        let mut unspent = None;
        let mut weights = None;
        let mut targets = Vec::new();
        let mut waypoints = Vec::new();
        let mut segments = Vec::new();
        let mut in_body = false;

        for (n, line) in lines {
            let err = |m: String| (n, m);
            if line.trim().is_empty() {
                continue;
            }
            if !in_body {
                if line == COLUMNS {
                    in_body = true;
                    continue;
                }
                let (key, value) = line
                    .strip_prefix("# ")
                    .and_then(|l| l.split_once(':'))
                    .ok_or_else(|| err(format!("expected `# key: value`, got {line:?}")))?;
                let value = value.trim();
                let num = |v: &str| {
                    v.parse::<f64>()
                        .map_err(|_| err(format!("bad number {v:?}")))
                };
                let int = |v: &str| {
                    v.parse::<Energy>()
                        .map_err(|_| err(format!("bad integer {v:?}")))
                };
                let cell = |v: &str| v.parse::<CellIndex>().map_err(|e| err(e.to_string()));
                match key {
                    "map" => map = Some(value.to_string()),
                    "base" => base = Some(cell(value)?),
                    "battery" => battery = Some(int(value)?),
                    "move_cost" => move_cost = int(value)?,
                    "revisit_penalty" => revisit = Some(num(value)?),
                    "unspent_penalty" => unspent = Some(num(value)?),
                    "alphas" => {
                        let v = value
                            .split(',')
                            .map(num)
                            .collect::<std::result::Result<Vec<_>, _>>()?;
                        let [a, b, c] = v[..] else {
                            return Err(err("alphas needs three values".into()));
                        };
                        weights = Some(WeightVector {
                            alpha1: a,
                            alpha2: b,
                            alpha3: c,
                        });
                    }
                    "targets" => {
                        targets = value
                            .split(';')
                            .filter(|t| !t.trim().is_empty())
                            .map(cell)
                            .collect::<std::result::Result<_, _>>()?;
                    }
                    other => return Err(err(format!("unknown header key {other:?}"))),
                }
                continue;
            }

            let mut parts = line.split(',');
            let (Some(x), Some(y), Some(label), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(err(format!("expected `x,y,segment`, got {line:?}")));
            };
            let coord = |v: &str| {
                v.trim()
                    .parse::<u32>()
                    .map_err(|_| err(format!("bad coordinate {v:?}")))
            };
            let here = CellIndex::new(coord(x)?, coord(y)?);
            match (waypoints.is_empty(), label.trim()) {
                (true, "base") => {}
                (true, other) => {
                    return Err(err(format!("first waypoint must be `base`, got {other:?}")))
                }
                (false, other) => {
                    segments.push(other.parse::<Segment>().map_err(|e| err(e.to_string()))?)
                }
            }
            waypoints.push(here);
        }

        let header = |k: &str| (1, format!("missing `# {k}:` header"));
        if waypoints.is_empty() {
            return Err((1, "no waypoints".into()));
        }
        let base = base.ok_or_else(|| header("base"))?;
        let penalties = PenaltyConfig::new(
            revisit.ok_or_else(|| header("revisit_penalty"))?,
            unspent.ok_or_else(|| header("unspent_penalty"))?,
        )
        .map_err(|e| (1, e.to_string()))?;
        Ok(Self {
            map: map.ok_or_else(|| header("map"))?,
            base,
            battery: battery.ok_or_else(|| header("battery"))?,
            move_cost,
            penalties,
            weights: weights.ok_or_else(|| header("alphas"))?,
            trajectory: Trajectory {
                waypoints,
                segments,
                targets,
            },
        })
    }
}
