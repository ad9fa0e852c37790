//! Subcommand implementations. Each returns the text it would print so the
//! binary stays thin and tests can call these directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use covplan_core::{
    oracle, plan, replay, shipped, CellIndex, Energy, GridMap, ObjectiveReport, PenaltyConfig,
    PlanResult, WeightVector,
};
use rayon::prelude::*;

use crate::config::{MapSource, RunConfig};
use crate::error::{CliError, Result};
use crate::render::{self, Series};
use crate::trajfile::TrajectoryFile;

pub const CSV_HEADER: &str =
    "map,base_x,base_y,battery_start,hops,j1,j2,j3,j_total,accumulated_reward,revisit_count";

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn check_base(grid: &GridMap, base: CellIndex) -> Result<()> {
    if grid.contains(base) {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "base {base} lies outside the {}x{} map",
            grid.width(),
            grid.height()
        )))
    }
}

fn check_battery(battery: Energy) -> Result<()> {
    if battery < 0 {
        return Err(CliError::Config(format!(
            "battery must be nonnegative, got {battery}"
        )));
    }
    Ok(())
}

/// Plans, then re-scores the stored trajectory from scratch and insists the two agree.
fn plan_checked(
    grid: &GridMap,
    base: CellIndex,
    battery: Energy,
    penalties: &PenaltyConfig,
    weights: &WeightVector,
) -> Result<PlanResult> {
    let result = plan(grid, base, battery, penalties, weights)?;
    result.trajectory.validate(grid, Some(base))?;
    let replayed = replay(grid, &result.trajectory, result.ledger, penalties, weights)?;
    if replayed != result.objectives {
        return Err(CliError::Config(format!(
            "replay disagrees with planner: {replayed:?} vs {:?}",
            result.objectives
        )));
    }
    Ok(result)
}

pub fn format_report(map: &str, base: CellIndex, battery: Energy, result: &PlanResult) -> String {
    let o = &result.objectives;
    let t = &result.trajectory;
    let targets: Vec<String> = t.targets.iter().map(|c| format!("({c})")).collect();
    let mut out = String::new();
    let _ = writeln!(out, "map:                {map}");
    let _ = writeln!(out, "base:               {base}");
    let _ = writeln!(out, "battery_start:      {battery}");
    let _ = writeln!(out, "hops:               {}", t.hops());
    let _ = writeln!(out, "targets:            {}", targets.join(" "));
    let _ = writeln!(out, "distinct_cells:     {}", o.distinct_cells);
    let _ = writeln!(out, "revisit_count:      {}", o.revisit_count);
    let _ = writeln!(out, "j1_coverage:        {}", o.j1);
    let _ = writeln!(out, "j2_unspent:         {}", o.j2);
    let _ = writeln!(out, "j3_importance:      {}", o.j3);
    let _ = writeln!(out, "j_total:            {}", o.j_total);
    let _ = writeln!(out, "accumulated_reward: {}", o.accumulated_reward);
    out
}

/// Files written by a single planning run.
#[derive(Debug, Clone)]
pub struct PlanOutput {
    pub result: PlanResult,
    pub report: String,
    pub trajectory_path: PathBuf,
    pub report_path: PathBuf,
    pub render_path: PathBuf,
}

pub fn run_plan(cfg: &RunConfig) -> Result<PlanOutput> {
    let source = cfg.single_map()?;
    let base = cfg.single_base()?;
    let battery = cfg.single_battery()?;
    let grid = cfg.load_map(source)?;
    check_base(&grid, base)?;

    let result = plan_checked(&grid, base, battery, &cfg.penalties, &cfg.weights)?;
    let map = source.describe();
    let report = format_report(&map, base, battery, &result);

    ensure_dir(&cfg.out_dir)?;
    let trajectory_path = cfg.out_dir.join("trajectory.txt");
    let report_path = cfg.out_dir.join("report.txt");
    let render_path = cfg.out_dir.join("render.svg");
    trajectory_file(&map, base, battery, cfg, &result).write(&trajectory_path)?;
    write_file(&report_path, &report)?;
    let title = format!("{map} base {base} battery {battery}");
    write_file(
        &render_path,
        &render::render_plan(&grid, &result.trajectory, &title),
    )?;

    Ok(PlanOutput {
        result,
        report,
        trajectory_path,
        report_path,
        render_path,
    })
}

fn trajectory_file(
    map: &str,
    base: CellIndex,
    battery: Energy,
    cfg: &RunConfig,
    result: &PlanResult,
) -> TrajectoryFile {
    TrajectoryFile {
        map: map.to_string(),
        base,
        battery,
        move_cost: result.ledger.move_cost,
        penalties: cfg.penalties,
        weights: cfg.weights,
        trajectory: result.trajectory.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub map: String,
    pub base: CellIndex,
    pub battery: Energy,
    pub hops: u32,
    pub objectives: ObjectiveReport,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let o = &self.objectives;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&self.map),
            self.base.x,
            self.base.y,
            self.battery,
            self.hops,
            o.j1,
            o.j2,
            o.j3,
            o.j_total,
            o.accumulated_reward,
            o.revisit_count
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub csv: String,
    pub csv_path: PathBuf,
    pub chart_path: PathBuf,
}

/// Maps default to both bundled maps, bases to the two bundled bases and
/// batteries to the bundled sweep list.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutput> {
    let maps = if cfg.maps.is_empty() {
        vec![
            MapSource::Shipped("island".into()),
            MapSource::Shipped("gaussian".into()),
        ]
    } else {
        cfg.maps.clone()
    };
    let bases = if cfg.bases.is_empty() {
        shipped::BASES.to_vec()
    } else {
        cfg.bases.clone()
    };
    let batteries = match (&cfg.batteries, cfg.battery) {
        (Some(list), _) => list.clone(),
        (None, Some(b)) => vec![b],
        (None, None) => shipped::SWEEP_BATTERIES.to_vec(),
    };
    for &b in &batteries {
        check_battery(b)?;
    }

    let mut loaded = Vec::with_capacity(maps.len());
    for source in &maps {
        let grid = cfg.load_map(source)?;
        for &base in &bases {
            check_base(&grid, base)?;
        }
        loaded.push((source, grid));
    }

    // Row order: map, then base, then battery, each in input order.
    let mut jobs: Vec<(usize, CellIndex, Energy)> = Vec::new();
    for m in 0..loaded.len() {
        for &base in &bases {
            jobs.extend(batteries.iter().map(|&e| (m, base, e)));
        }
    }
    let results = jobs
        .par_iter()
        .map(|&(m, base, battery)| {
            let (source, grid) = &loaded[m];
            let r = plan_checked(grid, base, battery, &cfg.penalties, &cfg.weights)?;
            Ok((source.describe(), source.slug(), base, battery, r))
        })
        .collect::<Result<Vec<_>>>()?;

    let traj_dir = cfg.out_dir.join("trajectories");
    ensure_dir(&traj_dir)?;
    let mut rows = Vec::with_capacity(results.len());
    let mut csv = String::new();
    let _ = writeln!(csv, "{CSV_HEADER}");
    for (map, slug, base, battery, result) in &results {
        let name = format!("{slug}_{}-{}_{battery}.txt", base.x, base.y);
        trajectory_file(map, *base, *battery, cfg, result).write(&traj_dir.join(name))?;
        let row = SweepRow {
            map: map.clone(),
            base: *base,
            battery: *battery,
            hops: result.trajectory.hops(),
            objectives: result.objectives,
        };
        let _ = writeln!(csv, "{}", row.to_csv());
        rows.push(row);
    }

    let mut series: Vec<Series> = Vec::new();
    for (source, _) in &loaded {
        for &base in &bases {
            let map = source.describe();
            let label = format!("{} @ {base}", source.slug());
            let points = rows
                .iter()
                .filter(|r| r.map == map && r.base == base)
                .map(|r| (r.battery as f64, r.objectives.accumulated_reward))
                .collect();
            series.push(Series { label, points });
        }
    }

    let csv_path = cfg.out_dir.join("sweep.csv");
    let chart_path = cfg.out_dir.join("sweep.svg");
    write_file(&csv_path, &csv)?;
    write_file(&chart_path, &render::render_sweep(&series))?;
    Ok(SweepOutput {
        rows,
        csv,
        csv_path,
        chart_path,
    })
}

/// Compares the greedy plan against the exhaustive optimum on a small map.
pub fn run_oracle(cfg: &RunConfig) -> Result<String> {
    let source = cfg.single_map()?;
    let base = cfg.single_base()?;
    let battery = cfg.single_battery()?;
    let grid = cfg.load_map(source)?;
    check_base(&grid, base)?;

    let greedy = plan_checked(&grid, base, battery, &cfg.penalties, &cfg.weights)?;
    let (walk, best) = oracle::optimal_walk(&grid, base, battery, &cfg.penalties, &cfg.weights)?;
    let walks = oracle::enumerate_closed_walks(&grid, base, battery)?;
    let member = walks.contains(&greedy.trajectory.waypoints);
    let path: Vec<String> = walk.iter().map(|c| format!("({c})")).collect();

    let mut out = String::new();
    let _ = writeln!(out, "map:              {}", source.describe());
    let _ = writeln!(out, "base:             {base}");
    let _ = writeln!(out, "budget:           {battery}");
    let _ = writeln!(out, "closed_walks:     {}", walks.len());
    let _ = writeln!(out, "greedy_in_set:    {member}");
    let _ = writeln!(out, "greedy_j_total:   {}", greedy.objectives.j_total);
    let _ = writeln!(out, "optimal_j_total:  {}", best.j_total);
    let _ = writeln!(
        out,
        "gap:              {}",
        greedy.objectives.j_total - best.j_total
    );
    let _ = writeln!(out, "greedy_hops:      {}", greedy.trajectory.hops());
    let _ = writeln!(out, "optimal_walk:     {}", path.join(" "));
    Ok(out)
}

/// Re-renders a stored trajectory. The map comes from `map` when given,
/// otherwise from the file header. Returns the replayed report.
pub fn render_stored(
    trajectory: &Path,
    map: Option<&MapSource>,
    cfg: &RunConfig,
    out: &Path,
) -> Result<String> {
    let file = TrajectoryFile::read(trajectory)?;
    let source = match map {
        Some(m) => m.clone(),
        None => MapSource::parse_ref(&file.map)?,
    };
    let grid = cfg.load_map(&source)?;
    file.trajectory.validate(&grid, Some(file.base))?;
    let report = replay(
        &grid,
        &file.trajectory,
        file.ledger()?,
        &file.penalties,
        &file.weights,
    )?;
    let title = format!("{} base {} battery {}", file.map, file.base, file.battery);
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    write_file(out, &render::render_plan(&grid, &file.trajectory, &title))?;
    let result = PlanResult {
        trajectory: file.trajectory.clone(),
        ledger: file.ledger()?,
        objectives: report,
    };
    Ok(format_report(&file.map, file.base, file.battery, &result))
}
