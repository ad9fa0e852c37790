use std::path::Path;
use std::process::{Command, Output};

use covplan_cli::config::{Overrides, RunConfig};
use covplan_cli::run::{run_plan, run_sweep, CSV_HEADER};
use covplan_cli::TrajectoryFile;
use covplan_core::{replay, shipped, CellIndex};

fn covplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covplan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn plan_writes_artifacts_that_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = covplan(&[
        "plan",
        "--map",
        "shipped:island",
        "--base",
        "7,6",
        "--battery",
        "50",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["trajectory.txt", "report.txt", "render.svg"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let text = stdout(&out);
    assert!(text.contains("j2_unspent:         2"), "{text}");

    let file = TrajectoryFile::read(&dir.path().join("trajectory.txt")).unwrap();
    let grid = shipped::island();
    file.trajectory
        .validate(&grid, Some(CellIndex::new(7, 6)))
        .unwrap();
    let report = replay(
        &grid,
        &file.trajectory,
        file.ledger().unwrap(),
        &file.penalties,
        &file.weights,
    )
    .unwrap();
    assert_eq!(report.j2, 2);
    assert_eq!(report.j3, 2576.0);
}

#[test]
fn zero_battery_stays_at_base() {
    let dir = tempfile::tempdir().unwrap();
    let out = covplan(&[
        "plan",
        "--map",
        "shipped:gaussian",
        "--base",
        "13,8",
        "--battery",
        "0",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let file = TrajectoryFile::read(&dir.path().join("trajectory.txt")).unwrap();
    assert_eq!(file.trajectory.waypoints, vec![CellIndex::new(13, 8)]);
    assert!(stdout(&out).contains("j2_unspent:         0"));
    let svg = std::fs::read_to_string(dir.path().join("render.svg")).unwrap();
    assert!(!svg.contains("marker-end"));
}

#[test]
fn off_map_base_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = covplan(&[
        "plan",
        "--map",
        "shipped:island",
        "--base",
        "99,99",
        "--battery",
        "20",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("configuration error"), "{err}");
    assert!(!dir.path().join("trajectory.txt").exists());
}

#[test]
fn bad_inputs_fail_cleanly() {
    for args in [
        vec![
            "plan",
            "--map",
            "shipped:nowhere",
            "--base",
            "1,1",
            "--battery",
            "5",
        ],
        vec![
            "plan",
            "--map",
            "shipped:island",
            "--base",
            "1,1",
            "--battery",
            "-3",
        ],
        vec!["plan", "--map", "shipped:island", "--battery", "5"],
        vec![
            "plan",
            "--map",
            "/no/such/file.mask",
            "--base",
            "1,1",
            "--battery",
            "5",
        ],
        vec!["render", "--trajectory", "/no/such/trajectory.txt"],
    ] {
        let out = covplan(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).starts_with("error: "),
            "{args:?}"
        );
    }
}

#[test]
fn single_battery_sweep_row_matches_plan() {
    let dir = tempfile::tempdir().unwrap();
    let overrides = Overrides {
        maps: vec!["shipped:gaussian".into()],
        bases: vec!["7,6".into()],
        battery: Some(40),
        out: Some(dir.path().join("single")),
        ..Default::default()
    };
    let cfg = RunConfig::resolve(None, &overrides).unwrap();
    let single = run_plan(&cfg).unwrap();
    let sweep = run_sweep(&RunConfig {
        out_dir: dir.path().join("sweep"),
        ..cfg
    })
    .unwrap();
    assert_eq!(sweep.rows.len(), 1);
    let row = &sweep.rows[0];
    assert_eq!(row.objectives, single.result.objectives);
    assert_eq!(row.hops, single.result.trajectory.hops());
    assert_eq!(sweep.csv.lines().next(), Some(CSV_HEADER));
}

#[test]
fn sweep_csv_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = covplan(&["sweep", "--out", path_str(dir.path())]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let csv_a = std::fs::read(a.path().join("sweep.csv")).unwrap();
    let csv_b = std::fs::read(b.path().join("sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    assert_eq!(String::from_utf8(csv_a).unwrap().lines().count(), 21);
    assert_eq!(
        std::fs::read(a.path().join("sweep.svg")).unwrap(),
        std::fs::read(b.path().join("sweep.svg")).unwrap()
    );
}

#[test]
fn sweep_trajectories_reload_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = covplan(&[
        "sweep",
        "--map",
        "shipped:island",
        "--base",
        "13,8",
        "--batteries",
        "25,50",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let traj = dir.path().join("trajectories/island_13-8_50.txt");
    assert!(traj.is_file());
    let svg = dir.path().join("again.svg");
    let out = covplan(&[
        "render",
        "--trajectory",
        path_str(&traj),
        "--out",
        path_str(&svg),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(svg.is_file());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let row = csv.lines().nth(2).unwrap();
    let j2 = row.split(',').nth(6).unwrap();
    assert!(stdout(&out).contains(&format!("j2_unspent:         {j2}\n")));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tiny.mask"), "BBB\nBRB\nBBB\n").unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "map = \"tiny.mask\"\nbase = [1, 1]\nbattery = 8\nout = \"{}\"\n",
            path_str(&dir.path().join("out"))
        ),
    )
    .unwrap();
    let out = covplan(&["plan", "--config", path_str(&cfg)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("targets:            (2,2)"));

    let out = covplan(&["oracle", "--config", path_str(&cfg)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("greedy_in_set:    true"));
}
