#![allow(dead_code)]

use covplan_core::{build_grid, CellIndex, GridMap, ImportanceClass, VisitedSet};
use rand::Rng;

pub fn c(x: u32, y: u32) -> CellIndex {
    CellIndex::new(x, y)
}

pub fn random_grid(rng: &mut impl Rng, width: u32, height: u32) -> GridMap {
    let mut assignments = Vec::new();
    for y in 1..=height {
        for x in 1..=width {
            let class = match rng.gen_range(0..10) {
                0..=4 => continue,
                5..=6 => ImportanceClass::Low,
                7..=8 => ImportanceClass::Medium,
                _ => ImportanceClass::High,
            };
            assignments.push((c(x, y), class));
        }
    }
    build_grid(width, height, 1.0, &assignments).unwrap()
}

pub fn random_cell(rng: &mut impl Rng, grid: &GridMap) -> CellIndex {
    c(
        rng.gen_range(1..=grid.width()),
        rng.gen_range(1..=grid.height()),
    )
}

pub fn random_visited(rng: &mut impl Rng, grid: &GridMap, density: f64) -> VisitedSet {
    let mut v = VisitedSet::new(grid);
    for cell in grid.cells() {
        if rng.gen_bool(density) {
            v.visit(cell);
        }
    }
    v
}

/// Every path from `from` to `to` with exactly `hops` moves, by plain recursion.
pub fn all_paths(grid: &GridMap, from: CellIndex, to: CellIndex, hops: u32) -> Vec<Vec<CellIndex>> {
    fn go(
        grid: &GridMap,
        to: CellIndex,
        left: u32,
        path: &mut Vec<CellIndex>,
        out: &mut Vec<Vec<CellIndex>>,
    ) {
        let here = *path.last().unwrap();
        if left == 0 {
            if here == to {
                out.push(path.clone());
            }
            return;
        }
        let (x, y) = (here.x as i64, here.y as i64);
        for (dx, dy) in [(0, -1), (0, 1), (-1, 0), (1, 0)] {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 1 || ny < 1 || nx > grid.width() as i64 || ny > grid.height() as i64 {
                continue;
            }
            path.push(c(nx as u32, ny as u32));
            go(grid, to, left - 1, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(grid, to, hops, &mut vec![from], &mut out);
    out
}
