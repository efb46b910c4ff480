//! Random home grids and a cell-by-cell evaluator of the position rules.

use std::collections::BTreeMap;

use healthgraph::ingest::{Fact, FactBase};
use healthgraph::localization::{track, LocalizationConfig};
use healthgraph::model::Grid;
use rand::seq::SliceRandom;
use rand::Rng;

/// `(chosen cell, criterion id, all best locations)` per timestep.
pub type Selections = BTreeMap<i64, ((i64, i64), u8, Vec<(i64, i64)>)>;

pub const SENSORS: [&str; 2] = ["motion", "distance"];

pub struct Scenario {
    pub width: i64,
    pub height: i64,
    pub walls: Vec<(i64, i64)>,
    pub expected: Vec<(&'static str, i64, i64)>,
    pub facts: FactBase,
    pub steps: i64,
}

pub fn scenario<R: Rng>(rng: &mut R) -> Scenario {
    let width = rng.gen_range(2..=8);
    let height = rng.gen_range(2..=8);
    let cells: Vec<(i64, i64)> = (0..width).flat_map(|x| (0..height).map(move |y| (x, y))).collect();
    let walls: Vec<(i64, i64)> = cells.iter().copied().filter(|_| rng.gen_bool(0.15)).collect();
    let mut expected = Vec::new();
    for &(x, y) in &cells {
        for sensor in SENSORS {
            if rng.gen_bool(0.3) {
                expected.push((sensor, x, y));
            }
        }
    }
    let steps = rng.gen_range(1..=20);
    let mut facts = FactBase::new();
    for t in 1..=steps {
        // Some timesteps carry no proximity readings, some nothing at all.
        let rssi_count = if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=4) };
        for _ in 0..rssi_count {
            let &(x, y) = cells.choose(rng).unwrap();
            facts.insert(Fact::new("in", [x, y, t, rng.gen_range(0..=100)]));
        }
        for _ in 0..rng.gen_range(0..=4) {
            let &(x, y) = cells.choose(rng).unwrap();
            let sensor = *SENSORS.choose(rng).unwrap();
            facts.insert(Fact::new("sense", [healthgraph::Term::sym(sensor), x.into(), y.into(), t.into()]));
        }
    }
    Scenario {
        width,
        height,
        walls,
        expected,
        facts,
        steps,
    }
}

/// `(chosen cell, criterion id, all best locations)` per timestep, computed
/// by evaluating the selection rules at every cell of the grid.
pub fn brute_force(s: &Scenario) -> Selections {
    let mut out = BTreeMap::new();
    let mut previous: Option<(i64, i64)> = None;
    for t in 1..=s.steps {
        let rssi_at = |c: (i64, i64)| -> Option<i64> {
            s.facts
                .with_predicate("in")
                .filter(|f| f.int(2) == Some(t) && (f.int(0), f.int(1)) == (Some(c.0), Some(c.1)))
                .filter_map(|f| f.int(3))
                .max()
        };
        let sensed_at = |c: (i64, i64), sensor: &str| {
            s.facts.with_predicate("sense").any(|f| {
                f.int(3) == Some(t) && f.sym(0) == Some(sensor) && (f.int(1), f.int(2)) == (Some(c.0), Some(c.1))
            })
        };
        let has_rssi = s.facts.with_predicate("in").any(|f| f.int(2) == Some(t));

        let mut location = Vec::new();
        for x in 0..s.width {
            for y in 0..s.height {
                let c = (x, y);
                let read = rssi_at(c).is_some() || SENSORS.iter().any(|sn| sensed_at(c, sn));
                if read && !s.walls.contains(&c) {
                    location.push(c);
                }
            }
        }
        if location.is_empty() {
            previous = None;
            continue;
        }

        let coherence = |c: (i64, i64)| -> i64 {
            let ex: Vec<&str> = s.expected.iter().filter(|e| (e.1, e.2) == c).map(|e| e.0).collect();
            let n = ex.len() as i64;
            let cnt = ex.iter().filter(|sn| sensed_at(c, sn)).count() as i64;
            if cnt > 0 && n > 0 {
                100 * cnt / n
            } else if n > 0 {
                0
            } else {
                100
            }
        };
        let top = location.iter().map(|&c| coherence(c)).max().unwrap();
        let best_coherence = |c: (i64, i64)| coherence(c) == top;

        let best_movement = |c: (i64, i64)| -> bool {
            let Some(p) = previous else { return false };
            let dist = |a: (i64, i64)| (a.0 - p.0).abs() + (a.1 - p.1).abs();
            let Some(best) = location.iter().map(|&l| dist(l)).filter(|&e| e > 0).min() else {
                return false;
            };
            dist(c) == best
        };

        let criterion = |k: u8, c: (i64, i64)| match k {
            1 => best_movement(c) && best_coherence(c),
            2 => best_movement(c),
            3 => best_coherence(c),
            _ => true,
        };
        let k = (1..=4u8).find(|&k| location.iter().any(|&c| criterion(k, c))).unwrap();
        let pool: Vec<(i64, i64)> = location.iter().copied().filter(|&c| criterion(k, c)).collect();
        let score = |c: (i64, i64)| -> i64 {
            if has_rssi {
                rssi_at(c).unwrap_or(-1)
            } else {
                SENSORS.iter().filter(|sn| sensed_at(c, sn)).count() as i64
            }
        };
        let best = pool.iter().map(|&c| score(c)).max().unwrap();
        let mut best_locations: Vec<(i64, i64)> = pool.into_iter().filter(|&c| score(c) == best).collect();
        best_locations.sort();
        let chosen = best_locations[0];
        out.insert(t, (chosen, k, best_locations));
        previous = Some(chosen);
    }
    out
}

/// The library's answer in the oracle's shape.
pub fn library_selections(s: &Scenario) -> (Grid, Selections) {
    let mut grid = Grid::new();
    for &w in &s.walls {
        grid.add_wall(w);
    }
    for &(sensor, x, y) in &s.expected {
        grid.expect_data(sensor, (x, y));
    }
    let result = track(
        &grid,
        &s.facts,
        &LocalizationConfig {
            horizon: Some((1, s.steps)),
        },
    );
    let got = result
        .selections
        .iter()
        .map(|(&t, sel)| (t, (sel.cell, sel.criterion.id(), sel.co_optimal.clone())))
        .collect();
    (grid, got)
}
