//! Tracking the person on the home grid.
//!
//! Each timestep the candidate cells are those with a proximity reading
//! (`in(X,Y,T,P)`) or a sensor reading (`sense(S,X,Y,T)`), minus walls. The
//! candidates are filtered by the first nonempty criterion:
//!
//! 1. best movement and best coherence,
//! 2. best movement,
//! 3. best coherence,
//! 4. any candidate.
//!
//! Within that set the strongest proximity signal wins; without proximity
//! readings the cell with the most sensor types reporting wins. Remaining
//! ties go to the smallest `(X,Y)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ingest::{Fact, FactBase, Term};
use crate::model::{CellId, EntityModel, Grid};

/// One timestep's readings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimestepInput {
    pub time: i64,
    /// Strongest proximity accuracy per cell.
    pub rssi: BTreeMap<CellId, i64>,
    /// Sensor types that reported at each cell.
    pub sensed: BTreeMap<CellId, BTreeSet<String>>,
}

impl TimestepInput {
    /// Collects `in/4` and `sense/4` facts stamped `time`.
    pub fn from_facts(facts: &FactBase, time: i64) -> TimestepInput {
        let mut input = TimestepInput {
            time,
            ..TimestepInput::default()
        };
        for fact in facts.at_time("in", time).filter(|f| f.arity() == 4) {
            if let (Some(x), Some(y), Some(p)) = (fact.int(0), fact.int(1), fact.int(3)) {
                let best = input.rssi.entry((x, y)).or_insert(p);
                *best = (*best).max(p);
            }
        }
        for fact in facts.at_time("sense", time).filter(|f| f.arity() == 4) {
            if let (Some(sensor), Some(x), Some(y)) = (fact.sym(0), fact.int(1), fact.int(2)) {
                input.sensed.entry((x, y)).or_default().insert(sensor.to_string());
            }
        }
        input
    }

    pub fn has_rssi(&self) -> bool {
        !self.rssi.is_empty()
    }

    pub fn has_data(&self) -> bool {
        !self.sensed.is_empty()
    }

    /// Cells with any reading that are not walls.
    pub fn candidates(&self, grid: &Grid) -> BTreeSet<CellId> {
        self.rssi
            .keys()
            .chain(self.sensed.keys())
            .copied()
            .filter(|&cell| !grid.is_wall(cell))
            .collect()
    }

    /// Number of sensor types reporting at `cell`.
    pub fn support(&self, cell: CellId) -> usize {
        self.sensed.get(&cell).map_or(0, BTreeSet::len)
    }
}

/// Percentage of the sensor types expected at `cell` that reported.
/// A cell that expects nothing is fully coherent.
pub fn coherence(grid: &Grid, input: &TimestepInput, cell: CellId) -> u32 {
    let expected = grid.expected_count(cell);
    let sensed = input.sensed.get(&cell);
    let matched = grid
        .expected_sensors(cell)
        .filter(|s| sensed.is_some_and(|set| set.contains(*s)))
        .count();
    match (matched, expected) {
        (_, 0) => 100,
        (0, _) => 0,
        (c, n) => (100 * c / n) as u32,
    }
}

pub fn manhattan(a: CellId, b: CellId) -> i64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

/// Candidates at the smallest positive distance from `previous`. Staying put
/// does not count as a move.
pub fn best_movement(candidates: &BTreeSet<CellId>, previous: CellId) -> BTreeSet<CellId> {
    let best = candidates
        .iter()
        .map(|&c| manhattan(c, previous))
        .filter(|&d| d > 0)
        .min();
    match best {
        Some(d) => candidates.iter().copied().filter(|&c| manhattan(c, previous) == d).collect(),
        None => BTreeSet::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Criterion {
    MovementAndCoherence,
    Movement,
    Coherence,
    Any,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::MovementAndCoherence,
        Criterion::Movement,
        Criterion::Coherence,
        Criterion::Any,
    ];

    /// 1 to 4, in order of preference.
    pub fn id(self) -> u8 {
        self as u8 + 1
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// The chosen cell for one timestep and how it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub time: i64,
    pub cell: CellId,
    pub criterion: Criterion,
    /// Every cell that ties with the chosen one before the `(X,Y)` tie-break.
    pub co_optimal: Vec<CellId>,
    pub coherence: BTreeMap<CellId, u32>,
    /// Distance of each candidate from the previous position, if any.
    pub distances: BTreeMap<CellId, i64>,
    /// Sensor support per candidate, reported when there is sensor data but
    /// no proximity reading.
    pub reward: BTreeMap<CellId, usize>,
}

/// Chooses the cell for one timestep. `None` when no candidate survives.
pub fn select_position(grid: &Grid, input: &TimestepInput, previous: Option<CellId>) -> Option<Selection> {
    let candidates = input.candidates(grid);
    if candidates.is_empty() {
        return None;
    }
    let coherence: BTreeMap<CellId, u32> = candidates.iter().map(|&c| (c, self::coherence(grid, input, c))).collect();
    let top = coherence.values().copied().max().expect("candidates are not empty");
    let most_coherent: BTreeSet<CellId> = coherence.iter().filter(|(_, &p)| p == top).map(|(&c, _)| c).collect();
    let moving = previous.map(|p| best_movement(&candidates, p)).unwrap_or_default();

    let (criterion, pool) = Criterion::ALL
        .into_iter()
        .map(|criterion| {
            let pool: Vec<CellId> = match criterion {
                Criterion::MovementAndCoherence => moving.intersection(&most_coherent).copied().collect(),
                Criterion::Movement => moving.iter().copied().collect(),
                Criterion::Coherence => most_coherent.iter().copied().collect(),
                Criterion::Any => candidates.iter().copied().collect(),
            };
            (criterion, pool)
        })
        .find(|(_, pool)| !pool.is_empty())
        .expect("the last criterion admits every candidate");

    // Cells without a proximity reading rank below every cell with one.
    let value = |cell: CellId| -> i64 {
        if input.has_rssi() {
            input.rssi.get(&cell).copied().unwrap_or(-1)
        } else {
            input.support(cell) as i64
        }
    };
    let best = pool.iter().map(|&c| value(c)).max().expect("pool is not empty");
    let co_optimal: Vec<CellId> = pool.into_iter().filter(|&c| value(c) == best).collect();

    let distances = previous
        .map(|p| candidates.iter().map(|&c| (c, manhattan(c, p))).collect())
        .unwrap_or_default();
    let reward = if !input.has_rssi() && input.has_data() {
        candidates.iter().map(|&c| (c, input.support(c))).collect()
    } else {
        BTreeMap::new()
    };
    Some(Selection {
        time: input.time,
        cell: co_optimal[0],
        criterion,
        co_optimal,
        coherence,
        distances,
        reward,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocalizationConfig {
    /// Timesteps to process, inclusive. Defaults to every timestep with a
    /// reading.
    pub horizon: Option<(i64, i64)>,
}

/// Selections over a run of timesteps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Track {
    pub selections: BTreeMap<i64, Selection>,
}

impl Track {
    pub fn position(&self, time: i64) -> Option<CellId> {
        self.selections.get(&time).map(|s| s.cell)
    }

    /// `at(loc(X,Y),T)` and `localized(T)` per chosen timestep.
    pub fn to_facts(&self) -> Vec<Fact> {
        let mut facts = Vec::new();
        for (&time, selection) in &self.selections {
            let (x, y) = selection.cell;
            facts.push(Fact::new(
                "at",
                [Term::Compound("loc".into(), vec![Term::Int(x), Term::Int(y)]), Term::Int(time)],
            ));
            facts.push(Fact::new("localized", [time]));
        }
        facts
    }
}

/// Localizes every timestep in order. Movement criteria only apply when a
/// cell was chosen at the immediately preceding timestep.
pub fn track(grid: &Grid, facts: &FactBase, config: &LocalizationConfig) -> Track {
    let times: Vec<i64> = match config.horizon {
        Some((first, last)) => (first..=last).collect(),
        None => {
            let mut times: BTreeSet<i64> = facts.times_of("in").into_iter().collect();
            times.extend(facts.times_of("sense"));
            times.into_iter().collect()
        }
    };
    let mut track = Track::default();
    for time in times {
        let input = TimestepInput::from_facts(facts, time);
        let previous = track.position(time - 1);
        if let Some(selection) = select_position(grid, &input, previous) {
            track.selections.insert(time, selection);
        }
    }
    track
}

/// A room, possibly narrowed to one of its areas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoarseLocation {
    Unknown,
    Place { room: String, area: Option<String> },
}

/// Room (and area, when the evidence singles one out) with the most
/// supporting facts at `time`: sensor readings mapped through cell
/// membership, and objects in use (`attribute_obj` with a positive value or
/// the value `on` or `open`) mapped through object placement.
pub fn coarse_localize(model: &EntityModel, facts: &FactBase, time: i64) -> CoarseLocation {
    let mut rooms: BTreeMap<String, usize> = BTreeMap::new();
    let mut areas: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut count = |room: &str, area: Option<&str>| {
        *rooms.entry(room.to_string()).or_default() += 1;
        if let Some(area) = area {
            *areas.entry((room.to_string(), area.to_string())).or_default() += 1;
        }
    };
    for fact in facts.at_time("sense", time).filter(|f| f.arity() == 4) {
        if let (Some(x), Some(y)) = (fact.int(1), fact.int(2)) {
            if let Some(info) = model.grid.cell((x, y)) {
                count(&info.room, info.area.as_deref());
            }
        }
    }
    for fact in facts.at_time("attribute_obj", time).filter(|f| f.arity() == 4) {
        let in_use = match fact.arg(2) {
            Some(Term::Int(v)) => *v > 0,
            Some(Term::Sym(s)) => s == "on" || s == "open",
            _ => false,
        };
        let placed = fact.sym(1).and_then(|object| model.objects.get(object));
        if let (true, Some((room, area))) = (in_use, placed) {
            count(room, area.as_deref());
        }
    }
    // Largest count, then the smallest name.
    let Some((room, &most)) = rooms.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))) else {
        return CoarseLocation::Unknown;
    };
    debug_assert!(most > 0);
    let area = areas
        .iter()
        .filter(|((r, _), _)| r == room)
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|((_, area), _)| area.clone());
    CoarseLocation::Place {
        room: room.clone(),
        area,
    }
}
