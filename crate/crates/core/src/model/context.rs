use std::collections::{BTreeMap, BTreeSet};

use super::graph::Violation;
use crate::ingest::Term;

/// Grid coordinates `(X, Y)`.
pub type CellId = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellInfo {
    pub room: String,
    /// `None` when the cell lies in its room but outside every area.
    pub area: Option<String>,
}

/// `passage(X,Y,R1,A1,R2,A2)`: a cell joining two room/area pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Passage {
    pub cell: CellId,
    pub from: (String, Option<String>),
    pub to: (String, Option<String>),
}

/// The home as a grid of cells with walls, passages and the sensor types
/// expected to fire in each cell.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Grid {
    cells: BTreeMap<CellId, CellInfo>,
    walls: BTreeSet<CellId>,
    passages: Vec<Passage>,
    expected: BTreeMap<CellId, BTreeSet<String>>,
    violations: Vec<Violation>,
}

impl Grid {
    pub fn new() -> Grid {
        Grid::default()
    }

    /// Declares `cell(X,Y,Room,Area)`. A second, different room for the
    /// same cell is recorded as a violation.
    pub fn add_cell(&mut self, cell: CellId, room: &str, area: Option<&str>) -> &mut Self {
        let info = CellInfo {
            room: room.to_string(),
            area: area.map(str::to_string),
        };
        match self.cells.get(&cell) {
            Some(existing) if *existing != info => self.violations.push(Violation::Context {
                detail: format!(
                    "cell ({},{}) declared in {} and in {}",
                    cell.0,
                    cell.1,
                    describe_place(&existing.room, existing.area.as_deref()),
                    describe_place(room, area)
                ),
            }),
            Some(_) => {}
            None => {
                self.cells.insert(cell, info);
            }
        }
        self
    }

    pub fn add_wall(&mut self, cell: CellId) -> &mut Self {
        self.walls.insert(cell);
        self
    }

    pub fn add_passage(&mut self, passage: Passage) -> &mut Self {
        if !self.passages.contains(&passage) {
            self.passages.push(passage);
        }
        self
    }

    /// Declares `data_ex(Sensor,X,Y)`: `sensor` is expected to observe `cell`.
    pub fn expect_data(&mut self, sensor: &str, cell: CellId) -> &mut Self {
        self.expected.entry(cell).or_default().insert(sensor.to_string());
        self
    }

    pub fn is_wall(&self, cell: CellId) -> bool {
        self.walls.contains(&cell)
    }

    pub fn is_passage(&self, cell: CellId) -> bool {
        self.passages.iter().any(|p| p.cell == cell)
    }

    pub fn cell(&self, cell: CellId) -> Option<&CellInfo> {
        self.cells.get(&cell)
    }

    pub fn cells(&self) -> impl Iterator<Item = (CellId, &CellInfo)> {
        self.cells.iter().map(|(id, info)| (*id, info))
    }

    pub fn walls(&self) -> impl Iterator<Item = CellId> + '_ {
        self.walls.iter().copied()
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    /// Sensor types expected at `cell`, sorted.
    pub fn expected_sensors(&self, cell: CellId) -> impl Iterator<Item = &str> {
        self.expected
            .get(&cell)
            .into_iter()
            .flat_map(|set| set.iter().map(String::as_str))
    }

    pub fn expected_count(&self, cell: CellId) -> usize {
        self.expected.get(&cell).map_or(0, BTreeSet::len)
    }
}

fn describe_place(room: &str, area: Option<&str>) -> String {
    match area {
        Some(area) => format!("{room}/{area}"),
        None => room.to_string(),
    }
}

/// Entities of the home context and their static spatial relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityModel {
    pub persons: BTreeSet<String>,
    pub rooms: BTreeSet<String>,
    /// area → room containing it
    pub areas: BTreeMap<String, String>,
    /// object → (room, area)
    pub objects: BTreeMap<String, (String, Option<String>)>,
    /// Directed `connected(A,B)` pairs between rooms or areas.
    pub connected: BTreeSet<(String, String)>,
    pub grid: Grid,
    conflicts: Vec<Violation>,
}

impl EntityModel {
    pub fn new() -> EntityModel {
        EntityModel::default()
    }

    pub fn add_area(&mut self, area: &str, room: &str) -> &mut Self {
        match self.areas.get(area) {
            Some(existing) if existing != room => self.conflicts.push(Violation::ConflictingDeclaration {
                name: area.to_string(),
                detail: format!("area in room {existing} vs {room}"),
            }),
            Some(_) => {}
            None => {
                self.areas.insert(area.to_string(), room.to_string());
            }
        }
        self
    }

    pub fn add_object(&mut self, object: &str, room: &str, area: Option<&str>) -> &mut Self {
        let place = (room.to_string(), area.map(str::to_string));
        match self.objects.get(object) {
            Some(existing) if *existing != place => self.conflicts.push(Violation::ConflictingDeclaration {
                name: object.to_string(),
                detail: format!(
                    "object in {} vs {}",
                    describe_place(&existing.0, existing.1.as_deref()),
                    describe_place(room, area)
                ),
            }),
            Some(_) => {}
            None => {
                self.objects.insert(object.to_string(), place);
            }
        }
        self
    }

    /// Room containing `cell`, if the grid declares one.
    pub fn room_of(&self, cell: CellId) -> Option<&str> {
        self.grid.cell(cell).map(|info| info.room.as_str())
    }

    pub fn area_of(&self, cell: CellId) -> Option<&str> {
        self.grid.cell(cell).and_then(|info| info.area.as_deref())
    }

    /// Checks containment and membership invariants.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = self.conflicts.clone();
        violations.extend(self.grid.violations.iter().cloned());
        let context = |detail: String| Violation::Context { detail };

        for (area, room) in &self.areas {
            if !self.rooms.contains(room) {
                violations.push(context(format!("area {area} lies in undeclared room {room}")));
            }
        }
        for (object, (room, area)) in &self.objects {
            if !self.rooms.contains(room) {
                violations.push(context(format!("object {object} lies in undeclared room {room}")));
            }
            if let Some(area) = area {
                if self.areas.get(area) != Some(room) {
                    violations.push(context(format!("object {object}: area {area} is not part of room {room}")));
                }
            }
        }
        for (a, b) in &self.connected {
            for end in [a, b] {
                if !self.rooms.contains(end) && !self.areas.contains_key(end) {
                    violations.push(context(format!("connected({a},{b}): {end} is neither a room nor an area")));
                }
            }
        }

        let mut room_has_free_cell: BTreeMap<&str, bool> = BTreeMap::new();
        for ((x, y), info) in self.grid.cells() {
            if !self.rooms.contains(&info.room) {
                violations.push(context(format!("cell ({x},{y}) lies in undeclared room {}", info.room)));
            }
            let free = room_has_free_cell.entry(&info.room).or_insert(false);
            match &info.area {
                None => *free = true,
                Some(area) if self.areas.get(area) != Some(&info.room) => {
                    violations.push(context(format!(
                        "cell ({x},{y}): area {area} is not part of room {}",
                        info.room
                    )));
                }
                Some(_) => {}
            }
        }
        // The union of a room's areas must be a proper subset of the room.
        for room in self.areas.values().collect::<BTreeSet<_>>() {
            if room_has_free_cell.get(room.as_str()) == Some(&false) {
                violations.push(context(format!("the areas of room {room} cover all of its cells")));
            }
        }
        violations
    }
}

/// Kinds of entity in the home context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Person,
    Room,
    Area,
    Object,
}

/// Admissible values of a context attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeValues {
    Symbols(&'static [&'static str]),
    Range(i64, i64),
}

impl AttributeValues {
    pub fn admits(&self, value: &Term) -> bool {
        match (self, value) {
            (AttributeValues::Symbols(symbols), Term::Sym(s)) => symbols.contains(&s.as_str()),
            (AttributeValues::Range(low, high), Term::Int(v)) => (low..=high).contains(&v),
            _ => false,
        }
    }
}

const LIGHT: &[&str] = &["dark", "shadow", "clear", "bright"];
const LIGHT_TYPE: &[&str] = &["natural", "artificial"];
const YES_NO: &[&str] = &["yes", "no"];

const ROOM_AREA_ATTRIBUTES: &[(&str, AttributeValues)] = &[
    ("ambientLight", AttributeValues::Symbols(LIGHT)),
    ("ambientLightType", AttributeValues::Symbols(LIGHT_TYPE)),
    ("ambientHumidity", AttributeValues::Symbols(&["dry", "medium", "wet", "superWet"])),
    (
        "ambientTemperature",
        AttributeValues::Symbols(&["cold", "chilly", "warm", "hot", "burning"]),
    ),
    ("ambientSound", AttributeValues::Symbols(&["mute", "mild", "medium", "noisy"])),
    ("presence", AttributeValues::Symbols(YES_NO)),
    ("noxiousGas", AttributeValues::Symbols(YES_NO)),
    ("smoke", AttributeValues::Symbols(YES_NO)),
];

const OBJECT_ATTRIBUTES: &[(&str, AttributeValues)] = &[
    ("objectLight", AttributeValues::Symbols(LIGHT)),
    ("objectLightType", AttributeValues::Symbols(LIGHT_TYPE)),
    ("objectTemperature", AttributeValues::Symbols(&["hot", "cold"])),
    (
        "objectSound",
        AttributeValues::Symbols(&["noSound", "regularSound", "loudSound"]),
    ),
    ("switch", AttributeValues::Symbols(&["open", "closed"])),
    ("state", AttributeValues::Symbols(&["on", "off"])),
    ("filteredLoad", AttributeValues::Range(0, 300)),
    (
        "loadVolatility",
        AttributeValues::Symbols(&["stable", "mildlyUnstable", "veryUnstable"]),
    ),
    ("waterflow", AttributeValues::Symbols(YES_NO)),
];

const PERSON_ATTRIBUTES: &[(&str, AttributeValues)] = &[
    ("wgt", AttributeValues::Range(1, 300)),
    ("height", AttributeValues::Range(100, 250)),
    ("gender", AttributeValues::Symbols(&["m", "f"])),
    ("motion", AttributeValues::Symbols(&["walk", "still", "null"])),
    ("posture", AttributeValues::Symbols(&["sit", "lay", "stand", "null"])),
    ("dir", AttributeValues::Symbols(&["turn", "straight", "null"])),
];

/// Schema of a sensed attribute, `None` for attributes outside the tables
/// (health attributes of a person are typed by the dependency graph instead).
pub fn attribute_schema(kind: EntityKind, attribute: &str) -> Option<AttributeValues> {
    let table = match kind {
        EntityKind::Person => PERSON_ATTRIBUTES,
        EntityKind::Room | EntityKind::Area => ROOM_AREA_ATTRIBUTES,
        EntityKind::Object => OBJECT_ATTRIBUTES,
    };
    table.iter().find(|(name, _)| *name == attribute).map(|(_, values)| *values)
}
