use std::collections::HashMap;
use std::fmt;

/// A ground argument: integer, symbol, or compound term such as `loc(3,4)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Int(i64),
    Sym(String),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn sym(name: impl Into<String>) -> Term {
        Term::Sym(name.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(value) => Some(*value),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Term::Sym(name) => Some(name),
            _ => None,
        }
    }
}

impl From<i64> for Term {
    fn from(value: i64) -> Self {
        Term::Int(value)
    }
}

impl From<&str> for Term {
    fn from(value: &str) -> Self {
        Term::Sym(value.to_string())
    }
}

impl From<String> for Term {
    fn from(value: String) -> Self {
        Term::Sym(value)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(value) => write!(f, "{value}"),
            Term::Sym(name) => f.write_str(name),
            Term::Compound(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_str("(")?;
    for (i, arg) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{arg}")?;
    }
    f.write_str(")")
}

/// A ground predicate instance, `pred(arg1,...,argn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fact {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Fact {
    pub fn new<I, T>(predicate: impl Into<String>, args: I) -> Fact
    where
        I: IntoIterator<Item = T>,
        T: Into<Term>,
    {
        Fact {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn arg(&self, index: usize) -> Option<&Term> {
        self.args.get(index)
    }

    pub fn int(&self, index: usize) -> Option<i64> {
        self.arg(index).and_then(Term::as_int)
    }

    pub fn sym(&self, index: usize) -> Option<&str> {
        self.arg(index).and_then(Term::as_sym)
    }

    /// Time stamp of the fact, if its predicate declares a time argument.
    pub fn time(&self) -> Option<i64> {
        time_position(&self.predicate, self.arity()).and_then(|pos| self.int(pos))
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write_args(f, &self.args)?;
        }
        f.write_str(".")
    }
}

/// Predicates the engine understands, with the argument carrying the time
/// stamp where there is one. `None` arity marks a variadic declaration.
const VOCABULARY: &[(&str, Option<usize>, Option<usize>)] = &[
    // cycle clock and sensing
    ("hour", Some(1), None),
    ("time", Some(1), Some(0)),
    ("in", Some(4), Some(2)),
    ("sense", Some(4), Some(3)),
    ("localized", Some(1), Some(0)),
    ("in_bed", Some(1), Some(0)),
    ("at", Some(2), Some(1)),
    ("attribute", Some(3), Some(2)),
    ("attribute_obj", Some(4), Some(3)),
    ("attribute_area", Some(4), Some(3)),
    ("attribute_room", Some(4), Some(3)),
    ("personIn", Some(3), Some(2)),
    ("personOut", Some(3), Some(2)),
    ("near", Some(3), Some(2)),
    ("far", Some(3), Some(2)),
    ("action_observed", Some(2), Some(1)),
    // evaluation
    ("obsInd", Some(3), Some(2)),
    ("obsItem", Some(3), Some(2)),
    ("diff_ind", Some(3), Some(2)),
    ("diff_item", Some(4), Some(3)),
    ("diff_item_inferred", Some(4), Some(3)),
    ("to_guess", Some(2), None),
    // prediction and explanation
    ("ilab", Some(2), None),
    ("label", Some(3), None),
    ("count_infl", Some(3), None),
    ("prediction", Some(2), None),
    ("expl_arc", Some(4), None),
    ("unexplained", Some(2), None),
    // feedback
    ("feedback_form", Some(2), None),
    ("do_action", Some(3), None),
    ("do_prompt", Some(4), None),
    ("reaction", Some(4), Some(3)),
    // model files
    ("indicator", Some(2), None),
    ("item", Some(2), None),
    ("link", Some(3), None),
    ("influence", Some(3), None),
    ("scale", None, None),
    ("domain", Some(2), None),
    ("range", Some(4), None),
    ("cell", Some(4), None),
    ("wall", Some(2), None),
    ("passage", Some(6), None),
    ("data_ex", Some(3), None),
    ("person", Some(1), None),
    ("room", Some(1), None),
    ("area", Some(2), None),
    ("object", Some(3), None),
    ("connected", Some(2), None),
    ("target", Some(1), None),
    // run log
    ("entry", Some(3), Some(0)),
];

fn lookup(predicate: &str, arity: usize) -> Option<Option<usize>> {
    VOCABULARY
        .iter()
        .find(|(name, expected, _)| *name == predicate && expected.map_or(true, |a| a == arity))
        .map(|(_, _, time)| *time)
}

/// Whether `predicate/arity` belongs to the known vocabulary.
pub fn is_known_predicate(predicate: &str, arity: usize) -> bool {
    lookup(predicate, arity).is_some()
}

/// Argument index of the time stamp for `predicate/arity`.
pub fn time_position(predicate: &str, arity: usize) -> Option<usize> {
    lookup(predicate, arity).flatten()
}

/// Ground facts in insertion order, indexed by predicate and by time stamp.
#[derive(Debug, Clone, Default)]
pub struct FactBase {
    facts: Vec<Fact>,
    by_predicate: HashMap<String, Vec<usize>>,
    by_time: HashMap<(String, i64), Vec<usize>>,
}

impl FactBase {
    pub fn new() -> FactBase {
        FactBase::default()
    }

    pub fn insert(&mut self, fact: Fact) {
        let index = self.facts.len();
        self.by_predicate
            .entry(fact.predicate.clone())
            .or_default()
            .push(index);
        if let Some(t) = fact.time() {
            self.by_time
                .entry((fact.predicate.clone(), t))
                .or_default()
                .push(index);
        }
        self.facts.push(fact);
    }

    pub fn extend(&mut self, facts: impl IntoIterator<Item = Fact>) {
        for fact in facts {
            self.insert(fact);
        }
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// All facts of a predicate (any arity), in insertion order.
    pub fn with_predicate<'a>(&'a self, predicate: &str) -> impl Iterator<Item = &'a Fact> + 'a {
        self.by_predicate
            .get(predicate)
            .map(Vec::as_slice)
            .unwrap_or_default()
            .iter()
            .map(|&i| &self.facts[i])
    }

    /// Facts of `predicate` stamped with time `t`, in insertion order.
    pub fn at_time<'a>(&'a self, predicate: &str, t: i64) -> impl Iterator<Item = &'a Fact> + 'a {
        self.by_time
            .get(&(predicate.to_string(), t))
            .map(Vec::as_slice)
            .unwrap_or_default()
            .iter()
            .map(|&i| &self.facts[i])
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.with_predicate(&fact.predicate).any(|f| f == fact)
    }

    /// The cycle clock, from the first `hour(N)` fact.
    pub fn hour(&self) -> Option<i64> {
        self.with_predicate("hour")
            .find(|f| f.arity() == 1)
            .and_then(|f| f.int(0))
    }

    /// Distinct time stamps carried by facts of `predicate`, ascending.
    pub fn times_of(&self, predicate: &str) -> Vec<i64> {
        let mut times: Vec<i64> = self.with_predicate(predicate).filter_map(Fact::time).collect();
        times.sort_unstable();
        times.dedup();
        times
    }
}

impl PartialEq for FactBase {
    fn eq(&self, other: &Self) -> bool {
        self.facts == other.facts
    }
}

impl Eq for FactBase {}

impl FromIterator<Fact> for FactBase {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        let mut base = FactBase::new();
        base.extend(iter);
        base
    }
}
