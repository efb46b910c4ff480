use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::fact::Fact;
use super::parser::{statement, Cursor, ParseError};
use crate::error::Position;
use crate::model::{
    CellId, DependencyGraph, EntityModel, GraphBuilder, ItemClass, Passage, Scale, SourceKind,
    ValueDomain, Violation,
};
use crate::sign::ArcType;

/// A loaded `.model` file: dependency graph plus home context.
#[derive(Debug, Clone)]
pub struct Model {
    pub graph: DependencyGraph,
    pub context: EntityModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid model:\n{}", ViolationList(.0))]
    Invalid(Vec<Violation>),
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, violation) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {violation}")?;
        }
        Ok(())
    }
}

/// Parses a model and validates it; any violation fails the load.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let (model, violations) = parse_model_unchecked(text)?;
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(ModelError::Invalid(violations))
    }
}

/// Parses a model and returns it together with its violations.
pub fn parse_model_unchecked(text: &str) -> Result<(Model, Vec<Violation>), ParseError> {
    let mut cursor = Cursor::new(text);
    let mut graph = GraphBuilder::default();
    let mut context = EntityModel::new();
    let mut scales: BTreeMap<String, Scale> = BTreeMap::new();
    let mut scale_refs: Vec<(Position, String, String)> = Vec::new();
    let mut violations = Vec::new();

    while let Some((position, fact)) = statement(&mut cursor)? {
        let args = Args {
            fact: &fact,
            position,
        };
        match (fact.predicate.as_str(), fact.arity()) {
            ("indicator", 2) => {
                let source: SourceKind = args.parse(1)?;
                graph.indicator(args.sym(0)?, source);
            }
            ("item", 2) => {
                let class: ItemClass = args.parse(1)?;
                graph.item(args.sym(0)?, class);
            }
            ("link", 3) => {
                let kind: ArcType = args.parse(0)?;
                graph.link(kind, args.sym(1)?, args.sym(2)?);
            }
            ("influence", 3) => {
                let kind: ArcType = args.parse(0)?;
                graph.influence(kind, args.sym(1)?, args.sym(2)?);
            }
            ("scale", n) if n >= 2 => {
                let name = args.sym(0)?;
                let levels = (1..n).map(|i| args.sym(i)).collect::<Result<Vec<_>, _>>()?;
                let scale = Scale::new(name, levels);
                if scales.get(name).is_some_and(|existing| *existing != scale) {
                    violations.push(Violation::ConflictingDeclaration {
                        name: name.to_string(),
                        detail: "scale declared twice with different levels".into(),
                    });
                }
                scales.insert(name.to_string(), scale);
            }
            ("domain", 2) => scale_refs.push((position, args.sym(0)?.to_string(), args.sym(1)?.to_string())),
            ("range", 4) => {
                let higher_is_worse = match args.sym(3)? {
                    "higher_worse" => true,
                    "higher_better" => false,
                    other => {
                        return Err(args.error(format!(
                            "expected higher_worse or higher_better, found `{other}`"
                        )))
                    }
                };
                let (low, high) = (args.int(1)?, args.int(2)?);
                if low > high {
                    return Err(args.error(format!("empty range {low}..{high}")));
                }
                graph.domain(
                    args.sym(0)?,
                    ValueDomain::Range {
                        low,
                        high,
                        higher_is_worse,
                    },
                );
            }
            ("cell", 4) => {
                let area = optional(args.sym(3)?);
                context.grid.add_cell(args.cell(0)?, args.sym(2)?, area);
            }
            ("wall", 2) => {
                context.grid.add_wall(args.cell(0)?);
            }
            ("passage", 6) => {
                let passage = Passage {
                    cell: args.cell(0)?,
                    from: (args.sym(2)?.to_string(), optional(args.sym(3)?).map(str::to_string)),
                    to: (args.sym(4)?.to_string(), optional(args.sym(5)?).map(str::to_string)),
                };
                context.grid.add_passage(passage);
            }
            ("data_ex", 3) => {
                context.grid.expect_data(args.sym(0)?, (args.int(1)?, args.int(2)?));
            }
            ("person", 1) => {
                context.persons.insert(args.sym(0)?.to_string());
            }
            ("room", 1) => {
                context.rooms.insert(args.sym(0)?.to_string());
            }
            ("area", 2) => {
                context.add_area(args.sym(0)?, args.sym(1)?);
            }
            ("object", 3) => {
                context.add_object(args.sym(0)?, args.sym(1)?, optional(args.sym(2)?));
            }
            ("connected", 2) => {
                context
                    .connected
                    .insert((args.sym(0)?.to_string(), args.sym(1)?.to_string()));
            }
            (predicate, arity) => {
                return Err(ParseError::new(
                    position,
                    format!("`{predicate}/{arity}` is not a model declaration"),
                ))
            }
        }
    }

    for (position, node, scale_name) in scale_refs {
        let scale = scales
            .get(&scale_name)
            .cloned()
            .or_else(|| Scale::builtin(&scale_name))
            .ok_or_else(|| ParseError::new(position, format!("unknown scale `{scale_name}`")))?;
        graph.domain(&node, ValueDomain::Scale(scale));
    }

    let graph = graph.finish();
    violations.extend(graph.validate());
    violations.extend(context.validate());
    Ok((Model { graph, context }, violations))
}

fn optional(symbol: &str) -> Option<&str> {
    (symbol != "none").then_some(symbol)
}

struct Args<'a> {
    fact: &'a Fact,
    position: Position,
}

impl<'a> Args<'a> {
    fn error(&self, message: String) -> ParseError {
        ParseError::new(self.position, format!("{}: {message}", self.fact.predicate))
    }

    fn sym(&self, index: usize) -> Result<&'a str, ParseError> {
        self.fact
            .sym(index)
            .ok_or_else(|| self.error(format!("argument {} must be a name", index + 1)))
    }

    fn int(&self, index: usize) -> Result<i64, ParseError> {
        self.fact
            .int(index)
            .ok_or_else(|| self.error(format!("argument {} must be an integer", index + 1)))
    }

    fn cell(&self, index: usize) -> Result<CellId, ParseError> {
        Ok((self.int(index)?, self.int(index + 1)?))
    }

    fn parse<T>(&self, index: usize) -> Result<T, ParseError>
    where
        T: std::str::FromStr,
        T::Err: fmt::Display,
    {
        self.sym(index)?.parse().map_err(|err: T::Err| self.error(err.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ItemId, Layer};

    #[test]
    fn link_declaration() {
        let model = parse_model(
            "indicator(earlyNight,inference).\nitem(insomnia,state).\nlink(neg,earlyNight,insomnia).\n",
        )
        .unwrap();
        let arc = &model.graph.arcs()[0];
        assert_eq!((arc.source.as_str(), arc.target.as_str()), ("earlyNight", "insomnia"));
        assert_eq!(arc.kind, ArcType::Neg);
        assert_eq!(arc.layer, Layer::IndicatorToItem);
    }

    #[test]
    fn influence_and_duplicates() {
        let text = "item(gait,functionalities).\nitem(gait,functionalities).\nitem(balance,functionalities).\n\
                    item(mobility,adl).\ninfluence(pos,balance,mobility).\n";
        let model = parse_model(text).unwrap();
        assert_eq!(model.graph.items().len(), 3);
        let mobility = model.graph.item_id("mobility").unwrap();
        let incoming = model.graph.influences_into(mobility);
        assert_eq!(incoming.len(), 1);
        assert_eq!(model.graph.item_name(incoming[0].source), "balance");
        assert_eq!(model.graph.item(ItemId(0)).name, "balance");
    }

    #[test]
    fn violations_fail_the_load() {
        let err = parse_model("item(gait,functionalities).\ninfluence(pos,gait,mobility).").unwrap_err();
        assert!(matches!(err, ModelError::Invalid(ref v) if v.len() == 1), "{err}");
    }

    #[test]
    fn bad_tokens_are_positioned() {
        let err = parse_model("item(gait,functionalities).\nitem(x,bogus).").unwrap_err();
        let ModelError::Parse(err) = err else { panic!() };
        assert_eq!(err.position.line, 2);
        assert!(parse_model("link(sideways,a,b).").is_err());
        assert!(parse_model("hour(3).").is_err());
    }

    #[test]
    fn domains_and_scales() {
        let text = "indicator(wgt,human_input).\nrange(wgt,1,300,higher_better).\n\
                    item(sleepQ,state).\nscale(quality,good,fair,poor).\ndomain(sleepQ,quality).\n";
        let model = parse_model(text).unwrap();
        assert!(matches!(model.graph.node_domain("wgt"), Some(ValueDomain::Range { low: 1, .. })));
        assert!(matches!(model.graph.node_domain("sleepQ"), Some(ValueDomain::Scale(s)) if s.name() == "quality"));
        assert!(parse_model("item(a,state).\ndomain(a,nosuch).").is_err());
    }

    #[test]
    fn grid_declarations() {
        let text = "room(bedroom).\nroom(hall).\narea(bedArea,bedroom).\ncell(1,1,bedroom,bedArea).\n\
                    cell(1,2,bedroom,none).\ncell(2,2,hall,none).\nwall(0,0).\n\
                    passage(1,2,bedroom,none,hall,none).\ndata_ex(motion,1,1).\nobject(bed,bedroom,bedArea).\n";
        let model = parse_model(text).unwrap();
        let grid = &model.context.grid;
        assert!(grid.is_wall((0, 0)));
        assert!(grid.is_passage((1, 2)));
        assert_eq!(grid.expected_count((1, 1)), 1);
        assert_eq!(model.context.area_of((1, 1)), Some("bedArea"));
        assert_eq!(model.context.area_of((1, 2)), None);
    }
}
