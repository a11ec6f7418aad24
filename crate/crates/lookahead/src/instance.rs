//! Instance files: exact JSON schemas for the four game families, with a
//! loader, canonical serializer and round-trip guarantees.

use crate::games::{cost_sharing_game, sncg_from_term, ConsensusGame, CostSharingSpec};
use crate::model::{Action, CongestionGame, DelayTable, Monotonicity};
use crate::network::SPTerm;
use crate::rational::{rational_from_value, Rational};
use crate::{Error, Result};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::Path;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Congestion,
    SncgTerm,
    CostSharing,
    Consensus,
}

impl Family {
    pub fn id(self) -> &'static str {
        match self {
            Family::Congestion => "congestion",
            Family::SncgTerm => "sncg-term",
            Family::CostSharing => "cost-sharing",
            Family::Consensus => "consensus",
        }
    }

    pub fn from_id(id: &str) -> Result<Family> {
        Ok(match id {
            "congestion" => Family::Congestion,
            "sncg-term" => Family::SncgTerm,
            "cost-sharing" => Family::CostSharing,
            "consensus" => Family::Consensus,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Metadata {
    pub name: Option<String>,
    pub source: Option<String>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum Payload {
    Congestion {
        players: usize,
        resources: Vec<String>,
        delays: Vec<DelayTable>,
        /// Per player, a set of actions, each a list of resource names.
        actions: Vec<Vec<Vec<String>>>,
    },
    SncgTerm {
        players: usize,
        term: SPTerm,
        delays: BTreeMap<String, DelayTable>,
    },
    CostSharing {
        players: usize,
        resources: Vec<String>,
        spec: CostSharingSpec,
        actions: Vec<Vec<Vec<String>>>,
    },
    Consensus {
        vertices: usize,
        edges: Vec<(usize, usize, Rational)>,
    },
}

#[derive(Clone, PartialEq, Debug)]
pub struct InstanceFile {
    pub version: u64,
    pub family: Family,
    pub metadata: Metadata,
    pub payload: Payload,
}

/// A built game plus loader notes.
#[derive(Clone, Debug)]
pub enum Built {
    Congestion(CongestionGame),
    Consensus(ConsensusGame),
}

#[derive(Clone, Debug)]
pub struct BuiltInstance {
    pub game: Built,
    /// True when the loader repeated last table values to reach length n+1.
    pub tables_extended: bool,
}

impl BuiltInstance {
    pub fn congestion(&self) -> Result<&CongestionGame> {
        match &self.game {
            Built::Congestion(g) => Ok(g),
            Built::Consensus(_) => {
                Err(Error::Invalid("expected a congestion-family instance".into()))
            }
        }
    }

    pub fn consensus(&self) -> Result<&ConsensusGame> {
        match &self.game {
            Built::Consensus(g) => Ok(g),
            Built::Congestion(_) => {
                Err(Error::Invalid("expected a consensus instance".into()))
            }
        }
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}: {e}", e.line())))?;
    reject_floats(&value, "$")?;
    let obj = as_object(&value, "$")?;
    let version = field(obj, "version")?
        .as_u64()
        .ok_or_else(|| Error::Parse("version must be a positive integer".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format version {version} (expected {FORMAT_VERSION})"
        )));
    }
    let family = Family::from_id(
        field(obj, "family")?
            .as_str()
            .ok_or_else(|| Error::Parse("family must be a string".into()))?,
    )?;
    let metadata = match obj.get("metadata") {
        None | Some(Value::Null) => Metadata::default(),
        Some(v) => {
            let m = as_object(v, "metadata")?;
            Metadata {
                name: opt_string(m, "name")?,
                source: opt_string(m, "source")?,
            }
        }
    };
    let payload = parse_payload(family, field(obj, "payload")?)?;
    Ok(InstanceFile { version, family, metadata, payload })
}

fn reject_floats(value: &Value, path: &str) -> Result<()> {
    match value {
        Value::Number(n) if n.as_i64().is_none() && n.as_u64().is_none() => Err(Error::Parse(
            format!("{path}: inexact number {n}; write rationals as [num, den]"),
        )),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                reject_floats(item, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        Value::Object(map) => {
            for (k, v) in map {
                reject_floats(v, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn as_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be an object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn opt_string(obj: &Map<String, Value>, key: &str) -> Result<Option<String>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(other) => Err(Error::Parse(format!("{key} must be a string, got {other}"))),
    }
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("{key} must be a non-negative integer")))
}

fn rational_at(value: &Value, path: &str) -> Result<Rational> {
    rational_from_value(value).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn string_list(value: &Value, what: &str) -> Result<Vec<String>> {
    value
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("{what} entries must be strings")))
        })
        .collect()
}

/// A delay table is either a bare value list (monotonicity inferred) or
/// `{"monotonicity": ..., "values": [...]}`.
fn parse_table(value: &Value, path: &str) -> Result<DelayTable> {
    let (values, monotonicity) = match value {
        Value::Array(items) => {
            let values = items
                .iter()
                .enumerate()
                .map(|(i, v)| rational_at(v, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let non_dec = values.windows(2).all(|w| w[0] <= w[1]);
            let non_inc = values.windows(2).all(|w| w[0] >= w[1]);
            let m = if non_dec {
                Monotonicity::NonDecreasing
            } else if non_inc {
                Monotonicity::NonIncreasing
            } else {
                Monotonicity::Unrestricted
            };
            (values, m)
        }
        Value::Object(obj) => {
            let m = match field(obj, "monotonicity")?.as_str() {
                Some("non-decreasing") => Monotonicity::NonDecreasing,
                Some("non-increasing") => Monotonicity::NonIncreasing,
                Some("unrestricted") => Monotonicity::Unrestricted,
                other => {
                    return Err(Error::Parse(format!(
                        "{path}: bad monotonicity {other:?}"
                    )))
                }
            };
            let values = field(obj, "values")?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{path}.values must be an array")))?
                .iter()
                .enumerate()
                .map(|(i, v)| rational_at(v, &format!("{path}.values[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            (values, m)
        }
        other => return Err(Error::Parse(format!("{path}: bad delay table {other}"))),
    };
    DelayTable::new(values, monotonicity)
        .map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn table_to_value(table: &DelayTable) -> Value {
    let values: Vec<Value> = table
        .values()
        .iter()
        .map(|v| serde_json::to_value(v).expect("rational serializes"))
        .collect();
    let m = match table.monotonicity() {
        Monotonicity::NonDecreasing => "non-decreasing",
        Monotonicity::NonIncreasing => "non-increasing",
        Monotonicity::Unrestricted => "unrestricted",
    };
    json!({ "monotonicity": m, "values": values })
}

fn parse_actions(value: &Value, players: usize) -> Result<Vec<Vec<Vec<String>>>> {
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Parse("actions must be an array".into()))?;
    if rows.len() != players {
        return Err(Error::Parse(format!(
            "actions lists {} players, expected {players}",
            rows.len()
        )));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.as_array()
                .ok_or_else(|| Error::Parse(format!("actions[{i}] must be an array")))?
                .iter()
                .map(|a| string_list(a, &format!("actions[{i}] entry")))
                .collect()
        })
        .collect()
}

/// `["S", a, b, …]` / `["P", a, b, …]` / `"name"`; n-ary nodes fold to the
/// right.
pub fn parse_term(value: &Value) -> Result<SPTerm> {
    match value {
        Value::String(name) => Ok(SPTerm::single(name)),
        Value::Array(items) => {
            let Some(tag) = items.first().and_then(Value::as_str) else {
                return Err(Error::Parse(
                    "term arrays must start with \"S\" or \"P\"".into(),
                ));
            };
            if items.len() < 3 {
                return Err(Error::Parse(
                    "term arrays need at least two operands".into(),
                ));
            }
            let operands = items[1..]
                .iter()
                .map(parse_term)
                .collect::<Result<Vec<_>>>()?;
            let combine = match tag {
                "S" => SPTerm::series,
                "P" => SPTerm::parallel,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown term operator {other:?} (expected \"S\" or \"P\")"
                    )))
                }
            };
            let mut it = operands.into_iter().rev();
            let mut acc = it.next().expect("at least two operands");
            for next in it {
                acc = combine(next, acc);
            }
            Ok(acc)
        }
        other => Err(Error::Parse(format!("bad term node {other}"))),
    }
}

pub fn term_to_value(term: &SPTerm) -> Value {
    match term {
        SPTerm::Single(name) => Value::String(name.clone()),
        SPTerm::Series(a, b) => json!(["S", term_to_value(a), term_to_value(b)]),
        SPTerm::Parallel(a, b) => json!(["P", term_to_value(a), term_to_value(b)]),
    }
}

fn parse_payload(family: Family, value: &Value) -> Result<Payload> {
    let obj = as_object(value, "payload")?;
    match family {
        Family::Congestion => {
            let players = usize_field(obj, "players")?;
            let resources = string_list(field(obj, "resources")?, "resources")?;
            let delays = field(obj, "delays")?
                .as_array()
                .ok_or_else(|| Error::Parse("delays must be an array".into()))?
                .iter()
                .enumerate()
                .map(|(i, v)| parse_table(v, &format!("delays[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let actions = parse_actions(field(obj, "actions")?, players)?;
            Ok(Payload::Congestion { players, resources, delays, actions })
        }
        Family::SncgTerm => {
            let players = usize_field(obj, "players")?;
            let term = parse_term(field(obj, "term")?)?;
            let map = as_object(field(obj, "delays")?, "delays")?;
            let delays = map
                .iter()
                .map(|(k, v)| Ok((k.clone(), parse_table(v, &format!("delays.{k}"))?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(Payload::SncgTerm { players, term, delays })
        }
        Family::CostSharing => {
            let players = usize_field(obj, "players")?;
            let resources = string_list(field(obj, "resources")?, "resources")?;
            let spec = match field(obj, "delays")? {
                Value::Object(d) if d.contains_key("axb") => {
                    let pairs = field(d, "axb")?
                        .as_array()
                        .ok_or_else(|| Error::Parse("axb must be an array".into()))?
                        .iter()
                        .enumerate()
                        .map(|(i, pair)| {
                            let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(
                                || Error::Parse(format!("axb[{i}] must be [a, b]")),
                            )?;
                            Ok((
                                rational_at(&p[0], &format!("axb[{i}][0]"))?,
                                rational_at(&p[1], &format!("axb[{i}][1]"))?,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    CostSharingSpec::Axb(pairs)
                }
                Value::Object(d) if d.contains_key("tables") => {
                    let tables = field(d, "tables")?
                        .as_array()
                        .ok_or_else(|| Error::Parse("tables must be an array".into()))?
                        .iter()
                        .enumerate()
                        .map(|(i, v)| parse_table(v, &format!("tables[{i}]")))
                        .collect::<Result<Vec<_>>>()?;
                    CostSharingSpec::Tables(tables)
                }
                other => {
                    return Err(Error::Parse(format!(
                        "delays must hold \"tables\" or \"axb\", got {other}"
                    )))
                }
            };
            let actions = parse_actions(field(obj, "actions")?, players)?;
            Ok(Payload::CostSharing { players, resources, spec, actions })
        }
        Family::Consensus => {
            let vertices = usize_field(obj, "vertices")?;
            let edges = field(obj, "edges")?
                .as_array()
                .ok_or_else(|| Error::Parse("edges must be an array".into()))?
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let triple = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| {
                        Error::Parse(format!("edges[{i}] must be [u, v, weight]"))
                    })?;
                    let u = triple[0].as_u64().ok_or_else(|| {
                        Error::Parse(format!("edges[{i}]: bad endpoint"))
                    })? as usize;
                    let v = triple[1].as_u64().ok_or_else(|| {
                        Error::Parse(format!("edges[{i}]: bad endpoint"))
                    })? as usize;
                    let w = rational_at(&triple[2], &format!("edges[{i}][2]"))?;
                    Ok((u, v, w))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Payload::Consensus { vertices, edges })
        }
    }
}

impl InstanceFile {
    pub fn new(family: Family, payload: Payload) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            family,
            metadata: Metadata::default(),
            payload,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.metadata.name = Some(name.to_string());
        self
    }

    pub fn to_json(&self) -> Value {
        let payload = match &self.payload {
            Payload::Congestion { players, resources, delays, actions } => json!({
                "players": players,
                "resources": resources,
                "delays": delays.iter().map(table_to_value).collect::<Vec<_>>(),
                "actions": actions,
            }),
            Payload::SncgTerm { players, term, delays } => json!({
                "players": players,
                "term": term_to_value(term),
                "delays": delays
                    .iter()
                    .map(|(k, t)| (k.clone(), table_to_value(t)))
                    .collect::<Map<_, _>>(),
            }),
            Payload::CostSharing { players, resources, spec, actions } => {
                let delays = match spec {
                    CostSharingSpec::Tables(tables) => json!({
                        "tables": tables.iter().map(table_to_value).collect::<Vec<_>>(),
                    }),
                    CostSharingSpec::Axb(pairs) => json!({
                        "axb": pairs
                            .iter()
                            .map(|(a, b)| json!([a, b]))
                            .collect::<Vec<_>>(),
                    }),
                };
                json!({
                    "players": players,
                    "resources": resources,
                    "delays": delays,
                    "actions": actions,
                })
            }
            Payload::Consensus { vertices, edges } => json!({
                "vertices": vertices,
                "edges": edges
                    .iter()
                    .map(|(u, v, w)| json!([u, v, w]))
                    .collect::<Vec<_>>(),
            }),
        };
        let mut root = Map::new();
        root.insert("version".into(), json!(self.version));
        root.insert("family".into(), json!(self.family.id()));
        if self.metadata.name.is_some() || self.metadata.source.is_some() {
            let mut m = Map::new();
            if let Some(n) = &self.metadata.name {
                m.insert("name".into(), json!(n));
            }
            if let Some(s) = &self.metadata.source {
                m.insert("source".into(), json!(s));
            }
            root.insert("metadata".into(), Value::Object(m));
        }
        root.insert("payload".into(), payload);
        Value::Object(root)
    }

    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    /// Constructs the game. Congestion-family delay tables are extended to
    /// length n+1 by repeating the last value when shorter.
    pub fn build(&self) -> Result<BuiltInstance> {
        match &self.payload {
            Payload::Congestion { players, resources, delays, actions } => {
                let (tables, extended) = extend_tables(delays, *players);
                let action_sets = resolve_actions(resources, actions)?;
                let game = CongestionGame::new(
                    (0..*players).collect(),
                    resources.clone(),
                    action_sets,
                    tables,
                )?;
                Ok(BuiltInstance { game: Built::Congestion(game), tables_extended: extended })
            }
            Payload::SncgTerm { players, term, delays } => {
                let mut extended = false;
                let full: BTreeMap<String, DelayTable> = delays
                    .iter()
                    .map(|(k, t)| {
                        if t.len() < players + 1 {
                            extended = true;
                            (k.clone(), t.extended(players + 1))
                        } else {
                            (k.clone(), t.clone())
                        }
                    })
                    .collect();
                let game = sncg_from_term(term, &full, *players)?;
                Ok(BuiltInstance { game: Built::Congestion(game), tables_extended: extended })
            }
            Payload::CostSharing { players, resources, spec, actions } => {
                let (spec, extended) = match spec {
                    CostSharingSpec::Tables(tables) => {
                        let (t, e) = extend_tables(tables, *players);
                        (CostSharingSpec::Tables(t), e)
                    }
                    axb => (axb.clone(), false),
                };
                let action_sets = resolve_actions(resources, actions)?;
                let game = cost_sharing_game(&spec, resources.clone(), action_sets, *players)?;
                Ok(BuiltInstance { game: Built::Congestion(game), tables_extended: extended })
            }
            Payload::Consensus { vertices, edges } => {
                let game = ConsensusGame::new(*vertices, edges.clone())?;
                Ok(BuiltInstance { game: Built::Consensus(game), tables_extended: false })
            }
        }
    }
}

fn extend_tables(tables: &[DelayTable], players: usize) -> (Vec<DelayTable>, bool) {
    let mut extended = false;
    let out = tables
        .iter()
        .map(|t| {
            if t.len() < players + 1 {
                extended = true;
                t.extended(players + 1)
            } else {
                t.clone()
            }
        })
        .collect();
    (out, extended)
}

fn resolve_actions(
    resources: &[String],
    actions: &[Vec<Vec<String>>],
) -> Result<Vec<Vec<Action>>> {
    let index: BTreeMap<&str, usize> = resources
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_str(), i))
        .collect();
    actions
        .iter()
        .map(|menu| {
            menu.iter()
                .map(|names| {
                    Ok(Action::new(
                        names
                            .iter()
                            .map(|n| {
                                index.get(n.as_str()).copied().ok_or_else(|| {
                                    Error::Parse(format!("unknown resource {n:?} in action"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    ))
                })
                .collect()
        })
        .collect()
}

/// Instance descriptions of the games returned by the random generators, for
/// `generate`.
pub fn sncg_instance(term: &SPTerm, game: &CongestionGame) -> Payload {
    let delays = term
        .resources()
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, game.delay(i).clone()))
        .collect();
    Payload::SncgTerm {
        players: game.n_players(),
        term: term.clone(),
        delays,
    }
}

fn action_names(game: &CongestionGame) -> Result<Vec<Vec<Vec<String>>>> {
    game.players()
        .iter()
        .map(|&p| {
            Ok(game
                .actions_of(p)?
                .iter()
                .map(|a| {
                    a.resources()
                        .iter()
                        .map(|&r| game.resources()[r].clone())
                        .collect()
                })
                .collect())
        })
        .collect()
}

pub fn congestion_instance(game: &CongestionGame) -> Result<Payload> {
    Ok(Payload::Congestion {
        players: game.n_players(),
        resources: game.resources().to_vec(),
        delays: game.delays().to_vec(),
        actions: action_names(game)?,
    })
}

pub fn cost_sharing_instance(game: &CongestionGame) -> Result<Payload> {
    let actions = action_names(game)?;
    Ok(Payload::CostSharing {
        players: game.n_players(),
        resources: game.resources().to_vec(),
        spec: CostSharingSpec::Tables(game.delays().to_vec()),
        actions,
    })
}

pub fn consensus_instance(game: &ConsensusGame) -> Payload {
    Payload::Consensus {
        vertices: game.n_players(),
        edges: game.edges().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{random_consensus, random_sncg, DelayStyle};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_term_grammar() {
        let t = parse_term(&json!(["P", ["S", "b", ["P", "l", "s"]], "m"])).unwrap();
        assert_eq!(t.resources(), vec!["b", "l", "s", "m"]);
        // n-ary folds right
        let t = parse_term(&json!(["S", "a", "b", "c"])).unwrap();
        assert_eq!(
            t,
            SPTerm::series(
                SPTerm::single("a"),
                SPTerm::series(SPTerm::single("b"), SPTerm::single("c"))
            )
        );
        assert!(parse_term(&json!(["X", "a", "b"])).is_err());
        assert!(parse_term(&json!(["S", "a"])).is_err());
    }

    #[test]
    fn rejects_floats_anywhere() {
        let text = r#"{"version": 1, "family": "consensus",
                       "payload": {"vertices": 2, "edges": [[0, 1, 1.5]]}}"#;
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("inexact")), "{err}");
    }

    #[test]
    fn round_trip_all_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (term, game) = random_sncg(&mut rng, 5, 3, true, DelayStyle::Coarse).unwrap();
        let consensus = random_consensus(&mut rng, 4, 10);
        let cost = crate::games::random_cost_sharing(&mut rng, 3, 3, false).unwrap();
        let intro = crate::fixtures::intro_game();
        let instances = vec![
            InstanceFile::new(Family::SncgTerm, sncg_instance(&term, &game)),
            InstanceFile::new(Family::Consensus, consensus_instance(&consensus)),
            InstanceFile::new(Family::CostSharing, cost_sharing_instance(&cost).unwrap())
                .named("cs"),
            InstanceFile::new(
                Family::Congestion,
                Payload::Congestion {
                    players: intro.n_players(),
                    resources: intro.resources().to_vec(),
                    delays: intro.delays().to_vec(),
                    actions: intro
                        .players()
                        .iter()
                        .map(|&p| {
                            intro
                                .actions_of(p)
                                .unwrap()
                                .iter()
                                .map(|a| {
                                    a.resources()
                                        .iter()
                                        .map(|&r| intro.resources()[r].clone())
                                        .collect()
                                })
                                .collect()
                        })
                        .collect(),
                },
            ),
        ];
        for inst in instances {
            let text = inst.to_string_pretty();
            let back = parse_instance(&text).unwrap();
            assert_eq!(back, inst);
            back.build().unwrap();
        }
    }

    #[test]
    fn table_extension_is_recorded() {
        let text = r#"{"version": 1, "family": "congestion", "payload": {
            "players": 2,
            "resources": ["r"],
            "delays": [[1, 2]],
            "actions": [[["r"]], [["r"]]]
        }}"#;
        let inst = parse_instance(text).unwrap();
        let built = inst.build().unwrap();
        assert!(built.tables_extended);
        let g = built.congestion().unwrap();
        assert_eq!(g.delay(0).value(3).unwrap(), &Rational::int(2));
    }

    #[test]
    fn monotonicity_is_inferred_for_bare_lists() {
        let t = parse_table(&json!([1, 2, 3]), "t").unwrap();
        assert_eq!(t.monotonicity(), Monotonicity::NonDecreasing);
        let t = parse_table(&json!([3, [3, 2], 1]), "t").unwrap();
        assert_eq!(t.monotonicity(), Monotonicity::NonIncreasing);
        let t = parse_table(&json!([1, 5, 2]), "t").unwrap();
        assert_eq!(t.monotonicity(), Monotonicity::Unrestricted);
    }

    #[test]
    #[ignore = "rewrites the bundled fixture files in place"]
    fn regenerate_fixture_files() {
        use crate::fixtures;
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        std::fs::create_dir_all(&dir).unwrap();
        let congestion = [
            ("intro", fixtures::intro_game()),
            ("example1", fixtures::example1_game()),
            ("curse-of-ties", fixtures::curse_of_ties_game()),
            ("prop6", fixtures::prop6_game()),
            ("example3", fixtures::example3_game(5)),
            ("example4", fixtures::example4_game(4)),
        ];
        for (name, game) in congestion {
            let inst = InstanceFile::new(Family::Congestion, congestion_instance(&game).unwrap())
                .named(name);
            std::fs::write(dir.join(format!("{name}.json")), inst.to_string_pretty()).unwrap();
        }
        for (name, game) in [
            ("example2", fixtures::example2_game()),
            ("thm11", fixtures::thm11_game()),
        ] {
            let inst =
                InstanceFile::new(Family::CostSharing, cost_sharing_instance(&game).unwrap())
                    .named(name);
            std::fs::write(dir.join(format!("{name}.json")), inst.to_string_pretty()).unwrap();
        }
        let inst = InstanceFile::new(
            Family::Consensus,
            consensus_instance(&fixtures::example5_consensus()),
        )
        .named("example5");
        std::fs::write(dir.join("example5.json"), inst.to_string_pretty()).unwrap();
    }

    #[test]
    fn bundled_fixture_files_parse_and_build() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for name in [
            "intro",
            "example1",
            "curse-of-ties",
            "prop6",
            "example2",
            "example3",
            "example4",
            "thm11",
            "example5",
        ] {
            let inst = load_instance(&dir.join(format!("{name}.json"))).unwrap();
            inst.build().unwrap();
        }
    }

    #[test]
    fn version_and_family_are_checked() {
        assert!(matches!(
            parse_instance(r#"{"version": 9, "family": "consensus", "payload": {}}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_instance(r#"{"version": 1, "family": "chess", "payload": {}}"#),
            Err(Error::Parse(_))
        ));
    }
}
