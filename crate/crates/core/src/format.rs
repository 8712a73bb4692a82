//! JSON file formats for generators, agent lists and command reports.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "alphabet": ["a", "b"],
//!   "states": [{"id": "0", "marked": true}, {"id": "1", "marked": false}],
//!   "initial": "0",
//!   "transitions": [{"from": "0", "event": "a", "to": "1"}]
//! }
//! ```
//!
//! `initial` is `null` (or absent) exactly for the empty generator. An
//! optional `comment` string is carried along and ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automata::{Generator, GeneratorBuilder};
use crate::context::AgentProfile;
use crate::error::{Error, Result};
use crate::event::{Event, EventSet};
use crate::synthesize::{PassRecord, SynthesisReport};
use crate::verify::{Verdict, Witness};

pub const FORMAT_VERSION: u32 = 1;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub id: String,
    #[serde(default)]
    pub marked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: String,
    pub event: Event,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub alphabet: Vec<Event>,
    pub states: Vec<StateEntry>,
    #[serde(default)]
    pub initial: Option<String>,
    #[serde(default)]
    pub transitions: Vec<TransitionEntry>,
}

impl AutomatonFile {
    /// State ids are the generator's labels when those are unique, and the
    /// dense state numbers otherwise.
    pub fn from_generator(g: &Generator) -> Self {
        let labels: BTreeSet<&str> = g.states().map(|q| g.label(q)).collect();
        let use_labels = labels.len() == g.num_states();
        let id = |q| {
            if use_labels {
                g.label(q).to_string()
            } else {
                q.to_string()
            }
        };
        AutomatonFile {
            format_version: FORMAT_VERSION,
            comment: None,
            alphabet: g.alphabet().iter().cloned().collect(),
            states: g
                .states()
                .map(|q| StateEntry {
                    id: id(q),
                    marked: g.is_marked(q),
                })
                .collect(),
            initial: g.initial().map(id),
            transitions: g
                .transitions()
                .map(|(p, e, q)| TransitionEntry {
                    from: id(p),
                    event: e.clone(),
                    to: id(q),
                })
                .collect(),
        }
    }

    pub fn to_generator(&self) -> Result<Generator> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion(self.format_version));
        }
        let alphabet: EventSet = self.alphabet.iter().cloned().collect();
        let mut b = GeneratorBuilder::new(alphabet);
        for s in &self.states {
            b.add_state(s.id.clone(), s.marked)?;
        }
        if let Some(init) = &self.initial {
            b.set_initial(init)?;
        }
        for t in &self.transitions {
            b.add_transition(&t.from, t.event.as_str(), &t.to)?;
        }
        b.build()
    }
}

pub fn parse_generator(text: &str) -> Result<Generator> {
    serde_json::from_str::<AutomatonFile>(text)?.to_generator()
}

pub fn generator_to_json(g: &Generator, comment: Option<&str>) -> String {
    let mut f = AutomatonFile::from_generator(g);
    f.comment = comment.map(str::to_string);
    serde_json::to_string_pretty(&f).expect("plain data") + "\n"
}

pub fn read_generator(path: &Path) -> Result<Generator> {
    parse_generator(&fs::read_to_string(path)?)
}

pub fn write_generator(path: &Path, g: &Generator, comment: Option<&str>) -> Result<()> {
    fs::write(path, generator_to_json(g, comment))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentEntry {
    pub id: String,
    pub observable: Vec<Event>,
    pub controllable: Vec<Event>,
}

/// Agent list; file order is the channel order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentsFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub agents: Vec<AgentEntry>,
}

impl AgentsFile {
    pub fn from_profiles(agents: &[AgentProfile]) -> Self {
        AgentsFile {
            format_version: FORMAT_VERSION,
            comment: None,
            agents: agents
                .iter()
                .map(|a| AgentEntry {
                    id: a.id.clone(),
                    observable: a.observable.iter().cloned().collect(),
                    controllable: a.controllable.iter().cloned().collect(),
                })
                .collect(),
        }
    }

    pub fn to_profiles(&self) -> Result<Vec<AgentProfile>> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::FormatVersion(self.format_version));
        }
        Ok(self
            .agents
            .iter()
            .map(|a| {
                AgentProfile::new(
                    a.id.clone(),
                    a.observable.iter().cloned().collect(),
                    a.controllable.iter().cloned().collect(),
                )
            })
            .collect())
    }
}

pub fn parse_agents(text: &str) -> Result<Vec<AgentProfile>> {
    serde_json::from_str::<AgentsFile>(text)?.to_profiles()
}

pub fn agents_to_json(agents: &[AgentProfile], comment: Option<&str>) -> String {
    let mut f = AgentsFile::from_profiles(agents);
    f.comment = comment.map(str::to_string);
    serde_json::to_string_pretty(&f).expect("plain data") + "\n"
}

pub fn read_agents(path: &Path) -> Result<Vec<AgentProfile>> {
    parse_agents(&fs::read_to_string(path)?)
}

/// `--json` report of `coobs check`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub schema_version: u32,
    pub property: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub explored: usize,
}

impl CheckReport {
    pub fn new(property: &str, v: &Verdict) -> Self {
        CheckReport {
            schema_version: SCHEMA_VERSION,
            property: property.to_string(),
            holds: v.holds,
            witness: v.witness.clone(),
            explored: v.explored,
        }
    }
}

/// `--json` report of `coobs synth`. `result` is the path the result was
/// written to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthReport {
    pub schema_version: u32,
    pub algorithm: String,
    pub result: String,
    pub empty: bool,
    pub states: usize,
    pub transitions: usize,
    pub outer_passes: usize,
    pub passes: Vec<PassRecord>,
    pub recheck: BTreeMap<String, bool>,
}

impl SynthReport {
    pub fn new(result: &str, r: &SynthesisReport) -> Self {
        SynthReport {
            schema_version: SCHEMA_VERSION,
            algorithm: r.algorithm.clone(),
            result: result.to_string(),
            empty: r.is_empty(),
            states: r.result.num_states(),
            transitions: r.result.num_transitions(),
            outer_passes: r.outer_passes,
            passes: r.passes.clone(),
            recheck: r.recheck.clone(),
        }
    }
}
