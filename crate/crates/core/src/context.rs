use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::{includes, trim, Generator, Mode};
use crate::error::{Error, Result};
use crate::event::{Event, EventSet};

/// One decentralized supervisor: the events it observes and the events it
/// may disable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentProfile {
    pub id: String,
    pub observable: EventSet,
    pub controllable: EventSet,
}

impl AgentProfile {
    pub fn new(id: impl Into<String>, observable: EventSet, controllable: EventSet) -> Self {
        AgentProfile {
            id: id.into(),
            observable,
            controllable,
        }
    }
}

/// A nonblocking plant with an ordered list of agents. The agent order is
/// the channel order used by the synthesis loops.
#[derive(Clone, Debug)]
pub struct ControlContext {
    plant: Generator,
    agents: Vec<AgentProfile>,
}

impl ControlContext {
    pub fn new(plant: Generator, agents: Vec<AgentProfile>) -> Result<Self> {
        if let Some(w) = plant.blocking_witness() {
            return Err(Error::BlockingPlant(w));
        }
        if agents.is_empty() {
            return Err(Error::NoAgents);
        }
        let mut ids = BTreeSet::new();
        for a in &agents {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::DuplicateAgent(a.id.clone()));
            }
            for e in a.observable.iter().chain(&a.controllable) {
                if !plant.alphabet().contains(e) {
                    return Err(Error::UnknownEvent(e.clone()));
                }
            }
        }
        Ok(ControlContext { plant, agents })
    }

    pub fn plant(&self) -> &Generator {
        &self.plant
    }

    pub fn alphabet(&self) -> &EventSet {
        self.plant.alphabet()
    }

    pub fn agents(&self) -> &[AgentProfile] {
        &self.agents
    }

    pub fn agent(&self, index: usize) -> &AgentProfile {
        &self.agents[index]
    }

    pub fn agent_index(&self, id: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownAgent(id.to_string()))
    }

    /// Same plant, agents reordered (or subset) by index.
    pub fn with_agent_order(&self, order: &[usize]) -> Result<Self> {
        ControlContext::new(
            self.plant.clone(),
            order.iter().map(|&i| self.agents[i].clone()).collect(),
        )
    }

    /// `Σ_c`, the union of all agents' controllable events.
    pub fn controllable(&self) -> EventSet {
        self.agents
            .iter()
            .flat_map(|a| a.controllable.iter().cloned())
            .collect()
    }

    /// `Σ_u = Σ ∖ Σ_c`.
    pub fn uncontrollable(&self) -> EventSet {
        let c = self.controllable();
        self.alphabet().difference(&c).cloned().collect()
    }

    /// Indices of the agents that control `e`.
    pub fn owners(&self, e: &Event) -> Vec<usize> {
        self.agents
            .iter()
            .enumerate()
            .filter(|(_, a)| a.controllable.contains(e))
            .map(|(i, _)| i)
            .collect()
    }

    /// Events controlled by two or more agents.
    pub fn shared_controllable(&self) -> EventSet {
        self.controllable()
            .into_iter()
            .filter(|e| self.owners(e).len() > 1)
            .collect()
    }

    pub fn unobservable(&self, index: usize) -> EventSet {
        self.alphabet()
            .difference(&self.agents[index].observable)
            .cloned()
            .collect()
    }

    /// Pads `g` to the plant alphabet, rejecting foreign events.
    pub fn conform(&self, g: &Generator) -> Result<Generator> {
        g.with_alphabet(self.alphabet())
    }

    /// Checks `L_m(g) ⊆ L_m(plant)`.
    pub fn check_within_plant(&self, g: &Generator, what: &'static str) -> Result<Generator> {
        let g = self.conform(g)?;
        ensure_sublanguage(&g, what, &self.plant, "plant")?;
        Ok(g)
    }
}

pub(crate) fn ensure_sublanguage(
    inner: &Generator,
    inner_name: &'static str,
    outer: &Generator,
    outer_name: &'static str,
) -> Result<()> {
    let inc = includes(outer, inner, Mode::Marked);
    match inc.counterexample {
        None => Ok(()),
        Some(witness) => Err(Error::NotSublanguage {
            inner: inner_name,
            outer: outer_name,
            witness,
        }),
    }
}

/// A specification `K` with its ambient language `C`,
/// validated so that `L_m(K) ⊆ L_m(C) ⊆ L_m(plant)`. Both are stored trim.
#[derive(Clone, Debug)]
pub struct LanguagePair {
    spec: Generator,
    ambient: Generator,
}

impl LanguagePair {
    /// `ambient = None` means `C := K`.
    pub fn new(
        spec: &Generator,
        ambient: Option<&Generator>,
        ctx: &ControlContext,
    ) -> Result<Self> {
        let spec = trim(&ctx.conform(spec)?);
        let ambient = match ambient {
            Some(c) => trim(&ctx.conform(c)?),
            None => spec.clone(),
        };
        ensure_sublanguage(&ambient, "ambient", ctx.plant(), "plant")?;
        ensure_sublanguage(&spec, "spec", &ambient, "ambient")?;
        Ok(LanguagePair { spec, ambient })
    }

    pub fn spec(&self) -> &Generator {
        &self.spec
    }

    pub fn ambient(&self) -> &Generator {
        &self.ambient
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::GeneratorBuilder;
    use crate::event::events;

    fn plant() -> Generator {
        let mut b = GeneratorBuilder::new(events(["a", "b"]));
        b.add_state("0", false).unwrap();
        b.add_state("1", true).unwrap();
        b.set_initial("0").unwrap();
        b.add_transition("0", "a", "1").unwrap();
        b.add_transition("1", "b", "0").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn derived_event_sets() {
        let ctx = ControlContext::new(
            plant(),
            vec![
                AgentProfile::new("1", events(["a"]), events(["a"])),
                AgentProfile::new("2", events(["b"]), events(["a"])),
            ],
        )
        .unwrap();
        assert_eq!(ctx.controllable(), events(["a"]));
        assert_eq!(ctx.uncontrollable(), events(["b"]));
        assert_eq!(ctx.shared_controllable(), events(["a"]));
        assert_eq!(ctx.owners(&Event::new("a")), vec![0, 1]);
        assert_eq!(ctx.unobservable(0), events(["b"]));
        assert!(matches!(ctx.agent_index("9"), Err(Error::UnknownAgent(_))));
    }

    #[test]
    fn rejects_bad_contexts() {
        let mut b = GeneratorBuilder::new(events(["a"]));
        b.add_state("0", true).unwrap();
        b.add_state("dead", false).unwrap();
        b.set_initial("0").unwrap();
        b.add_transition("0", "a", "dead").unwrap();
        let blocking = b.build().unwrap();
        assert!(matches!(
            ControlContext::new(
                blocking,
                vec![AgentProfile::new("1", events(["a"]), events(["a"]))]
            ),
            Err(Error::BlockingPlant(_))
        ));
        assert!(matches!(
            ControlContext::new(plant(), vec![]),
            Err(Error::NoAgents)
        ));
        assert!(matches!(
            ControlContext::new(
                plant(),
                vec![AgentProfile::new("1", events(["zz"]), EventSet::new())]
            ),
            Err(Error::UnknownEvent(_))
        ));
        let a = AgentProfile::new("1", EventSet::new(), EventSet::new());
        assert!(matches!(
            ControlContext::new(plant(), vec![a.clone(), a]),
            Err(Error::DuplicateAgent(_))
        ));
    }

    #[test]
    fn language_pair_checks_inclusions() {
        let ctx = ControlContext::new(
            plant(),
            vec![AgentProfile::new("1", events(["a", "b"]), events(["a"]))],
        )
        .unwrap();
        let p = ctx.plant().clone();
        assert!(LanguagePair::new(&p, None, &ctx).is_ok());
        let eps = Generator::epsilon(events(["a", "b"]), true);
        assert!(matches!(
            LanguagePair::new(&eps, None, &ctx),
            Err(Error::NotSublanguage { outer: "plant", .. })
        ));
    }
}
