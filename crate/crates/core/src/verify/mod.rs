//! Decision procedures with counterexample witnesses.
//!
//! Every check explores a finite verifier product breadth-first, expanding
//! events in lexicographic order, so a failing [`Verdict`] always carries a
//! shortest witness with deterministic tie-breaking.
//!
//! Relative coobservability is decided channel by channel on a pair
//! verifier (one copy tracks `s` through the ambient closure, one tracks the
//! lookalike `s′` through the spec closure). Conjunctive and disjunctive
//! coobservability couple all channels in one implication and are decided
//! on a tuple verifier with one copy per agent plus one for `s`.
//!
//! With more than two agents, conjunctive and disjunctive coobservability
//! use the owner-set generalization: a controllable event needs one lookalike
//! per agent that controls it. This generalization is experimental.

mod pair;
mod tuple;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::automata::{
    includes, inverse_project_selfloop, meet, project, Generator, Mode, StateId,
};
use crate::context::{ControlContext, LanguagePair};
use crate::error::Result;
use crate::event::{Event, EventSet, Trace};

pub(crate) use pair::relobs_scan;
pub use pair::relobs_witnesses;
pub use tuple::{check_conj_coobservable, check_disj_coobservable};

/// Which clause of which definition a witness violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "coobs-i")]
    CoobsShared,
    #[serde(rename = "coobs-ii")]
    CoobsFirst,
    #[serde(rename = "coobs-iii")]
    CoobsSecond,
    #[serde(rename = "relobs")]
    RelObs,
    #[serde(rename = "disj-i")]
    DisjShared,
    #[serde(rename = "disj-ii")]
    DisjFirst,
    #[serde(rename = "disj-iii")]
    DisjSecond,
    #[serde(rename = "controllability")]
    Controllability,
    #[serde(rename = "closedness")]
    Closedness,
    #[serde(rename = "normality")]
    Normality,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_value(self).expect("unit variant");
        f.write_str(text.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lookalike {
    pub agent: String,
    pub string: Trace,
}

/// A violation certificate. `s` is the string after which `event` is
/// wrongly enabled or disabled; `s_prime`/`s_dprime` are the lookalikes
/// through the first/second channel when the condition involves them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub s: Trace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_prime: Option<Trace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_dprime: Option<Trace>,
    pub event: Event,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    pub condition: Condition,
    /// Lookalike per owning agent, for the tuple-verifier conditions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lookalikes: Vec<Lookalike>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={}", self.s)?;
        if let Some(sp) = &self.s_prime {
            write!(f, " s'={sp}")?;
        }
        if let Some(sd) = &self.s_dprime {
            write!(f, " s''={sd}")?;
        }
        write!(f, " σ={}", self.event)?;
        if let Some(c) = &self.channel {
            write!(f, " channel={c}")?;
        }
        for l in &self.lookalikes {
            if self.s_prime.is_none() && self.s_dprime.is_none() || self.lookalikes.len() > 2 {
                write!(f, " s[{}]={}", l.agent, l.string)?;
            }
        }
        write!(f, " condition={}", self.condition)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Number of verifier states explored.
    pub explored: usize,
}

impl Verdict {
    pub(crate) fn from_witness(witness: Option<Witness>, explored: usize) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
            explored,
        }
    }
}

/// Breadth-first search over an implicit graph with parent pointers, used by
/// every verifier product.
pub(crate) struct Bfs<S, M> {
    nodes: Vec<S>,
    parent: Vec<Option<(usize, M)>>,
    index: HashMap<S, usize>,
    next: usize,
}

impl<S: Clone + Eq + Hash, M: Clone> Bfs<S, M> {
    pub(crate) fn new(init: S) -> Self {
        Bfs {
            nodes: vec![init.clone()],
            parent: vec![None],
            index: HashMap::from([(init, 0)]),
            next: 0,
        }
    }

    pub(crate) fn pop(&mut self) -> Option<(usize, S)> {
        let id = self.next;
        let node = self.nodes.get(id)?.clone();
        self.next += 1;
        Some((id, node))
    }

    pub(crate) fn push(&mut self, from: usize, mv: M, node: S) {
        if !self.index.contains_key(&node) {
            self.index.insert(node.clone(), self.nodes.len());
            self.nodes.push(node);
            self.parent.push(Some((from, mv)));
        }
    }

    pub(crate) fn path(&self, mut id: usize) -> Vec<M> {
        let mut rev = Vec::new();
        while let Some((p, m)) = &self.parent[id] {
            rev.push(m.clone());
            id = *p;
        }
        rev.reverse();
        rev
    }

    pub(crate) fn explored(&self) -> usize {
        self.nodes.len()
    }
}

/// Product of the trim spec with the plant, restricted to `K̄`.
fn spec_in_plant(spec: &Generator, plant: &Generator) -> Option<(StateId, StateId)> {
    spec.initial().zip(plant.initial())
}

/// `K̄ Σ_u ∩ L(G) ⊆ K̄`; witness `(s, u)` with `s ∈ K̄`, `su ∈ L(G) ∖ K̄`.
pub fn check_controllable(spec: &Generator, ctx: &ControlContext) -> Result<Verdict> {
    let k = crate::automata::trim(&ctx.check_within_plant(spec, "spec")?);
    let plant = ctx.plant();
    let uncontrollable = ctx.uncontrollable();
    let Some(init) = spec_in_plant(&k, plant) else {
        return Ok(Verdict::from_witness(None, 0));
    };
    let mut bfs: Bfs<(StateId, StateId), Event> = Bfs::new(init);
    while let Some((id, (q, g))) = bfs.pop() {
        if let Some(u) = uncontrollable
            .iter()
            .find(|u| plant.enables(g, u) && !k.enables(q, u))
        {
            let w = Witness {
                s: Trace(bfs.path(id)),
                s_prime: None,
                s_dprime: None,
                event: u.clone(),
                channel: None,
                condition: Condition::Controllability,
                lookalikes: Vec::new(),
            };
            return Ok(Verdict::from_witness(Some(w), bfs.explored()));
        }
        for (e, q2) in k.out(q) {
            if let Some(g2) = plant.step(g, e) {
                bfs.push(id, e.clone(), (q2, g2));
            }
        }
    }
    Ok(Verdict::from_witness(None, bfs.explored()))
}

/// `K̄ ∩ L_m(G) = K`; witness is a string of `K̄` marked by the plant but not
/// by the spec. The witness event is the last event of that string.
pub fn check_lm_closed(spec: &Generator, ctx: &ControlContext) -> Result<Verdict> {
    let k = crate::automata::trim(&ctx.check_within_plant(spec, "spec")?);
    let plant = ctx.plant();
    let Some(init) = spec_in_plant(&k, plant) else {
        return Ok(Verdict::from_witness(None, 0));
    };
    let mut bfs: Bfs<(StateId, StateId), Event> = Bfs::new(init);
    while let Some((id, (q, g))) = bfs.pop() {
        if plant.is_marked(g) && !k.is_marked(q) {
            let path = bfs.path(id);
            let w = split_last(Trace(path), Condition::Closedness, None);
            return Ok(Verdict::from_witness(Some(w), bfs.explored()));
        }
        for (e, q2) in k.out(q) {
            if let Some(g2) = plant.step(g, e) {
                bfs.push(id, e.clone(), (q2, g2));
            }
        }
    }
    Ok(Verdict::from_witness(None, bfs.explored()))
}

/// Witness for a string-valued violation `t = s·σ`. The empty string has no
/// last event; it is reported with `s = ε` and an empty event name.
fn split_last(t: Trace, condition: Condition, channel: Option<String>) -> Witness {
    let mut s = t.0;
    let event = s.pop().unwrap_or_else(|| Event::new(""));
    Witness {
        s: Trace(s),
        s_prime: None,
        s_dprime: None,
        event,
        channel,
        condition,
        lookalikes: Vec::new(),
    }
}

/// Per-channel relative observability of `K` w.r.t. `C̄` and `P_agent`.
pub fn check_rel_observable(
    pair: &LanguagePair,
    ctx: &ControlContext,
    agent: &str,
) -> Result<Verdict> {
    let idx = ctx.agent_index(agent)?;
    let (ws, explored) = relobs_scan(pair, ctx, idx, false);
    Ok(Verdict::from_witness(ws.into_iter().next(), explored))
}

/// Relative coobservability: relative observability on every channel.
/// The witness reports the first failing channel in agent order.
pub fn check_rel_coobservable(pair: &LanguagePair, ctx: &ControlContext) -> Result<Verdict> {
    let mut explored = 0;
    for idx in 0..ctx.agents().len() {
        let (ws, n) = relobs_scan(pair, ctx, idx, false);
        explored += n;
        if let Some(w) = ws.into_iter().next() {
            return Ok(Verdict::from_witness(Some(w), explored));
        }
    }
    Ok(Verdict::from_witness(None, explored))
}

/// Normality of `K̄` w.r.t. `(L(G), P_agent)`:
/// `P⁻¹P(K̄) ∩ L(G) ⊆ K̄`. The witness `s·σ` lies in the gap and `s_prime`
/// is a string of `K̄` with the same projection.
pub fn check_normal(spec: &Generator, ctx: &ControlContext, agent: &str) -> Result<Verdict> {
    let idx = ctx.agent_index(agent)?;
    let k = ctx.check_within_plant(spec, "spec")?;
    Ok(normal_verdict(&k, ctx, idx))
}

pub(crate) fn normal_verdict(k: &Generator, ctx: &ControlContext, idx: usize) -> Verdict {
    let kbar = k.closure();
    if kbar.is_empty() {
        return Verdict::from_witness(None, 0);
    }
    let observable = &ctx.agent(idx).observable;
    let silent: EventSet = ctx.unobservable(idx);
    let observed = project(&kbar, observable).expect("observable ⊆ alphabet");
    let lifted = inverse_project_selfloop(&observed, &silent).expect("disjoint by construction");
    let within = meet(&lifted, &ctx.plant().all_marked()).expect("same alphabet");
    let explored = within.num_states();
    let inc = includes(&kbar, &within, Mode::Closed);
    let witness = inc.counterexample.map(|t| {
        let lookalike = lookalike_in(&kbar, &t.project(observable), observable);
        let mut w = split_last(t, Condition::Normality, Some(ctx.agent(idx).id.clone()));
        w.s_prime = lookalike;
        w
    });
    Verdict::from_witness(witness, explored)
}

/// Shortest string of `L(g)` whose projection onto `observable` is `target`.
pub(crate) fn lookalike_in(g: &Generator, target: &Trace, observable: &EventSet) -> Option<Trace> {
    let mut bfs: Bfs<(StateId, usize), Event> = Bfs::new((g.initial()?, 0));
    while let Some((id, (q, pos))) = bfs.pop() {
        if pos == target.len() {
            return Some(Trace(bfs.path(id)));
        }
        for (e, q2) in g.out(q) {
            if !observable.contains(e) {
                bfs.push(id, e.clone(), (q2, pos));
            } else if target.events()[pos] == *e {
                bfs.push(id, e.clone(), (q2, pos + 1));
            }
        }
    }
    None
}

/// Conormality, decided as normality on every channel: each term
/// `P_i⁻¹P_i(K̄) ∩ L(G)` contains `K̄`, so their union equals `K̄` exactly
/// when every term does.
pub fn check_conormal(spec: &Generator, ctx: &ControlContext) -> Result<Verdict> {
    let k = ctx.check_within_plant(spec, "spec")?;
    let mut explored = 0;
    for idx in 0..ctx.agents().len() {
        let v = normal_verdict(&k, ctx, idx);
        explored += v.explored;
        if !v.holds {
            return Ok(Verdict { explored, ..v });
        }
    }
    Ok(Verdict::from_witness(None, explored))
}

/// A checkable property, as named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    Controllable,
    LmClosed,
    RelObs(String),
    RelCoobs,
    CoobsConj,
    CoobsDisj,
    Normal(String),
    Conormal,
}

impl Property {
    /// Whether the property depends on an ambient language.
    pub fn uses_ambient(&self) -> bool {
        matches!(self, Property::RelObs(_) | Property::RelCoobs)
    }
}

impl std::str::FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let with_agent = |rest: &str| {
            if rest.is_empty() {
                Err(format!("property `{s}` needs an agent id"))
            } else {
                Ok(rest.to_string())
            }
        };
        match s {
            "controllable" => Ok(Property::Controllable),
            "lm-closed" => Ok(Property::LmClosed),
            "relcoobs" => Ok(Property::RelCoobs),
            "coobs-conj" => Ok(Property::CoobsConj),
            "coobs-disj" => Ok(Property::CoobsDisj),
            "conormal" => Ok(Property::Conormal),
            _ => {
                if let Some(rest) = s.strip_prefix("relobs:") {
                    with_agent(rest).map(Property::RelObs)
                } else if let Some(rest) = s.strip_prefix("normal:") {
                    with_agent(rest).map(Property::Normal)
                } else {
                    Err(format!("unknown property `{s}`"))
                }
            }
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Controllable => f.write_str("controllable"),
            Property::LmClosed => f.write_str("lm-closed"),
            Property::RelObs(a) => write!(f, "relobs:{a}"),
            Property::RelCoobs => f.write_str("relcoobs"),
            Property::CoobsConj => f.write_str("coobs-conj"),
            Property::CoobsDisj => f.write_str("coobs-disj"),
            Property::Normal(a) => write!(f, "normal:{a}"),
            Property::Conormal => f.write_str("conormal"),
        }
    }
}

/// Runs one check. `ambient` is used by the relative properties only and
/// defaults to the spec.
pub fn check(
    property: &Property,
    spec: &Generator,
    ambient: Option<&Generator>,
    ctx: &ControlContext,
) -> Result<Verdict> {
    match property {
        Property::Controllable => check_controllable(spec, ctx),
        Property::LmClosed => check_lm_closed(spec, ctx),
        Property::RelObs(a) => {
            check_rel_observable(&LanguagePair::new(spec, ambient, ctx)?, ctx, a)
        }
        Property::RelCoobs => check_rel_coobservable(&LanguagePair::new(spec, ambient, ctx)?, ctx),
        Property::CoobsConj => check_conj_coobservable(spec, ctx),
        Property::CoobsDisj => check_disj_coobservable(spec, ctx),
        Property::Normal(a) => check_normal(spec, ctx, a),
        Property::Conormal => check_conormal(spec, ctx),
    }
}
