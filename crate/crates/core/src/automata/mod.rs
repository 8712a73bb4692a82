//! Deterministic finite-state generators and the regular-language operations
//! the checkers and synthesis procedures are built from.
//!
//! A [`Generator`] is a deterministic automaton with a *partial* transition
//! function. Its closed behavior `L(G)` is the set of strings with a defined
//! run from the initial state; its marked behavior `L_m(G)` is the subset
//! ending in a marker state. No dump state is ever materialized.
//!
//! Every constructor returns the generator in canonical form: unreachable
//! states are pruned and states are numbered in breadth-first order from the
//! initial state (events explored in lexicographic order), so the initial
//! state is always `0`. The empty language is the generator with no states.

mod ops;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::event::{Event, EventSet, Trace};

pub(crate) use ops::unobservable_reach;
pub use ops::{
    equivalent, includes, inverse_project_selfloop, meet, minimize, project, sync, trim, union,
    Inclusion, Mode,
};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    label: String,
    marked: bool,
    out: BTreeMap<Event, StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    alphabet: EventSet,
    states: Vec<State>,
}

impl Generator {
    /// The generator of the empty language over `alphabet`.
    pub fn empty(alphabet: EventSet) -> Self {
        Generator {
            alphabet,
            states: Vec::new(),
        }
    }

    /// One initial state, marked or not, with no transitions.
    pub fn epsilon(alphabet: EventSet, marked: bool) -> Self {
        Generator {
            alphabet,
            states: vec![State {
                label: "0".into(),
                marked,
                out: BTreeMap::new(),
            }],
        }
    }

    pub fn alphabet(&self) -> &EventSet {
        &self.alphabet
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> Option<StateId> {
        if self.states.is_empty() {
            None
        } else {
            Some(0)
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.states.iter().map(|s| s.out.len()).sum()
    }

    /// `states + transitions`, the size measure used in synthesis traces.
    pub fn size(&self) -> usize {
        self.num_states() + self.num_transitions()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.states.len()
    }

    pub fn is_marked(&self, q: StateId) -> bool {
        self.states[q].marked
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.marked)
            .map(|(i, _)| i)
    }

    /// Origin label of a state (file id, product tuple or subset).
    pub fn label(&self, q: StateId) -> &str {
        &self.states[q].label
    }

    pub fn step(&self, q: StateId, e: &Event) -> Option<StateId> {
        self.states[q].out.get(e).copied()
    }

    pub fn enables(&self, q: StateId, e: &Event) -> bool {
        self.states[q].out.contains_key(e)
    }

    /// Outgoing transitions of `q` in event order.
    pub fn out(&self, q: StateId) -> impl Iterator<Item = (&Event, StateId)> + '_ {
        self.states[q].out.iter().map(|(e, &t)| (e, t))
    }

    /// All transitions `(from, event, to)`, ordered by source then event.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Event, StateId)> + '_ {
        self.states
            .iter()
            .enumerate()
            .flat_map(|(q, s)| s.out.iter().map(move |(e, &t)| (q, e, t)))
    }

    pub fn run(&self, s: &[Event]) -> Option<StateId> {
        let mut q = self.initial()?;
        for e in s {
            q = self.step(q, e)?;
        }
        Some(q)
    }

    /// `s ∈ L(G)`.
    pub fn accepts_closed(&self, s: &[Event]) -> bool {
        self.run(s).is_some()
    }

    /// `s ∈ L_m(G)`.
    pub fn accepts_marked(&self, s: &[Event]) -> bool {
        self.run(s).is_some_and(|q| self.is_marked(q))
    }

    /// Same generator over a larger alphabet; the new events are undefined
    /// everywhere.
    pub fn with_alphabet(&self, alphabet: &EventSet) -> Result<Generator> {
        if let Some(e) = self.alphabet.difference(alphabet).next() {
            return Err(Error::AlphabetMismatch(format!(
                "event `{e}` is not in the target alphabet"
            )));
        }
        let mut g = self.clone();
        g.alphabet = alphabet.clone();
        Ok(g)
    }

    /// Recognizer of the prefix closure of `L_m(G)` as a marked language:
    /// the trim form with every state marked.
    pub fn closure(&self) -> Generator {
        let mut g = trim(self);
        for s in &mut g.states {
            s.marked = true;
        }
        g
    }

    /// Closed-behavior recognizer: every state marked, nothing pruned.
    pub fn all_marked(&self) -> Generator {
        let mut g = self.clone();
        for s in &mut g.states {
            s.marked = true;
        }
        g
    }

    /// `L(G) = closure(L_m(G))`, i.e. every reachable state is coreachable.
    pub fn is_nonblocking(&self) -> bool {
        self.blocking_witness().is_none()
    }

    /// Shortest string of `L(G)` that cannot be extended to a marked string.
    pub fn blocking_witness(&self) -> Option<Trace> {
        let co = self.coreachable();
        let (parent, order) = self.bfs_tree();
        order
            .into_iter()
            .find(|&q| !co[q])
            .map(|q| path_to(&parent, q))
    }

    /// Shortest (then lexicographically least) string reaching each state.
    pub fn access_strings(&self) -> Vec<Trace> {
        let (parent, _) = self.bfs_tree();
        self.states().map(|q| path_to(&parent, q)).collect()
    }

    fn bfs_tree(&self) -> (Vec<Option<(StateId, Event)>>, Vec<StateId>) {
        let mut parent = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::with_capacity(self.num_states());
        if let Some(q0) = self.initial() {
            let mut queue = VecDeque::from([q0]);
            seen[q0] = true;
            while let Some(q) = queue.pop_front() {
                order.push(q);
                for (e, t) in self.out(q) {
                    if !seen[t] {
                        seen[t] = true;
                        parent[t] = Some((q, e.clone()));
                        queue.push_back(t);
                    }
                }
            }
        }
        (parent, order)
    }

    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, _, t) in self.transitions() {
            preds[t].push(q);
        }
        let mut co = vec![false; n];
        let mut stack: Vec<StateId> = self.marked_states().collect();
        for &q in &stack {
            co[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        co
    }

    /// Keeps the states selected by `keep` and the transitions selected by
    /// `keep_edge` between them, then re-canonicalizes.
    pub(crate) fn restrict<K, E>(&self, keep: K, mut keep_edge: E) -> Generator
    where
        K: Fn(StateId) -> bool,
        E: FnMut(StateId, &Event, StateId) -> bool,
    {
        match self.initial() {
            Some(q0) if keep(q0) => {}
            _ => return Generator::empty(self.alphabet.clone()),
        }
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(q, s)| State {
                label: s.label.clone(),
                marked: s.marked,
                out: if keep(q) {
                    s.out
                        .iter()
                        .filter(|(e, &t)| keep(t) && keep_edge(q, e, t))
                        .map(|(e, &t)| (e.clone(), t))
                        .collect()
                } else {
                    BTreeMap::new()
                },
            })
            .collect();
        canonicalize(self.alphabet.clone(), states, 0)
    }

    pub(crate) fn set_marking<F: Fn(StateId) -> bool>(&self, marked: F) -> Generator {
        let mut g = self.clone();
        for (q, s) in g.states.iter_mut().enumerate() {
            s.marked = marked(q);
        }
        g
    }
}

fn path_to(parent: &[Option<(StateId, Event)>], mut q: StateId) -> Trace {
    let mut rev = Vec::new();
    while let Some((p, e)) = &parent[q] {
        rev.push(e.clone());
        q = *p;
    }
    rev.reverse();
    Trace(rev)
}

/// Prunes states unreachable from `initial` and renumbers in BFS order.
fn canonicalize(alphabet: EventSet, states: Vec<State>, initial: StateId) -> Generator {
    let mut new_id: Vec<Option<StateId>> = vec![None; states.len()];
    let mut order = Vec::with_capacity(states.len());
    let mut queue = VecDeque::from([initial]);
    new_id[initial] = Some(0);
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for &t in states[q].out.values() {
            if new_id[t].is_none() {
                new_id[t] = Some(order.len() + queue.len());
                queue.push_back(t);
            }
        }
    }
    let out = order
        .iter()
        .map(|&q| State {
            label: states[q].label.clone(),
            marked: states[q].marked,
            out: states[q]
                .out
                .iter()
                .map(|(e, &t)| (e.clone(), new_id[t].expect("reachable")))
                .collect(),
        })
        .collect();
    Generator {
        alphabet,
        states: out,
    }
}

/// Incremental construction from labelled states, validated by
/// [`GeneratorBuilder::build`].
#[derive(Debug, Default)]
pub struct GeneratorBuilder {
    alphabet: EventSet,
    states: Vec<State>,
    index: HashMap<String, StateId>,
    initial: Option<StateId>,
}

impl GeneratorBuilder {
    pub fn new(alphabet: EventSet) -> Self {
        GeneratorBuilder {
            alphabet,
            ..Default::default()
        }
    }

    pub fn add_state(&mut self, label: impl Into<String>, marked: bool) -> Result<StateId> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::DuplicateState(label));
        }
        let id = self.states.len();
        self.index.insert(label.clone(), id);
        self.states.push(State {
            label,
            marked,
            out: BTreeMap::new(),
        });
        Ok(id)
    }

    pub fn state(&self, label: &str) -> Option<StateId> {
        self.index.get(label).copied()
    }

    fn lookup(&self, label: &str) -> Result<StateId> {
        self.state(label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn set_initial(&mut self, label: &str) -> Result<()> {
        self.initial = Some(self.lookup(label)?);
        Ok(())
    }

    pub fn add_transition(&mut self, from: &str, event: &str, to: &str) -> Result<()> {
        let (f, t) = (self.lookup(from)?, self.lookup(to)?);
        let event = Event::new(event);
        if !self.alphabet.contains(&event) {
            return Err(Error::UnknownEvent(event));
        }
        let out = &mut self.states[f].out;
        match out.get(&event) {
            Some(&prev) if prev != t => Err(Error::Nondeterministic {
                state: from.to_string(),
                event,
            }),
            _ => {
                out.insert(event, t);
                Ok(())
            }
        }
    }

    pub fn build(self) -> Result<Generator> {
        match self.initial {
            None if self.states.is_empty() => Ok(Generator::empty(self.alphabet)),
            None => Err(Error::MissingInitial),
            Some(q0) => Ok(canonicalize(self.alphabet, self.states, q0)),
        }
    }
}

/// Breadth-first construction of the reachable part of an implicitly given
/// deterministic automaton whose states are values of `S`. Returns the
/// generator together with the origin value of each state.
pub(crate) fn explore<S, F, M, L>(
    alphabet: EventSet,
    init: Option<S>,
    mut step: F,
    marked: M,
    label: L,
) -> (Generator, Vec<S>)
where
    S: Clone + Eq + Hash,
    F: FnMut(&S, &Event) -> Option<S>,
    M: Fn(&S) -> bool,
    L: Fn(&S) -> String,
{
    let Some(init) = init else {
        return (Generator::empty(alphabet), Vec::new());
    };
    let mut index: HashMap<S, StateId> = HashMap::new();
    let mut origins = vec![init.clone()];
    index.insert(init, 0);
    let mut states: Vec<State> = Vec::new();
    let mut next = 0;
    while next < origins.len() {
        let cur = origins[next].clone();
        let mut out = BTreeMap::new();
        for e in &alphabet {
            if let Some(succ) = step(&cur, e) {
                let id = match index.get(&succ) {
                    Some(&id) => id,
                    None => {
                        let id = origins.len();
                        index.insert(succ.clone(), id);
                        origins.push(succ);
                        id
                    }
                };
                out.insert(e.clone(), id);
            }
        }
        states.push(State {
            label: label(&cur),
            marked: marked(&cur),
            out,
        });
        next += 1;
    }
    (Generator { alphabet, states }, origins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::events;

    fn chain() -> Generator {
        let mut b = GeneratorBuilder::new(events(["a", "b"]));
        b.add_state("x", false).unwrap();
        b.add_state("y", true).unwrap();
        b.add_state("z", false).unwrap();
        b.add_state("orphan", true).unwrap();
        b.set_initial("x").unwrap();
        b.add_transition("x", "a", "y").unwrap();
        b.add_transition("y", "b", "z").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn builder_prunes_unreachable_and_orders_bfs() {
        let g = chain();
        assert_eq!(g.num_states(), 3);
        assert_eq!(g.initial(), Some(0));
        assert_eq!(g.label(1), "y");
        assert!(g.accepts_marked(&[Event::new("a")]));
        assert!(g.accepts_closed(&[Event::new("a"), Event::new("b")]));
        assert!(!g.accepts_marked(&[Event::new("a"), Event::new("b")]));
    }

    #[test]
    fn builder_rejects_nondeterminism_and_unknowns() {
        let mut b = GeneratorBuilder::new(events(["a"]));
        b.add_state("p", false).unwrap();
        b.add_state("q", false).unwrap();
        b.add_transition("p", "a", "q").unwrap();
        assert!(matches!(
            b.add_transition("p", "a", "p"),
            Err(Error::Nondeterministic { .. })
        ));
        assert!(matches!(
            b.add_transition("p", "z", "p"),
            Err(Error::UnknownEvent(_))
        ));
        assert!(matches!(
            b.add_transition("p", "a", "nowhere"),
            Err(Error::UnknownState(_))
        ));
        assert!(matches!(
            b.add_state("p", true),
            Err(Error::DuplicateState(_))
        ));
        assert!(matches!(b.build(), Err(Error::MissingInitial)));
    }

    #[test]
    fn blocking_witness_is_shortest() {
        let g = chain();
        assert_eq!(g.blocking_witness(), Some(Trace::parse("a.b")));
        assert!(Generator::empty(EventSet::new()).is_nonblocking());
    }
}
