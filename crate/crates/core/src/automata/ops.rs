use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{explore, Generator, StateId};
use crate::error::{Error, Result};
use crate::event::{Event, EventSet, Trace};

/// Keeps exactly the states that are reachable and coreachable. `L_m` is
/// unchanged and the result is nonblocking; an empty marked language yields
/// the empty generator.
pub fn trim(g: &Generator) -> Generator {
    let co = g.coreachable();
    g.restrict(|q| co[q], |_, _, _| true)
}

/// Synchronous product: shared events move jointly, private events
/// interleave, a pair is marked when both components are.
pub fn sync(g1: &Generator, g2: &Generator) -> Generator {
    let alphabet: EventSet = g1.alphabet().union(g2.alphabet()).cloned().collect();
    let init = g1.initial().zip(g2.initial());
    explore(
        alphabet,
        init,
        |&(a, b), e| {
            let (in1, in2) = (g1.alphabet().contains(e), g2.alphabet().contains(e));
            let a2 = if in1 { g1.step(a, e)? } else { a };
            let b2 = if in2 { g2.step(b, e)? } else { b };
            Some((a2, b2))
        },
        |&(a, b)| g1.is_marked(a) && g2.is_marked(b),
        |&(a, b)| format!("({},{})", g1.label(a), g2.label(b)),
    )
    .0
}

/// Intersection over a common alphabet: `L(meet) = L(g1) ∩ L(g2)` and
/// `L_m(meet) = L_m(g1) ∩ L_m(g2)`.
pub fn meet(g1: &Generator, g2: &Generator) -> Result<Generator> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "meet needs equal alphabets, got {} and {} events",
            g1.alphabet().len(),
            g2.alphabet().len()
        )));
    }
    Ok(sync(g1, g2))
}

/// Deterministic union: `L_m(union) = L_m(g1) ∪ L_m(g2)` and likewise for
/// closed behavior. Alphabets are merged.
pub fn union(g1: &Generator, g2: &Generator) -> Generator {
    let alphabet: EventSet = g1.alphabet().union(g2.alphabet()).cloned().collect();
    let init = match (g1.initial(), g2.initial()) {
        (None, None) => None,
        pair => Some(pair),
    };
    explore(
        alphabet,
        init,
        |&(a, b): &(Option<StateId>, Option<StateId>), e| {
            let a2 = a.and_then(|q| g1.step(q, e));
            let b2 = b.and_then(|q| g2.step(q, e));
            (a2.is_some() || b2.is_some()).then_some((a2, b2))
        },
        |&(a, b)| a.is_some_and(|q| g1.is_marked(q)) || b.is_some_and(|q| g2.is_marked(q)),
        |&(a, b)| {
            let show = |g: &Generator, q: Option<StateId>| {
                q.map_or_else(|| "-".to_string(), |q| g.label(q).to_string())
            };
            format!("({}|{})", show(g1, a), show(g2, b))
        },
    )
    .0
}

/// States reachable from `set` through events outside `observable`.
pub(crate) fn unobservable_reach(
    g: &Generator,
    set: impl IntoIterator<Item = StateId>,
    observable: &EventSet,
) -> BTreeSet<StateId> {
    let mut reach: BTreeSet<StateId> = set.into_iter().collect();
    let mut stack: Vec<StateId> = reach.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for (e, t) in g.out(q) {
            if !observable.contains(e) && reach.insert(t) {
                stack.push(t);
            }
        }
    }
    reach
}

/// Natural projection onto `observable` by subset construction:
/// `L(result) = P(L(g))`, `L_m(result) = P(L_m(g))`, alphabet `observable`.
pub fn project(g: &Generator, observable: &EventSet) -> Result<Generator> {
    if let Some(e) = observable.difference(g.alphabet()).next() {
        return Err(Error::UnknownEvent(e.clone()));
    }
    let init = g
        .initial()
        .map(|q0| unobservable_reach(g, [q0], observable));
    Ok(explore(
        observable.clone(),
        init,
        |cell, e| {
            let next: Vec<StateId> = cell.iter().filter_map(|&q| g.step(q, e)).collect();
            (!next.is_empty()).then(|| unobservable_reach(g, next, observable))
        },
        |cell| cell.iter().any(|&q| g.is_marked(q)),
        |cell| {
            let names: Vec<&str> = cell.iter().map(|&q| g.label(q)).collect();
            format!("{{{}}}", names.join(","))
        },
    )
    .0)
}

/// Inverse projection: selfloops every `silent` event at every state, so
/// `L(result) = P⁻¹(L(g))` over `alphabet(g) ∪ silent`.
pub fn inverse_project_selfloop(g: &Generator, silent: &EventSet) -> Result<Generator> {
    let overlap: Vec<Event> = silent.intersection(g.alphabet()).cloned().collect();
    if !overlap.is_empty() {
        return Err(Error::SilentOverlap { events: overlap });
    }
    let alphabet: EventSet = g.alphabet().union(silent).cloned().collect();
    Ok(explore(
        alphabet,
        g.initial(),
        |&q, e| {
            if silent.contains(e) {
                Some(q)
            } else {
                g.step(q, e)
            }
        },
        |&q| g.is_marked(q),
        |&q| g.label(q).to_string(),
    )
    .0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Compare closed behaviors `L(·)`.
    Closed,
    /// Compare marked behaviors `L_m(·)`.
    Marked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub holds: bool,
    /// Shortest (then lexicographically least) string of the smaller
    /// side's language missing from the larger one.
    pub counterexample: Option<Trace>,
}

/// Decides `L(smaller) ⊆ L(larger)` or `L_m(smaller) ⊆ L_m(larger)`.
/// Events missing from either alphabet are treated as undefined.
pub fn includes(larger: &Generator, smaller: &Generator, mode: Mode) -> Inclusion {
    let Some(s0) = smaller.initial() else {
        return Inclusion {
            holds: true,
            counterexample: None,
        };
    };
    let start = (s0, larger.initial());
    let violates = |(q2, q1): (StateId, Option<StateId>)| match mode {
        Mode::Closed => q1.is_none(),
        Mode::Marked => smaller.is_marked(q2) && !q1.is_some_and(|q| larger.is_marked(q)),
    };
    type Node = (StateId, Option<StateId>);
    let mut parent: HashMap<Node, Option<(Node, Event)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if violates(cur) {
            let mut rev = Vec::new();
            let mut node = cur;
            while let Some(Some((p, e))) = parent.get(&node) {
                rev.push(e.clone());
                node = *p;
            }
            rev.reverse();
            return Inclusion {
                holds: false,
                counterexample: Some(Trace(rev)),
            };
        }
        let (q2, q1) = cur;
        for (e, t2) in smaller.out(q2) {
            let t1 = q1.and_then(|q| larger.step(q, e));
            let next = (t2, t1);
            if let std::collections::hash_map::Entry::Vacant(v) = parent.entry(next) {
                v.insert(Some((cur, e.clone())));
                queue.push_back(next);
            }
        }
    }
    Inclusion {
        holds: true,
        counterexample: None,
    }
}

/// Language equality by inclusion both ways.
pub fn equivalent(g1: &Generator, g2: &Generator, mode: Mode) -> bool {
    includes(g1, g2, mode).holds && includes(g2, g1, mode).holds
}

/// Minimal trim recognizer of `L_m(g)` (Moore partition refinement).
pub fn minimize(g: &Generator) -> Generator {
    let t = trim(g);
    if t.is_empty() {
        return t;
    }
    let n = t.num_states();
    let alphabet: Vec<&Event> = t.alphabet().iter().collect();
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(t.is_marked(q))).collect();
    let mut count = block.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut sig_index: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let sig = alphabet
                    .iter()
                    .map(|e| t.step(q, e).map(|r| block[r]))
                    .collect();
                let len = sig_index.len();
                *sig_index.entry((block[q], sig)).or_insert(len)
            })
            .collect();
        let new_count = sig_index.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let rep: HashMap<usize, StateId> = (0..n).rev().map(|q| (block[q], q)).collect();
    explore(
        t.alphabet().clone(),
        Some(block[0]),
        |&b, e| t.step(rep[&b], e).map(|r| block[r]),
        |&b| t.is_marked(rep[&b]),
        |&b| t.label(rep[&b]).to_string(),
    )
    .0
}
