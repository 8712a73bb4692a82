//! Brute-force oracles and seeded random instances for testing the checkers
//! and synthesis procedures.
//!
//! [`oracle_sup_lower_bound`] enumerates every transition subset of a
//! refined recognizer of `K`, keeps the subautomata whose languages pass the
//! relative coobservability check, and returns the union of their languages.
//! The union is contained in the supremal relatively coobservable
//! sublanguage, so it certifies that a synthesized result is not too small.
//! [`naive`] evaluates the property definitions directly on strings.

pub mod naive;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{explore, minimize, trim, union, unobservable_reach, Generator, StateId};
use crate::context::{AgentProfile, ControlContext, LanguagePair};
use crate::error::{Error, Result};
use crate::event::{Event, EventSet};
use crate::format::{agents_to_json, generator_to_json};
use crate::verify::relobs_scan;

pub const DEFAULT_BUDGET: usize = 12;

/// Splits the states of `spec` by the observer cells of the plant under
/// every agent's projection. The result recognizes the same language.
pub fn refine(spec: &Generator, ctx: &ControlContext) -> Generator {
    let k = trim(spec);
    let plant = ctx.plant();
    let agents = ctx.agents();
    let init = k.initial().zip(plant.initial()).map(|(q0, g0)| {
        let cells: Vec<BTreeSet<StateId>> = agents
            .iter()
            .map(|a| unobservable_reach(plant, [g0], &a.observable))
            .collect();
        (q0, cells)
    });
    explore(
        k.alphabet().clone(),
        init,
        |(q, cells), e| {
            let q2 = k.step(*q, e)?;
            let cells2 = agents
                .iter()
                .zip(cells)
                .map(|(a, cell)| {
                    if a.observable.contains(e) {
                        unobservable_reach(
                            plant,
                            cell.iter().filter_map(|&g| plant.step(g, e)),
                            &a.observable,
                        )
                    } else {
                        cell.clone()
                    }
                })
                .collect();
            Some((q2, cells2))
        },
        |(q, _)| k.is_marked(*q),
        |(q, _)| k.label(*q).to_string(),
    )
    .0
}

fn edges(g: &Generator) -> Vec<(StateId, Event)> {
    g.transitions().map(|(p, e, _)| (p, e.clone())).collect()
}

fn subautomaton(g: &Generator, edges: &[(StateId, Event)], mask: u64) -> Generator {
    let keep: HashSet<(StateId, &Event)> = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, (p, e))| (*p, e))
        .collect();
    trim(&g.restrict(|_| true, |p, e, _| keep.contains(&(p, e))))
}

fn guard(g: &Generator, budget: usize) -> Result<Vec<(StateId, Event)>> {
    let es = edges(g);
    if es.len() > budget || es.len() >= 64 {
        return Err(Error::BudgetExceeded {
            transitions: es.len(),
            budget,
        });
    }
    Ok(es)
}

/// Trim forms of all `2^n` transition-subset subautomata of `g` (marking
/// inherited), in mask order. Refuses generators with more than `budget`
/// transitions.
pub fn enumerate_subautomata(
    g: &Generator,
    budget: usize,
) -> Result<impl Iterator<Item = Generator> + '_> {
    let es = guard(g, budget)?;
    let n = es.len();
    Ok((0..1u64 << n).map(move |mask| subautomaton(g, &es, mask)))
}

/// Union of the languages of every subautomaton of the refined recognizer
/// of `spec` that is relatively coobservable with respect to `ambient`.
pub fn oracle_sup_lower_bound(
    spec: &Generator,
    ambient: &Generator,
    ctx: &ControlContext,
    budget: usize,
) -> Result<Generator> {
    let pair = LanguagePair::new(spec, Some(ambient), ctx)?;
    let r = refine(pair.spec(), ctx);
    let es = guard(&r, budget)?;
    let mut passing: Vec<u64> = Vec::new();
    for mask in 0..1u64 << es.len() {
        let sub = subautomaton(&r, &es, mask);
        let p = LanguagePair::new(&sub, Some(pair.ambient()), ctx)?;
        let ok = (0..ctx.agents().len()).all(|i| relobs_scan(&p, ctx, i, false).0.is_empty());
        if ok {
            passing.push(mask);
        }
    }
    let maximal = passing
        .iter()
        .filter(|&&m| !passing.iter().any(|&o| o != m && o & m == m));
    let mut acc = Generator::empty(r.alphabet().clone());
    for &m in maximal {
        acc = minimize(&union(&acc, &subautomaton(&r, &es, m)));
    }
    Ok(acc)
}

/// Knobs for [`random_instance`].
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub max_states: usize,
    pub max_events: usize,
    pub agent_count: usize,
    pub observable_density: f64,
    pub controllable_density: f64,
    /// Probability that a (state, event) pair has a transition.
    pub transition_density: f64,
    pub seed: u64,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            max_states: 6,
            max_events: 5,
            agent_count: 2,
            observable_density: 0.5,
            controllable_density: 0.5,
            transition_density: 0.5,
            seed: 0,
        }
    }
}

impl InstanceSpec {
    pub fn with_seed(seed: u64) -> Self {
        InstanceSpec {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub ctx: ControlContext,
    pub pair: LanguagePair,
}

impl Instance {
    /// The instance as CLI input files, named `<prefix>_{plant,spec,ambient,agents}.json`.
    pub fn files(&self, prefix: &str) -> Vec<(String, String)> {
        let note = format!("random instance, seed {}", self.seed);
        vec![
            (
                format!("{prefix}_plant.json"),
                generator_to_json(self.ctx.plant(), Some(&note)),
            ),
            (
                format!("{prefix}_spec.json"),
                generator_to_json(self.pair.spec(), Some(&note)),
            ),
            (
                format!("{prefix}_ambient.json"),
                generator_to_json(self.pair.ambient(), Some(&note)),
            ),
            (
                format!("{prefix}_agents.json"),
                agents_to_json(self.ctx.agents(), Some(&note)),
            ),
        ]
    }

    pub fn write_to(&self, dir: &Path, prefix: &str) -> Result<()> {
        for (name, text) in self.files(prefix) {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

/// Seeded random instance: a trim random plant over `e0, e1, …`, an ambient
/// `C` obtained by deleting transitions and markers from the plant, and a
/// spec `K` obtained the same way from `C`, so `K ⊆ C ⊆ L_m(G)`.
pub fn random_instance(spec: &InstanceSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let events: Vec<Event> = (0..spec.max_events.max(1))
        .map(|i| Event::new(&format!("e{i}")))
        .collect();
    let alphabet: EventSet = events.iter().cloned().collect();
    let plant = loop {
        let g = random_generator(&mut rng, &alphabet, spec);
        if !g.is_empty() {
            break g;
        }
    };
    let ambient = nonempty_pruned(&mut rng, &plant);
    let k = nonempty_pruned(&mut rng, &ambient);
    let agents = (0..spec.agent_count.max(1))
        .map(|i| {
            let observable = events
                .iter()
                .filter(|_| rng.random_bool(spec.observable_density))
                .cloned()
                .collect();
            let controllable = events
                .iter()
                .filter(|_| rng.random_bool(spec.controllable_density))
                .cloned()
                .collect();
            AgentProfile::new((i + 1).to_string(), observable, controllable)
        })
        .collect();
    let ctx = ControlContext::new(plant, agents).expect("trim plant with in-alphabet agents");
    let pair = LanguagePair::new(&k, Some(&ambient), &ctx).expect("pruned copies are nested");
    Instance {
        seed: spec.seed,
        ctx,
        pair,
    }
}

fn random_generator(rng: &mut ChaCha8Rng, alphabet: &EventSet, spec: &InstanceSpec) -> Generator {
    let hi = spec.max_states.max(1);
    let n = rng.random_range(hi.div_ceil(2)..=hi);
    let mut b = crate::automata::GeneratorBuilder::new(alphabet.clone());
    for q in 0..n {
        b.add_state(q.to_string(), rng.random_bool(0.4))
            .expect("fresh label");
    }
    b.set_initial("0").expect("state 0 exists");
    for q in 0..n {
        for e in alphabet {
            if rng.random_bool(spec.transition_density) {
                let t = rng.random_range(0..n);
                b.add_transition(&q.to_string(), e.as_str(), &t.to_string())
                    .expect("one successor per event");
            }
        }
    }
    trim(&b.build().expect("valid by construction"))
}

/// Deletes each transition with probability 0.2 and unmarks each marked
/// state with probability 0.2, then trims.
fn pruned(rng: &mut ChaCha8Rng, g: &Generator) -> Generator {
    let drop: HashSet<(StateId, Event)> = g
        .transitions()
        .filter(|_| rng.random_bool(0.2))
        .map(|(p, e, _)| (p, e.clone()))
        .collect();
    let unmark: Vec<bool> = g.states().map(|_| rng.random_bool(0.2)).collect();
    let g = g.set_marking(|q| g.is_marked(q) && !unmark[q]);
    trim(&g.restrict(|_| true, |p, e, _| !drop.contains(&(p, e.clone()))))
}

/// Seeded random sublanguage of `L_m(g)`: a copy of `g` with transitions
/// and markers deleted at random, retried until nonempty when possible.
pub fn random_sublanguage(g: &Generator, seed: u64) -> Generator {
    nonempty_pruned(&mut ChaCha8Rng::seed_from_u64(seed), &trim(g))
}

fn nonempty_pruned(rng: &mut ChaCha8Rng, g: &Generator) -> Generator {
    let mut last = g.clone();
    for _ in 0..8 {
        last = pruned(rng, g);
        if !last.is_empty() {
            break;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, includes, Mode};
    use crate::fixtures;

    #[test]
    fn subset_counts() {
        let fx = fixtures::fig4();
        assert_eq!(enumerate_subautomata(fx.spec("K"), 12).unwrap().count(), 8);
        let chain = crate::format::parse_generator(
            r#"{"format_version":1,"alphabet":["a","b"],
                "states":[{"id":"0","marked":false},{"id":"1","marked":false},{"id":"2","marked":true}],
                "initial":"0","transitions":[{"from":"0","event":"a","to":"1"},{"from":"1","event":"b","to":"2"}]}"#,
        )
        .unwrap();
        let subs: Vec<Generator> = enumerate_subautomata(&chain, 12).unwrap().collect();
        assert_eq!(subs.len(), 4);
        assert_eq!(subs.iter().filter(|g| !g.is_empty()).count(), 1);
    }

    #[test]
    fn budget_guard() {
        let fx = fixtures::guideway();
        assert!(matches!(
            enumerate_subautomata(fx.spec("K_mx"), 12).map(|_| ()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn refine_preserves_language() {
        for fx in fixtures::all() {
            for k in fx.specs.values() {
                assert!(equivalent(&refine(k, &fx.ctx), k, Mode::Marked));
            }
        }
    }

    #[test]
    fn lower_bound_on_fig2() {
        let fx = fixtures::fig2();
        let k = fx.spec("K");
        let lb = oracle_sup_lower_bound(k, k, &fx.ctx, 12).unwrap();
        let expect = fx.spec("K").restrict(|_| true, |_, e, _| e.as_str() != "σ");
        assert!(equivalent(&lb, &trim(&expect), Mode::Marked));
    }

    #[test]
    fn lower_bound_of_relcoobs_spec_is_spec() {
        let fx = fixtures::fig4();
        let k = fx.spec("K");
        let lb = oracle_sup_lower_bound(k, k, &fx.ctx, 12).unwrap();
        assert!(equivalent(&lb, k, Mode::Marked));
        let e = Generator::empty(k.alphabet().clone());
        assert!(oracle_sup_lower_bound(&e, k, &fx.ctx, 12)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn random_instances_are_reproducible_and_nested() {
        for seed in 0..20 {
            let a = random_instance(&InstanceSpec::with_seed(seed));
            let b = random_instance(&InstanceSpec::with_seed(seed));
            assert_eq!(a.files("x"), b.files("x"));
            assert!(a.ctx.plant().is_nonblocking());
            assert!(includes(a.pair.ambient(), a.pair.spec(), Mode::Marked).holds);
            assert!(includes(a.ctx.plant(), a.pair.ambient(), Mode::Marked).holds);
            assert!(a.ctx.plant().num_states() <= 6);
        }
    }
}
