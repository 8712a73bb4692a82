use std::cell::RefCell;
use std::collections::BTreeSet;

use crate::automata::{explore, trim, unobservable_reach, Generator};
use crate::context::{ControlContext, LanguagePair};
use crate::error::{Error, Result};
use crate::verify::check_rel_coobservable;

/// Local supervisor of `agent` for a synthesized closed-loop language.
///
/// States are the observer cells of `result × G` under the agent's
/// projection. Observable events follow the observer. An unobservable event
/// outside the agent's control is selflooped everywhere; an unobservable
/// controllable event is selflooped at a cell exactly when `result` enables
/// it at every state of the cell where the plant enables it. A cell is
/// marked when it holds a marked state of `result`.
///
/// For a controllable, `L_m(G)`-closed `result` that is relatively
/// coobservable with respect to its own closure, the meet of the plant with
/// all local supervisors has the same closed and marked behavior as
/// `result`. Inputs that fail relative coobservability are rejected.
pub fn extract_local_supervisor(
    result: &Generator,
    ctx: &ControlContext,
    agent: &str,
) -> Result<Generator> {
    let idx = ctx.agent_index(agent)?;
    let r = trim(&ctx.check_within_plant(result, "result")?);
    let pair = LanguagePair::new(&r, None, ctx)?;
    let verdict = check_rel_coobservable(&pair, ctx)?;
    if let Some(w) = verdict.witness {
        return Err(Error::SupervisorConflict {
            agent: agent.to_string(),
            detail: format!("result is not relatively coobservable ({w})"),
        });
    }
    let plant = ctx.plant();
    let profile = ctx.agent(idx);
    let observable = &profile.observable;
    let (tracker, origin) = explore(
        r.alphabet().clone(),
        r.initial().zip(plant.initial()),
        |&(q, g), e| Some((r.step(q, e)?, plant.step(g, e)?)),
        |&(q, _)| r.is_marked(q),
        |_| String::new(),
    );
    let conflict = RefCell::new(None);
    let (sup, _) = explore(
        r.alphabet().clone(),
        tracker
            .initial()
            .map(|x0| unobservable_reach(&tracker, [x0], observable)),
        |cell: &BTreeSet<usize>, e| {
            if observable.contains(e) {
                let next = unobservable_reach(
                    &tracker,
                    cell.iter().filter_map(|&x| tracker.step(x, e)),
                    observable,
                );
                return (!next.is_empty()).then_some(next);
            }
            if !profile.controllable.contains(e) {
                return Some(cell.clone());
            }
            let feasible: Vec<usize> = cell
                .iter()
                .copied()
                .filter(|&x| plant.enables(origin[x].1, e))
                .collect();
            let enabled = feasible.iter().filter(|&&x| tracker.enables(x, e)).count();
            if enabled > 0 && enabled < feasible.len() {
                conflict
                    .borrow_mut()
                    .get_or_insert_with(|| Error::SupervisorConflict {
                        agent: profile.id.clone(),
                        detail: format!(
                            "unobservable event `{e}` is enabled only at some states of a cell"
                        ),
                    });
            }
            (enabled > 0 && enabled == feasible.len()).then(|| cell.clone())
        },
        |cell| cell.iter().any(|&x| tracker.is_marked(x)),
        |cell| {
            let names: Vec<String> = cell
                .iter()
                .map(|&x| r.label(origin[x].0).to_string())
                .collect();
            format!("{{{}}}", names.join(","))
        },
    );
    match conflict.into_inner() {
        Some(e) => Err(e),
        None => Ok(sup),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, meet, Mode};
    use crate::fixtures;
    use crate::synthesize::algorithm2_sup_rcc;
    use crate::{events, AgentProfile, Event, EventSet, GeneratorBuilder};

    #[test]
    fn guideway_supervisors_reproduce_result() {
        let fx = fixtures::guideway();
        let r = algorithm2_sup_rcc(fx.spec("K_mx"), &fx.ctx).unwrap().result;
        let s1 = extract_local_supervisor(&r, &fx.ctx, "1").unwrap();
        let s2 = extract_local_supervisor(&r, &fx.ctx, "2").unwrap();
        let closed = meet(&meet(&fx.plant, &s1).unwrap(), &s2).unwrap();
        assert!(equivalent(&closed, &r, Mode::Closed));
        assert!(equivalent(&closed, &r, Mode::Marked));
        // 13 is unobservable to agent 1: only selfloops carry it
        let e13 = Event::new("13");
        assert!(s1
            .transitions()
            .filter(|(_, e, _)| **e == e13)
            .all(|(p, _, q)| p == q));
    }

    #[test]
    fn full_observation_agent_gets_result() {
        let fx = fixtures::fig4();
        let all = fx.plant.alphabet().clone();
        let ctx = ControlContext::new(
            fx.plant.clone(),
            vec![AgentProfile::new("1", all.clone(), all)],
        )
        .unwrap();
        let k = fx.spec("K");
        let s = extract_local_supervisor(k, &ctx, "1").unwrap();
        assert!(equivalent(&s, k, Mode::Closed));
    }

    #[test]
    fn blind_agent_selfloops() {
        let mut b = GeneratorBuilder::new(events(["s"]));
        b.add_state("0", true).unwrap();
        b.set_initial("0").unwrap();
        b.add_transition("0", "s", "0").unwrap();
        let g = b.build().unwrap();
        let ctx = ControlContext::new(
            g.clone(),
            vec![AgentProfile::new("1", EventSet::new(), events(["s"]))],
        )
        .unwrap();
        let s = extract_local_supervisor(&g, &ctx, "1").unwrap();
        assert_eq!(s.num_states(), 1);
        assert!(s.enables(0, &Event::new("s")));
    }

    #[test]
    fn rejects_non_relcoobs_input() {
        let fx = fixtures::fig3();
        assert!(matches!(
            extract_local_supervisor(fx.spec("K"), &fx.ctx, "1"),
            Err(Error::SupervisorConflict { .. })
        ));
    }
}
