use super::{cell_product, MAX_PASSES};
use crate::automata::{explore, minimize, Generator};
use crate::context::{ControlContext, LanguagePair};
use crate::error::{Error, Result};

/// Supremal sublanguage of `L_m(spec)` that is relatively observable with
/// respect to `C̄` (`ambient`) and the projection of `agent`.
///
/// Each round refines the current recognizer by pairing every state with
/// the observer cell of its projection in a tracker of `s ∈ C̄` (which also
/// records the current spec state of `s`, or that `s` has left the spec).
/// A refined transition on `σ ∈ Σ_c,i` is deleted when its cell holds a
/// string `s` with `sσ ∈ L(G)` but `sσ` outside the spec closure; all such
/// transitions are deleted at once, then the result is trimmed and
/// minimized. Rounds repeat until nothing is deleted.
pub fn sup_rel_obs(
    spec: &Generator,
    ambient: &Generator,
    ctx: &ControlContext,
    agent: &str,
) -> Result<Generator> {
    let idx = ctx.agent_index(agent)?;
    let pair = LanguagePair::new(spec, Some(ambient), ctx)?;
    sup_rel_obs_at(pair.spec(), pair.ambient(), ctx, idx)
}

pub(crate) fn sup_rel_obs_at(
    spec: &Generator,
    ambient: &Generator,
    ctx: &ControlContext,
    idx: usize,
) -> Result<Generator> {
    let mut cur = minimize(spec);
    for _ in 0..MAX_PASSES {
        match prune_round(&cur, ambient, ctx, idx) {
            None => return Ok(cur),
            Some(next) => cur = next,
        }
    }
    Err(Error::NoConvergence(MAX_PASSES))
}

fn prune_round(
    k: &Generator,
    c: &Generator,
    ctx: &ControlContext,
    idx: usize,
) -> Option<Generator> {
    if k.is_empty() {
        return None;
    }
    let plant = ctx.plant();
    let agent = ctx.agent(idx);
    let (tracker, origin) = explore(
        plant.alphabet().clone(),
        c.initial()
            .zip(plant.initial())
            .map(|(c0, g0)| (c0, g0, k.initial())),
        |&(qc, qg, qk), e| {
            Some((
                c.step(qc, e)?,
                plant.step(qg, e)?,
                qk.and_then(|q| k.step(q, e)),
            ))
        },
        |_| false,
        |_| String::new(),
    );
    let (refined, cells) = cell_product(k, &tracker, &agent.observable);
    let mut found = false;
    let pruned = refined.restrict(
        |_| true,
        |x, e, _| {
            let violates = agent.controllable.contains(e)
                && cells[x].1.iter().any(|&y| {
                    let (_, g, qk) = origin[y];
                    plant.enables(g, e) && !qk.is_some_and(|q| k.enables(q, e))
                });
            found |= violates;
            !violates
        },
    );
    found.then(|| minimize(&pruned))
}
