use super::{Bfs, Condition, Witness};
use crate::automata::StateId;
use crate::context::{ControlContext, LanguagePair};
use crate::error::Result;
use crate::event::{Event, Trace};

#[derive(Clone, Debug)]
enum Move {
    Joint(Event),
    Left(Event),
    Right(Event),
}

/// `(c, g, k, k′)`: `s` runs through the ambient `C̄`, the plant, and the
/// spec (`None` once `s` has left `K̄`); `s′` runs through `K̄`.
type Node = (StateId, StateId, Option<StateId>, StateId);

/// All relative-observability violations on channel `agent`. Each witness
/// `(s, s′, σ)` has `P(s) = P(s′)`, `s′σ ∈ K̄`, `s ∈ C̄`, `sσ ∈ L(G)` and
/// `sσ ∉ K̄`. Without `exhaustive` at most one (shortest) witness is
/// returned; with it, one witness per violating verifier state and event.
pub fn relobs_witnesses(
    pair: &LanguagePair,
    ctx: &ControlContext,
    agent: &str,
    exhaustive: bool,
) -> Result<Vec<Witness>> {
    let idx = ctx.agent_index(agent)?;
    Ok(relobs_scan(pair, ctx, idx, exhaustive).0)
}

pub(crate) fn relobs_scan(
    pair: &LanguagePair,
    ctx: &ControlContext,
    idx: usize,
    exhaustive: bool,
) -> (Vec<Witness>, usize) {
    let k = pair.spec();
    let c = pair.ambient();
    let plant = ctx.plant();
    let agent = ctx.agent(idx);
    let (Some(c0), Some(g0), Some(k0)) = (c.initial(), plant.initial(), k.initial()) else {
        return (Vec::new(), 0);
    };
    let mut out = Vec::new();
    let mut bfs: Bfs<Node, Move> = Bfs::new((c0, g0, Some(k0), k0));
    while let Some((id, (qc, qg, qk, qk2))) = bfs.pop() {
        for sigma in &agent.controllable {
            let violates = k.enables(qk2, sigma)
                && plant.enables(qg, sigma)
                && !qk.is_some_and(|q| k.enables(q, sigma));
            if violates {
                out.push(witness(&bfs.path(id), sigma, &agent.id));
                if !exhaustive {
                    return (out, bfs.explored());
                }
            }
        }
        for e in ctx.alphabet() {
            let left = c.step(qc, e).and_then(|c2| {
                plant
                    .step(qg, e)
                    .map(|g2| (c2, g2, qk.and_then(|q| k.step(q, e))))
            });
            if agent.observable.contains(e) {
                if let (Some((c2, g2, k2)), Some(r2)) = (left, k.step(qk2, e)) {
                    bfs.push(id, Move::Joint(e.clone()), (c2, g2, k2, r2));
                }
            } else {
                if let Some((c2, g2, k2)) = left {
                    bfs.push(id, Move::Left(e.clone()), (c2, g2, k2, qk2));
                }
                if let Some(r2) = k.step(qk2, e) {
                    bfs.push(id, Move::Right(e.clone()), (qc, qg, qk, r2));
                }
            }
        }
    }
    (out, bfs.explored())
}

fn witness(path: &[Move], sigma: &Event, channel: &str) -> Witness {
    let mut s = Trace::empty();
    let mut sp = Trace::empty();
    for m in path {
        match m {
            Move::Joint(e) => {
                s.push(e.clone());
                sp.push(e.clone());
            }
            Move::Left(e) => s.push(e.clone()),
            Move::Right(e) => sp.push(e.clone()),
        }
    }
    Witness {
        s,
        s_prime: Some(sp),
        s_dprime: None,
        event: sigma.clone(),
        channel: Some(channel.to_string()),
        condition: Condition::RelObs,
        lookalikes: Vec::new(),
    }
}
