use super::{Bfs, Condition, Lookalike, Verdict, Witness};
use crate::automata::{trim, Generator, StateId};
use crate::context::ControlContext;
use crate::error::Result;
use crate::event::{Event, Trace};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Semantics {
    Conjunctive,
    Disjunctive,
}

#[derive(Clone, Debug)]
enum Move {
    /// Track 0 (`s`) moves, together with every lookalike that observes `e`.
    Joint(Event),
    /// Lookalike track `i + 1` moves alone on an event agent `i` cannot see.
    Solo(usize, Event),
}

/// Conjunctive (permissive-default) coobservability of `K`: whenever
/// `s ∈ K̄`, `sσ ∈ L(G) ∖ K̄`, some owner `i` of `σ` has no lookalike
/// `s_i ∈ K̄` with `P_i(s_i) = P_i(s)` and `s_iσ ∈ K̄`.
pub fn check_conj_coobservable(spec: &Generator, ctx: &ControlContext) -> Result<Verdict> {
    check(spec, ctx, Semantics::Conjunctive)
}

/// Disjunctive (antipermissive-default) coobservability of `K`: whenever
/// `s ∈ K̄`, `sσ ∈ K̄`, some owner `i` of `σ` has no lookalike `s_i ∈ K̄`
/// with `P_i(s_i) = P_i(s)` and `s_iσ ∈ L(G) ∖ K̄`.
pub fn check_disj_coobservable(spec: &Generator, ctx: &ControlContext) -> Result<Verdict> {
    check(spec, ctx, Semantics::Disjunctive)
}

fn check(spec: &Generator, ctx: &ControlContext, sem: Semantics) -> Result<Verdict> {
    let k = trim(&ctx.check_within_plant(spec, "spec")?);
    let plant = ctx.plant();
    let n = ctx.agents().len();
    let (Some(k0), Some(g0)) = (k.initial(), plant.initial()) else {
        return Ok(Verdict::from_witness(None, 0));
    };
    let controllable: Vec<(Event, Vec<usize>)> = ctx
        .controllable()
        .into_iter()
        .map(|e| {
            let owners = ctx.owners(&e);
            (e, owners)
        })
        .collect();
    let mut bfs: Bfs<Vec<(StateId, StateId)>, Move> = Bfs::new(vec![(k0, g0); n + 1]);
    while let Some((id, tracks)) = bfs.pop() {
        let bad = |(q, g): (StateId, StateId), e: &Event| plant.enables(g, e) && !k.enables(q, e);
        for (sigma, owners) in &controllable {
            let violates = match sem {
                Semantics::Conjunctive => {
                    bad(tracks[0], sigma)
                        && owners.iter().all(|&i| k.enables(tracks[i + 1].0, sigma))
                }
                Semantics::Disjunctive => {
                    k.enables(tracks[0].0, sigma)
                        && owners.iter().all(|&i| bad(tracks[i + 1], sigma))
                }
            };
            if violates {
                let w = witness(ctx, sem, &bfs.path(id), sigma, owners);
                return Ok(Verdict::from_witness(Some(w), bfs.explored()));
            }
        }
        let step = |(q, g): (StateId, StateId), e: &Event| k.step(q, e).zip(plant.step(g, e));
        for e in ctx.alphabet() {
            if let Some(t0) = step(tracks[0], e) {
                let mut next = Vec::with_capacity(n + 1);
                next.push(t0);
                let mut ok = true;
                for i in 0..n {
                    let t = tracks[i + 1];
                    if ctx.agent(i).observable.contains(e) {
                        match step(t, e) {
                            Some(t2) => next.push(t2),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    } else {
                        next.push(t);
                    }
                }
                if ok {
                    bfs.push(id, Move::Joint(e.clone()), next);
                }
            }
            for i in 0..n {
                if ctx.agent(i).observable.contains(e) {
                    continue;
                }
                if let Some(t2) = step(tracks[i + 1], e) {
                    let mut next = tracks.clone();
                    next[i + 1] = t2;
                    bfs.push(id, Move::Solo(i, e.clone()), next);
                }
            }
        }
    }
    Ok(Verdict::from_witness(None, bfs.explored()))
}

fn witness(
    ctx: &ControlContext,
    sem: Semantics,
    path: &[Move],
    sigma: &Event,
    owners: &[usize],
) -> Witness {
    let n = ctx.agents().len();
    let mut strings = vec![Trace::empty(); n + 1];
    for m in path {
        match m {
            Move::Joint(e) => {
                strings[0].push(e.clone());
                for i in 0..n {
                    if ctx.agent(i).observable.contains(e) {
                        strings[i + 1].push(e.clone());
                    }
                }
            }
            Move::Solo(i, e) => strings[i + 1].push(e.clone()),
        }
    }
    let condition = match (sem, owners) {
        (Semantics::Conjunctive, [0]) => Condition::CoobsFirst,
        (Semantics::Conjunctive, [_]) => Condition::CoobsSecond,
        (Semantics::Conjunctive, _) => Condition::CoobsShared,
        (Semantics::Disjunctive, [0]) => Condition::DisjFirst,
        (Semantics::Disjunctive, [_]) => Condition::DisjSecond,
        (Semantics::Disjunctive, _) => Condition::DisjShared,
    };
    let pick = |i: usize| owners.contains(&i).then(|| strings[i + 1].clone());
    Witness {
        s: strings[0].clone(),
        s_prime: pick(0),
        s_dprime: if n > 1 { pick(1) } else { None },
        event: sigma.clone(),
        channel: None,
        condition,
        lookalikes: owners
            .iter()
            .map(|&i| Lookalike {
                agent: ctx.agent(i).id.clone(),
                string: strings[i + 1].clone(),
            })
            .collect(),
    }
}
