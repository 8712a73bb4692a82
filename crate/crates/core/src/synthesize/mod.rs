//! Supremal sublanguage synthesis.
//!
//! All procedures shrink a specification until a property holds and return
//! the supremal (largest) sublanguage with that property:
//!
//! | procedure | property |
//! |---|---|
//! | [`supcon`] | controllable and `L_m(G)`-closed |
//! | [`sup_normal`] | normal on one channel |
//! | [`sup_conormal`] | normal on every channel |
//! | [`sup_rel_obs`] | relatively observable on one channel |
//! | [`algorithm1_sup_rel_coobs`] | relatively coobservable |
//! | [`algorithm2_sup_rcc`] | all of controllable, `L_m(G)`-closed, relatively coobservable |
//! | [`sup_conormal_controllable`] | all of controllable, `L_m(G)`-closed, conormal |
//!
//! Results are returned as minimal trim recognizers. Fixpoints are detected
//! by language equality of successive iterates.

mod local;
mod normal;
mod relobs;
mod supcon;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{
    equivalent, explore, minimize, trim, unobservable_reach, Generator, Mode, StateId,
};
use crate::context::{ControlContext, LanguagePair};
use crate::error::{Error, Result};
use crate::event::EventSet;
use crate::verify::{check, Property};

pub use local::extract_local_supervisor;
pub use normal::{sup_conormal, sup_normal};
pub use relobs::sup_rel_obs;
pub use supcon::supcon;

pub(crate) use normal::sup_conormal_at;
pub(crate) use relobs::sup_rel_obs_at;
pub(crate) use supcon::supcon_at;

/// Safety cap on outer and inner iterations.
pub const MAX_PASSES: usize = 10_000;

/// Size of one iterate. `footprint_*` count the states and transitions of
/// the input recognizer that the iterate still uses; unlike the raw sizes,
/// which can grow when a language is re-refined, the footprint never
/// increases from one pass to the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PassRecord {
    pub stage: String,
    /// Outer pass `j`.
    pub pass: usize,
    /// Inner pass within an outer pass of [`algorithm2_sup_rcc`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    pub states: usize,
    pub transitions: usize,
    pub footprint_states: usize,
    pub footprint_transitions: usize,
}

impl PassRecord {
    pub fn size(&self) -> usize {
        self.states + self.transitions
    }

    pub fn footprint(&self) -> usize {
        self.footprint_states + self.footprint_transitions
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub algorithm: String,
    pub result: Generator,
    /// Number of outer passes until the fixpoint was confirmed.
    pub outer_passes: usize,
    pub passes: Vec<PassRecord>,
    /// Property name to verdict, re-checked on `result`.
    pub recheck: BTreeMap<String, bool>,
}

impl SynthesisReport {
    pub fn is_empty(&self) -> bool {
        self.result.is_empty()
    }

    /// Whether the footprint is non-increasing along `passes`.
    pub fn footprint_monotone(&self) -> bool {
        self.passes
            .windows(2)
            .all(|w| w[1].footprint() <= w[0].footprint())
    }

    pub fn all_rechecks_hold(&self) -> bool {
        self.recheck.values().all(|&v| v)
    }
}

impl fmt::Display for SynthesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algorithm: {}", self.algorithm)?;
        for p in &self.passes {
            write!(f, "  {:<10} j={}", p.stage, p.pass)?;
            if let Some(i) = p.inner {
                write!(f, " inner={i}")?;
            }
            if let Some(a) = &p.agent {
                write!(f, " agent={a}")?;
            }
            writeln!(
                f,
                " states={} transitions={} footprint={}/{}",
                p.states, p.transitions, p.footprint_states, p.footprint_transitions
            )?;
        }
        writeln!(
            f,
            "result: {} states, {} transitions after {} outer pass(es)",
            self.result.num_states(),
            self.result.num_transitions(),
            self.outer_passes
        )?;
        for (k, v) in &self.recheck {
            writeln!(f, "  recheck {k}: {v}")?;
        }
        Ok(())
    }
}

struct Recorder<'a> {
    base: &'a Generator,
    passes: Vec<PassRecord>,
}

impl<'a> Recorder<'a> {
    fn new(base: &'a Generator) -> Self {
        let mut r = Recorder {
            base,
            passes: Vec::new(),
        };
        r.push("input", 0, None, None, base);
        r
    }

    fn push(
        &mut self,
        stage: &str,
        pass: usize,
        inner: Option<usize>,
        agent: Option<&str>,
        g: &Generator,
    ) {
        let (fs, ft) = footprint(g, self.base);
        self.passes.push(PassRecord {
            stage: stage.to_string(),
            pass,
            inner,
            agent: agent.map(str::to_string),
            states: g.num_states(),
            transitions: g.num_transitions(),
            footprint_states: fs,
            footprint_transitions: ft,
        });
    }
}

/// States and transitions of `base` visited by strings of `L(g)`.
/// Requires `L(g) ⊆ L(base)`.
fn footprint(g: &Generator, base: &Generator) -> (usize, usize) {
    let (_, origin) = explore(
        g.alphabet().clone(),
        g.initial().zip(base.initial()),
        |&(q, b), e| Some((g.step(q, e)?, base.step(b, e)?)),
        |_| false,
        |_| String::new(),
    );
    let states: BTreeSet<StateId> = origin.iter().map(|&(_, b)| b).collect();
    let edges: BTreeSet<(StateId, &crate::event::Event)> = origin
        .iter()
        .flat_map(|&(q, b)| {
            g.out(q)
                .filter(move |(e, _)| base.enables(b, e))
                .map(move |(e, _)| (b, e))
        })
        .collect();
    (states.len(), edges.len())
}

/// Repeatedly deletes the states flagged by `bad` (given the current
/// survivors) together with every state that is no longer reachable and
/// coreachable, until nothing changes; returns the surviving subautomaton.
pub(crate) fn prune<F>(g: &Generator, mut bad: F) -> Generator
where
    F: FnMut(StateId, &[bool]) -> bool,
{
    let n = g.num_states();
    let mut alive = vec![true; n];
    loop {
        let flagged: Vec<StateId> = (0..n).filter(|&q| alive[q] && bad(q, &alive)).collect();
        for &q in &flagged {
            alive[q] = false;
        }
        let live = live_states(g, &alive);
        let mut changed = !flagged.is_empty();
        for q in 0..n {
            if alive[q] && !live[q] {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    trim(&g.restrict(|q| alive[q], |_, _, _| true))
}

fn live_states(g: &Generator, alive: &[bool]) -> Vec<bool> {
    let n = g.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (p, _, q) in g.transitions() {
        if alive[p] && alive[q] {
            preds[q].push(p);
        }
    }
    let mut fwd = vec![false; n];
    let mut stack = Vec::new();
    if n > 0 && alive[0] {
        fwd[0] = true;
        stack.push(0);
    }
    while let Some(p) = stack.pop() {
        for (_, q) in g.out(p) {
            if alive[q] && !fwd[q] {
                fwd[q] = true;
                stack.push(q);
            }
        }
    }
    let mut back: Vec<bool> = (0..n).map(|q| alive[q] && g.is_marked(q)).collect();
    stack.extend((0..n).filter(|&q| back[q]));
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if !back[p] {
                back[p] = true;
                stack.push(p);
            }
        }
    }
    (0..n).map(|q| fwd[q] && back[q]).collect()
}

/// Pairs each string of `L(k)` with the observer cell of its projection
/// in `x`: the set of `x`-states reached by strings of `L(x)` that look the
/// same through `observable`. Marking follows `k`.
pub(crate) fn cell_product(
    k: &Generator,
    x: &Generator,
    observable: &EventSet,
) -> (Generator, Vec<(StateId, BTreeSet<StateId>)>) {
    let cell0 = match x.initial() {
        Some(x0) => unobservable_reach(x, [x0], observable),
        None => BTreeSet::new(),
    };
    explore(
        k.alphabet().clone(),
        k.initial().map(|q0| (q0, cell0)),
        |(q, cell), e| {
            let q2 = k.step(*q, e)?;
            let cell2 = if observable.contains(e) {
                unobservable_reach(x, cell.iter().filter_map(|&y| x.step(y, e)), observable)
            } else {
                cell.clone()
            };
            Some((q2, cell2))
        },
        |(q, _)| k.is_marked(*q),
        |(q, _)| k.label(*q).to_string(),
    )
}

fn recheck(
    properties: &[Property],
    result: &Generator,
    ambient: Option<&Generator>,
    ctx: &ControlContext,
) -> Result<BTreeMap<String, bool>> {
    properties
        .iter()
        .map(|p| Ok((p.to_string(), check(p, result, ambient, ctx)?.holds)))
        .collect()
}

/// Inner loop of [`algorithm1_sup_rel_coobs`] with a fixed ambient `c`. Returns the result
/// and the number of full passes over the agents.
fn alg1_loop(
    k: &Generator,
    c: &Generator,
    ctx: &ControlContext,
    rec: &mut Recorder<'_>,
    outer: Option<usize>,
) -> Result<(Generator, usize)> {
    let mut cur = minimize(k);
    for j in 0..MAX_PASSES {
        let start = cur.clone();
        for (i, agent) in ctx.agents().iter().enumerate() {
            cur = sup_rel_obs_at(&cur, c, ctx, i)?;
            match outer {
                None => rec.push("sup-relobs", j, None, Some(&agent.id), &cur),
                Some(o) => rec.push("sup-relobs", o, Some(j), Some(&agent.id), &cur),
            }
        }
        if equivalent(&start, &cur, Mode::Marked) {
            return Ok((cur, j + 1));
        }
    }
    Err(Error::NoConvergence(MAX_PASSES))
}

/// Supremal sublanguage of `L_m(spec)` that is relatively coobservable
/// with respect to the fixed ambient `C̄`: cycles [`sup_rel_obs`] over the
/// agents in order until a full pass changes nothing.
pub fn algorithm1_sup_rel_coobs(
    spec: &Generator,
    ambient: &Generator,
    ctx: &ControlContext,
) -> Result<SynthesisReport> {
    let pair = LanguagePair::new(spec, Some(ambient), ctx)?;
    let mut rec = Recorder::new(pair.spec());
    let (result, outer_passes) = alg1_loop(pair.spec(), pair.ambient(), ctx, &mut rec, None)?;
    let recheck = recheck(
        &[Property::RelCoobs, Property::CoobsConj, Property::CoobsDisj],
        &result,
        Some(pair.ambient()),
        ctx,
    )?;
    Ok(SynthesisReport {
        algorithm: "sup-relcoobs".into(),
        result,
        outer_passes,
        passes: rec.passes,
        recheck,
    })
}

/// Supremal controllable, `L_m(G)`-closed, relatively coobservable
/// sublanguage: alternates [`supcon`] with [`algorithm1_sup_rel_coobs`],
/// whose ambient is the closure of the controllable iterate `H_j` just
/// computed.
pub fn algorithm2_sup_rcc(spec: &Generator, ctx: &ControlContext) -> Result<SynthesisReport> {
    let k0 = trim(&ctx.check_within_plant(spec, "spec")?);
    let mut rec = Recorder::new(&k0);
    let mut cur = minimize(&k0);
    for j in 0..MAX_PASSES {
        let h = supcon_at(&cur, ctx);
        rec.push("supcon", j, None, None, &h);
        let (r, _) = alg1_loop(&h, &h, ctx, &mut rec, Some(j))?;
        if equivalent(&r, &cur, Mode::Marked) {
            let recheck = recheck(
                &[
                    Property::Controllable,
                    Property::LmClosed,
                    Property::RelCoobs,
                    Property::CoobsConj,
                    Property::CoobsDisj,
                ],
                &r,
                None,
                ctx,
            )?;
            return Ok(SynthesisReport {
                algorithm: "sup-rcc".into(),
                result: r,
                outer_passes: j + 1,
                passes: rec.passes,
                recheck,
            });
        }
        cur = r;
    }
    Err(Error::NoConvergence(MAX_PASSES))
}

/// Supremal controllable, `L_m(G)`-closed, conormal sublanguage.
pub fn sup_conormal_controllable(spec: &Generator, ctx: &ControlContext) -> Result<Generator> {
    Ok(sup_conormal_controllable_report(spec, ctx)?.result)
}

pub fn sup_conormal_controllable_report(
    spec: &Generator,
    ctx: &ControlContext,
) -> Result<SynthesisReport> {
    let k0 = trim(&ctx.check_within_plant(spec, "spec")?);
    let mut rec = Recorder::new(&k0);
    let mut cur = minimize(&k0);
    for j in 0..MAX_PASSES {
        let h = supcon_at(&cur, ctx);
        rec.push("supcon", j, None, None, &h);
        let n = sup_conormal_at(&h, ctx);
        rec.push("conormal", j, None, None, &n);
        if equivalent(&n, &h, Mode::Marked) {
            let recheck = recheck(
                &[
                    Property::Controllable,
                    Property::LmClosed,
                    Property::Conormal,
                ],
                &n,
                None,
                ctx,
            )?;
            return Ok(SynthesisReport {
                algorithm: "sup-conormal-controllable".into(),
                result: n,
                outer_passes: j + 1,
                passes: rec.passes,
                recheck,
            });
        }
        cur = n;
    }
    Err(Error::NoConvergence(MAX_PASSES))
}

/// A synthesis procedure, as named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Supcon,
    SupNormal(String),
    SupConormal,
    SupConormalControllable,
    SupRelObs(String),
    SupRelCoobs,
    SupRcc,
}

impl Algorithm {
    pub fn uses_ambient(&self) -> bool {
        matches!(self, Algorithm::SupRelObs(_) | Algorithm::SupRelCoobs)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let with_agent = |rest: &str| {
            if rest.is_empty() {
                Err(format!("algorithm `{s}` needs an agent id"))
            } else {
                Ok(rest.to_string())
            }
        };
        match s {
            "supcon" => Ok(Algorithm::Supcon),
            "sup-conormal" => Ok(Algorithm::SupConormal),
            "sup-conormal-controllable" => Ok(Algorithm::SupConormalControllable),
            "sup-relcoobs" => Ok(Algorithm::SupRelCoobs),
            "sup-rcc" => Ok(Algorithm::SupRcc),
            _ => {
                if let Some(rest) = s.strip_prefix("sup-normal:") {
                    with_agent(rest).map(Algorithm::SupNormal)
                } else if let Some(rest) = s.strip_prefix("sup-relobs:") {
                    with_agent(rest).map(Algorithm::SupRelObs)
                } else {
                    Err(format!("unknown algorithm `{s}`"))
                }
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Supcon => f.write_str("supcon"),
            Algorithm::SupNormal(a) => write!(f, "sup-normal:{a}"),
            Algorithm::SupConormal => f.write_str("sup-conormal"),
            Algorithm::SupConormalControllable => f.write_str("sup-conormal-controllable"),
            Algorithm::SupRelObs(a) => write!(f, "sup-relobs:{a}"),
            Algorithm::SupRelCoobs => f.write_str("sup-relcoobs"),
            Algorithm::SupRcc => f.write_str("sup-rcc"),
        }
    }
}

/// Runs one synthesis procedure. `ambient` defaults to the spec and is used
/// by the relative procedures only.
pub fn synthesize(
    algorithm: &Algorithm,
    spec: &Generator,
    ambient: Option<&Generator>,
    ctx: &ControlContext,
) -> Result<SynthesisReport> {
    let single = |result: Generator, props: &[Property], amb: Option<&Generator>| {
        let base = trim(&ctx.conform(spec)?);
        let mut rec = Recorder::new(&base);
        rec.push(&algorithm.to_string(), 0, None, None, &result);
        Ok(SynthesisReport {
            algorithm: algorithm.to_string(),
            recheck: recheck(props, &result, amb, ctx)?,
            result,
            outer_passes: 1,
            passes: rec.passes,
        })
    };
    match algorithm {
        Algorithm::Supcon => single(
            supcon(spec, ctx)?,
            &[Property::Controllable, Property::LmClosed],
            None,
        ),
        Algorithm::SupNormal(a) => single(
            sup_normal(spec, ctx, a)?,
            &[Property::Normal(a.clone())],
            None,
        ),
        Algorithm::SupConormal => single(sup_conormal(spec, ctx)?, &[Property::Conormal], None),
        Algorithm::SupConormalControllable => sup_conormal_controllable_report(spec, ctx),
        Algorithm::SupRelObs(a) => {
            let pair = LanguagePair::new(spec, ambient, ctx)?;
            let result = sup_rel_obs(pair.spec(), pair.ambient(), ctx, a)?;
            single(result, &[Property::RelObs(a.clone())], Some(pair.ambient()))
        }
        Algorithm::SupRelCoobs => {
            let pair = LanguagePair::new(spec, ambient, ctx)?;
            algorithm1_sup_rel_coobs(pair.spec(), pair.ambient(), ctx)
        }
        Algorithm::SupRcc => algorithm2_sup_rcc(spec, ctx),
    }
}
