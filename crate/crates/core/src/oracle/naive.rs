//! Direct evaluation of the property definitions over all strings up to a
//! length bound, and replay of checker witnesses.
//!
//! The evaluators only report violations whose strings (including every
//! lookalike) have length at most `bound`, so a `false` answer is always a
//! real violation while `true` means none was found within the bound.

use std::collections::{HashMap, HashSet};

use crate::automata::{trim, Generator};
use crate::context::{ControlContext, LanguagePair};
use crate::error::Result;
use crate::event::{Event, EventSet, Trace};
use crate::verify::{Property, Witness};

/// All strings of `L(g)` of length at most `max_len`, sorted.
pub fn strings_up_to(g: &Generator, max_len: usize) -> Vec<Trace> {
    let mut out = Vec::new();
    let Some(q0) = g.initial() else { return out };
    let mut frontier = vec![(Trace::empty(), q0)];
    while let Some((t, q)) = frontier.pop() {
        if t.len() < max_len {
            for (e, q2) in g.out(q) {
                frontier.push((t.with(e), q2));
            }
        }
        out.push(t);
    }
    out.sort();
    out
}

struct Langs<'a> {
    ctx: &'a ControlContext,
    kbar: Generator,
    k: Generator,
    cbar: Generator,
}

impl Langs<'_> {
    fn plant(&self) -> &Generator {
        self.ctx.plant()
    }

    fn in_k(&self, s: &Trace) -> bool {
        self.kbar.accepts_closed(&s.0)
    }

    fn in_c(&self, s: &Trace) -> bool {
        self.cbar.accepts_closed(&s.0)
    }

    fn in_g(&self, s: &Trace) -> bool {
        self.plant().accepts_closed(&s.0)
    }

    /// `sσ ∈ L(G) ∖ K̄`.
    fn exits(&self, s: &Trace, e: &Event) -> bool {
        let t = s.with(e);
        self.in_g(&t) && !self.in_k(&t)
    }

    fn k_strings(&self, bound: usize) -> Vec<Trace> {
        strings_up_to(&self.kbar, bound)
    }
}

fn langs<'a>(
    spec: &Generator,
    ambient: Option<&Generator>,
    ctx: &'a ControlContext,
) -> Result<Langs<'a>> {
    let pair = LanguagePair::new(spec, ambient, ctx)?;
    let k = trim(pair.spec());
    Ok(Langs {
        ctx,
        kbar: k.closure(),
        cbar: trim(pair.ambient()).closure(),
        k,
    })
}

fn projections<'a>(
    strings: impl Iterator<Item = &'a Trace>,
    observable: &EventSet,
) -> HashSet<Trace> {
    strings.map(|s| s.project(observable)).collect()
}

/// Definition-level evaluation of `property` over strings of length at most
/// `bound`.
pub fn naive_check(
    property: &Property,
    spec: &Generator,
    ambient: Option<&Generator>,
    ctx: &ControlContext,
    bound: usize,
) -> Result<bool> {
    let l = langs(spec, ambient, ctx)?;
    let ks = l.k_strings(bound);
    Ok(match property {
        Property::Controllable => {
            let unc = ctx.uncontrollable();
            !ks.iter().any(|s| unc.iter().any(|u| l.exits(s, u)))
        }
        Property::LmClosed => !ks
            .iter()
            .any(|s| ctx.plant().accepts_marked(&s.0) && !l.k.accepts_marked(&s.0)),
        Property::RelObs(a) => relobs_holds(&l, &ks, ctx.agent_index(a)?, bound),
        Property::RelCoobs => (0..ctx.agents().len()).all(|i| relobs_holds(&l, &ks, i, bound)),
        Property::CoobsConj => coobs_holds(&l, &ks, true),
        Property::CoobsDisj => coobs_holds(&l, &ks, false),
        Property::Normal(a) => normal_holds(&l, &ks, ctx.agent_index(a)?, bound),
        Property::Conormal => (0..ctx.agents().len()).all(|i| normal_holds(&l, &ks, i, bound)),
    })
}

fn relobs_holds(l: &Langs<'_>, ks: &[Trace], idx: usize, bound: usize) -> bool {
    let agent = l.ctx.agent(idx);
    let cs = strings_up_to(&l.cbar, bound);
    agent.controllable.iter().all(|sigma| {
        let enabled = projections(
            ks.iter().filter(|s| l.in_k(&s.with(sigma))),
            &agent.observable,
        );
        !cs.iter().any(|s| {
            l.in_c(s) && l.exits(s, sigma) && enabled.contains(&s.project(&agent.observable))
        })
    })
}

/// Conjunctive when `conj`, disjunctive otherwise.
fn coobs_holds(l: &Langs<'_>, ks: &[Trace], conj: bool) -> bool {
    let ctx = l.ctx;
    ctx.controllable().iter().all(|sigma| {
        let owners = ctx.owners(sigma);
        // lookalike projections per owner
        let looks: HashMap<usize, HashSet<Trace>> = owners
            .iter()
            .map(|&i| {
                let obs = &ctx.agent(i).observable;
                let set = if conj {
                    projections(ks.iter().filter(|s| l.in_k(&s.with(sigma))), obs)
                } else {
                    projections(ks.iter().filter(|s| l.exits(s, sigma)), obs)
                };
                (i, set)
            })
            .collect();
        !ks.iter().any(|s| {
            let premise = if conj {
                l.exits(s, sigma)
            } else {
                l.in_k(&s.with(sigma))
            };
            premise
                && owners
                    .iter()
                    .all(|i| looks[i].contains(&s.project(&ctx.agent(*i).observable)))
        })
    })
}

fn normal_holds(l: &Langs<'_>, ks: &[Trace], idx: usize, bound: usize) -> bool {
    let obs = &l.ctx.agent(idx).observable;
    let seen = projections(ks.iter(), obs);
    !strings_up_to(l.plant(), bound)
        .iter()
        .any(|t| !l.in_k(t) && seen.contains(&t.project(obs)))
}

/// Checks that `w` is a genuine violation of `property` by evaluating the
/// definition on the witness strings alone.
pub fn replay(
    property: &Property,
    spec: &Generator,
    ambient: Option<&Generator>,
    ctx: &ControlContext,
    w: &Witness,
) -> Result<bool> {
    let l = langs(spec, ambient, ctx)?;
    let s = &w.s;
    let sigma = &w.event;
    let same = |i: usize, a: &Trace, b: &Trace| {
        let obs = &ctx.agent(i).observable;
        a.project(obs) == b.project(obs)
    };
    let channel = |w: &Witness| -> Result<usize> {
        ctx.agent_index(w.channel.as_deref().unwrap_or_default())
    };
    Ok(match property {
        Property::Controllable => {
            l.in_k(s) && ctx.uncontrollable().contains(sigma) && l.exits(s, sigma)
        }
        Property::LmClosed => {
            let t = if sigma.as_str().is_empty() {
                s.clone()
            } else {
                s.with(sigma)
            };
            l.in_k(&t) && ctx.plant().accepts_marked(&t.0) && !l.k.accepts_marked(&t.0)
        }
        Property::RelObs(_) | Property::RelCoobs => {
            let i = channel(w)?;
            let Some(sp) = &w.s_prime else {
                return Ok(false);
            };
            if let Property::RelObs(a) = property {
                if ctx.agent_index(a)? != i {
                    return Ok(false);
                }
            }
            ctx.agent(i).controllable.contains(sigma)
                && same(i, s, sp)
                && l.in_k(&sp.with(sigma))
                && l.in_c(s)
                && l.exits(s, sigma)
        }
        Property::CoobsConj | Property::CoobsDisj => {
            let conj = *property == Property::CoobsConj;
            let owners = ctx.owners(sigma);
            let premise = l.in_k(s)
                && if conj {
                    l.exits(s, sigma)
                } else {
                    l.in_k(&s.with(sigma))
                };
            let covered = owners.iter().all(|&i| {
                w.lookalikes.iter().any(|look| {
                    look.agent == ctx.agent(i).id
                        && l.in_k(&look.string)
                        && same(i, s, &look.string)
                        && if conj {
                            l.in_k(&look.string.with(sigma))
                        } else {
                            l.exits(&look.string, sigma)
                        }
                })
            });
            !owners.is_empty() && premise && covered
        }
        Property::Normal(_) | Property::Conormal => {
            let i = channel(w)?;
            if let Property::Normal(a) = property {
                if ctx.agent_index(a)? != i {
                    return Ok(false);
                }
            }
            let t = s.with(sigma);
            let Some(sp) = &w.s_prime else {
                return Ok(false);
            };
            l.in_g(&t) && !l.in_k(&t) && l.in_k(sp) && same(i, &t, sp)
        }
    })
}

/// Length of the longest string in `w`.
pub fn witness_len(w: &Witness) -> usize {
    let mut n = w.s.len() + 1;
    for t in w.s_prime.iter().chain(&w.s_dprime) {
        n = n.max(t.len() + 1);
    }
    for l in &w.lookalikes {
        n = n.max(l.string.len() + 1);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::check;

    #[test]
    fn agrees_with_checkers_on_fixtures() {
        let props = [
            "controllable",
            "lm-closed",
            "relobs:1",
            "relobs:2",
            "relcoobs",
            "coobs-conj",
            "coobs-disj",
            "normal:1",
            "normal:2",
            "conormal",
        ];
        for fx in [fixtures::fig2(), fixtures::fig3(), fixtures::fig4()] {
            for (name, k) in &fx.specs {
                for p in props {
                    let p: Property = p.parse().unwrap();
                    let v = check(&p, k, None, &fx.ctx).unwrap();
                    let naive = naive_check(&p, k, None, &fx.ctx, 4).unwrap();
                    assert_eq!(v.holds, naive, "{} {name} {p}", fx.name);
                    if let Some(w) = &v.witness {
                        assert!(
                            replay(&p, k, None, &fx.ctx, w).unwrap(),
                            "{} {name} {p} {w}",
                            fx.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn replay_rejects_tampered_witness() {
        let fx = fixtures::fig3();
        let k = fx.spec("K");
        let p = Property::RelCoobs;
        let mut w = check(&p, k, None, &fx.ctx).unwrap().witness.unwrap();
        w.s = Trace::parse("γ");
        assert!(!replay(&p, k, None, &fx.ctx, &w).unwrap());
    }

    #[test]
    fn strings_up_to_counts() {
        let fx = fixtures::fig3();
        assert_eq!(strings_up_to(&fx.plant, 1).len(), 4);
        assert_eq!(strings_up_to(&fx.plant, 5).len(), 7);
    }
}
