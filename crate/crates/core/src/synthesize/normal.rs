use super::cell_product;
use crate::automata::{equivalent, explore, minimize, Generator, Mode};
use crate::context::ControlContext;
use crate::error::Result;

/// Supremal sublanguage of `L_m(spec)` whose closure is normal with respect
/// to `L(G)` and the projection of `agent`.
///
/// The closed-language core `K̄ ∖ P⁻¹P(L(G) ∖ K̄)Σ*` is computed on the
/// product of the spec with the observer of a plant tracker that records
/// whether each plant string has left `K̄`. Restricting the marking and
/// trimming can expose new lookalikes, so the step is repeated until the
/// language is stable.
pub fn sup_normal(spec: &Generator, ctx: &ControlContext, agent: &str) -> Result<Generator> {
    let idx = ctx.agent_index(agent)?;
    let k = ctx.check_within_plant(spec, "spec")?;
    Ok(sup_normal_at(&k, ctx, idx))
}

pub(crate) fn sup_normal_at(spec: &Generator, ctx: &ControlContext, idx: usize) -> Generator {
    let mut cur = minimize(spec);
    loop {
        let next = normal_step(&cur, ctx, idx);
        if equivalent(&next, &cur, Mode::Marked) {
            return next;
        }
        cur = next;
    }
}

fn normal_step(k: &Generator, ctx: &ControlContext, idx: usize) -> Generator {
    let plant = ctx.plant();
    let observable = &ctx.agent(idx).observable;
    let (tracker, origin) = explore(
        plant.alphabet().clone(),
        plant.initial().map(|g0| (k.initial(), g0)),
        |&(q, g), e| Some((q.and_then(|q| k.step(q, e)), plant.step(g, e)?)),
        |_| false,
        |_| String::new(),
    );
    let (prod, cells) = cell_product(k, &tracker, observable);
    let bad: Vec<bool> = cells
        .iter()
        .map(|(_, cell)| cell.iter().any(|&y| origin[y].0.is_none()))
        .collect();
    minimize(&prod.restrict(|x| !bad[x], |_, _, _| true))
}

/// Supremal conormal sublanguage: [`sup_normal`] cycled over the agents
/// until a full cycle changes nothing.
pub fn sup_conormal(spec: &Generator, ctx: &ControlContext) -> Result<Generator> {
    let k = ctx.check_within_plant(spec, "spec")?;
    Ok(sup_conormal_at(&k, ctx))
}

pub(crate) fn sup_conormal_at(spec: &Generator, ctx: &ControlContext) -> Generator {
    let mut cur = minimize(spec);
    loop {
        let start = cur.clone();
        for idx in 0..ctx.agents().len() {
            cur = sup_normal_at(&cur, ctx, idx);
        }
        if equivalent(&start, &cur, Mode::Marked) {
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::verify::{check_conormal, check_normal};
    use crate::{AgentProfile, Generator};

    #[test]
    fn fig4_normal_sup_is_empty() {
        let fx = fixtures::fig4();
        let k = fx.spec("K");
        assert!(sup_normal(k, &fx.ctx, "1").unwrap().is_empty());
        assert!(sup_conormal(k, &fx.ctx).unwrap().is_empty());
    }

    #[test]
    fn full_observation_keeps_spec() {
        let fx = fixtures::fig4();
        let all = fx.plant.alphabet().clone();
        let ctx = crate::ControlContext::new(
            fx.plant.clone(),
            vec![AgentProfile::new("1", all.clone(), all)],
        )
        .unwrap();
        let k = fx.spec("K");
        assert!(equivalent(
            &sup_normal(k, &ctx, "1").unwrap(),
            k,
            Mode::Marked
        ));
        assert!(equivalent(&sup_conormal(k, &ctx).unwrap(), k, Mode::Marked));
    }

    #[test]
    fn guideway_conormal_fixpoint() {
        let fx = fixtures::guideway();
        let r = sup_conormal(fx.spec("K_mx"), &fx.ctx).unwrap();
        assert!(check_conormal(&r, &fx.ctx).unwrap().holds);
        for a in ["1", "2"] {
            assert!(check_normal(&r, &fx.ctx, a).unwrap().holds);
        }
        let again = sup_conormal(&r, &fx.ctx).unwrap();
        assert!(equivalent(&again, &r, Mode::Marked));
    }

    #[test]
    fn empty_stays_empty() {
        let fx = fixtures::fig3();
        let e = Generator::empty(fx.plant.alphabet().clone());
        assert!(sup_normal(&e, &fx.ctx, "2").unwrap().is_empty());
    }
}
