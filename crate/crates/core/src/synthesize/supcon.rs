use super::prune;
use crate::automata::{explore, minimize, trim, Generator};
use crate::context::ControlContext;
use crate::error::Result;

/// Supremal controllable and `L_m(G)`-closed sublanguage of `L_m(spec)`.
///
/// Works on the product of the spec with the plant: a product state is bad
/// when the plant enables an uncontrollable event the surviving product
/// cannot follow, or when the plant marks it and the spec does not. Bad
/// states are deleted and the product trimmed until none remain.
pub fn supcon(spec: &Generator, ctx: &ControlContext) -> Result<Generator> {
    let k = ctx.check_within_plant(spec, "spec")?;
    Ok(supcon_at(&k, ctx))
}

pub(crate) fn supcon_at(spec: &Generator, ctx: &ControlContext) -> Generator {
    let k = trim(spec);
    let plant = ctx.plant();
    let uncontrollable = ctx.uncontrollable();
    let (prod, origin) = explore(
        k.alphabet().clone(),
        k.initial().zip(plant.initial()),
        |&(q, g), e| Some((k.step(q, e)?, plant.step(g, e)?)),
        |&(q, _)| k.is_marked(q),
        |&(q, g)| format!("({},{})", k.label(q), plant.label(g)),
    );
    let pruned = prune(&prod, |x, alive| {
        let g = origin[x].1;
        (plant.is_marked(g) && !prod.is_marked(x))
            || uncontrollable
                .iter()
                .any(|u| plant.enables(g, u) && !prod.step(x, u).is_some_and(|y| alive[y]))
    });
    minimize(&pruned)
}
