//! Bundled example instances.
//!
//! `fig2`, `fig3` and `fig4` are small three-branch plants over
//! `{α, β, γ, σ}` separating the properties: `fig2` has two specifications
//! that are conjunctively coobservable yet fail relative coobservability,
//! `fig3` is disjunctively but not relatively coobservable, and `fig4` is
//! relatively coobservable but not conormal.
//!
//! `guideway` is two vehicles sharing a five-section track. Each vehicle is
//! the chain `0 -i1-> 1 -i3-> 2 -i0-> 3 -i5-> 4 -i2-> 5` (`i0`, `i2`
//! uncontrollable); the plant is their synchronous product and the spec
//! `K_mx` forbids both vehicles occupying the same section `j ∈ 1..=4`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::automata::{sync, trim, Generator};
use crate::context::ControlContext;
use crate::error::Result;
use crate::format::{agents_to_json, generator_to_json, parse_agents, parse_generator};

pub struct Fixture {
    pub name: &'static str,
    pub plant: Generator,
    pub specs: BTreeMap<&'static str, Generator>,
    pub ctx: ControlContext,
}

impl Fixture {
    /// Panics if `name` is not one of the fixture's specs.
    pub fn spec(&self, name: &str) -> &Generator {
        self.specs
            .get(name)
            .unwrap_or_else(|| panic!("fixture {} has no spec {name}", self.name))
    }

    /// `(file name, contents)` in the CLI file format.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut out = vec![
            (
                format!("{}_plant.json", self.name),
                generator_to_json(&self.plant, None),
            ),
            (
                format!("{}_agents.json", self.name),
                agents_to_json(self.ctx.agents(), None),
            ),
        ];
        for (k, g) in &self.specs {
            out.push((
                format!("{}_{}.json", self.name, k.to_lowercase()),
                generator_to_json(g, None),
            ));
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<String>> {
        let mut names = Vec::new();
        for (name, text) in self.files() {
            std::fs::write(dir.join(&name), text)?;
            names.push(name);
        }
        Ok(names)
    }
}

fn load(text: &str) -> Generator {
    parse_generator(text).expect("bundled fixture parses")
}

fn context(plant: &Generator, agents: &str) -> ControlContext {
    ControlContext::new(
        plant.clone(),
        parse_agents(agents).expect("bundled agents parse"),
    )
    .expect("bundled context is valid")
}

const FIG_AGENTS: &str = include_str!("../fixtures/fig_agents.json");

pub fn fig2() -> Fixture {
    let plant = load(include_str!("../fixtures/fig2_plant.json"));
    Fixture {
        name: "fig2",
        ctx: context(&plant, FIG_AGENTS),
        specs: BTreeMap::from([
            ("K1", load(include_str!("../fixtures/fig2_k1.json"))),
            ("K2", load(include_str!("../fixtures/fig2_k2.json"))),
            ("K", load(include_str!("../fixtures/fig2_k.json"))),
        ]),
        plant,
    }
}

pub fn fig3() -> Fixture {
    let plant = load(include_str!("../fixtures/fig3_plant.json"));
    Fixture {
        name: "fig3",
        ctx: context(&plant, FIG_AGENTS),
        specs: BTreeMap::from([("K", load(include_str!("../fixtures/fig3_k.json")))]),
        plant,
    }
}

pub fn fig4() -> Fixture {
    let plant = load(include_str!("../fixtures/fig4_plant.json"));
    Fixture {
        name: "fig4",
        ctx: context(&plant, include_str!("../fixtures/fig4_agents.json")),
        specs: BTreeMap::from([("K", load(include_str!("../fixtures/fig4_k.json")))]),
        plant,
    }
}

pub fn guideway_vehicles() -> (Generator, Generator) {
    (
        load(include_str!("../fixtures/guideway_v1.json")),
        load(include_str!("../fixtures/guideway_v2.json")),
    )
}

pub fn guideway() -> Fixture {
    let (v1, v2) = guideway_vehicles();
    let plant = sync(&v1, &v2);
    let collision: Vec<String> = (1..=4).map(|j| format!("({j},{j})")).collect();
    let kmx = trim(&plant.restrict(
        |q| !collision.iter().any(|c| c == plant.label(q)),
        |_, _, _| true,
    ));
    Fixture {
        name: "guideway",
        ctx: context(&plant, include_str!("../fixtures/guideway_agents.json")),
        specs: BTreeMap::from([("K_mx", kmx)]),
        plant,
    }
}

pub fn all() -> Vec<Fixture> {
    vec![fig2(), fig3(), fig4(), guideway()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guideway_sizes() {
        let fx = guideway();
        assert_eq!(fx.plant.num_states(), 36);
        assert!(fx.plant.is_nonblocking());
        let k = fx.spec("K_mx");
        assert_eq!(k.num_states(), 32);
        assert!(k.accepts_closed(&crate::event::Trace::parse("21.23.20.11").0));
    }

    #[test]
    fn specs_lie_within_plants() {
        for fx in all() {
            for g in fx.specs.values() {
                assert!(fx.ctx.check_within_plant(g, "spec").is_ok(), "{}", fx.name);
            }
        }
    }
}
