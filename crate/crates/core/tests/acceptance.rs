//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p coobs-core --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use coobs_core::automata::{equivalent, includes, minimize, trim, union, Mode};
use coobs_core::fixtures::{self, Fixture};
use coobs_core::oracle::{
    oracle_sup_lower_bound, random_instance, random_sublanguage, refine, Instance, InstanceSpec,
    DEFAULT_BUDGET,
};
use coobs_core::synthesize::{
    algorithm1_sup_rel_coobs, algorithm2_sup_rcc, sup_conormal, sup_conormal_controllable_report,
    SynthesisReport,
};
use coobs_core::verify::{
    check_conj_coobservable, check_conormal, check_controllable, check_disj_coobservable,
    check_lm_closed, check_rel_coobservable,
};
use coobs_core::{ControlContext, Generator, GeneratorBuilder, LanguagePair, Trace};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn relcoobs(k: &Generator, c: &Generator, ctx: &ControlContext) -> Result<bool, String> {
    let pair = ok(LanguagePair::new(k, Some(c), ctx))?;
    Ok(ok(check_rel_coobservable(&pair, ctx))?.holds)
}

/// Trie recognizer of a finite language given as dot-joined strings.
fn finite_language(alphabet: &coobs_core::EventSet, strings: &[&str]) -> Generator {
    let mut b = GeneratorBuilder::new(alphabet.clone());
    b.add_state("", strings.contains(&"")).unwrap();
    b.set_initial("").unwrap();
    for s in strings {
        let t = Trace::parse(s);
        let mut prefix = String::new();
        for (i, e) in t.events().iter().enumerate() {
            let next = if prefix.is_empty() {
                e.to_string()
            } else {
                format!("{prefix}.{e}")
            };
            if b.state(&next).is_none() {
                let marked = i + 1 == t.len() || strings.contains(&next.as_str());
                b.add_state(next.clone(), marked).unwrap();
                b.add_transition(&prefix, e.as_str(), &next).unwrap();
            }
            prefix = next;
        }
    }
    trim(&b.build().unwrap())
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut timed = |f: &mut dyn FnMut() -> Result<(), String>| -> Result<(), String> {
        let t = Instant::now();
        f()?;
        slowest = slowest.max(t.elapsed());
        Ok(())
    };
    let fig3 = fixtures::fig3();
    timed(&mut || {
        let k = fig3.spec("K");
        ensure!(
            ok(check_disj_coobservable(k, &fig3.ctx))?.holds,
            "fig3 not disjunctively coobservable"
        );
        let pair = ok(LanguagePair::new(k, None, &fig3.ctx))?;
        let v = ok(check_rel_coobservable(&pair, &fig3.ctx))?;
        let w = v
            .witness
            .ok_or("fig3 unexpectedly relatively coobservable")?;
        let got = (
            w.s.to_string(),
            w.s_prime.map(|t| t.to_string()),
            w.event.to_string(),
            w.channel,
        );
        let want = (
            "β".to_string(),
            Some("α".to_string()),
            "σ".to_string(),
            Some("1".to_string()),
        );
        ensure!(got == want, "fig3 witness {got:?}");
        Ok(())
    })?;
    let fig4 = fixtures::fig4();
    timed(&mut || {
        let k = fig4.spec("K");
        ensure!(
            relcoobs(k, k, &fig4.ctx)?,
            "fig4 not relatively coobservable"
        );
        ensure!(!ok(check_conormal(k, &fig4.ctx))?.holds, "fig4 conormal");
        Ok(())
    })?;
    let fig2 = fixtures::fig2();
    timed(&mut || {
        for name in ["K1", "K2", "K"] {
            let k = fig2.spec(name);
            ensure!(
                !relcoobs(k, k, &fig2.ctx)?,
                "fig2 {name} passes with C = itself"
            );
            ensure!(
                !relcoobs(k, fig2.spec("K"), &fig2.ctx)?,
                "fig2 {name} passes with C = K1 ∪ K2"
            );
        }
        Ok(())
    })?;
    ensure!(
        slowest < Duration::from_secs(1),
        "slowest fixture took {slowest:?}"
    );
    Ok(format!(
        "fig2/fig3/fig4 verdicts as expected, slowest {slowest:?}"
    ))
}

struct Tally {
    checked: usize,
    conormal: usize,
    relcoobs: usize,
    violations: Vec<String>,
}

fn hierarchy(
    k: &Generator,
    ambients: &[&Generator],
    ctx: &ControlContext,
    tag: &str,
    t: &mut Tally,
) -> Result<(), String> {
    t.checked += 1;
    let conormal = ok(check_conormal(k, ctx))?.holds;
    let conj = ok(check_conj_coobservable(k, ctx))?.holds;
    let disj = ok(check_disj_coobservable(k, ctx))?.holds;
    t.conormal += usize::from(conormal);
    let mut any_rel = false;
    for (j, c) in ambients.iter().enumerate() {
        let rel = relcoobs(k, c, ctx)?;
        any_rel |= rel;
        if conormal && !rel {
            t.violations
                .push(format!("{tag}: conormal but not relcoobs (ambient #{j})"));
        }
        if rel && !conj {
            t.violations.push(format!(
                "{tag}: relcoobs (ambient #{j}) but not conjunctive"
            ));
        }
        if rel && !disj {
            t.violations.push(format!(
                "{tag}: relcoobs (ambient #{j}) but not disjunctive"
            ));
        }
    }
    t.relcoobs += usize::from(any_rel);
    Ok(())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut t = Tally {
        checked: 0,
        conormal: 0,
        relcoobs: 0,
        violations: Vec::new(),
    };
    for seed in 0..200 {
        let inst = random_instance(&InstanceSpec::with_seed(seed));
        let (k, c, g) = (inst.pair.spec(), inst.pair.ambient(), inst.ctx.plant());
        hierarchy(k, &[k, c, g], &inst.ctx, &format!("seed {seed}"), &mut t)?;
        let a1 = ok(algorithm1_sup_rel_coobs(k, c, &inst.ctx))?.result;
        hierarchy(
            &a1,
            &[&a1, k, c, g],
            &inst.ctx,
            &format!("seed {seed} alg1"),
            &mut t,
        )?;
        let sc = ok(sup_conormal(k, &inst.ctx))?;
        hierarchy(
            &sc,
            &[&sc, k, c, g],
            &inst.ctx,
            &format!("seed {seed} sup-conormal"),
            &mut t,
        )?;
    }
    let elapsed = start.elapsed();
    ensure!(
        t.violations.is_empty(),
        "{} violations, first: {}",
        t.violations.len(),
        t.violations[0]
    );
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "{} languages from 200 instances, {} conormal, {} relcoobs for some ambient, 0 violations, {elapsed:?}",
        t.checked, t.conormal, t.relcoobs
    ))
}

fn criterion_3() -> Outcome {
    let mut nonempty = 0;
    for seed in 0..100 {
        let inst = random_instance(&InstanceSpec::with_seed(1000 + seed));
        let (k1, c) = (inst.pair.spec(), inst.pair.ambient());
        let k2 = random_sublanguage(c, 5000 + seed);
        let r1 = ok(algorithm1_sup_rel_coobs(k1, c, &inst.ctx))?.result;
        let r2 = ok(algorithm1_sup_rel_coobs(&k2, c, &inst.ctx))?.result;
        let u = minimize(&union(&r1, &r2));
        nonempty += usize::from(!u.is_empty());
        ensure!(
            relcoobs(&u, c, &inst.ctx)?,
            "seed {}: union fails relcoobs",
            1000 + seed
        );
    }
    Ok(format!(
        "100 pairs, {nonempty} nonempty unions, all relatively coobservable"
    ))
}

fn fixture_sup(fx: &Fixture, k: &str, expect: &[&str]) -> Result<(), String> {
    let k = fx.spec(k);
    let want = finite_language(fx.plant.alphabet(), expect);
    let got = ok(algorithm1_sup_rel_coobs(k, k, &fx.ctx))?.result;
    ensure!(
        equivalent(&got, &want, Mode::Marked),
        "{}: algorithm 1 differs from {expect:?}",
        fx.name
    );
    let lb = ok(oracle_sup_lower_bound(k, k, &fx.ctx, DEFAULT_BUDGET))?;
    ensure!(
        equivalent(&lb, &want, Mode::Marked),
        "{}: oracle differs from {expect:?}",
        fx.name
    );
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    fixture_sup(&fixtures::fig2(), "K", &["α", "β", "γ"])?;
    fixture_sup(&fixtures::fig3(), "K", &["β"])?;
    fixture_sup(&fixtures::fig4(), "K", &["α", "β", "γ"])?;
    let (mut used, mut seed, mut equal) = (0, 0u64, 0);
    while used < 100 {
        ensure!(
            seed < 10_000,
            "only {used} in-budget instances in 10000 seeds"
        );
        let inst = random_instance(&InstanceSpec::with_seed(20_000 + seed));
        seed += 1;
        let (k, c) = (inst.pair.spec(), inst.pair.ambient());
        if refine(k, &inst.ctx).num_transitions() > DEFAULT_BUDGET {
            continue;
        }
        used += 1;
        let lb = ok(oracle_sup_lower_bound(k, c, &inst.ctx, DEFAULT_BUDGET))?;
        let r = ok(algorithm1_sup_rel_coobs(k, c, &inst.ctx))?.result;
        ensure!(
            includes(&r, &lb, Mode::Marked).holds,
            "seed {}: result misses oracle language",
            inst.seed
        );
        ensure!(
            relcoobs(&r, c, &inst.ctx)?,
            "seed {}: result not relcoobs",
            inst.seed
        );
        equal += usize::from(equivalent(&r, &lb, Mode::Marked));
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!(
        "fixtures equal hand results; 100 in-budget instances ({seed} seeds), result ⊇ oracle in all, equal in {equal}, {elapsed:?}"
    ))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let fx = fixtures::guideway();
    let k = fx.spec("K_mx");
    let r = ok(algorithm2_sup_rcc(k, &fx.ctx))?.result;
    let n = ok(sup_conormal_controllable_report(k, &fx.ctx))?.result;
    ensure!(!r.is_empty() && !n.is_empty(), "empty result");
    ensure!(
        includes(&r, &n, Mode::Closed).holds,
        "closure of N not inside closure of R"
    );
    let gap = includes(&n, &r, Mode::Closed)
        .counterexample
        .ok_or("closures of N and R are equal")?;
    ensure!(
        r.accepts_closed(&gap.0) && !n.accepts_closed(&gap.0),
        "gap string does not separate"
    );
    let s = Trace::parse("21.23.20.11");
    ensure!(r.accepts_closed(&s.0), "21.23.20.11 not in closure(R)");
    ensure!(!n.accepts_closed(&s.0), "21.23.20.11 in closure(N)");
    let s13 = Trace::parse("21.23.20.11.13");
    ensure!(
        fx.plant.accepts_closed(&s13.0) && !r.accepts_closed(&s13.0),
        "13 not disabled after 21.23.20.11"
    );
    ensure!(
        ok(check_controllable(&r, &fx.ctx))?.holds,
        "R not controllable"
    );
    ensure!(
        ok(check_lm_closed(&r, &fx.ctx))?.holds,
        "R not L_m(G)-closed"
    );
    ensure!(
        ok(check_conj_coobservable(&r, &fx.ctx))?.holds,
        "R not conjunctively coobservable"
    );
    ensure!(
        ok(check_disj_coobservable(&r, &fx.ctx))?.holds,
        "R not disjunctively coobservable"
    );
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "R {}/{} and N {}/{} states/transitions, separating string {gap}, {elapsed:?}",
        r.num_states(),
        r.num_transitions(),
        n.num_states(),
        n.num_transitions()
    ))
}

/// Checks the footprint and returns the first raw-size increase, if any.
fn accounting(rep: &SynthesisReport, tag: &str) -> Result<Option<String>, String> {
    ensure!(rep.footprint_monotone(), "{tag}: footprint increases");
    Ok(rep
        .passes
        .windows(2)
        .find(|w| w[1].size() > w[0].size())
        .map(|w| {
            format!(
                "{tag} {}: {} {}+{} -> {} {}+{}",
                rep.algorithm,
                w[0].stage,
                w[0].states,
                w[0].transitions,
                w[1].stage,
                w[1].states,
                w[1].transitions
            )
        }))
}

fn criterion_6() -> Outcome {
    let mut cases: Vec<(String, ControlContext, Generator, Generator)> = Vec::new();
    for fx in fixtures::all() {
        for (name, k) in &fx.specs {
            cases.push((
                format!("{} {name}", fx.name),
                fx.ctx.clone(),
                k.clone(),
                k.clone(),
            ));
        }
    }
    for seed in 0..40 {
        let Instance { ctx, pair, .. } = random_instance(&InstanceSpec::with_seed(30_000 + seed));
        cases.push((
            format!("seed {}", 30_000 + seed),
            ctx,
            pair.spec().clone(),
            pair.ambient().clone(),
        ));
    }
    let mut reports = 0;
    let mut growth: Vec<String> = Vec::new();
    for (tag, ctx, k, c) in &cases {
        let a1 = ok(algorithm1_sup_rel_coobs(k, c, ctx))?;
        growth.extend(accounting(&a1, tag)?);
        let again = ok(algorithm1_sup_rel_coobs(&a1.result, c, ctx))?;
        ensure!(
            again.outer_passes == 1,
            "{tag}: algorithm 1 rerun took {} passes",
            again.outer_passes
        );
        ensure!(
            equivalent(&again.result, &a1.result, Mode::Marked),
            "{tag}: algorithm 1 not idempotent"
        );
        let a2 = ok(algorithm2_sup_rcc(k, ctx))?;
        growth.extend(accounting(&a2, tag)?);
        let again = ok(algorithm2_sup_rcc(&a2.result, ctx))?;
        ensure!(
            again.outer_passes == 1,
            "{tag}: algorithm 2 rerun took {} passes",
            again.outer_passes
        );
        ensure!(
            equivalent(&again.result, &a2.result, Mode::Marked),
            "{tag}: algorithm 2 not idempotent"
        );
        let n = ok(sup_conormal_controllable_report(k, ctx))?;
        growth.extend(accounting(&n, tag)?);
        reports += 3;
    }
    let summary = format!(
        "{reports} reports terminate, reruns converge in one pass, footprint never increases"
    );
    ensure!(
        growth.is_empty(),
        "{summary}; but states+transitions increase in {} reports, e.g. {} (minimal recognizers of the languages)",
        growth.len(),
        growth[0]
    );
    Ok(summary)
}

fn criterion_7() -> Outcome {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut shrunk = 0;
    for seed in 0..50 {
        let spec = InstanceSpec {
            agent_count: 3,
            ..InstanceSpec::with_seed(40_000 + seed)
        };
        let inst = random_instance(&spec);
        let (k, c) = (inst.pair.spec(), inst.pair.ambient());
        let base = ok(algorithm1_sup_rel_coobs(k, c, &inst.ctx))?.result;
        shrunk += usize::from(!equivalent(&base, k, Mode::Marked));
        for p in &PERMS[1..] {
            let ctx = ok(inst.ctx.with_agent_order(p))?;
            let r = ok(algorithm1_sup_rel_coobs(k, c, &ctx))?.result;
            ensure!(
                equivalent(&r, &base, Mode::Marked),
                "seed {}: order {p:?} changes the result",
                inst.seed
            );
        }
    }
    Ok(format!(
        "50 three-agent instances ({shrunk} nontrivial), all 6 orders agree"
    ))
}

fn criterion_8() -> Outcome {
    let (mut premises, mut checked) = (0, 0);
    for seed in 0..50 {
        let inst = random_instance(&InstanceSpec::with_seed(50_000 + seed));
        let (k, c2) = (inst.pair.spec(), inst.pair.ambient());
        let c1 = minimize(&union(k, &random_sublanguage(c2, 60_000 + seed)));
        ensure!(
            includes(c2, &c1, Mode::Marked).holds && includes(&c1, k, Mode::Marked).holds,
            "bad nesting"
        );
        let sup = ok(algorithm1_sup_rel_coobs(k, c2, &inst.ctx))?.result;
        for spec in [k, &sup] {
            checked += 1;
            if relcoobs(spec, c2, &inst.ctx)? {
                premises += 1;
                ensure!(
                    relcoobs(spec, &c1, &inst.ctx)?,
                    "seed {}: passes with C2 but fails with C1",
                    inst.seed
                );
            }
        }
    }
    Ok(format!(
        "{checked} checks, {premises} with the C2 premise true, 0 violations"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture verdicts", criterion_1),
        ("hierarchy suite", criterion_2),
        ("union closure", criterion_3),
        ("supremality oracle", criterion_4),
        ("guideway end-to-end", criterion_5),
        ("convergence accounting", criterion_6),
        ("agent-order independence", criterion_7),
        ("ambient monotonicity", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
