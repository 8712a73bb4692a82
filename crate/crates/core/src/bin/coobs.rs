//! `coobs`: check and synthesize decentralized supervisory-control
//! properties from JSON automaton files.
//!
//! Exit codes: 0 when the property holds or the command succeeded, 1 when
//! the property fails (or a local supervisor conflicts, or an inclusion is
//! violated), 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coobs_core::automata::{includes, project, Mode};
use coobs_core::format::{read_agents, read_generator, write_generator, CheckReport, SynthReport};
use coobs_core::synthesize::{extract_local_supervisor, synthesize, Algorithm};
use coobs_core::verify::{check, Property};
use coobs_core::{fixtures, ControlContext, Error, Event, EventSet, Generator};

#[derive(Parser)]
#[command(
    name = "coobs",
    version,
    about = "Decentralized supervisory control: verification and synthesis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Problem {
    #[arg(long)]
    plant: PathBuf,
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    agents: PathBuf,
    /// Ambient language C for the relative properties; defaults to the spec.
    #[arg(long)]
    ambient: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of the spec and print a witness if it fails.
    Check {
        /// controllable, lm-closed, relobs:AGENT, relcoobs, coobs-conj,
        /// coobs-disj, normal:AGENT or conormal
        property: Property,
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        json: bool,
    },
    /// Compute a supremal sublanguage and write it to --out.
    Synth {
        /// supcon, sup-normal:AGENT, sup-conormal,
        /// sup-conormal-controllable, sup-relobs:AGENT, sup-relcoobs or
        /// sup-rcc
        algorithm: Algorithm,
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        out: PathBuf,
        /// Print per-pass sizes.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Extract the local supervisor of one agent from a synthesized result.
    Extract {
        #[arg(long)]
        result: PathBuf,
        #[arg(long)]
        plant: PathBuf,
        #[arg(long)]
        agents: PathBuf,
        #[arg(long)]
        agent: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Natural projection onto the kept events (comma separated, may be empty).
    Project {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        keep: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the marked and closed languages of two files.
    Includes {
        /// The expected superset.
        #[arg(long)]
        larger: PathBuf,
        #[arg(long)]
        smaller: PathBuf,
        /// Exit 1 unless the marked inclusion is strict.
        #[arg(long)]
        strict: bool,
    },
    /// Write the bundled example instances.
    Fixtures {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

enum Failure {
    /// Property failed; the message has already been printed.
    Fails,
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Fails) => ExitCode::from(1),
        Err(Failure::Input(e @ Error::SupervisorConflict { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn context(plant: &Path, agents: &Path) -> Result<ControlContext, Error> {
    ControlContext::new(read_generator(plant)?, read_agents(agents)?)
}

fn load(p: &Problem) -> Result<(ControlContext, Generator, Option<Generator>), Error> {
    let ctx = context(&p.plant, &p.agents)?;
    let spec = read_generator(&p.spec)?;
    let ambient = p.ambient.as_deref().map(read_generator).transpose()?;
    Ok((ctx, spec, ambient))
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("report serializes")
    );
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Check {
            property,
            problem,
            json,
        } => {
            let (ctx, spec, ambient) = load(&problem)?;
            let v = check(&property, &spec, ambient.as_ref(), &ctx)?;
            if json {
                print_json(&CheckReport::new(&property.to_string(), &v));
            } else if v.holds {
                println!("{property}: holds");
            } else {
                println!("{property}: fails");
            }
            if let (false, Some(w)) = (json, &v.witness) {
                println!("witness: {w}");
            }
            if v.holds {
                Ok(())
            } else {
                Err(Failure::Fails)
            }
        }
        Command::Synth {
            algorithm,
            problem,
            out,
            trace,
            json,
        } => {
            let (ctx, spec, ambient) = load(&problem)?;
            let r = synthesize(&algorithm, &spec, ambient.as_ref(), &ctx)?;
            let comment = format!("{algorithm} result");
            write_generator(&out, &r.result, Some(&comment))?;
            if json {
                print_json(&SynthReport::new(&out.display().to_string(), &r));
                return Ok(());
            }
            if r.is_empty() {
                println!("*** EMPTY RESULT ***");
                println!(
                    "{algorithm} produced the empty language; no nonempty sublanguage of the spec satisfies the required properties"
                );
            }
            if trace {
                print!("{r}");
            } else {
                println!(
                    "result: {} states, {} transitions",
                    r.result.num_states(),
                    r.result.num_transitions()
                );
                for (p, ok) in &r.recheck {
                    println!("  recheck {p}: {ok}");
                }
            }
            println!("wrote {}", out.display());
            Ok(())
        }
        Command::Extract {
            result,
            plant,
            agents,
            agent,
            out,
        } => {
            let ctx = context(&plant, &agents)?;
            let r = read_generator(&result)?;
            let sup = extract_local_supervisor(&r, &ctx, &agent)?;
            write_generator(
                &out,
                &sup,
                Some(&format!("local supervisor of agent {agent}")),
            )?;
            println!(
                "agent {agent}: {} states, {} transitions; wrote {}",
                sup.num_states(),
                sup.num_transitions(),
                out.display()
            );
            Ok(())
        }
        Command::Project { input, keep, out } => {
            let g = read_generator(&input)?;
            let keep: EventSet = keep
                .iter()
                .filter(|e| !e.is_empty())
                .map(|e| Event::new(e))
                .collect();
            let p = project(&g, &keep)?;
            write_generator(&out, &p, None)?;
            println!(
                "projection: {} states, {} transitions; wrote {}",
                p.num_states(),
                p.num_transitions(),
                out.display()
            );
            Ok(())
        }
        Command::Includes {
            larger,
            smaller,
            strict,
        } => {
            let big = read_generator(&larger)?;
            let small = read_generator(&smaller)?;
            let mut ok = true;
            for (mode, name) in [(Mode::Marked, "marked"), (Mode::Closed, "closed")] {
                if let Some(t) = includes(&big, &small, mode).counterexample {
                    println!("{name}: not included, {t} is only in the smaller file");
                    ok = false;
                } else if let Some(t) = includes(&small, &big, mode).counterexample {
                    println!("{name}: strict inclusion, {t} is only in the larger file");
                } else {
                    println!("{name}: equal");
                    ok &= !(strict && mode == Mode::Marked);
                }
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Fails)
            }
        }
        Command::Fixtures { out_dir } => {
            std::fs::create_dir_all(&out_dir).map_err(Error::from)?;
            for fx in fixtures::all() {
                for name in fx.write_to(&out_dir)? {
                    println!("{}", out_dir.join(name).display());
                }
            }
            Ok(())
        }
    }
}
