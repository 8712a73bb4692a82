//! Decentralized supervisory control over finite-state generators.
//!
//! The crate decides controllability, `L_m(G)`-closedness, normality,
//! conormality, conjunctive and disjunctive coobservability and relative
//! coobservability of regular languages, and synthesizes supremal
//! sublanguages (supremal relatively coobservable, and the controllable,
//! `L_m(G)`-closed variant) together with local supervisors.
//!
//! ```
//! use coobs_core::fixtures;
//! use coobs_core::verify::check_rel_coobservable;
//! use coobs_core::LanguagePair;
//!
//! let fx = fixtures::fig3();
//! let pair = LanguagePair::new(fx.spec("K"), None, &fx.ctx).unwrap();
//! let verdict = check_rel_coobservable(&pair, &fx.ctx).unwrap();
//! assert!(!verdict.holds);
//! assert_eq!(verdict.witness.unwrap().to_string(), "s=β s'=α σ=σ channel=1 condition=relobs");
//! ```

pub mod automata;
mod context;
mod error;
mod event;
pub mod fixtures;
pub mod format;
pub mod oracle;
pub mod synthesize;
pub mod verify;

pub use automata::{Generator, GeneratorBuilder, StateId};
pub use context::{AgentProfile, ControlContext, LanguagePair};
pub use error::{Error, Result};
pub use event::{events, Event, EventSet, Trace};
