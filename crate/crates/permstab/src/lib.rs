//! Finite graphs of groups, actions of their fundamental groups on finite
//! sets, and a correction pipeline that turns almost-actions into exact ones.
//!
//! The toolkit has three layers:
//!
//! * **Measurement** — [`gog`] represents a finite graph of groups, derives a
//!   presentation of its fundamental group, and evaluates the defect of a
//!   tuple of permutations (how far the defining relations are from holding,
//!   in normalized Hamming distance).
//! * **Orbit-type correction** — [`lattice`] maps actions to integer
//!   orbit-type vectors and assembles the kernel condition an exact action
//!   must satisfy; [`cone`] finds a nearby integer vector inside the cone
//!   that satisfies it, via an exact rational LP plus a lattice rounding
//!   search.
//! * **Rebuild** — [`correct`] rebuilds an exact action realizing the
//!   corrected orbit-type vector while staying close to the input;
//!   [`schreier`] applies the pipeline to repair almost-periodic
//!   almost-automorphisms of labelled Schreier graphs.
//!
//! [`harness`] generates honest actions, perturbs them reproducibly, and runs
//! benchmark trials; [`io`] defines the JSON file formats used by the CLI.
//!
//! All distances, norms, and ratios are exact rationals; no floating point
//! is used anywhere. Every public type is `Send + Sync`; the library does no
//! internal threading, so callers may parallelize over independent inputs.

#![forbid(unsafe_code)]

pub mod action;
pub mod cone;
pub mod correct;
pub mod gog;
pub mod group;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod perm;
pub mod ratio;
pub mod schreier;

pub use ratio::Rat;
