//! Response-consistency and latency modeling for multi-agent LLM systems
//! that either pool every topic into one shared context or give each topic
//! its own agent and context.
//!
//! * [`model`] holds the closed forms.
//! * [`sim`] is a seeded Monte Carlo oracle that re-derives each probabilistic
//!   component from sampled Poisson arrivals.
//! * [`sweep`] evaluates the closed forms over parameter grids and checks
//!   curve shapes.
//! * [`io`] reads scenario files and writes CSV, JSON and SVG output.
//! * [`cli`] backs the `ctxcalc` binary.

pub mod cli;
pub mod io;
pub mod model;
pub mod sim;
pub mod sweep;
