//! Exact and numeric tools for the recursion
//! `a_n = x * sum_{r=ceil(n/2)}^{n-1} C(r, n-r) a_r`, `a_1 = x`.
//!
//! Runnable entry points live in `examples/`; the `binrec` binary wraps the
//! same pipelines behind subcommands.

pub mod cli;
pub mod combinatorics;
pub mod dynamics;
pub mod exact;
pub mod recursion;
pub mod spectral;
