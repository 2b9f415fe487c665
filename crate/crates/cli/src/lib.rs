//! Experiment runner for the two-particle lattice simulator.

pub mod cli;
pub mod compare;
pub mod config;
pub mod experiment;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
mod book {}
