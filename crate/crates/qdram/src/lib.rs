//! Command-line front end for the quantum DRAM simulator: config parsing,
//! parallel repetitions, CSV output and the `simulate`, `zeno` and
//! `capacity` commands.

pub mod commands;
pub mod config;
pub mod output;
pub mod runner;
