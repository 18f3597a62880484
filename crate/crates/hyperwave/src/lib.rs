//! Command-line driver and file formats for `hyperwave-core`.
//!
//! Every command produces one [`record::RunRecord`] (printed as JSON) and at
//! most one CSV table. Monte Carlo work runs on a rayon pool through
//! [`runner::RayonRunner`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod runner;
pub mod table;
