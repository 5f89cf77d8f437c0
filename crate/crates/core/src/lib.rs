//! Exact prime counting and an evaluation workbench for polynomial
//! inequalities in `π(x)`.
//!
//! Start with [`inequality::Evaluator`] for the named families,
//! [`expression`] for user-defined ones, and [`repro`] for reference tables.

pub mod asymptotics;
pub mod checks;
pub mod cli;
pub mod expression;
pub mod inequality;
pub mod numerics;
pub mod prime_engine;
pub mod repro;
pub mod scanner;
