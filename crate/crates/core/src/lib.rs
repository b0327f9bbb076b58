//! Sliding-window string search driven by letter values.
//!
//! A value table maps symbols to reals; a scoring formula turns every
//! length-`m` window of a text into a single number. Windows whose score is
//! close to the pattern's score are candidate occurrences, verified (or not)
//! by literal comparison. The crate bundles the scoring engine, the
//! score-based matcher, classical exact-search baselines to compare against,
//! and a harness for corpus experiments and throughput measurements.
//!
//! Everything numeric is generic over the floating-point scalar (`f32` or
//! `f64`); [`Value`] is the concrete type used by the harness and the
//! command-line tool.

pub mod baselines;
pub mod harness;
pub mod matcher;
pub mod scalar;
pub mod scoring;
pub mod value_table;

pub use matcher::{
    collision_rate, find_collisions, search, CollisionMode, CollisionWitness, MatchError,
    MatchReport,
};
pub use scalar::Scalar;
pub use scoring::{
    pattern_value, window_values_naive, window_values_rolling, FormulaSpec, RollingOptions,
    ScoreError, ScoreSeries, SignScheme, WeightScheme,
};
pub use value_table::{default_table, TableError, UnmappedSymbol, ValueTable};

/// Concrete scalar used by the harness and the command-line tool.
pub type Value = f64;

/// Value table over the default scalar.
pub type Table = ValueTable<Value>;
