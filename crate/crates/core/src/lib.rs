//! Exact finite metric lattices.
//!
//! The crate is `no_std` with `alloc`. Everything that touches files, threads
//! or clocks lives in the `metriclat` companion crate.
//!
//! - [`lattice`]: validated finite metric lattices and the metric-lattice calculus.
//! - [`partition`]: set partitions, the partition lattice and its selector machinery.
//! - [`kernels`]: zeta/Möbius calculus, kernel classification and matroid ranks.
//! - [`logic`]: the continuous-logic formula language and its evaluator.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod kernels;
pub mod lattice;
pub mod logic;
pub mod partition;
pub mod rational;

pub use lattice::{FiniteMetricLattice, LatticeError, LatticeTables};
pub use partition::Partition;
pub use rational::Rational;
