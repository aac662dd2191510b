//! Exact, desk-scale tooling for graph functions in the number-on-the-forehead
//! model.
//!
//! The crate works with base functions `A: [n]^dims -> [N]` and the boolean
//! functions obtained by lifting them, and computes the combinatorial
//! quantities that govern their communication complexity on instances small
//! enough to be solved exactly:
//!
//! - [`function`]: base functions, the cyclic Latin square, the matrix trace
//!   function over prime fields, lifts and the `noffn` file format.
//! - [`stars`]: A-stars, star-free colorings, exact star chromatic number and
//!   the peeling procedure that lower-bounds it.
//! - [`cylinder`]: two-dimensional cylinder intersections (rectangles), exact
//!   minimum monochromatic covers and the cover-to-deterministic simulation.
//! - [`discrepancy`]: multicolor discrepancy over rectangles in exact
//!   rational arithmetic.
//! - [`help`]: help bits as domain partitions, exact two-player deterministic
//!   complexity of partial functions, closed-form bound evaluators and the
//!   inequality harness.
//! - [`report`]: versioned JSON reports.
//! - [`cli`]: the `nofbench` command line.
//!
//! Every quantity here is a pure function of its inputs; randomized
//! generators are seeded and reproducible.

pub mod bits;
pub mod budget;
pub mod cli;
pub mod cylinder;
pub mod discrepancy;
pub mod error;
pub mod function;
pub mod help;
pub mod report;
pub mod stars;

pub use error::{Error, FormatError, Result};
pub use function::{BaseFunction, BooleanFunction, FieldMatrix, LiftKind};
