//! Exhaustive knot tabulation.
//!
//! Projections are written as pair codes, filtered for drawability,
//! merged by bounded Reidemeister-move search and finally told apart by
//! color-test coloring counts and Alexander polynomials.

pub mod alexander;
pub mod code;
pub mod colortests;
pub mod moves;
pub mod realize;
pub mod tabulate;
