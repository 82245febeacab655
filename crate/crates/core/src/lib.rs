//! Maximum-occupancy theatre seating under social-distancing rules.
//!
//! A family of `t` people occupies `t` consecutive seats; members of
//! different families must keep a minimum physical distance. On the
//! staggered seat lattice this safety rule factors into packing pairwise
//! disjoint trapezoid-shaped seat sets, which is what everything here is
//! built on: exact predicates, capacity and density bounds, an integer
//! programming model with an LP-file emitter, and an exact branch-and-bound
//! solver with a brute-force oracle.

pub mod arrangement;
pub mod bounds;
pub mod cli;
pub mod geometry;
pub mod ilp;
pub mod layout;
pub mod render;
pub mod solver;
