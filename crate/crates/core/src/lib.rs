//! Twin-width of dual graphs of triangulations.
//!
//! * [`trigraph`]: trigraphs, contractions and width accounting.
//! * [`complex`]: simplicial and cubical complexes, subdivision, dual graphs.
//! * [`grid`]: grids and the folding contraction strategy.
//! * [`exact`]: exact twin-width for small inputs.
//! * [`pipeline`]: bounded-width contraction of the subdivided honeycomb.
//! * [`lowerbound`]: thickened regular graphs and their dual graphs.
//! * [`io`] and [`cli`]: persistence and the command line.

pub mod cli;
pub mod complex;
pub mod exact;
pub mod grid;
pub mod io;
pub mod lowerbound;
pub mod pipeline;
pub mod trigraph;
