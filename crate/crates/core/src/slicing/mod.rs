//! Discretized slicing lemmas on `[0,1]²`: a common center for two
//! functions close on a large set, and the polynomial approximation of
//! `f`, `g` from a smallness constraint on `f(x) + g(y) + P(x, y)`.

mod cousin;
mod frust;
mod set;

pub use cousin::{cousin_approximate, split_least_squares, CousinResult};
pub use frust::{check_witness, first_good_cell, frust_find, SliceWitness, WitnessCheck};
pub use set::{cell_midpoint, DiscretizedSet, VectorArray};
