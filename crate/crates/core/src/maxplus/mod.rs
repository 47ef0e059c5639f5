//! Max-plus semiring, matrices, polynomial matrices in the backshift
//! operator, precedence graphs and cycle-time computations.

mod cycle;
mod eigen;
mod error;
mod graph;
mod matrix;
mod poly;
mod semiring;

pub use cycle::{max_cycle_ratio, CriticalCycle};
pub use eigen::{generalized_eigen, lifted_graph, periodic_cycle_time, EigenResult};
pub use error::MaxPlusError;
pub use graph::{Arc, PrecedenceGraph};
pub use matrix::Matrix;
pub use poly::PolyMatrix;
pub use semiring::MaxPlus;
