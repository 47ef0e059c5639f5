//! Max-plus model of a metro line with one symmetrically operated junction.
//!
//! Trains run on a central part that splits into two branches at a
//! divergence node and is fed back by both branches at a merge node; every
//! second train takes each branch. The crate computes the asymptotic
//! headway of the line three ways: closed-form phase terms
//! ([`analytics::headway`]), cycle times of the max-plus system
//! ([`analytics::exact_headway`], [`analytics::composed_cycle_time`]) and
//! discrete-event simulation ([`sim`]).
//!
//! Everything is generic over [`Scalar`]; the aliases below fix `f64`.
//!
//! ```
//! use metro_maxplus::{analytics, Line};
//!
//! let line = Line::uniform([3, 5, 5], 90.0, 30.0);
//! let report = analytics::headway(&line, 6, 0).unwrap();
//! assert_eq!(report.h0.value(), Some(120.0));
//! assert_eq!(report.binding_label(), "fw1+fw2+min0");
//! ```

pub mod analytics;
pub mod line;
pub mod maxplus;
pub mod scalar;
pub mod sim;

pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i64>;

pub type MaxPlusScalar = maxplus::MaxPlus<f64>;
pub type MaxPlusMatrix = maxplus::Matrix<f64>;
pub type Polynomial = maxplus::PolyMatrix<f64>;
pub type Graph = maxplus::PrecedenceGraph<f64>;
pub type Eigen = maxplus::EigenResult<f64>;
pub type Line = line::LineDescription<f64>;
pub type Counts = line::TrainCounts<f64>;
pub type Report = analytics::PhaseReport<f64>;
pub type Measurement = sim::HeadwayMeasurement<f64>;
