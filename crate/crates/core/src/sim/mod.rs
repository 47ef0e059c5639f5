//! Trajectory engines and asymptotic headway measurement.

mod departures;
mod iterate;
mod measure;

use std::io::{self, Write};

use thiserror::Error;

use crate::line::{LineError, Node};
use crate::maxplus::MaxPlusError;
use crate::scalar::Scalar;

pub use departures::{simulate_departures, simulate_departures_with};
pub use iterate::{simulate_maxplus, simulate_maxplus_with, simulate_parity, simulate_parity_with, simulate_periodic};
pub use measure::{measure_headways, series_rate, HeadwayMeasurement, MeasureOptions, MIN_TRANSIENT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    MaxPlus(#[from] MaxPlusError),
    #[error("departures at {node} wait on each other within one round: the placement deadlocks")]
    Deadlock { node: Node },
    #[error("component {node} has no finite value at event {event}")]
    Undetermined { node: usize, event: usize },
    #[error("initial history has {got} values, expected {expected}")]
    HistoryLength { got: usize, expected: usize },
    #[error("horizon of {events} events is too short: measuring needs at least {needed}")]
    InsufficientHorizon { events: usize, needed: usize },
}

/// Counter used by a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajectoryKind {
    /// Each part counts its own departures: the central part sees every
    /// event, each branch every second one.
    Departure,
    /// One shared event counter for every component.
    Uniform,
}

/// Event times per node.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    kind: TrajectoryKind,
    horizon: usize,
    nodes: Vec<Node>,
    times: Vec<Vec<S>>,
}

impl<S: Scalar> Trajectory<S> {
    pub fn new(kind: TrajectoryKind, horizon: usize, nodes: Vec<Node>, times: Vec<Vec<S>>) -> Self {
        assert_eq!(nodes.len(), times.len(), "one time series per node");
        Trajectory {
            kind,
            horizon,
            nodes,
            times,
        }
    }

    pub fn kind(&self) -> TrajectoryKind {
        self.kind
    }

    /// Number of uniform events `K` covered.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Series of node `i`; entry `k − 1` is its `k`-th event.
    pub fn series(&self, i: usize) -> &[S] {
        &self.times[i]
    }

    /// `k`-th event time (1-based) of `node`.
    pub fn time(&self, node: Node, k: usize) -> Option<S> {
        let i = self.nodes.iter().position(|&v| v == node)?;
        k.checked_sub(1).and_then(|k| self.times[i].get(k).copied())
    }

    /// True when every series is nondecreasing.
    pub fn is_monotone(&self) -> bool {
        self.times.iter().all(|s| s.windows(2).all(|w| w[0] <= w[1]))
    }

    /// CSV with header `k,u,j,time_seconds`, rows ordered by `k`, then node.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,u,j,time_seconds")?;
        let longest = self.times.iter().map(Vec::len).max().unwrap_or(0);
        for k in 0..longest {
            for (node, series) in self.nodes.iter().zip(&self.times) {
                if let Some(t) = series.get(k) {
                    writeln!(out, "{},{},{},{}", k + 1, node.part, node.index, t)?;
                }
            }
        }
        Ok(())
    }
}

/// Uniform event index of the `r`-th departure from a node of `part`.
///
/// Branch 1 departs on odd events, branch 2 on even events.
pub fn event_index(part: usize, r: usize) -> usize {
    match part {
        0 => r,
        1 => 2 * r - 1,
        _ => 2 * r,
    }
}
