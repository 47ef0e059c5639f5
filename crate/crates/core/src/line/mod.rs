//! Metro line with a central part and two branches joined at a divergence
//! and a merge node, with train placement and the derived max-plus system.

mod config;
mod constraints;
mod matrices;

use std::fmt;

use thiserror::Error;

use crate::maxplus::MaxPlusError;
use crate::scalar::Scalar;

pub use config::{ConfigError, LineConfig, PerPart};
pub use constraints::{Constraint, DelayConvention, Direction, Phase};
pub use matrices::{build_composed, build_parity_matrices};

/// Departure node `(u, j)`: part `u` (0 central, 1 and 2 branches), position `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub part: usize,
    pub index: usize,
}

impl Node {
    pub const fn new(part: usize, index: usize) -> Self {
        Node { part, index }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.part, self.index)
    }
}

/// Track segment `(u, j)`, `j = 1..=n_u`, ending at node `(u, j)` (or at the
/// merge node for the last branch segment).
pub type Segment = Node;

/// Lower bounds for one segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentParams<S> {
    /// Minimum travel time: run plus dwell.
    pub t_lower: S,
    /// Minimum separation surplus: close-in time minus run time.
    pub s_lower: S,
}

impl<S: Scalar> SegmentParams<S> {
    pub fn new(t_lower: S, s_lower: S) -> Self {
        SegmentParams { t_lower, s_lower }
    }

    /// From minimum run time `r`, dwell time `w` and close-in time `g`.
    pub fn from_components(run: S, dwell: S, close_in: S) -> Self {
        SegmentParams {
            t_lower: run + dwell,
            s_lower: close_in - run,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LineError {
    #[error("`{key}` = {value}: need at least {min} segments")]
    BadTopology {
        key: &'static str,
        value: usize,
        min: usize,
    },
    #[error("`{key}`: {reason}")]
    BadParameter { key: String, reason: String },
    #[error("`{key}`: {reason}")]
    BadOccupancy { key: String, reason: String },
    #[error("infeasible placement: {0}")]
    InfeasiblePlacement(String),
    #[error("no placement with m = {m} trains and dm = {dm} fits the line")]
    Unrepresentable { m: usize, dm: i64 },
    #[error("negative backshift {degree} survives composition")]
    NegativeDelayResidue { degree: i64 },
    #[error("composed graph is not strongly connected on its reachable node sets")]
    NotIrreducible,
    #[error(transparent)]
    MaxPlus(#[from] MaxPlusError),
}

/// Counts and parameter sums derived from a valid line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainCounts<S> {
    /// Segments per part.
    pub n: [usize; 3],
    /// Trains per part.
    pub parts: [usize; 3],
    pub m: usize,
    /// `m2 − m1`.
    pub dm: i64,
    /// Free segments.
    pub m_bar: usize,
    /// `m̄2 − m̄1`.
    pub dm_bar: i64,
    /// Sum of `t_lower` per part.
    pub t_sums: [S; 3],
    /// Sum of `s_lower` per part.
    pub s_sums: [S; 3],
}

impl<S: Scalar> TrainCounts<S> {
    pub fn capacity(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn node_count(&self) -> usize {
        self.n[0] + self.n[1] + self.n[2] - 1
    }

    /// True when a loop through the junction holds no train, or has no free
    /// segment. Service then stops after finitely many departures.
    pub fn is_stalled(&self) -> bool {
        let free = |u: usize| self.n[u] - self.parts[u];
        self.parts[0] + self.parts[1] == 0
            || self.parts[0] + self.parts[2] == 0
            || free(0) + free(1) == 0
            || free(0) + free(2) == 0
    }
}

/// Topology, segment parameters and initial occupancy of a line.
///
/// Construction does not check anything; `validate` does, and every
/// builder calls it first.
#[derive(Clone, Debug, PartialEq)]
pub struct LineDescription<S> {
    n: [usize; 3],
    segments: [Vec<SegmentParams<S>>; 3],
    occupancy: [Vec<u8>; 3],
}

impl<S: Scalar> LineDescription<S> {
    /// `segments[u][j-1]` and `occupancy[u][j-1]` describe segment `(u, j)`.
    pub fn new(n: [usize; 3], segments: [Vec<SegmentParams<S>>; 3], occupancy: [Vec<u8>; 3]) -> Self {
        LineDescription { n, segments, occupancy }
    }

    /// Same parameters on every segment, empty line.
    pub fn uniform(n: [usize; 3], t_lower: S, s_lower: S) -> Self {
        let seg = SegmentParams::new(t_lower, s_lower);
        LineDescription {
            n,
            segments: n.map(|k| vec![seg; k]),
            occupancy: n.map(|k| vec![0; k]),
        }
    }

    pub fn segment_counts(&self) -> [usize; 3] {
        self.n
    }

    /// Parameters of segment `(u, j)`, `j` 1-based.
    pub fn segment(&self, u: usize, j: usize) -> SegmentParams<S> {
        self.segments[u][j - 1]
    }

    pub fn segments(&self, u: usize) -> &[SegmentParams<S>] {
        &self.segments[u]
    }

    /// Occupancy `b` of segment `(u, j)`, `j` 1-based.
    pub fn occupied(&self, u: usize, j: usize) -> u8 {
        self.occupancy[u][j - 1]
    }

    pub fn occupancy(&self, u: usize) -> &[u8] {
        &self.occupancy[u]
    }

    pub fn set_occupancy(&mut self, u: usize, b: Vec<u8>) {
        self.occupancy[u] = b;
    }

    pub fn set_segment(&mut self, u: usize, j: usize, params: SegmentParams<S>) {
        self.segments[u][j - 1] = params;
    }

    /// Same line with `counts[u]` trains on the highest-indexed segments of
    /// each part.
    pub fn with_part_counts(&self, counts: [usize; 3]) -> Result<Self, LineError> {
        let mut out = self.clone();
        for (u, &m) in counts.iter().enumerate() {
            let n = self.n[u];
            if m > n {
                return Err(LineError::BadOccupancy {
                    key: format!("m{u}"),
                    reason: format!("{m} trains exceed the {n} segments of part {u}"),
                });
            }
            out.occupancy[u] = (1..=n).map(|j| u8::from(j > n - m)).collect();
        }
        Ok(out)
    }

    /// Per-part counts realising `m` trains with `m2 − m1 = dm`, using the
    /// smallest feasible `m1`.
    pub fn split_totals(&self, m: usize, dm: i64) -> Option<[usize; 3]> {
        split_totals(self.n, m, dm)
    }

    /// Same line with a placement realising `(m, dm)`.
    pub fn with_totals(&self, m: usize, dm: i64) -> Result<Self, LineError> {
        let counts = self.split_totals(m, dm).ok_or(LineError::Unrepresentable { m, dm })?;
        self.with_part_counts(counts)
    }

    /// Number of departure nodes, `n0 + n1 + n2 − 1`.
    pub fn node_count(&self) -> usize {
        self.n[0] + self.n[1] + self.n[2] - 1
    }

    /// All nodes in index order: `(0,0)..(0,n0)`, then `(1,1)..(1,n1−1)`,
    /// then `(2,1)..(2,n2−1)`.
    pub fn nodes(&self) -> Vec<Node> {
        let [n0, n1, n2] = self.n;
        (0..=n0)
            .map(|j| Node::new(0, j))
            .chain((1..n1).map(|j| Node::new(1, j)))
            .chain((1..n2).map(|j| Node::new(2, j)))
            .collect()
    }

    pub fn node_names(&self) -> Vec<String> {
        self.nodes().iter().map(Node::to_string).collect()
    }

    pub fn node_index(&self, node: Node) -> Option<usize> {
        let [n0, n1, n2] = self.n;
        match node.part {
            0 if node.index <= n0 => Some(node.index),
            1 if (1..n1).contains(&node.index) => Some(n0 + node.index),
            2 if (1..n2).contains(&node.index) => Some(n0 + n1 - 1 + node.index),
            _ => None,
        }
    }

    pub fn divergence(&self) -> Node {
        Node::new(0, self.n[0])
    }

    pub fn merge(&self) -> Node {
        Node::new(0, 0)
    }

    /// Check topology, parameters and occupancy; return the derived counts.
    pub fn validate(&self) -> Result<TrainCounts<S>, LineError> {
        for (u, (key, min)) in [("n0", 1), ("n1", 2), ("n2", 2)].into_iter().enumerate() {
            if self.n[u] < min {
                return Err(LineError::BadTopology {
                    key,
                    value: self.n[u],
                    min,
                });
            }
        }
        for u in 0..3 {
            let n = self.n[u];
            if self.segments[u].len() != n {
                return Err(LineError::BadParameter {
                    key: format!("t_lower[{u}]"),
                    reason: format!(
                        "{} segment entries for part {u}, expected n{u} = {n}",
                        self.segments[u].len()
                    ),
                });
            }
            if self.occupancy[u].len() != n {
                return Err(LineError::BadOccupancy {
                    key: format!("b[{u}]"),
                    reason: format!(
                        "{} occupancy entries for part {u}, expected n{u} = {n}",
                        self.occupancy[u].len()
                    ),
                });
            }
            for (k, p) in self.segments[u].iter().enumerate() {
                let seg = Node::new(u, k + 1);
                if p.t_lower.is_non_finite() || p.t_lower <= S::zero() {
                    return Err(LineError::BadParameter {
                        key: "t_lower".into(),
                        reason: format!("segment {seg} needs a positive finite value, got {}", p.t_lower),
                    });
                }
                if p.s_lower.is_non_finite() || p.s_lower < S::zero() {
                    return Err(LineError::BadParameter {
                        key: "s_lower".into(),
                        reason: format!("segment {seg} needs a nonnegative finite value, got {}", p.s_lower),
                    });
                }
            }
            for (k, &b) in self.occupancy[u].iter().enumerate() {
                if b > 1 {
                    return Err(LineError::BadOccupancy {
                        key: "b".into(),
                        reason: format!("segment {} must be 0 or 1, got {b}", Node::new(u, k + 1)),
                    });
                }
            }
        }
        let parts: [usize; 3] = std::array::from_fn(|u| self.occupancy[u].iter().map(|&b| b as usize).sum());
        let m: usize = parts.iter().sum();
        let capacity: usize = self.n.iter().sum();
        let sum =
            |f: fn(&SegmentParams<S>) -> S, u: usize| self.segments[u].iter().map(f).fold(S::zero(), |a, b| a + b);
        let counts = TrainCounts {
            n: self.n,
            parts,
            m,
            dm: parts[2] as i64 - parts[1] as i64,
            m_bar: capacity - m,
            dm_bar: (self.n[2] - parts[2]) as i64 - (self.n[1] - parts[1]) as i64,
            t_sums: std::array::from_fn(|u| sum(|p| p.t_lower, u)),
            s_sums: std::array::from_fn(|u| sum(|p| p.s_lower, u)),
        };
        if !counts.is_stalled() {
            let (a1, a2) = matrices::parity_matrices_unchecked(self, DelayConvention::Causal);
            for (name, a) in [("odd", &a1), ("even", &a2)] {
                if let Err(node) = a.coefficient(0).topological_order() {
                    return Err(LineError::InfeasiblePlacement(format!(
                        "zero-delay dependency cycle through node {} in the {name} step",
                        self.nodes()[node]
                    )));
                }
            }
        }
        Ok(counts)
    }

    /// Constraint list of the δ-variable system.
    pub fn constraints(&self, convention: DelayConvention) -> Vec<Constraint<S>> {
        constraints::constraints(self, convention)
    }

    /// Max over nodes of `t + s` on the central part and `(t + s)/2` on the
    /// branches.
    pub fn loop_bound(&self) -> S {
        let two = S::from_int(2);
        let mut best = S::zero();
        for u in 0..3 {
            for p in &self.segments[u] {
                let v = p.t_lower + p.s_lower;
                best = best.max_of(if u == 0 { v } else { v / two });
            }
        }
        best
    }
}

/// Per-part counts realising `(m, dm)` with the smallest feasible `m1`.
pub fn split_totals(n: [usize; 3], m: usize, dm: i64) -> Option<[usize; 3]> {
    (0..=n[1]).find_map(|m1| {
        let m2 = m1 as i64 + dm;
        if m2 < 0 || m2 as usize > n[2] {
            return None;
        }
        let rest = m as i64 - m1 as i64 - m2;
        (rest >= 0 && rest as usize <= n[0]).then_some([rest as usize, m1, m2 as usize])
    })
}
