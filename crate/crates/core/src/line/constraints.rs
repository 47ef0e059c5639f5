use super::{LineDescription, Node, Segment};
use crate::scalar::Scalar;

/// Which events of the uniform counter a constraint applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Both,
    /// Odd events: junction rows of branch 1.
    Odd,
    /// Even events: junction rows of branch 2.
    Even,
}

impl Phase {
    pub fn applies_to_odd(self) -> bool {
        matches!(self, Phase::Both | Phase::Odd)
    }

    pub fn applies_to_even(self) -> bool {
        matches!(self, Phase::Both | Phase::Even)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Travel: the downstream node waits for the upstream departure plus `t`.
    Forward,
    /// Separation: the upstream node waits for the downstream departure plus `s`.
    Backward,
}

/// How branch-1 departures are placed on the uniform event counter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DelayConvention {
    /// Branch 1 on odd events, branch 2 on even events. All delays are
    /// nonnegative and the odd/even steps are causal.
    #[default]
    Causal,
    /// Branch 1 on even events, like branch 2. The junction rows of branch 1
    /// then carry delays shifted by ±1, some of them negative.
    Literal,
}

/// `δ_target(k) ≥ weight + δ_source(k − delay)`, for the events in `phase`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constraint<S> {
    pub target: Node,
    pub source: Node,
    pub weight: S,
    pub delay: i64,
    pub phase: Phase,
    pub segment: Segment,
    pub direction: Direction,
}

pub(super) fn constraints<S: Scalar>(line: &LineDescription<S>, convention: DelayConvention) -> Vec<Constraint<S>> {
    let [n0, _, _] = line.segment_counts();
    let mut out = Vec::new();
    for j in 1..=n0 {
        let seg = Node::new(0, j);
        let p = line.segment(0, j);
        let b = i64::from(line.occupied(0, j));
        let (up, down) = (Node::new(0, j - 1), Node::new(0, j));
        out.push(Constraint {
            target: down,
            source: up,
            weight: p.t_lower,
            delay: b,
            phase: Phase::Both,
            segment: seg,
            direction: Direction::Forward,
        });
        out.push(Constraint {
            target: up,
            source: down,
            weight: p.s_lower,
            delay: 1 - b,
            phase: Phase::Both,
            segment: seg,
            direction: Direction::Backward,
        });
    }
    for u in 1..=2 {
        let n = line.segment_counts()[u];
        let junction_phase = if u == 1 { Phase::Odd } else { Phase::Even };
        for j in 1..=n {
            let seg = Node::new(u, j);
            let p = line.segment(u, j);
            let b = i64::from(line.occupied(u, j));
            let up = if j == 1 { line.divergence() } else { Node::new(u, j - 1) };
            let down = if j == n { line.merge() } else { Node::new(u, j) };
            let at_junction = j == 1 || j == n;
            let phase = if at_junction { junction_phase } else { Phase::Both };
            let (mut fw, mut bw) = (2 * b, 2 * (1 - b));
            if convention == DelayConvention::Literal && u == 1 {
                // Entry rows read one event later, exit rows one event earlier.
                if j == 1 {
                    fw += 1;
                    bw -= 1;
                }
                if j == n {
                    fw -= 1;
                    bw += 1;
                }
            }
            out.push(Constraint {
                target: down,
                source: up,
                weight: p.t_lower,
                delay: fw,
                phase,
                segment: seg,
                direction: Direction::Forward,
            });
            out.push(Constraint {
                target: up,
                source: down,
                weight: p.s_lower,
                delay: bw,
                phase,
                segment: seg,
                direction: Direction::Backward,
            });
        }
    }
    out
}
