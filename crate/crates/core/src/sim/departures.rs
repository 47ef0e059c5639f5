use super::{SimError, Trajectory, TrajectoryKind};
use crate::line::{LineDescription, Node};
use crate::scalar::Scalar;

/// How a target's own departure counter maps to the source's counter.
#[derive(Clone, Copy, Debug)]
enum Lag {
    /// `k − c` on the same counter.
    Same(i64),
    /// `(k + 1)/2 − c`: odd central departures fed by branch 1.
    FromOdd(i64),
    /// `k/2 − c`: even central departures fed by branch 2.
    FromEven(i64),
    /// `2(k − c) − shift`: branch departures reading the central counter.
    Doubled { c: i64, shift: i64 },
}

impl Lag {
    fn apply(self, k: i64) -> i64 {
        match self {
            Lag::Same(c) => k - c,
            Lag::FromOdd(c) => (k + 1) / 2 - c,
            Lag::FromEven(c) => k / 2 - c,
            Lag::Doubled { c, shift } => 2 * (k - c) - shift,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Term<S> {
    source: usize,
    weight: S,
    lag: Lag,
}

/// One departure per round: central nodes have an odd and an even slot,
/// branch nodes a single slot.
#[derive(Clone, Debug)]
struct Slot<S> {
    node: usize,
    central: bool,
    odd: bool,
    terms: Vec<Term<S>>,
}

impl<S> Slot<S> {
    fn own_index(&self, round: i64) -> i64 {
        match (self.central, self.odd) {
            (true, true) => 2 * round - 1,
            (true, false) => 2 * round,
            (false, _) => round,
        }
    }
}

/// Departure times from the direct recursion, history 0 for `k ≤ 0`.
///
/// `events` is the number of central departures; branch 1 gets the odd and
/// branch 2 the even ones among them.
pub fn simulate_departures<S: Scalar>(line: &LineDescription<S>, events: usize) -> Result<Trajectory<S>, SimError> {
    simulate_departures_with(line, events, &vec![S::zero(); line.node_count()])
}

/// Same as [`simulate_departures`] with `history[i]` used for every
/// departure of node `i` with index `k ≤ 0`.
pub fn simulate_departures_with<S: Scalar>(
    line: &LineDescription<S>,
    events: usize,
    history: &[S],
) -> Result<Trajectory<S>, SimError> {
    line.validate()?;
    let nodes = line.nodes();
    if history.len() != nodes.len() {
        return Err(SimError::HistoryLength {
            got: history.len(),
            expected: nodes.len(),
        });
    }
    let slots = build_slots(line);
    let order = round_order(&slots, &nodes)?;
    let rounds = events.div_ceil(2);
    let mut times: Vec<Vec<S>> = nodes
        .iter()
        .map(|v| vec![S::zero(); if v.part == 0 { 2 * rounds } else { rounds }])
        .collect();
    for r in 1..=rounds as i64 {
        for &s in &order {
            let slot = &slots[s];
            let k = slot.own_index(r);
            let mut value: Option<S> = None;
            for term in &slot.terms {
                let ks = term.lag.apply(k);
                let base = if ks <= 0 {
                    history[term.source]
                } else {
                    times[term.source][ks as usize - 1]
                };
                let v = base + term.weight;
                value = Some(value.map_or(v, |cur| cur.max_of(v)));
            }
            times[slot.node][k as usize - 1] = value.expect("every slot has a constraint");
        }
    }
    for (v, series) in nodes.iter().zip(times.iter_mut()) {
        series.truncate(match v.part {
            0 => events,
            1 => events.div_ceil(2),
            _ => events / 2,
        });
    }
    Ok(Trajectory::new(TrajectoryKind::Departure, events, nodes, times))
}

fn build_slots<S: Scalar>(line: &LineDescription<S>) -> Vec<Slot<S>> {
    let [n0, n1, n2] = line.segment_counts();
    let idx = |u: usize, j: usize| line.node_index(Node::new(u, j)).expect("node exists");
    let b = |u: usize, j: usize| i64::from(line.occupied(u, j));
    let free = |u: usize, j: usize| 1 - b(u, j);
    let last = [n0, n1 - 1, n2 - 1];
    let mut slots = Vec::new();

    for j in 0..=n0 {
        for odd in [true, false] {
            let mut terms = Vec::new();
            // arrival side
            if j >= 1 {
                terms.push(Term {
                    source: idx(0, j - 1),
                    weight: line.segment(0, j).t_lower,
                    lag: Lag::Same(b(0, j)),
                });
            } else {
                let u = if odd { 1 } else { 2 };
                let n = line.segment_counts()[u];
                terms.push(Term {
                    source: idx(u, last[u]),
                    weight: line.segment(u, n).t_lower,
                    lag: if odd {
                        Lag::FromOdd(b(1, n1))
                    } else {
                        Lag::FromEven(b(2, n2))
                    },
                });
            }
            // separation side
            if j < n0 {
                terms.push(Term {
                    source: idx(0, j + 1),
                    weight: line.segment(0, j + 1).s_lower,
                    lag: Lag::Same(free(0, j + 1)),
                });
            } else {
                let u = if odd { 1 } else { 2 };
                terms.push(Term {
                    source: idx(u, 1),
                    weight: line.segment(u, 1).s_lower,
                    lag: if odd {
                        Lag::FromOdd(free(1, 1))
                    } else {
                        Lag::FromEven(free(2, 1))
                    },
                });
            }
            slots.push(Slot {
                node: idx(0, j),
                central: true,
                odd,
                terms,
            });
        }
    }

    for u in 1..=2 {
        let n = line.segment_counts()[u];
        let shift = if u == 1 { 1 } else { 0 };
        for j in 1..n {
            let mut terms = Vec::new();
            if j == 1 {
                terms.push(Term {
                    source: idx(0, n0),
                    weight: line.segment(u, 1).t_lower,
                    lag: Lag::Doubled { c: b(u, 1), shift },
                });
            } else {
                terms.push(Term {
                    source: idx(u, j - 1),
                    weight: line.segment(u, j).t_lower,
                    lag: Lag::Same(b(u, j)),
                });
            }
            if j == n - 1 {
                terms.push(Term {
                    source: idx(0, 0),
                    weight: line.segment(u, n).s_lower,
                    lag: Lag::Doubled { c: free(u, n), shift },
                });
            } else {
                terms.push(Term {
                    source: idx(u, j + 1),
                    weight: line.segment(u, j + 1).s_lower,
                    lag: Lag::Same(free(u, j + 1)),
                });
            }
            slots.push(Slot {
                node: idx(u, j),
                central: false,
                odd: true,
                terms,
            });
        }
    }
    slots
}

/// Evaluation order of the slots within one round. Same-round dependencies
/// do not depend on the round number, so they are resolved once.
fn round_order<S: Scalar>(slots: &[Slot<S>], nodes: &[Node]) -> Result<Vec<usize>, SimError> {
    const PROBE: i64 = 8;
    let round_of = |node: usize, k: i64| {
        if nodes[node].part == 0 {
            (k + 1).div_euclid(2)
        } else {
            k
        }
    };
    let slot_of = |node: usize, k: i64| {
        slots
            .iter()
            .position(|s| s.node == node && (!s.central || s.odd == (k.rem_euclid(2) == 1)))
            .expect("slot exists")
    };
    let mut indegree = vec![0usize; slots.len()];
    let mut succ = vec![Vec::new(); slots.len()];
    for (t, slot) in slots.iter().enumerate() {
        let k = slot.own_index(PROBE);
        for term in &slot.terms {
            let ks = term.lag.apply(k);
            if round_of(term.source, ks) == PROBE {
                let s = slot_of(term.source, ks);
                succ[s].push(t);
                indegree[t] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..slots.len()).rev().filter(|&s| indegree[s] == 0).collect();
    let mut order = Vec::with_capacity(slots.len());
    while let Some(s) = ready.pop() {
        order.push(s);
        for &t in &succ[s] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    if order.len() < slots.len() {
        let stuck = (0..slots.len()).find(|&s| indegree[s] > 0).expect("some slot is stuck");
        return Err(SimError::Deadlock {
            node: nodes[slots[stuck].node],
        });
    }
    Ok(order)
}
