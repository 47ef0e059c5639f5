use super::{event_index, SimError, Trajectory, TrajectoryKind};
use crate::line::{build_parity_matrices, DelayConvention, LineDescription};
use crate::maxplus::{MaxPlus, MaxPlusError, PolyMatrix};
use crate::scalar::Scalar;

/// Iterate `x(k) = A^(p)(γ) x(k)`, `p = (k − 1) mod P`, for `k = 1..=events`,
/// with `x(k) = history` for `k ≤ 0`. Zero-delay terms are resolved in
/// topological order of each `A^(p)_0`.
pub fn simulate_periodic<S: Scalar>(
    phases: &[PolyMatrix<S>],
    events: usize,
    history: &[S],
) -> Result<Vec<Vec<MaxPlus<S>>>, SimError> {
    let n = phases.first().ok_or(MaxPlusError::NoPhases)?.dim();
    if history.len() != n {
        return Err(SimError::HistoryLength {
            got: history.len(),
            expected: n,
        });
    }
    let mut orders = Vec::with_capacity(phases.len());
    for a in phases {
        if a.dim() != n {
            return Err(MaxPlusError::DimensionMismatch {
                left: n,
                right: a.dim(),
            }
            .into());
        }
        if !a.is_zero() && a.low_degree() < 0 {
            return Err(MaxPlusError::NegativeDelay { degree: a.low_degree() }.into());
        }
        let order = a
            .coefficient(0)
            .topological_order()
            .map_err(|node| MaxPlusError::CyclicZeroDelay { node })?;
        orders.push(order);
    }
    let mut xs: Vec<Vec<MaxPlus<S>>> = Vec::with_capacity(events);
    for k in 1..=events {
        let p = (k - 1) % phases.len();
        let a = &phases[p];
        let mut x = vec![MaxPlus::EPSILON; n];
        for (l, m) in a.terms().filter(|(l, _)| *l >= 1) {
            let l = l as usize;
            for (i, j, w) in m.entries() {
                let prev = if k > l {
                    xs[k - l - 1][j]
                } else {
                    MaxPlus::new(history[j])
                };
                x[i] = x[i].oplus(prev.shift(w));
            }
        }
        if let Some(a0) = a.coefficient_ref_zero() {
            for &i in &orders[p] {
                for j in 0..n {
                    if let Some(w) = a0.get(i, j).value() {
                        x[i] = x[i].oplus(x[j].shift(w));
                    }
                }
            }
        }
        xs.push(x);
    }
    Ok(xs)
}

/// Departure times from the alternating odd/even matrix system, mapped back
/// to per-part counters (branch 1 on odd events, branch 2 on even events).
pub fn simulate_parity<S: Scalar>(line: &LineDescription<S>, events: usize) -> Result<Trajectory<S>, SimError> {
    simulate_parity_with(line, events, &vec![S::zero(); line.node_count()])
}

pub fn simulate_parity_with<S: Scalar>(
    line: &LineDescription<S>,
    events: usize,
    history: &[S],
) -> Result<Trajectory<S>, SimError> {
    let (odd, even) = build_parity_matrices(line, DelayConvention::Causal)?;
    let xs = simulate_periodic(&[odd, even], events, history)?;
    let nodes = line.nodes();
    let mut times = Vec::with_capacity(nodes.len());
    for (i, v) in nodes.iter().enumerate() {
        let count = match v.part {
            0 => events,
            1 => events.div_ceil(2),
            _ => events / 2,
        };
        let mut series = Vec::with_capacity(count);
        for r in 1..=count {
            let k = event_index(v.part, r);
            let t = xs[k - 1][i]
                .value()
                .ok_or(SimError::Undetermined { node: i, event: k })?;
            series.push(t);
        }
        times.push(series);
    }
    Ok(Trajectory::new(TrajectoryKind::Departure, events, nodes, times))
}

/// Iterate `x(k) = B(γ) x(k)` through `x(k) = B_0* ⊗ ⊕_{l≥1} B_l x(k − l)`,
/// history 0.
pub fn simulate_maxplus<S: Scalar>(
    b: &PolyMatrix<S>,
    line: &LineDescription<S>,
    events: usize,
) -> Result<Trajectory<S>, SimError> {
    simulate_maxplus_with(b, line, events, &vec![S::zero(); b.dim()])
}

pub fn simulate_maxplus_with<S: Scalar>(
    b: &PolyMatrix<S>,
    line: &LineDescription<S>,
    events: usize,
    history: &[S],
) -> Result<Trajectory<S>, SimError> {
    let nodes = line.nodes();
    let n = b.dim();
    if nodes.len() != n {
        return Err(MaxPlusError::DimensionMismatch {
            left: n,
            right: nodes.len(),
        }
        .into());
    }
    if history.len() != n {
        return Err(SimError::HistoryLength {
            got: history.len(),
            expected: n,
        });
    }
    if !b.is_zero() && b.low_degree() < 0 {
        return Err(MaxPlusError::NegativeDelay { degree: b.low_degree() }.into());
    }
    let star = b.coefficient(0).kleene_star()?;
    let mut xs: Vec<Vec<MaxPlus<S>>> = Vec::with_capacity(events);
    for k in 1..=events {
        let mut y = vec![MaxPlus::EPSILON; n];
        for (l, m) in b.terms().filter(|(l, _)| *l >= 1) {
            let l = l as usize;
            for (i, j, w) in m.entries() {
                let prev = if k > l {
                    xs[k - l - 1][j]
                } else {
                    MaxPlus::new(history[j])
                };
                y[i] = y[i].oplus(prev.shift(w));
            }
        }
        xs.push(star.otimes_vec(&y)?);
    }
    let mut times = vec![Vec::with_capacity(events); n];
    for (k, x) in xs.iter().enumerate() {
        for (i, v) in x.iter().enumerate() {
            times[i].push(v.value().ok_or(SimError::Undetermined { node: i, event: k + 1 })?);
        }
    }
    Ok(Trajectory::new(TrajectoryKind::Uniform, events, nodes, times))
}
