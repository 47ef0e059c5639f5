use super::Headway;
use crate::line::{build_composed, build_parity_matrices, DelayConvention, LineDescription, LineError};
use crate::maxplus::{max_cycle_ratio, periodic_cycle_time};
use crate::scalar::Scalar;

/// Largest cycle mean of the composed two-step graph `G(B)`.
///
/// This is the growth rate of `x(k) = B(γ) x(k)`; when `B` splits into
/// several strongly connected pieces the fastest one is reported.
pub fn composed_cycle_time<S: Scalar>(line: &LineDescription<S>) -> Result<Headway<S>, LineError> {
    let counts = line.validate()?;
    if counts.is_stalled() {
        return Ok(Headway::Infinite);
    }
    let (odd, even) = build_parity_matrices(line, DelayConvention::Causal)?;
    let b = build_composed(&odd, &even)?;
    Ok(Headway::Finite(max_cycle_ratio(&b.to_graph())?.mu))
}

/// Central headway of the alternating odd/even system, from the cycle time
/// of its two-phase graph restricted to real departures.
///
/// This is the rate the departure recursion converges to.
pub fn exact_headway<S: Scalar>(line: &LineDescription<S>) -> Result<Headway<S>, LineError> {
    let counts = line.validate()?;
    if counts.is_stalled() {
        return Ok(Headway::Infinite);
    }
    let (odd, even) = build_parity_matrices(line, DelayConvention::Causal)?;
    let n = line.node_count();
    // phase 0 holds odd events, phase 1 even events
    let observed: Vec<usize> = line
        .nodes()
        .iter()
        .enumerate()
        .flat_map(|(i, v)| match v.part {
            0 => vec![i, n + i],
            1 => vec![i],
            _ => vec![n + i],
        })
        .collect();
    let c = periodic_cycle_time(&[odd, even], Some(&observed))?;
    Ok(Headway::Finite(c.mu))
}
