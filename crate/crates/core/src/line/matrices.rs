use super::{DelayConvention, LineDescription, LineError};
use crate::maxplus::{MaxPlusError, PolyMatrix};
use crate::scalar::Scalar;

/// Odd-step and even-step polynomial matrices of a validated line.
pub fn build_parity_matrices<S: Scalar>(
    line: &LineDescription<S>,
    convention: DelayConvention,
) -> Result<(PolyMatrix<S>, PolyMatrix<S>), LineError> {
    line.validate()?;
    Ok(parity_matrices_unchecked(line, convention))
}

pub(super) fn parity_matrices_unchecked<S: Scalar>(
    line: &LineDescription<S>,
    convention: DelayConvention,
) -> (PolyMatrix<S>, PolyMatrix<S>) {
    let n = line.node_count();
    let mut odd = PolyMatrix::zero(n);
    let mut even = PolyMatrix::zero(n);
    let index = |v| line.node_index(v).expect("constraint endpoints are nodes");
    for c in line.constraints(convention) {
        let (i, j) = (index(c.target), index(c.source));
        if c.phase.applies_to_odd() {
            odd.accumulate(i, j, c.delay, c.weight);
        }
        if c.phase.applies_to_even() {
            even.accumulate(i, j, c.delay, c.weight);
        }
    }
    (odd, even)
}

/// Two-step system `B(γ) = A_even(γ) ⊗ A_odd(γ)`.
///
/// Checks that no negative delay survives, that the zero-delay part is
/// acyclic, and that no arc joins two distinct strongly connected
/// components.
pub fn build_composed<S: Scalar>(odd: &PolyMatrix<S>, even: &PolyMatrix<S>) -> Result<PolyMatrix<S>, LineError> {
    let b = even.otimes(odd)?;
    if b.is_zero() {
        return Ok(b);
    }
    if b.low_degree() < 0 {
        return Err(LineError::NegativeDelayResidue { degree: b.low_degree() });
    }
    b.coefficient(0)
        .topological_order()
        .map_err(|node| MaxPlusError::CyclicZeroDelay { node })?;
    if !b.to_graph().is_union_of_strong_components() {
        return Err(LineError::NotIrreducible);
    }
    Ok(b)
}
