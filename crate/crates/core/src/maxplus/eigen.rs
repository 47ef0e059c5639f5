use super::{max_cycle_ratio, Arc, CriticalCycle, MaxPlus, MaxPlusError, PolyMatrix, PrecedenceGraph};
use crate::scalar::Scalar;

/// Generalized eigenvalue and eigenvector of an irreducible polynomial matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult<S> {
    /// Growth per event (cycle time).
    pub mu: S,
    /// Finite eigenvector with first component 0.
    pub eigenvector: Vec<MaxPlus<S>>,
    /// Critical cycle as a node sequence.
    pub critical_cycle: Vec<usize>,
}

/// Solve `A(μ⁻¹) ⊗ v = v` for irreducible `A(γ)` with acyclic `G(A_0)`.
pub fn generalized_eigen<S: Scalar>(a: &PolyMatrix<S>) -> Result<EigenResult<S>, MaxPlusError> {
    if !a.is_zero() && a.low_degree() < 0 {
        return Err(MaxPlusError::NegativeDelay { degree: a.low_degree() });
    }
    if let Some(a0) = a.coefficient_ref(0) {
        a0.topological_order()
            .map_err(|node| MaxPlusError::CyclicZeroDelay { node })?;
    }
    let g = a.to_graph();
    if !g.is_strongly_connected() {
        return Err(MaxPlusError::NotIrreducible {
            components: g.strongly_connected_components().len(),
        });
    }
    let cycle = max_cycle_ratio(&g)?;
    let closure = a.evaluate(cycle.mu).plus_closure();
    let c = cycle.nodes[0];
    let n = a.dim();
    let mut v: Vec<MaxPlus<S>> = (0..n)
        .map(|i| if i == c { MaxPlus::e() } else { closure.get(i, c) })
        .collect();
    if let Some(first) = v.iter().find_map(|x| x.value()) {
        for x in &mut v {
            *x = x.shift(-first);
        }
    }
    Ok(EigenResult {
        mu: cycle.mu,
        eigenvector: v,
        critical_cycle: cycle.nodes,
    })
}

/// Graph of the periodic system `x(k) = A^(p)(γ) x(k)` with `p = (k − 1) mod P`.
///
/// Node `p·n + i` stands for component `i` at events of phase `p`. An entry
/// `(A^(p)_l)_ij` becomes an arc from `(j, (p − l) mod P)` to `(i, p)` with
/// duration `l`.
pub fn lifted_graph<S: Scalar>(phases: &[PolyMatrix<S>]) -> Result<PrecedenceGraph<S>, MaxPlusError> {
    let period = phases.len();
    let n = phases.first().ok_or(MaxPlusError::NoPhases)?.dim();
    let mut g = PrecedenceGraph::new(n * period);
    for (p, a) in phases.iter().enumerate() {
        if a.dim() != n {
            return Err(MaxPlusError::DimensionMismatch {
                left: n,
                right: a.dim(),
            });
        }
        if !a.is_zero() && a.low_degree() < 0 {
            return Err(MaxPlusError::NegativeDelay { degree: a.low_degree() });
        }
        for (l, m) in a.terms() {
            let src_phase = (p as i64 - l).rem_euclid(period as i64) as usize;
            for (i, j, w) in m.entries() {
                g.add_arc(Arc {
                    tail: src_phase * n + j,
                    head: p * n + i,
                    weight: w,
                    duration: l,
                });
            }
        }
    }
    Ok(g)
}

/// Asymptotic growth per event of a periodic system, restricted to the
/// lifted nodes in `observed` and everything upstream of them (all lifted
/// nodes when `observed` is `None`).
pub fn periodic_cycle_time<S: Scalar>(
    phases: &[PolyMatrix<S>],
    observed: Option<&[usize]>,
) -> Result<CriticalCycle<S>, MaxPlusError> {
    let g = lifted_graph(phases)?;
    match observed {
        None => max_cycle_ratio(&g),
        Some(targets) => {
            let keep = g.ancestors_of(targets);
            let (sub, origin) = g.induced(&keep);
            let c = max_cycle_ratio(&sub)?;
            Ok(CriticalCycle {
                mu: c.mu,
                nodes: c.nodes.iter().map(|&v| keep[v]).collect(),
                arcs: c.arcs.iter().map(|&k| origin[k]).collect(),
            })
        }
    }
}
