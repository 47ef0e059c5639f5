use super::{MaxPlusError, PrecedenceGraph};
use crate::scalar::Scalar;

/// A cycle of maximum weight-to-duration ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalCycle<S> {
    /// Cycle ratio `W(c) / D(c)`.
    pub mu: S,
    /// Nodes in traversal order, starting from the smallest index.
    pub nodes: Vec<usize>,
    /// Arc indices into the graph, aligned with `nodes` (arc `k` leaves `nodes[k]`).
    pub arcs: Vec<usize>,
}

const MAX_POLICY_ROUNDS: usize = 100_000;

/// Maximum cycle ratio of `g` over all its strongly connected components.
///
/// Uses policy iteration on each component that contains a cycle.
pub fn max_cycle_ratio<S: Scalar>(g: &PrecedenceGraph<S>) -> Result<CriticalCycle<S>, MaxPlusError> {
    if let Some(a) = g.arcs().iter().find(|a| a.duration < 0) {
        return Err(MaxPlusError::NegativeDelay { degree: a.duration });
    }
    if let Some(node) = g.zero_duration_cycle_node() {
        return Err(MaxPlusError::ZeroDurationCycle { node });
    }
    let mut best: Option<CriticalCycle<S>> = None;
    for comp in g.strongly_connected_components() {
        let (sub, origin) = g.induced(&comp);
        if sub.arcs().is_empty() {
            continue;
        }
        let local = howard(&sub);
        let cycle = CriticalCycle {
            mu: local.mu,
            nodes: local.nodes.iter().map(|&v| comp[v]).collect(),
            arcs: local.arcs.iter().map(|&a| origin[a]).collect(),
        };
        if best.as_ref().is_none_or(|b| cycle.mu > b.mu) {
            best = Some(cycle);
        }
    }
    best.ok_or(MaxPlusError::NoCycle)
}

/// Policy iteration on a strongly connected graph with at least one arc and
/// no zero-duration cycle. Each node keeps one incoming arc (its policy);
/// the policy graph is evaluated cycle by cycle and improved first on the
/// cycle ratio, then on the potentials.
fn howard<S: Scalar>(g: &PrecedenceGraph<S>) -> CriticalCycle<S> {
    let n = g.node_count();
    let arcs = g.arcs();
    let mut incoming = vec![Vec::new(); n];
    for (k, a) in arcs.iter().enumerate() {
        incoming[a.head].push(k);
    }
    let mut policy: Vec<usize> = incoming
        .iter()
        .map(|ins| {
            let mut best = ins[0];
            for &k in ins {
                if arcs[k].weight > arcs[best].weight {
                    best = k;
                }
            }
            best
        })
        .collect();

    let mut eval = evaluate(g, &policy);
    for _ in 0..MAX_POLICY_ROUNDS {
        let mut changed = false;
        for v in 0..n {
            let mut best = policy[v];
            let mut best_eta = eval.eta[v];
            for &k in &incoming[v] {
                let e = eval.eta[arcs[k].tail];
                if e > best_eta + S::tolerance() {
                    best = k;
                    best_eta = e;
                }
            }
            if best != policy[v] {
                policy[v] = best;
                changed = true;
            }
        }
        if !changed {
            for v in 0..n {
                let eta = eval.eta[v];
                let tol = S::tolerance() * S::one().max_of(eval.x[v].abs());
                let mut best = policy[v];
                let mut best_val = eval.x[v];
                for &k in &incoming[v] {
                    let a = &arcs[k];
                    if (eval.eta[a.tail] - eta).abs() > S::tolerance() {
                        continue;
                    }
                    let val = a.weight - eta * S::from_int(a.duration) + eval.x[a.tail];
                    if val > best_val + tol {
                        best = k;
                        best_val = val;
                    }
                }
                if best != policy[v] {
                    policy[v] = best;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        eval = evaluate(g, &policy);
    }

    let mut top = eval.cycles.swap_remove(0);
    for c in eval.cycles {
        if c.mu > top.mu {
            top = c;
        }
    }
    top
}

struct Evaluation<S> {
    eta: Vec<S>,
    x: Vec<S>,
    cycles: Vec<CriticalCycle<S>>,
}

fn evaluate<S: Scalar>(g: &PrecedenceGraph<S>, policy: &[usize]) -> Evaluation<S> {
    let n = g.node_count();
    let arcs = g.arcs();
    let mut eta = vec![S::zero(); n];
    let mut x = vec![S::zero(); n];
    let mut cycles = Vec::new();
    // 0 = unvisited, 1 = on current walk, 2 = evaluated
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            path.push(v);
            v = arcs[policy[v]].tail;
        }
        if state[v] == 1 {
            let pos = path.iter().position(|&p| p == v).expect("walk contains its cycle");
            let members = &path[pos..];
            let (w, d) = members.iter().fold((S::zero(), 0i64), |(w, d), &u| {
                let a = &arcs[policy[u]];
                (w + a.weight, d + a.duration)
            });
            let mu = w / S::from_int(d);
            eta[v] = mu;
            x[v] = S::zero();
            state[v] = 2;
            for &u in members[1..].iter().rev() {
                let a = &arcs[policy[u]];
                eta[u] = mu;
                x[u] = a.weight - mu * S::from_int(a.duration) + x[a.tail];
                state[u] = 2;
            }
            cycles.push(forward_cycle(g, policy, members, mu));
            path.truncate(pos);
        }
        for &u in path.iter().rev() {
            let a = &arcs[policy[u]];
            eta[u] = eta[a.tail];
            x[u] = a.weight - eta[u] * S::from_int(a.duration) + x[a.tail];
            state[u] = 2;
        }
    }
    Evaluation { eta, x, cycles }
}

/// Turn a backward walk along policy arcs into a forward node/arc listing
/// starting at the smallest node.
fn forward_cycle<S: Scalar>(g: &PrecedenceGraph<S>, policy: &[usize], members: &[usize], mu: S) -> CriticalCycle<S> {
    let arcs = g.arcs();
    let start = *members.iter().min().expect("non-empty cycle");
    let mut nodes = vec![start];
    let mut out_arcs = Vec::new();
    // Walking predecessors gives the reverse order; collect then reverse.
    let mut v = start;
    let mut back = Vec::new();
    loop {
        let a = policy[v];
        back.push(a);
        v = arcs[a].tail;
        if v == start {
            break;
        }
    }
    back.reverse();
    for &a in &back {
        out_arcs.push(a);
        let h = arcs[a].head;
        if h != start {
            nodes.push(h);
        }
    }
    CriticalCycle {
        mu,
        nodes,
        arcs: out_arcs,
    }
}
