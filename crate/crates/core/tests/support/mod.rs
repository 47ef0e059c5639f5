//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls the algorithm it is used to check.

#![allow(dead_code, clippy::needless_range_loop)]

use metro_maxplus::line::{Constraint, DelayConvention, Direction, LineDescription, SegmentParams};
use metro_maxplus::maxplus::{Arc, Matrix, MaxPlus, PolyMatrix, PrecedenceGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Line with the given topology, random times (`t ∈ [30, 180]`,
/// `s ∈ [10, 90]`) and random occupancy, rejecting placements that stall.
pub fn random_line_with(rng: &mut ChaCha8Rng, n: [usize; 3]) -> LineDescription<f64> {
    loop {
        let mut line = LineDescription::uniform(n, 1.0, 1.0);
        for u in 0..3 {
            for j in 1..=n[u] {
                line.set_segment(
                    u,
                    j,
                    SegmentParams::new(rng.gen_range(30.0..=180.0), rng.gen_range(10.0..=90.0)),
                );
            }
            line.set_occupancy(u, (0..n[u]).map(|_| rng.gen_range(0..=1)).collect());
        }
        if line.validate().is_ok_and(|c| !c.is_stalled()) {
            return line;
        }
    }
}

/// `n0 ∈ 2..=6`, `n1, n2 ∈ 3..=8`.
pub fn random_line(rng: &mut ChaCha8Rng) -> LineDescription<f64> {
    let n = [rng.gen_range(2..=6), rng.gen_range(3..=8), rng.gen_range(3..=8)];
    random_line_with(rng, n)
}

/// Random permutation of the occupancy inside each part.
pub fn shuffle_within_parts(line: &LineDescription<f64>, rng: &mut ChaCha8Rng) -> LineDescription<f64> {
    let mut out = line.clone();
    for u in 0..3 {
        let mut b = line.occupancy(u).to_vec();
        b.shuffle(rng);
        out.set_occupancy(u, b);
    }
    out
}

/// Elementary cycles of a multigraph as arc-index sequences, by depth-first
/// search from each start node through larger-numbered nodes only.
pub fn elementary_cycles<S: metro_maxplus::Scalar>(g: &PrecedenceGraph<S>) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut out_arcs = vec![Vec::new(); n];
    for (k, a) in g.arcs().iter().enumerate() {
        out_arcs[a.tail].push(k);
    }
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        walk(g, &out_arcs, start, start, &mut on_path, &mut path, &mut cycles);
    }
    cycles
}

fn walk<S: metro_maxplus::Scalar>(
    g: &PrecedenceGraph<S>,
    out_arcs: &[Vec<usize>],
    start: usize,
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
) {
    on_path[v] = true;
    for &k in &out_arcs[v] {
        let h = g.arcs()[k].head;
        if h == start {
            let mut c = path.clone();
            c.push(k);
            cycles.push(c);
        } else if h > start && !on_path[h] {
            path.push(k);
            walk(g, out_arcs, start, h, on_path, path, cycles);
            path.pop();
        }
    }
    on_path[v] = false;
}

/// Largest weight/duration ratio by brute force. `None` without cycles;
/// `Some(inf)` if a cycle has zero duration.
pub fn max_ratio_by_enumeration(g: &PrecedenceGraph<f64>) -> Option<f64> {
    elementary_cycles(g)
        .iter()
        .map(|c| {
            let (w, d) = g.path_totals(c);
            if d == 0 {
                f64::INFINITY
            } else {
                w / d as f64
            }
        })
        .reduce(f64::max)
}

/// Random graph on `n` nodes: each ordered pair (and each self-loop) gets an
/// arc with probability `p`, weight uniform in `[-10, 10]`, duration from
/// `durations`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, durations: &[i64]) -> PrecedenceGraph<f64> {
    let mut g = PrecedenceGraph::new(n);
    for tail in 0..n {
        for head in 0..n {
            if rng.gen_bool(p) {
                g.add_arc(Arc {
                    tail,
                    head,
                    weight: rng.gen_range(-10.0..10.0),
                    duration: *durations.choose(rng).unwrap(),
                });
            }
        }
    }
    g
}

/// Longest-path matrix of an acyclic graph by dynamic programming over a
/// topological order (`None` if the graph has a cycle). Entry `(i, j)` is
/// the heaviest path from `j` to `i`, 0 on the diagonal.
pub fn longest_paths(a: &Matrix<f64>) -> Option<Matrix<f64>> {
    let n = a.dim();
    // Kahn's algorithm with arcs j → i for finite a[i][j]
    let mut indeg = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if !a.get(i, j).is_epsilon() {
                indeg[i] += 1;
            }
        }
    }
    let mut order = Vec::new();
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(j) = queue.pop() {
        order.push(j);
        for i in 0..n {
            if !a.get(i, j).is_epsilon() {
                indeg[i] -= 1;
                if indeg[i] == 0 {
                    queue.push(i);
                }
            }
        }
    }
    if order.len() < n {
        return None;
    }
    let mut out = Matrix::epsilon(n);
    for src in 0..n {
        let mut best = vec![f64::NEG_INFINITY; n];
        best[src] = 0.0;
        for &j in &order {
            if best[j] == f64::NEG_INFINITY {
                continue;
            }
            for i in 0..n {
                if let Some(w) = a.get(i, j).value() {
                    best[i] = best[i].max(best[j] + w);
                }
            }
        }
        for i in 0..n {
            out.set(i, src, MaxPlus::from(best[i]));
        }
    }
    Some(out)
}

/// Random strictly lower-triangular matrix under a random relabelling
/// (hence acyclic), with density `p`.
pub fn random_acyclic(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Matrix<f64> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut a = Matrix::epsilon(n);
    for i in 0..n {
        for j in 0..i {
            if rng.gen_bool(p) {
                a.set(perm[i], perm[j], MaxPlus::new(rng.gen_range(-20i32..20) as f64));
            }
        }
    }
    a
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Matrix<f64> {
    Matrix::from_fn(n, |_, _| {
        if rng.gen_bool(p) {
            MaxPlus::new(rng.gen_range(-50i32..50) as f64)
        } else {
            MaxPlus::EPSILON
        }
    })
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, max_degree: i64, p: f64) -> PolyMatrix<f64> {
    let mut a = PolyMatrix::zero(n);
    for d in 0..=max_degree {
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(p) {
                    a.accumulate(i, j, d, rng.gen_range(-50i32..50) as f64);
                }
            }
        }
    }
    a
}

/// Polynomial product by an explicit quadruple loop over degrees and indices.
pub fn convolve(a: &PolyMatrix<f64>, b: &PolyMatrix<f64>) -> PolyMatrix<f64> {
    let n = a.dim();
    let mut out = PolyMatrix::zero(n);
    if a.is_zero() || b.is_zero() {
        return out;
    }
    for da in a.low_degree()..=a.degree() {
        for db in b.low_degree()..=b.degree() {
            let (ma, mb) = (a.coefficient(da), b.coefficient(db));
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if let (Some(x), Some(y)) = (ma.get(i, k).value(), mb.get(k, j).value()) {
                            out.accumulate(i, j, da + db, x + y);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Closed-form phase terms `[fw, min, bw, br]` for `parts` trains per part,
/// written out directly from the segment sums. A term is infinite when its
/// denominator is not positive.
pub fn formula_terms(line: &LineDescription<f64>, parts: [usize; 3]) -> [f64; 4] {
    let n = line.segment_counts().map(|v| v as i64);
    let sum = |u: usize, f: fn(&SegmentParams<f64>) -> f64| line.segments(u).iter().map(f).sum::<f64>();
    let t: Vec<f64> = (0..3).map(|u| sum(u, |p| p.t_lower)).collect();
    let s: Vec<f64> = (0..3).map(|u| sum(u, |p| p.s_lower)).collect();
    let m = parts.map(|v| v as i64);
    let free: Vec<i64> = (0..3).map(|u| n[u] - m[u]).collect();
    let q = |a: f64, d: i64| if d > 0 { a / d as f64 } else { f64::INFINITY };
    let fw = q(t[0] + t[1], m[0] + 2 * m[1]).max(q(t[0] + t[2], m[0] + 2 * m[2]));
    let bw = q(s[0] + s[1], free[0] + 2 * free[1]).max(q(s[0] + s[2], free[0] + 2 * free[2]));
    let br = q(t[1] + s[2], 2 * (n[2] - m[2] + m[1])).max(q(s[1] + t[2], 2 * (n[1] + m[2] - m[1])));
    let mut min = 0.0f64;
    for u in 0..3 {
        for p in line.segments(u) {
            let v = p.t_lower + p.s_lower;
            min = min.max(if u == 0 { v } else { v / 2.0 });
        }
    }
    [fw, min, bw, br]
}

pub fn part_counts(line: &LineDescription<f64>) -> [usize; 3] {
    [0, 1, 2].map(|u| line.occupancy(u).iter().map(|&b| b as usize).sum())
}

/// Closed-form central headway of the line's own placement.
pub fn formula_h0(line: &LineDescription<f64>) -> f64 {
    formula_terms(line, part_counts(line)).into_iter().fold(0.0, f64::max)
}

/// Every split `[m0, m1, m2]` of `m` trains with `m2 − m1 = dm` that fits.
pub fn feasible_splits(n: [usize; 3], m: usize, dm: i64) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for m1 in 0..=n[1] {
        let m2 = m1 as i64 + dm;
        if m2 < 0 || m2 > n[2] as i64 {
            continue;
        }
        let m2 = m2 as usize;
        if m1 + m2 <= m && m - m1 - m2 <= n[0] {
            out.push([m - m1 - m2, m1, m2]);
        }
    }
    out
}

/// Arc of the two-step graph built from pairs of constraints (odd step
/// first), with the net number of segments crossed forward per part.
#[derive(Clone, Debug)]
pub struct StepPair {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
    pub duration: i64,
    pub winding: [i64; 3],
    /// Segments crossed per part in either direction.
    pub crossings: [i64; 3],
}

/// All two-step paths `source →(odd) middle →(even) target`.
pub fn two_step_arcs(line: &LineDescription<f64>) -> Vec<StepPair> {
    let cs = line.constraints(DelayConvention::Causal);
    let idx = |c: &Constraint<f64>| (line.node_index(c.source).unwrap(), line.node_index(c.target).unwrap());
    let wind = |c: &Constraint<f64>| {
        let mut w = [0i64; 3];
        w[c.segment.part] = if c.direction == Direction::Forward { 1 } else { -1 };
        w
    };
    let mut out = Vec::new();
    for c1 in cs.iter().filter(|c| c.phase.applies_to_odd()) {
        for c2 in cs.iter().filter(|c| c.phase.applies_to_even()) {
            let (s1, t1) = idx(c1);
            let (s2, t2) = idx(c2);
            if t1 != s2 {
                continue;
            }
            let (w1, w2) = (wind(c1), wind(c2));
            out.push(StepPair {
                tail: s1,
                head: t2,
                weight: c1.weight + c2.weight,
                duration: c1.delay + c2.delay,
                winding: [w1[0] + w2[0], w1[1] + w2[1], w1[2] + w2[2]],
                crossings: [0, 1, 2].map(|u| w1[u].abs() + w2[u].abs()),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Loop,
    TwoArc,
    Forward1,
    Forward2,
    Backward1,
    Backward2,
    Branches1,
    Branches2,
    Other,
}

/// Family of a cycle with `len` arcs. Apart from loops and two-arc cycles,
/// a family member goes once around its circuit without doubling back, so
/// it crosses each segment exactly once.
pub fn classify(len: usize, winding: [i64; 3], crossings: [i64; 3], n: [usize; 3]) -> Family {
    let [n0, n1, n2] = n.map(|v| v as i64);
    if winding == [0, 0, 0] {
        return match len {
            1 => Family::Loop,
            2 => Family::TwoArc,
            _ => Family::Other,
        };
    }
    if crossings != winding.map(i64::abs) {
        return Family::Other;
    }
    match winding {
        w if w == [n0, n1, 0] => Family::Forward1,
        w if w == [n0, 0, n2] => Family::Forward2,
        w if w == [-n0, -n1, 0] => Family::Backward1,
        w if w == [-n0, 0, -n2] => Family::Backward2,
        w if w == [0, n1, -n2] => Family::Branches1,
        w if w == [0, -n1, n2] => Family::Branches2,
        _ => Family::Other,
    }
}

/// Elementary cycles of the two-step graph, each with its family, mean
/// (infinite for zero duration) and node sequence.
pub fn classified_cycles(line: &LineDescription<f64>) -> Vec<(Family, f64, Vec<usize>)> {
    let pairs = two_step_arcs(line);
    let g = PrecedenceGraph::from_arcs(
        line.node_count(),
        pairs
            .iter()
            .map(|p| Arc {
                tail: p.tail,
                head: p.head,
                weight: p.weight,
                duration: p.duration,
            })
            .collect(),
    );
    let n = line.segment_counts();
    elementary_cycles(&g)
        .into_iter()
        .map(|c| {
            let mut w = [0i64; 3];
            let mut x = [0i64; 3];
            for &k in &c {
                for u in 0..3 {
                    w[u] += pairs[k].winding[u];
                    x[u] += pairs[k].crossings[u];
                }
            }
            let (weight, duration) = g.path_totals(&c);
            let mean = if duration == 0 {
                f64::INFINITY
            } else {
                weight / duration as f64
            };
            let nodes = c.iter().map(|&k| pairs[k].tail).collect();
            (classify(c.len(), w, x, n), mean, nodes)
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
