use std::fmt::Write as _;

use crate::scalar::Scalar;

/// Arc `tail → head` carrying a weight (seconds) and a duration (events).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc<S> {
    pub tail: usize,
    pub head: usize,
    pub weight: S,
    pub duration: i64,
}

/// Weighted, timed directed multigraph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecedenceGraph<S> {
    n: usize,
    arcs: Vec<Arc<S>>,
}

impl<S: Scalar> PrecedenceGraph<S> {
    pub fn new(n: usize) -> Self {
        PrecedenceGraph { n, arcs: Vec::new() }
    }

    pub fn from_arcs(n: usize, arcs: Vec<Arc<S>>) -> Self {
        assert!(
            arcs.iter().all(|a| a.tail < n && a.head < n),
            "arc endpoint out of range"
        );
        PrecedenceGraph { n, arcs }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc<S>] {
        &self.arcs
    }

    pub fn add_arc(&mut self, arc: Arc<S>) {
        assert!(arc.tail < self.n && arc.head < self.n, "arc endpoint out of range");
        self.arcs.push(arc);
    }

    /// Total weight and duration of a sequence of arc indices.
    pub fn path_totals(&self, arcs: &[usize]) -> (S, i64) {
        arcs.iter().fold((S::zero(), 0), |(w, d), &k| {
            (w + self.arcs[k].weight, d + self.arcs[k].duration)
        })
    }

    /// Subgraph induced by `keep`, renumbered in the order of `keep`.
    /// Returns the subgraph and, for each of its arcs, the original arc index.
    pub fn induced(&self, keep: &[usize]) -> (Self, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            local[v] = k;
        }
        let mut g = PrecedenceGraph::new(keep.len());
        let mut origin = Vec::new();
        for (idx, a) in self.arcs.iter().enumerate() {
            let (t, h) = (local[a.tail], local[a.head]);
            if t != usize::MAX && h != usize::MAX {
                g.arcs.push(Arc { tail: t, head: h, ..*a });
                origin.push(idx);
            }
        }
        (g, origin)
    }

    /// Strongly connected components (Tarjan), each sorted ascending, listed
    /// by smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let succ = self.successors();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&(v, next)) = call.last() {
                if next < succ[v].len() {
                    let w = succ[v][next];
                    if let Some(top) = call.last_mut() {
                        top.1 += 1;
                    }
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n > 0 && self.strongly_connected_components().len() == 1
    }

    /// True when no arc joins two different strongly connected components,
    /// i.e. every weakly connected piece is itself strongly connected.
    pub fn is_union_of_strong_components(&self) -> bool {
        let comp = self.component_ids();
        self.arcs.iter().all(|a| comp[a.tail] == comp[a.head])
    }

    /// Component id per node, following `strongly_connected_components`.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut id = vec![0; self.n];
        for (c, comp) in self.strongly_connected_components().iter().enumerate() {
            for &v in comp {
                id[v] = c;
            }
        }
        id
    }

    /// Nodes from which some node of `targets` can be reached.
    pub fn ancestors_of(&self, targets: &[usize]) -> Vec<usize> {
        let mut pred = vec![Vec::new(); self.n];
        for a in &self.arcs {
            pred[a.head].push(a.tail);
        }
        let mut seen = vec![false; self.n];
        let mut todo: Vec<usize> = targets.to_vec();
        for &t in targets {
            seen[t] = true;
        }
        while let Some(v) = todo.pop() {
            for &p in &pred[v] {
                if !seen[p] {
                    seen[p] = true;
                    todo.push(p);
                }
            }
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    /// Graphviz rendering with label `W=<w>,D=<d>` on every arc. Node names
    /// default to their indices.
    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let name = |v: usize| names.map_or_else(|| v.to_string(), |ns| ns[v].clone());
        let mut out = String::from("digraph G {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  \"{}\";", name(v));
        }
        for a in &self.arcs {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"W={},D={}\"];",
                name(a.tail),
                name(a.head),
                a.weight,
                a.duration
            );
        }
        out.push_str("}\n");
        out
    }

    pub(crate) fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.n];
        for a in &self.arcs {
            succ[a.tail].push(a.head);
        }
        succ
    }

    /// A node on a cycle made of zero-duration arcs, if one exists.
    pub(crate) fn zero_duration_cycle_node(&self) -> Option<usize> {
        let mut indegree = vec![0usize; self.n];
        let mut succ = vec![Vec::new(); self.n];
        for a in self.arcs.iter().filter(|a| a.duration == 0) {
            indegree[a.head] += 1;
            succ[a.tail].push(a.head);
        }
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = ready.pop() {
            done += 1;
            for &w in &succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        if done == self.n {
            None
        } else {
            (0..self.n).find(|&v| indegree[v] > 0)
        }
    }
}
