//! Closed-form headway terms, phase reports, sweeps over the number of
//! trains, and max-plus cross-checks of the central headway.

mod exact;
mod sweep;

use std::fmt;

use crate::line::{split_totals, LineDescription, LineError, TrainCounts};
use crate::scalar::Scalar;

pub use exact::{composed_cycle_time, exact_headway};
pub use sweep::{optimal_dm, sweep, write_sweep_csv, SWEEP_HEADER};

/// Headway in seconds, or unbounded when service stops.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Headway<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Headway<S> {
    /// `num / den`, unbounded when `den ≤ 0`.
    pub fn ratio(num: S, den: i64) -> Self {
        if den <= 0 {
            Headway::Infinite
        } else {
            Headway::Finite(num / S::from_int(den))
        }
    }

    pub fn value(self) -> Option<S> {
        match self {
            Headway::Finite(v) => Some(v),
            Headway::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Headway::Finite(_))
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (Headway::Finite(a), Headway::Finite(b)) => Headway::Finite(a.max_of(b)),
            _ => Headway::Infinite,
        }
    }

    /// Departures per second; zero for an unbounded headway.
    pub fn frequency(self) -> S {
        match self {
            Headway::Finite(h) if h > S::zero() => S::one() / h,
            _ => S::zero(),
        }
    }

    /// Equal within the scalar tolerance; unbounded equals only unbounded.
    pub fn approx_eq(self, other: Self) -> bool {
        match (self, other) {
            (Headway::Finite(a), Headway::Finite(b)) => a.approx_eq(b),
            (Headway::Infinite, Headway::Infinite) => true,
            _ => false,
        }
    }
}

impl<S: Scalar> fmt::Display for Headway<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Headway::Finite(v) => write!(f, "{v}"),
            Headway::Infinite => f.write_str("inf"),
        }
    }
}

/// Which inner ratio of a headway term attains the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// Forward loop through branch 1.
    Forward1,
    /// Forward loop through branch 2.
    Forward2,
    /// A central segment at its minimum `t + s`.
    MinCentral,
    /// A branch segment at its minimum `(t + s)/2`.
    MinBranch,
    /// Backward loop through branch 1.
    Backward1,
    /// Backward loop through branch 2.
    Backward2,
    /// Travel on branch 1 against separation on branch 2.
    Branches1,
    /// Separation on branch 1 against travel on branch 2.
    Branches2,
}

impl Regime {
    pub const ALL: [Regime; 8] = [
        Regime::Forward1,
        Regime::Forward2,
        Regime::MinCentral,
        Regime::MinBranch,
        Regime::Backward1,
        Regime::Backward2,
        Regime::Branches1,
        Regime::Branches2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Regime::Forward1 => "fw1",
            Regime::Forward2 => "fw2",
            Regime::MinCentral => "min0",
            Regime::MinBranch => "min12",
            Regime::Backward1 => "bw1",
            Regime::Backward2 => "bw2",
            Regime::Branches1 => "br1",
            Regime::Branches2 => "br2",
        }
    }

    /// Coarse term name: `fw`, `min`, `bw` or `br`.
    pub fn term(self) -> &'static str {
        match self {
            Regime::Forward1 | Regime::Forward2 => "fw",
            Regime::MinCentral | Regime::MinBranch => "min",
            Regime::Backward1 | Regime::Backward2 => "bw",
            Regime::Branches1 | Regime::Branches2 => "br",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The eight inner ratios, in [`Regime::ALL`] order.
pub fn regime_values<S: Scalar>(c: &TrainCounts<S>, line: &LineDescription<S>) -> [Headway<S>; 8] {
    let [t0, t1, t2] = c.t_sums;
    let [s0, s1, s2] = c.s_sums;
    let (m, dm) = (c.m as i64, c.dm);
    let (mb, dmb) = (c.m_bar as i64, c.dm_bar);
    let [_, n1, n2] = c.n.map(|v| v as i64);
    let (central, branch) = min_parts(line);
    [
        Headway::ratio(t0 + t1, m - dm),
        Headway::ratio(t0 + t2, m + dm),
        Headway::Finite(central),
        Headway::Finite(branch),
        Headway::ratio(s0 + s1, mb - dmb),
        Headway::ratio(s0 + s2, mb + dmb),
        Headway::ratio(t1 + s2, 2 * (n2 - dm)),
        Headway::ratio(s1 + t2, 2 * (n1 + dm)),
    ]
}

/// Forward term: loops of trains through either branch.
pub fn h_forward<S: Scalar>(c: &TrainCounts<S>) -> Headway<S> {
    let [t0, t1, t2] = c.t_sums;
    let (m, dm) = (c.m as i64, c.dm);
    Headway::ratio(t0 + t1, m - dm).max(Headway::ratio(t0 + t2, m + dm))
}

/// Segment bound: central `t + s`, branch `(t + s)/2`.
pub fn h_minimum<S: Scalar>(line: &LineDescription<S>) -> S {
    line.loop_bound()
}

fn min_parts<S: Scalar>(line: &LineDescription<S>) -> (S, S) {
    let two = S::from_int(2);
    let best = |u: usize| {
        line.segments(u)
            .iter()
            .map(|p| p.t_lower + p.s_lower)
            .fold(S::zero(), S::max_of)
    };
    (best(0), best(1).max_of(best(2)) / two)
}

/// Backward term: loops of free segments through either branch.
pub fn h_backward<S: Scalar>(c: &TrainCounts<S>) -> Headway<S> {
    let [s0, s1, s2] = c.s_sums;
    let (mb, dmb) = (c.m_bar as i64, c.dm_bar);
    Headway::ratio(s0 + s1, mb - dmb).max(Headway::ratio(s0 + s2, mb + dmb))
}

/// Branch term: loops running forward on one branch and backward on the other.
pub fn h_branches<S: Scalar>(c: &TrainCounts<S>, n1: usize, n2: usize) -> Headway<S> {
    let [_, t1, t2] = c.t_sums;
    let [_, s1, s2] = c.s_sums;
    let dm = c.dm;
    Headway::ratio(t1 + s2, 2 * (n2 as i64 - dm)).max(Headway::ratio(s1 + t2, 2 * (n1 as i64 + dm)))
}

/// Asymptotic operation at one `(m, dm)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseReport<S> {
    pub m: usize,
    pub dm: i64,
    /// Trains per part of the placement used; `None` when infeasible.
    pub parts: Option<[usize; 3]>,
    pub h_fw: Headway<S>,
    pub h_min: Headway<S>,
    pub h_bw: Headway<S>,
    pub h_br: Headway<S>,
    /// Central headway; unbounded when infeasible.
    pub h0: Headway<S>,
    /// Central frequency, departures per second.
    pub f0: S,
    pub f1: S,
    pub f2: S,
    pub binding: Vec<Regime>,
    pub feasible: bool,
}

impl<S: Scalar> PhaseReport<S> {
    /// Binding regimes joined by `+`, empty when infeasible.
    pub fn binding_label(&self) -> String {
        self.binding.iter().map(|r| r.label()).collect::<Vec<_>>().join("+")
    }

    /// Coarse binding terms without repetition, in `fw, min, bw, br` order.
    pub fn binding_terms(&self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        for r in &self.binding {
            if !out.contains(&r.term()) {
                out.push(r.term());
            }
        }
        out
    }
}

/// Closed-form headways and frequencies for `m` trains with `m2 − m1 = dm`.
///
/// Segment parameters come from `line`; its own occupancy is ignored.
pub fn headway<S: Scalar>(line: &LineDescription<S>, m: usize, dm: i64) -> Result<PhaseReport<S>, LineError> {
    let base = line.validate()?;
    let n = base.n;
    let parts = split_totals(n, m, dm);
    let counts = match parts {
        Some(p) => line.with_part_counts(p)?.validate()?,
        None => {
            let capacity = base.capacity();
            TrainCounts {
                parts: [0; 3],
                m,
                dm,
                m_bar: capacity.saturating_sub(m),
                dm_bar: (n[2] as i64 - n[1] as i64) - dm,
                ..base
            }
        }
    };
    let values = regime_values(&counts, line);
    let h_fw = values[0].max(values[1]);
    let h_min = values[2].max(values[3]);
    let h_bw = values[4].max(values[5]);
    let h_br = values[6].max(values[7]);
    let feasible = parts.is_some();
    let (h0, binding) = if feasible {
        let h0 = h_fw.max(h_min).max(h_bw).max(h_br);
        let binding = Regime::ALL
            .iter()
            .zip(values)
            .filter(|(_, v)| v.approx_eq(h0))
            .map(|(r, _)| *r)
            .collect();
        (h0, binding)
    } else {
        (Headway::Infinite, Vec::new())
    };
    let f0 = h0.frequency();
    let half = f0 / S::from_int(2);
    Ok(PhaseReport {
        m,
        dm,
        parts,
        h_fw,
        h_min,
        h_bw,
        h_br,
        h0,
        f0,
        f1: half,
        f2: half,
        binding,
        feasible,
    })
}
