use std::io::{self, Write};
use std::ops::RangeInclusive;

use super::{headway, PhaseReport};
use crate::line::{LineDescription, LineError};
use crate::scalar::Scalar;

pub const SWEEP_HEADER: &str = "m,dm,feasible,h_fw,h_min,h_bw,h_br,h0_seconds,f0_per_hour,f_branch_per_hour,binding";

/// One report per grid point, `m`-major.
pub fn sweep<S: Scalar>(
    line: &LineDescription<S>,
    m_range: RangeInclusive<usize>,
    dm_range: RangeInclusive<i64>,
) -> Result<Vec<PhaseReport<S>>, LineError> {
    let mut out = Vec::new();
    for m in m_range {
        for dm in dm_range.clone() {
            out.push(headway(line, m, dm)?);
        }
    }
    Ok(out)
}

/// The `dm` maximising the central frequency for `m` trains, with the
/// frequency. Ties go to the smallest `|dm|`, then to the negative side.
pub fn optimal_dm<S: Scalar>(line: &LineDescription<S>, m: usize) -> Result<(i64, S), LineError> {
    let c = line.validate()?;
    if m > c.capacity() {
        return Err(LineError::Unrepresentable { m, dm: 0 });
    }
    let reach = c.n[1].max(c.n[2]) as i64;
    let mut best: Option<(i64, S)> = None;
    for step in 0..=reach {
        for dm in [-step, step] {
            if step == 0 && dm > 0 {
                continue;
            }
            let r = headway(line, m, dm)?;
            if r.feasible && best.is_none_or(|(_, f)| r.f0 > f) {
                best = Some((dm, r.f0));
            }
        }
    }
    best.ok_or(LineError::Unrepresentable { m, dm: 0 })
}

/// Sweep table as CSV. `optimal` adds an `optimal_dm` column holding, for
/// each row's `m`, the matching entry of the list.
pub fn write_sweep_csv<S: Scalar, W: Write>(
    mut out: W,
    reports: &[PhaseReport<S>],
    optimal: Option<&[(usize, i64)]>,
) -> io::Result<()> {
    write!(out, "{SWEEP_HEADER}")?;
    if optimal.is_some() {
        write!(out, ",optimal_dm")?;
    }
    writeln!(out)?;
    let per_hour = S::from_int(3600);
    for r in reports {
        write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.m,
            r.dm,
            r.feasible,
            r.h_fw,
            r.h_min,
            r.h_bw,
            r.h_br,
            r.h0,
            r.f0 * per_hour,
            r.f1 * per_hour,
            r.binding_label()
        )?;
        if let Some(opt) = optimal {
            match opt.iter().find(|(m, _)| *m == r.m) {
                Some((_, dm)) => write!(out, ",{dm}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
