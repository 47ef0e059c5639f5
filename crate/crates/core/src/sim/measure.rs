use super::{SimError, Trajectory, TrajectoryKind};
use crate::scalar::Scalar;

/// Smallest number of leading events discarded by default.
pub const MIN_TRANSIENT: usize = 500;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MeasureOptions {
    /// Leading events to discard; default a quarter of the horizon, at
    /// least [`MIN_TRANSIENT`].
    pub transient: Option<usize>,
}

/// Average headways measured on the tail of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeadwayMeasurement<S> {
    /// Central part, seconds.
    pub h0: S,
    /// Branch 1, seconds.
    pub h1: S,
    /// Branch 2, seconds.
    pub h2: S,
    /// Seconds per uniform event.
    pub growth_rate: S,
    pub transient_discarded: usize,
    /// Detected period (in events of the measured counter) of the stationary
    /// regime, if the window shows one.
    pub period: Option<usize>,
}

/// Measure asymptotic headways. The window is trimmed to a whole number of
/// periods when the tail is periodic, which makes the estimate exact.
pub fn measure_headways<S: Scalar>(
    traj: &Trajectory<S>,
    options: MeasureOptions,
) -> Result<HeadwayMeasurement<S>, SimError> {
    let horizon = traj.horizon();
    let transient = options.transient.unwrap_or((horizon / 4).max(MIN_TRANSIENT));
    let needed = transient + 4;
    if horizon < needed {
        return Err(SimError::InsufficientHorizon {
            events: horizon,
            needed,
        });
    }
    let group = |part: Option<usize>| -> Vec<&[S]> {
        (0..traj.nodes().len())
            .filter(|&i| part.is_none_or(|u| traj.nodes()[i].part == u))
            .map(|i| traj.series(i))
            .collect()
    };
    match traj.kind() {
        TrajectoryKind::Departure => {
            let (h0, period) = series_rate(&group(Some(0)), transient);
            let (h1, _) = series_rate(&group(Some(1)), transient / 2);
            let (h2, _) = series_rate(&group(Some(2)), transient / 2);
            Ok(HeadwayMeasurement {
                h0,
                h1,
                h2,
                growth_rate: h0,
                transient_discarded: transient,
                period,
            })
        }
        TrajectoryKind::Uniform => {
            let (g, period) = series_rate(&group(None), transient);
            let two = S::from_int(2);
            Ok(HeadwayMeasurement {
                h0: g,
                h1: two * g,
                h2: two * g,
                growth_rate: g,
                transient_discarded: transient,
                period,
            })
        }
    }
}

/// Mean growth per event of a set of series after skipping `skip` events,
/// and the common period of their increments if one is found.
pub fn series_rate<S: Scalar>(series: &[&[S]], skip: usize) -> (S, Option<usize>) {
    let len = series.iter().map(|s| s.len()).min().unwrap_or(0);
    assert!(len >= skip + 2, "series too short for the requested window");
    let points = len - skip;
    let period = (1..=points / 2).find(|&p| {
        series.iter().all(|x| {
            let last = x[len - 1];
            let step = last - x[len - 1 - p];
            let tol = S::relative_tolerance() * S::one().max_of(last.abs());
            (skip + p..len).all(|k| (x[k] - x[k - p] - step).abs() <= tol)
        })
    });
    let span = match period {
        Some(p) => p * ((points - 1) / p),
        None => points - 1,
    };
    let total = series
        .iter()
        .map(|x| (x[len - 1] - x[len - 1 - span]) / S::from_int(span as i64))
        .fold(S::zero(), |a, b| a + b);
    (total / S::from_int(series.len() as i64), period)
}
