//! Evaluation times for schemes carrying a shift-time slot `T`.

use super::{Scheme, Stage, StageCoeff};
use crate::error::{invalid, Result};

/// A non-`T` stage with the time at which its operator is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct TimedStage {
    /// Index into [`Scheme::stages`].
    pub stage_index: usize,
    pub stage: Stage,
    /// Accumulated `T` coefficient to the right of the stage, exact when the
    /// scheme is.
    pub offset: StageCoeff,
    /// `t + offset · dt`.
    pub time: f64,
}

/// Scans the stages right to left, accumulating the `T` coefficients passed
/// so far. `T` stages are consumed; every other stage is emitted, in
/// application order, with its evaluation time.
pub fn evaluation_times(scheme: &Scheme, t: f64, dt: f64) -> Result<Vec<TimedStage>> {
    let Some(tslot) = scheme.slot_index("T") else {
        return invalid(format!("scheme {} has no T slot", scheme.name()));
    };
    let mut offset = StageCoeff::int(0);
    let mut out = Vec::new();
    for (i, stage) in scheme.stages().iter().enumerate().rev() {
        if stage.slot_index() == Some(tslot) {
            offset = offset.add(&stage.coeff);
            continue;
        }
        out.push(TimedStage {
            stage_index: i,
            stage: stage.clone(),
            offset: offset.clone(),
            time: t + offset.value() * dt,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::{g1, g2, strang};

    #[test]
    fn first_order_pattern() {
        // exp(xA) exp(xB) exp(xT): T is rightmost, so both parts see t + dt.
        let times = evaluation_times(&g1(), 2.0, 0.5).unwrap();
        assert_eq!(times.len(), 2);
        assert!(times.iter().all(|s| s.time == 2.5));
    }

    #[test]
    fn midpoint_pattern() {
        let times = evaluation_times(&g2(), 0.0, 1.0).unwrap();
        assert_eq!(times.len(), 3);
        assert!(times.iter().all(|s| s.offset.as_rational().unwrap() == crate::ncalg::Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn missing_t_slot() {
        assert!(evaluation_times(&strang(), 0.0, 1.0).is_err());
    }
}
