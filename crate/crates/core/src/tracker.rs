//! Per-target extended Kalman filter.
//!
//! A slot's measurements of one target are folded in one at a time, in the
//! order given, relinearizing the measurement function at the running
//! estimate after each step. The trace of the covariance after every step
//! is recorded so the game layer can read off per-measurement accuracy gains.

use nalgebra::{Matrix2, Matrix2x4, Matrix4, Vector2, Vector4};

use crate::error::{Error, Result};
use crate::kinematics::{MotionModel, TargetState};
use crate::sensing::{wrap_angle, Measurement, RadarSite};

#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub target_id: usize,
    pub state_est: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpdateTrace {
    /// Trace of the predicted covariance (before any measurement).
    pub predicted_trace: f64,
    /// Trace after the 1st, 2nd, … measurement of the slot.
    pub per_step_traces: Vec<f64>,
}

impl UpdateTrace {
    /// Largest single-step trace increase (≤ 0 when every step shrank the
    /// covariance).
    pub fn max_step_increase(&self) -> f64 {
        let mut prev = self.predicted_trace;
        let mut worst = f64::NEG_INFINITY;
        for &t in &self.per_step_traces {
            worst = worst.max(t - prev);
            prev = t;
        }
        worst
    }
}

/// Covariance update used after each gain computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovarianceForm {
    /// `(I−KH)P(I−KH)ᵀ + KRKᵀ`.
    #[default]
    Joseph,
    /// `(I−KH)P`.
    Standard,
}

impl Track {
    pub fn new(target_id: usize, state_est: Vector4<f64>, cov: Matrix4<f64>) -> Self {
        Self {
            target_id,
            state_est,
            cov,
        }
    }

    pub fn state(&self) -> TargetState {
        TargetState::from_vector(&self.state_est)
    }

    pub fn trace(&self) -> f64 {
        self.cov.trace()
    }

    pub fn predict(&self, model: &MotionModel) -> Track {
        let f = model.transition_matrix();
        Track {
            target_id: self.target_id,
            state_est: f * self.state_est,
            cov: symmetrize(f * self.cov * f.transpose() + model.process_covariance()),
        }
    }

    pub fn update_cyclic(
        &self,
        measurements: &[Measurement],
        geometry: &[RadarSite],
    ) -> Result<(Track, UpdateTrace)> {
        self.update_cyclic_with(measurements, geometry, CovarianceForm::Joseph)
    }

    pub fn update_cyclic_with(
        &self,
        measurements: &[Measurement],
        geometry: &[RadarSite],
        form: CovarianceForm,
    ) -> Result<(Track, UpdateTrace)> {
        let mut x = self.state_est;
        let mut p = self.cov;
        let mut trace = UpdateTrace {
            predicted_trace: p.trace(),
            per_step_traces: Vec::with_capacity(measurements.len()),
        };
        let time = measurements.first().map(|m| m.time_index);
        for meas in measurements {
            if meas.target_id != self.target_id || Some(meas.time_index) != time {
                return Err(Error::MeasurementMismatch {
                    expected: self.target_id,
                    got: meas.target_id,
                    expected_time: time.unwrap_or_default(),
                    got_time: meas.time_index,
                });
            }
            let radar = find_radar(geometry, meas.radar_id)?;
            let here = TargetState::from_vector(&x);
            let h = radar.jacobian(&here)?;
            let mut innovation = meas.z() - radar.observe(&here)?;
            innovation[1] = wrap_angle(innovation[1]);
            (x, p) = kalman_step(&x, &p, &innovation, &h, &meas.noise_cov, form)?;
            trace.per_step_traces.push(p.trace());
        }
        Ok((
            Track {
                target_id: self.target_id,
                state_est: x,
                cov: p,
            },
            trace,
        ))
    }

    /// Covariance-only pass over a hypothetical set of looks, one per radar
    /// in the given order, all linearized at the current estimate.
    ///
    /// The covariance recursion of the filter does not depend on measured
    /// values except through the linearization point, so this is the gain
    /// sequence the radars can agree on before measuring.
    pub fn hypothetical_trace(&self, radars: &[&RadarSite]) -> Result<UpdateTrace> {
        let here = self.state();
        let mut p = self.cov;
        let mut trace = UpdateTrace {
            predicted_trace: p.trace(),
            per_step_traces: Vec::with_capacity(radars.len()),
        };
        for radar in radars {
            let h = radar.jacobian(&here)?;
            let r = radar.noise_cov(self.target_id)?;
            p = covariance_step(&p, &h, &r, CovarianceForm::Joseph)?;
            trace.per_step_traces.push(p.trace());
        }
        Ok(trace)
    }
}

/// Trace reduction contributed by each step of an update.
pub fn gain_increments(trace: &UpdateTrace) -> Vec<f64> {
    std::iter::once(trace.predicted_trace)
        .chain(trace.per_step_traces.iter().copied())
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| w[0] - w[1])
        .collect()
}

/// Sequential update with fixed linear observation matrices; `z − H·x` is
/// used as the innovation.
pub fn sequential_linear_update(
    x: &Vector4<f64>,
    p: &Matrix4<f64>,
    observations: &[(Matrix2x4<f64>, Vector2<f64>, Matrix2<f64>)],
    form: CovarianceForm,
) -> Result<(Vector4<f64>, Matrix4<f64>)> {
    observations.iter().try_fold((*x, *p), |(x, p), (h, z, r)| {
        kalman_step(&x, &p, &(z - h * x), h, r, form)
    })
}

fn find_radar(geometry: &[RadarSite], id: usize) -> Result<&RadarSite> {
    geometry
        .get(id)
        .filter(|r| r.id == id)
        .or_else(|| geometry.iter().find(|r| r.id == id))
        .ok_or(Error::UnknownRadar(id))
}

fn gain(
    p: &Matrix4<f64>,
    h: &Matrix2x4<f64>,
    r: &Matrix2<f64>,
) -> Result<nalgebra::Matrix4x2<f64>> {
    let s = h * p * h.transpose() + r;
    let s_inv = s
        .try_inverse()
        .filter(|m| m.iter().all(|v| v.is_finite()))
        .ok_or(Error::SingularInnovation)?;
    Ok(p * h.transpose() * s_inv)
}

fn apply_gain(
    p: &Matrix4<f64>,
    k: &nalgebra::Matrix4x2<f64>,
    h: &Matrix2x4<f64>,
    r: &Matrix2<f64>,
    form: CovarianceForm,
) -> Matrix4<f64> {
    let i_kh = Matrix4::identity() - k * h;
    let p = match form {
        CovarianceForm::Joseph => i_kh * p * i_kh.transpose() + k * r * k.transpose(),
        CovarianceForm::Standard => i_kh * p,
    };
    symmetrize(p)
}

fn covariance_step(
    p: &Matrix4<f64>,
    h: &Matrix2x4<f64>,
    r: &Matrix2<f64>,
    form: CovarianceForm,
) -> Result<Matrix4<f64>> {
    let k = gain(p, h, r)?;
    Ok(apply_gain(p, &k, h, r, form))
}

fn kalman_step(
    x: &Vector4<f64>,
    p: &Matrix4<f64>,
    innovation: &Vector2<f64>,
    h: &Matrix2x4<f64>,
    r: &Matrix2<f64>,
    form: CovarianceForm,
) -> Result<(Vector4<f64>, Matrix4<f64>)> {
    let k = gain(p, h, r)?;
    Ok((x + k * innovation, apply_gain(p, &k, h, r, form)))
}

fn symmetrize(p: Matrix4<f64>) -> Matrix4<f64> {
    (p + p.transpose()) * 0.5
}
