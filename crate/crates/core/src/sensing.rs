//! Range/azimuth measurement model for each radar site.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix2x4, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::TargetState;

/// Targets closer than this (km) to a radar are rejected.
pub const MIN_RANGE_KM: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarSite {
    pub id: usize,
    /// Position in km.
    pub x: f64,
    pub y: f64,
    /// Beams per scan.
    pub m: usize,
    /// Azimuth standard deviation (rad).
    pub sigma_a: f64,
    /// Base range standard deviation (km), scaled per target by `b`.
    pub sigma_r_base: f64,
    /// Per-target range-accuracy factors, each ≥ 1.
    pub b: Vec<f64>,
}

impl RadarSite {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid(format!("radar {}: m must be >= 1", self.id)));
        }
        if !(self.sigma_a > 0.0 && self.sigma_r_base > 0.0) {
            return Err(Error::invalid(format!(
                "radar {}: noise standard deviations must be positive",
                self.id
            )));
        }
        if let Some(bad) = self.b.iter().find(|&&b| !(b >= 1.0 && b.is_finite())) {
            return Err(Error::invalid(format!(
                "radar {}: range factor {bad} is below 1",
                self.id
            )));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::invalid(format!(
                "radar {}: position must be finite",
                self.id
            )));
        }
        Ok(())
    }

    fn offset(&self, state: &TargetState) -> Result<(f64, f64, f64)> {
        let dx = state.x - self.x;
        let dy = state.y - self.y;
        let r = dx.hypot(dy);
        if r.is_nan() || r < MIN_RANGE_KM {
            return Err(Error::CoLocated {
                radar_id: self.id,
                min_range_km: MIN_RANGE_KM,
            });
        }
        Ok((dx, dy, r))
    }

    /// Noise-free measurement `(range, azimuth)` of a target state.
    pub fn observe(&self, state: &TargetState) -> Result<Vector2<f64>> {
        let (dx, dy, r) = self.offset(state)?;
        Ok(Vector2::new(r, wrap_angle(dy.atan2(dx))))
    }

    /// `∂h/∂x` at `state`; the velocity columns are zero.
    pub fn jacobian(&self, state: &TargetState) -> Result<Matrix2x4<f64>> {
        let (dx, dy, r) = self.offset(state)?;
        let r2 = r * r;
        Ok(Matrix2x4::new(
            dx / r,
            dy / r,
            0.0,
            0.0, //
            -dy / r2,
            dx / r2,
            0.0,
            0.0,
        ))
    }

    pub fn range_std(&self, target_id: usize) -> Result<f64> {
        self.b
            .get(target_id)
            .map(|b| b * self.sigma_r_base)
            .ok_or(Error::UnknownTarget {
                target_id,
                n_targets: self.b.len(),
            })
    }

    /// `diag((b·σ_r)², σ_a²)` for this radar and target.
    pub fn noise_cov(&self, target_id: usize) -> Result<Matrix2<f64>> {
        let sr = self.range_std(target_id)?;
        Ok(Matrix2::new(sr * sr, 0.0, 0.0, self.sigma_a * self.sigma_a))
    }

    pub fn sample_measurement<R: Rng + ?Sized>(
        &self,
        target_id: usize,
        truth: &TargetState,
        time_index: u64,
        rng: &mut R,
    ) -> Result<Measurement> {
        let noise_cov = self.noise_cov(target_id)?;
        let z = self.observe(truth)?;
        let nr: f64 = rng.sample(StandardNormal);
        let na: f64 = rng.sample(StandardNormal);
        Ok(Measurement {
            radar_id: self.id,
            target_id,
            time_index,
            r: z[0] + noise_cov[(0, 0)].sqrt() * nr,
            a: wrap_angle(z[1] + noise_cov[(1, 1)].sqrt() * na),
            noise_cov,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub radar_id: usize,
    pub target_id: usize,
    pub time_index: u64,
    /// Range (km).
    pub r: f64,
    /// Azimuth (rad) in (−π, π].
    pub a: f64,
    pub noise_cov: Matrix2<f64>,
}

impl Measurement {
    pub fn z(&self) -> Vector2<f64> {
        Vector2::new(self.r, self.a)
    }
}

/// Wrap an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}
