//! White-noise constant-velocity target motion.
//!
//! State ordering is `(x, y, vx, vy)` in km and km/s. Both the transition
//! matrix and the process covariance are a 2×2 block Kronecker-multiplied
//! with `I₂`, so x and y evolve independently.

use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl TargetState {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64) -> Result<Self> {
        let s = Self { x, y, vx, vy };
        if !s.to_vector().iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("target state must be finite"));
        }
        Ok(s)
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.x, self.y, self.vx, self.vy)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self {
            x: v[0],
            y: v[1],
            vx: v[2],
            vy: v[3],
        }
    }
}

impl From<[f64; 4]> for TargetState {
    fn from(v: [f64; 4]) -> Self {
        Self {
            x: v[0],
            y: v[1],
            vx: v[2],
            vy: v[3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionModel {
    /// Update interval in seconds.
    pub t_u: f64,
    /// Process-noise intensity in km²/s³.
    pub sigma_w_sq: f64,
}

impl MotionModel {
    pub fn new(t_u: f64, sigma_w_sq: f64) -> Result<Self> {
        let m = Self { t_u, sigma_w_sq };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_u > 0.0 && self.t_u.is_finite()) {
            return Err(Error::invalid(format!("t_u must be > 0, got {}", self.t_u)));
        }
        if !(self.sigma_w_sq >= 0.0 && self.sigma_w_sq.is_finite()) {
            return Err(Error::invalid(format!(
                "sigma_w_sq must be >= 0, got {}",
                self.sigma_w_sq
            )));
        }
        Ok(())
    }

    pub fn transition_matrix(&self) -> Matrix4<f64> {
        kron_i2(&Matrix2::new(1.0, self.t_u, 0.0, 1.0))
    }

    pub fn process_covariance(&self) -> Matrix4<f64> {
        let t = self.t_u;
        let block = Matrix2::new(t.powi(3) / 3.0, t * t / 2.0, t * t / 2.0, t);
        kron_i2(&(block * self.sigma_w_sq))
    }

    /// Lower-triangular factor `L` with `L·Lᵀ = Q`.
    ///
    /// Closed form of the Cholesky factor of the 2×2 block, scaled by
    /// `σ_w`; stays valid (all zeros) when `sigma_w_sq == 0`.
    pub fn process_noise_factor(&self) -> Matrix4<f64> {
        let t = self.t_u;
        let l11 = (t.powi(3) / 3.0).sqrt();
        let l21 = (3.0 * t).sqrt() / 2.0;
        let l22 = t.sqrt() / 2.0;
        kron_i2(&(Matrix2::new(l11, 0.0, l21, l22) * self.sigma_w_sq.sqrt()))
    }

    pub fn propagate(&self, state: &TargetState) -> TargetState {
        TargetState::from_vector(&(self.transition_matrix() * state.to_vector()))
    }

    /// One step of truth propagation: `F·x + w`, `w ~ N(0, Q)`.
    pub fn step_truth<R: Rng + ?Sized>(&self, state: &TargetState, rng: &mut R) -> TargetState {
        let e = Vector4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        let next = self.transition_matrix() * state.to_vector() + self.process_noise_factor() * e;
        TargetState::from_vector(&next)
    }
}

/// `block ⊗ I₂` under the (x, y, vx, vy) ordering.
fn kron_i2(block: &Matrix2<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| {
        if r % 2 == c % 2 {
            block[(r / 2, c / 2)]
        } else {
            0.0
        }
    })
}
