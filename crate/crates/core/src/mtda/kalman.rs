use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::linalg::*;

/// Target state `[px, py, vx, vy]` with covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Track {
    pub x: Vec4,
    pub p: Mat4,
}

impl Track {
    pub fn new(x: Vec4, p: Mat4) -> Result<Self> {
        if !is_spd4(&p) {
            return Err(Error::InvalidArgument("track covariance is not symmetric positive definite".into()));
        }
        Ok(Self { x, p })
    }

    pub fn position(&self) -> Vec2 {
        [self.x[0], self.x[1]]
    }
}

/// Position observation with noise covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub z: Vec2,
    pub r: Mat2,
}

impl Measurement {
    pub fn new(z: Vec2, r: Mat2) -> Result<Self> {
        if !is_spd2(&r) {
            return Err(Error::InvalidArgument("measurement covariance is not symmetric positive definite".into()));
        }
        Ok(Self { z, r })
    }

    pub fn isotropic(z: Vec2, var: f64) -> Result<Self> {
        Self::new(z, [[var, 0.0], [0.0, var]])
    }
}

/// Observation matrix selecting position.
pub const H_POS: Mat24 = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]];

/// Constant-velocity motion with process noise `q` on the velocity block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionModel {
    pub dt: f64,
    pub q: f64,
}

impl Default for MotionModel {
    fn default() -> Self {
        Self { dt: 1.0, q: 0.01 }
    }
}

impl MotionModel {
    pub fn transition(&self) -> Mat4 {
        let mut f = identity4();
        f[0][2] = self.dt;
        f[1][3] = self.dt;
        f
    }

    pub fn process_noise(&self) -> Mat4 {
        let mut q = [[0.0; 4]; 4];
        q[2][2] = self.q;
        q[3][3] = self.q;
        q
    }

    pub fn predict(&self, track: &Track) -> Result<Track> {
        kalman_predict(track, &self.transition(), &self.process_noise())
    }
}

/// `x⁻ = F x`, `P⁻ = F P Fᵀ + Q`.
pub fn kalman_predict(track: &Track, f: &Mat4, q: &Mat4) -> Result<Track> {
    let x = mul4v(f, &track.x);
    let p = symmetrize4(&add4(&mul4(&mul4(f, &track.p), &transpose4(f)), q));
    if !is_spd4(&p) {
        return Err(Error::InvalidArgument("predicted covariance lost positive definiteness".into()));
    }
    Ok(Track { x, p })
}

/// Innovation `ν`, covariance `S` and gain-free pieces of the update.
pub fn innovation(track: &Track, meas: &Measurement) -> (Vec2, Mat2) {
    let zhat = h_times(&H_POS, &track.x);
    let nu = [meas.z[0] - zhat[0], meas.z[1] - zhat[1]];
    let mut s = hpht(&H_POS, &track.p);
    for i in 0..2 {
        for j in 0..2 {
            s[i][j] += meas.r[i][j];
        }
    }
    (nu, s)
}

/// Kalman measurement update with the Joseph-form covariance.
pub fn kalman_update(track: &Track, meas: &Measurement) -> Result<Track> {
    let (nu, s) = innovation(track, meas);
    let si = inv2(&s).ok_or(Error::Singular)?;
    // K = P Hᵀ S⁻¹ (4×2).
    let mut pht = [[0.0; 2]; 4];
    for i in 0..4 {
        for j in 0..2 {
            pht[i][j] = (0..4).map(|k| track.p[i][k] * H_POS[j][k]).sum();
        }
    }
    let mut k = [[0.0; 2]; 4];
    for i in 0..4 {
        for j in 0..2 {
            k[i][j] = pht[i][0] * si[0][j] + pht[i][1] * si[1][j];
        }
    }
    let mut x = track.x;
    for i in 0..4 {
        x[i] += k[i][0] * nu[0] + k[i][1] * nu[1];
    }
    let mut ikh = identity4();
    for i in 0..4 {
        for j in 0..4 {
            ikh[i][j] -= k[i][0] * H_POS[0][j] + k[i][1] * H_POS[1][j];
        }
    }
    let mut krk = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            krk[i][j] = (0..2)
                .map(|a| (0..2).map(|b| k[i][a] * meas.r[a][b] * k[j][b]).sum::<f64>())
                .sum();
        }
    }
    let p = symmetrize4(&add4(&mul4(&mul4(&ikh, &track.p), &transpose4(&ikh)), &krk));
    Track::new(x, p)
}
