use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `φ_m(t) = t^m`.
    #[default]
    Polynomial,
    /// `φ_m(t) = cos(mπt)`.
    Trigonometric,
}

impl Basis {
    pub fn eval(self, m: usize, t: f64) -> f64 {
        match self {
            Basis::Polynomial => t.powi(m as i32),
            Basis::Trigonometric => (m as f64 * PI * t).cos(),
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polynomial" | "poly" => Ok(Basis::Polynomial),
            "trigonometric" | "trig" => Ok(Basis::Trigonometric),
            other => Err(Error::InvalidArgument(format!("unknown basis {other}"))),
        }
    }
}

/// Angles `γ_l = Σ a_m φ_m(t_l)`, `β_l = Σ b_m φ_m(t_l)` at `t_l = (l − ½)/p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpcSchedule {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub basis: Basis,
}

impl FpcSchedule {
    pub fn new(a: Vec<f64>, b: Vec<f64>, basis: Basis) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidArgument("schedule needs at least one coefficient each".into()));
        }
        Ok(Self { a, b, basis })
    }

    /// Linear γ ramp with a constant mixer, padded to `k` coefficients each.
    pub fn warm_start(k: usize, basis: Basis) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let mut a = vec![0.0; k];
        let mut b = vec![0.0; k];
        b[0] = FRAC_PI_4;
        match basis {
            Basis::Polynomial => {
                if k >= 2 {
                    a[1] = PI;
                } else {
                    a[0] = FRAC_PI_2;
                }
            }
            Basis::Trigonometric => {
                // π/2 − (π/2)cos(πt) rises from 0 to π like the ramp.
                a[0] = FRAC_PI_2;
                if k >= 2 {
                    a[1] = -FRAC_PI_2;
                }
            }
        }
        Self::new(a, b, basis)
    }

    pub fn n_params(&self) -> usize {
        self.a.len() + self.b.len()
    }

    pub fn params(&self) -> Vec<f64> {
        [self.a.as_slice(), self.b.as_slice()].concat()
    }

    pub fn with_params(&self, params: &[f64]) -> Self {
        let ka = self.a.len();
        Self { a: params[..ka].to_vec(), b: params[ka..].to_vec(), basis: self.basis }
    }

    pub fn evaluate(&self, p: usize) -> Result<Vec<(f64, f64)>> {
        if p == 0 {
            return Err(Error::InvalidArgument("depth p must be at least 1".into()));
        }
        Ok((1..=p)
            .map(|l| {
                let t = (l as f64 - 0.5) / p as f64;
                let f = |c: &[f64]| c.iter().enumerate().map(|(m, &x)| x * self.basis.eval(m, t)).sum::<f64>();
                (f(&self.a), f(&self.b))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warm_start_midpoints() {
        let s = FpcSchedule::new(vec![0.0, PI], vec![FRAC_PI_4], Basis::Polynomial).unwrap();
        let angles = s.evaluate(4).unwrap();
        for (l, &(g, b)) in angles.iter().enumerate() {
            assert!((g - (2 * l + 1) as f64 * PI / 8.0).abs() < 1e-12);
            assert!((b - FRAC_PI_4).abs() < 1e-12);
        }
        assert_eq!(FpcSchedule::warm_start(3, Basis::Polynomial).unwrap().a, vec![0.0, PI, 0.0]);
    }

    #[test]
    fn constant_and_single_layer() {
        let s = FpcSchedule::new(vec![0.3], vec![0.2, 1.0], Basis::Polynomial).unwrap();
        assert!(s.evaluate(7).unwrap().iter().all(|&(g, _)| g == 0.3));
        assert_eq!(s.evaluate(1).unwrap(), vec![(0.3, 0.2 + 0.5)]);
        assert!(s.evaluate(0).is_err());
    }

    #[test]
    fn trig_warm_start_is_ramp_like() {
        let s = FpcSchedule::warm_start(3, Basis::Trigonometric).unwrap();
        let g: Vec<f64> = s.evaluate(5).unwrap().iter().map(|x| x.0).collect();
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(s.n_params(), 6);
    }
}
