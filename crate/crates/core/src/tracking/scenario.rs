use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mtda::linalg::Vec4;
use crate::mtda::Measurement;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    /// Straight paths through the region centre, all meeting mid-sequence.
    Crossing,
    /// Parallel lanes under heavy clutter.
    Clutter,
    /// Targets orbiting the centre on concentric rings.
    Swarm,
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crossing" => Ok(Self::Crossing),
            "clutter" => Ok(Self::Clutter),
            "swarm" => Ok(Self::Swarm),
            other => Err(Error::InvalidArgument(format!("unknown scenario kind {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub n_targets: usize,
    pub p_detect: f64,
    /// Mean number of clutter returns per frame.
    pub clutter_rate: f64,
    /// Standard deviation of position measurements; `R = σ²I`.
    pub meas_std: f64,
    pub n_steps: usize,
    /// Side length of the square surveillance region.
    pub region: f64,
    /// Tracker process noise on the velocity block.
    pub process_noise: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn preset(kind: ScenarioKind) -> Self {
        let base = Self {
            kind,
            n_targets: 5,
            p_detect: 0.95,
            clutter_rate: 0.5,
            meas_std: 0.5,
            n_steps: 30,
            region: 100.0,
            process_noise: 0.01,
            seed: rng::DEFAULT_SEED,
        };
        match kind {
            ScenarioKind::Crossing => base,
            ScenarioKind::Clutter => Self { clutter_rate: 8.0, ..base },
            ScenarioKind::Swarm => Self { n_targets: 8, clutter_rate: 2.0, process_noise: 0.5, ..base },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.n_targets == 0 {
            return bad("scenario needs at least one target");
        }
        if !(0.0..=1.0).contains(&self.p_detect) {
            return bad("p_detect outside [0,1]");
        }
        if !(self.clutter_rate >= 0.0 && self.clutter_rate.is_finite()) {
            return bad("clutter_rate must be finite and non-negative");
        }
        if !(self.meas_std > 0.0 && self.region > 0.0 && self.process_noise > 0.0) {
            return bad("meas_std, region and process_noise must be positive");
        }
        if self.n_steps == 0 {
            return bad("n_steps must be positive");
        }
        Ok(())
    }

    pub fn meas_var(&self) -> f64 {
        self.meas_std * self.meas_std
    }

    /// Step at which crossing paths meet.
    pub fn crossing_time(&self) -> f64 {
        (self.n_steps as f64 - 1.0) / 2.0
    }

    /// True state `[px, py, vx, vy]` of target `i` at step `t`.
    pub fn truth(&self, i: usize, t: usize) -> Vec4 {
        self.state_at(i, t as f64)
    }

    /// Continuous-time trajectory; negative times extrapolate backwards.
    pub fn state_at(&self, i: usize, t: f64) -> Vec4 {
        let c = self.region / 2.0;
        let n = self.n_targets as f64;
        match self.kind {
            ScenarioKind::Crossing => {
                // Directions spread over a half turn so no two paths coincide.
                let th = PI * i as f64 / n;
                let r0 = 0.4 * self.region;
                let speed = r0 / self.crossing_time().max(0.5);
                let s = r0 - speed * t;
                let (dx, dy) = (th.cos(), th.sin());
                [c + s * dx, c + s * dy, -speed * dx, -speed * dy]
            }
            ScenarioKind::Clutter => {
                let gap = 0.8 * self.region / n.max(1.0);
                let y = 0.1 * self.region + gap * (i as f64 + 0.5);
                let speed = 0.8 * self.region / self.n_steps as f64;
                [0.1 * self.region + speed * t, y, speed, 0.0]
            }
            ScenarioKind::Swarm => {
                let r = 0.15 * self.region + 0.25 * self.region * i as f64 / n;
                let w = 2.0 * PI / 60.0;
                let ph = 2.0 * PI * i as f64 / n;
                let a = ph + w * t;
                [c + r * a.cos(), c + r * a.sin(), -r * w * a.sin(), r * w * a.cos()]
            }
        }
    }
}

/// One scan of returns. `origin[j]` is the target that produced measurement
/// `j`, or `None` for clutter.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t: usize,
    pub measurements: Vec<Measurement>,
    pub origin: Vec<Option<usize>>,
}

/// Draws frame `t` from its own random stream, so frames can be generated
/// in any order.
pub fn generate_frame(s: &Scenario, t: usize) -> Result<Frame> {
    s.validate()?;
    if t >= s.n_steps {
        return Err(Error::InvalidArgument(format!("frame {t} beyond {} steps", s.n_steps)));
    }
    let mut r = rng::stream(s.seed, t as u64);
    let noise = Normal::new(0.0, s.meas_std).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let var = s.meas_var();
    let mut measurements = Vec::new();
    let mut origin = Vec::new();
    for i in 0..s.n_targets {
        if r.random::<f64>() < s.p_detect {
            let x = s.truth(i, t);
            let z = [x[0] + noise.sample(&mut r), x[1] + noise.sample(&mut r)];
            measurements.push(Measurement::isotropic(z, var)?);
            origin.push(Some(i));
        }
    }
    let n_clutter = if s.clutter_rate > 0.0 {
        let p = Poisson::new(s.clutter_rate).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        p.sample(&mut r) as usize
    } else {
        0
    };
    for _ in 0..n_clutter {
        let z = [r.random::<f64>() * s.region, r.random::<f64>() * s.region];
        measurements.push(Measurement::isotropic(z, var)?);
        origin.push(None);
    }
    Ok(Frame { t, measurements, origin })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_detection_no_clutter() {
        let s = Scenario { p_detect: 1.0, clutter_rate: 0.0, ..Scenario::preset(ScenarioKind::Crossing) };
        for t in 0..s.n_steps {
            let f = generate_frame(&s, t).unwrap();
            assert_eq!(f.measurements.len(), 5);
            assert!(f.origin.iter().all(Option::is_some));
        }
    }

    #[test]
    fn zero_detection_only_clutter() {
        let s = Scenario { p_detect: 0.0, clutter_rate: 3.0, ..Scenario::preset(ScenarioKind::Clutter) };
        let f = generate_frame(&s, 4).unwrap();
        assert!(f.origin.iter().all(Option::is_none));
        for m in &f.measurements {
            assert!((0.0..=s.region).contains(&m.z[0]) && (0.0..=s.region).contains(&m.z[1]));
        }
    }

    #[test]
    fn crossing_minimum_separation_mid_sequence() {
        let s = Scenario::preset(ScenarioKind::Crossing);
        let sep = |t: usize| {
            let mut best = f64::INFINITY;
            for i in 0..s.n_targets {
                for j in 0..i {
                    let (a, b) = (s.truth(i, t), s.truth(j, t));
                    best = best.min((a[0] - b[0]).hypot(a[1] - b[1]));
                }
            }
            best
        };
        let seps: Vec<f64> = (0..s.n_steps).map(sep).collect();
        let min = seps.iter().cloned().fold(f64::INFINITY, f64::min);
        let argmins: Vec<usize> = (0..s.n_steps).filter(|&t| (seps[t] - min).abs() < 1e-9).collect();
        assert_eq!(argmins, vec![14, 15]);
    }

    #[test]
    fn frames_reproducible() {
        let s = Scenario::preset(ScenarioKind::Swarm);
        assert_eq!(generate_frame(&s, 7).unwrap(), generate_frame(&s, 7).unwrap());
        assert!(generate_frame(&s, 30).is_err());
    }

    #[test]
    fn truth_velocity_is_consistent() {
        for kind in [ScenarioKind::Crossing, ScenarioKind::Clutter] {
            let s = Scenario::preset(kind);
            let (a, b) = (s.truth(1, 3), s.truth(1, 4));
            assert!((b[0] - a[0] - a[2]).abs() < 1e-9 && (b[1] - a[1] - a[3]).abs() < 1e-9);
        }
    }
}
