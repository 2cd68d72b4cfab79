use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Prior over the amplitude `a = sin²θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Prior {
    /// Flat in `a`.
    Uniform,
    /// Normal in `a`, truncated to `[0,1]`.
    Gaussian { mean: f64, std: f64 },
}

impl Prior {
    pub fn is_uniform(&self) -> bool {
        matches!(self, Prior::Uniform)
    }
}

/// Highest-posterior-density interval on the `a` axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hpd {
    pub lo: f64,
    pub hi: f64,
    /// The density level set holding the requested mass is not one interval;
    /// `lo..hi` then bounds all of its pieces.
    pub multimodal: bool,
}

impl Hpd {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, a: f64) -> bool {
        self.lo <= a && a <= self.hi
    }
}

/// Grid posterior over `θ ∈ (0, π/2)`, cell-centred, kept in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudePosterior<T> {
    theta: Vec<T>,
    log_w: Vec<T>,
    prior: Prior,
}

pub const DEFAULT_GRID_POINTS: usize = 2048;

impl<T: Scalar> AmplitudePosterior<T> {
    pub fn new(points: usize, prior: Prior) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidArgument("grid needs at least two points".into()));
        }
        if let Prior::Gaussian { mean, std } = prior {
            if !(std > 0.0) || !mean.is_finite() {
                return Err(Error::InvalidArgument(format!("bad gaussian prior mean={mean} std={std}")));
            }
        }
        let h = T::FRAC_PI_2() / T::from_usize_lossy(points);
        let half = T::c(0.5);
        let theta: Vec<T> = (0..points).map(|i| (T::from_usize_lossy(i) + half) * h).collect();
        // Weights are mass per cell: density in `a` times |da/dθ| = sin 2θ.
        let log_w = theta
            .iter()
            .map(|&t| {
                let jac = (T::c(2.0) * t).sin().ln();
                match prior {
                    Prior::Uniform => jac,
                    Prior::Gaussian { mean, std } => {
                        let z = (t.sin().powi(2) - T::c(mean)) / T::c(std);
                        jac - half * z * z
                    }
                }
            })
            .collect();
        let mut post = Self { theta, log_w, prior };
        post.normalise()?;
        Ok(post)
    }

    pub fn prior(&self) -> Prior {
        self.prior
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    fn step(&self) -> T {
        T::FRAC_PI_2() / T::from_usize_lossy(self.len())
    }

    fn normalise(&mut self) -> Result<()> {
        let max = self.log_w.iter().copied().fold(T::neg_infinity(), T::max);
        if !max.is_finite() {
            return Err(Error::PosteriorUnderflow);
        }
        let total: T = self.log_w.iter().map(|&l| (l - max).exp()).sum();
        let shift = max + total.ln();
        for l in &mut self.log_w {
            *l -= shift;
        }
        Ok(())
    }

    /// Multiplies by the binomial likelihood of `m` successes in `n` shots at
    /// success probability `sin²((2k+1)θ)`.
    pub fn update(&mut self, k: usize, m: u64, n: u64) -> Result<()> {
        if m > n {
            return Err(Error::InvalidArgument(format!("{m} successes out of {n} shots")));
        }
        let kk = T::from_usize_lossy(2 * k + 1);
        let (mf, nf) = (T::c(m as f64), T::c((n - m) as f64));
        for (l, &t) in self.log_w.iter_mut().zip(&self.theta) {
            let p = (kk * t).sin().powi(2);
            if m > 0 {
                *l += mf * p.ln();
            }
            if n > m {
                *l += nf * (-p).ln_1p();
            }
        }
        self.normalise()
    }

    /// Cell masses, summing to one.
    pub fn weights(&self) -> Vec<T> {
        self.log_w.iter().map(|l| l.exp()).collect()
    }

    pub fn a_values(&self) -> Vec<T> {
        self.theta.iter().map(|t| t.sin().powi(2)).collect()
    }

    pub fn mean_a(&self) -> T {
        self.log_w.iter().zip(&self.theta).map(|(l, t)| l.exp() * t.sin().powi(2)).sum()
    }

    pub fn map_a(&self) -> T {
        let (i, _) = self
            .log_w
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, &l)| if l > best.1 { (i, l) } else { best });
        self.theta[i].sin().powi(2)
    }

    /// Cell edges on the `a` axis: cell `i` spans `edges[i]..edges[i+1]`.
    fn a_edges(&self) -> Vec<f64> {
        let h = self.step().to_f64_lossy();
        (0..=self.len()).map(|i| (i as f64 * h).sin().powi(2)).collect()
    }

    /// Smallest interval on the `a` axis holding at least `mass`.
    pub fn hpd(&self, mass: f64) -> Result<Hpd> {
        if !(mass > 0.0 && mass < 1.0) {
            return Err(Error::InvalidArgument(format!("credible mass {mass} outside (0,1)")));
        }
        let w: Vec<f64> = self.weights().iter().map(|x| x.to_f64_lossy()).collect();
        let edges = self.a_edges();
        let n = w.len();
        let target = mass * w.iter().sum::<f64>();

        // Level set of the density in `a` that first reaches the mass.
        let dens: Vec<f64> = (0..n).map(|i| w[i] / (edges[i + 1] - edges[i]).max(f64::MIN_POSITIVE)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| dens[j].total_cmp(&dens[i]).then(i.cmp(&j)));
        let mut acc = 0.0;
        let mut level = 0.0;
        for &i in &order {
            acc += w[i];
            level = dens[i];
            if acc >= target {
                break;
            }
        }
        let cut = level * (1.0 - 1e-9);
        let in_set: Vec<bool> = dens.iter().map(|&d| d >= cut).collect();
        let first = in_set.iter().position(|&b| b).unwrap_or(0);
        let last = in_set.iter().rposition(|&b| b).unwrap_or(n - 1);
        let multimodal = in_set[first..=last].iter().any(|&b| !b);
        if multimodal {
            return Ok(Hpd { lo: edges[first], hi: edges[last + 1], multimodal });
        }

        // Shortest contiguous window with enough mass.
        let (mut best_lo, mut best_hi) = (0usize, n - 1);
        let mut best_width = f64::INFINITY;
        let mut lo = 0;
        let mut window = 0.0;
        for hi in 0..n {
            window += w[hi];
            while lo < hi && window - w[lo] >= target {
                window -= w[lo];
                lo += 1;
            }
            if window >= target {
                let width = edges[hi + 1] - edges[lo];
                if width < best_width {
                    best_width = width;
                    best_lo = lo;
                    best_hi = hi;
                }
            }
        }
        Ok(Hpd { lo: edges[best_lo], hi: edges[best_hi + 1], multimodal: false })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_prior_is_flat_in_a() {
        let p = AmplitudePosterior::<f64>::new(4096, Prior::Uniform).unwrap();
        assert_abs_diff_eq!(p.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(p.mean_a(), 0.5, epsilon = 1e-6);
        let hpd = p.hpd(0.95).unwrap();
        assert_abs_diff_eq!(hpd.width(), 0.95, epsilon = 5e-3);
    }

    #[test]
    fn all_successes_push_mass_up() {
        let mut p = AmplitudePosterior::<f64>::new(512, Prior::Uniform).unwrap();
        p.update(0, 20, 20).unwrap();
        let w = p.weights();
        let dens: Vec<f64> = {
            let a = p.a_edges();
            (0..w.len()).map(|i| w[i] / (a[i + 1] - a[i])).collect()
        };
        assert!(dens.windows(2).all(|d| d[1] >= d[0]));
    }

    #[test]
    fn coin_estimate() {
        let mut p = AmplitudePosterior::<f64>::new(2048, Prior::Uniform).unwrap();
        p.update(0, 5000, 10000).unwrap();
        assert_abs_diff_eq!(p.mean_a(), 0.5, epsilon = 0.02);
        assert_abs_diff_eq!(p.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn concentrated_density() {
        let mut p = AmplitudePosterior::<f64>::new(2048, Prior::Uniform).unwrap();
        // Pin near a=0.3 with an enormous k=0 batch.
        p.update(0, 3_000_000, 10_000_000).unwrap();
        let hpd = p.hpd(0.95).unwrap();
        let step = (std::f64::consts::FRAC_PI_2 / 2048.0) * (2.0 * 0.3f64.sqrt().asin()).sin();
        assert!(hpd.contains(0.3));
        assert!(hpd.width() < 2.0 * step + 1e-12, "{hpd:?}");
    }

    #[test]
    fn bimodal_is_flagged() {
        let mut p = AmplitudePosterior::<f64>::new(2048, Prior::Uniform).unwrap();
        // k=1 only: θ and π/3-θ style aliases give two separated modes.
        p.update(1, 150, 300).unwrap();
        p.update(1, 150, 300).unwrap();
        let hpd = p.hpd(0.95).unwrap();
        assert!(hpd.multimodal);
    }

    #[test]
    fn rejects_bad_input() {
        let mut p = AmplitudePosterior::<f64>::new(64, Prior::Uniform).unwrap();
        assert!(p.update(0, 5, 4).is_err());
        assert!(p.hpd(1.0).is_err());
        assert!(AmplitudePosterior::<f64>::new(64, Prior::Gaussian { mean: 0.1, std: 0.0 }).is_err());
    }

    #[test]
    fn single_precision_grid() {
        let mut p = AmplitudePosterior::<f32>::new(1024, Prior::Uniform).unwrap();
        p.update(0, 300, 1000).unwrap();
        assert!((p.mean_a() - 0.3).abs() < 0.03);
    }
}
