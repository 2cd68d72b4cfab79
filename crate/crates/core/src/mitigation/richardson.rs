use crate::error::{Error, Result};

/// Least-squares polynomial of degree `order` through `(λ, value)` points,
/// evaluated at λ = 0. With as many points as coefficients this is exact
/// Richardson extrapolation.
pub fn richardson_extrapolate(points: &[(f64, f64)], order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::InvalidArgument("extrapolation order must be at least 1".into()));
    }
    for (i, a) in points.iter().enumerate() {
        if !a.0.is_finite() || !a.1.is_finite() {
            return Err(Error::InvalidArgument("non-finite extrapolation point".into()));
        }
        if points[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::InvalidArgument(format!("duplicate scale factor {}", a.0)));
        }
    }
    if points.len() <= order {
        return Err(Error::InvalidArgument(format!(
            "order {order} needs more than {order} distinct scale factors, got {}",
            points.len()
        )));
    }
    // Normal equations on centred abscissae keep the system well conditioned.
    let n = order + 1;
    let mean = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mut a = vec![vec![0.0; n + 1]; n];
    for &(x, y) in points {
        let u = x - mean;
        let pow: Vec<f64> = (0..n).map(|k| u.powi(k as i32)).collect();
        for r in 0..n {
            for c in 0..n {
                a[r][c] += pow[r] * pow[c];
            }
            a[r][n] += pow[r] * y;
        }
    }
    let coeffs = gauss_solve(a)?;
    let u0 = -mean;
    Ok(coeffs.iter().rev().fold(0.0, |acc, c| acc * u0 + c))
}

pub fn linear_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    richardson_extrapolate(points, 1)
}

/// Solves an augmented `n × (n+1)` system by partial-pivot elimination.
pub(crate) fn gauss_solve(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    let scale = a.iter().flat_map(|r| r[..n].iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[piv][col].abs() <= 1e-13 * scale {
            return Err(Error::Singular);
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear() {
        let v = richardson_extrapolate(&[(1.0, 0.9), (3.0, 0.7), (5.0, 0.5)], 1).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn constant_data() {
        let v = richardson_extrapolate(&[(1.0, 0.42), (3.0, 0.42), (5.0, 0.42)], 2).unwrap();
        assert!((v - 0.42).abs() < 1e-12);
    }

    #[test]
    fn quadratic_exact_at_order_two() {
        let f = |x: f64| 1.0 - 0.1 * x + 0.01 * x * x;
        let pts: Vec<_> = [1.0, 3.0, 5.0].iter().map(|&x| (x, f(x))).collect();
        assert!((richardson_extrapolate(&pts, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(richardson_extrapolate(&[(1.0, 0.9), (1.0, 0.8)], 1).is_err());
        assert!(richardson_extrapolate(&[(1.0, 0.9), (3.0, 0.8)], 2).is_err());
        assert!(richardson_extrapolate(&[(1.0, 0.9)], 1).is_err());
    }
}
