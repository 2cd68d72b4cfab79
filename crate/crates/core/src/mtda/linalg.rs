//! Fixed-size matrix helpers for the 2-D constant-velocity filter.

pub type Vec2 = [f64; 2];
pub type Vec4 = [f64; 4];
pub type Mat2 = [[f64; 2]; 2];
pub type Mat4 = [[f64; 4]; 4];
pub type Mat24 = [[f64; 4]; 2];

pub fn identity4() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose4(a: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn add4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mul4v(a: &Mat4, x: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|k| a[i][k] * x[k]).sum();
    }
    out
}

pub fn symmetrize4(a: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..i {
            let v = 0.5 * (a[i][j] + a[j][i]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Cholesky factorisation of a symmetric `n×n` row-major matrix; `None` if
/// not positive definite.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

pub fn is_spd4(a: &Mat4) -> bool {
    let symmetric = (0..4).all(|i| (0..i).all(|j| (a[i][j] - a[j][i]).abs() <= 1e-9 * (1.0 + a[i][j].abs())));
    symmetric && cholesky(&a.concat(), 4).is_some()
}

pub fn is_spd2(a: &Mat2) -> bool {
    (a[0][1] - a[1][0]).abs() <= 1e-9 * (1.0 + a[0][1].abs()) && a[0][0] > 0.0 && det2(a) > 0.0
}

pub fn det2(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn inv2(a: &Mat2) -> Option<Mat2> {
    let d = det2(a);
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if !d.is_finite() || d.abs() <= 1e-300 || d.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
}

/// `H P Hᵀ` for `H` 2×4.
pub fn hpht(h: &Mat24, p: &Mat4) -> Mat2 {
    let mut hp = [[0.0; 4]; 2];
    for i in 0..2 {
        for j in 0..4 {
            hp[i][j] = (0..4).map(|k| h[i][k] * p[k][j]).sum();
        }
    }
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (0..4).map(|k| hp[i][k] * h[j][k]).sum();
        }
    }
    out
}

pub fn h_times(h: &Mat24, x: &Vec4) -> Vec2 {
    [(0..4).map(|k| h[0][k] * x[k]).sum(), (0..4).map(|k| h[1][k] * x[k]).sum()]
}

/// `νᵀ A ν`.
pub fn quad2(a: &Mat2, v: &Vec2) -> f64 {
    v[0] * (a[0][0] * v[0] + a[0][1] * v[1]) + v[1] * (a[1][0] * v[0] + a[1][1] * v[1])
}
