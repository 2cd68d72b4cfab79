use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::cost::{Assignment, CostMatrix};

/// Penalty weight as a multiple of the largest gated `|c_ij|`.
pub const DEFAULT_LAMBDA_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    /// Track `i` takes measurement `j`.
    Assign(usize, usize),
    /// Track `i` is missed.
    Miss(usize),
    /// Measurement `j` is a false alarm.
    FalseAlarm(usize),
}

/// `E(y) = yᵀQy + offset` with `Q` upper triangular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboInstance {
    n_var: usize,
    /// Dense row-major `n×n`; only `i ≤ j` entries are used.
    q: Vec<f64>,
    pub offset: f64,
    vars: Vec<Variable>,
    n_tracks: usize,
    n_meas: usize,
    pub lambda: f64,
}

/// `NM + N + M`.
pub fn n_var_formula(n: usize, m: usize) -> usize {
    n * m + n + m
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Diagonal plus row/column pair couplings: `n_var + 2N·C(M,2) + 2M·C(N,2)`.
pub fn pair_nonzero_formula(n: usize, m: usize) -> usize {
    n_var_formula(n, m) + 2 * n * choose2(m) + 2 * m * choose2(n)
}

/// [`pair_nonzero_formula`] plus `2NM` slack-cross couplings.
pub fn nonzero_formula_with_slack(n: usize, m: usize) -> usize {
    pair_nonzero_formula(n, m) + 2 * n * m
}

impl QuboInstance {
    /// Bare instance over `n` anonymous variables.
    pub fn from_dense(n: usize, q: Vec<f64>, offset: f64) -> Result<Self> {
        if q.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: q.len() });
        }
        let mut upper = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                upper[a * n + b] += q[i * n + j];
            }
        }
        Ok(Self {
            n_var: n,
            q: upper,
            offset,
            vars: (0..n).map(Variable::Miss).collect(),
            n_tracks: 0,
            n_meas: 0,
            lambda: 0.0,
        })
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn n_tracks(&self) -> usize {
        self.n_tracks
    }

    pub fn n_meas(&self) -> usize {
        self.n_meas
    }

    /// Upper-triangular entry (`i ≤ j` after swapping).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.q[a * self.n_var + b]
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.q[a * self.n_var + b] += v;
    }

    /// Nonzero upper-triangular entries `(i, j, Q_ij)` with `i ≤ j`.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n_var;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let v = self.q[i * n + j];
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    /// Structurally nonzero upper-triangle entries including the diagonal.
    pub fn nonzero_count(&self) -> usize {
        self.q.iter().filter(|&&v| v != 0.0).count()
    }

    /// Symmetric dense copy (off-diagonal split in half).
    pub fn symmetric(&self) -> Vec<f64> {
        let n = self.n_var;
        let mut s = vec![0.0; n * n];
        for i in 0..n {
            s[i * n + i] = self.q[i * n + i];
            for j in i + 1..n {
                let v = 0.5 * self.q[i * n + j];
                s[i * n + j] = v;
                s[j * n + i] = v;
            }
        }
        s
    }

    pub fn energy(&self, y: &[u8]) -> Result<f64> {
        if y.len() != self.n_var {
            return Err(Error::LengthMismatch { expected: self.n_var, got: y.len() });
        }
        let n = self.n_var;
        let mut e = self.offset;
        for i in 0..n {
            if y[i] == 0 {
                continue;
            }
            let row = &self.q[i * n..(i + 1) * n];
            e += row[i];
            for j in i + 1..n {
                if y[j] != 0 {
                    e += row[j];
                }
            }
        }
        Ok(e)
    }

    /// Energy of the assignment encoded in the low `n_var` bits of `index`
    /// (variable `k` ↔ bit `k`).
    pub fn energy_of_index(&self, index: u64) -> f64 {
        let n = self.n_var;
        let mut e = self.offset;
        for i in 0..n {
            if (index >> i) & 1 == 0 {
                continue;
            }
            let row = &self.q[i * n..(i + 1) * n];
            e += row[i];
            for j in i + 1..n {
                if (index >> j) & 1 == 1 {
                    e += row[j];
                }
            }
        }
        e
    }

    pub fn bits_of_index(&self, index: u64) -> Vec<u8> {
        (0..self.n_var).map(|k| ((index >> k) & 1) as u8).collect()
    }

    /// Row/column constraint residuals `(Σ_j x_ij + m_i − 1, Σ_i x_ij + f_j − 1)`.
    pub fn residuals(&self, y: &[u8]) -> (Vec<i64>, Vec<i64>) {
        let mut rows = vec![-1i64; self.n_tracks];
        let mut cols = vec![-1i64; self.n_meas];
        for (v, &b) in self.vars.iter().zip(y) {
            if b == 0 {
                continue;
            }
            match *v {
                Variable::Assign(i, j) => {
                    rows[i] += 1;
                    cols[j] += 1;
                }
                Variable::Miss(i) => rows[i] += 1,
                Variable::FalseAlarm(j) => cols[j] += 1,
            }
        }
        (rows, cols)
    }

    pub fn is_feasible(&self, y: &[u8]) -> bool {
        let (r, c) = self.residuals(y);
        r.iter().chain(&c).all(|&x| x == 0)
    }

    /// Converts a feasible bit vector into an assignment.
    pub fn decode(&self, y: &[u8], cost: &CostMatrix) -> Result<Assignment> {
        if !self.is_feasible(y) {
            return Err(Error::InvalidArgument("bit vector violates the association constraints".into()));
        }
        let pairs = self
            .vars
            .iter()
            .zip(y)
            .filter_map(|(v, &b)| match *v {
                Variable::Assign(i, j) if b == 1 => Some((i, j)),
                _ => None,
            })
            .collect();
        Assignment::from_pairs(cost, pairs)
    }

    /// Bit vector of an assignment.
    pub fn encode(&self, a: &Assignment) -> Vec<u8> {
        self.vars
            .iter()
            .map(|v| match *v {
                Variable::Assign(i, j) => a.pairs.contains(&(i, j)) as u8,
                Variable::Miss(i) => a.missed.contains(&i) as u8,
                Variable::FalseAlarm(j) => a.false_alarms.contains(&j) as u8,
            })
            .collect()
    }
}

/// Association objective plus `λ` times the squared row/column residuals,
/// evaluated term by term.
pub fn direct_energy(qubo: &QuboInstance, cost: &CostMatrix, y: &[u8]) -> Result<f64> {
    if y.len() != qubo.n_var() {
        return Err(Error::LengthMismatch { expected: qubo.n_var(), got: y.len() });
    }
    let mut e = 0.0;
    for (v, &b) in qubo.vars.iter().zip(y) {
        if b == 1 {
            e += match *v {
                Variable::Assign(i, j) => cost.get(i, j).expect("only gated pairs are variables"),
                Variable::Miss(_) => cost.c_miss,
                Variable::FalseAlarm(_) => cost.c_fa,
            };
        }
    }
    let (r, c) = qubo.residuals(y);
    let pen: i64 = r.iter().chain(&c).map(|x| x * x).sum();
    Ok(e + qubo.lambda * pen as f64)
}

/// Objective part only (no penalties).
pub fn objective_part(qubo: &QuboInstance, cost: &CostMatrix, y: &[u8]) -> f64 {
    let mut e = 0.0;
    for (v, &b) in qubo.vars.iter().zip(y) {
        if b == 1 {
            e += match *v {
                Variable::Assign(i, j) => cost.get(i, j).unwrap_or(0.0),
                Variable::Miss(_) => cost.c_miss,
                Variable::FalseAlarm(_) => cost.c_fa,
            };
        }
    }
    e
}

/// Default penalty: `1.5·max|c_ij|` over gated pairs, falling back to the
/// miss/false-alarm scale when nothing is gated in.
pub fn default_lambda(cost: &CostMatrix) -> f64 {
    let m = cost.max_abs_cost();
    let scale = if m > 0.0 { m } else { cost.c_miss.abs().max(cost.c_fa.abs()).max(1.0) };
    DEFAULT_LAMBDA_FACTOR * scale
}

/// Variables are ordered `x_ij` (gated pairs, row-major), then `m_i`, then `f_j`.
pub fn build_qubo(cost: &CostMatrix, lambda: Option<f64>) -> Result<QuboInstance> {
    let lambda = lambda.unwrap_or_else(|| default_lambda(cost));
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("penalty weight {lambda} must be finite and non-negative")));
    }
    let (n, m) = (cost.n_tracks(), cost.n_meas());
    let mut vars: Vec<Variable> = cost.gated_pairs().map(|(i, j, _)| Variable::Assign(i, j)).collect();
    vars.extend((0..n).map(Variable::Miss));
    vars.extend((0..m).map(Variable::FalseAlarm));
    let nv = vars.len();
    let mut qubo = QuboInstance { n_var: nv, q: vec![0.0; nv * nv], offset: 0.0, vars, n_tracks: n, n_meas: m, lambda };

    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, v) in qubo.vars.clone().into_iter().enumerate() {
        let c = match v {
            Variable::Assign(i, j) => {
                rows[i].push(k);
                cols[j].push(k);
                cost.get(i, j).expect("gated pair")
            }
            Variable::Miss(i) => {
                rows[i].push(k);
                cost.c_miss
            }
            Variable::FalseAlarm(j) => {
                cols[j].push(k);
                cost.c_fa
            }
        };
        qubo.add(k, k, c);
    }
    // λ(Σv − 1)² = λ(−Σv + 2Σ_{a<b} v_a v_b + 1) for binary v.
    for group in rows.iter().chain(&cols) {
        for (a, &u) in group.iter().enumerate() {
            qubo.add(u, u, -lambda);
            for &w in &group[a + 1..] {
                qubo.add(u, w, 2.0 * lambda);
            }
        }
        qubo.offset += lambda;
    }
    Ok(qubo)
}

/// `E(z) = Σ h_i z_i + Σ_{i<j} J_ij z_i z_j + offset`, spins `z = 1 − 2x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingInstance {
    pub h: Vec<f64>,
    /// Couplings `(i, j, J_ij)` with `i < j`.
    pub j: Vec<(usize, usize, f64)>,
    pub offset: f64,
}

impl IsingInstance {
    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn zero(n: usize) -> Self {
        Self { h: vec![0.0; n], j: Vec::new(), offset: 0.0 }
    }

    pub fn energy(&self, z: &[i8]) -> Result<f64> {
        if z.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: z.len() });
        }
        let mut e = self.offset;
        for (h, &s) in self.h.iter().zip(z) {
            e += h * s as f64;
        }
        for &(a, b, j) in &self.j {
            e += j * (z[a] * z[b]) as f64;
        }
        Ok(e)
    }

    /// Energy of basis index `index`; bit 1 ↔ spin −1.
    pub fn energy_of_index(&self, index: u64) -> f64 {
        let spin = |k: usize| if (index >> k) & 1 == 1 { -1.0 } else { 1.0 };
        let mut e = self.offset;
        for (k, h) in self.h.iter().enumerate() {
            e += h * spin(k);
        }
        for &(a, b, j) in &self.j {
            e += j * spin(a) * spin(b);
        }
        e
    }

    /// Energies of all `2^n` basis states.
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![self.offset; 1usize << n];
        for (idx, e) in out.iter_mut().enumerate() {
            let spin = |k: usize| if (idx >> k) & 1 == 1 { -1.0 } else { 1.0 };
            for (k, h) in self.h.iter().enumerate() {
                *e += h * spin(k);
            }
            for &(a, b, j) in &self.j {
                *e += j * spin(a) * spin(b);
            }
        }
        out
    }

    /// Largest absolute field or coupling.
    pub fn max_coefficient(&self) -> f64 {
        self.h.iter().map(|h| h.abs()).chain(self.j.iter().map(|c| c.2.abs())).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            h: self.h.iter().map(|h| h * factor).collect(),
            j: self.j.iter().map(|&(a, b, j)| (a, b, j * factor)).collect(),
            offset: self.offset * factor,
        }
    }
}

/// Substitutes `x = (1 − z)/2`; energies are preserved exactly.
pub fn to_ising(q: &QuboInstance) -> IsingInstance {
    let n = q.n_var();
    let mut h = vec![0.0; n];
    let mut j = Vec::new();
    let mut offset = q.offset;
    for a in 0..n {
        let d = q.get(a, a);
        h[a] -= d / 2.0;
        offset += d / 2.0;
        for b in a + 1..n {
            let v = q.get(a, b);
            if v != 0.0 {
                h[a] -= v / 4.0;
                h[b] -= v / 4.0;
                offset += v / 4.0;
                j.push((a, b, v / 4.0));
            }
        }
    }
    IsingInstance { h, j, offset }
}
