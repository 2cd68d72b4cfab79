use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const STOCHASTIC_TOL: f64 = 1e-10;

/// Finite POMDP `(S, A, T, Ω, O, R, γ)` with dense tables.
///
/// Tables are stored flat: `T[a][s][s']`, `O[a][s'][o]`, `R[s][a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PomdpModel<T> {
    name: String,
    states: Vec<String>,
    actions: Vec<String>,
    observations: Vec<String>,
    transition: Vec<T>,
    observation: Vec<T>,
    reward: Vec<T>,
    discount: T,
}

/// On-disk form of a model (JSON). Nested tables are row-major:
/// `transition[a][s][s']`, `observation[a][s'][o]`, `reward[s][a]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub name: String,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub observations: Vec<String>,
    pub transition: Vec<Vec<Vec<f64>>>,
    pub observation: Vec<Vec<Vec<f64>>>,
    pub reward: Vec<Vec<f64>>,
    pub discount: f64,
}

impl<T: Scalar> PomdpModel<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        actions: Vec<String>,
        observations: Vec<String>,
        transition: Vec<T>,
        observation: Vec<T>,
        reward: Vec<T>,
        discount: T,
    ) -> Result<Self> {
        let model = Self {
            name: name.into(),
            states,
            actions,
            observations,
            transition,
            observation,
            reward,
            discount,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let (ns, na, no) = (self.n_states(), self.n_actions(), self.n_obs());
        if ns == 0 || na == 0 || no == 0 {
            return Err(Error::InvalidModel("empty state, action or observation set".into()));
        }
        let check_len = |what: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!("{what} table has {got} entries, expected {want}")))
            }
        };
        check_len("transition", self.transition.len(), na * ns * ns)?;
        check_len("observation", self.observation.len(), na * ns * no)?;
        check_len("reward", self.reward.len(), ns * na)?;
        if !(self.discount > T::zero() && self.discount <= T::one()) {
            return Err(Error::InvalidModel(format!("discount {} outside (0,1]", self.discount)));
        }
        let check_rows = |what: &str, table: &[T], width: usize| -> Result<()> {
            for (r, row) in table.chunks(width).enumerate() {
                if row.iter().any(|&p| p < T::zero() || !p.is_finite()) {
                    return Err(Error::InvalidModel(format!("{what} row {r} has a negative entry")));
                }
                let sum: T = row.iter().copied().sum();
                if (sum - T::one()).abs().to_f64_lossy() > STOCHASTIC_TOL.max(T::epsilon().to_f64_lossy() * 16.0) {
                    return Err(Error::InvalidModel(format!("{what} row {r} sums to {sum}")));
                }
            }
            Ok(())
        };
        check_rows("transition", &self.transition, ns)?;
        check_rows("observation", &self.observation, no)?;
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn n_states(&self) -> usize {
        self.states.len()
    }
    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }
    pub fn n_obs(&self) -> usize {
        self.observations.len()
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn actions(&self) -> &[String] {
        &self.actions
    }
    pub fn observations(&self) -> &[String] {
        &self.observations
    }
    pub fn discount(&self) -> T {
        self.discount
    }

    /// `T(s'|s,a)`.
    #[inline]
    pub fn transition(&self, a: usize, s: usize, s_next: usize) -> T {
        let n = self.n_states();
        self.transition[(a * n + s) * n + s_next]
    }

    /// Row `T(·|s,a)`.
    pub fn transition_row(&self, a: usize, s: usize) -> &[T] {
        let n = self.n_states();
        &self.transition[(a * n + s) * n..(a * n + s + 1) * n]
    }

    /// `O(o|s',a)`.
    #[inline]
    pub fn observation(&self, a: usize, s_next: usize, o: usize) -> T {
        self.observation[(a * self.n_states() + s_next) * self.n_obs() + o]
    }

    pub fn observation_row(&self, a: usize, s_next: usize) -> &[T] {
        let no = self.n_obs();
        let start = (a * self.n_states() + s_next) * no;
        &self.observation[start..start + no]
    }

    /// `R(s,a)`.
    #[inline]
    pub fn reward(&self, s: usize, a: usize) -> T {
        self.reward[s * self.n_actions() + a]
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    /// Copy with `shift` added to every reward.
    pub fn with_reward_shift(&self, shift: T) -> Self {
        let mut m = self.clone();
        for r in &mut m.reward {
            *r += shift;
        }
        m
    }

    pub fn from_file_repr(f: &ModelFile) -> Result<Self> {
        let conv = |x: f64| T::c(x);
        let transition = f.transition.iter().flatten().flatten().copied().map(conv).collect();
        let observation = f.observation.iter().flatten().flatten().copied().map(conv).collect();
        let reward = f.reward.iter().flatten().copied().map(conv).collect();
        Self::new(
            f.name.clone(),
            f.states.clone(),
            f.actions.clone(),
            f.observations.clone(),
            transition,
            observation,
            reward,
            conv(f.discount),
        )
    }

    pub fn to_file_repr(&self) -> ModelFile {
        let (ns, na) = (self.n_states(), self.n_actions());
        ModelFile {
            name: self.name.clone(),
            states: self.states.clone(),
            actions: self.actions.clone(),
            observations: self.observations.clone(),
            transition: (0..na)
                .map(|a| (0..ns).map(|s| self.transition_row(a, s).iter().map(|x| x.to_f64_lossy()).collect()).collect())
                .collect(),
            observation: (0..na)
                .map(|a| (0..ns).map(|s| self.observation_row(a, s).iter().map(|x| x.to_f64_lossy()).collect()).collect())
                .collect(),
            reward: (0..ns).map(|s| (0..na).map(|a| self.reward(s, a).to_f64_lossy()).collect()).collect(),
            discount: self.discount.to_f64_lossy(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file_repr(&f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_repr()).expect("model serialises")
    }
}

/// Listen accuracy of the standard two-door Tiger problem.
pub const TIGER_ACCURACY: f64 = 0.85;
pub const TIGER_DISCOUNT: f64 = 0.95;
pub const LISTEN_REWARD: f64 = -1.0;
pub const CORRECT_DOOR_REWARD: f64 = 10.0;
pub const WRONG_DOOR_REWARD: f64 = -100.0;

/// Action indices shared by the Tiger variants.
pub const LISTEN: usize = 0;
pub const OPEN_LEFT: usize = 1;
pub const OPEN_RIGHT: usize = 2;

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Door-problem family: listening leaves the state unchanged and reports
/// `hear-left` with probability `hear_left[s]`; opening a door resets the
/// tiger uniformly and yields an uninformative observation.
fn door_problem<T: Scalar>(name: &str, states: Vec<String>, hear_left: &[f64], tiger_is_left: &[bool]) -> Result<PomdpModel<T>> {
    let n = states.len();
    let uniform = 1.0 / n as f64;
    let mut transition = Vec::with_capacity(3 * n * n);
    let mut observation = Vec::with_capacity(3 * n * 2);
    for a in 0..3 {
        for s in 0..n {
            for s2 in 0..n {
                let p = if a == LISTEN {
                    if s == s2 { 1.0 } else { 0.0 }
                } else {
                    uniform
                };
                transition.push(T::c(p));
            }
        }
        for &hl in hear_left {
            let (l, r) = if a == LISTEN { (hl, 1.0 - hl) } else { (0.5, 0.5) };
            observation.push(T::c(l));
            observation.push(T::c(r));
        }
    }
    let mut reward = Vec::with_capacity(n * 3);
    for &left in tiger_is_left {
        reward.push(T::c(LISTEN_REWARD));
        // open-left is safe only when the tiger is behind the right door.
        reward.push(T::c(if left { WRONG_DOOR_REWARD } else { CORRECT_DOOR_REWARD }));
        reward.push(T::c(if left { CORRECT_DOOR_REWARD } else { WRONG_DOOR_REWARD }));
    }
    PomdpModel::new(
        name,
        states,
        strings(&["listen", "open-left", "open-right"]),
        strings(&["hear-left", "hear-right"]),
        transition,
        observation,
        reward,
        T::c(TIGER_DISCOUNT),
    )
}

/// Two-state Tiger with listen accuracy 0.85. State 0 is tiger-left.
pub fn tiger<T: Scalar>() -> PomdpModel<T> {
    tiger_with_accuracy(TIGER_ACCURACY).expect("valid tiger parameters")
}

pub fn tiger_with_accuracy<T: Scalar>(accuracy: f64) -> Result<PomdpModel<T>> {
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::InvalidModel(format!("accuracy {accuracy} outside [0,1]")));
    }
    door_problem(
        "tiger2",
        strings(&["tiger-left", "tiger-right"]),
        &[accuracy, 1.0 - accuracy],
        &[true, false],
    )
}

/// Four-position corridor Tiger. Positions 0,1 are the left half.
pub fn corridor_tiger<T: Scalar>() -> PomdpModel<T> {
    door_problem(
        "tiger4",
        strings(&["far-left", "near-left", "near-right", "far-right"]),
        &CORRIDOR_HEAR_LEFT,
        &[true, true, false, false],
    )
    .expect("valid corridor parameters")
}

pub const CORRIDOR_HEAR_LEFT: [f64; 4] = [0.85, 0.70, 0.30, 0.15];

pub const GRID_MOVE_SUCCESS: f64 = 0.9;
pub const GRID_SENSOR_ACCURACY: f64 = 0.7;

/// `w × h` navigation grid. Actions north/south/east/west/stay; a move
/// succeeds with probability 0.9 and otherwise (or into a wall) stays put.
/// The sensor reports the true cell with probability 0.7, else a uniformly
/// random other cell. Reward is +10 in the far corner `(w-1, h-1)`, -1 elsewhere.
pub fn grid<T: Scalar>(width: usize, height: usize) -> Result<PomdpModel<T>> {
    let n = width * height;
    if n < 2 {
        return Err(Error::InvalidModel("grid needs at least two cells".into()));
    }
    let moves: [(i64, i64); 5] = [(0, 1), (0, -1), (1, 0), (-1, 0), (0, 0)];
    let mut transition = vec![T::zero(); 5 * n * n];
    for (a, &(dx, dy)) in moves.iter().enumerate() {
        for s in 0..n {
            let (x, y) = ((s % width) as i64, (s / width) as i64);
            let (nx, ny) = (x + dx, y + dy);
            let dest = if (0..width as i64).contains(&nx) && (0..height as i64).contains(&ny) {
                (ny as usize) * width + nx as usize
            } else {
                s
            };
            let row = (a * n + s) * n;
            transition[row + dest] += T::c(GRID_MOVE_SUCCESS);
            transition[row + s] += T::c(1.0 - GRID_MOVE_SUCCESS);
        }
    }
    let other = (1.0 - GRID_SENSOR_ACCURACY) / (n - 1) as f64;
    let mut observation = Vec::with_capacity(5 * n * n);
    for _ in 0..5 {
        for s in 0..n {
            for o in 0..n {
                observation.push(T::c(if o == s { GRID_SENSOR_ACCURACY } else { other }));
            }
        }
    }
    let goal = n - 1;
    let reward = (0..n)
        .flat_map(|s| std::iter::repeat_n(T::c(if s == goal { 10.0 } else { -1.0 }), 5))
        .collect();
    let cells: Vec<String> = (0..n).map(|s| format!("cell-{}-{}", s % width, s / width)).collect();
    PomdpModel::new(
        format!("grid{width}x{height}"),
        cells.clone(),
        strings(&["north", "south", "east", "west", "stay"]),
        cells,
        transition,
        observation,
        reward,
        T::c(TIGER_DISCOUNT),
    )
}

/// Built-in model by name: `tiger2`, `tiger4`, or `gridWxH`.
pub fn builtin<T: Scalar>(name: &str) -> Result<PomdpModel<T>> {
    match name {
        "tiger2" | "tiger" => Ok(tiger()),
        "tiger4" | "corridor" => Ok(corridor_tiger()),
        g if g.starts_with("grid") => {
            let dims = &g[4..];
            let (w, h) = dims
                .split_once('x')
                .ok_or_else(|| Error::Parse(format!("bad grid spec {g}")))?;
            let w: usize = w.parse().map_err(|_| Error::Parse(format!("bad grid width in {g}")))?;
            let h: usize = h.parse().map_err(|_| Error::Parse(format!("bad grid height in {g}")))?;
            grid(w, h)
        }
        other => Err(Error::InvalidModel(format!("unknown model {other}"))),
    }
}

/// Probability vector over states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Belief<T>(Vec<T>);

impl<T: Scalar> Belief<T> {
    /// Accepts a vector that is non-negative and sums to one within 1e-9
    /// (renormalised exactly afterwards).
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("empty belief".into()));
        }
        if probs.iter().any(|&p| p < T::zero() || !p.is_finite()) {
            return Err(Error::InvalidArgument("belief has a negative or non-finite entry".into()));
        }
        let sum: T = probs.iter().copied().sum();
        let tol = 1e-9f64.max(T::epsilon().to_f64_lossy() * 64.0);
        if (sum - T::one()).abs().to_f64_lossy() > tol {
            return Err(Error::InvalidArgument(format!("belief sums to {sum}")));
        }
        Ok(Self(probs.into_iter().map(|p| p / sum).collect()))
    }

    /// Normalises an arbitrary non-negative weight vector.
    pub fn from_weights(weights: Vec<T>) -> Result<Self> {
        let sum: T = weights.iter().copied().sum();
        if sum <= T::zero() {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![T::one() / T::from_usize_lossy(n); n])
    }

    pub fn point(n: usize, s: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[s] = T::one();
        Self(v)
    }

    pub fn probs(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T> std::ops::Index<usize> for Belief<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_stochastic() {
        let _ = tiger::<f64>();
        let _ = corridor_tiger::<f64>();
        let g = grid::<f64>(4, 4).unwrap();
        assert_eq!((g.n_states(), g.n_actions(), g.n_obs()), (16, 5, 16));
        let successors = (0..16)
            .map(|s| (0..16).filter(|&s2| g.transition(0, s, s2) > 0.0).count())
            .max()
            .unwrap();
        assert!(successors <= 5);
        assert!(builtin::<f64>("grid8x8").is_ok());
        assert!(builtin::<f64>("nope").is_err());
    }

    #[test]
    fn tiger_rewards_follow_door_semantics() {
        let m = tiger::<f64>();
        assert_eq!(m.reward(0, OPEN_RIGHT), 10.0);
        assert_eq!(m.reward(0, OPEN_LEFT), -100.0);
        assert_eq!(m.reward(1, OPEN_LEFT), 10.0);
        assert_eq!(m.reward(1, LISTEN), -1.0);
    }

    #[test]
    fn rejects_bad_rows() {
        let err = PomdpModel::<f64>::new(
            "bad",
            strings(&["a", "b"]),
            strings(&["x"]),
            strings(&["o"]),
            vec![0.5, 0.6, 0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            0.9,
        );
        assert!(matches!(err, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = corridor_tiger::<f64>();
        let back = PomdpModel::<f64>::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn belief_validation() {
        assert!(Belief::new(vec![0.5f64, 0.6]).is_err());
        assert!(Belief::new(vec![-0.1f64, 1.1]).is_err());
        assert_eq!(Belief::<f64>::uniform(4).probs(), &[0.25; 4]);
    }
}
