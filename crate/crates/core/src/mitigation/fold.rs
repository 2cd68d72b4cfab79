use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::Circuit;

/// Global unitary folding: every gate `G` becomes `G (G† G)^((λ−1)/2)`, so
/// the gate count (and the noise seen by the trajectory sampler) scales by λ.
pub fn fold<T: Scalar>(circuit: &Circuit<T>, scale: usize) -> Result<Circuit<T>> {
    if scale == 0 || scale % 2 == 0 {
        return Err(Error::InvalidArgument(format!("fold scale must be odd and positive, got {scale}")));
    }
    let reps = (scale - 1) / 2;
    let mut gates = Vec::with_capacity(circuit.len() * scale);
    for g in circuit.gates() {
        gates.push(g.clone());
        let inv = g.inverse();
        for _ in 0..reps {
            gates.push(inv.clone());
            gates.push(g.clone());
        }
    }
    Circuit::from_gates(circuit.n_qubits(), gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Gate;

    #[test]
    fn scale_one_is_identity() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::Cz(0, 1), Gate::ry(1, 0.3)]).unwrap();
        assert_eq!(fold(&c, 1).unwrap(), c);
    }

    #[test]
    fn even_scale_rejected() {
        let c = Circuit::<f64>::new(1);
        assert!(fold(&c, 2).is_err());
        assert!(fold(&c, 0).is_err());
    }

    #[test]
    fn ry_three_fold() {
        let c = Circuit::from_gates(1, vec![Gate::ry(0, 0.7)]).unwrap();
        let f = fold(&c, 3).unwrap();
        assert_eq!(f.gates(), &[Gate::ry(0, 0.7), Gate::ry(0, -0.7), Gate::ry(0, 0.7)]);
        assert!(f.simulate().max_abs_diff(&c.simulate()) < 1e-12);
    }

    #[test]
    fn bell_five_fold_is_correlated() {
        let c = Circuit::from_gates(2, vec![Gate::H(0), Gate::H(1), Gate::Cz(0, 1), Gate::H(1)]).unwrap();
        let f: Circuit<f64> = fold(&c, 5).unwrap();
        assert_eq!(f.len(), 20);
        assert!((f.simulate().parity_expectation(&[0, 1]) - 1.0).abs() < 1e-12);
    }
}
