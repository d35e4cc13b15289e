use alloc::format;
use alloc::vec::Vec;

use super::statevector::{rx, ry, rz, Statevector};
use crate::error::{Error, Result};

/// Single-qubit rotation used in every layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RotationScheme {
    /// Arbitrary rotation `R_z(θ1) R_x(θ2) R_z(θ3)`; the leading `R_z(θ3)`
    /// of the first layer acts on `|0⟩` and is omitted.
    Zxz,
    /// Real-restricted `R_y(θ)`; keeps every amplitude real.
    Y,
}

impl RotationScheme {
    /// Parameters per qubit in layer 0 and in each later layer.
    fn per_qubit(self) -> (usize, usize) {
        match self {
            RotationScheme::Zxz => (2, 3),
            RotationScheme::Y => (1, 1),
        }
    }
}

/// Hardware-efficient circuit: a rotation layer, then `depth` blocks of
/// (CNOT entanglers in list order, rotation layer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub qubits: usize,
    pub depth: usize,
    pub scheme: RotationScheme,
    /// Directed `(control, target)` pairs, 0-based.
    pub entangler: Vec<(usize, usize)>,
}

impl AnsatzSpec {
    pub fn new(
        qubits: usize,
        depth: usize,
        scheme: RotationScheme,
        entangler: Vec<(usize, usize)>,
    ) -> Result<Self> {
        for &(c, t) in &entangler {
            if c >= qubits || t >= qubits || c == t {
                return Err(Error::Size(format!(
                    "entangler pair ({c}, {t}) is invalid on {qubits} qubits"
                )));
            }
        }
        Ok(Self {
            qubits,
            depth,
            scheme,
            entangler,
        })
    }

    /// Linear chain `0→1, 1→2, …`, control on the lower index.
    pub fn linear(qubits: usize, depth: usize, scheme: RotationScheme) -> Self {
        Self {
            qubits,
            depth,
            scheme,
            entangler: linear_chain(qubits),
        }
    }

    /// `(d+1)·Q` for the Y scheme, `(3d+2)·Q` for ZXZ.
    pub fn parameter_count(&self) -> usize {
        parameter_count(self)
    }
}

pub fn linear_chain(qubits: usize) -> Vec<(usize, usize)> {
    (1..qubits).map(|q| (q - 1, q)).collect()
}

pub fn parameter_count(spec: &AnsatzSpec) -> usize {
    let (first, later) = spec.scheme.per_qubit();
    (first + later * spec.depth) * spec.qubits
}

/// Runs the circuit on `|0…0⟩`.
///
/// Parameters are laid out layer by layer, qubit by qubit. Within a ZXZ
/// layer a qubit's angles are `[θ1, θ2, θ3]` for `R_z(θ1) R_x(θ2) R_z(θ3)`
/// (layer 0: `[θ1, θ2]`).
pub fn prepare_state(spec: &AnsatzSpec, theta: &[f64]) -> Result<Statevector> {
    let expected = parameter_count(spec);
    if theta.len() != expected {
        return Err(Error::Arity {
            expected,
            got: theta.len(),
        });
    }
    let mut state = Statevector::zero(spec.qubits);
    let mut params = theta.iter().copied();
    let mut next = || params.next().expect("length checked");
    for layer in 0..=spec.depth {
        if layer > 0 {
            for &(c, t) in &spec.entangler {
                state.apply_cnot(c, t);
            }
        }
        for q in 0..spec.qubits {
            match spec.scheme {
                RotationScheme::Y => state.apply_gate(q, &ry(next())),
                RotationScheme::Zxz => {
                    let t1 = next();
                    let t2 = next();
                    if layer > 0 {
                        state.apply_gate(q, &rz(next()));
                    }
                    state.apply_gate(q, &rx(t2));
                    state.apply_gate(q, &rz(t1));
                }
            }
        }
    }
    Ok(state)
}
