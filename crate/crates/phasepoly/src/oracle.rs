//! Dense statevector simulator.
//!
//! Ground truth for every equivalence check: gates act by explicit
//! matrix multiplication on a length-2^n state, with qubit 0 as the
//! least significant bit of the state index. This module deliberately
//! shares no phase bookkeeping or indexing code with the compiler and
//! transform paths, so agreement between the two is evidence rather
//! than tautology.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, GateInstance, GateKind};

/// Largest state the simulator will build.
pub const STATE_QUBIT_CAP: usize = 12;

/// Largest full unitary [`circuit_unitary`] will assemble.
pub const UNITARY_QUBIT_CAP: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const NEG_ONE: Complex64 = Complex64::new(-1.0, 0.0);
const NEG_I: Complex64 = Complex64::new(0.0, -1.0);
const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;
const H_POS: Complex64 = Complex64::new(SQRT_HALF, 0.0);
const H_NEG: Complex64 = Complex64::new(-SQRT_HALF, 0.0);
/// exp(i pi / 4)
const OCTANT: Complex64 = Complex64::new(SQRT_HALF, SQRT_HALF);
/// exp(-i pi / 4)
const OCTANT_CONJ: Complex64 = Complex64::new(SQRT_HALF, -SQRT_HALF);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{requested} qubits exceed the {cap}-qubit simulator cap")]
    QubitCap { requested: usize, cap: usize },
    #[error("input has {found} bits, circuit has {expected} qubits")]
    InputLength { expected: usize, found: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

#[derive(Clone, Debug)]
pub struct StateVector {
    qubits: usize,
    values: Vec<Complex64>,
}

impl StateVector {
    /// Basis state |x>, qubit 0 = least significant index bit.
    pub fn basis(qubits: usize, bits: &[bool]) -> StateVector {
        let mut values = vec![ZERO; 1 << qubits];
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
        values[index] = ONE;
        StateVector { qubits, values }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &[Complex64]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Row-major complex square matrix of dimension 2^k.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn from_rows(rows: &[&[Complex64]]) -> UnitaryMatrix {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix must be square");
            data.extend_from_slice(row);
        }
        UnitaryMatrix { dim, data }
    }

    pub fn identity(dim: usize) -> UnitaryMatrix {
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            data[r * dim + r] = ONE;
        }
        UnitaryMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn scaled(&self, factor: Complex64) -> UnitaryMatrix {
        UnitaryMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |(U U†)_{rc} - I_{rc}|
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = ZERO;
                for k in 0..self.dim {
                    acc += self.entry(r, k) * self.entry(c, k).conj();
                }
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((acc - target).norm());
            }
        }
        worst
    }
}

/// The defining matrix of each gate kind. Operand order maps to matrix
/// indices with the first operand as the most significant bit, so
/// `cnot`'s control is the high bit of the 4x4 basis.
pub fn gate_matrix(kind: GateKind) -> UnitaryMatrix {
    match kind {
        GateKind::X => UnitaryMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
        GateKind::Y => UnitaryMatrix::from_rows(&[&[ZERO, NEG_I], &[I, ZERO]]),
        GateKind::Z => UnitaryMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, NEG_ONE]]),
        GateKind::S => UnitaryMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, I]]),
        GateKind::Sdg => UnitaryMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, NEG_I]]),
        GateKind::T => UnitaryMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, OCTANT]]),
        GateKind::Tdg => UnitaryMatrix::from_rows(&[&[ONE, ZERO], &[ZERO, OCTANT_CONJ]]),
        GateKind::H => UnitaryMatrix::from_rows(&[&[H_POS, H_POS], &[H_POS, H_NEG]]),
        GateKind::Cz => {
            let mut m = UnitaryMatrix::identity(4);
            m.set(3, 3, NEG_ONE);
            m
        }
        GateKind::Cnot => {
            let mut m = UnitaryMatrix::identity(4);
            m.set(2, 2, ZERO);
            m.set(3, 3, ZERO);
            m.set(2, 3, ONE);
            m.set(3, 2, ONE);
            m
        }
        GateKind::Ccz => {
            let mut m = UnitaryMatrix::identity(8);
            m.set(7, 7, NEG_ONE);
            m
        }
        GateKind::Swap => {
            let mut m = UnitaryMatrix::identity(4);
            m.set(1, 1, ZERO);
            m.set(2, 2, ZERO);
            m.set(1, 2, ONE);
            m.set(2, 1, ONE);
            m
        }
        GateKind::Toffoli => {
            let mut m = UnitaryMatrix::identity(8);
            m.set(6, 6, ZERO);
            m.set(7, 7, ZERO);
            m.set(6, 7, ONE);
            m.set(7, 6, ONE);
            m
        }
    }
}

fn apply_gate(values: &mut [Complex64], gate: &GateInstance) {
    let matrix = gate_matrix(gate.kind);
    let k = gate.qubits.len();
    let dim = 1 << k;
    // offsets[a]: state-index bits for local basis index a, with the
    // first operand as the most significant local bit
    let offsets: Vec<usize> = (0..dim)
        .map(|a| {
            gate.qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (slot, &q)| {
                    acc | (((a >> (k - 1 - slot)) & 1) << q)
                })
        })
        .collect();
    let operand_mask: usize = gate.qubits.iter().map(|&q| 1usize << q).sum();
    let mut block = vec![ZERO; dim];
    for base in 0..values.len() {
        if base & operand_mask != 0 {
            continue;
        }
        for (a, slot) in block.iter_mut().enumerate() {
            *slot = values[base | offsets[a]];
        }
        for a in 0..dim {
            let mut acc = ZERO;
            for b in 0..dim {
                acc += matrix.entry(a, b) * block[b];
            }
            values[base | offsets[a]] = acc;
        }
    }
}

/// Run the circuit on basis input `x_in`. Macro gates are applied via
/// their defining matrices, no expansion needed.
pub fn simulate(circuit: &Circuit, x_in: &[bool]) -> Result<StateVector, OracleError> {
    let n = circuit.qubit_count();
    if n > STATE_QUBIT_CAP {
        return Err(OracleError::QubitCap {
            requested: n,
            cap: STATE_QUBIT_CAP,
        });
    }
    if x_in.len() != n {
        return Err(OracleError::InputLength {
            expected: n,
            found: x_in.len(),
        });
    }
    let diags = circuit.validate();
    if !diags.is_empty() {
        return Err(OracleError::InvalidCircuit(diags[0].to_string()));
    }
    let mut state = StateVector::basis(n, x_in);
    for gate in circuit.gates() {
        apply_gate(&mut state.values, gate);
    }
    Ok(state)
}

/// Assemble the full circuit unitary column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<UnitaryMatrix, OracleError> {
    let n = circuit.qubit_count();
    if n > UNITARY_QUBIT_CAP {
        return Err(OracleError::QubitCap {
            requested: n,
            cap: UNITARY_QUBIT_CAP,
        });
    }
    let dim = 1 << n;
    let mut out = UnitaryMatrix::identity(dim);
    for col in 0..dim {
        let bits: Vec<bool> = (0..n).map(|q| col >> q & 1 == 1).collect();
        let state = simulate(circuit, &bits)?;
        for row in 0..dim {
            out.set(row, col, state.values[row]);
        }
    }
    Ok(out)
}
