//! Gate-to-polynomial compilation.
//!
//! Folds a macro-free circuit into a [`PhasePoly`] plus a [`WireMap`]
//! by per-gate term emission. Diagonal gates add terms on the current
//! wire variables; a Hadamard becomes a gadget that couples the wire
//! to a fresh ancilla (coefficient-4 quadratic term) and continues the
//! wire on the ancilla. X, Y and CNOT are emitted through their H/Z/CZ
//! decompositions, so each costs two gadgets; Y also contributes its
//! -i global factor as +6 on the constant.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{Circuit, GateInstance, GateKind};
use crate::polynomial::{Monomial, PhasePoly, PolyError, VarId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("macro gate `{0}` reached the rule dispatcher; expand macros first")]
    MacroGate(GateKind),
    #[error("gate `{gate}` references qubit {qubit} outside 0..{qubit_count}")]
    OperandOutOfRange {
        gate: String,
        qubit: usize,
        qubit_count: usize,
    },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Tracks, per logical qubit, the chain from its input variable to the
/// variable currently carrying the wire, plus every variable a gadget
/// has retired along the way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WireMap {
    current: Vec<VarId>,
    next_ancilla: u32,
    retired: BTreeSet<VarId>,
}

impl WireMap {
    pub fn identity(qubit_count: usize) -> WireMap {
        WireMap {
            current: (0..qubit_count).map(|q| VarId::Input(q as u32)).collect(),
            next_ancilla: 0,
            retired: BTreeSet::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.current.len()
    }

    pub fn input_var(&self, qubit: usize) -> VarId {
        VarId::Input(qubit as u32)
    }

    pub fn current_var(&self, qubit: usize) -> VarId {
        self.current[qubit]
    }

    /// The variable carrying each qubit at circuit end, in qubit order.
    pub fn final_vars(&self) -> Vec<VarId> {
        self.current.clone()
    }

    pub fn ancilla_count(&self) -> usize {
        self.next_ancilla as usize
    }

    pub fn retired(&self) -> &BTreeSet<VarId> {
        &self.retired
    }

    /// Continue the qubit's wire on a fresh ancilla; the previous
    /// carrier is retired.
    fn advance(&mut self, qubit: usize) -> (VarId, VarId) {
        let old = self.current[qubit];
        let new = VarId::Ancilla(self.next_ancilla);
        self.next_ancilla += 1;
        self.retired.insert(old);
        self.current[qubit] = new;
        (old, new)
    }
}

/// Fold accumulator: polynomial and wire map grown gate by gate.
#[derive(Clone, Debug)]
pub struct GadgetState {
    poly: PhasePoly,
    wires: WireMap,
}

impl GadgetState {
    pub fn new(qubit_count: usize) -> GadgetState {
        GadgetState {
            poly: PhasePoly::zero(qubit_count, 0),
            wires: WireMap::identity(qubit_count),
        }
    }

    pub fn poly(&self) -> &PhasePoly {
        &self.poly
    }

    pub fn wires(&self) -> &WireMap {
        &self.wires
    }

    fn check_operands(&self, gate: &GateInstance) -> Result<(), CompileError> {
        for &q in &gate.qubits {
            if q >= self.wires.qubit_count() {
                return Err(CompileError::OperandOutOfRange {
                    gate: gate.to_string(),
                    qubit: q,
                    qubit_count: self.wires.qubit_count(),
                });
            }
        }
        Ok(())
    }

    fn add_linear(&mut self, v: VarId, coeff: u8) -> Result<(), CompileError> {
        self.poly.accumulate(Monomial::linear(v), coeff)?;
        Ok(())
    }

    fn add_pair(&mut self, v: VarId, w: VarId) -> Result<(), CompileError> {
        self.poly.accumulate(Monomial::pair(v, w)?, 4)?;
        Ok(())
    }

    /// Hadamard gadget: fresh ancilla a, term 4*v*a, wire continues on a.
    fn hadamard(&mut self, qubit: usize) -> Result<(), CompileError> {
        let (old, new) = self.wires.advance(qubit);
        let grown = self.poly.push_ancilla();
        debug_assert_eq!(VarId::Ancilla(grown), new);
        self.add_pair(old, new)
    }

    /// Apply one macro-free gate's emission rule.
    pub fn apply_gate(&mut self, gate: &GateInstance) -> Result<(), CompileError> {
        if gate.kind.is_macro() {
            return Err(CompileError::MacroGate(gate.kind));
        }
        if gate.qubits.len() != gate.kind.arity() {
            return Err(CompileError::InvalidCircuit(format!(
                "`{}` expects {} operand(s), found {}",
                gate.kind,
                gate.kind.arity(),
                gate.qubits.len()
            )));
        }
        self.check_operands(gate)?;
        match gate.kind {
            GateKind::Z => self.add_linear(self.wires.current_var(gate.qubits[0]), 4),
            GateKind::S => self.add_linear(self.wires.current_var(gate.qubits[0]), 2),
            GateKind::T => self.add_linear(self.wires.current_var(gate.qubits[0]), 1),
            GateKind::Sdg => self.add_linear(self.wires.current_var(gate.qubits[0]), 6),
            GateKind::Tdg => self.add_linear(self.wires.current_var(gate.qubits[0]), 7),
            GateKind::Cz => self.add_pair(
                self.wires.current_var(gate.qubits[0]),
                self.wires.current_var(gate.qubits[1]),
            ),
            GateKind::Ccz => {
                let mono = Monomial::triple(
                    self.wires.current_var(gate.qubits[0]),
                    self.wires.current_var(gate.qubits[1]),
                    self.wires.current_var(gate.qubits[2]),
                )?;
                self.poly.accumulate(mono, 4)?;
                Ok(())
            }
            GateKind::H => self.hadamard(gate.qubits[0]),
            GateKind::X => {
                // X = H Z H
                let q = gate.qubits[0];
                self.hadamard(q)?;
                self.add_linear(self.wires.current_var(q), 4)?;
                self.hadamard(q)
            }
            GateKind::Y => {
                // Y = -i Z H Z H, applied H, Z, H, Z in time order;
                // the -i scalar is zeta_8^6 on the constant
                let q = gate.qubits[0];
                self.hadamard(q)?;
                self.add_linear(self.wires.current_var(q), 4)?;
                self.hadamard(q)?;
                self.add_linear(self.wires.current_var(q), 4)?;
                self.poly.add_constant(6);
                Ok(())
            }
            GateKind::Cnot => {
                // CNOT(i, j) = H_j CZ_ij H_j
                let (control, target) = (gate.qubits[0], gate.qubits[1]);
                self.hadamard(target)?;
                self.add_pair(
                    self.wires.current_var(control),
                    self.wires.current_var(target),
                )?;
                self.hadamard(target)
            }
            GateKind::Swap | GateKind::Toffoli => unreachable!("handled above"),
        }
    }

    pub fn finish(self) -> CompilationResult {
        debug_assert_eq!(self.poly.ancillas(), self.wires.ancilla_count());
        CompilationResult {
            poly: self.poly.canonicalize(),
            wires: self.wires,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompilationResult {
    pub poly: PhasePoly,
    pub wires: WireMap,
}

impl CompilationResult {
    pub fn qubit_count(&self) -> usize {
        self.wires.qubit_count()
    }

    pub fn ancilla_count(&self) -> usize {
        self.wires.ancilla_count()
    }
}

/// Expand macros, then fold the gate rules over the circuit in time
/// order starting from the zero polynomial and the identity wire map.
pub fn compile(circuit: &Circuit) -> Result<CompilationResult, CompileError> {
    let diags = circuit.validate();
    if !diags.is_empty() {
        let joined = diags
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CompileError::InvalidCircuit(joined));
    }
    let expanded = circuit.expand_macros();
    let mut state = GadgetState::new(expanded.qubit_count());
    for gate in expanded.gates() {
        state.apply_gate(gate)?;
    }
    Ok(state.finish())
}

/// Gadget count of the expanded circuit: one per H, two per X, Y and
/// CNOT. `compile` allocates exactly this many ancillas.
pub fn expected_ancillas(expanded: &Circuit) -> usize {
    expanded
        .gates()
        .iter()
        .map(|g| match g.kind {
            GateKind::H => 1,
            GateKind::X | GateKind::Y | GateKind::Cnot => 2,
            _ => 0,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> VarId {
        VarId::Input(i)
    }

    fn a(k: u32) -> VarId {
        VarId::Ancilla(k)
    }

    fn single(kind: GateKind, qubits: &[usize], n: usize) -> CompilationResult {
        let mut c = Circuit::new(n);
        c.push(kind, qubits.to_vec());
        compile(&c).unwrap()
    }

    fn coeff_of(poly: &PhasePoly, vars: &[VarId]) -> u8 {
        poly.coefficient(&Monomial::new(vars).unwrap())
    }

    #[test]
    fn diagonal_gate_rules() {
        let cases = [
            (GateKind::Z, 4u8),
            (GateKind::S, 2),
            (GateKind::T, 1),
            (GateKind::Sdg, 6),
            (GateKind::Tdg, 7),
        ];
        for (kind, expected) in cases {
            let result = single(kind, &[0], 1);
            assert_eq!(result.ancilla_count(), 0, "{kind}");
            assert_eq!(result.poly.term_count(), 1, "{kind}");
            assert_eq!(coeff_of(&result.poly, &[x(0)]), expected, "{kind}");
            assert_eq!(result.poly.constant(), 0, "{kind}");
        }
    }

    #[test]
    fn cz_and_ccz_rules() {
        let result = single(GateKind::Cz, &[0, 1], 2);
        assert_eq!(result.poly.term_count(), 1);
        assert_eq!(coeff_of(&result.poly, &[x(0), x(1)]), 4);

        let result = single(GateKind::Ccz, &[0, 1, 2], 3);
        assert_eq!(result.poly.term_count(), 1);
        assert_eq!(coeff_of(&result.poly, &[x(0), x(1), x(2)]), 4);
    }

    #[test]
    fn hadamard_gadget_rule() {
        let result = single(GateKind::H, &[0], 1);
        assert_eq!(result.ancilla_count(), 1);
        assert_eq!(result.poly.term_count(), 1);
        assert_eq!(coeff_of(&result.poly, &[x(0), a(0)]), 4);
        assert_eq!(result.wires.current_var(0), a(0));
        assert!(result.wires.retired().contains(&x(0)));
    }

    #[test]
    fn x_gate_rule() {
        // 4(x0 a0 + a0 + a0 a1), wire ends on a1
        let result = single(GateKind::X, &[0], 1);
        assert_eq!(result.ancilla_count(), 2);
        assert_eq!(result.poly.constant(), 0);
        assert_eq!(result.poly.term_count(), 3);
        assert_eq!(coeff_of(&result.poly, &[x(0), a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(0), a(1)]), 4);
        assert_eq!(result.wires.current_var(0), a(1));
    }

    #[test]
    fn y_gate_rule() {
        // constant 6 from the -i factor, plus 4(x0 a0 + a0 + a0 a1 + a1)
        let result = single(GateKind::Y, &[0], 1);
        assert_eq!(result.ancilla_count(), 2);
        assert_eq!(result.poly.constant(), 6);
        assert_eq!(result.poly.term_count(), 4);
        assert_eq!(coeff_of(&result.poly, &[x(0), a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(0), a(1)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(1)]), 4);
    }

    #[test]
    fn cnot_gate_rule() {
        // 4(x1 a0 + x0 a0 + a0 a1), target wire ends on a1
        let result = single(GateKind::Cnot, &[0, 1], 2);
        assert_eq!(result.ancilla_count(), 2);
        assert_eq!(result.poly.term_count(), 3);
        assert_eq!(coeff_of(&result.poly, &[x(1), a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[x(0), a(0)]), 4);
        assert_eq!(coeff_of(&result.poly, &[a(0), a(1)]), 4);
        assert_eq!(result.wires.current_var(0), x(0));
        assert_eq!(result.wires.current_var(1), a(1));
    }

    #[test]
    fn sample_circuit_polynomial() {
        let c = Circuit::parse("qubits 3\nz 0\ns 1\nh 1\ncz 0 1\nt 2\nh 2\n").unwrap();
        let result = compile(&c).unwrap();
        assert_eq!(result.ancilla_count(), 2);
        assert_eq!(result.poly.constant(), 0);
        assert_eq!(
            result.poly.to_string(),
            "4x0 + 2x1 + x2 + 4x0a0 + 4x1a0 + 4x2a1"
        );
        assert_eq!(result.wires.final_vars(), vec![x(0), a(0), a(1)]);
    }

    #[test]
    fn empty_circuit_compiles_to_zero() {
        let c = Circuit::new(3);
        let result = compile(&c).unwrap();
        assert!(result.poly.is_zero());
        assert_eq!(result.ancilla_count(), 0);
        assert_eq!(result.wires.final_vars(), vec![x(0), x(1), x(2)]);
    }

    #[test]
    fn swap_macro_compiles_to_nine_quadratic_terms() {
        let mut c = Circuit::new(2);
        c.push(GateKind::Swap, [0, 1]);
        let result = compile(&c).unwrap();
        assert_eq!(result.ancilla_count(), 6);
        assert_eq!(result.poly.term_count(), 9);
        assert!(result
            .poly
            .terms()
            .all(|(mono, coeff)| mono.degree() == 2 && coeff == 4));
    }

    #[test]
    fn toffoli_macro_ancilla_count() {
        let mut c = Circuit::new(3);
        c.push(GateKind::Toffoli, [0, 1, 2]);
        let result = compile(&c).unwrap();
        assert_eq!(result.ancilla_count(), 12);
        assert_eq!(
            expected_ancillas(&c.expand_macros()),
            result.ancilla_count()
        );
    }

    #[test]
    fn macro_gate_is_rejected_by_dispatcher() {
        let mut state = GadgetState::new(2);
        let gate = GateInstance::new(GateKind::Swap, vec![0, 1]);
        assert_eq!(
            state.apply_gate(&gate),
            Err(CompileError::MacroGate(GateKind::Swap))
        );
    }

    #[test]
    fn invalid_operand_is_rejected() {
        let mut state = GadgetState::new(1);
        let gate = GateInstance::new(GateKind::Z, vec![3]);
        assert!(matches!(
            state.apply_gate(&gate),
            Err(CompileError::OperandOutOfRange { .. })
        ));
        let mut bad = Circuit::new(1);
        bad.push(GateKind::H, [4]);
        assert!(matches!(
            compile(&bad),
            Err(CompileError::InvalidCircuit(_))
        ));
    }

    #[test]
    fn compilation_is_deterministic() {
        let c = Circuit::parse("qubits 3\ntoffoli 0 1 2\nswap 1 2\ny 0\n").unwrap();
        let first = compile(&c).unwrap();
        let second = compile(&c).unwrap();
        assert_eq!(first.poly, second.poly);
        assert_eq!(first.wires, second.wires);
    }

    #[test]
    fn per_gate_emission_discipline() {
        // every non-linear emitted coefficient is exactly 4; linear
        // emissions lie in {1,2,4,6,7}; only Y touches the constant
        for kind in GateKind::ALL.iter().filter(|k| !k.is_macro()) {
            let n = kind.arity();
            let result = single(*kind, &(0..n).collect::<Vec<_>>(), n);
            for (mono, coeff) in result.poly.terms() {
                if mono.degree() >= 2 {
                    assert_eq!(coeff, 4, "{kind}");
                } else {
                    assert!([1, 2, 4, 6, 7].contains(&coeff), "{kind}: {coeff}");
                }
            }
            let expect_const = if *kind == GateKind::Y { 6 } else { 0 };
            assert_eq!(result.poly.constant(), expect_const, "{kind}");
        }
    }
}
