//! Circuit intermediate representation and text format.
//!
//! Circuits are ordered gate lists over `n` qubits; the leftmost gate
//! acts first. The text format is line oriented: a `qubits <n>` header,
//! then one gate per line (`<mnemonic> <q0> [q1] [q2]`), `#` comments.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GateKind {
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    H,
    Cz,
    Cnot,
    Ccz,
    Swap,
    Toffoli,
}

impl GateKind {
    pub const ALL: [GateKind; 13] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::H,
        GateKind::Cz,
        GateKind::Cnot,
        GateKind::Ccz,
        GateKind::Swap,
        GateKind::Toffoli,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::H => 1,
            GateKind::Cz | GateKind::Cnot | GateKind::Swap => 2,
            GateKind::Ccz | GateKind::Toffoli => 3,
        }
    }

    /// Macros never reach the compiler's rule dispatcher; they are
    /// rewritten by [`Circuit::expand_macros`].
    pub fn is_macro(self) -> bool {
        matches!(self, GateKind::Swap | GateKind::Toffoli)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::H => "h",
            GateKind::Cz => "cz",
            GateKind::Cnot => "cnot",
            GateKind::Ccz => "ccz",
            GateKind::Swap => "swap",
            GateKind::Toffoli => "toffoli",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<GateKind> {
        let lower = s.to_ascii_lowercase();
        GateKind::ALL.iter().copied().find(|k| k.mnemonic() == lower)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One gate application. For `cnot` the first operand is the control;
/// for `ccz`/`toffoli` the last operand is the target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GateInstance {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl GateInstance {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> GateInstance {
        GateInstance { kind, qubits }
    }
}

impl fmt::Display for GateInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected `qubits <n>` header before any gate")]
    MissingHeader { line: usize },
    #[error("line {line}: invalid qubit count `{token}`")]
    InvalidQubitCount { line: usize, token: String },
    #[error("line {line}: unknown gate mnemonic `{mnemonic}`")]
    UnknownMnemonic { line: usize, mnemonic: String },
    #[error("line {line}: gate `{kind}` expects {expected} operand(s), found {found}")]
    OperandCount {
        line: usize,
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid qubit index `{token}`")]
    InvalidIndex { line: usize, token: String },
    #[error("line {line}: qubit index {index} out of range (circuit has {qubit_count} qubits)")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        qubit_count: usize,
    },
    #[error("line {line}: duplicate operand {index}")]
    DuplicateOperand { line: usize, index: usize },
}

/// One invariant violation found by [`Circuit::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    /// Index of the offending gate, if the violation is gate-local.
    pub gate: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Some(i) => write!(f, "gate {i}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<GateInstance>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Circuit {
        Circuit {
            qubit_count,
            gates: Vec::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, kind: GateKind, qubits: impl Into<Vec<usize>>) {
        self.gates.push(GateInstance::new(kind, qubits.into()));
    }

    /// Parse the line-oriented circuit text format.
    pub fn parse(text: &str) -> Result<Circuit, ParseError> {
        let mut circuit: Option<Circuit> = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if circuit.is_none() {
                if !tokens[0].eq_ignore_ascii_case("qubits") {
                    return Err(ParseError::MissingHeader { line });
                }
                if tokens.len() != 2 {
                    return Err(ParseError::InvalidQubitCount {
                        line,
                        token: tokens.get(1).unwrap_or(&"").to_string(),
                    });
                }
                let n: usize = tokens[1].parse().map_err(|_| ParseError::InvalidQubitCount {
                    line,
                    token: tokens[1].to_string(),
                })?;
                if n == 0 {
                    return Err(ParseError::InvalidQubitCount {
                        line,
                        token: tokens[1].to_string(),
                    });
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            let circuit = circuit.as_mut().expect("header already seen");
            let kind = GateKind::from_mnemonic(tokens[0]).ok_or_else(|| {
                ParseError::UnknownMnemonic {
                    line,
                    mnemonic: tokens[0].to_string(),
                }
            })?;
            let operands = &tokens[1..];
            if operands.len() != kind.arity() {
                return Err(ParseError::OperandCount {
                    line,
                    kind,
                    expected: kind.arity(),
                    found: operands.len(),
                });
            }
            let mut qubits = Vec::with_capacity(kind.arity());
            for token in operands {
                let index: usize = token.parse().map_err(|_| ParseError::InvalidIndex {
                    line,
                    token: token.to_string(),
                })?;
                if index >= circuit.qubit_count {
                    return Err(ParseError::IndexOutOfRange {
                        line,
                        index,
                        qubit_count: circuit.qubit_count,
                    });
                }
                if qubits.contains(&index) {
                    return Err(ParseError::DuplicateOperand { line, index });
                }
                qubits.push(index);
            }
            circuit.gates.push(GateInstance::new(kind, qubits));
        }
        circuit.ok_or(ParseError::MissingHeader {
            line: last_line + 1,
        })
    }

    /// Canonical text form; `parse` inverts this exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.qubit_count);
        for gate in &self.gates {
            out.push_str(&gate.to_string());
            out.push('\n');
        }
        out
    }

    /// Check every gate against the circuit invariants. Empty result
    /// means the circuit is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        if self.qubit_count == 0 {
            diags.push(Diagnostic {
                gate: None,
                message: "qubit count must be positive".into(),
            });
        }
        for (i, gate) in self.gates.iter().enumerate() {
            if gate.qubits.len() != gate.kind.arity() {
                diags.push(Diagnostic {
                    gate: Some(i),
                    message: format!(
                        "`{}` expects {} operand(s), found {}",
                        gate.kind,
                        gate.kind.arity(),
                        gate.qubits.len()
                    ),
                });
                continue;
            }
            for (slot, &q) in gate.qubits.iter().enumerate() {
                if q >= self.qubit_count {
                    diags.push(Diagnostic {
                        gate: Some(i),
                        message: format!(
                            "qubit index {q} out of range (circuit has {} qubits)",
                            self.qubit_count
                        ),
                    });
                }
                if gate.qubits[..slot].contains(&q) {
                    diags.push(Diagnostic {
                        gate: Some(i),
                        message: format!("duplicate operand {q}"),
                    });
                }
            }
        }
        diags
    }

    /// Rewrite `swap` and `toffoli` into their fixed gate sequences.
    /// The output contains no macro gates; macro-free circuits are
    /// returned unchanged, so the rewrite is idempotent.
    pub fn expand_macros(&self) -> Circuit {
        let mut out = Circuit::new(self.qubit_count);
        for gate in &self.gates {
            match gate.kind {
                GateKind::Swap => {
                    let (i, j) = (gate.qubits[0], gate.qubits[1]);
                    out.push(GateKind::Cnot, [i, j]);
                    out.push(GateKind::Cnot, [j, i]);
                    out.push(GateKind::Cnot, [i, j]);
                }
                GateKind::Toffoli => {
                    let (i, j, k) = (gate.qubits[0], gate.qubits[1], gate.qubits[2]);
                    // 15-gate Clifford+T realization. The opening
                    // `cz j k; h k` equals the textbook `h k; cnot j k`
                    // prefix with the adjacent Hadamard pair cancelled,
                    // which keeps the gadget count at 12.
                    out.push(GateKind::Cz, [j, k]);
                    out.push(GateKind::H, [k]);
                    out.push(GateKind::Tdg, [k]);
                    out.push(GateKind::Cnot, [i, k]);
                    out.push(GateKind::T, [k]);
                    out.push(GateKind::Cnot, [j, k]);
                    out.push(GateKind::Tdg, [k]);
                    out.push(GateKind::Cnot, [i, k]);
                    out.push(GateKind::T, [j]);
                    out.push(GateKind::T, [k]);
                    out.push(GateKind::Cnot, [i, j]);
                    out.push(GateKind::H, [k]);
                    out.push(GateKind::T, [i]);
                    out.push(GateKind::Tdg, [j]);
                    out.push(GateKind::Cnot, [i, j]);
                }
                _ => out.gates.push(gate.clone()),
            }
        }
        out
    }
}
