//! Phase polynomials over Z8.
//!
//! A [`PhasePoly`] is a function f : F2^(n+m) -> Z8 written as a constant
//! plus a sum of monomials of degree 1 to 3 with coefficients in Z8.
//! Variables are either circuit inputs (`x0`, `x1`, ...) or gadget
//! ancillas (`a0`, `a1`, ...); an assignment orders inputs before
//! ancillas. Coefficients are kept as least nonnegative residues, and
//! zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use arrayvec::ArrayVec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// All coefficient arithmetic is modulo this.
pub const MODULUS: u8 = 8;

/// No gate rule produces a monomial of degree above 3.
pub const MAX_DEGREE: usize = 3;

/// A polynomial variable: either the q-th circuit input or the k-th
/// gadget ancilla. The derived ordering (inputs first, then ancillas,
/// each by index) is the assignment order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    Input(u32),
    Ancilla(u32),
}

impl VarId {
    pub fn index(self) -> u32 {
        match self {
            VarId::Input(i) | VarId::Ancilla(i) => i,
        }
    }

    pub fn is_input(self) -> bool {
        matches!(self, VarId::Input(_))
    }

    pub fn is_ancilla(self) -> bool {
        matches!(self, VarId::Ancilla(_))
    }

    /// Position of this variable in an inputs-then-ancillas assignment.
    pub fn slot(self, inputs: usize) -> usize {
        match self {
            VarId::Input(i) => i as usize,
            VarId::Ancilla(k) => inputs + k as usize,
        }
    }

    /// Parse `x<i>` / `a<k>` names as used in the interchange format.
    pub fn parse_name(name: &str) -> Option<VarId> {
        let (head, tail) = name.split_at(1.min(name.len()));
        let index: u32 = tail.parse().ok()?;
        match head {
            "x" => Some(VarId::Input(index)),
            "a" => Some(VarId::Ancilla(index)),
            _ => None,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Input(i) => write!(f, "x{i}"),
            VarId::Ancilla(k) => write!(f, "a{k}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("monomial degree {0} outside 1..={MAX_DEGREE}")]
    Degree(usize),
    #[error("repeated variable {0} in monomial")]
    RepeatedVar(VarId),
    #[error("variable {var} out of bounds ({inputs} inputs, {ancillas} ancillas)")]
    VarOutOfBounds {
        var: VarId,
        inputs: usize,
        ancillas: usize,
    },
    #[error("assignment has {found} entries, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("coefficient {0} outside 0..=7")]
    CoefficientRange(u64),
    #[error("unknown variable name `{0}`")]
    UnknownVariable(String),
    #[error("malformed polynomial document: {0}")]
    Malformed(String),
}

/// A product of 1 to 3 distinct variables, kept strictly sorted.
/// Variables are F2-valued so higher powers never arise; repeating a
/// variable is rejected rather than collapsed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    vars: ArrayVec<VarId, MAX_DEGREE>,
}

impl Monomial {
    pub fn new(vars: &[VarId]) -> Result<Monomial, PolyError> {
        if vars.is_empty() || vars.len() > MAX_DEGREE {
            return Err(PolyError::Degree(vars.len()));
        }
        let mut sorted: ArrayVec<VarId, MAX_DEGREE> = vars.iter().copied().collect();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(PolyError::RepeatedVar(pair[0]));
            }
        }
        Ok(Monomial { vars: sorted })
    }

    pub fn linear(v: VarId) -> Monomial {
        Monomial::new(&[v]).expect("single variable is always a valid monomial")
    }

    pub fn pair(v: VarId, w: VarId) -> Result<Monomial, PolyError> {
        Monomial::new(&[v, w])
    }

    pub fn triple(v: VarId, w: VarId, u: VarId) -> Result<Monomial, PolyError> {
        Monomial::new(&[v, w, u])
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    /// Evaluate the product over an inputs-then-ancillas assignment.
    pub fn eval(&self, assignment: &[bool], inputs: usize) -> bool {
        self.vars.iter().all(|v| assignment[v.slot(inputs)])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // degree first, then lexicographic on the sorted variables
        self.vars
            .len()
            .cmp(&other.vars.len())
            .then_with(|| self.vars.as_slice().cmp(other.vars.as_slice()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vars {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// f(x) = constant + sum of coeff * monomial, all modulo 8.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhasePoly {
    inputs: usize,
    ancillas: usize,
    constant: u8,
    terms: BTreeMap<Monomial, u8>,
}

impl PhasePoly {
    pub fn zero(inputs: usize, ancillas: usize) -> PhasePoly {
        PhasePoly {
            inputs,
            ancillas,
            constant: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn ancillas(&self) -> usize {
        self.ancillas
    }

    pub fn var_count(&self) -> usize {
        self.inputs + self.ancillas
    }

    pub fn constant(&self) -> u8 {
        self.constant
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    /// Terms in canonical order: degree first, then lexicographic.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u8)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> u8 {
        self.terms.get(mono).copied().unwrap_or(0)
    }

    fn check_bounds(&self, mono: &Monomial) -> Result<(), PolyError> {
        for &v in mono.vars() {
            let ok = match v {
                VarId::Input(i) => (i as usize) < self.inputs,
                VarId::Ancilla(k) => (k as usize) < self.ancillas,
            };
            if !ok {
                return Err(PolyError::VarOutOfBounds {
                    var: v,
                    inputs: self.inputs,
                    ancillas: self.ancillas,
                });
            }
        }
        Ok(())
    }

    /// Add `coeff * mono` modulo 8; entries that reduce to 0 are removed.
    pub fn add_term(&self, mono: &Monomial, coeff: u8) -> Result<PhasePoly, PolyError> {
        let mut out = self.clone();
        out.accumulate(mono.clone(), coeff)?;
        Ok(out)
    }

    /// In-place variant of [`add_term`](Self::add_term).
    pub fn accumulate(&mut self, mono: Monomial, coeff: u8) -> Result<(), PolyError> {
        self.check_bounds(&mono)?;
        let new = (self.coefficient(&mono) + coeff % MODULUS) % MODULUS;
        if new == 0 {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, new);
        }
        Ok(())
    }

    pub fn add_constant(&mut self, c: u8) {
        self.constant = (self.constant + c % MODULUS) % MODULUS;
    }

    /// Grow the ancilla space by one; returns the new ancilla index.
    pub(crate) fn push_ancilla(&mut self) -> u32 {
        let id = self.ancillas as u32;
        self.ancillas += 1;
        id
    }

    /// Evaluate at an assignment ordered inputs-then-ancillas.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<u8, PolyError> {
        if assignment.len() != self.var_count() {
            return Err(PolyError::AssignmentLength {
                expected: self.var_count(),
                found: assignment.len(),
            });
        }
        let mut acc = self.constant as u32;
        for (mono, coeff) in self.terms() {
            if mono.eval(assignment, self.inputs) {
                acc += coeff as u32;
            }
        }
        Ok((acc % MODULUS as u32) as u8)
    }

    /// Deterministic normal form: ordered terms, zero coefficients
    /// purged, coefficients reduced. The map representation maintains
    /// this already, so this is mostly a defensive re-normalization.
    pub fn canonicalize(&self) -> PhasePoly {
        let mut out = PhasePoly::zero(self.inputs, self.ancillas);
        out.constant = self.constant % MODULUS;
        for (mono, coeff) in self.terms() {
            if coeff % MODULUS != 0 {
                out.terms.insert(mono.clone(), coeff % MODULUS);
            }
        }
        out
    }

    /// Serialize to the JSON interchange document.
    pub fn to_json(&self) -> String {
        let doc = PolyDoc {
            inputs: self.inputs,
            ancillas: self.ancillas,
            constant: self.constant,
            terms: self
                .terms()
                .map(|(mono, coeff)| TermDoc {
                    vars: mono.vars().iter().map(|v| v.to_string()).collect(),
                    coeff,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
    }

    /// Parse the JSON interchange document.
    pub fn from_json(text: &str) -> Result<PhasePoly, PolyError> {
        let doc: PolyDoc =
            serde_json::from_str(text).map_err(|e| PolyError::Malformed(e.to_string()))?;
        if doc.constant >= MODULUS {
            return Err(PolyError::CoefficientRange(doc.constant as u64));
        }
        let mut poly = PhasePoly::zero(doc.inputs, doc.ancillas);
        poly.constant = doc.constant;
        for term in &doc.terms {
            if term.coeff >= MODULUS {
                return Err(PolyError::CoefficientRange(term.coeff as u64));
            }
            let vars: Vec<VarId> = term
                .vars
                .iter()
                .map(|name| {
                    VarId::parse_name(name).ok_or_else(|| PolyError::UnknownVariable(name.clone()))
                })
                .collect::<Result<_, _>>()?;
            let mono = Monomial::new(&vars)?;
            if term.coeff != 0 {
                poly.accumulate(mono, term.coeff)?;
            } else {
                poly.check_bounds(&mono)?;
            }
        }
        Ok(poly)
    }
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.constant != 0 {
            write!(f, "{}", self.constant)?;
            first = false;
        }
        for (mono, coeff) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if coeff == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    inputs: usize,
    ancillas: usize,
    constant: u8,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    vars: Vec<String>,
    coeff: u8,
}
