use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest register a [`PauliString`] can describe (one bit per qubit in a `u64` mask).
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter, stored as its `(x, z)` symplectic bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// True when both letters are non-identity and differ.
    pub fn anticommutes_with(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }
}

/// Rotation axis of a single-qubit pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    pub fn from_pauli(p: Pauli) -> Option<Axis> {
        match p {
            Pauli::I => None,
            Pauli::X => Some(Axis::X),
            Pauli::Y => Some(Axis::Y),
            Pauli::Z => Some(Axis::Z),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Signed n-qubit Pauli product `i^phase · ⊗_q σ(x_q, z_q)` in symplectic form.
///
/// Qubit `q` maps to bit `q` of both masks. The letter for `(x, z) = (1, 1)` is `Y`
/// itself, not `XZ`, so a Hermitian string always has `phase ∈ {0, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits supported");
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Builds a string from raw masks. Bits above `n` are rejected.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooLarge { n, limit: MAX_QUBITS });
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::InvalidPauli {
                input: format!("x={x:#b} z={z:#b}"),
                reason: format!("mask bits set beyond qubit {}", n.saturating_sub(1)),
            });
        }
        Ok(PauliString { n, x, z, phase: phase % 4 })
    }

    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        let mut p = PauliString::identity(n);
        p.set(qubit, letter)?;
        Ok(p)
    }

    /// Convenience constructor from `(qubit, letter)` pairs.
    pub fn from_sparse(n: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = PauliString::identity(n);
        for &(q, l) in letters {
            p.set(q, l)?;
        }
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        if qubit >= self.n {
            return Pauli::I;
        }
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, letter: Pauli) -> Result<()> {
        if qubit >= self.n {
            return Err(Error::IndexOutOfRange { index: qubit, n: self.n });
        }
        let (x, z) = letter.bits();
        let bit = 1u64 << qubit;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        Ok(())
    }

    pub fn with_letter(mut self, qubit: usize, letter: Pauli) -> Result<Self> {
        self.set(qubit, letter)?;
        Ok(self)
    }

    pub fn letters(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n).map(move |q| self.letter(q))
    }

    pub fn support_mask(&self) -> u64 {
        self.x | self.z
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.support_mask() >> q & 1 == 1).collect()
    }

    pub fn weight(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn is_identity_letters(&self) -> bool {
        self.support_mask() == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// `+1.0` or `-1.0` for Hermitian strings; `None` for `±i` phases.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    /// The same letters with phase reset to `+1`.
    pub fn unsigned(&self) -> Self {
        PauliString { phase: 0, ..*self }
    }

    pub fn negate(&self) -> Self {
        PauliString { phase: (self.phase + 2) % 4, ..*self }
    }

    pub fn times_i(&self) -> Self {
        PauliString { phase: (self.phase + 1) % 4, ..*self }
    }

    fn check_dims(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// Group product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_dims(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        // Y = iXZ, so σ(x, z) = i^{|x∧z|} X^x Z^z; moving Z^z1 past X^x2 costs (-1)^{|z1∧x2|}.
        let ones = |m: u64| m.count_ones();
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let phase = self.phase as u32
            + other.phase as u32
            + ones(self.x & self.z)
            + ones(other.x & other.z)
            + 2 * ones(self.z & other.x)
            + 4 * 64
            - ones(x & z);
        PauliString { n: self.n, x, z, phase: (phase % 4) as u8 }
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Letters only, no sign prefix.
    pub fn letter_string(&self) -> String {
        self.letters().map(Pauli::as_char).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.letter_string())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"+XZZXI"`, `"-IXZZX"`, `"+iZ"`, or unsigned `"XZ"`; letter `q` is qubit `q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidPauli { input: s.to_string(), reason: reason.to_string() };
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n > MAX_QUBITS {
            return Err(bad("more than 64 qubits"));
        }
        let mut p = PauliString::identity(n);
        for (q, c) in body.chars().enumerate() {
            let letter = Pauli::from_char(c).ok_or_else(|| bad(&format!("unexpected character {c:?}")))?;
            p.set(q, letter)?;
        }
        p.phase = phase;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(p("X").multiply(&p("Y")).unwrap(), p("+iZ"));
        assert_eq!(p("X").multiply(&p("X")).unwrap(), p("I"));
        assert_eq!(p("Y").multiply(&p("X")).unwrap(), p("-iZ"));
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
    }

    #[test]
    fn two_qubit_product_phase() {
        // (X1 Z2)(Z1 Z2) = (XZ)(ZZ) = -iY ⊗ I
        assert_eq!(p("XZ").multiply(&p("ZZ")).unwrap(), p("-iYI"));
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XZZXI").commutes(&p("IXZZX")).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(p("XX").multiply(&p("X")), Err(Error::Dimension { .. })));
        assert!(p("XX").commutes(&p("XXX")).is_err());
    }

    #[test]
    fn letter_format_round_trip() {
        for s in ["+XZZXI", "-IXZZX", "+iY", "-iIZ", "+"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XZ").to_string(), "+XZ");
        assert!("+XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn squares_to_plus_or_minus_identity() {
        for s in ["XYZ", "+iXZ", "-YYI"] {
            let q = p(s);
            let sq = q.multiply(&q).unwrap();
            assert!(sq.is_identity_letters());
            assert!(sq.is_hermitian());
        }
    }
}
