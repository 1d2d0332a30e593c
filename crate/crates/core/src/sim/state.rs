use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::dense::{self, CMatrix};
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliSum};

/// Largest register the dense state-vector simulator accepts.
pub const STATE_QUBIT_LIMIT: usize = 12;

/// Pure state of `n` qubits; amplitude index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > STATE_QUBIT_LIMIT {
            return Err(Error::TooLarge { n, limit: STATE_QUBIT_LIMIT });
        }
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, n: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wraps raw amplitudes after checking length and normalisation.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n > STATE_QUBIT_LIMIT {
            return Err(Error::TooLarge { n, limit: STATE_QUBIT_LIMIT });
        }
        if amps.len() != 1usize << n {
            return Err(Error::argument("amplitudes", format!("expected {} entries, got {}", 1usize << n, amps.len())));
        }
        let s = StateVector { n, amps };
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::argument("amplitudes", format!("norm is {}, expected 1", s.norm())));
        }
        Ok(s)
    }

    /// Product state with qubit `q` in `cos(α_q)|0⟩ + sin(α_q)|1⟩`.
    pub fn product_real(angles: &[f64]) -> Result<Self> {
        let n = angles.len();
        let mut s = StateVector::zero(n)?;
        for (q, &a) in angles.iter().enumerate() {
            s.apply_pauli_exponential(&PauliString::single(n, q, crate::pauli::Pauli::Y)?, -a)?;
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::argument("state", "cannot normalise the zero vector"));
        }
        self.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(())
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::Dimension { expected: self.n, found: n });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_n(other.n)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`, blind to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `ψ ↦ P ψ`. Not norm preserving for non-Hermitian phases only in the trivial sense.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_n(p.num_qubits())?;
        self.amps = self.pauli_image(p);
        Ok(())
    }

    fn pauli_image(&self, p: &PauliString) -> Vec<Complex64> {
        let x = p.x_mask() as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (c, a) in self.amps.iter().enumerate() {
            out[c ^ x] = dense::pauli_phase(p, c) * a;
        }
        out
    }

    /// `ψ ↦ exp(i a P) ψ = cos a · ψ + i sin a · P ψ`.
    pub fn apply_pauli_exponential(&mut self, p: &PauliString, a: f64) -> Result<()> {
        self.check_n(p.num_qubits())?;
        if !p.is_hermitian() {
            return Err(Error::InvalidPauli { input: p.to_string(), reason: "exponent must be Hermitian".into() });
        }
        let (c, s) = crate::pauli::cos_sin(a);
        if s == 0.0 {
            self.amps.iter_mut().for_each(|x| *x *= c);
            return Ok(());
        }
        let image = self.pauli_image(p);
        let is = Complex64::new(0.0, s);
        for (x, px) in self.amps.iter_mut().zip(image) {
            *x = *x * c + is * px;
        }
        Ok(())
    }

    /// Single-qubit rotation `exp(-i (φ/2) σ_axis)`.
    pub fn apply_rotation(&mut self, qubit: usize, axis: Axis, phi: f64) -> Result<()> {
        let p = PauliString::single(self.n, qubit, axis.pauli())?;
        self.apply_pauli_exponential(&p, -phi / 2.0)
    }

    /// `ψ ↦ exp(-i t H) ψ`. Commuting sums are applied term by term at any size; other
    /// sums go through a dense exponential.
    pub fn evolve(&mut self, h: &PauliSum, t: f64) -> Result<()> {
        if h.is_empty() || t == 0.0 {
            return Ok(());
        }
        self.check_n(h.num_qubits())?;
        if h.is_commuting() {
            for (c, p) in h.iter() {
                self.apply_pauli_exponential(p, -c * t)?;
            }
            return Ok(());
        }
        let u = dense::evolution_matrix(h, t)?;
        self.apply_matrix(&u)
    }

    pub fn apply_matrix(&mut self, m: &CMatrix) -> Result<()> {
        let dim = self.amps.len();
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::Dimension { expected: self.n, found: m.nrows().trailing_zeros() as usize });
        }
        let v = nalgebra::DVector::from_vec(std::mem::take(&mut self.amps));
        self.amps = (m * v).data.into();
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` for a Hermitian string.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_n(p.num_qubits())?;
        let image = StateVector { n: self.n, amps: self.pauli_image(p) };
        Ok(self.inner(&image)?.re)
    }

    /// `(1 + P)/2 · ψ`, unnormalised.
    pub fn project_plus(&mut self, p: &PauliString) -> Result<()> {
        self.check_n(p.num_qubits())?;
        let image = self.pauli_image(p);
        for (x, px) in self.amps.iter_mut().zip(image) {
            *x = (*x + px) * 0.5;
        }
        Ok(())
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        let n = self.n + high.n;
        if n > STATE_QUBIT_LIMIT {
            return Err(Error::TooLarge { n, limit: STATE_QUBIT_LIMIT });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            for l in &self.amps {
                amps.push(l * h);
            }
        }
        Ok(StateVector { n, amps })
    }

    pub fn to_records(&self) -> Vec<[f64; 2]> {
        self.amps.iter().map(|a| [a.re, a.im]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRecord { n: self.n, amplitudes: self.to_records() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = StateRecord::deserialize(d)?;
        let amps = r.amplitudes.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        StateVector::from_amplitudes(r.n, amps).map_err(serde::de::Error::custom)
    }
}
