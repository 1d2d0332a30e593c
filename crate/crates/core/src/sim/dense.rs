//! Dense matrix helpers: Pauli matrices, Hermitian exponentials, and the matrix-log
//! oracle that turns a unitary back into a Pauli-basis generator.
//!
//! Basis index bit `q` is the computational state of qubit `q`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

pub type CMatrix = DMatrix<Complex64>;

/// Largest register for which dense `2ⁿ × 2ⁿ` matrices are built.
pub const DENSE_MATRIX_LIMIT: usize = 7;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => I,
        2 => Complex64::new(-1.0, 0.0),
        _ => -I,
    }
}

/// Amplitude picked up by basis state `c` under `p`: `p|c⟩ = phase(c) |c ⊕ x⟩`.
pub(crate) fn pauli_phase(p: &PauliString, c: usize) -> Complex64 {
    let x = p.x_mask();
    let z = p.z_mask();
    let k = p.phase_exp() as u32 + (x & z).count_ones() + 2 * (z & c as u64).count_ones();
    i_pow(k)
}

fn check_dense(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    Ok(())
}

pub fn pauli_string_matrix(p: &PauliString) -> CMatrix {
    let dim = 1usize << p.num_qubits();
    let x = p.x_mask() as usize;
    let mut m = CMatrix::zeros(dim, dim);
    for c in 0..dim {
        m[(c ^ x, c)] = pauli_phase(p, c);
    }
    m
}

pub fn pauli_sum_matrix(h: &PauliSum) -> CMatrix {
    let dim = 1usize << h.num_qubits();
    let mut m = CMatrix::zeros(dim, dim);
    for (coeff, p) in h.iter() {
        let x = p.x_mask() as usize;
        for c in 0..dim {
            m[(c ^ x, c)] += pauli_phase(p, c) * coeff;
        }
    }
    m
}

/// `exp(i a P) = cos a · 𝟙 + i sin a · P` for a Hermitian string `P`.
pub fn pauli_exponential_matrix(p: &PauliString, a: f64) -> CMatrix {
    let dim = 1usize << p.num_qubits();
    CMatrix::identity(dim, dim) * Complex64::new(a.cos(), 0.0) + pauli_string_matrix(p) * (I * a.sin())
}

/// `exp(-i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let phases = eig.eigenvalues.map(|e| (-I * (e * t)).exp());
    let v = &eig.eigenvectors;
    v * CMatrix::from_diagonal(&phases) * v.adjoint()
}

/// `exp(-i t H)` of a Pauli sum, refused above [`DENSE_MATRIX_LIMIT`] qubits.
pub fn evolution_matrix(h: &PauliSum, t: f64) -> Result<CMatrix> {
    check_dense(h.num_qubits(), DENSE_MATRIX_LIMIT)?;
    Ok(expm_hermitian(&pauli_sum_matrix(h), t))
}

/// Real Pauli-basis coefficients `Tr(P M) / 2ⁿ`; imaginary parts are discarded.
pub fn pauli_decompose(m: &CMatrix, n: usize) -> Result<PauliSum> {
    check_dense(n, DENSE_MATRIX_LIMIT)?;
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension { expected: n, found: m.nrows().trailing_zeros() as usize });
    }
    let mut out = PauliSum::zero(n);
    for x in 0..dim as u64 {
        for z in 0..dim as u64 {
            let p = PauliString::from_masks(n, x, z, 0)?;
            let mut tr = Complex64::new(0.0, 0.0);
            for b in 0..dim {
                let c = b ^ x as usize;
                tr += pauli_phase(&p, c) * m[(c, b)];
            }
            let coeff = tr.re / dim as f64;
            if coeff.abs() >= out.tolerance() {
                out.add_term(coeff, p)?;
            }
        }
    }
    Ok(out)
}

/// Eigenphases closer than this to `±π` are rejected by [`effective_generator`].
pub const BRANCH_CUT_MARGIN: f64 = 1e-8;

/// `i log(u) / t` projected onto the Pauli basis.
///
/// `u` must be unitary (hence normal), so its complex Schur form is diagonal and the
/// logarithm acts on eigenphases directly.
pub fn effective_generator(u: &CMatrix, t: f64, n: usize) -> Result<PauliSum> {
    check_dense(n, DENSE_MATRIX_LIMIT)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::argument("t", format!("must be positive, got {t}")));
    }
    let (q, tri) = u.clone().schur().unpack();
    let dim = u.nrows();
    let mut log_diag = nalgebra::DVector::<Complex64>::zeros(dim);
    for k in 0..dim {
        let phase = tri[(k, k)].arg();
        if std::f64::consts::PI - phase.abs() < BRANCH_CUT_MARGIN {
            return Err(Error::BranchCut { phase });
        }
        // i·log(e^{iφ}) = -φ
        log_diag[k] = Complex64::new(-phase / t, 0.0);
    }
    let h = &q * CMatrix::from_diagonal(&log_diag) * q.adjoint();
    pauli_decompose(&h, n)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |a - e^{iφ} b|` minimised over the global phase `φ`.
pub fn max_abs_diff_up_to_phase(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
    max_abs_diff(a, &(b * phase))
}
