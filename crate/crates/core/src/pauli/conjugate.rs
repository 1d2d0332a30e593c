//! Conjugation of Pauli sums by single-qubit rotations and two-body coupling evolutions.
//!
//! Every map here is `h ↦ U h U†`. A rotation of angle `φ` about `axis` on a qubit is
//! `U = exp(-i (φ/2) σ_axis)`, so a `(π/2)ˣ` pulse is `φ = π/2`. A coupling evolution for
//! dimensionless time `θ = J t` is `U = exp(-i θ H_edge / J)` with
//! `H_edge / J = X_i X_j + Y_i Y_j` (XY) or `Z_i Z_j` (Ising).
//!
//! Both reduce to Pauli rotations `exp(-i (φ/2) G)`: a string `P` that anticommutes with
//! `G` goes to `cos φ · P + sin φ · (i P G)`, anything else is untouched. The XY
//! evolution is the commuting product of the `XX` and `YY` rotations with `φ = 2θ`.
//!
//! Quarter-step (`θ = π/4`) images on an edge `(i, j)`:
//!
//! | input     | XY                | Ising        |
//! |-----------|-------------------|--------------|
//! | `X_i`     | `-Z_i Y_j`        | `+Y_i Z_j`   |
//! | `Y_i`     | `+Z_i X_j`        | `-X_i Z_j`   |
//! | `Z_i`     | `+Z_j`            | `+Z_i`       |
//! | `X_j`     | `-Y_i Z_j`        | `+Z_i Y_j`   |
//! | `Y_j`     | `+X_i Z_j`        | `-Z_i X_j`   |
//!
//! The Ising column is fixed against the dense 4×4 conjugation in the tests below.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::string::{Axis, Pauli, PauliString};
use super::sum::PauliSum;
use crate::error::{Error, Result};

/// Two-body interaction type of a coupling edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coupling {
    XY,
    Ising,
}

impl Coupling {
    /// The Pauli strings whose unit-weight sum is `H_edge / J`.
    pub fn generators(self, n: usize, i: usize, j: usize) -> Result<Vec<PauliString>> {
        let pair = |l: Pauli| PauliString::from_sparse(n, &[(i, l), (j, l)]);
        match self {
            Coupling::XY => Ok(vec![pair(Pauli::X)?, pair(Pauli::Y)?]),
            Coupling::Ising => Ok(vec![pair(Pauli::Z)?]),
        }
    }
}

/// `(cos φ, sin φ)` with exact values at multiples of `π/2`.
pub(crate) fn cos_sin(phi: f64) -> (f64, f64) {
    let quarters = phi / FRAC_PI_2;
    let k = quarters.round();
    if (quarters - k).abs() < 1e-12 {
        match (k as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        (phi.cos(), phi.sin())
    }
}

/// `h ↦ U h U†` for `U = exp(-i (φ/2) G)` with `G` a Hermitian Pauli string.
pub fn pauli_rotation_conjugate(h: &PauliSum, generator: &PauliString, phi: f64) -> Result<PauliSum> {
    if generator.num_qubits() != h.num_qubits() && !h.is_empty() {
        return Err(Error::Dimension { expected: h.num_qubits(), found: generator.num_qubits() });
    }
    if !generator.is_hermitian() {
        return Err(Error::InvalidPauli {
            input: generator.to_string(),
            reason: "rotation generator must be Hermitian".into(),
        });
    }
    let (c, s) = cos_sin(phi);
    let mut out = PauliSum::zero(h.num_qubits()).with_tolerance(h.tolerance());
    for (coeff, p) in h.iter() {
        if p.commutes_unchecked(generator) {
            out.accumulate_raw(coeff, *p);
            continue;
        }
        if c != 0.0 {
            out.accumulate_raw(coeff * c, *p);
        }
        if s != 0.0 {
            let partner = p.mul_unchecked(generator).times_i();
            let sign = partner.sign().expect("i·PG is Hermitian for anticommuting P, G");
            out.accumulate_raw(coeff * s * sign, partner.unsigned());
        }
    }
    Ok(out)
}

/// Conjugation by the single-qubit rotation `exp(-i (φ/2) σ_axis)` on `qubit`.
pub fn rotate_conjugate(h: &PauliSum, qubit: usize, axis: Axis, phi: f64) -> Result<PauliSum> {
    if qubit >= h.num_qubits() {
        return Err(Error::IndexOutOfRange { index: qubit, n: h.num_qubits() });
    }
    let g = PauliString::single(h.num_qubits(), qubit, axis.pauli())?;
    pauli_rotation_conjugate(h, &g, phi)
}

/// Conjugation by the coupling evolution of edge `(i, j)` for `θ = J t`.
pub fn coupling_conjugate(h: &PauliSum, edge: (usize, usize), kind: Coupling, theta: f64) -> Result<PauliSum> {
    let (i, j) = edge;
    let n = h.num_qubits();
    for q in [i, j] {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
    }
    if i == j {
        return Err(Error::argument("edge", format!("coupling edge ({i}, {j}) joins a qubit to itself")));
    }
    kind.generators(n, i, j)?.iter().try_fold(h.clone(), |acc, g| pauli_rotation_conjugate(&acc, g, 2.0 * theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::dense;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn sum(s: &str) -> PauliSum {
        PauliSum::from_string(1.0, s.parse().unwrap()).unwrap()
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn pi_half_pulse_step() {
        // -Z2 Y3 under (π/2)ˣ on qubit 2 → Y2 Y3 (qubits 1 and 2 here).
        let h = PauliSum::from_string(-1.0, p("ZY")).unwrap();
        let out = rotate_conjugate(&h, 0, Axis::X, FRAC_PI_2).unwrap();
        assert_eq!(out.single_term(), Some((1.0, p("YY"))));
    }

    #[test]
    fn zero_angle_is_identity() {
        let h = PauliSum::from_terms(2, [(0.3, p("XZ")), (-1.1, p("YY"))]).unwrap();
        for axis in Axis::ALL {
            assert_eq!(rotate_conjugate(&h, 1, axis, 0.0).unwrap(), h);
        }
    }

    #[test]
    fn generic_angle_matches_dense() {
        let out = rotate_conjugate(&sum("Z"), 0, Axis::X, FRAC_PI_3).unwrap();
        let want = PauliSum::from_terms(1, [(FRAC_PI_3.cos(), p("Z")), (-FRAC_PI_3.sin(), p("Y"))]).unwrap();
        assert!(out.approx_eq(&want, 1e-15));
        let u = dense::pauli_exponential_matrix(&p("X"), -FRAC_PI_3 / 2.0);
        let m = &u * dense::pauli_sum_matrix(&sum("Z")) * u.adjoint();
        assert!(dense::max_abs_diff(&m, &dense::pauli_sum_matrix(&want)) < 1e-14);
    }

    #[test]
    fn xy_quarter_rules() {
        let q = |s: &str| coupling_conjugate(&sum(s), (0, 1), Coupling::XY, FRAC_PI_4).unwrap().single_term();
        assert_eq!(q("XI"), Some((-1.0, p("ZY"))));
        assert_eq!(q("YI"), Some((1.0, p("ZX"))));
        assert_eq!(q("ZI"), Some((1.0, p("IZ"))));
        assert_eq!(q("IX"), Some((-1.0, p("YZ"))));
        assert_eq!(q("IY"), Some((1.0, p("XZ"))));
    }

    #[test]
    fn ising_quarter_rules() {
        let q = |s: &str| coupling_conjugate(&sum(s), (0, 1), Coupling::Ising, FRAC_PI_4).unwrap().single_term();
        assert_eq!(q("XI"), Some((1.0, p("YZ"))));
        assert_eq!(q("YI"), Some((-1.0, p("XZ"))));
        assert_eq!(q("ZI"), Some((1.0, p("ZI"))));
        assert_eq!(q("IX"), Some((1.0, p("ZY"))));
        assert_eq!(q("IY"), Some((-1.0, p("ZX"))));
    }

    #[test]
    fn xy_z_four_term_rule() {
        let theta: f64 = 0.3;
        let (c, s) = ((2.0 * theta).cos(), (2.0 * theta).sin());
        let out = coupling_conjugate(&sum("ZI"), (0, 1), Coupling::XY, theta).unwrap();
        let want =
            PauliSum::from_terms(2, [(c * c, p("ZI")), (s * s, p("IZ")), (c * s, p("XY")), (-c * s, p("YX"))]).unwrap();
        assert!(out.approx_eq(&want, 1e-15), "{out}");
    }

    #[test]
    fn non_adjacent_edges_and_errors() {
        let h = sum("XII");
        let out = coupling_conjugate(&h, (0, 2), Coupling::XY, FRAC_PI_4).unwrap();
        assert_eq!(out.single_term(), Some((-1.0, p("ZIY"))));
        assert!(coupling_conjugate(&h, (0, 0), Coupling::XY, 0.1).is_err());
        assert!(coupling_conjugate(&h, (0, 3), Coupling::Ising, 0.1).is_err());
        assert!(rotate_conjugate(&h, 5, Axis::Y, 0.1).is_err());
    }

    #[test]
    fn pi_rotation_flips_anticommuting_terms() {
        let out = rotate_conjugate(&sum("XZ"), 0, Axis::Z, PI).unwrap();
        assert_eq!(out.single_term(), Some((-1.0, p("XZ"))));
    }
}
