//! Exact simulation of schedules on small registers.

pub mod dense;
pub mod monte_carlo;
mod state;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::compiler::{Schedule, ScheduleStep};
use crate::device::DeviceSpec;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::toggling::ExtractionPlan;

pub use dense::CMatrix;
pub use monte_carlo::{fit_line, monte_carlo_fidelity, sweep_csv, FidelityReport, LineFit};
pub use state::{StateVector, STATE_QUBIT_LIMIT};

/// Largest register for which [`codespace_projector`] builds a dense matrix.
pub const PROJECTOR_QUBIT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseDistribution {
    #[default]
    Gaussian,
    /// Uniform on `[-√3 σ, √3 σ]`, which has standard deviation `σ`.
    Uniform,
}

/// Independent zero-mean errors on every single-qubit pulse angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma_theta: f64,
    #[serde(default)]
    pub distribution: NoiseDistribution,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(sigma_theta: f64, distribution: NoiseDistribution, seed: u64) -> Result<Self> {
        if !(sigma_theta >= 0.0 && sigma_theta.is_finite()) {
            return Err(Error::argument("sigma", format!("must be nonnegative, got {sigma_theta}")));
        }
        Ok(NoiseModel { sigma_theta, distribution, seed })
    }

    /// Generator for sample `stream`; distinct streams are independent.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    pub(crate) fn sampler(&self) -> AngleNoise {
        AngleNoise::new(self.sigma_theta, self.distribution)
    }
}

pub(crate) enum AngleNoise {
    None,
    Gaussian(Normal<f64>),
    Uniform(f64),
}

impl AngleNoise {
    fn new(sigma: f64, dist: NoiseDistribution) -> Self {
        if sigma == 0.0 {
            return AngleNoise::None;
        }
        match dist {
            NoiseDistribution::Gaussian => AngleNoise::Gaussian(Normal::new(0.0, sigma).expect("sigma checked")),
            NoiseDistribution::Uniform => AngleNoise::Uniform(3f64.sqrt() * sigma),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            AngleNoise::None => 0.0,
            AngleNoise::Gaussian(n) => n.sample(rng),
            AngleNoise::Uniform(w) => rng.random_range(-*w..=*w),
        }
    }
}

fn apply_block<R: Rng>(psi: &mut StateVector, plan: &ExtractionPlan, noise: &AngleNoise, rng: &mut R) -> Result<()> {
    let h = plan.device().system_hamiltonian();
    let pulses = plan.boundary_pulses();
    for _ in 0..plan.reps() {
        for set in &pulses {
            psi.evolve(&h, plan.segment_tau())?;
            for &(q, axis) in set {
                psi.apply_rotation(q, axis, std::f64::consts::PI + noise.draw(rng))?;
            }
        }
    }
    Ok(())
}

pub(crate) fn apply_step<R: Rng>(
    psi: &mut StateVector,
    step: &ScheduleStep,
    noise: &AngleNoise,
    rng: &mut R,
) -> Result<()> {
    let n = psi.num_qubits();
    match step {
        ScheduleStep::Rotation { pulses, .. } => {
            for p in pulses {
                psi.apply_rotation(p.qubit, p.axis, p.angle + noise.draw(rng))?;
            }
        }
        ScheduleStep::CoupledQuarter { edges, coupling, direction, .. } => {
            let theta = match direction {
                crate::compiler::Direction::Forward => std::f64::consts::FRAC_PI_4,
                crate::compiler::Direction::Inverse => -std::f64::consts::FRAC_PI_4,
            };
            for &(i, j) in edges {
                for g in coupling.generators(n, i, j)? {
                    psi.apply_pauli_exponential(&g, -theta)?;
                }
            }
        }
        ScheduleStep::Seed { h_ini, duration } => psi.evolve(h_ini, *duration)?,
        ScheduleStep::Extraction { plan, .. } => apply_block(psi, plan, noise, rng)?,
    }
    Ok(())
}

/// Evolves `psi` through `s` step by step.
///
/// Quarter steps are applied as the commuting Pauli exponentials of their coupling;
/// seeds evolve exactly. With `noise`, every pulse angle (pi pulses inside extraction
/// blocks included) gets an independent draw from stream 0 of the noise seed.
pub fn apply_schedule(
    psi: &StateVector,
    s: &Schedule,
    d: &DeviceSpec,
    noise: Option<&NoiseModel>,
) -> Result<StateVector> {
    if psi.num_qubits() != d.num_qubits() {
        return Err(Error::Dimension { expected: d.num_qubits(), found: psi.num_qubits() });
    }
    if s.num_qubits() != d.num_qubits() {
        return Err(Error::Dimension { expected: d.num_qubits(), found: s.num_qubits() });
    }
    s.check_nesting()?;
    let (sampler, mut rng) = match noise {
        Some(m) => (m.sampler(), m.rng(0)),
        None => (AngleNoise::None, ChaCha8Rng::seed_from_u64(0)),
    };
    let mut out = psi.clone();
    for step in &s.steps {
        apply_step(&mut out, step, &sampler, &mut rng)?;
    }
    Ok(out)
}

/// Dense unitary of a noiseless schedule, column by column.
pub fn schedule_unitary(s: &Schedule, d: &DeviceSpec) -> Result<CMatrix> {
    let n = d.num_qubits();
    if n > dense::DENSE_MATRIX_LIMIT {
        return Err(Error::TooLarge { n, limit: dense::DENSE_MATRIX_LIMIT });
    }
    let dim = 1usize << n;
    let mut u = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let out = apply_schedule(&StateVector::basis(n, b)?, s, d, None)?;
        for (r, a) in out.amplitudes().iter().enumerate() {
            u[(r, b)] = *a;
        }
    }
    Ok(u)
}

/// Dense projector onto the joint +1 eigenspace of all generators, with its rank.
pub fn codespace_projector(c: &CodeSpec) -> Result<(CMatrix, usize)> {
    if c.n > PROJECTOR_QUBIT_LIMIT {
        return Err(Error::TooLarge { n: c.n, limit: PROJECTOR_QUBIT_LIMIT });
    }
    check_commuting(&c.generators)?;
    let dim = 1usize << c.n;
    let mut p = CMatrix::zeros(dim, dim);
    for b in 0..dim {
        let mut col = StateVector::basis(c.n, b)?;
        for g in &c.generators {
            col.project_plus(g)?;
        }
        for (r, a) in col.amplitudes().iter().enumerate() {
            p[(r, b)] = *a;
        }
    }
    let trace: f64 = (0..dim).map(|k| p[(k, k)].re).sum();
    Ok((p, trace.round() as usize))
}

fn check_commuting(ops: &[PauliString]) -> Result<()> {
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::code("generators", format!("{a} and {b} do not commute")));
            }
        }
    }
    Ok(())
}

/// `U h U†` on dense matrices, for cross-checking symbolic conjugation.
pub fn conjugated_matrix(u: &CMatrix, h: &PauliSum) -> CMatrix {
    u * dense::pauli_sum_matrix(h) * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_generator;
    use crate::pauli::Coupling;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn empty_schedule_leaves_state() {
        let d = DeviceSpec::chain(2, 1.0, Coupling::XY, 1.0, 1e-9).unwrap();
        let s = compile_generator(&p("XI"), &d, None, 0.0).unwrap();
        let psi = StateVector::product_real(&[0.3, 0.9]).unwrap();
        assert_eq!(apply_schedule(&psi, &s, &d, None).unwrap(), psi);
    }

    #[test]
    fn schedule_unitary_generates_target() {
        let d = DeviceSpec::chain(4, 0.7, Coupling::XY, 1.0, 1e-9).unwrap();
        let s = compile_generator(&p("YZXZ"), &d, None, 0.4).unwrap();
        let u = schedule_unitary(&s, &d).unwrap();
        let want = dense::evolution_matrix(&PauliSum::from_string(0.7, p("YZXZ")).unwrap(), 0.4).unwrap();
        assert!(dense::max_abs_diff(&u, &want) < 1e-12);
    }

    #[test]
    fn projector_ranks() {
        let (p5, r5) = codespace_projector(&CodeSpec::five_qubit()).unwrap();
        assert_eq!(r5, 2);
        assert!(dense::max_abs_diff(&(&p5 * &p5), &p5) < 1e-12);
        let (_, r3) = codespace_projector(&CodeSpec::three_qubit()).unwrap();
        assert_eq!(r3, 2);
    }

    #[test]
    fn noise_is_reproducible() {
        let d = DeviceSpec::chain(3, 1.0, Coupling::XY, 1.0, 1e-9).unwrap();
        let s = compile_generator(&p("XZX"), &d, None, 0.1).unwrap();
        let m = NoiseModel::new(0.05, NoiseDistribution::Uniform, 7).unwrap();
        let psi = StateVector::zero(3).unwrap();
        let a = apply_schedule(&psi, &s, &d, Some(&m)).unwrap();
        let b = apply_schedule(&psi, &s, &d, Some(&m)).unwrap();
        assert_eq!(a, b);
        assert!(a.fidelity(&apply_schedule(&psi, &s, &d, None).unwrap()).unwrap() < 1.0);
    }

    #[test]
    fn negative_sigma_rejected() {
        assert!(NoiseModel::new(-0.1, NoiseDistribution::Gaussian, 0).is_err());
    }
}
