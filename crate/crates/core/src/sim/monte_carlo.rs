use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{apply_step, NoiseModel};
use crate::code::CodeSpec;
use crate::compiler::Schedule;
use crate::device::DeviceSpec;
use crate::encoder::logical_zero;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub samples: usize,
    pub sigma_theta: f64,
    pub cycles: usize,
    pub mean_fidelity: f64,
    pub stderr: f64,
    /// Individual pulses in one cycle.
    pub n_pulses: usize,
    /// Duration of one cycle in seconds.
    pub duration: f64,
    /// `1 - N_P σ² t / (8 T)` with `t = cycles · T`.
    pub predicted: f64,
}

impl FidelityReport {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.mean_fidelity
    }
}

/// Mean fidelity `|⟨0̄|ψ⟩|²` after `cycles` noisy passes through `schedules`.
///
/// Sample `k` draws its pulse errors from stream `k` of the noise seed, so the report is
/// independent of thread count.
pub fn monte_carlo_fidelity(
    schedules: &[Schedule],
    d: &DeviceSpec,
    code: &CodeSpec,
    noise: &NoiseModel,
    samples: usize,
    cycles: usize,
) -> Result<FidelityReport> {
    if samples < MIN_SAMPLES {
        return Err(Error::argument("samples", format!("at least {MIN_SAMPLES} required, got {samples}")));
    }
    if code.n != d.num_qubits() {
        return Err(Error::Dimension { expected: d.num_qubits(), found: code.n });
    }
    for s in schedules {
        s.check_nesting()?;
        if s.num_qubits() != d.num_qubits() {
            return Err(Error::Dimension { expected: d.num_qubits(), found: s.num_qubits() });
        }
    }
    let zero = logical_zero(code)?;
    let sampler = noise.sampler();
    let fidelities: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut rng = noise.rng(k);
            let mut psi = zero.clone();
            for _ in 0..cycles {
                for s in schedules {
                    for step in &s.steps {
                        apply_step(&mut psi, step, &sampler, &mut rng)?;
                    }
                }
            }
            zero.fidelity(&psi)
        })
        .collect::<Result<_>>()?;
    let mean = fidelities.iter().sum::<f64>() / samples as f64;
    let var = fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
    let n_pulses: usize = schedules.iter().map(Schedule::pulse_count).sum();
    let duration: f64 = schedules.iter().map(Schedule::duration).sum();
    let sigma = noise.sigma_theta;
    Ok(FidelityReport {
        samples,
        sigma_theta: sigma,
        cycles,
        mean_fidelity: mean.clamp(0.0, 1.0),
        stderr: (var / samples as f64).sqrt(),
        n_pulses,
        duration,
        predicted: 1.0 - n_pulses as f64 * sigma * sigma * cycles as f64 / 8.0,
    })
}

/// Rows `sigma,mean,stderr,predicted`.
pub fn sweep_csv(reports: &[FidelityReport]) -> String {
    let mut out = String::from("sigma,mean,stderr,predicted\n");
    for r in reports {
        out.push_str(&format!("{},{},{},{}\n", r.sigma_theta, r.mean_fidelity, r.stderr, r.predicted));
    }
    out
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::argument("fit", "need at least two paired points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::argument("fit", "x values are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_code;
    use crate::sim::NoiseDistribution;

    fn five() -> (CodeSpec, DeviceSpec) {
        let d = DeviceSpec::from_json(include_str!("../../data/chain5.json")).unwrap();
        (CodeSpec::five_qubit(), d)
    }

    #[test]
    fn noiseless_fidelity_is_one() {
        let (c, d) = five();
        let compiled = compile_code(&c, &d, 1e-8).unwrap();
        let noise = NoiseModel::new(0.0, NoiseDistribution::Gaussian, 1).unwrap();
        let r = monte_carlo_fidelity(&compiled.schedules, &d, &c, &noise, 100, 1).unwrap();
        assert!((r.mean_fidelity - 1.0).abs() < 1e-12);
        assert_eq!(r.predicted, 1.0);
    }

    #[test]
    fn seeds_give_identical_reports() {
        let (c, d) = five();
        let compiled = compile_code(&c, &d, 1e-8).unwrap();
        let noise = NoiseModel::new(0.02, NoiseDistribution::Gaussian, 42).unwrap();
        let a = monte_carlo_fidelity(&compiled.schedules, &d, &c, &noise, 200, 1).unwrap();
        let b = monte_carlo_fidelity(&compiled.schedules, &d, &c, &noise, 200, 1).unwrap();
        assert_eq!(a, b);
        assert!(a.mean_fidelity < 1.0);
    }

    #[test]
    fn too_few_samples() {
        let (c, d) = five();
        let noise = NoiseModel::new(0.0, NoiseDistribution::Gaussian, 1).unwrap();
        assert!(monte_carlo_fidelity(&[], &d, &c, &noise, 10, 1).is_err());
    }

    #[test]
    fn line_fit() {
        let f = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert!((f.r_squared - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_header() {
        assert!(sweep_csv(&[]).starts_with("sigma,mean,stderr,predicted\n"));
    }
}
