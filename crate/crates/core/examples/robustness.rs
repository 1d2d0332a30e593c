//! Monte Carlo fidelity under random pulse-angle errors.

use stabpulse::compiler::compile_code;
use stabpulse::sim::{fit_line, monte_carlo_fidelity, sweep_csv, NoiseDistribution, NoiseModel};
use stabpulse::{CodeSpec, DeviceSpec};

fn main() -> stabpulse::Result<()> {
    let code = CodeSpec::five_qubit();
    let d = DeviceSpec::from_json(include_str!("../data/chain5.json"))?;
    let compiled = compile_code(&code, &d, 1e-8)?;
    let mut reports = Vec::new();
    for sigma in [0.005, 0.01, 0.02, 0.04] {
        let noise = NoiseModel::new(sigma, NoiseDistribution::Gaussian, 1)?;
        reports.push(monte_carlo_fidelity(&compiled.schedules, &d, &code, &noise, 2000, 1)?);
    }
    print!("{}", sweep_csv(&reports));
    let s2: Vec<f64> = reports.iter().map(|r| r.sigma_theta.powi(2)).collect();
    let inf: Vec<f64> = reports.iter().map(|r| r.infidelity()).collect();
    let fit = fit_line(&s2, &inf)?;
    println!(
        "infidelity = {:.3} sigma^2 + {:.2e} (R^2 {:.4}), {} pulses",
        fit.slope,
        fit.intercept,
        fit.r_squared,
        compiled.pulse_count()
    );
    Ok(())
}
