//! Isolating one term of the always-on Hamiltonian with four pi-pulse frames.

use stabpulse::toggling::{effective_hamiltonian, plan_extraction, plan_extraction_min_residual};
use stabpulse::{Coupling, DeviceSpec, PauliSum};

fn main() -> stabpulse::Result<()> {
    // Unit drive and coupling, so coefficients read directly in units of Omega and J.
    let d = DeviceSpec::chain(5, 1.0, Coupling::XY, 1.0, 1e-3)?;
    let target = PauliSum::from_string(1.0, "+IXIII".parse()?)?;

    let plan = plan_extraction(&d, &target, 0.01, 1)?;
    println!("first frame found: P1 = {}, P2 = {}", plan.p1(), plan.p2());
    for (k, h) in plan.frame_hamiltonians().iter().enumerate() {
        println!("  frame {k}: {h}");
    }
    let eff = effective_hamiltonian(&plan);
    println!("zeroth order: {}", eff.zeroth);
    println!("first order:  {}", eff.first);
    println!("residual: {:.3e}", eff.residual_norm);

    let best = plan_extraction_min_residual(&d, &target, 0.01, 1)?;
    let r = effective_hamiltonian(&best).residual_norm;
    println!("\nsmallest residual: P1 = {}, P2 = {}, residual {r:.3e}", best.p1(), best.p2());
    println!("{} pulses in {} layers over {:.3} time units", best.pulse_count(), best.pulse_layers(), best.duration());
    Ok(())
}
