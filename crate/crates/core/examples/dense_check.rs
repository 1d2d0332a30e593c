//! Checking a compiled schedule against the exact propagator.

use stabpulse::compiler::{compile_generator, verify_schedule};
use stabpulse::sim::dense::{effective_generator, evolution_matrix, max_abs_diff};
use stabpulse::sim::schedule_unitary;
use stabpulse::{Coupling, DeviceSpec};

fn main() -> stabpulse::Result<()> {
    let d = DeviceSpec::chain(5, 1.0, Coupling::XY, 1.0, 1e-3)?;
    let g = "+XZZXI".parse()?;
    let tau_ini = 0.3;
    let s = compile_generator(&g, &d, None, tau_ini)?;
    let v = verify_schedule(&s)?;
    println!("symbolic: {}", v.generated);

    let u = schedule_unitary(&s, &d)?;
    let want = evolution_matrix(&v.generated, tau_ini)?;
    println!("max |U - exp(-i H t)| = {:.2e}", max_abs_diff(&u, &want));

    // The seed is the only step taking time, so log(U) over it recovers H.
    let h = effective_generator(&u, tau_ini, d.num_qubits())?;
    println!("recovered generator: {h}");
    Ok(())
}
