//! A small planar surface code on a square array with measure qubits.

use stabpulse::compiler::compile_code;
use stabpulse::compiler::surface::{build_surface_code, SurfaceLayout};

fn main() -> stabpulse::Result<()> {
    let (rows, cols) = (2, 3);
    let layout = SurfaceLayout::new(rows, cols)?;
    let code = build_surface_code(rows, cols)?;
    let d = layout.device(1.0, 1.0, 1e-9)?;
    println!("{} qubits, {} generators, groups disjoint: {}", code.n, code.generators.len(), code.groups_disjoint());
    for g in &code.generators {
        println!("  {g}");
    }
    let compiled = compile_code(&code, &d, 1e-8)?;
    println!("compiled {} schedules with {} pulses", compiled.schedules.len(), compiled.pulse_count());
    Ok(())
}
