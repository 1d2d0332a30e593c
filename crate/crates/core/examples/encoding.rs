//! Preparing codewords without measurement and reading the stabilizers back.

use stabpulse::encoder::{decode_state, default_plan, encode_state, validate_plan};
use stabpulse::{CodeSpec, StateVector};

fn main() -> stabpulse::Result<()> {
    let code = CodeSpec::five_qubit();
    let plan = default_plan(&code, &[3])?;
    println!("plan violations: {:?}", validate_plan(&plan));
    for e in &plan.entries {
        println!("  G{} on pivot {}: {}", e.j + 1, e.a, e.modified);
    }

    // |psi> on qubit 3, every other qubit in |0>.
    let mut angles = vec![0.0; code.n];
    angles[3] = 0.8;
    let input = StateVector::product_real(&angles)?;
    let encoded = encode_state(&input, &plan)?;
    for (k, g) in code.generators.iter().enumerate() {
        println!("  <G{}> = {:+.10}", k + 1, encoded.expectation(g)?);
    }
    let back = decode_state(&encoded, &plan)?;
    println!("decode fidelity: {:.12}", back.fidelity(&input)?);
    Ok(())
}
