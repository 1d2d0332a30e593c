//! Compiling every stabilizer generator of the bundled codes and checking the result.

use stabpulse::compiler::{compile_code, verify_schedule};
use stabpulse::{CodeSpec, DeviceSpec};

fn report(code: &CodeSpec, d: &DeviceSpec) -> stabpulse::Result<()> {
    let compiled = compile_code(code, d, 1e-8)?;
    println!("{} on {} qubits", code.name, d.num_qubits());
    for (k, s) in compiled.schedules.iter().enumerate() {
        let v = verify_schedule(s)?;
        let b = s.budget();
        println!(
            "  G{} {}: {} steps, count_rot {}, count_op {}, exact {}",
            k + 1,
            s.target,
            s.steps.len(),
            b.count_rot,
            b.count_op,
            v.is_exact()
        );
    }
    let b = compiled.budget;
    println!(
        "  total: count_ini {}, count_rot {}, count_op {}, {:.1} ns",
        b.count_ini,
        b.count_rot,
        b.count_op,
        compiled.duration() * 1e9
    );
    if let Some(r) = compiled.reference_budget {
        println!("  reference: count_rot {}, count_op {}", r.count_rot, r.count_op);
    }
    Ok(())
}

fn main() -> stabpulse::Result<()> {
    report(&CodeSpec::five_qubit(), &DeviceSpec::from_json(include_str!("../data/chain5.json"))?)?;
    report(&CodeSpec::steane(), &DeviceSpec::from_json(include_str!("../data/chain7.json"))?)?;
    Ok(())
}
