//! Logical rotations and a controlled phase between two encoded blocks.

use std::f64::consts::PI;

use stabpulse::encoder::{logical_basis_state, logical_gate_schedule, LogicalGateRequest};
use stabpulse::sim::apply_schedule;
use stabpulse::{Axis, CodeSpec, DeviceSpec};

fn main() -> stabpulse::Result<()> {
    let code = CodeSpec::five_qubit();
    let d5 = DeviceSpec::from_json(include_str!("../data/chain5.json"))?;
    let req = LogicalGateRequest::rotation(&code, 0, Axis::X, PI / 2.0)?;
    for g in req.generators()? {
        println!("logical generator: {g}");
    }
    let zero = logical_basis_state(&code, 0)?;
    let one = logical_basis_state(&code, 1)?;
    let mut psi = zero.clone();
    for s in logical_gate_schedule(&req, &d5)? {
        psi = apply_schedule(&psi, &s, &d5, None)?;
    }
    println!("X(pi/2)|0>: P(0) = {:.6}, P(1) = {:.6}", psi.fidelity(&zero)?, psi.fidelity(&one)?);

    let d10 = DeviceSpec::from_json(include_str!("../data/chain10.json"))?;
    let cz = LogicalGateRequest::controlled_phase(&code, &code)?;
    let scheds = logical_gate_schedule(&cz, &d10)?;
    println!("controlled phase: {} schedules", scheds.len());
    for bits in 0..4u64 {
        let input = logical_basis_state(&code, bits & 1)?.tensor(&logical_basis_state(&code, bits >> 1)?)?;
        let out = scheds.iter().try_fold(input.clone(), |psi, s| apply_schedule(&psi, s, &d10, None))?;
        let amp = input.inner(&out)?;
        println!("  |{}{}> -> phase {:+.6} {:+.6}i", bits & 1, bits >> 1, amp.re, amp.im);
    }
    Ok(())
}
