//! Pauli-string arithmetic and exact conjugation through pulses and couplings.

use std::f64::consts::PI;

use stabpulse::pauli::{coupling_conjugate, rotate_conjugate};
use stabpulse::{Axis, Coupling, PauliString, PauliSum};

fn main() -> stabpulse::Result<()> {
    let a: PauliString = "+XZZXI".parse()?;
    let b: PauliString = "+IXZZX".parse()?;
    println!("{a} * {b} = {}", a.multiply(&b)?);
    println!("commute: {}", a.commutes(&b)?);
    println!("support of {a}: {:?}, weight {}", a.support(), a.weight());

    // A pi/2 Y pulse on qubit 0 turns Z into X.
    let z0 = PauliSum::from_string(1.0, "+ZII".parse()?)?;
    println!("Ry(pi/2) Z0 Ry(pi/2)^dag = {}", rotate_conjugate(&z0, 0, Axis::Y, PI / 2.0)?);

    // A quarter period of XY coupling moves Z across the edge.
    let z1 = PauliSum::from_string(1.0, "+IZI".parse()?)?;
    for theta in [PI / 8.0, PI / 4.0] {
        let h = coupling_conjugate(&z1, (1, 2), Coupling::XY, theta)?;
        println!("XY(theta = {theta:.4}) Z1 = {h}");
    }

    // Ising coupling builds a two-body term from a single-qubit one.
    let x0 = PauliSum::from_string(1.0, "+XII".parse()?)?;
    println!("Ising(pi/4) X0 = {}", coupling_conjugate(&x0, (0, 1), Coupling::Ising, PI / 4.0)?);
    Ok(())
}
