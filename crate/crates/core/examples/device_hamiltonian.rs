//! Device descriptions and their always-on Hamiltonians.

use stabpulse::{Coupling, DeviceSpec};

fn main() -> stabpulse::Result<()> {
    let chain = DeviceSpec::chain(4, 1.0, Coupling::XY, 0.5, 1e-9)?;
    println!("{}-qubit chain, neighbours of qubit 1: {:?}", chain.num_qubits(), chain.neighbors(1));
    println!("H_sys = {}", chain.system_hamiltonian());
    println!("H_(1,2) = {}", chain.edge_hamiltonian(1, 2)?);
    println!("quarter period on (1,2): {} s", chain.quarter_time_of(1, 2)?);

    let bundled = DeviceSpec::from_json(include_str!("../data/ising3.json"))?;
    println!("\nbundled ising3: {}", bundled.system_hamiltonian());
    println!("{}", chain.to_json()?);
    Ok(())
}
