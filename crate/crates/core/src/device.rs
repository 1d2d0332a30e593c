//! Physical qubit array with an always-on Hamiltonian `H = H₀ + H_int`.
//!
//! Energies and couplings are angular frequencies (rad/s) and times are seconds, so
//! `θ = J t` is dimensionless.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Coupling, Pauli, PauliString, PauliSum, MAX_QUBITS};

/// One coupling edge `J (X_i X_j + Y_i Y_j)` or `J Z_i Z_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub kind: Coupling,
    #[serde(rename = "J")]
    pub j_coupling: f64,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.i.min(self.j), self.i.max(self.j))
    }

    pub fn touches(&self, q: usize) -> bool {
        self.i == q || self.j == q
    }

    pub fn other(&self, q: usize) -> Option<usize> {
        if self.i == q {
            Some(self.j)
        } else if self.j == q {
            Some(self.i)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDevice {
    n: usize,
    omega: Vec<f64>,
    epsilon: Vec<f64>,
    edges: Vec<Edge>,
    tau_rot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDevice", into = "RawDevice")]
pub struct DeviceSpec {
    n: usize,
    omega: Vec<f64>,
    epsilon: Vec<f64>,
    edges: Vec<Edge>,
    tau_rot: f64,
}

impl TryFrom<RawDevice> for DeviceSpec {
    type Error = Error;

    fn try_from(raw: RawDevice) -> Result<Self> {
        DeviceSpec::new(raw.n, raw.omega, raw.epsilon, raw.edges, raw.tau_rot)
    }
}

impl From<DeviceSpec> for RawDevice {
    fn from(d: DeviceSpec) -> Self {
        RawDevice { n: d.n, omega: d.omega, epsilon: d.epsilon, edges: d.edges, tau_rot: d.tau_rot }
    }
}

impl DeviceSpec {
    pub fn new(n: usize, omega: Vec<f64>, epsilon: Vec<f64>, edges: Vec<Edge>, tau_rot: f64) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::device("n", format!("must be between 1 and {MAX_QUBITS}, got {n}")));
        }
        for (name, values) in [("omega", &omega), ("epsilon", &epsilon)] {
            if values.len() != n {
                return Err(Error::device(name, format!("expected {n} entries, got {}", values.len())));
            }
            if let Some(k) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::device(format!("{name}[{k}]"), "must be finite"));
            }
        }
        let mut seen = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            let field = |f: &str| format!("edges[{k}].{f}");
            if e.i >= n {
                return Err(Error::device(field("i"), format!("qubit {} out of range for n = {n}", e.i)));
            }
            if e.j >= n {
                return Err(Error::device(field("j"), format!("qubit {} out of range for n = {n}", e.j)));
            }
            if e.i == e.j {
                return Err(Error::device(field("j"), "edge endpoints must differ"));
            }
            if !(e.j_coupling > 0.0 && e.j_coupling.is_finite()) {
                return Err(Error::device(field("J"), format!("must be positive and finite, got {}", e.j_coupling)));
            }
            if !seen.insert(e.key()) {
                return Err(Error::device(field("i"), format!("duplicate edge {:?}", e.key())));
            }
        }
        if !(tau_rot > 0.0 && tau_rot.is_finite()) {
            return Err(Error::device("tau_rot", format!("must be positive, got {tau_rot}")));
        }
        Ok(DeviceSpec { n, omega, epsilon, edges, tau_rot })
    }

    /// Open chain `0 - 1 - … - (n-1)` with uniform `Ω`, `ε = 0`, and one coupling kind.
    pub fn chain(n: usize, omega: f64, kind: Coupling, j: f64, tau_rot: f64) -> Result<Self> {
        let edges = (0..n.saturating_sub(1)).map(|i| Edge { i, j: i + 1, kind, j_coupling: j }).collect();
        DeviceSpec::new(n, vec![omega; n], vec![0.0; n], edges, tau_rot)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tau_rot(&self) -> f64 {
        self.tau_rot
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge> {
        let key = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.key() == key)
    }

    /// Neighbours of `q`, sorted ascending.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().filter_map(|e| e.other(q)).collect();
        out.sort_unstable();
        out
    }

    /// `Σ_i (Ω_i X_i + ε_i Z_i) + Σ_edges J·(XX + YY)` or `J·ZZ`.
    pub fn system_hamiltonian(&self) -> PauliSum {
        let mut h = PauliSum::zero(self.n);
        let add = |h: &mut PauliSum, c: f64, p: PauliString| h.add_term(c, p).expect("device terms are valid");
        for q in 0..self.n {
            if self.omega[q] != 0.0 {
                add(&mut h, self.omega[q], PauliString::single(self.n, q, Pauli::X).unwrap());
            }
            if self.epsilon[q] != 0.0 {
                add(&mut h, self.epsilon[q], PauliString::single(self.n, q, Pauli::Z).unwrap());
            }
        }
        for e in &self.edges {
            for g in e.kind.generators(self.n, e.i, e.j).unwrap() {
                add(&mut h, e.j_coupling, g);
            }
        }
        h
    }

    /// The sub-sum `H_edge` of one coupling edge.
    pub fn edge_hamiltonian(&self, a: usize, b: usize) -> Result<PauliSum> {
        let e = self.edge(a, b).ok_or_else(|| Error::UnsupportedCoupling(format!("device has no edge ({a}, {b})")))?;
        let gens = e.kind.generators(self.n, e.i, e.j)?;
        PauliSum::from_terms(self.n, gens.into_iter().map(|g| (e.j_coupling, g)))
    }

    /// `τ_op` of one edge.
    pub fn quarter_time_of(&self, a: usize, b: usize) -> Result<f64> {
        let e = self.edge(a, b).ok_or_else(|| Error::UnsupportedCoupling(format!("device has no edge ({a}, {b})")))?;
        quarter_time(e.j_coupling)
    }
}

/// Builds the always-on system Hamiltonian of a device.
pub fn build_system_hamiltonian(d: &DeviceSpec) -> PauliSum {
    d.system_hamiltonian()
}

/// `τ_op = π / (4J)`, the time at which a coupling evolution becomes a Clifford map.
pub fn quarter_time(j: f64) -> Result<f64> {
    if !(j > 0.0 && j.is_finite()) {
        return Err(Error::argument("J", format!("must be positive, got {j}")));
    }
    Ok(PI / (4.0 * j))
}

/// Time cost in units of `τ_ini`, `τ_rot`, and `τ_op`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TimingBudget {
    pub count_ini: u64,
    pub count_rot: u64,
    pub count_op: u64,
}

impl TimingBudget {
    pub const ZERO: TimingBudget = TimingBudget { count_ini: 0, count_rot: 0, count_op: 0 };

    pub fn new(count_ini: u64, count_rot: u64, count_op: u64) -> Self {
        TimingBudget { count_ini, count_rot, count_op }
    }

    pub fn total_seconds(&self, tau_ini: f64, tau_rot: f64, tau_op: f64) -> f64 {
        self.count_ini as f64 * tau_ini + self.count_rot as f64 * tau_rot + self.count_op as f64 * tau_op
    }

    pub fn times(&self, k: u64) -> Self {
        TimingBudget::new(self.count_ini * k, self.count_rot * k, self.count_op * k)
    }
}

impl Add for TimingBudget {
    type Output = TimingBudget;

    fn add(self, o: TimingBudget) -> TimingBudget {
        TimingBudget::new(self.count_ini + o.count_ini, self.count_rot + o.count_rot, self.count_op + o.count_op)
    }
}

impl AddAssign for TimingBudget {
    fn add_assign(&mut self, o: TimingBudget) {
        *self = *self + o;
    }
}

impl std::iter::Sum for TimingBudget {
    fn sum<I: Iterator<Item = TimingBudget>>(iter: I) -> Self {
        iter.fold(TimingBudget::ZERO, Add::add)
    }
}

impl std::fmt::Display for TimingBudget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}τ_ini + {}τ_rot + {}τ_op", self.count_ini, self.count_rot, self.count_op)
    }
}
