//! Measurement-free encoding with modified stabilizers, and logical gate schedules.
//!
//! A modified stabilizer `G̃` swaps `X ↔ Y` on a pivot qubit `a` of `G`. With the pivot
//! in `|0⟩`, `exp((π/4) G Z_a) = (1 + G Z_a)/√2` acts as `(1 + G)/√2`, a normalised
//! projection onto the `+1` eigenspace of `G`. Since `G Z_a = ∓i G̃` for an `X → Y`
//! (`Y → X`) swap, the applied factor is `exp(∓i (π/4) G̃)`.
//!
//! Entries are applied in list order. An entry's pivot must still be in `|0⟩`, so no
//! earlier modified stabilizer may act on it with `X` or `Y`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::compiler::{compile_generator, Schedule};
use crate::device::DeviceSpec;
use crate::error::{Error, Result};
use crate::pauli::{Axis, Pauli, PauliString, PauliSum};
use crate::sim::StateVector;

/// Swaps `X ↔ Y` on qubit `a`, phase untouched.
pub fn modify_stabilizer(g: &PauliString, a: usize) -> Result<PauliString> {
    if a >= g.num_qubits() {
        return Err(Error::IndexOutOfRange { index: a, n: g.num_qubits() });
    }
    let swapped = match g.letter(a) {
        Pauli::X => Pauli::Y,
        Pauli::Y => Pauli::X,
        other => {
            return Err(Error::InvalidPivot { generator: g.to_string(), qubit: a, letter: other.as_char() });
        }
    };
    g.with_letter(a, swapped)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanEntry {
    /// Generator index in the code.
    pub j: usize,
    /// Pivot qubit.
    pub a: usize,
    pub modified: PauliString,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingPlan {
    pub code: CodeSpec,
    /// In application order.
    pub entries: Vec<PlanEntry>,
    pub input_qubits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    GeneratorOutOfRange {
        entry: usize,
        j: usize,
    },
    GeneratorReuse {
        first: usize,
        second: usize,
        j: usize,
    },
    PivotOutOfRange {
        entry: usize,
        qubit: usize,
    },
    PivotReuse {
        first: usize,
        second: usize,
        qubit: usize,
    },
    PivotOnInput {
        entry: usize,
        qubit: usize,
    },
    InputOutOfRange {
        qubit: usize,
    },
    PivotLetter {
        entry: usize,
        qubit: usize,
        letter: char,
    },
    WrongModification {
        entry: usize,
        expected: String,
        found: String,
    },
    /// `earlier` acts on the pivot of `later` with `letter`.
    Order {
        earlier: usize,
        later: usize,
        qubit: usize,
        letter: char,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::GeneratorOutOfRange { entry, j } => write!(f, "entry {entry}: generator {j} does not exist"),
            Violation::GeneratorReuse { first, second, j } => {
                write!(f, "entries {first} and {second} both use generator {j}")
            }
            Violation::PivotOutOfRange { entry, qubit } => write!(f, "entry {entry}: pivot {qubit} out of range"),
            Violation::PivotReuse { first, second, qubit } => {
                write!(f, "pivot reuse: entries {first} and {second} share qubit {qubit}")
            }
            Violation::PivotOnInput { entry, qubit } => write!(f, "entry {entry}: pivot {qubit} is an input qubit"),
            Violation::InputOutOfRange { qubit } => write!(f, "input qubit {qubit} out of range"),
            Violation::PivotLetter { entry, qubit, letter } => {
                write!(f, "entry {entry}: generator carries {letter} on pivot {qubit}")
            }
            Violation::WrongModification { entry, expected, found } => {
                write!(f, "entry {entry}: modified stabilizer is {found}, expected {expected}")
            }
            Violation::Order { earlier, later, qubit, letter } => {
                write!(f, "entry {earlier} acts with {letter} on qubit {qubit}, the pivot of later entry {later}")
            }
        }
    }
}

impl EncodingPlan {
    /// Builds a plan from `(generator, pivot)` pairs in application order.
    pub fn new(code: &CodeSpec, pairs: &[(usize, usize)], input_qubits: &[usize]) -> Result<Self> {
        let mut entries = Vec::with_capacity(pairs.len());
        for &(j, a) in pairs {
            let g =
                code.generators.get(j).ok_or_else(|| Error::InvalidPlan(format!("generator {j} does not exist")))?;
            entries.push(PlanEntry { j, a, modified: modify_stabilizer(g, a)? });
        }
        Ok(EncodingPlan { code: code.clone(), entries, input_qubits: input_qubits.to_vec() })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Every violated plan invariant; empty when the plan is valid.
pub fn validate_plan(p: &EncodingPlan) -> Vec<Violation> {
    let n = p.code.n;
    let mut out = Vec::new();
    for &q in &p.input_qubits {
        if q >= n {
            out.push(Violation::InputOutOfRange { qubit: q });
        }
    }
    for (e, entry) in p.entries.iter().enumerate() {
        if entry.a >= n {
            out.push(Violation::PivotOutOfRange { entry: e, qubit: entry.a });
            continue;
        }
        if p.input_qubits.contains(&entry.a) {
            out.push(Violation::PivotOnInput { entry: e, qubit: entry.a });
        }
        for (f, other) in p.entries.iter().enumerate().take(e) {
            if other.a == entry.a {
                out.push(Violation::PivotReuse { first: f, second: e, qubit: entry.a });
            }
            if other.j == entry.j {
                out.push(Violation::GeneratorReuse { first: f, second: e, j: entry.j });
            }
        }
        let Some(g) = p.code.generators.get(entry.j) else {
            out.push(Violation::GeneratorOutOfRange { entry: e, j: entry.j });
            continue;
        };
        match modify_stabilizer(g, entry.a) {
            Ok(m) if m == entry.modified => {}
            Ok(m) => out.push(Violation::WrongModification {
                entry: e,
                expected: m.to_string(),
                found: entry.modified.to_string(),
            }),
            Err(_) => {
                out.push(Violation::PivotLetter { entry: e, qubit: entry.a, letter: g.letter(entry.a).as_char() })
            }
        }
    }
    for (later, entry) in p.entries.iter().enumerate() {
        if entry.a >= n {
            continue;
        }
        for (earlier, prior) in p.entries.iter().enumerate().take(later) {
            if prior.modified.num_qubits() != n {
                continue;
            }
            let letter = prior.modified.letter(entry.a);
            if matches!(letter, Pauli::X | Pauli::Y) {
                out.push(Violation::Order { earlier, later, qubit: entry.a, letter: letter.as_char() });
            }
        }
    }
    out
}

/// `exp((π/4) G Z_a)` written as `exp(i s (π/4) Q)` with `Q` Hermitian.
fn entry_exponent(g: &PauliString, a: usize) -> Result<(PauliString, f64)> {
    let m = g.multiply(&PauliString::single(g.num_qubits(), a, Pauli::Z)?)?;
    let q = PauliString::from_masks(g.num_qubits(), m.x_mask(), m.z_mask(), 0)?;
    let angle = match m.phase_exp() {
        1 => FRAC_PI_4,
        3 => -FRAC_PI_4,
        _ => return Err(Error::InvalidPivot { generator: g.to_string(), qubit: a, letter: g.letter(a).as_char() }),
    };
    Ok((q, angle))
}

fn checked(p: &EncodingPlan, psi: &StateVector) -> Result<()> {
    let v = validate_plan(p);
    if !v.is_empty() {
        let msgs: Vec<_> = v.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidPlan(msgs.join("; ")));
    }
    if psi.num_qubits() != p.code.n {
        return Err(Error::Dimension { expected: p.code.n, found: psi.num_qubits() });
    }
    Ok(())
}

/// Applies the plan's exponentials in order.
pub fn encode_state(psi: &StateVector, p: &EncodingPlan) -> Result<StateVector> {
    checked(p, psi)?;
    let mut out = psi.clone();
    for e in &p.entries {
        let (q, angle) = entry_exponent(&p.code.generators[e.j], e.a)?;
        out.apply_pauli_exponential(&q, angle)?;
    }
    Ok(out)
}

/// Exact inverse of [`encode_state`].
pub fn decode_state(psi: &StateVector, p: &EncodingPlan) -> Result<StateVector> {
    checked(p, psi)?;
    let mut out = psi.clone();
    for e in p.entries.iter().rev() {
        let (q, angle) = entry_exponent(&p.code.generators[e.j], e.a)?;
        out.apply_pauli_exponential(&q, -angle)?;
    }
    Ok(out)
}

/// Pivot-constraint graph: `j → k` when `G_k` acts on `j`'s pivot with X or Y.
fn topological_order(code: &CodeSpec, chosen: &[(usize, usize)]) -> Option<Vec<usize>> {
    let m = chosen.len();
    let mut indeg = vec![0usize; m];
    let mut succ = vec![Vec::new(); m];
    for (u, &(_, a)) in chosen.iter().enumerate() {
        for (v, &(k, _)) in chosen.iter().enumerate() {
            if u != v && matches!(code.generators[k].letter(a), Pauli::X | Pauli::Y) {
                succ[u].push(v);
                indeg[v] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..m).filter(|&u| indeg[u] == 0).collect();
    let mut order = Vec::with_capacity(m);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    (order.len() == m).then_some(order)
}

fn search_pivots(code: &CodeSpec, gens: &[usize], banned: u64, chosen: &mut Vec<(usize, usize)>) -> Option<Vec<usize>> {
    if chosen.len() == gens.len() {
        return topological_order(code, chosen);
    }
    let j = gens[chosen.len()];
    let g = &code.generators[j];
    let used: u64 = chosen.iter().fold(banned, |m, &(_, a)| m | 1 << a);
    for a in 0..code.n {
        if used >> a & 1 == 1 || !matches!(g.letter(a), Pauli::X | Pauli::Y) {
            continue;
        }
        chosen.push((j, a));
        if let Some(order) = search_pivots(code, gens, banned, chosen) {
            return Some(order);
        }
        chosen.pop();
    }
    None
}

/// Default plan: every generator with an X or Y letter gets the lowest admissible pivot,
/// backtracking until a pivot assignment admits an order. Z-only generators are left
/// out since `|0…0⟩` inputs already satisfy them.
pub fn default_plan(code: &CodeSpec, input_qubits: &[usize]) -> Result<EncodingPlan> {
    let mut banned = 0u64;
    for &q in input_qubits {
        if q >= code.n {
            return Err(Error::IndexOutOfRange { index: q, n: code.n });
        }
        banned |= 1 << q;
    }
    let gens: Vec<usize> = (0..code.generators.len()).filter(|&j| code.generators[j].x_mask() != 0).collect();
    let mut chosen = Vec::new();
    let order = search_pivots(code, &gens, banned, &mut chosen)
        .ok_or_else(|| Error::InvalidPlan("no pivot assignment admits a valid order".into()))?;
    let pairs: Vec<_> = order.into_iter().map(|u| chosen[u]).collect();
    EncodingPlan::new(code, &pairs, input_qubits)
}

/// Normalised `∏(1 + G_j)/2 ∏(1 + Z̄_i)/2` applied to the first basis state it does not
/// annihilate.
pub fn logical_zero(code: &CodeSpec) -> Result<StateVector> {
    let n = code.n;
    for b in 0..1usize << n.min(crate::sim::STATE_QUBIT_LIMIT) {
        let mut psi = StateVector::basis(n, b)?;
        for g in code.generators.iter().chain(&code.logical_z) {
            psi.project_plus(g)?;
        }
        if psi.norm() > 1e-6 {
            psi.normalize()?;
            return Ok(psi);
        }
    }
    Err(Error::code("generators", "codespace is empty"))
}

/// `∏ X̄_i^{bit i}` applied to `|0̄⟩`.
pub fn logical_basis_state(code: &CodeSpec, bits: u64) -> Result<StateVector> {
    let mut psi = logical_zero(code)?;
    for (i, x) in code.logical_x.iter().enumerate() {
        if bits >> i & 1 == 1 {
            psi.apply_pauli(x)?;
        }
    }
    Ok(psi)
}

/// Logical operation generated by Pauli strings on the device register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogicalGateRequest {
    /// `exp(i (φ/2) P̄)` for the logical Pauli `P̄ = generator`.
    PauliRotation { generator: PauliString, angle: f64 },
    /// Controlled phase between two blocks with logical `Z̄_A`, `Z̄_B` embedded in the
    /// joint register.
    ControlledPhase { first: PauliString, second: PauliString },
}

impl LogicalGateRequest {
    /// Rotation about `axis` of logical qubit `logical` of `code`.
    pub fn rotation(code: &CodeSpec, logical: usize, axis: Axis, angle: f64) -> Result<Self> {
        let x = *code
            .logical_x
            .get(logical)
            .ok_or_else(|| Error::argument("logical", format!("code has {} logical qubits", code.k)))?;
        let z = code.logical_z[logical];
        let generator = match axis {
            Axis::X => x,
            Axis::Z => z,
            // Y = iXZ
            Axis::Y => x.multiply(&z)?.times_i(),
        };
        Ok(LogicalGateRequest::PauliRotation { generator, angle })
    }

    /// Controlled phase between `a` on the low qubits and `b` on the high qubits.
    pub fn controlled_phase(a: &CodeSpec, b: &CodeSpec) -> Result<Self> {
        let n = a.n + b.n;
        if a.k != 1 || b.k != 1 {
            return Err(Error::argument("code", "controlled phase needs one logical qubit per block"));
        }
        let embed = |p: &PauliString, offset: usize| -> Result<PauliString> {
            let letters: Vec<_> = p.support().into_iter().map(|q| (q + offset, p.letter(q))).collect();
            let s = PauliString::from_sparse(n, &letters)?;
            Ok(if p.sign() == Some(-1.0) { s.negate() } else { s })
        };
        Ok(LogicalGateRequest::ControlledPhase {
            first: embed(&a.logical_z[0], 0)?,
            second: embed(&b.logical_z[0], a.n)?,
        })
    }

    /// Strings that must commute with every generator of the involved code(s).
    pub fn generators(&self) -> Result<Vec<PauliString>> {
        Ok(match self {
            LogicalGateRequest::PauliRotation { generator, .. } => vec![*generator],
            LogicalGateRequest::ControlledPhase { first, second } => vec![first.multiply(second)?, *first, *second],
        })
    }
}

/// Compiles `g` and re-seeds it so the schedule applies `exp(i (φ/2) g)`.
fn rotation_schedule(g: &PauliString, d: &DeviceSpec, phi: f64) -> Result<Schedule> {
    let s = compile_generator(g, d, None, 0.0)?;
    let (c, x) = s.seed_hamiltonian()?.single_term().expect("generic seeds are single terms");
    let t = phi.abs() / (2.0 * c.abs());
    let coeff = -phi.signum() * c.signum() * c;
    s.with_seed(PauliSum::from_string(coeff, x)?, t)
}

/// Schedules realising a logical gate, in time order.
///
/// A rotation by `φ` seeds `-Ω X` for `t = φ/(2Ω)`. The controlled phase evolves
/// `-Ω Z̄_A Z̄_B` for `π/(4Ω)` and then `+Ω Z̄_A` and `+Ω Z̄_B` for the same time, which
/// gives `diag(1, 1, 1, -1)` up to a global phase.
pub fn logical_gate_schedule(req: &LogicalGateRequest, d: &DeviceSpec) -> Result<Vec<Schedule>> {
    match req {
        LogicalGateRequest::PauliRotation { generator, angle } => Ok(vec![rotation_schedule(generator, d, *angle)?]),
        LogicalGateRequest::ControlledPhase { first, second } => {
            let zz = first.multiply(second)?;
            let half = std::f64::consts::FRAC_PI_2;
            Ok(vec![
                rotation_schedule(&zz, d, half)?,
                rotation_schedule(first, d, -half)?,
                rotation_schedule(second, d, -half)?,
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::apply_schedule;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn modify_examples() {
        let g1 = p("XZZXI");
        assert_eq!(modify_stabilizer(&g1, 0).unwrap(), p("YZZXI"));
        assert_eq!(modify_stabilizer(&modify_stabilizer(&g1, 0).unwrap(), 0).unwrap(), g1);
        assert!(matches!(modify_stabilizer(&g1, 1), Err(Error::InvalidPivot { letter: 'Z', .. })));
        assert!(modify_stabilizer(&p("-XZ"), 0).unwrap() == p("-YZ"));
    }

    #[test]
    fn five_qubit_reference_order_is_valid() {
        let c = CodeSpec::five_qubit();
        let plan = EncodingPlan::new(&c, &[(0, 0), (2, 2), (3, 1), (1, 4)], &[3]).unwrap();
        assert!(validate_plan(&plan).is_empty(), "{:?}", validate_plan(&plan));
    }

    #[test]
    fn violations_are_reported() {
        let c = CodeSpec::five_qubit();
        let plan = EncodingPlan::new(&c, &[(0, 0), (2, 0)], &[3]).unwrap();
        assert!(validate_plan(&plan).contains(&Violation::PivotReuse { first: 0, second: 1, qubit: 0 }));
        let plan = EncodingPlan::new(&c, &[(1, 4), (0, 0), (2, 2), (3, 1)], &[3]).unwrap();
        let v = validate_plan(&plan);
        assert!(v.iter().any(|x| matches!(x, Violation::Order { earlier: 0, later: 3, qubit: 1, .. })), "{v:?}");
        let plan = EncodingPlan::new(&c, &[(0, 3)], &[3]).unwrap();
        assert_eq!(validate_plan(&plan), vec![Violation::PivotOnInput { entry: 0, qubit: 3 }]);
    }

    #[test]
    fn default_plans_exist() {
        let five = default_plan(&CodeSpec::five_qubit(), &[3]).unwrap();
        assert!(validate_plan(&five).is_empty());
        let steane = default_plan(&CodeSpec::steane(), &[]).unwrap();
        assert_eq!(steane.entries.len(), 3);
        assert!(validate_plan(&steane).is_empty());
    }

    #[test]
    fn empty_plan_keeps_state() {
        let c =
            CodeSpec::new("free".into(), 2, 2, vec![], vec![p("XI"), p("IX")], vec![p("ZI"), p("IZ")], vec![]).unwrap();
        let plan = default_plan(&c, &[0, 1]).unwrap();
        let psi = StateVector::product_real(&[0.4, 1.2]).unwrap();
        assert_eq!(encode_state(&psi, &plan).unwrap(), psi);
    }

    #[test]
    fn encoded_zero_is_logical_zero() {
        let c = CodeSpec::five_qubit();
        let plan = default_plan(&c, &[3]).unwrap();
        let enc = encode_state(&StateVector::zero(5).unwrap(), &plan).unwrap();
        assert!((enc.fidelity(&logical_zero(&c).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_by_zero_is_identity() {
        let d = DeviceSpec::chain(5, 2.0, crate::pauli::Coupling::XY, 1.0, 1e-9).unwrap();
        let req = LogicalGateRequest::rotation(&CodeSpec::five_qubit(), 0, Axis::X, 0.0).unwrap();
        let s = logical_gate_schedule(&req, &d).unwrap();
        let psi = StateVector::product_real(&[0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
        let out = apply_schedule(&psi, &s[0], &d, None).unwrap();
        assert!((out.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = default_plan(&CodeSpec::steane(), &[]).unwrap();
        let json = plan.to_json().unwrap();
        let back = EncodingPlan::from_json(&json).unwrap();
        assert_eq!(back, plan);
        assert_eq!(back.to_json().unwrap(), json);
    }
}
