//! Nested conjugation schedules that turn a single-qubit seed into a stabilizer term.
//!
//! A schedule is stored in time order as
//!
//! ```text
//! U_m†, …, U_1†, seed, U_1, …, U_m
//! ```
//!
//! so the whole sequence propagates as `W exp(-i τ H_seed) W†` with `W = U_m ⋯ U_1`,
//! and the generated Hamiltonian is `W H_seed W†`. [`symbolic_verify`] reads the
//! forward half left to right and conjugates the seed step by step.
//!
//! Timing counts one `τ_ini` per seed, one `τ_op` per quarter-period layer (forward and
//! inverse each count) and one `τ_rot` per layer of simultaneous single-qubit pulses.
//! Extraction blocks add their pi-pulse layers to the rotation count.

pub mod recipes;
pub mod surface;

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::code::CodeSpec;
use crate::device::{quarter_time, DeviceSpec, TimingBudget};
use crate::error::{Error, Result};
use crate::pauli::{coupling_conjugate, rotate_conjugate, Axis, Coupling, Pauli, PauliString, PauliSum};
use crate::toggling::ExtractionPlan;

pub use recipes::Recipe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }

    fn theta(self) -> f64 {
        match self {
            Direction::Forward => FRAC_PI_4,
            Direction::Inverse => -FRAC_PI_4,
        }
    }
}

/// Single-qubit rotation `exp(-i (angle/2) σ_axis)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pulse {
    pub qubit: usize,
    pub axis: Axis,
    pub angle: f64,
}

impl Pulse {
    pub fn new(qubit: usize, axis: Axis, angle: f64) -> Self {
        Pulse { qubit, axis, angle }
    }

    pub fn half_pi(qubit: usize, axis: Axis) -> Self {
        Pulse::new(qubit, axis, FRAC_PI_2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleStep {
    /// Simultaneous pulses on distinct qubits.
    Rotation {
        pulses: Vec<Pulse>,
        duration: f64,
    },
    /// Quarter-period evolution `exp(∓i (π/4) H_edge/J)` on vertex-disjoint edges.
    CoupledQuarter {
        edges: Vec<(usize, usize)>,
        coupling: Coupling,
        direction: Direction,
        duration: f64,
    },
    Seed {
        h_ini: PauliSum,
        duration: f64,
    },
    Extraction {
        plan: Box<ExtractionPlan>,
        duration: f64,
    },
}

impl ScheduleStep {
    pub fn duration(&self) -> f64 {
        match self {
            ScheduleStep::Rotation { duration, .. }
            | ScheduleStep::CoupledQuarter { duration, .. }
            | ScheduleStep::Seed { duration, .. }
            | ScheduleStep::Extraction { duration, .. } => *duration,
        }
    }

    fn is_seed(&self) -> bool {
        matches!(self, ScheduleStep::Seed { .. } | ScheduleStep::Extraction { .. })
    }

    /// The step undoing this one's conjugation.
    pub fn inverse(&self) -> Option<ScheduleStep> {
        match self {
            ScheduleStep::Rotation { pulses, duration } => Some(ScheduleStep::Rotation {
                pulses: pulses.iter().map(|p| Pulse { angle: -p.angle, ..*p }).collect(),
                duration: *duration,
            }),
            ScheduleStep::CoupledQuarter { edges, coupling, direction, duration } => {
                Some(ScheduleStep::CoupledQuarter {
                    edges: edges.clone(),
                    coupling: *coupling,
                    direction: direction.flip(),
                    duration: *duration,
                })
            }
            _ => None,
        }
    }

    fn budget(&self) -> TimingBudget {
        match self {
            ScheduleStep::Rotation { pulses, .. } => TimingBudget::new(0, u64::from(!pulses.is_empty()), 0),
            ScheduleStep::CoupledQuarter { edges, .. } => TimingBudget::new(0, 0, u64::from(!edges.is_empty())),
            ScheduleStep::Seed { .. } => TimingBudget::new(1, 0, 0),
            ScheduleStep::Extraction { plan, .. } => TimingBudget::new(1, plan.pulse_layers() as u64, 0),
        }
    }

    fn pulse_count(&self) -> usize {
        match self {
            ScheduleStep::Rotation { pulses, .. } => pulses.len(),
            ScheduleStep::Extraction { plan, .. } => plan.pulse_count(),
            _ => 0,
        }
    }

    /// `h ↦ U h U†` for this step's unitary.
    pub fn conjugate(&self, h: &PauliSum) -> Result<PauliSum> {
        match self {
            ScheduleStep::Rotation { pulses, .. } => {
                pulses.iter().try_fold(h.clone(), |acc, p| rotate_conjugate(&acc, p.qubit, p.axis, p.angle))
            }
            ScheduleStep::CoupledQuarter { edges, coupling, direction, .. } => {
                edges.iter().try_fold(h.clone(), |acc, &e| coupling_conjugate(&acc, e, *coupling, direction.theta()))
            }
            _ => Err(Error::MalformedNesting("a seed cannot act as a conjugation step".into())),
        }
    }
}

/// One conjugation layer of a recipe or a compiled generator, innermost first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layer", rename_all = "snake_case")]
pub enum Layer {
    Rotate { pulses: Vec<Pulse> },
    Quarter { edges: Vec<(usize, usize)> },
}

/// Time-ordered pulse program for one generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub target: PauliString,
    pub steps: Vec<ScheduleStep>,
    /// Published per-generator counts, when this schedule replays a known table row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<TimingBudget>,
}

/// Result of [`verify_schedule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub generated: PauliSum,
    /// Signed string when the generated sum is a single term, coefficient sign folded in.
    pub string: Option<PauliString>,
    /// `Some(+1)` or `Some(-1)` when `string` equals `±target`.
    pub sign: Option<i8>,
}

impl Verification {
    pub fn is_exact(&self) -> bool {
        self.sign == Some(1)
    }
}

impl Schedule {
    /// Assembles `inverse(layers reversed), seed, layers` in time order.
    pub fn from_layers(target: PauliString, seed: ScheduleStep, layers: &[Layer], d: &DeviceSpec) -> Result<Self> {
        let mut forward = Vec::with_capacity(layers.len());
        for (k, layer) in layers.iter().enumerate() {
            forward.push(layer_step(layer, d).map_err(|e| match e {
                Error::UnsupportedCoupling(m) => Error::UnsupportedCoupling(format!("layer {k}: {m}")),
                other => other,
            })?);
        }
        let mut steps: Vec<ScheduleStep> = forward.iter().rev().map(|s| s.inverse().expect("layer step")).collect();
        steps.push(seed);
        steps.extend(forward);
        Ok(Schedule { target, steps, reference: None })
    }

    pub fn num_qubits(&self) -> usize {
        self.target.num_qubits()
    }

    pub fn seed_index(&self) -> Result<usize> {
        let seeds: Vec<_> = self.steps.iter().enumerate().filter(|(_, s)| s.is_seed()).map(|(k, _)| k).collect();
        match seeds.as_slice() {
            [k] => Ok(*k),
            [] => Err(Error::MalformedNesting("schedule has no seed step".into())),
            _ => Err(Error::MalformedNesting(format!("schedule has {} seed steps, expected one", seeds.len()))),
        }
    }

    /// Checks mirror symmetry around the seed.
    pub fn check_nesting(&self) -> Result<usize> {
        let s = self.seed_index()?;
        let after = self.steps.len() - s - 1;
        if s != after {
            return Err(Error::MalformedNesting(format!("{s} steps before the seed but {after} after it")));
        }
        for k in 0..s {
            let fwd = &self.steps[s + 1 + k];
            let inv = &self.steps[s - 1 - k];
            if fwd.inverse().as_ref() != Some(inv) {
                return Err(Error::MalformedNesting(format!("step {} does not undo step {}", s - 1 - k, s + 1 + k)));
            }
        }
        Ok(s)
    }

    pub fn seed_hamiltonian(&self) -> Result<PauliSum> {
        match &self.steps[self.seed_index()?] {
            ScheduleStep::Seed { h_ini, .. } => Ok(h_ini.clone()),
            ScheduleStep::Extraction { plan, .. } => Ok(plan.target().clone()),
            _ => unreachable!("seed_index points at a seed"),
        }
    }

    /// Replaces the seed by `h_ini` evolved for `duration`.
    pub fn with_seed(mut self, h_ini: PauliSum, duration: f64) -> Result<Self> {
        let k = self.seed_index()?;
        self.steps[k] = ScheduleStep::Seed { h_ini, duration };
        Ok(self)
    }

    /// Adds an outermost conjugation layer.
    pub fn wrap(mut self, layer: &Layer, d: &DeviceSpec) -> Result<Self> {
        let fwd = layer_step(layer, d)?;
        self.steps.insert(0, fwd.inverse().expect("layer step"));
        self.steps.push(fwd);
        Ok(self)
    }

    /// Counts under the module's convention.
    pub fn budget(&self) -> TimingBudget {
        self.steps.iter().map(ScheduleStep::budget).sum()
    }

    /// Sum of explicit step durations.
    pub fn duration(&self) -> f64 {
        self.steps.iter().map(ScheduleStep::duration).sum()
    }

    /// Individual single-qubit pulses, extraction pi pulses included.
    pub fn pulse_count(&self) -> usize {
        self.steps.iter().map(ScheduleStep::pulse_count).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sched: Schedule = serde_json::from_str(s)?;
        sched.check_nesting()?;
        Ok(sched)
    }
}

fn layer_step(layer: &Layer, d: &DeviceSpec) -> Result<ScheduleStep> {
    match layer {
        Layer::Rotate { pulses } => {
            let mut seen = BTreeSet::new();
            for p in pulses {
                if p.qubit >= d.num_qubits() {
                    return Err(Error::IndexOutOfRange { index: p.qubit, n: d.num_qubits() });
                }
                if !seen.insert(p.qubit) {
                    return Err(Error::argument("pulses", format!("qubit {} pulsed twice in one layer", p.qubit)));
                }
            }
            Ok(ScheduleStep::Rotation { pulses: pulses.clone(), duration: d.tau_rot() })
        }
        Layer::Quarter { edges } => {
            let (coupling, j) = quarter_group(edges, d)?;
            Ok(ScheduleStep::CoupledQuarter {
                edges: edges.clone(),
                coupling,
                direction: Direction::Forward,
                duration: quarter_time(j)?,
            })
        }
    }
}

/// Coupling kind and strength shared by a simultaneous quarter layer.
fn quarter_group(edges: &[(usize, usize)], d: &DeviceSpec) -> Result<(Coupling, f64)> {
    let mut used = BTreeSet::new();
    let mut shared: Option<(Coupling, f64)> = None;
    if edges.is_empty() {
        return Err(Error::argument("edges", "quarter layer without edges"));
    }
    for &(a, b) in edges {
        let e = d
            .edge(a, b)
            .ok_or_else(|| Error::UnsupportedCoupling(format!("device has no coupling between qubits {a} and {b}")))?;
        if !used.insert(a) || !used.insert(b) {
            return Err(Error::argument("edges", format!("edges of one quarter layer share a qubit at ({a}, {b})")));
        }
        match shared {
            None => shared = Some((e.kind, e.j_coupling)),
            Some((kind, j)) => {
                if kind != e.kind {
                    return Err(Error::UnsupportedCoupling(format!(
                        "edge ({a}, {b}) is {:?} but the layer is {kind:?}",
                        e.kind
                    )));
                }
                if (j - e.j_coupling).abs() > 1e-12 * j {
                    return Err(Error::UnsupportedCoupling(format!(
                        "edge ({a}, {b}) has J = {} but the layer uses J = {j}",
                        e.j_coupling
                    )));
                }
            }
        }
    }
    Ok(shared.expect("non-empty"))
}

/// Conjugates the seed by every forward step after it.
pub fn symbolic_verify(s: &Schedule) -> Result<PauliSum> {
    let k = s.check_nesting()?;
    let mut h = s.seed_hamiltonian()?;
    for step in &s.steps[k + 1..] {
        h = step.conjugate(&h)?;
    }
    Ok(h)
}

/// [`symbolic_verify`] plus a comparison with the declared target.
pub fn verify_schedule(s: &Schedule) -> Result<Verification> {
    let generated = symbolic_verify(s)?;
    let string = generated.single_term().map(|(c, p)| if c < 0.0 { p.negate() } else { p });
    let sign = string.and_then(|p| {
        if p == s.target {
            Some(1)
        } else if p == s.target.negate() {
            Some(-1)
        } else {
            None
        }
    });
    Ok(Verification { generated, string, sign })
}

/// Budget of `s`, after checking its quarter steps against the device.
pub fn schedule_time(s: &Schedule, d: &DeviceSpec) -> Result<TimingBudget> {
    for (k, step) in s.steps.iter().enumerate() {
        if let ScheduleStep::CoupledQuarter { edges, coupling, .. } = step {
            let (kind, _) =
                quarter_group(edges, d).map_err(|e| Error::UnsupportedCoupling(format!("step {k}: {e}")))?;
            if kind != *coupling {
                return Err(Error::UnsupportedCoupling(format!(
                    "step {k} declares {coupling:?}, device edges are {kind:?}"
                )));
            }
        }
    }
    Ok(s.budget())
}

fn seed_step(g: &PauliString, q: usize, d: &DeviceSpec, tau_ini: f64) -> Result<ScheduleStep> {
    let omega = d.omega()[q];
    if omega == 0.0 {
        return Err(Error::InvalidTarget(format!("qubit {q} has no transverse field to seed {g}")));
    }
    let h_ini = PauliSum::from_string(omega, PauliString::single(d.num_qubits(), q, Pauli::X)?)?;
    Ok(ScheduleStep::Seed { h_ini, duration: tau_ini })
}

fn check_generator(g: &PauliString, d: &DeviceSpec) -> Result<()> {
    if g.num_qubits() != d.num_qubits() {
        return Err(Error::Dimension { expected: d.num_qubits(), found: g.num_qubits() });
    }
    if !g.is_hermitian() {
        return Err(Error::InvalidTarget(format!("{g} is not Hermitian")));
    }
    if g.weight() == 0 {
        return Err(Error::InvalidTarget("identity has no seed qubit".into()));
    }
    Ok(())
}

/// Compiles `g`, replaying `recipe` when given and growing it generically otherwise.
///
/// The generic path seeds `Ω_q X_q` on the lowest support qubit, grows along a
/// breadth-first spanning tree of the support (lowest neighbour first) one tree level
/// per quarter layer, then fixes letters and finally the sign.
pub fn compile_generator(g: &PauliString, d: &DeviceSpec, recipe: Option<&Recipe>, tau_ini: f64) -> Result<Schedule> {
    check_generator(g, d)?;
    if !(tau_ini >= 0.0 && tau_ini.is_finite()) {
        return Err(Error::argument("tau_ini", format!("must be nonnegative, got {tau_ini}")));
    }
    let sched = match recipe {
        Some(r) => {
            if r.target != *g {
                return Err(Error::InvalidTarget(format!("recipe builds {}, asked for {g}", r.target)));
            }
            r.schedule(d, tau_ini)?
        }
        None => {
            let seed = g.support()[0];
            let layers = generic_layers(g, d)?;
            Schedule::from_layers(*g, seed_step(g, seed, d, tau_ini)?, &layers, d)?
        }
    };
    let v = verify_schedule(&sched)?;
    if !v.is_exact() {
        return Err(Error::VerifyMismatch { generated: v.generated.to_string(), expected: g.to_string() });
    }
    Ok(sched)
}

/// Breadth-first spanning tree of `g`'s support; children lists in visiting order.
fn spanning_tree(g: &PauliString, d: &DeviceSpec) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let support = g.support_mask();
    let root = g.support()[0];
    let mut order = vec![root];
    let mut children = vec![Vec::new(); d.num_qubits()];
    let mut seen = 1u64 << root;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for v in d.neighbors(u) {
            if support >> v & 1 == 1 && seen >> v & 1 == 0 {
                seen |= 1 << v;
                children[u].push(v);
                order.push(v);
                queue.push_back(v);
            }
        }
    }
    if seen != support {
        let missing = (0..d.num_qubits()).filter(|&q| (support & !seen) >> q & 1 == 1).collect();
        return Err(Error::DisconnectedSupport { target: g.to_string(), component: missing });
    }
    Ok((order, children))
}

fn third_axis(a: Pauli, b: Pauli) -> Axis {
    Axis::ALL.into_iter().find(|x| x.pauli() != a && x.pauli() != b).expect("two letters leave one axis")
}

fn generic_layers(g: &PauliString, d: &DeviceSpec) -> Result<Vec<Layer>> {
    let n = d.num_qubits();
    let (order, children) = spanning_tree(g, d)?;
    let root = order[0];
    let mut h = PauliSum::from_string(1.0, PauliString::single(n, root, Pauli::X)?)?;
    let mut visited = 1u64 << root;
    let mut next_child = vec![0usize; n];
    let mut layers = Vec::new();
    let apply = |h: &PauliSum, layer: &Layer| -> Result<PauliSum> { layer_step(layer, d)?.conjugate(h) };

    while visited != g.support_mask() {
        let mut round: Vec<(usize, usize)> = Vec::new();
        let mut group: Option<(Coupling, f64)> = None;
        for &u in &order {
            if visited >> u & 1 == 0 || next_child[u] >= children[u].len() {
                continue;
            }
            let c = children[u][next_child[u]];
            let e = d.edge(u, c).expect("tree edges are device edges");
            let key = (e.kind, e.j_coupling);
            match group {
                None => group = Some(key),
                Some((kind, j)) if kind == e.kind && (j - e.j_coupling).abs() <= 1e-12 * j => {}
                Some(_) => continue,
            }
            round.push((u, c));
        }
        let (_, cur) = h.single_term().expect("growth keeps a single string");
        let fix: Vec<Pulse> = round
            .iter()
            .filter(|&&(u, _)| cur.letter(u) == Pauli::Z)
            .map(|&(u, _)| Pulse::half_pi(u, Axis::X))
            .collect();
        if !fix.is_empty() {
            let layer = Layer::Rotate { pulses: fix };
            h = apply(&h, &layer)?;
            layers.push(layer);
        }
        let layer = Layer::Quarter { edges: round.clone() };
        h = apply(&h, &layer)?;
        layers.push(layer);
        for &(u, c) in &round {
            visited |= 1 << c;
            next_child[u] += 1;
        }
    }

    let (_, cur) = h.single_term().expect("growth keeps a single string");
    let fix: Vec<Pulse> = g
        .support()
        .into_iter()
        .filter(|&q| cur.letter(q) != g.letter(q))
        .map(|q| Pulse::half_pi(q, third_axis(cur.letter(q), g.letter(q))))
        .collect();
    if !fix.is_empty() {
        let layer = Layer::Rotate { pulses: fix };
        h = apply(&h, &layer)?;
        layers.push(layer);
    }
    let (c, cur) = h.single_term().expect("single string");
    debug_assert_eq!(cur.letter_string(), g.letter_string());
    let generated_sign = c.signum() * cur.sign().unwrap_or(1.0);
    let wanted = g.sign().expect("checked Hermitian");
    if generated_sign != wanted {
        layers.push(sign_flip_layer(g));
    }
    Ok(layers)
}

/// Pi rotation on the lowest support qubit about an axis anticommuting with its letter.
pub fn sign_flip_layer(g: &PauliString) -> Layer {
    let q = g.support()[0];
    let letter = g.letter(q);
    let axis = Axis::ALL
        .into_iter()
        .find(|a| a.pauli().anticommutes_with(letter))
        .expect("a non-identity letter anticommutes with two axes");
    Layer::Rotate { pulses: vec![Pulse::new(q, axis, PI)] }
}

/// Schedules for every generator of a code, one Trotter cycle of `-Σ G_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledCode {
    pub schedules: Vec<Schedule>,
    pub budget: TimingBudget,
    /// Published code-level counts, when the code matches a bundled table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_budget: Option<TimingBudget>,
}

impl CompiledCode {
    /// Budget for `cycles` repetitions.
    pub fn cycle_budget(&self, cycles: u64) -> TimingBudget {
        self.budget.times(cycles)
    }

    pub fn pulse_count(&self) -> usize {
        self.schedules.iter().map(Schedule::pulse_count).sum()
    }

    pub fn duration(&self) -> f64 {
        self.schedules.iter().map(Schedule::duration).sum()
    }

    /// All schedules of `cycles` repetitions in time order.
    pub fn repeated(&self, cycles: usize) -> Vec<Schedule> {
        (0..cycles).flat_map(|_| self.schedules.iter().cloned()).collect()
    }
}

/// Compiles every generator of `c`, replaying a bundled recipe when one builds that
/// generator on `d`.
pub fn compile_code(c: &CodeSpec, d: &DeviceSpec, tau_ini: f64) -> Result<CompiledCode> {
    if c.n != d.num_qubits() {
        return Err(Error::Dimension { expected: d.num_qubits(), found: c.n });
    }
    let book = recipes::lookup(c);
    let mut schedules = Vec::with_capacity(c.generators.len());
    for (k, g) in c.generators.iter().enumerate() {
        let recipe = book.as_ref().and_then(|b| b.recipes.get(k)).filter(|r| r.target == *g);
        let sched = match recipe {
            Some(r) => match compile_generator(g, d, Some(r), tau_ini) {
                Ok(s) => s,
                Err(e) => {
                    log::info!("recipe for generator {k} does not fit the device ({e}); compiling generically");
                    compile_generator(g, d, None, tau_ini)?
                }
            },
            None => compile_generator(g, d, None, tau_ini)?,
        };
        schedules.push(sched);
    }
    let budget = schedules.iter().map(Schedule::budget).sum();
    let all_replayed = book.is_some() && schedules.iter().all(|s| s.reference.is_some());
    Ok(CompiledCode {
        schedules,
        budget,
        reference_budget: if all_replayed { book.map(|b| b.reference_total) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::Edge;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn chain(n: usize) -> DeviceSpec {
        DeviceSpec::chain(n, 1.0, Coupling::XY, 2.0, 1e-9).unwrap()
    }

    #[test]
    fn single_qubit_target_is_seed_only() {
        let s = compile_generator(&p("IXI"), &chain(3), None, 1e-8).unwrap();
        assert_eq!(s.steps.len(), 1);
        assert_eq!(s.budget(), TimingBudget::new(1, 0, 0));
    }

    #[test]
    fn single_qubit_z_target_rotates_seed() {
        let s = compile_generator(&p("-IZI"), &chain(3), None, 1e-8).unwrap();
        assert!(verify_schedule(&s).unwrap().is_exact());
    }

    #[test]
    fn generic_five_qubit_generators_verify() {
        for g in ["+XZZXI", "+IXZZX", "-ZZZZZ", "+YYXYI", "-IYZXY"] {
            let s = compile_generator(&p(g), &chain(5), None, 1e-8).unwrap();
            let v = verify_schedule(&s).unwrap();
            assert_eq!(v.string, Some(p(g)), "{g}");
            s.check_nesting().unwrap();
        }
        let err = compile_generator(&p("+XIXZZ"), &chain(5), None, 1e-8).unwrap_err();
        assert!(matches!(err, Error::DisconnectedSupport { ref component, .. } if component == &[2, 3, 4]), "{err}");
    }

    #[test]
    fn branching_tree_on_a_star() {
        let edges = (1..4).map(|j| Edge { i: 0, j, kind: Coupling::XY, j_coupling: 1.0 }).collect();
        let d = DeviceSpec::new(4, vec![1.0; 4], vec![0.0; 4], edges, 1e-9).unwrap();
        let s = compile_generator(&p("ZXYZ"), &d, None, 1e-8).unwrap();
        assert!(verify_schedule(&s).unwrap().is_exact());
        // three children of the root need three rounds.
        assert_eq!(s.budget().count_op, 6);
    }

    #[test]
    fn ising_growth() {
        let d = DeviceSpec::chain(4, 1.0, Coupling::Ising, 2.0, 1e-9).unwrap();
        for g in ["XXXX", "ZYXZ", "-IZZY"] {
            let s = compile_generator(&p(g), &d, None, 1e-8).unwrap();
            assert!(verify_schedule(&s).unwrap().is_exact(), "{g}");
        }
    }

    #[test]
    fn disconnected_support_is_reported() {
        match compile_generator(&p("XIX"), &chain(3), None, 1e-8) {
            Err(Error::DisconnectedSupport { component, .. }) => assert_eq!(component, vec![2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_layers_and_missing_edges_are_rejected() {
        let mut edges: Vec<Edge> = chain(3).edges().to_vec();
        edges[1].kind = Coupling::Ising;
        let d = DeviceSpec::new(3, vec![1.0; 3], vec![0.0; 3], edges, 1e-9).unwrap();
        let layer = Layer::Quarter { edges: vec![(0, 2)] };
        assert!(matches!(layer_step(&layer, &d), Err(Error::UnsupportedCoupling(_))));
        let d4 = DeviceSpec::new(
            4,
            vec![1.0; 4],
            vec![0.0; 4],
            vec![
                Edge { i: 0, j: 1, kind: Coupling::XY, j_coupling: 1.0 },
                Edge { i: 2, j: 3, kind: Coupling::Ising, j_coupling: 1.0 },
            ],
            1e-9,
        )
        .unwrap();
        let layer = Layer::Quarter { edges: vec![(0, 1), (2, 3)] };
        assert!(matches!(layer_step(&layer, &d4), Err(Error::UnsupportedCoupling(_))));
        let layer = Layer::Quarter { edges: vec![(0, 1), (1, 2)] };
        assert!(layer_step(&layer, &chain(3)).is_err());
    }

    #[test]
    fn nesting_is_checked() {
        let mut s = compile_generator(&p("XZZXI"), &chain(5), None, 1e-8).unwrap();
        s.steps.swap(0, 1);
        assert!(matches!(symbolic_verify(&s), Err(Error::MalformedNesting(_))));
        s.steps.clear();
        assert!(matches!(symbolic_verify(&s), Err(Error::MalformedNesting(_))));
    }

    #[test]
    fn schedule_json_round_trip_is_exact() {
        let s = compile_generator(&p("XZZXI"), &chain(5), None, 1.0 / 3.0 * 1e-8).unwrap();
        let json = s.to_json().unwrap();
        let back = Schedule::from_json(&json).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json().unwrap(), json);
    }

    #[test]
    fn quarter_duration_follows_edge_strength() {
        let s = compile_generator(&p("XZ"), &chain(2), None, 1e-8).unwrap();
        let q = s.steps.iter().find(|st| matches!(st, ScheduleStep::CoupledQuarter { .. })).unwrap();
        assert_eq!(q.duration(), PI / 8.0);
    }
}
