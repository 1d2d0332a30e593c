//! Pi-pulse toggling frames that isolate a sub-Hamiltonian of the always-on device
//! Hamiltonian.
//!
//! A block is four segments of length `τ` under the system Hamiltonian `H`, separated
//! by pi-pulse sets `P1, P2, P1, P2`. Moving the pulses through the evolution puts each
//! segment in a frame `C ∈ {I, P1, P1·P2, P2}` (time order), in which a term of `H`
//! keeps its sign when it commutes with `C` and flips otherwise. Target terms commute
//! with both `P1` and `P2`; every other term anticommutes with at least one of them and
//! so averages to zero over the block.
//!
//! To first order in `τ` the block generates
//!
//! ```text
//! H_eff = ¼ Σ_k H_k − (τ/8) Σ_{k>l} i[H_k, H_l]
//! ```
//!
//! with `H_k` the frame Hamiltonians in time order. Repeating the block leaves `H_eff`
//! unchanged.

use serde::{Deserialize, Serialize};

use crate::device::DeviceSpec;
use crate::error::{Error, Result};
use crate::pauli::{Axis, Pauli, PauliString, PauliSum};

/// `τ ‖H_b‖` above which a warning is logged.
pub const WARN_TAU_NORM: f64 = 0.1;

/// Largest register for which [`plan_extraction_min_residual`] enumerates all frames.
pub const MIN_RESIDUAL_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    device: DeviceSpec,
    target: PauliSum,
    segment_tau: f64,
    reps: u32,
    p1: PauliString,
    p2: PauliString,
}

/// Four-segment toggling block extracting `target` from the device Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPlan", into = "RawPlan")]
pub struct ExtractionPlan {
    device: DeviceSpec,
    target: PauliSum,
    complement: PauliSum,
    segment_tau: f64,
    reps: u32,
    p1: PauliString,
    p2: PauliString,
}

impl TryFrom<RawPlan> for ExtractionPlan {
    type Error = Error;

    fn try_from(r: RawPlan) -> Result<Self> {
        ExtractionPlan::from_pulses(&r.device, &r.target, r.segment_tau, r.reps, r.p1, r.p2)
    }
}

impl From<ExtractionPlan> for RawPlan {
    fn from(p: ExtractionPlan) -> Self {
        RawPlan { device: p.device, target: p.target, segment_tau: p.segment_tau, reps: p.reps, p1: p.p1, p2: p.p2 }
    }
}

/// Zeroth and first order of the block's effective Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveResult {
    pub zeroth: PauliSum,
    pub first: PauliSum,
    /// `‖first‖`; `first` already carries the factor `τ`.
    pub residual_norm: f64,
}

fn split_target(h: &PauliSum, target: &PauliSum) -> Result<PauliSum> {
    if target.num_qubits() != h.num_qubits() && !target.is_empty() {
        return Err(Error::Dimension { expected: h.num_qubits(), found: target.num_qubits() });
    }
    for (c, p) in target.iter() {
        let have = h.coefficient(p);
        if (have - c).abs() > 1e-12 * c.abs().max(1.0) {
            return Err(Error::InvalidTarget(format!(
                "term {} has coefficient {c} in the target but {have} in the system Hamiltonian",
                p.letter_string()
            )));
        }
    }
    h.sub(target)
}

fn check_tau(tau: f64, reps: u32) -> Result<()> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::argument("tau", format!("segment length must be positive, got {tau}")));
    }
    if reps == 0 {
        return Err(Error::argument("reps", "at least one repetition is required"));
    }
    Ok(())
}

fn strip(p: PauliString) -> PauliString {
    p.unsigned()
}

impl ExtractionPlan {
    /// Builds a plan from explicit pulse strings and checks it.
    pub fn from_pulses(
        device: &DeviceSpec,
        target: &PauliSum,
        segment_tau: f64,
        reps: u32,
        p1: PauliString,
        p2: PauliString,
    ) -> Result<Self> {
        check_tau(segment_tau, reps)?;
        let n = device.num_qubits();
        for p in [&p1, &p2] {
            if p.num_qubits() != n {
                return Err(Error::Dimension { expected: n, found: p.num_qubits() });
            }
        }
        let h = device.system_hamiltonian();
        let complement = split_target(&h, target)?;
        let plan = ExtractionPlan {
            device: device.clone(),
            target: if target.is_empty() { PauliSum::zero(n) } else { target.clone() },
            complement,
            segment_tau,
            reps,
            p1: strip(p1),
            p2: strip(p2),
        };
        plan.validate()?;
        plan.warn_if_coarse();
        Ok(plan)
    }

    /// Checks that target terms survive every frame and complement terms average out.
    pub fn validate(&self) -> Result<()> {
        for p in self.target.strings() {
            if !p.commutes_unchecked(&self.p1) || !p.commutes_unchecked(&self.p2) {
                return Err(Error::InvalidPlan(format!(
                    "target term {} is flipped by the boundary pulses",
                    p.letter_string()
                )));
            }
        }
        for p in self.complement.strings() {
            if p.commutes_unchecked(&self.p1) && p.commutes_unchecked(&self.p2) {
                return Err(Error::InfeasibleFrame { term: p.letter_string() });
            }
        }
        Ok(())
    }

    fn warn_if_coarse(&self) {
        let x = self.segment_tau * self.complement.operator_norm();
        if x > WARN_TAU_NORM {
            log::warn!("segment tau times the norm of the removed terms is {x:.3}; first-order error is not small");
        }
    }

    pub fn device(&self) -> &DeviceSpec {
        &self.device
    }

    pub fn target(&self) -> &PauliSum {
        &self.target
    }

    pub fn complement(&self) -> &PauliSum {
        &self.complement
    }

    pub fn segment_tau(&self) -> f64 {
        self.segment_tau
    }

    pub fn reps(&self) -> u32 {
        self.reps
    }

    pub fn p1(&self) -> &PauliString {
        &self.p1
    }

    pub fn p2(&self) -> &PauliString {
        &self.p2
    }

    /// Evolution time of the whole block, pulses excluded.
    pub fn duration(&self) -> f64 {
        4.0 * self.reps as f64 * self.segment_tau
    }

    /// Frame operators `I, P1, P1·P2, P2` in time order.
    pub fn frames(&self) -> [PauliString; 4] {
        let n = self.device.num_qubits();
        let p12 = self.p1.mul_unchecked(&self.p2).unsigned();
        [PauliString::identity(n), self.p1, p12, self.p2]
    }

    /// Per-term signs of `(target, complement)` in each frame, in canonical term order.
    pub fn frame_signs(&self) -> [(Vec<i8>, Vec<i8>); 4] {
        let sign = |c: &PauliString, p: &PauliString| if p.commutes_unchecked(c) { 1 } else { -1 };
        self.frames().map(|c| {
            (
                self.target.strings().map(|p| sign(&c, p)).collect(),
                self.complement.strings().map(|p| sign(&c, p)).collect(),
            )
        })
    }

    /// System Hamiltonian as seen in each frame, in time order.
    pub fn frame_hamiltonians(&self) -> [PauliSum; 4] {
        let h = self.device.system_hamiltonian();
        self.frames().map(|c| toggle(&h, &c))
    }

    /// Pulse sets at the four segment ends: `P1, P2, P1, P2`.
    pub fn boundary_pulses(&self) -> [Vec<(usize, Axis)>; 4] {
        let a = pulse_set(&self.p1);
        let b = pulse_set(&self.p2);
        [a.clone(), b.clone(), a, b]
    }

    /// Number of individual pi pulses in the whole block.
    pub fn pulse_count(&self) -> usize {
        2 * self.reps as usize * (self.p1.weight() + self.p2.weight())
    }

    /// Number of non-empty simultaneous pulse layers in the whole block.
    pub fn pulse_layers(&self) -> usize {
        let layers = [&self.p1, &self.p2].iter().filter(|p| p.weight() > 0).count();
        2 * self.reps as usize * layers
    }
}

/// `C H C` for a Pauli frame `C`.
pub fn toggle(h: &PauliSum, frame: &PauliString) -> PauliSum {
    let mut out = PauliSum::zero(h.num_qubits());
    for (c, p) in h.iter() {
        let s = if p.commutes_unchecked(frame) { c } else { -c };
        out.accumulate_raw(s, *p);
    }
    out
}

fn pulse_set(p: &PauliString) -> Vec<(usize, Axis)> {
    p.support().into_iter().map(|q| (q, Axis::from_pauli(p.letter(q)).expect("support letter is not I"))).collect()
}

const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

struct FrameSearch<'a> {
    n: usize,
    target: Vec<&'a PauliString>,
    complement: Vec<&'a PauliString>,
    // Terms whose highest support qubit is q, indexed by q.
    closing_target: Vec<Vec<usize>>,
    closing_complement: Vec<Vec<usize>>,
    p1: Vec<Pauli>,
    p2: Vec<Pauli>,
}

impl<'a> FrameSearch<'a> {
    fn new(n: usize, target: &'a PauliSum, complement: &'a PauliSum) -> Self {
        let target: Vec<_> = target.strings().collect();
        let complement: Vec<_> = complement.strings().collect();
        let last = |p: &PauliString| 63 - p.support_mask().leading_zeros() as usize;
        let mut closing_target = vec![Vec::new(); n];
        let mut closing_complement = vec![Vec::new(); n];
        for (k, p) in target.iter().enumerate() {
            if p.support_mask() != 0 {
                closing_target[last(p)].push(k);
            }
        }
        for (k, p) in complement.iter().enumerate() {
            if p.support_mask() != 0 {
                closing_complement[last(p)].push(k);
            }
        }
        FrameSearch {
            n,
            target,
            complement,
            closing_target,
            closing_complement,
            p1: vec![Pauli::I; n],
            p2: vec![Pauli::I; n],
        }
    }

    fn anticommutes(&self, p: &PauliString, frame: &[Pauli]) -> bool {
        p.support().iter().filter(|&&q| p.letter(q).anticommutes_with(frame[q])).count() % 2 == 1
    }

    fn closes_ok(&self, q: usize) -> bool {
        let t_ok = self.closing_target[q].iter().all(|&k| {
            let p = self.target[k];
            !self.anticommutes(p, &self.p1) && !self.anticommutes(p, &self.p2)
        });
        t_ok && self.closing_complement[q].iter().all(|&k| {
            let p = self.complement[k];
            self.anticommutes(p, &self.p1) || self.anticommutes(p, &self.p2)
        })
    }

    fn strings(&self) -> (PauliString, PauliString) {
        let build = |v: &[Pauli]| {
            let letters: Vec<_> = v.iter().enumerate().map(|(q, &l)| (q, l)).collect();
            PauliString::from_sparse(self.n, &letters).expect("in range")
        };
        (build(&self.p1), build(&self.p2))
    }

    /// Depth-first search; `visit` returns `true` to stop.
    fn run(&mut self, q: usize, visit: &mut dyn FnMut(PauliString, PauliString) -> bool) -> bool {
        if q == self.n {
            let (a, b) = self.strings();
            return visit(a, b);
        }
        for a in LETTERS {
            for b in LETTERS {
                self.p1[q] = a;
                self.p2[q] = b;
                if self.closes_ok(q) && self.run(q + 1, visit) {
                    return true;
                }
            }
        }
        self.p1[q] = Pauli::I;
        self.p2[q] = Pauli::I;
        false
    }
}

fn infeasible_term(n: usize, target: &PauliSum, complement: &PauliSum) -> String {
    // Prefer a term that cannot be cancelled even on its own.
    for (c, p) in complement.iter() {
        let single = PauliSum::from_string(c, *p).expect("stored strings are Hermitian");
        let mut search = FrameSearch::new(n, target, &single);
        if !search.run(0, &mut |_, _| true) {
            return p.letter_string();
        }
    }
    let all: Vec<_> = complement.strings().map(|p| p.letter_string()).collect();
    format!("{} (jointly)", all.join(" + "))
}

/// Searches pi-pulse frames extracting `target`.
///
/// Qubits are assigned in increasing order, each trying the sixteen `(P1_q, P2_q)` letter
/// pairs in the order `I, X, Y, Z`; a term is checked as soon as its whole support is
/// assigned. The first complete assignment is returned.
pub fn plan_extraction(d: &DeviceSpec, target: &PauliSum, tau: f64, reps: u32) -> Result<ExtractionPlan> {
    check_tau(tau, reps)?;
    let h = d.system_hamiltonian();
    let complement = split_target(&h, target)?;
    let mut search = FrameSearch::new(d.num_qubits(), target, &complement);
    let mut found = None;
    search.run(0, &mut |a, b| {
        found = Some((a, b));
        true
    });
    let (p1, p2) =
        found.ok_or_else(|| Error::InfeasibleFrame { term: infeasible_term(d.num_qubits(), target, &complement) })?;
    ExtractionPlan::from_pulses(d, target, tau, reps, p1, p2)
}

/// Exhaustive variant of [`plan_extraction`] returning the valid frame with the smallest
/// first-order residual. Ties keep the earliest frame in search order.
pub fn plan_extraction_min_residual(d: &DeviceSpec, target: &PauliSum, tau: f64, reps: u32) -> Result<ExtractionPlan> {
    check_tau(tau, reps)?;
    if d.num_qubits() > MIN_RESIDUAL_LIMIT {
        return Err(Error::TooLarge { n: d.num_qubits(), limit: MIN_RESIDUAL_LIMIT });
    }
    let h = d.system_hamiltonian();
    let complement = split_target(&h, target)?;
    let mut search = FrameSearch::new(d.num_qubits(), target, &complement);
    let mut best: Option<(f64, ExtractionPlan)> = None;
    search.run(0, &mut |a, b| {
        let plan = ExtractionPlan {
            device: d.clone(),
            target: target.clone(),
            complement: complement.clone(),
            segment_tau: tau,
            reps,
            p1: a,
            p2: b,
        };
        let r = effective_hamiltonian(&plan).residual_norm;
        if best.as_ref().is_none_or(|(b, _)| r < *b - 1e-15) {
            best = Some((r, plan));
        }
        false
    });
    let (_, plan) =
        best.ok_or_else(|| Error::InfeasibleFrame { term: infeasible_term(d.num_qubits(), target, &complement) })?;
    plan.warn_if_coarse();
    Ok(plan)
}

/// Zeroth- and first-order effective Hamiltonian of one block.
pub fn effective_hamiltonian(p: &ExtractionPlan) -> EffectiveResult {
    let frames = p.frame_hamiltonians();
    let n = p.device.num_qubits();
    let mut zeroth = PauliSum::zero(n);
    for f in &frames {
        zeroth = zeroth.add(&f.scale(0.25)).expect("frames share n");
    }
    let mut comm = PauliSum::zero(n);
    for k in 0..4 {
        for l in 0..k {
            let c = PauliSum::commutator_i(&frames[k], &frames[l]).expect("frames share n");
            comm = comm.add(&c).expect("frames share n");
        }
    }
    let first = comm.scale(-p.segment_tau / 8.0);
    let residual_norm = first.operator_norm();
    EffectiveResult { zeroth, first, residual_norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Coupling;
    use std::f64::consts::PI;

    fn chain5() -> DeviceSpec {
        DeviceSpec::chain(5, 1.0, Coupling::XY, 0.1, 1e-9).unwrap()
    }

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn x2() -> PauliSum {
        PauliSum::from_string(1.0, p("IXIII")).unwrap()
    }

    #[test]
    fn explicit_x2_plan_frames() {
        let plan = ExtractionPlan::from_pulses(&chain5(), &x2(), 0.01, 1, p("ZIZZZ"), p("IIZIZ")).unwrap();
        let frames = plan.frame_hamiltonians();
        // Frame B flips every single-qubit X except X2 and keeps XY on (3,4) and (4,5).
        assert_eq!(frames[1].coefficient(&p("XIIII")), -1.0);
        assert_eq!(frames[1].coefficient(&p("IXIII")), 1.0);
        assert_eq!(frames[1].coefficient(&p("IIXXI")), 0.1);
        assert_eq!(frames[1].coefficient(&p("XXIII")), -0.1);
        // Frame B' = P1 P2 flips XY on (3,4) and (4,5).
        assert_eq!(frames[2].coefficient(&p("IIXXI")), -0.1);
        assert_eq!(frames[2].coefficient(&p("IIIXX")), -0.1);
        let eff = effective_hamiltonian(&plan);
        assert!(eff.zeroth.approx_eq(&x2(), 1e-12));
    }

    #[test]
    fn explicit_plan_first_order_support() {
        let (omega, j, tau) = (1.0, 0.1, 0.01);
        let plan = ExtractionPlan::from_pulses(&chain5(), &x2(), tau, 1, p("ZIZZZ"), p("IIZIZ")).unwrap();
        let first = effective_hamiltonian(&plan).first;
        let k = omega * tau * j;
        // Z2Y3, Y3Z4, Z4Y5 in one-based labels.
        let want = PauliSum::from_terms(5, [(k, p("IZYII")), (-k, p("IIYZI")), (-k, p("IIIZY"))]).unwrap();
        assert!(first.approx_eq(&want, 1e-15), "{first}");
    }

    #[test]
    fn coupling_extraction_frames() {
        let d = chain5();
        let target = d.edge_hamiltonian(1, 2).unwrap();
        let plan = ExtractionPlan::from_pulses(&d, &target, 0.01, 1, p("IZZIZ"), p("ZIIZI")).unwrap();
        let last = &plan.frame_hamiltonians()[3];
        // h_a' = h_23 - h_1 - h_4, h_b' = -h_12 - h_34 - h_45 + h_2 + h_3 + h_5 in one-based labels.
        for (s, c) in
            [("IXXII", 0.1), ("XIIII", -1.0), ("IIIXI", -1.0), ("XXIII", -0.1), ("IIXXI", -0.1), ("IIIXX", -0.1)]
        {
            assert_eq!(last.coefficient(&p(s)), c, "{s}");
        }
        for s in ["IXIII", "IIXII", "IIIIX"] {
            assert_eq!(last.coefficient(&p(s)), 1.0, "{s}");
        }
        assert!(effective_hamiltonian(&plan).zeroth.approx_eq(&target, 1e-12));
    }

    #[test]
    fn trivial_target_needs_no_pulses() {
        let d = chain5();
        let plan = plan_extraction(&d, &d.system_hamiltonian(), 0.01, 2).unwrap();
        assert_eq!(plan.p1().weight() + plan.p2().weight(), 0);
        let eff = effective_hamiltonian(&plan);
        assert!(eff.first.is_empty());
        assert!(eff.zeroth.approx_eq(&d.system_hamiltonian(), 0.0));
        assert_eq!(plan.pulse_count(), 0);
    }

    #[test]
    fn search_finds_valid_frames() {
        let d = chain5();
        let plan = plan_extraction(&d, &x2(), 0.01, 1).unwrap();
        plan.validate().unwrap();
        assert!(effective_hamiltonian(&plan).zeroth.approx_eq(&x2(), 1e-12));
        let xy12 = d.edge_hamiltonian(0, 1).unwrap();
        let plan = plan_extraction(&d, &xy12, 0.01, 1).unwrap();
        assert!(effective_hamiltonian(&plan).zeroth.approx_eq(&xy12, 1e-12));
    }

    #[test]
    fn min_residual_plan_for_x2() {
        let plan = plan_extraction_min_residual(&chain5(), &x2(), 0.01, 1).unwrap();
        assert!(effective_hamiltonian(&plan).residual_norm < 1e-15);
    }

    #[test]
    fn target_must_match_device() {
        let bad = PauliSum::from_string(2.0, p("IXIII")).unwrap();
        assert!(matches!(plan_extraction(&chain5(), &bad, 0.01, 1), Err(Error::InvalidTarget(_))));
        let absent = PauliSum::from_string(1.0, p("IZIII")).unwrap();
        assert!(matches!(plan_extraction(&chain5(), &absent, 0.01, 1), Err(Error::InvalidTarget(_))));
    }

    #[test]
    fn product_of_targets_is_infeasible() {
        // ZZ is the product of the two target fields, so every admissible frame keeps it.
        let d = DeviceSpec::new(
            2,
            vec![1.0, 1.0],
            vec![0.3, 0.3],
            vec![crate::device::Edge { i: 0, j: 1, kind: Coupling::Ising, j_coupling: 0.5 }],
            1e-9,
        )
        .unwrap();
        let target = PauliSum::from_terms(2, [(0.3, p("ZI")), (0.3, p("IZ"))]).unwrap();
        match plan_extraction(&d, &target, 0.01, 1) {
            Err(Error::InfeasibleFrame { term }) => assert_eq!(term, "ZZ"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_pulses_are_rejected() {
        let err = ExtractionPlan::from_pulses(&chain5(), &x2(), 0.01, 1, p("ZZIII"), p("IIIII")).unwrap_err();
        assert!(matches!(err, Error::InvalidPlan(_)));
        let err = ExtractionPlan::from_pulses(&chain5(), &x2(), 0.01, 1, p("ZIIII"), p("IIIII")).unwrap_err();
        assert!(matches!(err, Error::InfeasibleFrame { .. }));
    }

    #[test]
    fn json_round_trip() {
        let plan = ExtractionPlan::from_pulses(&chain5(), &x2(), PI * 1e-3, 3, p("ZIZZZ"), p("IIZIZ")).unwrap();
        let json = serde_json::to_string(&plan).unwrap();
        let back: ExtractionPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, plan);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }
}
