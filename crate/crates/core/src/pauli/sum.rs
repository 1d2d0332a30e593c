use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::string::PauliString;
use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped after every operation.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Real-weighted sum of Pauli strings; always Hermitian.
///
/// Stored strings carry phase `+1`; a `-P` input is folded into a negative coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
    tolerance: f64,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new(), tolerance: DEFAULT_TOLERANCE }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.prune();
        self
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Single-term sum `coeff · p`; `p` must be Hermitian (phase ±1).
    pub fn from_string(coeff: f64, p: PauliString) -> Result<Self> {
        let mut s = PauliSum::zero(p.num_qubits());
        s.add_term(coeff, p)?;
        Ok(s)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        let mut s = PauliSum::zero(n);
        for (c, p) in terms {
            s.add_term(c, p)?;
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(coefficient, string)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &PauliString)> {
        self.terms.iter().map(|(p, &c)| (c, p))
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.keys()
    }

    /// Coefficient of `p` (sign of `p` applied), zero when absent.
    pub fn coefficient(&self, p: &PauliString) -> f64 {
        let sign = p.sign().unwrap_or(0.0);
        self.terms.get(&p.unsigned()).map_or(0.0, |c| c * sign)
    }

    pub fn add_term(&mut self, coeff: f64, p: PauliString) -> Result<()> {
        self.check_dims_n(p.num_qubits())?;
        if self.n == 0 {
            self.n = p.num_qubits();
        }
        let sign = p.sign().ok_or_else(|| Error::InvalidPauli {
            input: p.to_string(),
            reason: "term with phase ±i is not Hermitian".into(),
        })?;
        self.accumulate(coeff * sign, p.unsigned());
        Ok(())
    }

    fn accumulate(&mut self, coeff: f64, key: PauliString) {
        let entry = self.terms.entry(key).or_insert(0.0);
        *entry += coeff;
        if entry.abs() < self.tolerance {
            self.terms.remove(&key);
        }
    }

    fn prune(&mut self) {
        let tol = self.tolerance;
        self.terms.retain(|_, c| c.abs() >= tol);
    }

    fn check_dims_n(&self, n: usize) -> Result<()> {
        // An empty zero-qubit sum (e.g. a deserialized `[]`) adapts to its partner.
        if self.n != n && !(self.n == 0 && self.terms.is_empty()) {
            return Err(Error::Dimension { expected: self.n, found: n });
        }
        Ok(())
    }

    fn check_dims(&self, other: &PauliSum) -> Result<usize> {
        if self.n == other.n {
            return Ok(self.n);
        }
        if self.n == 0 && self.is_empty() {
            return Ok(other.n);
        }
        if other.n == 0 && other.is_empty() {
            return Ok(self.n);
        }
        Err(Error::Dimension { expected: self.n, found: other.n })
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        let n = self.check_dims(other)?;
        let mut out = PauliSum { n, ..self.clone() };
        for (p, &c) in &other.terms {
            out.accumulate(c, *p);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, factor: f64) -> PauliSum {
        let mut out = PauliSum::zero(self.n).with_tolerance(self.tolerance);
        for (p, &c) in &self.terms {
            out.accumulate(c * factor, *p);
        }
        out
    }

    /// Root of `Σ c²`, which equals `[Tr(A†A)/d]^{1/2}` because distinct strings are
    /// trace-orthogonal.
    pub fn operator_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc + c * c).sqrt()
    }

    /// `i[a, b]`, Hermitian whenever `a` and `b` are.
    pub fn commutator_i(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
        let n = a.check_dims(b)?;
        let mut out = PauliSum::zero(n).with_tolerance(a.tolerance);
        for (p, &c) in &a.terms {
            for (q, &d) in &b.terms {
                if p.commutes_unchecked(q) {
                    continue;
                }
                // i(PQ - QP) = 2i·PQ for anticommuting strings.
                let prod = p.mul_unchecked(q).times_i();
                let sign = prod.sign().expect("i·PQ is Hermitian for anticommuting P, Q");
                out.accumulate(2.0 * c * d * sign, prod.unsigned());
            }
        }
        Ok(out)
    }

    /// True when every coefficient agrees within `tol`.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        match self.sub(other) {
            Ok(d) => d.terms.values().all(|c| c.abs() <= tol),
            Err(_) => false,
        }
    }

    /// `Some((c, p))` when the sum holds exactly one term.
    pub fn single_term(&self) -> Option<(f64, PauliString)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms.iter().next().map(|(p, &c)| (c, *p))
    }

    /// True when all terms pairwise commute.
    pub fn is_commuting(&self) -> bool {
        let keys: Vec<_> = self.terms.keys().collect();
        keys.iter().enumerate().all(|(i, p)| keys[i + 1..].iter().all(|q| p.commutes_unchecked(q)))
    }

    pub(crate) fn accumulate_raw(&mut self, coeff: f64, key: PauliString) {
        self.accumulate(coeff, key)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0.0 { '-' } else { '+' };
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}{} {}", c.abs(), p.letter_string())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    coeff: f64,
    string: PauliString,
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(p, &c)| TermRecord { coeff: c, string: *p }))
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let n = records.first().map_or(0, |r| r.string.num_qubits());
        PauliSum::from_terms(n, records.into_iter().map(|r| (r.coeff, r.string))).map_err(serde::de::Error::custom)
    }
}
