use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCode {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliString>,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
    #[serde(default)]
    groups: Vec<Vec<usize>>,
}

/// Stabilizer code: commuting generators, logical operators, and generation groups.
///
/// `groups` partitions generator indices; an empty list in the file means one group per
/// generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCode", into = "RawCode")]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliString>,
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
    pub groups: Vec<Vec<usize>>,
}

impl TryFrom<RawCode> for CodeSpec {
    type Error = Error;

    fn try_from(r: RawCode) -> Result<Self> {
        CodeSpec::new(r.name, r.n, r.k, r.generators, r.logical_x, r.logical_z, r.groups)
    }
}

impl From<CodeSpec> for RawCode {
    fn from(c: CodeSpec) -> Self {
        RawCode {
            name: c.name,
            n: c.n,
            k: c.k,
            generators: c.generators,
            logical_x: c.logical_x,
            logical_z: c.logical_z,
            groups: c.groups,
        }
    }
}

/// Rank over GF(2) of the symplectic vectors `(x | z)`.
pub fn symplectic_rank(ops: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = ops.iter().map(|p| (p.x_mask() as u128) << 64 | p.z_mask() as u128).collect();
    let mut rank = 0;
    for bit in (0..128).rev() {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pr = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row >> bit & 1 == 1 {
                *row ^= pr;
            }
        }
        rank += 1;
    }
    rank
}

impl CodeSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: String,
        n: usize,
        k: usize,
        generators: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
        groups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(Error::code("n", format!("must be between 1 and {}, got {n}", crate::pauli::MAX_QUBITS)));
        }
        let lists = [("generators", &generators), ("logical_x", &logical_x), ("logical_z", &logical_z)];
        for (field, ops) in lists {
            for (i, p) in ops.iter().enumerate() {
                if p.num_qubits() != n {
                    return Err(Error::code(
                        format!("{field}[{i}]"),
                        format!("{p} has {} qubits, expected {n}", p.num_qubits()),
                    ));
                }
                if !p.is_hermitian() {
                    return Err(Error::code(format!("{field}[{i}]"), format!("{p} is not Hermitian")));
                }
                if p.weight() == 0 {
                    return Err(Error::code(format!("{field}[{i}]"), "identity is not allowed"));
                }
            }
        }
        let l = generators.len();
        for i in 0..l {
            for j in i + 1..l {
                if !generators[i].commutes_unchecked(&generators[j]) {
                    return Err(Error::code(
                        format!("generators[{j}]"),
                        format!("{} anticommutes with generators[{i}] = {}", generators[j], generators[i]),
                    ));
                }
            }
        }
        if symplectic_rank(&generators) != l {
            return Err(Error::code("generators", "generators are not independent"));
        }
        if k + l > n {
            return Err(Error::code("k", format!("k = {k} exceeds n - l = {}", n - l)));
        }
        if logical_x.len() != k || logical_z.len() != k {
            return Err(Error::code(
                "logical_x",
                format!("expected {k} logical X and Z operators, got {} and {}", logical_x.len(), logical_z.len()),
            ));
        }
        for (field, ops) in [("logical_x", &logical_x), ("logical_z", &logical_z)] {
            for (i, p) in ops.iter().enumerate() {
                if let Some(j) = generators.iter().position(|g| !g.commutes_unchecked(p)) {
                    return Err(Error::code(format!("{field}[{i}]"), format!("{p} anticommutes with generators[{j}]")));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let commute = logical_x[i].commutes_unchecked(&logical_z[j]);
                if commute == (i == j) {
                    let want = if i == j { "anticommute" } else { "commute" };
                    return Err(Error::code(format!("logical_z[{j}]"), format!("must {want} with logical_x[{i}]")));
                }
                if i < j
                    && (!logical_x[i].commutes_unchecked(&logical_x[j])
                        || !logical_z[i].commutes_unchecked(&logical_z[j]))
                {
                    return Err(Error::code(
                        format!("logical_x[{j}]"),
                        format!("logical operators {i} and {j} must commute"),
                    ));
                }
            }
        }
        let groups = if groups.is_empty() { (0..l).map(|j| vec![j]).collect() } else { groups };
        let mut seen = vec![false; l];
        for (gi, group) in groups.iter().enumerate() {
            for &j in group {
                if j >= l {
                    return Err(Error::code(format!("groups[{gi}]"), format!("generator index {j} out of range")));
                }
                if std::mem::replace(&mut seen[j], true) {
                    return Err(Error::code(format!("groups[{gi}]"), format!("generator {j} appears twice")));
                }
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::code("groups", format!("generator {j} is in no group")));
        }
        Ok(CodeSpec { name, n, k, generators, logical_x, logical_z, groups })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// True when the supports inside every group are pairwise disjoint.
    pub fn groups_disjoint(&self) -> bool {
        self.groups.iter().all(|group| {
            let mut used = 0u64;
            group.iter().all(|&j| {
                let s = self.generators[j].support_mask();
                let ok = used & s == 0;
                used |= s;
                ok
            })
        })
    }

    pub fn five_qubit() -> Self {
        Self::from_json(include_str!("../data/five_qubit.json")).expect("bundled code")
    }

    pub fn steane() -> Self {
        Self::from_json(include_str!("../data/steane.json")).expect("bundled code")
    }

    pub fn three_qubit() -> Self {
        Self::from_json(include_str!("../data/three_qubit.json")).expect("bundled code")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn bundled_codes_load() {
        let c = CodeSpec::five_qubit();
        assert_eq!((c.n, c.k, c.num_generators()), (5, 1, 4));
        assert!(c.generators[0].commutes(&c.generators[1]).unwrap());
        let s = CodeSpec::steane();
        assert_eq!((s.n, s.k, s.num_generators()), (7, 1, 6));
        let t = CodeSpec::three_qubit();
        assert_eq!(t.generators, vec![p("+XXI"), p("+IXX")]);
    }

    #[test]
    fn rejects_anticommuting_generators() {
        let err = CodeSpec::new("bad".into(), 2, 0, vec![p("XI"), p("ZI")], vec![], vec![], vec![]).unwrap_err();
        assert!(err.to_string().contains("generators[1]"), "{err}");
    }

    #[test]
    fn rejects_dependent_generators() {
        let err = CodeSpec::new("bad".into(), 3, 0, vec![p("XXI"), p("IXX"), p("XIX")], vec![], vec![], vec![]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_bad_logicals() {
        let err = CodeSpec::new("bad".into(), 3, 1, vec![p("XXI"), p("IXX")], vec![p("XII")], vec![p("ZII")], vec![]);
        assert!(err.unwrap_err().to_string().contains("logical_z[0]"));
        let ok = CodeSpec::new("rep".into(), 3, 1, vec![p("XXI"), p("IXX")], vec![p("XII")], vec![p("ZZZ")], vec![]);
        assert!(ok.is_ok());
    }

    #[test]
    fn groups_must_partition() {
        let g = vec![p("XXI"), p("IXX")];
        assert!(CodeSpec::new("g".into(), 3, 0, g.clone(), vec![], vec![], vec![vec![0]]).is_err());
        assert!(CodeSpec::new("g".into(), 3, 0, g.clone(), vec![], vec![], vec![vec![0, 1], vec![1]]).is_err());
        let c = CodeSpec::new("g".into(), 3, 0, g, vec![], vec![], vec![vec![0, 1]]).unwrap();
        assert!(!c.groups_disjoint());
    }

    #[test]
    fn json_round_trip() {
        let c = CodeSpec::steane();
        let back = CodeSpec::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
