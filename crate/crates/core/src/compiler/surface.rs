//! Planar surface-code layouts.
//!
//! On a `(2 rows - 1) × (2 cols - 1)` grid, data qubits sit at `(2i, 2j)` and
//! `(2i+1, 2j+1)`, numbered row-major. Star checks (X type) sit at `(2i+1, 2j)` and
//! plaquettes (Z type) at `(2i, 2j+1)`; each acts on its in-range grid neighbours.
//! Stars and plaquettes are each split into two groups by the checkerboard parity
//! `(i + j) mod 2`, which keeps supports inside a group disjoint.

use std::collections::{BTreeMap, BTreeSet};

use crate::code::CodeSpec;
use crate::device::{DeviceSpec, Edge};
use crate::error::{Error, Result};
use crate::pauli::{Coupling, Pauli, PauliString};

/// Largest layout accepted; symbolic use only above the dense limit.
pub const MAX_SURFACE_QUBITS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceLayout {
    pub rows: usize,
    pub cols: usize,
    /// Grid position of each data qubit, by qubit index.
    pub positions: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl SurfaceLayout {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::argument("rows/cols", format!("lattice must be at least 2x2, got {rows}x{cols}")));
        }
        let mut positions = Vec::new();
        for r in 0..2 * rows - 1 {
            for c in 0..2 * cols - 1 {
                if r % 2 == c % 2 {
                    positions.push((r, c));
                }
            }
        }
        if positions.len() > MAX_SURFACE_QUBITS {
            return Err(Error::TooLarge { n: positions.len(), limit: MAX_SURFACE_QUBITS });
        }
        let index = positions.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Ok(SurfaceLayout { rows, cols, positions, index })
    }

    pub fn num_qubits(&self) -> usize {
        self.positions.len()
    }

    pub fn qubit_at(&self, r: isize, c: isize) -> Option<usize> {
        if r < 0 || c < 0 {
            return None;
        }
        self.index.get(&(r as usize, c as usize)).copied()
    }

    /// Neighbours of a check in the order up, right, down, left; `None` where absent.
    pub fn check_neighbors(&self, r: usize, c: usize) -> [Option<usize>; 4] {
        let (r, c) = (r as isize, c as isize);
        [self.qubit_at(r - 1, c), self.qubit_at(r, c + 1), self.qubit_at(r + 1, c), self.qubit_at(r, c - 1)]
    }

    /// Star positions with their checkerboard parity.
    pub fn stars(&self) -> Vec<((usize, usize), usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows - 1 {
            for j in 0..self.cols {
                out.push(((2 * i + 1, 2 * j), (i + j) % 2));
            }
        }
        out
    }

    pub fn plaquettes(&self) -> Vec<((usize, usize), usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols - 1 {
                out.push(((2 * i, 2 * j + 1), (i + j) % 2));
            }
        }
        out
    }

    fn check(&self, pos: (usize, usize), letter: Pauli) -> PauliString {
        let letters: Vec<_> = self.check_neighbors(pos.0, pos.1).into_iter().flatten().map(|q| (q, letter)).collect();
        PauliString::from_sparse(self.num_qubits(), &letters).expect("layout indices are in range")
    }

    /// XY edges joining cyclically adjacent neighbours of every check.
    pub fn device(&self, omega: f64, j: f64, tau_rot: f64) -> Result<DeviceSpec> {
        let mut keys = BTreeSet::new();
        let checks = self.stars().into_iter().chain(self.plaquettes());
        for ((r, c), _) in checks {
            let nb = self.check_neighbors(r, c);
            for k in 0..4 {
                if let (Some(a), Some(b)) = (nb[k], nb[(k + 1) % 4]) {
                    keys.insert((a.min(b), a.max(b)));
                }
            }
        }
        let edges = keys.into_iter().map(|(i, jj)| Edge { i, j: jj, kind: Coupling::XY, j_coupling: j }).collect();
        let n = self.num_qubits();
        DeviceSpec::new(n, vec![omega; n], vec![0.0; n], edges, tau_rot)
    }
}

/// Surface code on a `rows × cols` vertex lattice with one logical qubit.
///
/// Generators list stars then plaquettes in row-major check order. Groups are
/// `[even stars, odd stars, even plaquettes, odd plaquettes]`.
pub fn build_surface_code(rows: usize, cols: usize) -> Result<CodeSpec> {
    let layout = SurfaceLayout::new(rows, cols)?;
    let n = layout.num_qubits();
    let mut generators = Vec::new();
    let mut groups = vec![Vec::new(); 4];
    for (pos, parity) in layout.stars() {
        groups[parity].push(generators.len());
        generators.push(layout.check(pos, Pauli::X));
    }
    for (pos, parity) in layout.plaquettes() {
        groups[2 + parity].push(generators.len());
        generators.push(layout.check(pos, Pauli::Z));
    }
    groups.retain(|g| !g.is_empty());
    let row0: Vec<_> = (0..cols).map(|j| (layout.index[&(0, 2 * j)], Pauli::X)).collect();
    let col0: Vec<_> = (0..rows).map(|i| (layout.index[&(2 * i, 0)], Pauli::Z)).collect();
    let logical_x = PauliString::from_sparse(n, &row0)?;
    let logical_z = PauliString::from_sparse(n, &col0)?;
    CodeSpec::new(format!("surface-{rows}x{cols}"), n, 1, generators, vec![logical_x], vec![logical_z], groups)
}
