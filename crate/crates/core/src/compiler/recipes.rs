//! Hand-built generation sequences for the five-qubit and Steane codes on an XY chain.
//!
//! Qubits are zero-based. Each recipe lists conjugation layers innermost first; the
//! reference budgets are the published per-row counts and are kept for comparison only.

use serde::{Deserialize, Serialize};

use super::{seed_step, sign_flip_layer, Layer, Pulse, Schedule};
use crate::code::CodeSpec;
use crate::device::{DeviceSpec, TimingBudget};
use crate::error::Result;
use crate::pauli::{Axis, PauliString, PauliSum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub target: PauliString,
    pub seed_qubit: usize,
    /// Sign of the seed field `±Ω X`.
    pub seed_sign: f64,
    pub layers: Vec<Layer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<TimingBudget>,
}

impl Recipe {
    /// Replays the recipe on `d` with seed duration `tau_ini`.
    pub fn schedule(&self, d: &DeviceSpec, tau_ini: f64) -> Result<Schedule> {
        let seed = match seed_step(&self.target, self.seed_qubit, d, tau_ini)? {
            super::ScheduleStep::Seed { h_ini, duration } => {
                super::ScheduleStep::Seed { h_ini: h_ini.scale(self.seed_sign), duration }
            }
            other => other,
        };
        let mut s = Schedule::from_layers(self.target, seed, &self.layers, d)?;
        s.reference = self.reference;
        Ok(s)
    }

    /// The recipe with one more outermost layer.
    fn wrapped(&self, target: &str, layer: Layer) -> Recipe {
        let mut layers = self.layers.clone();
        layers.push(layer);
        Recipe { target: target.parse().expect("static string"), layers, ..self.clone() }
    }
}

/// Recipes for every generator of one bundled code, in generator order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeBook {
    pub code: String,
    pub recipes: Vec<Recipe>,
    /// Published totals for one cycle; may include layers shared between rows.
    pub reference_total: TimingBudget,
}

fn rot(axis: Axis, qubits: &[usize]) -> Layer {
    Layer::Rotate { pulses: qubits.iter().map(|&q| Pulse::half_pi(q, axis)).collect() }
}

fn quarter(edges: &[(usize, usize)]) -> Layer {
    Layer::Quarter { edges: edges.to_vec() }
}

fn recipe(target: &str, seed_qubit: usize, seed_sign: f64, layers: Vec<Layer>, rot: u64, op: u64) -> Recipe {
    Recipe {
        target: target.parse().expect("static string"),
        seed_qubit,
        seed_sign,
        layers,
        reference: Some(TimingBudget::new(1, rot, op)),
    }
}

pub fn five_qubit() -> RecipeBook {
    use Axis::{X, Y};
    let g1_layers = vec![quarter(&[(1, 2)]), rot(X, &[1]), quarter(&[(0, 1), (2, 3)])];
    let g1 = recipe("+XZZXI", 1, 1.0, g1_layers.clone(), 24, 4);
    let g2 = recipe("+IXZZX", 2, 1.0, vec![quarter(&[(2, 3)]), rot(X, &[2]), quarter(&[(1, 2), (3, 4)])], 24, 4);
    let mut g3_layers = g1_layers.clone();
    g3_layers.extend([quarter(&[(3, 4)]), rot(X, &[1, 4]), quarter(&[(1, 2)])]);
    let g3 = recipe("+XIXZZ", 1, 1.0, g3_layers, 43, 8);
    let mut g4_layers = g1_layers;
    g4_layers.extend([quarter(&[(3, 4)]), rot(X, &[2, 4]), quarter(&[(1, 2)]), rot(Y, &[0, 3])]);
    // The table sequence yields -ZXIXZ; a pi pulse pair restores the sign.
    let target: PauliString = "+ZXIXZ".parse().expect("static string");
    g4_layers.push(sign_flip_layer(&target));
    let g4 = recipe("+ZXIXZ", 1, 1.0, g4_layers, 45, 8);
    RecipeBook {
        code: "five-qubit".into(),
        recipes: vec![g1, g2, g3, g4],
        reference_total: TimingBudget::new(4, 136, 24),
    }
}

pub fn steane() -> RecipeBook {
    use Axis::{X, Y};
    // Final layer pulses about y: x pulses there would give XYYX instead of XXXX.
    let g1 = recipe(
        "+XXXXIII",
        1,
        1.0,
        vec![quarter(&[(1, 2)]), rot(X, &[1]), quarter(&[(0, 1), (2, 3)]), rot(Y, &[1, 2])],
        26,
        4,
    );
    let g2 = recipe(
        "+XXIIXXI",
        2,
        -1.0,
        vec![
            quarter(&[(2, 3)]),
            rot(Y, &[2]),
            quarter(&[(1, 2), (3, 4)]),
            quarter(&[(0, 1), (4, 5)]),
            rot(X, &[2, 3, 5]),
            quarter(&[(1, 2), (3, 4)]),
            rot(Y, &[5]),
        ],
        45,
        8,
    );
    let g3 = recipe(
        "+XIXIXIX",
        2,
        -1.0,
        vec![
            quarter(&[(2, 3)]),
            rot(X, &[2]),
            quarter(&[(1, 2), (3, 4)]),
            quarter(&[(0, 1), (4, 5)]),
            quarter(&[(5, 6)]),
            rot(X, &[0, 1, 3, 5]),
            quarter(&[(0, 1), (2, 3), (4, 5)]),
        ],
        51,
        10,
    );
    // A y pulse on every support qubit maps X to -Z, so weight-four strings keep their sign.
    let g4 = g1.wrapped("+ZZZZIII", rot(Y, &[0, 1, 2, 3]));
    let g5 = g2.wrapped("+ZZIIZZI", rot(Y, &[0, 1, 4, 5]));
    let g6 = g3.wrapped("+ZIZIZIZ", rot(Y, &[0, 2, 4, 6]));
    RecipeBook {
        code: "steane".into(),
        recipes: vec![g1, g2, g3, g4, g5, g6],
        reference_total: TimingBudget::new(6, 246, 44),
    }
}

/// The bundled book whose targets equal `c`'s generators, if any.
pub fn lookup(c: &CodeSpec) -> Option<RecipeBook> {
    [five_qubit(), steane()].into_iter().find(|b| {
        b.recipes.len() == c.generators.len() && b.recipes.iter().zip(&c.generators).all(|(r, g)| r.target == *g)
    })
}

/// Seed Hamiltonian `±Ω X_q` a recipe starts from, for display.
pub fn seed_hamiltonian(r: &Recipe, d: &DeviceSpec) -> Result<PauliSum> {
    r.schedule(d, 0.0)?.seed_hamiltonian()
}
