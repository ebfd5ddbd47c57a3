//! JSON state-set files.
//!
//! ```json
//! {
//!   "d": 4,
//!   "base": "phi_plus",
//!   "unitaries": [{"kind": "weyl", "n": 0, "m": 0},
//!                 {"kind": "matrix", "rows": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}],
//!   "direction": "AtoB"
//! }
//! ```
//!
//! Complex numbers are `[re, im]`. The unitaries always act on B, so the
//! states are `(I ⊗ U_i)|ψ⟩`; `direction` names the party that measures
//! first. A `BtoA` set is rewritten with unitaries on A when loaded.

use std::path::Path;

use locclab_core::{
    transpose_set, BipartiteState, Complex64, ComplexOperator, Direction, Error, StateSet,
    WeylIndex,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetSpec {
    pub d: usize,
    pub base: BaseSpec,
    pub unitaries: Vec<UnitarySpec>,
    #[serde(default)]
    pub direction: DirectionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(BaseName),
    Matrix(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseName {
    #[serde(rename = "phi_plus")]
    PhiPlus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum UnitarySpec {
    Weyl { n: i64, m: i64 },
    Matrix { rows: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DirectionSpec {
    #[default]
    AtoB,
    BtoA,
}

impl From<DirectionSpec> for Direction {
    fn from(d: DirectionSpec) -> Self {
        match d {
            DirectionSpec::AtoB => Direction::AtoB,
            DirectionSpec::BtoA => Direction::BtoA,
        }
    }
}

/// A validated set together with its Weyl description, if it has one.
#[derive(Debug, Clone)]
pub struct LoadedSet {
    /// Unitaries act on the party measuring second.
    pub set: StateSet,
    /// Indices of the operators acting on the second party (transposed
    /// for `BtoA`); `None` when some unitary is given as a matrix.
    pub weyl: Option<Vec<WeylIndex>>,
    /// Position of the first matrix-typed unitary.
    pub first_matrix: Option<usize>,
}

fn to_complex(rows: &[Vec<[f64; 2]>]) -> Vec<Vec<Complex64>> {
    rows.iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect()
}

fn from_complex(rows: &[Vec<Complex64>]) -> Vec<Vec<[f64; 2]>> {
    rows.iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl StateSetSpec {
    /// Generalized Bell states `(I ⊗ U_{n m})|Φ+⟩`.
    pub fn weyl(d: usize, indices: &[(i64, i64)], direction: DirectionSpec) -> Self {
        StateSetSpec {
            d,
            base: BaseSpec::Named(BaseName::PhiPlus),
            unitaries: indices
                .iter()
                .map(|&(n, m)| UnitarySpec::Weyl { n, m })
                .collect(),
            direction,
        }
    }

    /// Explicit matrices describing the same states as `ss`.
    pub fn from_state_set(ss: &StateSet) -> locclab_core::Result<Self> {
        let (on_b, direction) = match ss.direction() {
            Direction::AtoB => (ss.clone(), DirectionSpec::AtoB),
            Direction::BtoA => (transpose_set(ss)?, DirectionSpec::BtoA),
        };
        Ok(StateSetSpec {
            d: on_b.d_b(),
            base: BaseSpec::Matrix(from_complex(&on_b.base().rows())),
            unitaries: on_b
                .unitaries()
                .iter()
                .map(|u| UnitarySpec::Matrix {
                    rows: from_complex(&u.rows()),
                })
                .collect(),
            direction,
        })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec is always serializable")
    }

    /// Builds and validates the state set.
    pub fn load(&self, origin: &str) -> Result<LoadedSet> {
        let spec_err = |pointer: String, message: String| CliError::Spec {
            origin: origin.to_string(),
            pointer,
            message,
        };
        if self.d < 1 {
            return Err(spec_err("d".into(), "dimension must be positive".into()));
        }
        let base = match &self.base {
            BaseSpec::Named(BaseName::PhiPlus) => BipartiteState::phi_plus(self.d),
            BaseSpec::Matrix(rows) => BipartiteState::from_rows(&to_complex(rows))
                .map_err(|e| spec_err("base".into(), e.to_string()))?,
        };
        if base.d_b() != self.d {
            return Err(spec_err(
                "base".into(),
                format!("B dimension {} differs from d = {}", base.d_b(), self.d),
            ));
        }

        let mut unitaries = Vec::with_capacity(self.unitaries.len());
        let mut weyl = Vec::new();
        let mut first_matrix = None;
        for (i, u) in self.unitaries.iter().enumerate() {
            let at = || format!("unitaries[{i}]");
            match u {
                UnitarySpec::Weyl { n, m } => {
                    let idx = WeylIndex::new(*n, *m, self.d)
                        .map_err(|e| spec_err(at(), e.to_string()))?;
                    weyl.push(idx);
                    unitaries.push(locclab_core::make_weyl(idx));
                }
                UnitarySpec::Matrix { rows } => {
                    first_matrix.get_or_insert(i);
                    let op = ComplexOperator::from_rows(&to_complex(rows))
                        .map_err(|e| spec_err(format!("{}.rows", at()), e.to_string()))?;
                    if op.dim() != self.d {
                        return Err(spec_err(
                            format!("{}.rows", at()),
                            format!("matrix is {0}x{0}, expected d = {1}", op.dim(), self.d),
                        ));
                    }
                    unitaries.push(op);
                }
            }
        }

        let set = StateSet::new(base, unitaries, Direction::AtoB).map_err(|e| match e {
            Error::NotUnitary { index, .. } => {
                spec_err(format!("unitaries[{index}]"), e.to_string())
            }
            Error::NotOrthogonal { first, second, .. } => spec_err(
                format!("unitaries[{first}], unitaries[{second}]"),
                e.to_string(),
            ),
            Error::EmptySet => spec_err("unitaries".into(), e.to_string()),
            Error::NotNormalized { .. } => spec_err("base".into(), e.to_string()),
            other => spec_err("/".into(), other.to_string()),
        })?;

        let (set, weyl) = match self.direction {
            DirectionSpec::AtoB => (set, weyl),
            DirectionSpec::BtoA => {
                let t = transpose_set(&set).map_err(|e| {
                    spec_err(
                        "direction".into(),
                        format!("BtoA needs a square maximally entangled base: {e}"),
                    )
                })?;
                (t, weyl.iter().map(WeylIndex::transposed).collect())
            }
        };
        Ok(LoadedSet {
            set,
            weyl: first_matrix.is_none().then_some(weyl),
            first_matrix,
        })
    }
}

/// Reads, parses and validates a spec file.
pub fn load_file(path: &Path) -> Result<LoadedSet> {
    StateSetSpec::read(path)?.load(&path.display().to_string())
}
