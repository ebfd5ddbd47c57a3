//! Proof traces and their line-oriented text form.
//!
//! ```text
//! STEP 1: CONDITION_TABLE | d=4 conditions=[(0,2),(1,0),(1,1),(1,2),(1,3),(2,3)]
//! STEP 2: FORCED_PROPORTIONALITY | t0=1 n4=0 annihilators=[1,2,3]
//! STEP 3: LAMBDA_NONZERO_REFUTED | t0=1 n4=0 t=3 e=0 k=3 residue=0
//! ...
//! OUTCOME: INFEASIBLE
//! ```
//!
//! Payloads carry only integers mod `d` and support bitmasks (bit `j` is
//! index `j`), so traces diff cleanly.

use std::fmt;

use thiserror::Error;

use super::table::Condition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Infeasible,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Infeasible => "INFEASIBLE",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofStep {
    /// The canonical condition table.
    ConditionTable {
        d: usize,
        conditions: Vec<Condition>,
    },
    /// The shift-`anchor` correlation `c(j) = φ_j φ*_{j⊕anchor}` is
    /// annihilated by the characters `annihilators` and therefore equals
    /// `λ ω^{-residual·j}`.
    ForcedProportionality {
        anchor: usize,
        residual: usize,
        annihilators: Vec<usize>,
    },
    /// No shift coprime to `d` carries `d − 1` distinct exponents.
    NoAnchor,
    /// Chaining the correlation `power` times along the anchor turns the
    /// condition `(shift, exponent)` into `λ^k Σ_j ω^{residue·j}·(positive)`;
    /// `residue = 0` forces `λ = 0`.
    LambdaNonzeroRefuted {
        anchor: usize,
        residual: usize,
        shift: usize,
        exponent: usize,
        power: usize,
        residue: usize,
    },
    LambdaNonzeroOpen {
        anchor: usize,
        residual: usize,
    },
    /// Number of supports independent in the circulant graph of the anchor.
    SupportCases {
        anchor: usize,
        count: usize,
    },
    /// Empty support contradicts normalization.
    Normalization {
        mask: u32,
    },
    /// One shift-0 condition has no strictly positive solution on the support.
    ShiftZeroHull {
        mask: u32,
        exponent: usize,
    },
    /// The shift-0 conditions jointly have no strictly positive solution.
    ShiftZeroJoint {
        mask: u32,
        exponents: Vec<usize>,
    },
    /// The shift-`shift` conditions restricted to the support force the
    /// cross terms `φ_j φ*_{j⊕shift}`, `j ∈ columns`, to vanish although
    /// both factors are nonzero.
    CrossTermsVanish {
        mask: u32,
        shift: usize,
        exponents: Vec<usize>,
        columns: Vec<usize>,
    },
    BranchOpen {
        mask: u32,
    },
}

impl ProofStep {
    pub fn kind(&self) -> &'static str {
        match self {
            ProofStep::ConditionTable { .. } => "CONDITION_TABLE",
            ProofStep::ForcedProportionality { .. } => "FORCED_PROPORTIONALITY",
            ProofStep::NoAnchor => "NO_ANCHOR",
            ProofStep::LambdaNonzeroRefuted { .. } => "LAMBDA_NONZERO_REFUTED",
            ProofStep::LambdaNonzeroOpen { .. } => "LAMBDA_NONZERO_OPEN",
            ProofStep::SupportCases { .. } => "LAMBDA_ZERO_SUPPORTS",
            ProofStep::Normalization { .. } => "SUPPORT_EMPTY",
            ProofStep::ShiftZeroHull { .. } => "SHIFT0_HULL",
            ProofStep::ShiftZeroJoint { .. } => "SHIFT0_JOINT",
            ProofStep::CrossTermsVanish { .. } => "CROSS_TERMS_VANISH",
            ProofStep::BranchOpen { .. } => "BRANCH_OPEN",
        }
    }

    /// Support mask for per-branch steps.
    pub fn mask(&self) -> Option<u32> {
        match self {
            ProofStep::Normalization { mask }
            | ProofStep::ShiftZeroHull { mask, .. }
            | ProofStep::ShiftZeroJoint { mask, .. }
            | ProofStep::CrossTermsVanish { mask, .. }
            | ProofStep::BranchOpen { mask } => Some(*mask),
            _ => None,
        }
    }

    fn payload(&self, d: usize) -> String {
        let m = |mask: &u32| format!("mask=0b{:0width$b}", mask, width = d.max(1));
        match self {
            ProofStep::ConditionTable { d, conditions } => {
                let list: Vec<String> = conditions.iter().map(|c| c.to_string()).collect();
                format!("d={d} conditions=[{}]", list.join(","))
            }
            ProofStep::ForcedProportionality {
                anchor,
                residual,
                annihilators,
            } => format!(
                "t0={anchor} n4={residual} annihilators={}",
                list(annihilators)
            ),
            ProofStep::NoAnchor => String::new(),
            ProofStep::LambdaNonzeroRefuted {
                anchor,
                residual,
                shift,
                exponent,
                power,
                residue,
            } => format!(
                "t0={anchor} n4={residual} t={shift} e={exponent} k={power} residue={residue}"
            ),
            ProofStep::LambdaNonzeroOpen { anchor, residual } => {
                format!("t0={anchor} n4={residual}")
            }
            ProofStep::SupportCases { anchor, count } => format!("t0={anchor} count={count}"),
            ProofStep::Normalization { mask } => m(mask),
            ProofStep::ShiftZeroHull { mask, exponent } => format!("{} e={exponent}", m(mask)),
            ProofStep::ShiftZeroJoint { mask, exponents } => {
                format!("{} e={}", m(mask), list(exponents))
            }
            ProofStep::CrossTermsVanish {
                mask,
                shift,
                exponents,
                columns,
            } => format!(
                "{} t={shift} e={} j={}",
                m(mask),
                list(exponents),
                list(columns)
            ),
            ProofStep::BranchOpen { mask } => m(mask),
        }
    }
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub d: usize,
    pub steps: Vec<ProofStep>,
    pub outcome: Outcome,
}

impl ProofTrace {
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<ProofTrace, ParseError> {
        let mut steps = Vec::new();
        let mut outcome = None;
        let mut d = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| ParseError {
                line: lineno + 1,
                reason: reason.to_string(),
            };
            if let Some(rest) = line.strip_prefix("OUTCOME:") {
                outcome = Some(match rest.trim() {
                    "INFEASIBLE" => Outcome::Infeasible,
                    "INCONCLUSIVE" => Outcome::Inconclusive,
                    _ => return Err(err("unknown outcome")),
                });
                continue;
            }
            let rest = line
                .strip_prefix("STEP ")
                .ok_or_else(|| err("expected STEP"))?;
            let (number, rest) = rest.split_once(':').ok_or_else(|| err("missing ':'"))?;
            let number: usize = number.trim().parse().map_err(|_| err("bad step number"))?;
            if number != steps.len() + 1 {
                return Err(err("steps out of order"));
            }
            let (kind, payload) = match rest.split_once('|') {
                Some((k, p)) => (k.trim(), p.trim()),
                None => (rest.trim(), ""),
            };
            let fields = Fields::new(payload).map_err(|r| err(&r))?;
            let step = fields.step(kind).map_err(|r| err(&r))?;
            if let ProofStep::ConditionTable { d: dd, .. } = &step {
                d = Some(*dd);
            }
            steps.push(step);
        }
        Ok(ProofTrace {
            d: d.ok_or(ParseError {
                line: 0,
                reason: "missing condition table".into(),
            })?,
            steps,
            outcome: outcome.ok_or(ParseError {
                line: 0,
                reason: "missing OUTCOME line".into(),
            })?,
        })
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            let payload = step.payload(self.d);
            if payload.is_empty() {
                writeln!(f, "STEP {}: {}", i + 1, step.kind())?;
            } else {
                writeln!(f, "STEP {}: {} | {}", i + 1, step.kind(), payload)?;
            }
        }
        writeln!(f, "OUTCOME: {}", self.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

struct Fields<'a>(Vec<(&'a str, &'a str)>);

impl<'a> Fields<'a> {
    fn new(payload: &'a str) -> Result<Self, String> {
        payload
            .split_whitespace()
            .map(|tok| {
                tok.split_once('=')
                    .ok_or(format!("malformed field '{tok}'"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Fields)
    }

    fn raw(&self, key: &str) -> Result<&'a str, String> {
        self.0
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or(format!("missing field '{key}'"))
    }

    fn int(&self, key: &str) -> Result<usize, String> {
        self.raw(key)?
            .parse()
            .map_err(|_| format!("bad integer in '{key}'"))
    }

    fn mask(&self) -> Result<u32, String> {
        let v = self.raw("mask")?;
        let bits = v.strip_prefix("0b").ok_or("mask must start with 0b")?;
        u32::from_str_radix(bits, 2).map_err(|_| "bad mask".to_string())
    }

    fn list(&self, key: &str) -> Result<Vec<usize>, String> {
        let v = self.raw(key)?;
        let inner = v
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(format!("'{key}' must be a list"))?;
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|x| x.parse().map_err(|_| format!("bad list entry in '{key}'")))
            .collect()
    }

    fn conditions(&self) -> Result<Vec<Condition>, String> {
        let v = self.raw("conditions")?;
        let inner = v
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or("conditions must be a list")?;
        if inner.is_empty() {
            return Ok(Vec::new());
        }
        inner
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split("),(")
            .map(|pair| {
                let (t, e) = pair.split_once(',').ok_or("bad condition")?;
                Ok(Condition {
                    shift: t.parse().map_err(|_| "bad shift")?,
                    exponent: e.parse().map_err(|_| "bad exponent")?,
                })
            })
            .collect::<Result<Vec<_>, &str>>()
            .map_err(str::to_string)
    }

    fn step(&self, kind: &str) -> Result<ProofStep, String> {
        Ok(match kind {
            "CONDITION_TABLE" => ProofStep::ConditionTable {
                d: self.int("d")?,
                conditions: self.conditions()?,
            },
            "FORCED_PROPORTIONALITY" => ProofStep::ForcedProportionality {
                anchor: self.int("t0")?,
                residual: self.int("n4")?,
                annihilators: self.list("annihilators")?,
            },
            "NO_ANCHOR" => ProofStep::NoAnchor,
            "LAMBDA_NONZERO_REFUTED" => ProofStep::LambdaNonzeroRefuted {
                anchor: self.int("t0")?,
                residual: self.int("n4")?,
                shift: self.int("t")?,
                exponent: self.int("e")?,
                power: self.int("k")?,
                residue: self.int("residue")?,
            },
            "LAMBDA_NONZERO_OPEN" => ProofStep::LambdaNonzeroOpen {
                anchor: self.int("t0")?,
                residual: self.int("n4")?,
            },
            "LAMBDA_ZERO_SUPPORTS" => ProofStep::SupportCases {
                anchor: self.int("t0")?,
                count: self.int("count")?,
            },
            "SUPPORT_EMPTY" => ProofStep::Normalization { mask: self.mask()? },
            "SHIFT0_HULL" => ProofStep::ShiftZeroHull {
                mask: self.mask()?,
                exponent: self.int("e")?,
            },
            "SHIFT0_JOINT" => ProofStep::ShiftZeroJoint {
                mask: self.mask()?,
                exponents: self.list("e")?,
            },
            "CROSS_TERMS_VANISH" => ProofStep::CrossTermsVanish {
                mask: self.mask()?,
                shift: self.int("t")?,
                exponents: self.list("e")?,
                columns: self.list("j")?,
            },
            "BRANCH_OPEN" => ProofStep::BranchOpen { mask: self.mask()? },
            other => return Err(format!("unknown step kind '{other}'")),
        })
    }
}
