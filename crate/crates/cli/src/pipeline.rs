//! The decision pipeline: bound check, witness search, infeasibility proof,
//! witness basis and protocol evaluation.

use locclab_core::{
    build_protocol, check_nd_bound, commutation_defect, evaluate_protocol, find_witness_basis,
    is_maximally_entangled, prove_infeasible, solve_witness, tol, Direction, Outcome, ProofTrace,
    SolverConfig, StateSet, Verdict, WeylIndex,
};

use crate::error::{CliError, Result};

/// A protocol counts as perfect at this success probability.
pub const PERFECT_SUCCESS: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct DecideOptions {
    pub solver: SolverConfig,
    pub skip_prover: bool,
    pub skip_sim: bool,
}


#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSummary {
    pub verdict: Verdict,
    pub best_f: f64,
    pub best_restart: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProverStatus {
    Ran(ProofTrace),
    Skipped,
    /// Some unitary is not Weyl-typed.
    NotApplicable,
}

impl ProverStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ProverStatus::Ran(t) => t.outcome.as_str(),
            ProverStatus::Skipped => "SKIPPED",
            ProverStatus::NotApplicable => "NOT_WEYL",
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match self {
            ProverStatus::Ran(t) => Some(t.outcome),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSummary {
    pub success_probability: f64,
    pub worst_case_success: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecideReport {
    pub states: usize,
    pub d_a: usize,
    pub d_b: usize,
    pub direction: Direction,
    pub indices: Option<Vec<WeylIndex>>,
    pub bound_violated: bool,
    pub solver: Option<SolverSummary>,
    pub prover: ProverStatus,
    pub basis_completeness: Option<usize>,
    pub protocol: Option<ProtocolSummary>,
    pub notes: Vec<String>,
}

impl DecideReport {
    /// True when the report settles perfect one-way distinguishability in
    /// the given direction.
    pub fn decided(&self) -> bool {
        self.bound_violated
            || self.prover.outcome() == Some(Outcome::Infeasible)
            || self
                .protocol
                .is_some_and(|p| p.success_probability >= PERFECT_SUCCESS)
    }

    pub fn exit_code(&self) -> i32 {
        if self.decided() {
            0
        } else {
            2
        }
    }

    /// Weyl indices as `(n,m);(n,m);…`, empty for matrix input.
    pub fn indices_label(&self) -> String {
        self.indices
            .as_ref()
            .map(|v| {
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default()
    }
}

fn direction_label(d: Direction) -> &'static str {
    match d {
        Direction::AtoB => "AtoB",
        Direction::BtoA => "BtoA",
    }
}

fn first_measurer(d: Direction) -> &'static str {
    match d {
        Direction::AtoB => "A",
        Direction::BtoA => "B",
    }
}

/// Runs the pipeline on a validated set whose unitaries act on the party
/// measuring second. `weyl` carries their Weyl indices when every operator
/// is Weyl-typed.
pub fn decide(
    ss: &StateSet,
    weyl: Option<&[WeylIndex]>,
    opts: &DecideOptions,
) -> Result<DecideReport> {
    let mut report = DecideReport {
        states: ss.len(),
        d_a: ss.d_a(),
        d_b: ss.d_b(),
        direction: ss.direction(),
        indices: weyl.map(<[WeylIndex]>::to_vec),
        bound_violated: check_nd_bound(ss),
        solver: None,
        prover: ProverStatus::Skipped,
        basis_completeness: None,
        protocol: None,
        notes: Vec::new(),
    };
    let first = first_measurer(ss.direction());
    if report.bound_violated {
        report.notes.push(format!(
            "{} states exceed the receiving dimension {}; not perfectly distinguishable by LOCC",
            ss.len(),
            ss.receiver_dim()
        ));
        return Ok(report);
    }

    let sol = solve_witness(ss, &opts.solver)?;
    report.solver = Some(SolverSummary {
        verdict: sol.verdict,
        best_f: sol.best_f,
        best_restart: sol.best_restart,
        restarts: sol.restarts,
        seed: sol.seed,
    });

    report.prover = match (weyl, opts.skip_prover) {
        (_, true) => ProverStatus::Skipped,
        (None, false) => ProverStatus::NotApplicable,
        (Some(idx), false) => ProverStatus::Ran(prove_infeasible(idx)?),
    };
    let infeasible = report.prover.outcome() == Some(Outcome::Infeasible);
    if infeasible && sol.verdict == Verdict::WitnessFound {
        return Err(CliError::Contradiction(format!(
            "prover certifies no witness but the solver found one with f = {:e}",
            sol.best_f
        )));
    }

    if sol.verdict == Verdict::NoWitnessFound {
        if infeasible {
            report.notes.push(format!(
                "proof certificate: no witness exists; not perfectly distinguishable by one-way LOCC with {first} measuring first"
            ));
        } else {
            report.notes.push(
                "no witness found numerically; without an INFEASIBLE proof this is evidence, not a certificate"
                    .into(),
            );
        }
        let sender_is_qubit = ss.sender_dim() == 2;
        if sender_is_qubit {
            report.notes.push(format!(
                "first measurer is a qubit: absent a witness the states are not perfectly distinguishable by two-way LOCC either (with {first} starting)"
            ));
        }
    } else {
        let basis = find_witness_basis(ss, opts.solver.restarts, opts.solver.seed)?;
        report.basis_completeness = Some(basis.completeness);
        let dim = ss.receiver_dim();
        if !basis.is_complete(dim) {
            report.notes.push(format!(
                "witness basis incomplete ({} of {dim}); sufficiency not established",
                basis.completeness
            ));
        } else if !is_maximally_entangled(ss.base()) {
            report.notes.push(
                "base state is not maximally entangled; no protocol construction available".into(),
            );
        } else if !opts.skip_sim {
            let protocol = build_protocol(ss, &basis)?;
            let t = evaluate_protocol(ss, &protocol)?;
            report.protocol = Some(ProtocolSummary {
                success_probability: t.success_probability,
                worst_case_success: t.worst_case_success,
            });
            if t.success_probability < PERFECT_SUCCESS {
                report.notes.push(format!(
                    "constructed protocol is not perfect (success {:e})",
                    t.success_probability
                ));
            }
        }
    }

    if commutation_defect(ss) <= tol::UNIT {
        report.notes.push(
            "unitaries satisfy U_k^dag U_l = U_l U_k^dag: the verdict holds for both directions"
                .into(),
        );
    }
    Ok(report)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fixed CSV columns shared by `decide` and `sweep`.
pub const CSV_HEADER: [&str; 7] = [
    "indices",
    "bound_violated",
    "solver_verdict",
    "best_f",
    "prover_outcome",
    "basis_completeness",
    "success_probability",
];

pub fn csv_record(r: &DecideReport) -> [String; 7] {
    [
        r.indices_label(),
        r.bound_violated.to_string(),
        r.solver
            .map_or("SKIPPED".into(), |s| s.verdict.as_str().to_string()),
        r.solver.map_or(String::new(), |s| fmt_f(s.best_f)),
        r.prover.label().to_string(),
        r.basis_completeness
            .map_or(String::new(), |c| c.to_string()),
        r.protocol
            .map_or(String::new(), |p| fmt_f(p.success_probability)),
    ]
}

/// `key: value` lines.
pub fn text_report(r: &DecideReport, trace_path: Option<&str>) -> String {
    let mut lines = vec![
        format!("states: {}", r.states),
        format!("dims: {}x{}", r.d_a, r.d_b),
        format!("direction: {}", direction_label(r.direction)),
    ];
    if r.indices.is_some() {
        lines.push(format!("indices: {}", r.indices_label()));
    }
    lines.push(format!("bound_violated: {}", r.bound_violated));
    match &r.solver {
        Some(s) => {
            lines.push(format!("solver_verdict: {}", s.verdict));
            lines.push(format!("best_f: {}", fmt_f(s.best_f)));
            lines.push(format!("best_restart: {}", s.best_restart));
            lines.push(format!("restarts: {}", s.restarts));
            lines.push(format!("seed: {}", s.seed));
        }
        None => lines.push("solver_verdict: SKIPPED".into()),
    }
    lines.push(format!("prover_outcome: {}", r.prover.label()));
    if let (ProverStatus::Ran(_), Some(p)) = (&r.prover, trace_path) {
        lines.push(format!("prover_trace: {p}"));
    }
    if let Some(c) = r.basis_completeness {
        lines.push(format!("basis_completeness: {c}"));
    }
    if let Some(p) = r.protocol {
        lines.push(format!(
            "success_probability: {}",
            fmt_f(p.success_probability)
        ));
        lines.push(format!(
            "worst_case_success: {}",
            fmt_f(p.worst_case_success)
        ));
    }
    for n in &r.notes {
        lines.push(format!("note: {n}"));
    }
    lines.push(format!("decided: {}", r.decided()));
    let mut out = lines.join("\n");
    out.push('\n');
    out
}
