//! The five subcommands. Each returns its rendered outputs; nothing is
//! written until the caller decides where the output goes.

use rayon::prelude::*;
use serde::Serialize;

use nct_spin_core::axioms::run_axiom_suite;
use nct_spin_core::classify::{
    counterexample_report, intertwiner_verdict, rational_angle_warning, IntertwinerProblem, IntertwinerVerdict,
};
use nct_spin_core::spectra::{
    dirac_spectrum_blocks, eigensolver_oracle, hochschild_check_at, homogeneous_commutator_scan,
    max_elementwise_gap, resolvent_growth, HochschildOutcome, HOCHSCHILD_DEPTH,
};
use nct_spin_core::triple::BundleConfig;
use nct_spin_core::{
    axioms, DiracCase, DiracParams, RealStructureParams, SpectralTripleBundle, SpinStructure, C64,
};

use crate::config::{OutputFormat, RunConfig};
use crate::report::{CheckEntry, Num, Report};
use crate::CliError;

/// Everything one command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub exit_code: i32,
    pub json: String,
    pub text: String,
    pub csv: String,
    /// Extra artifacts as `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

impl CommandOutput {
    fn from_report<T: Serialize, V: Serialize>(
        report: &Report<T, V>,
        summary: &[String],
        csv: Option<String>,
        files: Vec<(String, String)>,
    ) -> Self {
        Self {
            exit_code: if report.all_pass() { 0 } else { 1 },
            json: report.to_json(),
            text: report.to_text(summary),
            csv: csv.unwrap_or_else(|| report.checks_csv()),
            files,
        }
    }

    /// What goes to stdout for the requested format.
    pub fn stdout(&self, format: OutputFormat) -> &str {
        match format {
            OutputFormat::Json => &self.json,
            OutputFormat::Text => &self.text,
            OutputFormat::Csv => &self.csv,
        }
    }
}

pub fn bundle_config(cfg: &RunConfig, spin: SpinStructure, n_max: usize) -> BundleConfig {
    BundleConfig {
        n_max,
        spin,
        lambda: cfg.lambda(),
        real: RealStructureParams::new(cfg.phi, cfg.psi, cfg.theta),
        dirac: DiracParams {
            tau1: cfg.tau1,
            tau2: cfg.tau2,
            tau0: cfg.tau0,
            eps_const: cfg.eps_const,
        },
    }
}

fn bundle(cfg: &RunConfig, spin: SpinStructure) -> Result<SpectralTripleBundle, CliError> {
    Ok(SpectralTripleBundle::new(bundle_config(cfg, spin, cfg.n_max))?)
}

fn prefix(cfg: &RunConfig, spin: SpinStructure) -> String {
    if cfg.spins.len() > 1 {
        format!("{}:", spin.tag())
    } else {
        String::new()
    }
}

fn hochschild_entry(cfg: &RunConfig, b: &SpectralTripleBundle, pre: &str) -> Result<(CheckEntry, HochschildOutcome), CliError> {
    let depth = cfg
        .depth
        .unwrap_or(HOCHSCHILD_DEPTH + axioms::reflection_margin(b));
    let out = hochschild_check_at(b, cfg.tolerance, depth)?;
    let name = if out.target == "gamma" {
        "hochschild_image_minus_gamma"
    } else {
        "nontrivial_cycle_image"
    };
    Ok((CheckEntry::new(format!("{pre}{name}"), out.residual, cfg.tolerance, depth), out))
}

const SPURIOUS_NOTE: &str = "phi or psi is nonzero: only the algebraic axioms are checked here; \
the spurious-class flags come from `resolvent` (bounded spectrum) and `hochschild` (orientation)";

#[derive(Serialize)]
struct SpinVerdict {
    spin: String,
    case: &'static str,
    all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hochschild: Option<&'static str>,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let results: Vec<_> = cfg
        .spins
        .par_iter()
        .map(|&spin| -> Result<_, CliError> {
            let b = bundle(cfg, spin)?;
            let suite = run_axiom_suite(&b, cfg.tolerance)?;
            let pre = prefix(cfg, spin);
            let mut checks: Vec<CheckEntry> =
                suite.checks.iter().map(|r| CheckEntry::from_record(&pre, r)).collect();
            let mut hoch = None;
            if cfg.hochschild {
                let (entry, out) = hochschild_entry(cfg, &b, &pre)?;
                checks.push(entry);
                hoch = Some(out.verdict.name());
            }
            Ok((spin, b.case(), checks, hoch))
        })
        .collect::<Result<_, _>>()?;

    let mut report: Report<(), Vec<SpinVerdict>> = Report::new(cfg);
    let mut verdicts = Vec::new();
    for (spin, case, checks, hochschild) in results {
        verdicts.push(SpinVerdict {
            spin: spin.to_string(),
            case: case.name(),
            all_pass: checks.iter().all(|c| c.pass),
            hochschild,
        });
        report.checks.extend(checks);
        if case != DiracCase::Canonical && report.notes.is_empty() {
            report.notes.push(SPURIOUS_NOTE.to_string());
        }
    }
    let summary: Vec<String> = verdicts
        .iter()
        .map(|v| format!("spin {}: {} ({})", v.spin, if v.all_pass { "PASS" } else { "FAIL" }, v.case))
        .collect();
    report.verdicts = Some(verdicts);
    Ok(CommandOutput::from_report(&report, &summary, None, Vec::new()))
}

#[derive(Serialize)]
struct SpectrumSummary {
    spin: String,
    tag: String,
    n_max: usize,
    dim: usize,
    kernel_dim: usize,
    distinct_abs: Vec<Num>,
    csv_file: String,
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let results: Vec<_> = cfg
        .spins
        .par_iter()
        .map(|&spin| -> Result<_, CliError> {
            let b = bundle(cfg, spin)?;
            let pre = prefix(cfg, spin);
            let table = dirac_spectrum_blocks(&b);
            let blocks = table.expanded();
            let oracle = eigensolver_oracle(b.dirac())?;
            let gap = max_elementwise_gap(&blocks, &oracle)?;
            let n = blocks.len();
            let asym = (0..n).map(|i| (blocks[i] + blocks[n - 1 - i]).abs()).fold(0.0, f64::max);
            let mut checks = vec![
                CheckEntry::new(format!("{pre}oracle_agreement"), gap, table.dedup_tol, 0),
                CheckEntry::new(format!("{pre}spectral_symmetry"), asym, table.dedup_tol, 0),
            ];
            if cfg.hochschild {
                checks.push(hochschild_entry(cfg, &b, &pre)?.0);
            }
            Ok((spin, table, checks))
        })
        .collect::<Result<_, _>>()?;

    let mut report: Report<Vec<SpectrumSummary>, ()> = Report::new(cfg);
    let mut tables = Vec::new();
    let mut files = Vec::new();
    let mut csv = String::new();
    let mut summary = Vec::new();
    for (spin, table, checks) in results {
        let file = format!("spectrum_{}.csv", spin.tag());
        let body = table.to_csv();
        if cfg.spins.len() > 1 {
            csv.push_str(&format!("# spin {spin}\n"));
        }
        csv.push_str(&body);
        summary.push(format!(
            "spin {spin}: dim {}, kernel {}, smallest |e| {:?}",
            table.dim(),
            table.kernel_dim(),
            table.distinct_abs(3)
        ));
        tables.push(SpectrumSummary {
            spin: spin.to_string(),
            tag: spin.tag(),
            n_max: table.n_max,
            dim: table.dim(),
            kernel_dim: table.kernel_dim(),
            distinct_abs: table.distinct_abs(10).into_iter().map(Num).collect(),
            csv_file: file.clone(),
        });
        files.push((file, body));
        report.checks.extend(checks);
    }
    report.tables = Some(tables);
    Ok(CommandOutput::from_report(&report, &summary, Some(csv), files))
}

#[derive(Serialize)]
struct WitnessJson {
    shift: (i64, i64),
    w_minus: &'static str,
    residual: Num,
    unitarity: Num,
    identity_distance: Num,
}

#[derive(Serialize)]
struct PairJson {
    source: String,
    target: String,
    equivalent: bool,
    admissible_shifts: Vec<(i64, i64)>,
    min_deviation: Num,
    witness: Option<WitnessJson>,
    best_residual: Option<Num>,
}

#[derive(Serialize)]
struct ClassifyVerdicts {
    order: Vec<String>,
    matrix: Vec<Vec<bool>>,
    pairs: Vec<PairJson>,
}

#[derive(Serialize)]
struct CounterexampleJson {
    n_max: usize,
    mask_depth: usize,
    intertwining: Num,
    grading_anticommutator: Num,
    grading_commutator: Num,
    commutator_u: Num,
    commutator_v: Num,
    unitarity: Num,
}

fn unit_name(z: C64) -> &'static str {
    if z == C64::new(1.0, 0.0) {
        "1"
    } else if z == C64::new(-1.0, 0.0) {
        "-1"
    } else if z == C64::new(0.0, 1.0) {
        "i"
    } else {
        "-i"
    }
}

fn pair_json(v: &IntertwinerVerdict) -> PairJson {
    PairJson {
        source: v.source.to_string(),
        target: v.target.to_string(),
        equivalent: v.equivalent,
        admissible_shifts: v.admissible.shifts.clone(),
        min_deviation: Num(v.admissible.deviations.iter().map(|d| d.1).fold(f64::INFINITY, f64::min)),
        witness: v.witness.as_ref().map(|w| WitnessJson {
            shift: w.shift,
            w_minus: unit_name(w.w_minus),
            residual: Num(w.residual),
            unitarity: Num(w.unitarity),
            identity_distance: Num(w.identity_distance),
        }),
        best_residual: v.best_residual.map(Num),
    }
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let lambda = cfg.lambda();
    let pairs: Vec<(SpinStructure, SpinStructure)> = SpinStructure::ALL
        .iter()
        .flat_map(|&s| SpinStructure::ALL.iter().map(move |&t| (s, t)))
        .collect();
    let verdicts: Vec<IntertwinerVerdict> = pairs
        .par_iter()
        .map(|&(s, t)| {
            let problem = IntertwinerProblem {
                k_window: cfg.k_window,
                ..IntertwinerProblem::new(s, t, lambda)
            };
            intertwiner_verdict(&problem)
        })
        .collect::<Result<_, _>>()?;

    let mut report: Report<Option<CounterexampleJson>, ClassifyVerdicts> = Report::new(cfg);
    let matrix: Vec<Vec<bool>> = verdicts.chunks(4).map(|row| row.iter().map(|v| v.equivalent).collect()).collect();
    let off_identity = (0..16).filter(|&i| matrix[i / 4][i % 4] != (i / 4 == i % 4)).count();
    report
        .checks
        .push(CheckEntry::new("verdict_matrix_off_identity_entries", off_identity as f64, 0.0, 0));
    let certificate = verdicts
        .iter()
        .filter(|v| v.source == v.target)
        .map(|v| v.witness.as_ref().map_or(f64::INFINITY, |w| w.identity_distance.max(w.residual)))
        .fold(0.0, f64::max);
    report.checks.push(CheckEntry::new(
        "identity_pair_certificates",
        certificate,
        cfg.tolerance,
        cfg.k_window + 2,
    ));
    report.warnings.extend(rational_angle_warning(lambda));

    let mut summary: Vec<String> = matrix
        .iter()
        .zip(SpinStructure::ALL)
        .map(|(row, s)| {
            let cells: Vec<&str> = row.iter().map(|&b| if b { "T" } else { "F" }).collect();
            format!("{:<8} {}", s.to_string(), cells.join(" "))
        })
        .collect();

    if cfg.counterexample {
        let depth = cfg.depth.unwrap_or(2);
        let r = counterexample_report(cfg.n_max, lambda, depth)?;
        let tol = cfg.tolerance;
        report.checks.extend([
            CheckEntry::new("counterexample_intertwining", r.intertwining, tol, depth),
            CheckEntry::new("counterexample_unitarity", r.unitarity, tol, depth),
            CheckEntry::new("counterexample_grading_anticommutator", r.grading_anticommutator, tol, depth),
            CheckEntry::new("counterexample_grading_commutator_minus_2", (r.grading_commutator - 2.0).abs(), tol, depth),
        ]);
        summary.push(format!(
            "counterexample: intertwining {:.3e}, grading commutator {:.15}, algebra commutator {:.15}",
            r.intertwining,
            r.grading_commutator,
            r.commutator_u.max(r.commutator_v)
        ));
        report.tables = Some(Some(CounterexampleJson {
            n_max: r.n_max,
            mask_depth: r.mask_depth,
            intertwining: Num(r.intertwining),
            grading_anticommutator: Num(r.grading_anticommutator),
            grading_commutator: Num(r.grading_commutator),
            commutator_u: Num(r.commutator_u),
            commutator_v: Num(r.commutator_v),
            unitarity: Num(r.unitarity),
        }));
    }
    report.verdicts = Some(ClassifyVerdicts {
        order: SpinStructure::ALL.iter().map(|s| s.to_string()).collect(),
        matrix,
        pairs: verdicts.iter().map(pair_json).collect(),
    });
    Ok(CommandOutput::from_report(&report, &summary, None, Vec::new()))
}

#[derive(Serialize)]
struct HochschildVerdictJson {
    spin: String,
    case: &'static str,
    target: &'static str,
    verdict: &'static str,
    gamma_fit_residual: Num,
}

#[derive(Serialize)]
struct ScanJson {
    a0: (i64, i64),
    a1: (i64, i64),
    a2: (i64, i64),
    total_degree: (i64, i64),
    c: (Num, Num),
    c_prime: (Num, Num),
    c_dprime: (Num, Num),
    abs_c: Num,
    fit_residual: Num,
    identity_component: (Num, Num),
}

fn pair(z: C64) -> (Num, Num) {
    (Num(z.re), Num(z.im))
}

pub fn cmd_hochschild(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let spin = cfg.spins[0];
    let b = bundle(cfg, spin)?;
    let (entry, out) = hochschild_entry(cfg, &b, "")?;
    let mut report: Report<Vec<ScanJson>, HochschildVerdictJson> = Report::new(cfg);
    report.checks.push(entry);
    if b.case() != DiracCase::Canonical {
        let scan = homogeneous_commutator_scan(&b)?;
        report.tables = Some(
            scan.iter()
                .map(|e| ScanJson {
                    a0: e.a0,
                    a1: e.a1,
                    a2: e.a2,
                    total_degree: e.total_degree,
                    c: pair(e.c),
                    c_prime: pair(e.c_prime),
                    c_dprime: pair(e.c_dprime),
                    abs_c: Num(e.c.norm()),
                    fit_residual: Num(e.fit_residual),
                    identity_component: pair(e.identity_component),
                })
                .collect(),
        );
    }
    let summary = vec![format!(
        "verdict {} (case {}, target {}, best gamma fit residual {:.6e})",
        out.verdict.name(),
        out.case.name(),
        out.target,
        out.gamma_fit_residual
    )];
    report.verdicts = Some(HochschildVerdictJson {
        spin: spin.to_string(),
        case: out.case.name(),
        target: out.target,
        verdict: out.verdict.name(),
        gamma_fit_residual: Num(out.gamma_fit_residual),
    });
    Ok(CommandOutput::from_report(&report, &summary, None, Vec::new()))
}

#[derive(Serialize)]
struct GrowthJson {
    n_max: usize,
    dim: usize,
    max_abs: Num,
    counts: Vec<usize>,
}

#[derive(Serialize)]
struct ResolventTables {
    spin: String,
    radii: Vec<Num>,
    rows: Vec<GrowthJson>,
}

#[derive(Serialize)]
struct ResolventVerdictJson {
    resolvent: &'static str,
}

pub fn cmd_resolvent(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let spin = cfg.spins[0];
    let growth = resolvent_growth(&bundle_config(cfg, spin, cfg.n_max), &cfg.windows, &cfg.radii)?;
    let mut report: Report<ResolventTables, ResolventVerdictJson> = Report::new(cfg);
    let mut summary: Vec<String> = growth
        .rows
        .iter()
        .map(|r| format!("n_max {:>2}: dim {:>4}, max|e| {:.6}, N(R) {:?}", r.n_max, r.dim, r.max_abs, r.counts))
        .collect();
    summary.push(format!("verdict {}", growth.verdict.name()));
    report.notes.push(
        "trend over finite truncations only; it does not prove or refute compactness of the resolvent".into(),
    );
    report.tables = Some(ResolventTables {
        spin: spin.to_string(),
        radii: growth.radii.iter().copied().map(Num).collect(),
        rows: growth
            .rows
            .iter()
            .map(|r| GrowthJson {
                n_max: r.n_max,
                dim: r.dim,
                max_abs: Num(r.max_abs),
                counts: r.counts.clone(),
            })
            .collect(),
    });
    report.verdicts = Some(ResolventVerdictJson {
        resolvent: growth.verdict.name(),
    });
    Ok(CommandOutput::from_report(&report, &summary, None, Vec::new()))
}
