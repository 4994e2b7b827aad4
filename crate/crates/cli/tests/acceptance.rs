//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use nct_spin::run;
use nct_spin_core::axioms::{check_first_order, check_jd_commute, check_torus_relation, check_zeroth_order, run_axiom_suite};
use nct_spin_core::classify::{counterexample_report, verdict_matrix};
use nct_spin_core::lattice::Site;
use nct_spin_core::opalg::{cis, I, ONE};
use nct_spin_core::spectra::{
    dirac_spectrum_blocks, hochschild_check, oracle_gap, resolvent_growth, HochschildCycle, ResolventVerdict,
};
use nct_spin_core::triple::{dirac_from_symbol, real_structure_from_phase, BundleConfig};
use nct_spin_core::{
    DiracParams, Error, LinearOp, PhaseAngle, RealStructureParams, SpectralTripleBundle, SpinStructure, C64,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn bundle(cfg: BundleConfig) -> Result<SpectralTripleBundle, String> {
    SpectralTripleBundle::new(cfg).map_err(|e| e.to_string())
}

fn with_spin(n_max: usize, spin: SpinStructure) -> BundleConfig {
    BundleConfig {
        n_max,
        spin,
        ..BundleConfig::default()
    }
}

fn bounded(n_max: usize) -> BundleConfig {
    BundleConfig {
        n_max,
        real: RealStructureParams::new(1.0, 0.7, 0.0),
        dirac: DiracParams::bounded(ONE),
        ..BundleConfig::default()
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn axiom_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for spin in SpinStructure::ALL {
        let report = e(run_axiom_suite(&bundle(with_spin(6, spin))?, 1e-12))?;
        for c in &report.checks {
            ensure(c.pass, format!("{spin}: {} = {:e}", c.name, c.residual))?;
        }
        worst = worst.max(report.max_residual());
    }

    // falsified inputs, each against the check it violates
    let base = bundle(with_spin(6, SpinStructure::default()))?;
    let lam = base.lambda();
    let map = base.map().clone();
    let mut falsified = Vec::new();

    let mut bad_v = LinearOp::zeros(map.dim());
    for (col, s) in map.sites().enumerate() {
        if let Some(row) = map.index_of(Site::new(s.s, s.m, s.n + 1)) {
            bad_v.set(row, col, lam.pow(map.mu(s.m)));
        }
    }
    falsified.push(("wrong-gauge pi(V)", e(check_torus_relation(&e(base.clone().with_pi_v(bad_v))?))?));

    let j = real_structure_from_phase(&map, |mu, nu| lam.pow(mu * nu));
    falsified.push(("J with lambda^(+mu nu)", e(check_zeroth_order(&e(base.clone().with_real_structure(j))?))?));

    let j = real_structure_from_phase(&map, |mu, nu| lam.pow(-mu * nu) * cis(0.3 * mu * mu));
    falsified.push(("J with extra quadratic phase", e(check_zeroth_order(&e(base.clone().with_real_structure(j))?))?));

    let d = dirac_from_symbol(&map, |mu, nu| mu + I * nu + 0.2);
    falsified.push(("D with constant 0.2", e(check_jd_commute(&e(base.clone().with_dirac(d))?))?));

    let d = dirac_from_symbol(&map, |mu, _| C64::from(mu * mu));
    falsified.push(("D with symbol mu^2", e(check_first_order(&e(base.clone().with_dirac(d))?))?));

    for (name, r) in &falsified {
        ensure(*r >= 1e-3, format!("falsified input {name} only reached {r:e}"))?;
    }
    let weakest = falsified.iter().map(|f| f.1).fold(f64::INFINITY, f64::min);
    Ok(format!("max residual {worst:.2e} over 4 spins; smallest falsified residual {weakest:.3}"))
}

fn spectrum_separation() -> Outcome {
    let mut kernels = Vec::new();
    let mut worst_gap: f64 = 0.0;
    for spin in SpinStructure::ALL {
        for n_max in 1..=6 {
            let b = bundle(with_spin(n_max, spin))?;
            worst_gap = worst_gap.max(e(oracle_gap(&b))?);
        }
        kernels.push(dirac_spectrum_blocks(&bundle(with_spin(6, spin))?).kernel_dim());
    }
    ensure(kernels == vec![2, 0, 0, 0], format!("kernel dims {kernels:?}"))?;
    ensure(worst_gap <= 1e-9, format!("oracle gap {worst_gap:e}"))?;
    let t00 = dirac_spectrum_blocks(&bundle(with_spin(6, SpinStructure::ALL[0]))?);
    let thh = dirac_spectrum_blocks(&bundle(with_spin(6, SpinStructure::ALL[3]))?);
    ensure(t00.window(-2.0, 2.0) != thh.window(-2.0, 2.0), "eigenvalues in [-2, 2] coincide")?;
    Ok(format!("kernel dims {kernels:?}; oracle gap {worst_gap:.2e} for n_max 1..6"))
}

fn hochschild_identity() -> Outcome {
    let out = e(hochschild_check(&bundle(BundleConfig::default())?, 1e-10))?;
    ensure(out.mask_depth == 4, format!("depth {}", out.mask_depth))?;
    ensure(out.residual <= 1e-10, format!("residual {:e}", out.residual))?;
    let degenerate = DiracParams::linear(ONE, ONE);
    ensure(
        HochschildCycle::canonical(&degenerate, PhaseAngle::golden()) == Err(Error::DegenerateTau),
        "degenerate tau accepted by the builder",
    )?;
    let cli = run(["nct-spin", "hochschild", "--tau1", "1", "--tau2", "1"]);
    ensure(cli.exit_code == 2, format!("cli exit {} for degenerate tau", cli.exit_code))?;
    Ok(format!("residual {:.2e} at depth 4; tau=(1,1) refused", out.residual))
}

fn spurious_exclusion() -> Outcome {
    let b = bundle(bounded(6))?;
    let first = e(check_first_order(&b))?;
    ensure(first <= 1e-12, format!("first order {first:e}"))?;
    let c0 = e(hochschild_check(&b, 1e-12))?;
    ensure(c0.target == "zero" && c0.residual <= 1e-12, format!("c0 image {:e}", c0.residual))?;

    let radii = [1.5];
    let bad = e(resolvent_growth(&bounded(6), &[4, 6, 8], &radii))?;
    for row in &bad.rows {
        ensure(row.max_abs <= 2.0, format!("max |e| {} at n_max {}", row.max_abs, row.n_max))?;
    }
    ensure(bad.verdict == ResolventVerdict::BoundedBad, format!("verdict {}", bad.verdict.name()))?;

    let good = e(resolvent_growth(&BundleConfig::default(), &[4, 6, 8], &radii))?;
    let counts: Vec<usize> = good.rows.iter().map(|r| r.counts[0]).collect();
    ensure(counts.windows(2).all(|w| w[0] == w[1]), format!("N(1.5) = {counts:?}"))?;
    ensure(good.verdict == ResolventVerdict::UnboundedOk, format!("verdict {}", good.verdict.name()))?;
    Ok(format!(
        "first order {first:.2e}, c0 image {:.2e}, BOUNDED_BAD vs UNBOUNDED_OK with N(1.5) = {}",
        c0.residual, counts[0]
    ))
}

fn inequivalence() -> Outcome {
    let all = e(verdict_matrix(PhaseAngle::golden(), 3))?;
    for (i, v) in all.iter().enumerate() {
        let diagonal = i / 4 == i % 4;
        ensure(v.equivalent == diagonal, format!("{} -> {}: {}", v.source, v.target, v.equivalent))?;
        if diagonal {
            let w = v.witness.as_ref().ok_or("missing witness")?;
            ensure(w.shift == (0, 0) && w.identity_distance < 1e-12, "witness is not the identity")?;
        }
    }
    let r = e(counterexample_report(5, PhaseAngle::golden(), 2))?;
    ensure(r.intertwining <= 1e-12, format!("intertwining {:e}", r.intertwining))?;
    ensure((r.grading_commutator - 2.0).abs() <= 1e-12, format!("grading {}", r.grading_commutator))?;
    Ok(format!(
        "identity verdict matrix; counterexample intertwining {:.2e}, grading commutator {}",
        r.intertwining, r.grading_commutator
    ))
}

fn lambda_robustness() -> Outcome {
    let dirs: Vec<tempfile::TempDir> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let turns = ["0", "0.25", "0.6180339887498949"];
    for (dir, t) in dirs.iter().zip(turns) {
        let out = run(["nct-spin", "spectrum", "--all-spins", "--lambda-turns", t, "--out", dir.path().to_str().unwrap()]);
        ensure(out.exit_code == 0, format!("spectrum at {t} turns: {}", out.stderr))?;
    }
    for tag in ["00", "0h", "h0", "hh"] {
        let name = format!("spectrum_{tag}.csv");
        let bytes: Vec<Vec<u8>> = dirs.iter().map(|d| std::fs::read(d.path().join(&name)).unwrap()).collect();
        ensure(bytes[0] == bytes[1] && bytes[1] == bytes[2], format!("{name} differs across lambda"))?;
    }
    for t in [0.0, 0.25, PhaseAngle::golden().turns()] {
        for spin in SpinStructure::ALL {
            let b = bundle(BundleConfig {
                lambda: PhaseAngle::new(t),
                ..with_spin(6, spin)
            })?;
            let report = e(run_axiom_suite(&b, 1e-12))?;
            ensure(report.all_pass(), format!("suite fails at {t} turns, spin {spin}"))?;
        }
    }
    let classical = bundle(BundleConfig {
        lambda: PhaseAngle::classical(),
        ..bounded(6)
    })?;
    let z = e(check_zeroth_order(&classical))?;
    ensure(z <= 1e-12, format!("classical commutant {z:e}"))?;
    Ok("CSV bytes identical over 3 angles; suite passes at all of them".into())
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 6] = [
        &["verify", "--all-spins"],
        &["spectrum", "--all-spins", "--n-max", "4"],
        &["classify", "--counterexample"],
        &["hochschild"],
        &["hochschild", "--phi", "1.0", "--psi", "0.7", "--tau0", "1", "--eps-const", "-1"],
        &["resolvent"],
    ];
    for args in commands {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let mut full = vec!["nct-spin"];
            full.extend_from_slice(args);
            full.extend_from_slice(&["--out", dir.path().to_str().unwrap()]);
            let out = run(full);
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|f| {
                    let f = f.unwrap();
                    (f.file_name().to_string_lossy().into_owned(), std::fs::read(f.path()).unwrap())
                })
                .collect();
            files.sort();
            outputs.push((out.exit_code, out.stdout, files));
        }
        ensure(outputs[0] == outputs[1], format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical across two runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("axiom suite", axiom_suite),
        ("spectrum separation", spectrum_separation),
        ("Hochschild identity", hochschild_identity),
        ("spurious-class exclusion", spurious_exclusion),
        ("inequivalence", inequivalence),
        ("lambda robustness", lambda_robustness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} [PRIMARY] {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [PRIMARY] {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
