//! Unitary (in)equivalence of the four real structures.
//!
//! All structures are compared on the common integer window obtained by the
//! relabelling `μ = m - ε_μ`, `ν = n - ε_ν`, where the real structure reads
//! `J e_{m,n,±} = ±λ^{-(m-ε_μ)(n-ε_ν)} e_{-m+2ε_μ,-n+2ε_ν,∓}`.

use crate::lattice::{interior_mask, BasisIndexMap, Chart, Grading, Offset, Site, SpinStructure, Truncation};
use crate::opalg::{
    compose_anti_lin, compose_lin_anti, interior_residual, AntilinearOp, LinearOp, PhaseAngle, C64,
    I, ONE,
};
use crate::triple::{grading_op, real_structure_op, rep_u, rep_v, RealStructureParams};
use crate::{Error, Result};

/// Ratios closer than this to their reference value count as constant.
pub const CONSTANCY_TOLERANCE: f64 = 1e-10;

/// Largest denominator checked when testing the angle for rationality.
const RATIONAL_SEARCH: u64 = 1000;

/// `J₊` phase of `spin` at integer coordinates `(m, n)` of the aligned window.
pub fn aligned_phase(spin: SpinStructure, lambda: PhaseAngle, m: i64, n: i64) -> C64 {
    let mu = m as f64 - spin.eps_mu.as_f64();
    let nu = n as f64 - spin.eps_nu.as_f64();
    lambda.pow(-mu * nu)
}

/// Warning text when `λ` is a root of unity of small order.
pub fn rational_angle_warning(lambda: PhaseAngle) -> Option<String> {
    lambda
        .rational_denominator(RATIONAL_SEARCH)
        .map(|q| format!("rational angle: λ not generic (λ^{q} = 1)"))
}

fn aligned_map(n_max: usize, spin: SpinStructure) -> Result<BasisIndexMap> {
    Ok(BasisIndexMap::with_chart(Truncation::new(n_max, spin)?, Chart::Lower))
}

fn aligned_j(n_max: usize, spin: SpinStructure, lambda: PhaseAngle) -> Result<AntilinearOp> {
    Ok(real_structure_op(&aligned_map(n_max, spin)?, lambda, &RealStructureParams::canonical()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwinerProblem {
    pub source: SpinStructure,
    pub target: SpinStructure,
    pub lambda: PhaseAngle,
    /// Coefficient labels `(k, l)` range over `[-K, K]²`.
    pub k_window: usize,
    /// Constraint samples `(m, n)` range over `[-r, r]²`.
    pub sample_radius: usize,
}

impl IntertwinerProblem {
    pub fn new(source: SpinStructure, target: SpinStructure, lambda: PhaseAngle) -> Self {
        Self {
            source,
            target,
            lambda,
            k_window: 3,
            sample_radius: 2,
        }
    }

    /// Half-width of the window on which candidate intertwiners are built.
    pub fn verification_n_max(&self) -> usize {
        self.k_window + self.sample_radius + 2
    }

    /// Interior depth used for candidate residuals.
    pub fn verification_depth(&self) -> usize {
        self.k_window + 2
    }

    fn validate(&self) -> Result<()> {
        if self.k_window == 0 {
            return Err(Error::InvalidTruncation(0));
        }
        if self.sample_radius == 0 {
            return Err(Error::EmptySampleWindow);
        }
        Ok(())
    }

    /// The reverse problem, target to source.
    pub fn swapped(&self) -> Self {
        Self {
            source: self.target,
            target: self.source,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleShiftSet {
    /// Shifts whose consistency ratio is constant over the sample.
    pub shifts: Vec<(i64, i64)>,
    /// `max |r(m,n) - r(0,0)|` for every scanned shift, in scan order.
    pub deviations: Vec<((i64, i64), f64)>,
    pub warning: Option<String>,
}

impl AdmissibleShiftSet {
    pub fn deviation(&self, k: i64, l: i64) -> Option<f64> {
        self.deviations.iter().find(|(s, _)| *s == (k, l)).map(|(_, d)| *d)
    }
}

/// Scans `(k, l)` for an `(m, n)`-independent ratio
/// `r(m,n) = j_target(m,n)·λ^{2nk} / j_source(m+k, n+l)`.
pub fn admissible_shifts(problem: &IntertwinerProblem) -> Result<AdmissibleShiftSet> {
    problem.validate()?;
    let (kw, r) = (problem.k_window as i64, problem.sample_radius as i64);
    let lambda = problem.lambda;
    let ratio = |k: i64, l: i64, m: i64, n: i64| {
        aligned_phase(problem.target, lambda, m, n) * lambda.pow(2.0 * (n * k) as f64)
            / aligned_phase(problem.source, lambda, m + k, n + l)
    };
    let mut shifts = Vec::new();
    let mut deviations = Vec::new();
    for k in -kw..=kw {
        for l in -kw..=kw {
            let reference = ratio(k, l, 0, 0);
            let mut dev: f64 = 0.0;
            for m in -r..=r {
                for n in -r..=r {
                    dev = dev.max((ratio(k, l, m, n) - reference).norm());
                }
            }
            if dev < CONSTANCY_TOLERANCE {
                shifts.push((k, l));
            }
            deviations.push(((k, l), dev));
        }
    }
    Ok(AdmissibleShiftSet {
        shifts,
        deviations,
        warning: rational_angle_warning(lambda),
    })
}

/// Algebra-compatible candidate
/// `W e_{m,n,±} = w± λ^{-nk} e_{m+k,n+l,±}` on the aligned window.
pub fn shift_candidate(map: &BasisIndexMap, lambda: PhaseAngle, k: i64, l: i64, w_minus: C64) -> LinearOp {
    let mut w = LinearOp::zeros(map.dim());
    for (col, site) in map.sites().enumerate() {
        let target = Site::new(site.s, site.m + k, site.n + l);
        if let Some(row) = map.index_of(target) {
            let w_s = match site.s {
                Grading::Plus => ONE,
                Grading::Minus => w_minus,
            };
            w.set(row, col, w_s * lambda.pow(-(site.n * k) as f64));
        }
    }
    w
}

/// Matrix-verified intertwiner `W` with `W J_source W* = J_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerWitness {
    pub shift: (i64, i64),
    pub w_minus: C64,
    /// `‖W J_s W* - J_t‖` on the interior.
    pub residual: f64,
    pub unitarity: f64,
    /// `‖W - 1‖` on the interior.
    pub identity_distance: f64,
    pub matrix: LinearOp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerVerdict {
    pub source: SpinStructure,
    pub target: SpinStructure,
    pub equivalent: bool,
    pub admissible: AdmissibleShiftSet,
    /// The first candidate that passed, if any.
    pub witness: Option<IntertwinerWitness>,
    /// Smallest intertwining residual over all tried candidates.
    pub best_residual: Option<f64>,
}

/// Decides whether a unitary commuting with `γ` and the algebra carries
/// the source real structure to the target one.
pub fn intertwiner_verdict(problem: &IntertwinerProblem) -> Result<IntertwinerVerdict> {
    let admissible = admissible_shifts(problem)?;
    let n_max = problem.verification_n_max();
    let map = aligned_map(n_max, problem.source)?;
    let j_s = aligned_j(n_max, problem.source, problem.lambda)?;
    let j_t = aligned_j(n_max, problem.target, problem.lambda)?;
    let mask = interior_mask(&map, problem.verification_depth())?;
    let identity = LinearOp::identity(map.dim());

    let mut best: Option<f64> = None;
    let mut witness = None;
    'search: for &(k, l) in &admissible.shifts {
        for w_minus in [ONE, -ONE, I, -I] {
            let w = shift_candidate(&map, problem.lambda, k, l, w_minus);
            let conj = compose_lin_anti(&w, &compose_anti_lin(&j_s, &w.adjoint())?)?;
            let residual = interior_residual(&conj.try_sub(&j_t)?, &mask)?;
            best = Some(best.map_or(residual, |b: f64| b.min(residual)));
            let unitarity = interior_residual(&(&w.adjoint() * &w).try_sub(&identity)?, &mask)?;
            if residual <= CONSTANCY_TOLERANCE && unitarity <= CONSTANCY_TOLERANCE {
                witness = Some(IntertwinerWitness {
                    shift: (k, l),
                    w_minus,
                    residual,
                    unitarity,
                    identity_distance: interior_residual(&w.try_sub(&identity)?, &mask)?,
                    matrix: w,
                });
                break 'search;
            }
        }
    }
    Ok(IntertwinerVerdict {
        source: problem.source,
        target: problem.target,
        equivalent: witness.is_some(),
        admissible,
        witness,
        best_residual: best,
    })
}

/// Verdicts for all 16 ordered pairs, row-major in [`SpinStructure::ALL`] order.
pub fn verdict_matrix(lambda: PhaseAngle, k_window: usize) -> Result<Vec<IntertwinerVerdict>> {
    let mut out = Vec::with_capacity(16);
    for source in SpinStructure::ALL {
        for target in SpinStructure::ALL {
            let problem = IntertwinerProblem {
                k_window,
                ..IntertwinerProblem::new(source, target, lambda)
            };
            out.push(intertwiner_verdict(&problem)?);
        }
    }
    Ok(out)
}

/// The explicit unitary carrying `J₀₀` to `J₀½` when `γ` and the algebra are
/// not required to be preserved:
/// `W e_{m,n,+} = iλ^{m/2} e_{m,n-1,-}`, `W e_{m,n,-} = i e_{m,n,+}`.
///
/// The global factor `i` adapts the displayed map to the sign convention
/// `J e_- = -(…) e_+` used throughout.
pub fn counterexample_unconstrained_w(map: &BasisIndexMap, lambda: PhaseAngle) -> LinearOp {
    let mut w = LinearOp::zeros(map.dim());
    for (col, site) in map.sites().enumerate() {
        let (target, coeff) = match site.s {
            Grading::Plus => (
                Site::new(Grading::Minus, site.m, site.n - 1),
                lambda.pow(0.5 * site.m as f64),
            ),
            Grading::Minus => (Site::new(Grading::Plus, site.m, site.n), ONE),
        };
        if let Some(row) = map.index_of(target) {
            w.set(row, col, I * coeff);
        }
    }
    w
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub n_max: usize,
    pub mask_depth: usize,
    /// `‖W* J₀₀ W - J₀½‖`.
    pub intertwining: f64,
    /// `‖Wγ + γW‖`.
    pub grading_anticommutator: f64,
    /// `‖Wγ - γW‖`, the violated grading condition.
    pub grading_commutator: f64,
    pub commutator_u: f64,
    pub commutator_v: f64,
    pub unitarity: f64,
}

/// Builds the counterexample on the aligned `(0,0)` window and measures
/// which conditions it meets.
pub fn counterexample_report(n_max: usize, lambda: PhaseAngle, depth: usize) -> Result<CounterexampleReport> {
    let zero = SpinStructure::new(Offset::Zero, Offset::Zero);
    let target = SpinStructure::new(Offset::Zero, Offset::Half);
    let map = aligned_map(n_max, zero)?;
    let mask = interior_mask(&map, depth)?;
    let w = counterexample_unconstrained_w(&map, lambda);
    let w_adj = w.adjoint();
    let j00 = aligned_j(n_max, zero, lambda)?;
    let j0h = aligned_j(n_max, target, lambda)?;
    let pulled = compose_lin_anti(&w_adj, &compose_anti_lin(&j00, &w)?)?;
    let gamma = grading_op(&map);
    let (wg, gw) = (&w * &gamma, &gamma * &w);
    Ok(CounterexampleReport {
        n_max,
        mask_depth: depth,
        intertwining: interior_residual(&pulled.try_sub(&j0h)?, &mask)?,
        grading_anticommutator: interior_residual(&(&wg + &gw), &mask)?,
        grading_commutator: interior_residual(&(&wg - &gw), &mask)?,
        commutator_u: interior_residual(&w.commutator(&rep_u(&map, lambda))?, &mask)?,
        commutator_v: interior_residual(&w.commutator(&rep_v(&map, lambda))?, &mask)?,
        unitarity: interior_residual(&(&w_adj * &w).try_sub(&LinearOp::identity(map.dim()))?, &mask)?,
    })
}
