//! Orientation (Hochschild cycle) condition and the commutator scan behind
//! its failure for the non-canonical Dirac families.

use crate::axioms::reflection_margin;
use crate::lattice::{interior_mask, Grading};
use crate::opalg::{interior_residual, LinearOp, C64, ONE, ZERO};
use crate::triple::{opposite_from_j, DiracCase, DiracParams, SpectralTripleBundle, TorusPolynomial};
use crate::{Error, PhaseAngle, Result};

/// The cycle expression shifts by up to two steps along each axis.
pub const HOCHSCHILD_DEPTH: usize = 4;

/// One elementary tensor `a₀ ⊗ a₀° ⊗ a₁ ⊗ a₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct HochschildTerm {
    pub a0: TorusPolynomial,
    pub a0_opp: TorusPolynomial,
    pub a1: TorusPolynomial,
    pub a2: TorusPolynomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HochschildCycle {
    pub terms: Vec<HochschildTerm>,
}

fn gen_u() -> TorusPolynomial {
    TorusPolynomial::monomial(1, 0, ONE)
}

fn gen_v() -> TorusPolynomial {
    TorusPolynomial::monomial(0, 1, ONE)
}

impl HochschildCycle {
    /// The cycle whose image is `γ` when `φ = ψ = 0`:
    /// `k·V*U* ⊗ 1 ⊗ U ⊗ V - k·U*V* ⊗ 1 ⊗ V ⊗ U` with `k = 1/(τ₁*τ₂ - τ₁τ₂*)`.
    pub fn canonical(dirac: &DiracParams, lambda: PhaseAngle) -> Result<Self> {
        let det = dirac.orientation_factor();
        let scale = dirac.tau1.norm() * dirac.tau2.norm();
        if det.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateTau);
        }
        let k = ONE / det;
        // V⁻¹U⁻¹ = λ⁻¹ U⁻¹V⁻¹ in U-left normal order
        let vu_inv = TorusPolynomial::monomial(-1, -1, k * lambda.pow(-1.0));
        let uv_inv = TorusPolynomial::monomial(-1, -1, -k);
        Ok(Self {
            terms: vec![
                HochschildTerm {
                    a0: vu_inv,
                    a0_opp: TorusPolynomial::one(),
                    a1: gen_u(),
                    a2: gen_v(),
                },
                HochschildTerm {
                    a0: uv_inv,
                    a0_opp: TorusPolynomial::one(),
                    a1: gen_v(),
                    a2: gen_u(),
                },
            ],
        })
    }

    /// The nontrivial cycle `U*V* ⊗ V ⊗ U - V*U* ⊗ U ⊗ V`.
    pub fn nontrivial(lambda: PhaseAngle) -> Self {
        Self {
            terms: vec![
                HochschildTerm {
                    a0: TorusPolynomial::monomial(-1, -1, ONE),
                    a0_opp: TorusPolynomial::one(),
                    a1: gen_v(),
                    a2: gen_u(),
                },
                HochschildTerm {
                    a0: TorusPolynomial::monomial(-1, -1, -lambda.pow(-1.0)),
                    a0_opp: TorusPolynomial::one(),
                    a1: gen_u(),
                    a2: gen_v(),
                },
            ],
        }
    }
}

/// `Σ π(a₀)·(Jπ(a₀°)*J⁻¹)·[D,π(a₁)]·[D,π(a₂)]`.
pub fn hochschild_image(b: &SpectralTripleBundle, c: &HochschildCycle) -> Result<LinearOp> {
    let d = b.dirac();
    let mut acc = LinearOp::zeros(b.map().dim());
    for t in &c.terms {
        let opp = opposite_from_j(b.j(), &b.rep(&t.a0_opp))?;
        let c1 = d.commutator(&b.rep(&t.a1))?;
        let c2 = d.commutator(&b.rep(&t.a2))?;
        let term = &(&(&b.rep(&t.a0) * &opp) * &c1) * &c2;
        acc = acc.try_add(&term)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HochschildVerdict {
    Satisfied,
    CannotBeSatisfied,
    Failed,
}

impl HochschildVerdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Satisfied => "SATISFIED",
            Self::CannotBeSatisfied => "CANNOT_BE_SATISFIED",
            Self::Failed => "FAILED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HochschildOutcome {
    pub case: DiracCase,
    /// `"gamma"` for the canonical cycle, `"zero"` for the nontrivial one.
    pub target: &'static str,
    pub residual: f64,
    /// Distance from `γ` to the best scalar multiple of the image.
    pub gamma_fit_residual: f64,
    pub mask_depth: usize,
    pub tolerance: f64,
    pub verdict: HochschildVerdict,
}

/// Evaluates the orientation condition appropriate to the bundle's case.
///
/// Canonical case: residual of `π(c) - γ`. Otherwise: residual of `π(c₀)`
/// against zero, plus the best achievable distance to `γ` within its span.
pub fn hochschild_check(b: &SpectralTripleBundle, tolerance: f64) -> Result<HochschildOutcome> {
    hochschild_check_at(b, tolerance, HOCHSCHILD_DEPTH + reflection_margin(b))
}

/// [`hochschild_check`] with an explicit mask depth.
pub fn hochschild_check_at(
    b: &SpectralTripleBundle,
    tolerance: f64,
    depth: usize,
) -> Result<HochschildOutcome> {
    let mask = interior_mask(b.map(), depth)?;
    let canonical = b.case() == DiracCase::Canonical;
    let cycle = if canonical {
        HochschildCycle::canonical(&b.config().dirac, b.lambda())?
    } else {
        HochschildCycle::nontrivial(b.lambda())
    };
    let image = hochschild_image(b, &cycle)?;
    let gamma = b.gamma();

    let mut num = ZERO;
    let mut den = 0.0;
    for &col in mask.indices() {
        for row in 0..image.dim() {
            let x = image.get(row, col);
            num += x.conj() * gamma.get(row, col);
            den += x.norm_sqr();
        }
    }
    let alpha = if den > 0.0 { num / den } else { ZERO };
    let gamma_fit_residual = interior_residual(&image.scale(alpha).try_sub(gamma)?, &mask)?;

    let (target, residual, verdict) = if canonical {
        let r = interior_residual(&image.try_sub(gamma)?, &mask)?;
        let v = if r <= tolerance {
            HochschildVerdict::Satisfied
        } else {
            HochschildVerdict::Failed
        };
        ("gamma", r, v)
    } else {
        let r = interior_residual(&image, &mask)?;
        let v = if gamma_fit_residual > tolerance {
            HochschildVerdict::CannotBeSatisfied
        } else {
            HochschildVerdict::Failed
        };
        ("zero", r, v)
    };
    Ok(HochschildOutcome {
        case: b.case(),
        target,
        residual,
        gamma_fit_residual,
        mask_depth: depth,
        tolerance,
        verdict,
    })
}

/// Measured constants for one monomial triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub a0: (i64, i64),
    pub a1: (i64, i64),
    pub a2: (i64, i64),
    pub total_degree: (i64, i64),
    /// Coefficients of `Y`, `Y·Δ` and `Y·conj(Δ)` in the fit of
    /// `X = π(a₀)[D,π(a₁)][D,π(a₂)]` against `Y = π(a₀a₁a₂)`, where
    /// `Δ = e^{-2i(φμ+ψν)}` is the bounded part of the symbol.
    pub c: C64,
    pub c_prime: C64,
    pub c_dprime: C64,
    pub fit_residual: f64,
    /// Mean diagonal of `X` over the interior of the `+` block.
    pub identity_component: C64,
}

fn scan_triples() -> Vec<[(i64, i64); 3]> {
    let gens = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut out = vec![[(0, 0); 3]];
    for a1 in gens {
        for a2 in gens {
            out.push([(-a1.0 - a2.0, -a1.1 - a2.1), a1, a2]);
        }
    }
    out.push([(0, 0), (1, 0), (0, 1)]);
    out.push([(1, 0), (1, 0), (-1, 0)]);
    out.push([(0, 0), (0, 1), (0, 1)]);
    out
}

/// Checks that `π(a₀)[D,π(a₁)][D,π(a₂)]` on the `+` block is a combination of
/// `π(a₀)π(a₁)π(a₂)` and its products with `Δ`, for a fixed sample of
/// monomial triples.
pub fn homogeneous_commutator_scan(b: &SpectralTripleBundle) -> Result<Vec<ScanEntry>> {
    let map = b.map();
    let mask = interior_mask(map, HOCHSCHILD_DEPTH)?;
    let cols: Vec<usize> = mask
        .indices()
        .iter()
        .copied()
        .filter(|&i| map.site_of(i).s == Grading::Plus)
        .collect();
    if cols.is_empty() {
        return Err(Error::EmptyMask);
    }
    let rp = b.config().real;
    let delta: Vec<C64> = cols
        .iter()
        .map(|&i| {
            let s = map.site_of(i);
            crate::opalg::cis(-2.0 * (rp.phi * map.mu(s.m) + rp.psi * map.nu(s.n)))
        })
        .collect();
    let mut basis = vec![vec![ONE; cols.len()]];
    if b.case() != DiracCase::Canonical {
        basis.push(delta.clone());
        basis.push(delta.iter().map(|z| z.conj()).collect());
    }

    let d = b.dirac();
    let mut out = Vec::new();
    for [a0, a1, a2] in scan_triples() {
        let mono = |(p, q): (i64, i64)| b.rep(&TorusPolynomial::monomial(p, q, ONE));
        let (p0, p1, p2) = (mono(a0), mono(a1), mono(a2));
        let x = &(&p0 * &d.commutator(&p1)?) * &d.commutator(&p2)?;
        let y = &(&p0 * &p1) * &p2;

        let mut z = Vec::with_capacity(cols.len());
        let mut off = Vec::with_capacity(cols.len());
        let mut ynorm = Vec::with_capacity(cols.len());
        let mut diag = ZERO;
        for &col in &cols {
            let (xc, yc) = (x.column(col), y.column(col));
            let yy: f64 = yc.iter().map(|v| v.norm_sqr()).sum();
            let zx = if yy > 0.0 {
                yc.iter().zip(&xc).map(|(a, b)| a.conj() * b).sum::<C64>() / yy
            } else {
                ZERO
            };
            let rest: f64 = xc.iter().zip(&yc).map(|(a, b)| (a - zx * b).norm_sqr()).sum();
            z.push(zx);
            off.push(rest);
            ynorm.push(yy);
            diag += x.get(col, col);
        }
        let (coeffs, fitted) = least_squares(&basis, &z);
        let fit_residual = (0..cols.len())
            .map(|k| ((z[k] - fitted[k]).norm_sqr() * ynorm[k] + off[k]).sqrt())
            .fold(0.0, f64::max);
        out.push(ScanEntry {
            a0,
            a1,
            a2,
            total_degree: (a0.0 + a1.0 + a2.0, a0.1 + a1.1 + a2.1),
            c: coeffs[0],
            c_prime: coeffs.get(1).copied().unwrap_or(ZERO),
            c_dprime: coeffs.get(2).copied().unwrap_or(ZERO),
            fit_residual,
            identity_component: diag / cols.len() as f64,
        });
    }
    Ok(out)
}

/// Least-squares fit of `z` by the columns of `basis` using modified
/// Gram-Schmidt; numerically dependent columns get coefficient zero.
fn least_squares(basis: &[Vec<C64>], z: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let k = basis.len();
    let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>();
    let mut q: Vec<Vec<C64>> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    let mut r = vec![vec![ZERO; k]; k];
    for (j, col) in basis.iter().enumerate() {
        let mut v = col.clone();
        for (row, qi) in q.iter().enumerate() {
            let h = dot(qi, &v);
            r[row][j] = h;
            v.iter_mut().zip(qi).for_each(|(a, b)| *a -= h * b);
        }
        let norm = dot(&v, &v).re.sqrt();
        let scale = dot(col, col).re.sqrt();
        if norm <= 1e-10 * scale.max(1.0) {
            continue;
        }
        r[q.len()][j] = C64::from(norm);
        v.iter_mut().for_each(|a| *a /= norm);
        q.push(v);
        kept.push(j);
    }
    let proj: Vec<C64> = q.iter().map(|qi| dot(qi, z)).collect();
    let mut coeffs = vec![ZERO; k];
    for row in (0..kept.len()).rev() {
        let mut s = proj[row];
        for later in (row + 1)..kept.len() {
            s -= r[row][kept[later]] * coeffs[kept[later]];
        }
        coeffs[kept[row]] = s / r[row][kept[row]];
    }
    let fitted = (0..z.len())
        .map(|i| (0..k).map(|j| coeffs[j] * basis[j][i]).sum())
        .collect();
    (coeffs, fitted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SpinStructure;
    use crate::opalg::{cis, I};
    use crate::triple::{BundleConfig, RealStructureParams};

    fn canonical(n_max: usize, spin: SpinStructure, dirac: DiracParams) -> SpectralTripleBundle {
        SpectralTripleBundle::new(BundleConfig {
            n_max,
            spin,
            dirac,
            ..BundleConfig::default()
        })
        .unwrap()
    }

    fn spurious(n_max: usize) -> SpectralTripleBundle {
        SpectralTripleBundle::new(BundleConfig {
            n_max,
            real: RealStructureParams::new(1.0, 0.7, 0.0),
            dirac: DiracParams::bounded(ONE),
            ..BundleConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn canonical_cycle_prefactor() {
        let c = HochschildCycle::canonical(&DiracParams::default(), PhaseAngle::classical()).unwrap();
        let (_, _, k) = c.terms[0].a0.terms().next().unwrap();
        // 1 / (2i)
        assert!((k - C64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn canonical_image_is_grading() {
        let out = hochschild_check(&canonical(6, SpinStructure::default(), DiracParams::default()), 1e-10).unwrap();
        assert_eq!(out.target, "gamma");
        assert!(out.residual < 1e-12, "{}", out.residual);
        assert_eq!(out.mask_depth, 4);
        assert_eq!(out.verdict, HochschildVerdict::Satisfied);
    }

    #[test]
    fn canonical_image_other_tau_and_spins() {
        let dp = DiracParams::linear(C64::new(0.5, 0.3), C64::new(-1.2, 2.0));
        for spin in SpinStructure::ALL {
            let out = hochschild_check(&canonical(5, spin, dp), 1e-10).unwrap();
            assert!(out.residual < 1e-12, "{spin}: {}", out.residual);
        }
    }

    #[test]
    fn degenerate_tau_is_refused() {
        let dp = DiracParams::linear(ONE, ONE);
        assert_eq!(HochschildCycle::canonical(&dp, PhaseAngle::golden()), Err(Error::DegenerateTau));
        assert_eq!(hochschild_check(&canonical(6, SpinStructure::default(), dp), 1e-10), Err(Error::DegenerateTau));
    }

    #[test]
    fn nontrivial_cycle_vanishes_on_bounded_family() {
        let out = hochschild_check(&spurious(6), 1e-12).unwrap();
        assert_eq!(out.target, "zero");
        assert!(out.residual < 1e-12, "{}", out.residual);
        assert!(out.gamma_fit_residual > 0.5);
        assert_eq!(out.verdict, HochschildVerdict::CannotBeSatisfied);
    }

    #[test]
    fn constants_have_zero_commutators() {
        let scan = homogeneous_commutator_scan(&spurious(6)).unwrap();
        let e = &scan[0];
        assert_eq!((e.a0, e.a1, e.a2), ((0, 0), (0, 0), (0, 0)));
        assert_eq!(e.c, ZERO);
        assert_eq!(e.fit_residual, 0.0);
    }

    #[test]
    fn generator_pair_constant() {
        let b = spurious(6);
        let scan = homogeneous_commutator_scan(&b).unwrap();
        let e = scan.iter().find(|e| e.a1 == (1, 0) && e.a2 == (0, 1) && e.total_degree == (0, 0)).unwrap();
        let expected = (cis(-2.0) - ONE).norm() * (cis(-1.4) - ONE).norm();
        assert!((e.c.norm() - expected).abs() < 1e-12);
        assert!(e.fit_residual < 1e-12);
        // a₀a₁a₂ = U⁻¹V⁻¹UV = λ, so X is λC times the identity
        assert!((e.identity_component - e.c * b.lambda().value()).norm() < 1e-12);
    }

    #[test]
    fn every_sample_fits_and_shifted_ones_have_no_identity_part() {
        let mixed = SpectralTripleBundle::new(BundleConfig {
            n_max: 6,
            real: RealStructureParams::new(0.0, 0.7, 0.0),
            dirac: DiracParams {
                tau1: C64::new(0.8, 0.1),
                ..DiracParams::bounded(I)
            },
            ..BundleConfig::default()
        })
        .unwrap();
        for b in [spurious(6), mixed, canonical(6, SpinStructure::default(), DiracParams::default())] {
            for e in homogeneous_commutator_scan(&b).unwrap() {
                assert!(e.fit_residual < 1e-10, "{:?}", e);
                if e.total_degree != (0, 0) {
                    assert_eq!(e.identity_component, ZERO);
                }
            }
        }
    }

    #[test]
    fn least_squares_drops_dependent_columns() {
        let a = vec![ONE, ONE, ONE];
        let (c, fit) = least_squares(&[a.clone(), a], &[C64::from(2.0); 3]);
        assert!((c[0] - C64::from(2.0)).norm() < 1e-14 && c[1] == ZERO);
        assert!(fit.iter().all(|f| (f - C64::from(2.0)).norm() < 1e-14));
    }
}
