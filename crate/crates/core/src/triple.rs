//! Builders for the operators of an equivariant real spectral triple.
//!
//! All builders act identically on both grading blocks unless stated.
//! Shift operators drop amplitude that would leave the window (zero
//! columns on the edge); identities are checked on interior masks only.

use std::collections::BTreeMap;

use crate::lattice::{build_basis, BasisIndexMap, Grading, Site, SpinStructure, Truncation};
use crate::opalg::{
    anti_adjoint, cis, compose_anti_anti, compose_lin_anti, AntilinearOp, LinearOp, PhaseAngle,
    C64, I, ONE, ZERO,
};
use crate::{Error, Result};

/// Finite sum `Σ c·UᵖVᵠ`, `U` written to the left of `V`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TorusPolynomial {
    terms: BTreeMap<(i64, i64), C64>,
}

impl TorusPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, ONE)
    }

    pub fn monomial(p: i64, q: i64, coeff: C64) -> Self {
        Self::zero().with_term(p, q, coeff)
    }

    /// Adds `coeff·UᵖVᵠ`, merging with an existing term of the same key.
    pub fn with_term(mut self, p: i64, q: i64, coeff: C64) -> Self {
        *self.terms.entry((p, q)).or_insert(ZERO) += coeff;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, C64)> + '_ {
        self.terms.iter().map(|(&(p, q), &c)| (p, q, c))
    }

    /// Largest `|p| + |q|` over the terms; the maximal lattice displacement.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|&(p, q)| (p.unsigned_abs() + q.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }
}

/// Phases `(φ, ψ, θ)` of the real structure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RealStructureParams {
    pub phi: f64,
    pub psi: f64,
    pub theta: f64,
}

impl RealStructureParams {
    pub fn new(phi: f64, psi: f64, theta: f64) -> Self {
        Self { phi, psi, theta }
    }

    pub fn canonical() -> Self {
        Self::default()
    }
}

/// Solution family of the order-one condition, selected by which of `φ, ψ`
/// vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiracCase {
    /// `φ = ψ = 0`: `d⁺ = τ₁μ + τ₂ν + ε`.
    Canonical,
    /// `φ = 0, ψ ≠ 0`: `d⁺ = τ₁μ + τ₀e^{-2iψν} + ε`.
    MixedPsi,
    /// `φ ≠ 0, ψ = 0`: `d⁺ = τ₂ν + τ₀e^{-2iφμ} + ε`.
    MixedPhi,
    /// `φ, ψ ≠ 0`: `d⁺ = τ₀e^{-2iφμ-2iψν} + ε`.
    Spurious,
}

impl DiracCase {
    pub fn from_phases(rp: &RealStructureParams) -> Self {
        match (rp.phi == 0.0, rp.psi == 0.0) {
            (true, true) => DiracCase::Canonical,
            (true, false) => DiracCase::MixedPsi,
            (false, true) => DiracCase::MixedPhi,
            (false, false) => DiracCase::Spurious,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DiracCase::Canonical => "canonical",
            DiracCase::MixedPsi => "mixed_phi_zero",
            DiracCase::MixedPhi => "mixed_psi_zero",
            DiracCase::Spurious => "spurious",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParams {
    pub tau1: C64,
    pub tau2: C64,
    pub tau0: C64,
    pub eps_const: C64,
}

impl Default for DiracParams {
    fn default() -> Self {
        Self {
            tau1: ONE,
            tau2: I,
            tau0: ZERO,
            eps_const: ZERO,
        }
    }
}

impl DiracParams {
    pub fn linear(tau1: C64, tau2: C64) -> Self {
        Self {
            tau1,
            tau2,
            ..Self::default()
        }
    }

    /// The bounded family with `ε = -τ₀`.
    pub fn bounded(tau0: C64) -> Self {
        Self {
            tau0,
            eps_const: -tau0,
            ..Self::default()
        }
    }

    /// Checks the parameter constraints of `case` imposed by `JD = DJ`.
    pub fn validate(&self, case: DiracCase) -> Result<()> {
        match case {
            DiracCase::Canonical if self.eps_const != ZERO => Err(Error::InconsistentDirac(
                format!("eps_const must vanish when phi = psi = 0, got {}", self.eps_const),
            )),
            DiracCase::Canonical => Ok(()),
            _ => {
                let scale = self.tau0.norm().max(1.0);
                if (self.tau0 + self.eps_const).norm() > 1e-12 * scale {
                    Err(Error::InconsistentDirac(format!(
                        "tau0 = -eps_const required when phi or psi is nonzero, got tau0 = {}, eps_const = {}",
                        self.tau0, self.eps_const
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `d⁺_{μ,ν}` for the given case; no validation.
    pub fn symbol(&self, case: DiracCase, rp: &RealStructureParams, mu: f64, nu: f64) -> C64 {
        let (phi, psi) = (rp.phi, rp.psi);
        match case {
            DiracCase::Canonical => self.tau1 * mu + self.tau2 * nu + self.eps_const,
            DiracCase::MixedPsi => {
                self.tau1 * mu + self.tau0 * cis(-2.0 * psi * nu) + self.eps_const
            }
            DiracCase::MixedPhi => {
                self.tau2 * nu + self.tau0 * cis(-2.0 * phi * mu) + self.eps_const
            }
            DiracCase::Spurious => {
                self.tau0 * cis(-2.0 * phi * mu - 2.0 * psi * nu) + self.eps_const
            }
        }
    }

    /// `τ₁* τ₂ - τ₁ τ₂*`, the inverse Hochschild prefactor.
    pub fn orientation_factor(&self) -> C64 {
        self.tau1.conj() * self.tau2 - self.tau1 * self.tau2.conj()
    }
}

fn idx(map: &BasisIndexMap, s: Grading, m: i64, n: i64) -> Option<usize> {
    map.index_of(Site::new(s, m, n))
}

/// Builds a shift operator `e_{m,n,s} ↦ coeff(site)·e_{m+dm,n+dn,s}`.
fn shift_op(map: &BasisIndexMap, dm: i64, dn: i64, coeff: impl Fn(&Site) -> C64) -> LinearOp {
    let mut op = LinearOp::zeros(map.dim());
    for (col, site) in map.sites().enumerate() {
        if let Some(row) = idx(map, site.s, site.m + dm, site.n + dn) {
            op.set(row, col, coeff(&site));
        }
    }
    op
}

/// `π(U): e_{μ,ν,s} ↦ e_{μ+1,ν,s}`.
pub fn rep_u(map: &BasisIndexMap, _lambda: PhaseAngle) -> LinearOp {
    shift_op(map, 1, 0, |_| ONE)
}

/// `π(V): e_{μ,ν,s} ↦ λ^{-μ} e_{μ,ν+1,s}`.
pub fn rep_v(map: &BasisIndexMap, lambda: PhaseAngle) -> LinearOp {
    shift_op(map, 0, 1, |s| lambda.pow(-map.mu(s.m)))
}

/// `Σ c·π(U)ᵖπ(V)ᵠ`.
pub fn rep_poly(a: &TorusPolynomial, map: &BasisIndexMap, lambda: PhaseAngle) -> LinearOp {
    let u = rep_u(map, lambda);
    let v = rep_v(map, lambda);
    rep_poly_with(a, &u, &v)
}

pub(crate) fn rep_poly_with(a: &TorusPolynomial, u: &LinearOp, v: &LinearOp) -> LinearOp {
    let mut out = LinearOp::zeros(u.dim());
    for (p, q, c) in a.terms() {
        let term = &u.pow(p) * &v.pow(q);
        out = &out + &term.scale(c);
    }
    out
}

/// `(ρ(δ₁), ρ(δ₂))`: diagonal with entries `μ` and `ν`.
pub fn derivation_ops(map: &BasisIndexMap) -> (LinearOp, LinearOp) {
    let mu: Vec<C64> = map.sites().map(|s| C64::from(map.mu(s.m))).collect();
    let nu: Vec<C64> = map.sites().map(|s| C64::from(map.nu(s.n))).collect();
    (LinearOp::from_diag(&mu), LinearOp::from_diag(&nu))
}

/// `γ e_{μ,ν,±} = ±e_{μ,ν,±}`.
pub fn grading_op(map: &BasisIndexMap) -> LinearOp {
    let diag: Vec<C64> = map.sites().map(|s| C64::from(s.s.sign())).collect();
    LinearOp::from_diag(&diag)
}

/// Real structure with an arbitrary `+`-block phase function.
///
/// `J e_{μ,ν,+} = f(μ,ν) e_{-μ,-ν,-}` and
/// `J e_{μ,ν,-} = -f(-μ,-ν) e_{-μ,-ν,+}`, which gives `J² = -1` for any
/// unit-modulus `f`. Sites without a mirror partner in the window are sent
/// to their own label in the other block.
pub fn real_structure_from_phase(
    map: &BasisIndexMap,
    phase: impl Fn(f64, f64) -> C64,
) -> AntilinearOp {
    let mut m = LinearOp::zeros(map.dim());
    for (col, site) in map.sites().enumerate() {
        let (pm, pn) = map.mirror(site.m, site.n);
        let row = idx(map, site.s.flip(), pm, pn).expect("mirror stays in window");
        let value = match site.s {
            Grading::Plus => phase(map.mu(site.m), map.nu(site.n)),
            Grading::Minus => -phase(map.mu(pm), map.nu(pn)),
        };
        m.set(row, col, value);
    }
    AntilinearOp::from_matrix(m)
}

/// `J e_{μ,ν,±} = ±e^{±i(φμ+ψν)} e^{iθ} λ^{-μν} e_{-μ,-ν,∓}`.
pub fn real_structure_op(
    map: &BasisIndexMap,
    lambda: PhaseAngle,
    rp: &RealStructureParams,
) -> AntilinearOp {
    let rp = *rp;
    real_structure_from_phase(map, move |mu, nu| {
        cis(rp.phi * mu + rp.psi * nu + rp.theta) * lambda.pow(-mu * nu)
    })
}

/// Closed forms `U° e = λ^{-ν} e_{μ+1,ν}` and `V° e = e_{μ,ν+1}`.
pub fn opposite_ops(map: &BasisIndexMap, lambda: PhaseAngle) -> (LinearOp, LinearOp) {
    let u = shift_op(map, 1, 0, |s| lambda.pow(-map.nu(s.n)));
    let v = shift_op(map, 0, 1, |_| ONE);
    (u, v)
}

/// `b° = J b† J⁻¹`.
pub fn opposite_from_j(j: &AntilinearOp, b: &LinearOp) -> Result<LinearOp> {
    let j_inv = anti_adjoint(j);
    let inner = compose_lin_anti(&b.adjoint(), &j_inv)?;
    compose_anti_anti(j, &inner)
}

/// Diagonal unitary `W` with entries `e^{±i(φμ+ψν+θ)}` on the `±` blocks.
pub fn automorphism_witness(map: &BasisIndexMap, rp: &RealStructureParams) -> LinearOp {
    let diag: Vec<C64> = map
        .sites()
        .map(|s| {
            let angle = rp.phi * map.mu(s.m) + rp.psi * map.nu(s.n) + rp.theta;
            cis(s.s.sign() * angle)
        })
        .collect();
    LinearOp::from_diag(&diag)
}

/// Hermitian Dirac operator from its symbol:
/// `D e_{μ,ν,+} = d⁺ e_{μ,ν,-}`, `D e_{μ,ν,-} = conj(d⁺) e_{μ,ν,+}`.
pub fn dirac_from_symbol(map: &BasisIndexMap, symbol: impl Fn(f64, f64) -> C64) -> LinearOp {
    let mut op = LinearOp::zeros(map.dim());
    for site in map.sites().filter(|s| s.s == Grading::Plus) {
        let d = symbol(map.mu(site.m), map.nu(site.n));
        let plus = idx(map, Grading::Plus, site.m, site.n).unwrap();
        let minus = idx(map, Grading::Minus, site.m, site.n).unwrap();
        op.set(minus, plus, d);
        op.set(plus, minus, d.conj());
    }
    op
}

pub fn dirac_op(
    map: &BasisIndexMap,
    dp: &DiracParams,
    rp: &RealStructureParams,
) -> Result<LinearOp> {
    let case = DiracCase::from_phases(rp);
    dp.validate(case)?;
    Ok(dirac_from_symbol(map, |mu, nu| dp.symbol(case, rp, mu, nu)))
}

/// Inputs of a [`SpectralTripleBundle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundleConfig {
    pub n_max: usize,
    pub spin: SpinStructure,
    pub lambda: PhaseAngle,
    pub real: RealStructureParams,
    pub dirac: DiracParams,
}

impl Default for BundleConfig {
    fn default() -> Self {
        Self {
            n_max: 6,
            spin: SpinStructure::default(),
            lambda: PhaseAngle::golden(),
            real: RealStructureParams::canonical(),
            dirac: DiracParams::default(),
        }
    }
}

/// Every operator of one truncated spectral triple.
#[derive(Debug, Clone)]
pub struct SpectralTripleBundle {
    config: BundleConfig,
    case: DiracCase,
    map: BasisIndexMap,
    pi_u: LinearOp,
    pi_v: LinearOp,
    gamma: LinearOp,
    delta1: LinearOp,
    delta2: LinearOp,
    dirac: LinearOp,
    j: AntilinearOp,
}

impl SpectralTripleBundle {
    pub fn new(config: BundleConfig) -> Result<Self> {
        let map = build_basis(Truncation::new(config.n_max, config.spin)?);
        let case = DiracCase::from_phases(&config.real);
        let dirac = dirac_op(&map, &config.dirac, &config.real)?;
        let (delta1, delta2) = derivation_ops(&map);
        Ok(Self {
            case,
            pi_u: rep_u(&map, config.lambda),
            pi_v: rep_v(&map, config.lambda),
            gamma: grading_op(&map),
            delta1,
            delta2,
            dirac,
            j: real_structure_op(&map, config.lambda, &config.real),
            map,
            config,
        })
    }

    fn same_dim(&self, dim: usize) -> Result<()> {
        if dim == self.map.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.map.dim(),
                right: dim,
            })
        }
    }

    /// Replaces the Dirac operator, e.g. with one outside the solution family.
    pub fn with_dirac(mut self, dirac: LinearOp) -> Result<Self> {
        self.same_dim(dirac.dim())?;
        self.dirac = dirac;
        Ok(self)
    }

    pub fn with_real_structure(mut self, j: AntilinearOp) -> Result<Self> {
        self.same_dim(j.dim())?;
        self.j = j;
        Ok(self)
    }

    pub fn with_pi_v(mut self, pi_v: LinearOp) -> Result<Self> {
        self.same_dim(pi_v.dim())?;
        self.pi_v = pi_v;
        Ok(self)
    }

    pub fn config(&self) -> &BundleConfig {
        &self.config
    }

    pub fn case(&self) -> DiracCase {
        self.case
    }

    pub fn map(&self) -> &BasisIndexMap {
        &self.map
    }

    pub fn lambda(&self) -> PhaseAngle {
        self.config.lambda
    }

    pub fn pi_u(&self) -> &LinearOp {
        &self.pi_u
    }

    pub fn pi_v(&self) -> &LinearOp {
        &self.pi_v
    }

    pub fn gamma(&self) -> &LinearOp {
        &self.gamma
    }

    pub fn delta1(&self) -> &LinearOp {
        &self.delta1
    }

    pub fn delta2(&self) -> &LinearOp {
        &self.delta2
    }

    pub fn dirac(&self) -> &LinearOp {
        &self.dirac
    }

    pub fn j(&self) -> &AntilinearOp {
        &self.j
    }

    /// `π(a)` built from the bundle's own generators.
    pub fn rep(&self, a: &TorusPolynomial) -> LinearOp {
        rep_poly_with(a, &self.pi_u, &self.pi_v)
    }
}
