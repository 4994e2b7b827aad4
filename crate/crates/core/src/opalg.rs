//! Dense complex operators, linear and antilinear.
//!
//! An [`AntilinearOp`] is stored as a matrix `M` acting by `v ↦ M·conj(v)`.
//! Composition rules follow from that representation:
//!
//! | composition | kind       | matrix            |
//! |-------------|------------|-------------------|
//! | `A ∘ B`     | linear     | `A·B`             |
//! | `J ∘ A`     | antilinear | `J·conj(A)`       |
//! | `A ∘ J`     | antilinear | `A·J`             |
//! | `J ∘ K`     | linear     | `J·conj(K)`       |

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::lattice::InteriorMask;
use crate::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `exp(i·angle)`.
pub fn cis(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}

/// The deformation parameter `λ = exp(2πi·turns)`, stored by its angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAngle {
    turns: f64,
}

impl PhaseAngle {
    /// `turns` is reduced into `[0, 1)`.
    pub fn new(turns: f64) -> Self {
        Self {
            turns: turns.rem_euclid(1.0),
        }
    }

    /// Golden-ratio angle `(√5 − 1)/2`, the default generic choice.
    pub fn golden() -> Self {
        Self::new((5f64.sqrt() - 1.0) / 2.0)
    }

    /// `λ = 1`.
    pub fn classical() -> Self {
        Self::new(0.0)
    }

    pub fn turns(&self) -> f64 {
        self.turns
    }

    pub fn value(&self) -> C64 {
        cis(TAU * self.turns)
    }

    /// `λ^x` on the principal branch, `exp(2πi·turns·x)`.
    ///
    /// The exponent is reduced modulo one turn before the exponential so
    /// large `x` does not degrade the phase.
    pub fn pow(&self, x: f64) -> C64 {
        cis(TAU * (self.turns * x).rem_euclid(1.0))
    }

    /// Smallest denominator `q ≤ max_den` with `q·turns` an integer, if any.
    pub fn rational_denominator(&self, max_den: u64) -> Option<u64> {
        (1..=max_den).find(|&q| {
            let x = self.turns * q as f64;
            (x - x.round()).abs() < 1e-9 * q as f64
        })
    }
}

impl Default for PhaseAngle {
    fn default() -> Self {
        Self::golden()
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    dim: usize,
    data: Vec<C64>,
}

impl LinearOp {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![ONE; dim])
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut op = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * op.dim + i] = d;
        }
        op
    }

    /// Row-major entries; rejects NaN/Inf.
    pub fn from_rows(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        debug_assert!(value.re.is_finite() && value.im.is_finite());
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn column_norm(&self, col: usize) -> f64 {
        (0..self.dim)
            .map(|r| self.get(r, col).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entry modulus of `self - self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other,
            })
        }
    }

    // Every operator in this crate is a phase-weighted partial permutation
    // or a short sum of them, so skipping zero entries of the left factor
    // makes products close to O(dim²).
    fn matmul(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == ZERO {
                    continue;
                }
                for (o, bkj) in row.iter_mut().zip(&b[k * n..(k + 1) * n]) {
                    *o += aik * bkj;
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_dim(other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        compose_lin_lin(self, other)?.try_sub(&compose_lin_lin(other, self)?)
    }

    /// Integer power; negative exponents use the adjoint (the shift
    /// operators here are unitary away from the window edge).
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.adjoint() } else { self.clone() };
        let mut acc = Self::identity(self.dim);
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl Mul for &LinearOp {
    type Output = LinearOp;

    /// Panics on dimension mismatch; use [`compose_lin_lin`] for a checked
    /// product.
    fn mul(self, rhs: &LinearOp) -> LinearOp {
        compose_lin_lin(self, rhs).expect("dimension mismatch")
    }
}

impl Add for &LinearOp {
    type Output = LinearOp;

    fn add(self, rhs: &LinearOp) -> LinearOp {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl Sub for &LinearOp {
    type Output = LinearOp;

    fn sub(self, rhs: &LinearOp) -> LinearOp {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

/// Antilinear operator `v ↦ m·conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    m: LinearOp,
}

impl AntilinearOp {
    pub fn from_matrix(m: LinearOp) -> Self {
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(LinearOp::zeros(dim))
    }

    /// Plain complex conjugation.
    pub fn conjugation(dim: usize) -> Self {
        Self::from_matrix(LinearOp::identity(dim))
    }

    pub fn matrix(&self) -> &LinearOp {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let conj: Vec<C64> = v.iter().map(|z| z.conj()).collect();
        self.m.apply(&conj)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_matrix(self.m.try_add(&other.m)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_matrix(self.m.try_sub(&other.m)?))
    }
}

pub fn compose_lin_lin(a: &LinearOp, b: &LinearOp) -> Result<LinearOp> {
    a.check_dim(b.dim)?;
    Ok(LinearOp {
        dim: a.dim,
        data: LinearOp::matmul(&a.data, &b.data, a.dim),
    })
}

/// `j ∘ a`.
pub fn compose_anti_lin(j: &AntilinearOp, a: &LinearOp) -> Result<AntilinearOp> {
    Ok(AntilinearOp::from_matrix(compose_lin_lin(&j.m, &a.conj())?))
}

/// `a ∘ j`.
pub fn compose_lin_anti(a: &LinearOp, j: &AntilinearOp) -> Result<AntilinearOp> {
    Ok(AntilinearOp::from_matrix(compose_lin_lin(a, &j.m)?))
}

/// `j ∘ k`, which is linear.
pub fn compose_anti_anti(j: &AntilinearOp, k: &AntilinearOp) -> Result<LinearOp> {
    compose_lin_lin(&j.m, &k.m.conj())
}

pub fn adjoint(a: &LinearOp) -> LinearOp {
    a.adjoint()
}

/// Adjoint of an antilinear map, defined by `⟨j†u, v⟩ = ⟨j v, u⟩`.
///
/// With `j v = M conj(v)` this is the antilinear map with matrix `Mᵀ`, so a
/// unitary antilinear `j` satisfies `j† ∘ j = 1`.
pub fn anti_adjoint(j: &AntilinearOp) -> AntilinearOp {
    AntilinearOp::from_matrix(j.m.transpose())
}

/// Operators whose residual is measured column by column.
pub trait ColumnNorms {
    fn dim(&self) -> usize;
    fn column_norm(&self, col: usize) -> f64;
}

impl ColumnNorms for LinearOp {
    fn dim(&self) -> usize {
        self.dim
    }

    fn column_norm(&self, col: usize) -> f64 {
        LinearOp::column_norm(self, col)
    }
}

impl ColumnNorms for AntilinearOp {
    fn dim(&self) -> usize {
        self.m.dim
    }

    // conj(e_x) = e_x, so the image of a basis vector is the matrix column.
    fn column_norm(&self, col: usize) -> f64 {
        self.m.column_norm(col)
    }
}

/// `max_{x ∈ mask} ‖a e_x‖₂`.
pub fn interior_residual<T: ColumnNorms + ?Sized>(a: &T, mask: &InteriorMask) -> Result<f64> {
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    if mask.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: mask.dim(),
        });
    }
    Ok(mask
        .indices()
        .iter()
        .map(|&x| a.column_norm(x))
        .fold(0.0, f64::max))
}
