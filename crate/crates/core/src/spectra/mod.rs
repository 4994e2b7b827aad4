//! Dirac spectra, compact-resolvent diagnostics and Hochschild evaluation.

mod hochschild;
mod jacobi;

pub use hochschild::{
    homogeneous_commutator_scan, hochschild_check, hochschild_check_at, hochschild_image, HochschildCycle,
    HochschildOutcome, HochschildTerm, HochschildVerdict, ScanEntry, HOCHSCHILD_DEPTH,
};
pub use jacobi::hermitian_eigenvalues as eigensolver_oracle;

use crate::lattice::{Grading, Site, SpinStructure};
use crate::triple::{BundleConfig, DiracParams, SpectralTripleBundle};
use crate::{Error, Result};

/// Eigenvalues closer than this are merged into one table row.
pub const DEDUP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

/// Sorted distinct eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub spin: SpinStructure,
    pub dirac: DiracParams,
    pub n_max: usize,
    pub dedup_tol: f64,
    entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    /// Groups `values` into clusters of width at most `dedup_tol`; each
    /// cluster is represented by its smallest member.
    pub fn from_eigenvalues(
        mut values: Vec<f64>,
        spin: SpinStructure,
        dirac: DiracParams,
        n_max: usize,
        dedup_tol: f64,
    ) -> Self {
        values.sort_by(f64::total_cmp);
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some(last) if v - last.eigenvalue <= dedup_tol => last.multiplicity += 1,
                _ => entries.push(SpectrumEntry {
                    // -0.0 and 0.0 must print identically
                    eigenvalue: if v == 0.0 { 0.0 } else { v },
                    multiplicity: 1,
                }),
            }
        }
        Self {
            spin,
            dirac,
            n_max,
            dedup_tol,
            entries,
        }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn kernel_dim(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.eigenvalue.abs() <= self.dedup_tol)
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.eigenvalue.abs()).fold(0.0, f64::max)
    }

    /// `N(R)`, the number of eigenvalues with `|e| ≤ R` counted with multiplicity.
    pub fn count_within(&self, radius: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| e.eigenvalue.abs() <= radius + self.dedup_tol)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Rows with `lo ≤ e ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> Vec<SpectrumEntry> {
        self.entries
            .iter()
            .filter(|e| e.eigenvalue >= lo - self.dedup_tol && e.eigenvalue <= hi + self.dedup_tol)
            .copied()
            .collect()
    }

    /// The first `k` distinct values of `|e|`, ascending.
    pub fn distinct_abs(&self, k: usize) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for e in &self.entries {
            let a = e.eigenvalue.abs();
            if !out.iter().any(|x| (x - a).abs() <= self.dedup_tol) {
                out.push(a);
            }
        }
        out.sort_by(f64::total_cmp);
        out.truncate(k);
        out
    }

    /// Every eigenvalue repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.eigenvalue, e.multiplicity))
            .collect()
    }

    /// `mult(e) = mult(-e)` for every row.
    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| {
            let (a, b) = (self.entries[i], self.entries[n - 1 - i]);
            a.multiplicity == b.multiplicity && (a.eigenvalue + b.eigenvalue).abs() <= self.dedup_tol
        })
    }

    /// CSV with header `eigenvalue,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eigenvalue,multiplicity\n");
        for e in &self.entries {
            out.push_str(&format!("{:.16e},{}\n", e.eigenvalue, e.multiplicity));
        }
        out
    }
}

/// Reads `±|d⁺|` off each site's 2×2 block of the bundle's Dirac operator.
pub fn dirac_spectrum_blocks(b: &SpectralTripleBundle) -> SpectrumTable {
    let map = b.map();
    let d = b.dirac();
    let mut values = Vec::with_capacity(map.dim());
    for site in map.sites().filter(|s| s.s == Grading::Plus) {
        let plus = map.index_of(site).expect("site from the map");
        let minus = map
            .index_of(Site::new(Grading::Minus, site.m, site.n))
            .expect("both blocks share the window");
        let a = d.get(minus, plus).norm();
        values.push(a);
        values.push(-a);
    }
    table_for(b, values)
}

/// Full dense diagonalization of the bundle's Dirac operator.
pub fn dirac_spectrum_oracle(b: &SpectralTripleBundle) -> Result<SpectrumTable> {
    Ok(table_for(b, eigensolver_oracle(b.dirac())?))
}

fn table_for(b: &SpectralTripleBundle, values: Vec<f64>) -> SpectrumTable {
    let cfg = b.config();
    SpectrumTable::from_eigenvalues(values, cfg.spin, cfg.dirac, cfg.n_max, DEDUP_TOLERANCE)
}

/// Largest elementwise gap between two sorted spectra of equal length.
pub fn max_elementwise_gap(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Oracle used only for cross-checks; kept separate from the block route.
pub fn oracle_gap(b: &SpectralTripleBundle) -> Result<f64> {
    let blocks = dirac_spectrum_blocks(b).expanded();
    let mut full = eigensolver_oracle(b.dirac())?;
    full.sort_by(f64::total_cmp);
    let mut sorted_blocks = blocks;
    sorted_blocks.sort_by(f64::total_cmp);
    max_elementwise_gap(&sorted_blocks, &full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventVerdict {
    /// Counting function is window-independent and the spectrum keeps growing.
    UnboundedOk,
    /// The spectrum stays in a bounded interval as the window grows.
    BoundedBad,
    /// Neither: counts inside some disc still change with the window.
    UnstableCount,
}

impl ResolventVerdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::UnboundedOk => "UNBOUNDED_OK",
            Self::BoundedBad => "BOUNDED_BAD",
            Self::UnstableCount => "UNSTABLE_COUNT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n_max: usize,
    pub dim: usize,
    pub counts: Vec<usize>,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventReport {
    pub radii: Vec<f64>,
    pub rows: Vec<GrowthRow>,
    pub verdict: ResolventVerdict,
}

/// `N(R)` for each radius.
pub fn counting_function(table: &SpectrumTable, radii: &[f64]) -> Vec<usize> {
    radii.iter().map(|&r| table.count_within(r)).collect()
}

/// Counting-function trend of `config` across the truncations `n_max_values`.
///
/// The spectrum counts as bounded when its largest `|e|` grows by less than a
/// quarter of the relative window growth.
pub fn resolvent_growth(
    config: &BundleConfig,
    n_max_values: &[usize],
    radii: &[f64],
) -> Result<ResolventReport> {
    if n_max_values.len() < 2 {
        return Err(Error::TooFewTruncations(n_max_values.len()));
    }
    let mut rows = Vec::with_capacity(n_max_values.len());
    for &n_max in n_max_values {
        let b = SpectralTripleBundle::new(BundleConfig { n_max, ..*config })?;
        let table = dirac_spectrum_blocks(&b);
        rows.push(GrowthRow {
            n_max,
            dim: table.dim(),
            counts: counting_function(&table, radii),
            max_abs: table.max_abs(),
        });
    }
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let window_ratio = last.n_max as f64 / first.n_max as f64;
    let growth = if first.max_abs > 0.0 {
        last.max_abs / first.max_abs
    } else if last.max_abs > 0.0 {
        f64::INFINITY
    } else {
        1.0
    };
    let stable = rows.iter().all(|r| r.counts == first.counts);
    let verdict = if growth <= 1.0 + 0.25 * (window_ratio - 1.0) {
        ResolventVerdict::BoundedBad
    } else if stable {
        ResolventVerdict::UnboundedOk
    } else {
        ResolventVerdict::UnstableCount
    };
    Ok(ResolventReport {
        radii: radii.to_vec(),
        rows,
        verdict,
    })
}
