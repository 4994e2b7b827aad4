//! Truncated lattice of the doubled eigenbasis `e_{μ,ν,±}`.
//!
//! Sites are `(μ, ν) = (m + ε₁, n + ε₂)` for integers `m, n ∈ [-n_max, n_max]`.
//! Flat indices are grading-major: every `+` vector precedes every `-`
//! vector, and within a block the order is lexicographic in `(m, n)`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Lattice offset of a spin structure, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Offset {
    Zero,
    Half,
}

impl Offset {
    /// Offset in half-units: 0 or 1.
    pub fn twice(self) -> i64 {
        match self {
            Offset::Zero => 0,
            Offset::Half => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.twice() as f64 * 0.5
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Offset::Zero => f.write_str("0"),
            Offset::Half => f.write_str("1/2"),
        }
    }
}

impl FromStr for Offset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" | "0.0" => Ok(Offset::Zero),
            "1/2" | "0.5" | ".5" | "½" | "h" => Ok(Offset::Half),
            other => Err(Error::InvalidOffset(other.to_string())),
        }
    }
}

/// One of the four spin structures `(ε₁, ε₂) ∈ {0, ½}²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinStructure {
    pub eps_mu: Offset,
    pub eps_nu: Offset,
}

impl SpinStructure {
    /// The four structures in the canonical order (0,0), (0,½), (½,0), (½,½).
    pub const ALL: [SpinStructure; 4] = [
        SpinStructure::new(Offset::Zero, Offset::Zero),
        SpinStructure::new(Offset::Zero, Offset::Half),
        SpinStructure::new(Offset::Half, Offset::Zero),
        SpinStructure::new(Offset::Half, Offset::Half),
    ];

    pub const fn new(eps_mu: Offset, eps_nu: Offset) -> Self {
        Self { eps_mu, eps_nu }
    }

    pub fn is_integer(self) -> bool {
        self.eps_mu == Offset::Zero && self.eps_nu == Offset::Zero
    }

    pub fn has_half(self) -> bool {
        !self.is_integer()
    }

    /// Short tag usable in file names: `00`, `0h`, `h0`, `hh`.
    pub fn tag(self) -> String {
        let t = |o: Offset| match o {
            Offset::Zero => '0',
            Offset::Half => 'h',
        };
        format!("{}{}", t(self.eps_mu), t(self.eps_nu))
    }
}

impl Default for SpinStructure {
    fn default() -> Self {
        SpinStructure::ALL[0]
    }
}

impl fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.eps_mu, self.eps_nu)
    }
}

impl FromStr for SpinStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidOffset(s.to_string()))?;
        Ok(SpinStructure::new(a.parse()?, b.parse()?))
    }
}

/// Square window of half-width `n_max` for one spin structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    n_max: usize,
    spin: SpinStructure,
}

impl Truncation {
    pub fn new(n_max: usize, spin: SpinStructure) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidTruncation(n_max));
        }
        Ok(Self { n_max, spin })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn spin(&self) -> SpinStructure {
        self.spin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    Plus,
    Minus,
}

impl Grading {
    pub fn sign(self) -> f64 {
        match self {
            Grading::Plus => 1.0,
            Grading::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Grading::Plus => Grading::Minus,
            Grading::Minus => Grading::Plus,
        }
    }
}

/// Integer coordinates of a basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub s: Grading,
    pub m: i64,
    pub n: i64,
}

impl Site {
    pub fn new(s: Grading, m: i64, n: i64) -> Self {
        Self { s, m, n }
    }
}

/// How integer coordinates are turned into derivation eigenvalues.
///
/// `Upper` is the native labelling `μ = m + ε`. `Lower` is the integer
/// relabelling `μ = m - ε` under which all four structures share the window
/// of the `(0,0)` structure and can be compared site by site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Upper,
    Lower,
}

/// Bijection between `(s, m, n)` and flat indices `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisIndexMap {
    trunc: Truncation,
    chart: Chart,
    width: usize,
}

pub fn build_basis(trunc: Truncation) -> BasisIndexMap {
    BasisIndexMap::with_chart(trunc, Chart::Upper)
}

impl BasisIndexMap {
    pub fn with_chart(trunc: Truncation, chart: Chart) -> Self {
        Self {
            width: 2 * trunc.n_max + 1,
            trunc,
            chart,
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn n_max(&self) -> usize {
        self.trunc.n_max
    }

    pub fn spin(&self) -> SpinStructure {
        self.trunc.spin
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn dim(&self) -> usize {
        2 * self.block_len()
    }

    /// Number of sites, i.e. the size of one grading block.
    pub fn block_len(&self) -> usize {
        self.width * self.width
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        let k = self.trunc.n_max as i64;
        m.abs() <= k && n.abs() <= k
    }

    pub fn index_of(&self, site: Site) -> Option<usize> {
        if !self.contains(site.m, site.n) {
            return None;
        }
        let k = self.trunc.n_max as i64;
        let block = match site.s {
            Grading::Plus => 0,
            Grading::Minus => self.block_len(),
        };
        Some(block + (site.m + k) as usize * self.width + (site.n + k) as usize)
    }

    /// Panics if `i >= dim`.
    pub fn site_of(&self, i: usize) -> Site {
        assert!(i < self.dim(), "index {i} out of range for dim {}", self.dim());
        let k = self.trunc.n_max as i64;
        let (s, r) = if i < self.block_len() {
            (Grading::Plus, i)
        } else {
            (Grading::Minus, i - self.block_len())
        };
        Site::new(s, (r / self.width) as i64 - k, (r % self.width) as i64 - k)
    }

    /// Offsets in half-units along (μ, ν), signed by the chart.
    pub fn twice_offsets(&self) -> (i64, i64) {
        let sign = match self.chart {
            Chart::Upper => 1,
            Chart::Lower => -1,
        };
        (
            sign * self.trunc.spin.eps_mu.twice(),
            sign * self.trunc.spin.eps_nu.twice(),
        )
    }

    /// Eigenvalue of the first derivation at integer coordinate `m`.
    pub fn mu(&self, m: i64) -> f64 {
        m as f64 + 0.5 * self.twice_offsets().0 as f64
    }

    /// Eigenvalue of the second derivation at integer coordinate `n`.
    pub fn nu(&self, n: i64) -> f64 {
        n as f64 + 0.5 * self.twice_offsets().1 as f64
    }

    /// Integer coordinates of the site carrying `(-μ, -ν)`.
    ///
    /// With a half-integer offset the window is not symmetric; the single
    /// row (or column) without a mirror partner is paired with itself so the
    /// reflection stays an involution on the window.
    pub fn mirror(&self, m: i64, n: i64) -> (i64, i64) {
        let (om, on) = self.twice_offsets();
        let k = self.trunc.n_max as i64;
        let reflect = |x: i64, o: i64| {
            let t = -x - o;
            if t.abs() <= k {
                t
            } else {
                x
            }
        };
        (reflect(m, om), reflect(n, on))
    }

    /// Whether `(m, n)` has a true mirror partner inside the window.
    pub fn has_exact_mirror(&self, m: i64, n: i64) -> bool {
        let (om, on) = self.twice_offsets();
        let (pm, pn) = self.mirror(m, n);
        pm == -m - om && pn == -n - on
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.dim()).map(|i| self.site_of(i))
    }
}

/// Flat indices whose `(m, n)` lie at least `depth` steps inside the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorMask {
    depth: usize,
    dim: usize,
    indices: Vec<usize>,
}

impl InteriorMask {
    /// Dimension of the space the mask lives in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

pub fn interior_mask(map: &BasisIndexMap, depth: usize) -> Result<InteriorMask> {
    let n_max = map.n_max();
    if depth > n_max {
        return Err(Error::EmptyInterior { depth, n_max });
    }
    let limit = (n_max - depth) as i64;
    let indices = (0..map.dim())
        .filter(|&i| {
            let site = map.site_of(i);
            site.m.abs() <= limit && site.n.abs() <= limit
        })
        .collect();
    Ok(InteriorMask {
        depth,
        dim: map.dim(),
        indices,
    })
}
