//! Parameter sweeps that run the closed forms and the lattice pipeline side
//! by side over a grid and collect disagreements. Cells are evaluated in
//! parallel and returned in input order, so output does not depend on the
//! thread count.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle_bundle::{
    blowup_bundle, hirzebruch_bundle, wang_ziller, BlowupBundle, BundleError, HirzebruchBundle,
    WangZiller,
};

pub const DEFAULT_CELL_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("grid has {cells} cells, above the cap of {cap}")]
    GridTooLarge { cells: u64, cap: u64 },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

impl SweepError {
    pub fn kind(&self) -> &'static str {
        match self {
            SweepError::GridTooLarge { .. } => "GridTooLarge",
            SweepError::Bundle(e) => e.kind(),
        }
    }
}

/// Inclusive range; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub lo: i64,
    pub hi: i64,
}

impl Range {
    pub fn new(lo: i64, hi: i64) -> Self {
        Range { lo, hi }
    }

    pub fn len(&self) -> u64 {
        if self.hi < self.lo {
            0
        } else {
            (i128::from(self.hi) - i128::from(self.lo) + 1).min(i128::from(u64::MAX)) as u64
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::str::FromStr for Range {
    type Err = String;

    /// `lo..hi` (inclusive) or a single value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("{t:?} is not an integer"))
        };
        match s.split_once("..") {
            Some((lo, hi)) => Ok(Range::new(num(lo)?, num(hi.trim_start_matches('='))?)),
            None => {
                let v = num(s)?;
                Ok(Range::new(v, v))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GridSpec {
    /// Coprime `(l₁, l₂)` with `n ≥ 0`.
    Hirzebruch { l1: Range, l2: Range, n: Range },
    /// `p₁, p₂ ∈ p` and coprime `k₁, k₂ ∈ k`.
    WangZiller { p: Range, k: Range },
    /// Only cells with `2l₂ + n > k` are evaluated.
    Blowup { n: Range, k: Range, l2: Range },
}

impl GridSpec {
    /// Cells before filtering, used for the size cap.
    pub fn raw_cells(&self) -> u64 {
        match self {
            GridSpec::Hirzebruch { l1, l2, n } => product(&[l1, l2, n]),
            GridSpec::WangZiller { p, k } => product(&[p, p, k, k]),
            GridSpec::Blowup { n, k, l2 } => product(&[n, k, l2]),
        }
    }
}

fn product(ranges: &[&Range]) -> u64 {
    ranges.iter().fold(1u64, |acc, r| acc.saturating_mul(r.len()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepTable<T> {
    pub cells: Vec<T>,
    /// Every closed-form/lattice pair agreed.
    pub agreed: bool,
    pub failures: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SweepReport {
    Hirzebruch(SweepTable<HirzebruchBundle>),
    WangZiller(SweepTable<WangZiller>),
    Blowup(SweepTable<BlowupBundle>),
}

impl SweepReport {
    pub fn agreed(&self) -> bool {
        match self {
            SweepReport::Hirzebruch(t) => t.agreed,
            SweepReport::WangZiller(t) => t.agreed,
            SweepReport::Blowup(t) => t.agreed,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SweepReport::Hirzebruch(t) => t.cells.len(),
            SweepReport::WangZiller(t) => t.cells.len(),
            SweepReport::Blowup(t) => t.cells.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn table<I, T, F, A>(inputs: Vec<I>, eval: F, agrees: A) -> Result<SweepTable<T>, SweepError>
where
    I: Send + Sync,
    T: Send + Clone,
    F: Fn(&I) -> Result<T, BundleError> + Sync + Send,
    A: Fn(&T) -> bool,
{
    let cells = inputs
        .par_iter()
        .map(eval)
        .collect::<Result<Vec<T>, BundleError>>()?;
    let failures: Vec<T> = cells.iter().filter(|c| !agrees(c)).cloned().collect();
    Ok(SweepTable {
        agreed: failures.is_empty(),
        cells,
        failures,
    })
}

fn to_u32(x: i64) -> Result<u32, SweepError> {
    u32::try_from(x)
        .map_err(|_| BundleError::BadParameter(format!("{x} is out of range")).into())
}

pub fn sweep(grid: &GridSpec, cap: u64) -> Result<SweepReport, SweepError> {
    let cells = grid.raw_cells();
    if cells > cap {
        return Err(SweepError::GridTooLarge { cells, cap });
    }
    match grid {
        GridSpec::Hirzebruch { l1, l2, n } => {
            let mut inputs = Vec::new();
            for a in l1.iter() {
                for b in l2.iter() {
                    if a.gcd(&b) != 1 {
                        continue;
                    }
                    for m in n.iter() {
                        inputs.push((a, b, to_u32(m)?));
                    }
                }
            }
            let t = table(inputs, |&(a, b, m)| hirzebruch_bundle(a, b, m), |c| c.agree)?;
            Ok(SweepReport::Hirzebruch(t))
        }
        GridSpec::WangZiller { p, k } => {
            let mut inputs = Vec::new();
            for p1 in p.iter() {
                for p2 in p.iter() {
                    for k1 in k.iter() {
                        for k2 in k.iter() {
                            if k1 < 1 || k2 < 1 || k1.gcd(&k2) != 1 {
                                continue;
                            }
                            inputs.push((to_u32(p1)?, to_u32(p2)?, k1 as u64, k2 as u64));
                        }
                    }
                }
            }
            let t = table(
                inputs,
                |&(p1, p2, k1, k2)| wang_ziller(p1, p2, k1, k2),
                |c| c.agree,
            )?;
            Ok(SweepReport::WangZiller(t))
        }
        GridSpec::Blowup { n, k, l2 } => {
            let mut inputs = Vec::new();
            for a in n.iter() {
                for b in k.iter() {
                    for c in l2.iter() {
                        if c >= 1 && b >= 0 && 2 * c + a > b {
                            inputs.push((to_u32(a)?, b as usize, c));
                        }
                    }
                }
            }
            let t = table(inputs, |&(a, b, c)| blowup_bundle(a, b, c), |c| c.agree)?;
            Ok(SweepReport::Blowup(t))
        }
    }
}
