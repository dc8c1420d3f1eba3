//! Exhaustive analysis of read-out sets.
//!
//! The trace row is always part of the design here: without it the 18
//! read-outs together only reach rank 15, since adding a multiple of the
//! identity to ρ leaves every off-diagonal element unchanged.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::analysis::normal_system;
use crate::error::{Error, Result};
use crate::linalg::{matrix_rank, sym_eigen, RANK_TOL};
use crate::model::{assemble_design, ReadoutId, NUM_PARAMS, NUM_READOUTS};

/// A set of distinct read-outs, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReadoutSet(Vec<ReadoutId>);

impl ReadoutSet {
    pub fn new(ids: impl IntoIterator<Item = ReadoutId>) -> Result<Self> {
        let mut v: Vec<ReadoutId> = ids.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateReadout(w[0].get()));
        }
        Ok(ReadoutSet(v))
    }

    pub fn from_raw(ids: &[u8]) -> Result<Self> {
        Self::new(
            ids.iter()
                .map(|&i| ReadoutId::new(i as i64))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn full() -> Self {
        ReadoutSet(ReadoutId::all().collect())
    }

    pub fn ids(&self) -> &[ReadoutId] {
        &self.0
    }

    pub fn raw(&self) -> Vec<u8> {
        self.0.iter().map(|i| i.get()).collect()
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, id: ReadoutId) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

impl fmt::Display for ReadoutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

#[derive(Debug, Clone)]
pub struct SetReport {
    pub set: ReadoutSet,
    /// Rank of the design including the trace row.
    pub rank: usize,
    pub full_rank: bool,
    pub min_eigenvalue: f64,
    /// Eigenvalues of the normal matrix, descending.
    pub eigenvalues: Vec<f64>,
}

fn set_rank(s: &ReadoutSet) -> Result<usize> {
    let d = assemble_design(s.ids(), true, None)?;
    matrix_rank(&d.a, RANK_TOL)
}

pub fn set_report(s: &ReadoutSet) -> Result<SetReport> {
    let d = assemble_design(s.ids(), true, None)?;
    let rank = matrix_rank(&d.a, RANK_TOL)?;
    let eig = sym_eigen(&normal_system(&d).c)?;
    let min_eigenvalue = *eig.eigenvalues.last().expect("16 eigenvalues");
    Ok(SetReport {
        set: s.clone(),
        rank,
        full_rank: rank == NUM_PARAMS,
        min_eigenvalue,
        eigenvalues: eig.eigenvalues,
    })
}

fn subsets(k: usize) -> impl Iterator<Item = ReadoutSet> {
    ReadoutId::all().combinations(k).map(ReadoutSet)
}

/// Whether any size-`k` set reaches full rank.
pub fn any_full_rank(k: usize) -> Result<bool> {
    check_size(k)?;
    let all: Vec<ReadoutSet> = subsets(k).collect();
    all.par_iter()
        .map(|s| set_rank(s).map(|r| r == NUM_PARAMS))
        .try_fold(|| false, |acc, r| r.map(|b| acc || b))
        .try_reduce(|| false, |a, b| Ok(a || b))
}

/// Smallest `k` for which some size-`k` read-out set has full rank.
pub fn minimum_readout_count() -> Result<usize> {
    for k in 1..=NUM_READOUTS as usize {
        if any_full_rank(k)? {
            return Ok(k);
        }
    }
    // the full set always reaches rank 16
    unreachable!("full read-out set is rank deficient")
}

fn check_size(k: usize) -> Result<()> {
    if (1..=NUM_READOUTS as usize).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidSetSize(k))
    }
}

/// All full-rank sets of size `k`, in lexicographic order of ids.
pub fn enumerate_minimal_sets(k: usize) -> Result<Vec<SetReport>> {
    check_size(k)?;
    let all: Vec<ReadoutSet> = subsets(k).collect();
    let reports: Vec<Option<SetReport>> = all
        .par_iter()
        .map(|s| {
            if set_rank(s)? == NUM_PARAMS {
                set_report(s).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    Ok(reports.into_iter().flatten().collect())
}

/// Full-rank reports by descending smallest eigenvalue, ties broken by ids.
/// `top = None` keeps all of them.
pub fn rank_sets_by_conditioning(reports: &[SetReport], top: Option<usize>) -> Vec<SetReport> {
    // quantised so that roundoff-level differences count as ties
    let key = |r: &SetReport| (r.min_eigenvalue * 1e9).round() as i64;
    let mut out: Vec<SetReport> = reports.iter().filter(|r| r.full_rank).cloned().collect();
    out.sort_by(|a, b| key(b).cmp(&key(a)).then_with(|| a.set.cmp(&b.set)));
    if let Some(n) = top {
        out.truncate(n);
    }
    out
}

/// Membership difference between computed sets and a reference list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetDiff {
    /// In the reference but not found.
    pub missing: Vec<ReadoutSet>,
    /// Found but not in the reference.
    pub extra: Vec<ReadoutSet>,
}

impl SetDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn diff_sets(found: &[ReadoutSet], reference: &[ReadoutSet]) -> SetDiff {
    let found: BTreeSet<&ReadoutSet> = found.iter().collect();
    let reference: BTreeSet<&ReadoutSet> = reference.iter().collect();
    SetDiff {
        missing: reference.difference(&found).map(|s| (*s).clone()).collect(),
        extra: found.difference(&reference).map(|s| (*s).clone()).collect(),
    }
}

/// The reference minimal five-read-out sets as [`ReadoutSet`]s.
pub fn reference_five_sets() -> Vec<ReadoutSet> {
    crate::reference::MINIMAL_FIVE_SETS
        .iter()
        .map(|s| ReadoutSet::from_raw(s).expect("valid reference ids"))
        .collect()
}
