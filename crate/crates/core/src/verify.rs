//! Line-intersection census of point sets.
//!
//! Every property checked here reduces to the spectrum: for each size `s`
//! in `0..=q+1`, the number of lines meeting the set in exactly `s` points.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::constructions::ConstructionResult;
use crate::plane::{Plane, PointSet, ProjLine, ProjPoint};

/// Below this many lines the census runs on the calling thread.
const PARALLEL_MIN_LINES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("k = {k} is outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("point set is not over this plane")]
    WrongPlane,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    /// `counts[s]` = number of lines meeting the set in `s` points.
    counts: Vec<u64>,
    set_size: usize,
}

impl SpectrumReport {
    pub fn count(&self, s: usize) -> u64 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_lines(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    /// Nonzero entries only, keyed by intersection size.
    pub fn nonzero(&self) -> BTreeMap<usize, u64> {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(s, &c)| (s, c)).collect()
    }

    /// Σ s·count(s); equals |set|·(q+1).
    pub fn incidences(&self) -> u64 {
        self.counts.iter().enumerate().map(|(s, &c)| s as u64 * c).sum()
    }
}

impl Serialize for SpectrumReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.nonzero().serialize(s)
    }
}

/// Intersection size of `line` with a set given as a bitset.
#[inline]
pub fn line_hits(plane: &Plane, members: &BitSet, line: u32) -> u32 {
    match plane.bitmap() {
        Some(bm) => members.and_count(bm.row(line)),
        None => plane
            .points_on_line(line)
            .iter()
            .filter(|&&p| members.contains(p as usize))
            .count() as u32,
    }
}

/// Intersection size of every line with the set, indexed by line.
pub fn line_intersections(plane: &Plane, set: &PointSet) -> Vec<u32> {
    let members = set.to_bitset(plane);
    let n = plane.num_lines() as u32;
    if (n as usize) < PARALLEL_MIN_LINES {
        (0..n).map(|l| line_hits(plane, &members, l)).collect()
    } else {
        (0..n).into_par_iter().map(|l| line_hits(plane, &members, l)).collect()
    }
}

pub fn spectrum(plane: &Plane, set: &PointSet) -> SpectrumReport {
    let mut counts = vec![0u64; plane.order() as usize + 2];
    for s in line_intersections(plane, set) {
        counts[s as usize] += 1;
    }
    SpectrumReport { counts, set_size: set.len() }
}

/// Lines meeting the set in exactly one point, ascending.
pub fn tangent_lines(plane: &Plane, set: &PointSet) -> Vec<u32> {
    line_intersections(plane, set)
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 1)
        .map(|(l, _)| l as u32)
        .collect()
}

pub fn is_k_avoiding(plane: &Plane, set: &PointSet, k: usize) -> Result<bool, VerifyError> {
    let max = plane.order() as usize + 1;
    if k > max {
        return Err(VerifyError::KOutOfRange { k, max });
    }
    if !plane.belongs(set) {
        return Err(VerifyError::WrongPlane);
    }
    Ok(spectrum(plane, set).count(k) == 0)
}

/// No line meets the set in exactly one point.
pub fn is_untouchable(plane: &Plane, set: &PointSet) -> bool {
    spectrum(plane, set).count(1) == 0
}

/// Every line meets the set in an even number of points.
pub fn is_even_type(plane: &Plane, set: &PointSet) -> bool {
    spectrum(plane, set).nonzero().keys().all(|s| s % 2 == 0)
}

/// A line demonstrating a failed check, with the set's points on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub line: ProjLine,
    pub points: Vec<ProjPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub size: usize,
    pub expected_size: usize,
    pub untouchable: bool,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.size == self.expected_size && self.untouchable
    }
}

/// First tangent line of the set, if any.
pub fn tangent_witness(plane: &Plane, set: &PointSet) -> Option<Witness> {
    let members = set.to_bitset(plane);
    (0..plane.num_lines() as u32).find(|&l| line_hits(plane, &members, l) == 1).map(|l| Witness {
        line: plane.line(l),
        points: plane
            .points_on_line(l)
            .iter()
            .filter(|&&p| members.contains(p as usize))
            .map(|&p| plane.point(p))
            .collect(),
    })
}

pub fn check_construction(plane: &Plane, result: &ConstructionResult) -> CheckReport {
    check_set(plane, &result.set, result.expected_size)
}

pub fn check_set(plane: &Plane, set: &PointSet, expected_size: usize) -> CheckReport {
    let witness = tangent_witness(plane, set);
    CheckReport { size: set.len(), expected_size, untouchable: witness.is_none(), witness }
}
