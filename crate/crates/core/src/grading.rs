//! Gradings induced by a parabolic marking.
//!
//! The grading element `Z` of a set of marked nodes `I` satisfies
//! `Z(α_i) = 1` for `i ∈ I` and `Z(α_j) = 0` otherwise. On a weight in
//! fundamental coordinates it is `Z(ν) = Σ_j ν_j · (coefficient of Σ_{i∈I} α_i
//! in ω_j)`, i.e. a sum of entries of the inverse Cartan matrix. For products
//! it is the sum of the per-factor grading elements.
//!
//! Algebra degrees are symmetric about zero. Module degrees use the shifted
//! convention: the highest weight line sits in degree 0 and the rest of the
//! module in degrees `-1, ..., -f`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Rational};
use crate::repthy::{weight_multiplicities, RepError};
use crate::rootsys::{RootSystem, RootSystemError, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("parabolic marking is empty")]
    EmptyMarking,
    #[error("marked node {index} out of range 1..={rank}")]
    NodeOutOfRange { index: usize, rank: usize },
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Marked nodes `I`, 1-based global indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParabolicMarking {
    marked: BTreeSet<usize>,
}

impl ParabolicMarking {
    pub fn new(marked: impl IntoIterator<Item = usize>) -> Self {
        ParabolicMarking { marked: marked.into_iter().collect() }
    }

    pub fn validate(&self, rs: &RootSystem) -> Result<(), GradingError> {
        if self.marked.is_empty() {
            return Err(GradingError::EmptyMarking);
        }
        if let Some(&index) = self.marked.iter().find(|&&i| i == 0 || i > rs.rank()) {
            return Err(GradingError::NodeOutOfRange { index, rank: rs.rank() });
        }
        Ok(())
    }

    /// 1-based indices in increasing order.
    pub fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked.iter().copied()
    }

    /// Whether 0-based node `i` is marked.
    pub fn contains0(&self, i: usize) -> bool {
        self.marked.contains(&(i + 1))
    }

    /// True when every simple factor has at least one marked node.
    pub fn covers_all_factors(&self, rs: &RootSystem) -> bool {
        (0..rs.factors().len()).all(|s| rs.factor_nodes(s).any(|i| self.contains0(i)))
    }
}

/// `Z` as a rational functional on fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingElement {
    marking: ParabolicMarking,
    on_fundamental: Vec<Rational>,
}

impl GradingElement {
    pub fn marking(&self) -> &ParabolicMarking {
        &self.marking
    }

    /// `Z(ω_j)` for each node `j`.
    pub fn on_fundamental(&self) -> &[Rational] {
        &self.on_fundamental
    }

    pub fn eval(&self, nu: &Weight) -> Rational {
        self.on_fundamental
            .iter()
            .zip(&nu.0)
            .filter(|(_, &x)| x != 0)
            .fold(Rational::zero(), |acc, (z, &x)| acc + z * rat(x))
    }

    /// `Z` on a root given in simple-root coordinates.
    pub fn eval_root(&self, root: &[i64]) -> i64 {
        root.iter().enumerate().filter(|(i, _)| self.marking.contains0(*i)).map(|(_, c)| c).sum()
    }
}

pub fn grading_element(rs: &RootSystem, marking: &ParabolicMarking) -> Result<GradingElement, GradingError> {
    marking.validate(rs)?;
    let inv = rs.inverse_cartan();
    let on_fundamental = (0..rs.rank())
        .map(|j| {
            marking.nodes().fold(Rational::zero(), |acc, i| acc + inv.get(i - 1, j))
        })
        .collect();
    Ok(GradingElement { marking: marking.clone(), on_fundamental })
}

/// Dimensions per integer degree.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims {
    pub dims: BTreeMap<i64, u64>,
}

impl GradedDims {
    pub fn total(&self) -> u64 {
        self.dims.values().sum()
    }

    pub fn get(&self, d: i64) -> u64 {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    /// Largest positive degree present.
    pub fn depth(&self) -> i64 {
        self.dims.keys().copied().max().unwrap_or(0).max(0)
    }

    pub fn is_contiguous(&self) -> bool {
        match (self.dims.keys().next(), self.dims.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).all(|d| self.get(d) > 0),
            _ => true,
        }
    }
}

/// `g = ⊕ g_d` with `g_0` containing the Cartan subalgebra.
pub fn grade_algebra(rs: &RootSystem, marking: &ParabolicMarking) -> Result<GradedDims, GradingError> {
    let z = grading_element(rs, marking)?;
    let mut dims = BTreeMap::new();
    *dims.entry(0).or_insert(0) += rs.rank() as u64;
    for r in rs.positive_roots() {
        let d = z.eval_root(r);
        *dims.entry(d).or_insert(0) += 1;
        *dims.entry(-d).or_insert(0) += 1;
    }
    Ok(GradedDims { dims })
}

/// Module grading of `V_λ` plus the unshifted eigenvalue of the top piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleGrading {
    /// `Z(λ)`, the eigenvalue carried by shifted degree 0.
    #[serde(with = "crate::linalg::serde_rational")]
    pub top_eigenvalue: Rational,
    /// Shifted degrees `0, -1, ..., -f`.
    pub shifted: GradedDims,
}

impl ModuleGrading {
    /// Number of nonzero steps below the top.
    pub fn length(&self) -> i64 {
        -self.shifted.dims.keys().copied().min().unwrap_or(0)
    }
}

pub fn grade_module(
    rs: &RootSystem,
    marking: &ParabolicMarking,
    lam: &Weight,
) -> Result<ModuleGrading, GradingError> {
    let z = grading_element(rs, marking)?;
    let ws = weight_multiplicities(rs, lam)?;
    let top = z.eval(lam);
    let mut dims = BTreeMap::new();
    for (nu, &m) in &ws.entries {
        let shift = z.eval(nu) - &top;
        assert!(shift.is_integer(), "weights differ by roots");
        let d = shift.to_integer().to_i64().expect("small degree");
        *dims.entry(d).or_insert(0) += m;
    }
    Ok(ModuleGrading { top_eigenvalue: top, shifted: GradedDims { dims } })
}
