//! End-to-end rigidity test for a homogeneous variety `G/P ⊂ ℙU`.
//!
//! Pipeline: grading, decomposition of `g⊥ ⊂ sl(U)`, Kostant pieces of
//! `H¹(g₋, g⊥)` per component, optional cross-check of every component small
//! enough to build explicitly, and the verdict: RIGID for the `p`-th system
//! when no piece has degree `≥ p + 2`, INCONCLUSIVE otherwise. Nonvanishing
//! is never reported as flexibility.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{
    dims_by_degree, direct_h1, kostant_h1, verdict_for, CohomologyError, H1Piece, NegativePart, Verdict,
};
use crate::grading::{grade_algebra, grade_module, grading_element, GradedDims, ModuleGrading, ParabolicMarking};
use crate::linalg::format_rational;
use crate::repthy::{construct_rep, gperp_decompose, IrrComponent, RepError};
use crate::rootsys::{Family, RootSystem, RootSystemError, SimpleFactor, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    /// Bad input; `field` names the offending scenario field.
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("the adjoint variety of A1 is the conic v2(P1), rigid only at order five; it is excluded from the adjoint pipeline")]
    AdjointA1,
    #[error("Kostant and direct cohomology disagree on component {component}: {kostant} vs {direct}")]
    OracleMismatch { component: Weight, kostant: String, direct: String },
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

impl RigidityError {
    /// Whether the failure traces back to the caller's input.
    pub fn is_input_error(&self) -> bool {
        matches!(self, RigidityError::Invalid { .. } | RigidityError::AdjointA1)
    }
}

fn invalid(field: &'static str, e: impl ToString) -> RigidityError {
    RigidityError::Invalid { field, message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub algebra: Vec<SimpleFactor>,
    pub marked: ParabolicMarking,
    pub highest_weight: Weight,
    pub p: i64,
    #[serde(default)]
    pub oracle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gradings {
    pub algebra: GradedDims,
    pub module: ModuleGrading,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Agreed,
    AboveBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub component: Weight,
    pub dimension: u64,
    pub status: OracleStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub bound: usize,
    pub checks: Vec<OracleCheck>,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPieces {
    pub component: IrrComponent,
    pub dimension: u64,
    pub pieces: Vec<H1Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityVerdict {
    pub scenario: ScenarioSpec,
    pub verdict: Verdict,
    pub threshold: i64,
    pub offending_pieces: Vec<H1Piece>,
    pub gperp_summary: Vec<IrrComponent>,
    pub gradings: Gradings,
    pub h1_by_degree: BTreeMap<String, u64>,
    pub components: Vec<ComponentPieces>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fubini_note: Option<String>,
}

fn validate(spec: &ScenarioSpec) -> Result<RootSystem, RigidityError> {
    if spec.algebra.is_empty() {
        return Err(invalid("algebra", "at least one simple factor is required"));
    }
    let rs = RootSystem::build(&spec.algebra).map_err(|e| invalid("algebra", e))?;
    spec.marked.validate(&rs).map_err(|e| invalid("marked", e))?;
    match rs.weyl_dim(&spec.highest_weight) {
        Err(RootSystemError::WeightLength { expected, found }) => {
            return Err(invalid("highest_weight", format!("{found} coordinates, rank is {expected}")))
        }
        Err(e) => return Err(invalid("highest_weight", e)),
        Ok(_) => {}
    }
    if spec.p < -1 {
        return Err(invalid("p", format!("must be at least -1, got {}", spec.p)));
    }
    // The marking must be the one cut out by the weight: P stabilizes the
    // highest weight line.
    let support: Vec<usize> = (0..rs.rank()).filter(|&i| spec.highest_weight.0[i] != 0).map(|i| i + 1).collect();
    let marked: Vec<usize> = spec.marked.nodes().collect();
    if support != marked {
        return Err(invalid(
            "marked",
            format!("must equal the support {support:?} of the highest weight, got {marked:?}"),
        ));
    }
    Ok(rs)
}

fn is_adjoint(rs: &RootSystem, spec: &ScenarioSpec) -> bool {
    rs.factors().len() == 1 && spec.highest_weight == rs.highest_root_weight(0)
}

/// Runs the full pipeline; `bound` caps the explicit oracle.
pub fn run_scenario_with_bound(spec: &ScenarioSpec, bound: usize) -> Result<RigidityVerdict, RigidityError> {
    let rs = validate(spec)?;
    let z = grading_element(&rs, &spec.marked).map_err(|e| invalid("marked", e))?;
    let gradings = Gradings {
        algebra: grade_algebra(&rs, &spec.marked).map_err(|e| invalid("marked", e))?,
        module: grade_module(&rs, &spec.marked, &spec.highest_weight).map_err(|e| invalid("highest_weight", e))?,
    };
    let comps = gperp_decompose(&rs, &spec.highest_weight).map_err(|e| match e {
        RepError::TooSmall | RepError::AdjointMissing { .. } => invalid("highest_weight", e),
        other => RigidityError::Cohomology(other.into()),
    })?;

    let mut components = Vec::with_capacity(comps.len());
    let mut all = Vec::new();
    for c in &comps {
        let pieces = kostant_h1(&rs, &spec.marked, c)?;
        let dimension = rs.weyl_dim(&c.highest_weight).map_err(CohomologyError::from)?;
        all.extend(pieces.iter().cloned());
        components.push(ComponentPieces {
            component: c.clone(),
            dimension: dimension.to_u64().expect("fits"),
            pieces,
        });
    }

    let oracle = if spec.oracle {
        let neg = NegativePart::new(&rs, &z)?;
        let mut checks = Vec::new();
        for c in &components {
            let hw = &c.component.highest_weight;
            if c.dimension > bound as u64 {
                checks.push(OracleCheck { component: hw.clone(), dimension: c.dimension, status: OracleStatus::AboveBound });
                continue;
            }
            let rep = construct_rep(&rs, hw, bound).map_err(CohomologyError::from)?;
            let direct = direct_h1(&rs, &z, &neg, &rep)?.h1();
            let single = IrrComponent { highest_weight: hw.clone(), multiplicity: 1 };
            let kostant = dims_by_degree(&kostant_h1(&rs, &spec.marked, &single)?);
            if kostant != direct {
                let show = |m: &BTreeMap<_, u64>| format!("{:?}", m.iter().map(|(d, n)| (format_rational(d), *n)).collect::<Vec<_>>());
                return Err(RigidityError::OracleMismatch { component: hw.clone(), kostant: show(&kostant), direct: show(&direct) });
            }
            checks.push(OracleCheck { component: hw.clone(), dimension: c.dimension, status: OracleStatus::Agreed });
        }
        let skipped = checks.iter().filter(|c| c.status == OracleStatus::AboveBound).count();
        let summary = if skipped == 0 {
            "Kostant and direct dimensions agreed in every degree for every component".to_string()
        } else if skipped == checks.len() {
            format!("every component exceeds the oracle bound {bound}; the Kostant path alone decided")
        } else {
            format!(
                "Kostant and direct dimensions agreed on {} component(s); {skipped} component(s) exceed the oracle bound {bound}, where the Kostant path alone decided",
                checks.len() - skipped
            )
        };
        Some(OracleReport { bound, checks, summary })
    } else {
        None
    };

    let h1_by_degree = dims_by_degree(&all).into_iter().map(|(d, n)| (format_rational(&d), n)).collect();
    let (verdict, offending_pieces) = verdict_for(&all, spec.p);
    let fubini_note = (is_adjoint(&rs, spec) && spec.p == -1)
        .then(|| "adjoint variety: p = -1 is the system dominated by the third-order Fubini system".to_string());
    Ok(RigidityVerdict {
        scenario: spec.clone(),
        verdict,
        threshold: spec.p + 2,
        offending_pieces,
        gperp_summary: comps,
        gradings,
        h1_by_degree,
        components,
        oracle,
        fubini_note,
    })
}

/// [`run_scenario_with_bound`] with the bound taken from `ORACLE_DIM_MAX`.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<RigidityVerdict, RigidityError> {
    run_scenario_with_bound(spec, crate::repthy::oracle_bound_from_env())
}

/// Adjoint variety of a simple algebra at `p = -1`.
pub fn adjoint_scenario(g: SimpleFactor) -> Result<ScenarioSpec, RigidityError> {
    if g.family == Family::A && g.rank == 1 {
        return Err(RigidityError::AdjointA1);
    }
    let rs = RootSystem::build(&[g]).map_err(|e| invalid("algebra", e))?;
    let lam = rs.highest_root_weight(0);
    let marked = ParabolicMarking::new((0..rs.rank()).filter(|&i| lam.0[i] != 0).map(|i| i + 1));
    Ok(ScenarioSpec {
        name: Some(format!("adjoint-{}", g.to_string().to_lowercase())),
        algebra: vec![g],
        marked,
        highest_weight: lam,
        p: -1,
        oracle: true,
    })
}
