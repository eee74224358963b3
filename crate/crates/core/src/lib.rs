//! Exact computations around projective rigidity of homogeneous varieties.
//!
//! * [`linalg`]: dense matrices over `ℚ`, ranks, kernels, intersections.
//! * [`rootsys`]: Cartan data, roots, Weyl group, Weyl dimension formula.
//! * [`repthy`]: weight multiplicities, tensor products, `g⊥ ⊂ sl(U)`,
//!   explicit representation matrices.
//! * [`grading`]: the grading element of a parabolic marking.
//! * [`cohomology`]: `H¹_d(g₋, Γ)` by Kostant's theorem and by brute force.
//! * [`tableau`]: prolongation, Cartan characters, involutivity, torsion.
//! * [`vogel`]: universal dimension formulas.
//! * [`rigidity`]: the scenario pipeline producing a verdict.

pub mod cohomology;
pub mod grading;
pub mod linalg;
pub mod repthy;
pub mod rigidity;
pub mod rootsys;
pub mod tableau;
pub mod vogel;
