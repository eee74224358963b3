//! Graded Lie algebra cohomology `H¹_d(g₋, Γ)` for a parabolic grading.
//!
//! Two independent routes:
//!
//! * [`kostant_h1`]: the combinatorial answer. For `g₋` the pieces are dual
//!   to Kostant's `H¹(n₊, Γ*)`: one `g₀`-module per marked node `i`, with
//!   lowest weight `-(σ_i · λ*)` where `λ*` is the highest weight of `Γ*`.
//! * [`direct_h1`]: explicit matrices of `∂⁰` and `∂¹` on weight bases,
//!   with `∂⁰(X)(v) = v.X` and
//!   `∂¹(α⊗X)(v∧w) = α([v,w])X + α(v) w.X - α(w) v.X`.
//!
//! A cochain in `(g_{-i})* ⊗ Γ_e` has degree `i + e`, where `Γ_e` is the
//! `Z`-eigenspace with eigenvalue `e`. The direct route is the reference; the
//! combinatorial route is tested against it on every case small enough to
//! build explicitly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{grading_element, GradingElement, GradingError, ParabolicMarking};
use crate::linalg::{rank, rat, RatMatrix, Rational};
use crate::repthy::{construct_rep, gperp_decompose, IrrComponent, RepError, RepMatrices};
use crate::rootsys::{RootSystem, RootSystemError, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("∂¹∘∂⁰ ≠ 0 in degree {degree}")]
    NotAComplex { degree: String },
    #[error("differential {which} does not preserve degree")]
    NotGraded { which: &'static str },
    #[error("p must be at least -1, got {0}")]
    InvalidP(i64),
}

/// One irreducible `g₀`-summand of `H¹(g₋, Γ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H1Piece {
    #[serde(with = "crate::linalg::serde_rational")]
    pub degree: Rational,
    pub levi_highest_weight: Weight,
    pub dimension: u64,
    /// Marked node (1-based) whose simple reflection produced the piece.
    pub source_reflection: usize,
}

/// Lowest weight of the Levi module with highest weight `mu`.
fn levi_lowest(rs: &RootSystem, z: &GradingElement, mu: &Weight) -> Weight {
    let mut w = mu.clone();
    while let Some(j) = (0..rs.rank()).find(|&j| !z.marking().contains0(j) && w.0[j] > 0) {
        w = rs.reflect(j, &w);
    }
    w
}

fn levi_dim(rs: &RootSystem, z: &GradingElement, mu: &Weight) -> BigInt {
    rs.weyl_dim_over(mu, |r| z.eval_root(&rs.positive_roots()[r]) == 0)
}

/// Kostant's combinatorial `H¹(g₋, Γ)`; dimensions include the component's
/// multiplicity.
pub fn kostant_h1(
    rs: &RootSystem,
    marking: &ParabolicMarking,
    gamma: &IrrComponent,
) -> Result<Vec<H1Piece>, CohomologyError> {
    let z = grading_element(rs, marking)?;
    kostant_h1_with(rs, &z, gamma)
}

fn kostant_h1_with(
    rs: &RootSystem,
    z: &GradingElement,
    gamma: &IrrComponent,
) -> Result<Vec<H1Piece>, CohomologyError> {
    let lam = &gamma.highest_weight;
    rs.weyl_dim(lam)?;
    let dual = rs.dual_weight(lam);
    let mut pieces = Vec::new();
    for i in z.marking().nodes() {
        let mu = rs.affine_action(i, &dual)?;
        let levi_dominant = (0..rs.rank()).all(|j| z.marking().contains0(j) || mu.0[j] >= 0);
        if !levi_dominant {
            continue;
        }
        let hw = levi_lowest(rs, z, &mu).neg();
        let dim = levi_dim(rs, z, &mu) * BigInt::from(gamma.multiplicity);
        pieces.push(H1Piece {
            degree: z.eval(&hw),
            levi_highest_weight: hw,
            dimension: dim.to_u64().expect("dimension fits in u64"),
            source_reflection: i,
        });
    }
    Ok(pieces)
}

/// Sums piece dimensions per degree.
pub fn dims_by_degree(pieces: &[H1Piece]) -> BTreeMap<Rational, u64> {
    let mut out = BTreeMap::new();
    for p in pieces {
        *out.entry(p.degree.clone()).or_insert(0) += p.dimension;
    }
    out
}

/// Structure of `g₋`: root vectors `F_β` for the positive roots `β` with
/// `Z(β) > 0`, their brackets, and a way to realize them in any module.
#[derive(Debug, Clone)]
pub struct NegativePart {
    /// Index into `rs.positive_roots()` of each basis element.
    roots: Vec<usize>,
    /// `Z`-degree of each basis element (negative).
    degrees: Vec<i64>,
    /// `[F_a, F_b] = c F_e` stored as `brackets[(a, b)] = (e, c)` for `a < b`.
    brackets: BTreeMap<(usize, usize), (usize, Rational)>,
    /// For every positive root: `None` if simple, else `(i, r')` meaning
    /// `F_β = [f_i, F_{β'}]` with `β' = β - α_i` at position `r'`.
    words: Vec<Option<(usize, usize)>>,
}

/// Root vectors for all positive roots, built as iterated commutators of
/// the `f_i` in whatever representation `f` lives in.
fn realize_root_vectors(
    rs: &RootSystem,
    words: &[Option<(usize, usize)>],
    f: &[RatMatrix],
) -> Vec<RatMatrix> {
    let roots = rs.positive_roots();
    let mut out: Vec<RatMatrix> = Vec::with_capacity(roots.len());
    for (r, beta) in roots.iter().enumerate() {
        let m = match words[r] {
            None => {
                let i = beta.iter().position(|&c| c == 1).expect("simple root");
                f[i].clone()
            }
            Some((i, prev)) => f[i].commutator(&out[prev]).expect("square"),
        };
        out.push(m);
    }
    out
}

fn root_words(rs: &RootSystem) -> Vec<Option<(usize, usize)>> {
    rs.positive_roots()
        .iter()
        .map(|beta| {
            if beta.iter().sum::<i64>() == 1 {
                return None;
            }
            (0..beta.len()).find_map(|i| {
                if beta[i] == 0 {
                    return None;
                }
                let mut prev = beta.clone();
                prev[i] -= 1;
                rs.root_position(&prev).map(|p| (i, p))
            })
        })
        .collect()
}

impl NegativePart {
    /// Builds `g₋`, computing structure constants in the adjoint
    /// representation of each simple factor that meets the marking.
    pub fn new(rs: &RootSystem, z: &GradingElement) -> Result<Self, CohomologyError> {
        let words = root_words(rs);
        let all = rs.positive_roots();
        let roots: Vec<usize> = (0..all.len()).filter(|&r| z.eval_root(&all[r]) > 0).collect();
        let degrees: Vec<i64> = roots.iter().map(|&r| -z.eval_root(&all[r])).collect();

        // Adjoint realization of every factor, embedded block-diagonally.
        let mut adjoint_f: Vec<RatMatrix> = Vec::new();
        let mut blocks = Vec::new();
        for (s, factor) in rs.factors().iter().enumerate() {
            let local = RootSystem::build(&[*factor])?;
            let adj = construct_rep(&local, &local.highest_root_weight(0), usize::MAX)?;
            blocks.push((s, adj));
        }
        let total: usize = blocks.iter().map(|(_, a)| a.dimension).sum();
        for s in 0..rs.factors().len() {
            let nodes = rs.factor_nodes(s);
            let mut offset = 0;
            for (t, adj) in &blocks {
                if *t == s {
                    break;
                }
                offset += adj.dimension;
            }
            let adj = &blocks[s].1;
            for local_i in 0..nodes.len() {
                let mut m = RatMatrix::zeros(total, total);
                for r in 0..adj.dimension {
                    for c in 0..adj.dimension {
                        let v = adj.f[local_i].get(r, c);
                        if !v.is_zero() {
                            m.set(offset + r, offset + c, v.clone());
                        }
                    }
                }
                adjoint_f.push(m);
            }
        }
        let vectors = realize_root_vectors(rs, &words, &adjoint_f);

        let mut brackets = BTreeMap::new();
        for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                let sum: Vec<i64> = all[roots[a]].iter().zip(&all[roots[b]]).map(|(x, y)| x + y).collect();
                let Some(target) = rs.root_position(&sum) else { continue };
                let e = roots.iter().position(|&r| r == target).expect("sum has positive degree");
                let br = vectors[roots[a]].commutator(&vectors[roots[b]]).expect("square");
                let fe = &vectors[target];
                let k = fe.entries().iter().position(|x| !x.is_zero()).expect("nonzero root vector");
                let c = &br.entries()[k] / &fe.entries()[k];
                assert_eq!(br, fe.scale(&c), "root spaces are one dimensional");
                if !c.is_zero() {
                    brackets.insert((a, b), (e, c));
                }
            }
        }
        Ok(NegativePart { roots, degrees, brackets, words })
    }

    pub fn dim(&self) -> usize {
        self.roots.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Matrices of the basis of `g₋` acting on `rep`.
    pub fn action_on(&self, rs: &RootSystem, rep: &RepMatrices) -> Vec<RatMatrix> {
        let all = realize_root_vectors(rs, &self.words, &rep.f);
        self.roots.iter().map(|&r| all[r].clone()).collect()
    }

    /// Structure constant: coefficient of basis element `e` in `[F_a, F_b]`.
    fn bracket_coeff(&self, a: usize, b: usize, e: usize) -> Rational {
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        match self.brackets.get(&(lo, hi)) {
            Some((t, c)) if *t == e => c * rat(sign),
            _ => Rational::zero(),
        }
    }
}

/// Per-degree data of the explicit complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSlice {
    #[serde(with = "crate::linalg::serde_rational")]
    pub degree: Rational,
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub rank_d0: usize,
    pub rank_d1: usize,
}

impl DegreeSlice {
    pub fn h0(&self) -> usize {
        self.c0 - self.rank_d0
    }

    pub fn h1(&self) -> usize {
        self.c1 - self.rank_d1 - self.rank_d0
    }
}

/// Result of the explicit `∂⁰`/`∂¹` computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectH1 {
    pub slices: Vec<DegreeSlice>,
}

impl DirectH1 {
    /// Nonzero `dim H¹_d` per degree.
    pub fn h1(&self) -> BTreeMap<Rational, u64> {
        self.slices.iter().filter(|s| s.h1() > 0).map(|s| (s.degree.clone(), s.h1() as u64)).collect()
    }

    pub fn h0(&self) -> BTreeMap<Rational, u64> {
        self.slices.iter().filter(|s| s.h0() > 0).map(|s| (s.degree.clone(), s.h0() as u64)).collect()
    }
}

/// Assembled differentials with degree labels on every basis vector.
pub struct CochainComplex {
    pub deg0: Vec<Rational>,
    pub deg1: Vec<Rational>,
    pub deg2: Vec<Rational>,
    pub d0: RatMatrix,
    pub d1: RatMatrix,
}

pub fn assemble_complex(
    neg: &NegativePart,
    action: &[RatMatrix],
    gamma_degrees: &[Rational],
) -> CochainComplex {
    let n = neg.dim();
    let m = gamma_degrees.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|b| (b + 1..n).map(move |c| (b, c))).collect();
    let pair_index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();

    let deg0 = gamma_degrees.to_vec();
    let deg1: Vec<Rational> = (0..n)
        .flat_map(|a| gamma_degrees.iter().map(move |g| g - rat(neg.degrees[a])))
        .collect();
    let deg2: Vec<Rational> = pairs
        .iter()
        .flat_map(|&(b, c)| {
            gamma_degrees.iter().map(move |g| g - rat(neg.degrees[b]) - rat(neg.degrees[c]))
        })
        .collect();

    let mut d0 = RatMatrix::zeros(n * m, m);
    for (a, fa) in action.iter().enumerate() {
        for y in 0..m {
            for x in 0..m {
                let v = fa.get(y, x);
                if !v.is_zero() {
                    d0.set(a * m + y, x, v.clone());
                }
            }
        }
    }

    let mut d1 = RatMatrix::zeros(pairs.len() * m, n * m);
    for a in 0..n {
        for x in 0..m {
            let col = a * m + x;
            // α([v,w]) X
            for (k, &(b, c)) in pairs.iter().enumerate() {
                let s = neg.bracket_coeff(b, c, a);
                if !s.is_zero() {
                    d1.add_at(k * m + x, col, &s);
                }
            }
            // α(v) w.X with v = F_a, w = F_c, c > a
            for c in a + 1..n {
                let k = pair_index[&(a, c)];
                for y in 0..m {
                    let v = action[c].get(y, x);
                    if !v.is_zero() {
                        d1.add_at(k * m + y, col, v);
                    }
                }
            }
            // -α(w) v.X with w = F_a, v = F_b, b < a
            for b in 0..a {
                let k = pair_index[&(b, a)];
                for y in 0..m {
                    let v = action[b].get(y, x);
                    if !v.is_zero() {
                        d1.add_at(k * m + y, col, &-v.clone());
                    }
                }
            }
        }
    }
    CochainComplex { deg0, deg1, deg2, d0, d1 }
}

fn is_graded(m: &RatMatrix, row_deg: &[Rational], col_deg: &[Rational]) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c).is_zero() || row_deg[r] == col_deg[c]))
}

fn submatrix(m: &RatMatrix, rows: &[usize], cols: &[usize]) -> RatMatrix {
    let mut out = RatMatrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.set(i, j, v.clone());
            }
        }
    }
    out
}

/// Explicit graded `H⁰` and `H¹` of `g₋` with coefficients in `rep`.
pub fn direct_h1(
    rs: &RootSystem,
    z: &GradingElement,
    neg: &NegativePart,
    rep: &RepMatrices,
) -> Result<DirectH1, CohomologyError> {
    let action = neg.action_on(rs, rep);
    let gamma_degrees: Vec<Rational> = rep.weights.iter().map(|w| z.eval(w)).collect();
    let cx = assemble_complex(neg, &action, &gamma_degrees);
    if !is_graded(&cx.d0, &cx.deg1, &cx.deg0) {
        return Err(CohomologyError::NotGraded { which: "∂⁰" });
    }
    if !is_graded(&cx.d1, &cx.deg2, &cx.deg1) {
        return Err(CohomologyError::NotGraded { which: "∂¹" });
    }
    let mut degrees: Vec<Rational> =
        cx.deg0.iter().chain(&cx.deg1).chain(&cx.deg2).cloned().collect();
    degrees.sort();
    degrees.dedup();
    let idx = |labels: &[Rational], d: &Rational| -> Vec<usize> {
        labels.iter().enumerate().filter(|(_, x)| *x == d).map(|(i, _)| i).collect()
    };
    let mut slices = Vec::with_capacity(degrees.len());
    for d in degrees {
        let i0 = idx(&cx.deg0, &d);
        let i1 = idx(&cx.deg1, &d);
        let i2 = idx(&cx.deg2, &d);
        let d0 = submatrix(&cx.d0, &i1, &i0);
        let d1 = submatrix(&cx.d1, &i2, &i1);
        if !i0.is_empty() && !i2.is_empty() && !d1.mul(&d0).expect("shapes").is_zero() {
            return Err(CohomologyError::NotAComplex { degree: crate::linalg::format_rational(&d) });
        }
        slices.push(DegreeSlice {
            c0: i0.len(),
            c1: i1.len(),
            c2: i2.len(),
            rank_d0: if i0.is_empty() || i1.is_empty() { 0 } else { rank(&d0) },
            rank_d1: if i1.is_empty() || i2.is_empty() { 0 } else { rank(&d1) },
            degree: d,
        });
    }
    Ok(DirectH1 { slices })
}

/// Convenience wrapper: builds `g₋` and `V_λ` and runs [`direct_h1`].
pub fn direct_h1_for_weight(
    rs: &RootSystem,
    marking: &ParabolicMarking,
    lam: &Weight,
    bound: usize,
) -> Result<DirectH1, CohomologyError> {
    let z = grading_element(rs, marking)?;
    let rep = construct_rep(rs, lam, bound)?;
    let neg = NegativePart::new(rs, &z)?;
    direct_h1(rs, &z, &neg, &rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Rigid,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCohomology {
    pub component: IrrComponent,
    pub pieces: Vec<H1Piece>,
}

/// `H¹_d(g₋, g⊥)` assembled over the components of `g⊥ ⊂ sl(U)` and the
/// verdict for a chosen `p ≥ -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub p: i64,
    /// Pieces of degree at least this value obstruct.
    pub threshold: i64,
    pub components: Vec<ComponentCohomology>,
    /// Total `dim H¹_d` per degree, keyed by `"p/q"` strings.
    pub by_degree: BTreeMap<String, u64>,
    pub offending: Vec<H1Piece>,
    pub verdict: Verdict,
}

pub fn verdict_for(pieces: &[H1Piece], p: i64) -> (Verdict, Vec<H1Piece>) {
    let threshold = rat(p + 2);
    let offending: Vec<H1Piece> = pieces.iter().filter(|x| x.degree >= threshold).cloned().collect();
    let v = if offending.is_empty() { Verdict::Rigid } else { Verdict::Inconclusive };
    (v, offending)
}

pub fn h1_report(
    rs: &RootSystem,
    marking: &ParabolicMarking,
    lam: &Weight,
    p: i64,
) -> Result<CohomologyReport, CohomologyError> {
    if p < -1 {
        return Err(CohomologyError::InvalidP(p));
    }
    let z = grading_element(rs, marking)?;
    let comps = gperp_decompose(rs, lam)?;
    let mut components = Vec::with_capacity(comps.len());
    let mut all = Vec::new();
    for c in comps {
        let pieces = kostant_h1_with(rs, &z, &c)?;
        all.extend(pieces.iter().cloned());
        components.push(ComponentCohomology { component: c, pieces });
    }
    let by_degree = dims_by_degree(&all)
        .into_iter()
        .map(|(d, n)| (crate::linalg::format_rational(&d), n))
        .collect();
    let (verdict, offending) = verdict_for(&all, p);
    Ok(CohomologyReport { p, threshold: p + 2, components, by_degree, offending, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::parse_factors;

    fn rs(s: &str) -> RootSystem {
        RootSystem::build(&parse_factors(s).unwrap()).unwrap()
    }

    fn comp(hw: &[i64]) -> IrrComponent {
        IrrComponent { highest_weight: Weight(hw.to_vec()), multiplicity: 1 }
    }

    #[test]
    fn sl2_v4_single_piece_in_degree_three() {
        let pieces = kostant_h1(&rs("A1"), &ParabolicMarking::new([1]), &comp(&[4])).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].dimension, 1);
        assert_eq!(pieces[0].degree, rat(3));
        assert_eq!(pieces[0].levi_highest_weight, Weight(vec![6]));
    }

    #[test]
    fn trivial_coefficients_give_abelianization_dual() {
        let r = rs("A3");
        let m = ParabolicMarking::new([1, 3]);
        let pieces = kostant_h1(&r, &m, &comp(&[0, 0, 0])).unwrap();
        assert_eq!(pieces.len(), 2);
        // (g₋ / [g₋, g₋])* is the dual of g_{-1}, which is 2 + 2 dimensional.
        assert!(pieces.iter().all(|p| p.degree == rat(1) && p.dimension == 2));
    }

    #[test]
    fn direct_sl2_v4() {
        let d = direct_h1_for_weight(&rs("A1"), &ParabolicMarking::new([1]), &Weight(vec![4]), 30).unwrap();
        assert_eq!(d.h1(), BTreeMap::from([(rat(3), 1)]));
        assert_eq!(d.h0(), BTreeMap::from([(rat(-2), 1)]));
    }

    #[test]
    fn direct_trivial_abelian() {
        // A1xA1 with both nodes marked: g₋ abelian of dimension 2 in degree -1.
        let d = direct_h1_for_weight(&rs("A1xA1"), &ParabolicMarking::new([1, 2]), &Weight(vec![0, 0]), 30).unwrap();
        assert_eq!(d.h1(), BTreeMap::from([(rat(1), 2)]));
        // G(2,4): g₋ = g_{-1} abelian of dimension 4.
        let d = direct_h1_for_weight(&rs("A3"), &ParabolicMarking::new([2]), &Weight(vec![0, 0, 0]), 30).unwrap();
        assert_eq!(d.h1(), BTreeMap::from([(rat(1), 4)]));
    }

    #[test]
    fn slice_bookkeeping() {
        let d = direct_h1_for_weight(&rs("A2"), &ParabolicMarking::new([1, 2]), &Weight(vec![1, 1]), 30).unwrap();
        for s in &d.slices {
            assert_eq!(s.rank_d0 + s.h0(), s.c0);
            assert!(s.rank_d0 + s.rank_d1 <= s.c1);
        }
    }

    #[test]
    fn report_rejects_small_p() {
        assert_eq!(
            h1_report(&rs("A1"), &ParabolicMarking::new([1]), &Weight(vec![2]), -2),
            Err(CohomologyError::InvalidP(-2))
        );
    }

    #[test]
    fn veronese_report() {
        let r = rs("A1");
        let m = ParabolicMarking::new([1]);
        let rep = h1_report(&r, &m, &Weight(vec![2]), -1).unwrap();
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert_eq!(rep.offending.len(), 1);
        assert_eq!(rep.offending[0].degree, rat(3));
        assert_eq!(h1_report(&r, &m, &Weight(vec![2]), 2).unwrap().verdict, Verdict::Rigid);
    }
}
