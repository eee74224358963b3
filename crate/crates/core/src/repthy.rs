//! Finite-dimensional irreducible modules: weight multiplicities, tensor
//! product decomposition, the complement of `g` in `sl(U)`, and explicit
//! matrices for the Chevalley generators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, rat, RatMatrix, Rational};
use crate::rootsys::{RootSystem, RootSystemError, Weight};

/// Default ceiling on module dimension for explicit matrix construction.
pub const DEFAULT_ORACLE_BOUND: usize = 30;

/// Oracle bound, overridable through `ORACLE_DIM_MAX`.
pub fn oracle_bound_from_env() -> usize {
    std::env::var("ORACLE_DIM_MAX")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("module of dimension {dim} exceeds the oracle bound {bound}")]
    OracleBound { dim: BigInt, bound: usize },
    #[error("sl(U) has no adjoint summand for factor {factor}; the weight must be nontrivial on every factor")]
    AdjointMissing { factor: usize },
    #[error("U*⊗U has no trivial summand")]
    TrivialMissing,
    #[error("module must have dimension at least 2")]
    TooSmall,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrComponent {
    pub highest_weight: Weight,
    pub multiplicity: u64,
}

/// Weight multiplicities of an irreducible module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest_weight: Weight,
    pub entries: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }
}

/// Dominant weights `μ ≤ λ`, reached by subtracting positive roots.
fn dominant_weights_below(rs: &RootSystem, lam: &Weight) -> Vec<Weight> {
    let roots: Vec<Weight> =
        rs.positive_roots().iter().map(|r| Weight(rs.root_to_weight(r))).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([lam.clone()]);
    seen.insert(lam.clone());
    while let Some(mu) = queue.pop_front() {
        for a in &roots {
            let nu = mu.sub(a);
            if nu.is_dominant() && !seen.contains(&nu) {
                seen.insert(nu.clone());
                queue.push_back(nu);
            }
        }
    }
    seen.into_iter().collect()
}

/// Freudenthal multiplicities of the dominant weights of `V_λ`.
fn dominant_multiplicities(rs: &RootSystem, lam: &Weight) -> BTreeMap<Weight, u64> {
    let mut doms = dominant_weights_below(rs, lam);
    // Decreasing height: everything a weight depends on is strictly higher.
    doms.sort_by_key(|mu| rs.depth_below(lam, mu));
    let rho = rs.weyl_vector();
    let lr = lam.add(&rho);
    let top = rs.inner(&lr.0, &lr.0);
    let roots: Vec<Weight> =
        rs.positive_roots().iter().map(|r| Weight(rs.root_to_weight(r))).collect();
    let mut mult: BTreeMap<Weight, u64> = BTreeMap::new();
    for mu in doms {
        if &mu == lam {
            mult.insert(mu, 1);
            continue;
        }
        let mut sum = Rational::zero();
        for a in &roots {
            let mut k = 1;
            loop {
                let nu = mu.add(&a.scale(k));
                let (dom, _) = rs.dominant_conjugate(&nu);
                let m = match mult.get(&dom) {
                    Some(&m) => m,
                    None => break,
                };
                sum += rs.inner(&nu.0, &a.0) * rat(m as i64);
                k += 1;
            }
        }
        let mr = mu.add(&rho);
        let denom = &top - rs.inner(&mr.0, &mr.0);
        let m = rat(2) * sum / denom;
        assert!(m.is_integer(), "Freudenthal multiplicity must be integral");
        mult.insert(mu, m.to_integer().to_u64().expect("nonnegative multiplicity"));
    }
    mult.retain(|_, m| *m > 0);
    mult
}

/// Weyl orbit of a dominant weight.
fn orbit(rs: &RootSystem, mu: &Weight) -> Vec<Weight> {
    let mut seen = BTreeSet::from([mu.clone()]);
    let mut queue = VecDeque::from([mu.clone()]);
    while let Some(w) = queue.pop_front() {
        for i in 0..rs.rank() {
            if w.0[i] > 0 {
                let v = rs.reflect(i, &w);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Full weight system of `V_λ` (Freudenthal on dominant weights, then orbits).
pub fn weight_multiplicities(rs: &RootSystem, lam: &Weight) -> Result<WeightSystem, RepError> {
    rs.weyl_dim(lam)?;
    let mut entries = BTreeMap::new();
    for (mu, m) in dominant_multiplicities(rs, lam) {
        for w in orbit(rs, &mu) {
            entries.insert(w, m);
        }
    }
    Ok(WeightSystem { highest_weight: lam.clone(), entries })
}

/// Klimyk's formula: `V_λ ⊗ V_μ = Σ_ν m_μ(ν) ε(w) V_{w(λ+ν+ρ)-ρ}`.
pub fn tensor_decompose(
    rs: &RootSystem,
    lam: &Weight,
    mu: &Weight,
) -> Result<Vec<IrrComponent>, RepError> {
    let dl = rs.weyl_dim(lam)?;
    let dm = rs.weyl_dim(mu)?;
    let (big, small) = if dl >= dm { (lam, mu) } else { (mu, lam) };
    let ws = weight_multiplicities(rs, small)?;
    let rho = rs.weyl_vector();
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (nu, &m) in &ws.entries {
        let shifted = big.add(nu).add(&rho);
        let (dom, odd) = rs.dominant_conjugate(&shifted);
        if dom.0.contains(&0) {
            continue;
        }
        let sign = if odd { -1 } else { 1 };
        *acc.entry(dom.sub(&rho)).or_insert(0) += sign * m as i64;
    }
    let mut out = Vec::new();
    let mut total = BigInt::zero();
    for (w, c) in acc {
        assert!(c >= 0, "negative tensor multiplicity for {w}");
        if c > 0 {
            total += rs.weyl_dim(&w)? * BigInt::from(c);
            out.push(IrrComponent { highest_weight: w, multiplicity: c as u64 });
        }
    }
    assert_eq!(total, &dl * &dm, "tensor product dimension identity failed");
    Ok(out)
}

/// Decomposition of the complement of `g` in `sl(U)`, `U = V_λ`.
///
/// Computes `U* ⊗ U`, removes one trivial summand and one adjoint summand
/// per simple factor.
pub fn gperp_decompose(rs: &RootSystem, lam: &Weight) -> Result<Vec<IrrComponent>, RepError> {
    let dim = rs.weyl_dim(lam)?;
    if dim < BigInt::from(2) {
        return Err(RepError::TooSmall);
    }
    let mut comps = tensor_decompose(rs, &rs.dual_weight(lam), lam)?;
    let mut take = |w: &Weight, err: RepError| -> Result<(), RepError> {
        let pos = comps.iter().position(|c| &c.highest_weight == w).ok_or(err)?;
        comps[pos].multiplicity -= 1;
        if comps[pos].multiplicity == 0 {
            comps.remove(pos);
        }
        Ok(())
    };
    take(&Weight::zero(rs.rank()), RepError::TrivialMissing)?;
    for s in 0..rs.factors().len() {
        take(&rs.highest_root_weight(s), RepError::AdjointMissing { factor: s })?;
    }
    let expected = &dim * &dim - BigInt::from(1) - BigInt::from(rs.dimension());
    let got: BigInt = comps
        .iter()
        .map(|c| rs.weyl_dim(&c.highest_weight).expect("dominant") * BigInt::from(c.multiplicity))
        .sum();
    assert_eq!(got, expected, "g-perp dimension bookkeeping failed");
    Ok(comps)
}

/// Explicit action of the Chevalley generators on a weight basis.
#[derive(Debug, Clone)]
pub struct RepMatrices {
    pub highest_weight: Weight,
    pub dimension: usize,
    /// Weight of each basis vector.
    pub weights: Vec<Weight>,
    pub e: Vec<RatMatrix>,
    pub f: Vec<RatMatrix>,
    pub h: Vec<RatMatrix>,
}

impl RepMatrices {
    /// Checks `[e_i, f_j] = δ_ij h_i`, `[h_i, e_j] = a_ij e_j`, `[h_i, f_j] = -a_ij f_j`.
    pub fn check_relations(&self, rs: &RootSystem) -> bool {
        let r = rs.rank();
        for i in 0..r {
            for j in 0..r {
                let ef = self.e[i].commutator(&self.f[j]).expect("square");
                let want = if i == j { self.h[i].clone() } else { RatMatrix::zeros(self.dimension, self.dimension) };
                if ef != want {
                    return false;
                }
                let a = rat(rs.cartan_entry(i, j));
                if self.h[i].commutator(&self.e[j]).expect("square") != self.e[j].scale(&a) {
                    return false;
                }
                if self.h[i].commutator(&self.f[j]).expect("square") != self.f[j].scale(&-a) {
                    return false;
                }
            }
        }
        true
    }
}

/// Builds `V_λ` weight space by weight space, top down.
///
/// A vector of weight `ν ≠ λ` in an irreducible module is determined by its
/// images under all `e_j`, so each candidate `f_i b` is represented by
/// `Σ_j e_j f_i b = f_i (Σ_j e_j b) + ⟨ν+α_i, α_i^∨⟩ b`, which only involves
/// already constructed data. A maximal independent set of candidates is the
/// basis of `V_ν`.
pub fn construct_rep(rs: &RootSystem, lam: &Weight, bound: usize) -> Result<RepMatrices, RepError> {
    let dim_big = rs.weyl_dim(lam)?;
    if dim_big > BigInt::from(bound) {
        return Err(RepError::OracleBound { dim: dim_big, bound });
    }
    let dim = dim_big.to_usize().expect("bounded");
    let r = rs.rank();
    let ws = weight_multiplicities(rs, lam)?;
    let mut order: Vec<&Weight> = ws.entries.keys().collect();
    order.sort_by_key(|w| rs.depth_below(lam, w));

    let simple: Vec<Weight> = (0..r).map(|i| rs.simple_root_weight(i)).collect();
    let mut e = vec![RatMatrix::zeros(dim, dim); r];
    let mut f = vec![RatMatrix::zeros(dim, dim); r];
    let mut weights: Vec<Weight> = Vec::with_capacity(dim);
    let mut slots: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();

    for nu in order {
        if nu == lam {
            slots.insert(nu.clone(), vec![weights.len()]);
            weights.push(nu.clone());
            continue;
        }
        // (generator, source vector, signature)
        let mut cands: Vec<(usize, usize, Vec<Rational>)> = Vec::new();
        for i in 0..r {
            let above = nu.add(&simple[i]);
            let Some(src) = slots.get(&above) else { continue };
            for &b in src {
                let mut raised = vec![Rational::zero(); dim];
                for ej in &e {
                    for (x, v) in raised.iter_mut().zip(ej.column(b)) {
                        *x += v;
                    }
                }
                let mut sig = f[i].mul_vec(&raised).expect("square");
                sig[b] += rat(above.0[i]);
                cands.push((i, b, sig));
            }
        }
        let sigs: Vec<Vec<Rational>> = cands.iter().map(|c| c.2.clone()).collect();
        let chosen = linalg::independent_subset(dim, &sigs).expect("uniform length");
        let expected = ws.multiplicity(nu) as usize;
        assert_eq!(chosen.len(), expected, "weight space {nu} has the wrong dimension");
        let start = weights.len();
        let idx: Vec<usize> = (start..start + chosen.len()).collect();
        for (k, &c) in chosen.iter().enumerate() {
            weights.push(nu.clone());
            let sig = &cands[c].2;
            for (j, ej) in e.iter_mut().enumerate() {
                let Some(target) = slots.get(&nu.add(&simple[j])) else { continue };
                for &t in target {
                    ej.set(t, idx[k], sig[t].clone());
                }
            }
        }
        // Express every candidate in the chosen basis to fill in f_i.
        let basis_cols: Vec<Vec<Rational>> = chosen.iter().map(|&c| cands[c].2.clone()).collect();
        let m = RatMatrix::from_columns(dim, &basis_cols).expect("uniform length");
        for (i, b, sig) in &cands {
            let x = linalg::solve(&m, sig).expect("shape").expect("candidate lies in the span");
            for (k, v) in x.into_iter().enumerate() {
                f[*i].set(idx[k], *b, v);
            }
        }
        slots.insert(nu.clone(), idx);
    }
    assert_eq!(weights.len(), dim);
    let h = (0..r)
        .map(|i| {
            let mut m = RatMatrix::zeros(dim, dim);
            for (k, w) in weights.iter().enumerate() {
                m.set(k, k, rat(w.0[i]));
            }
            m
        })
        .collect();
    Ok(RepMatrices { highest_weight: lam.clone(), dimension: dim, weights, e, f, h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::parse_factors;

    fn rs(s: &str) -> RootSystem {
        RootSystem::build(&parse_factors(s).unwrap()).unwrap()
    }

    fn w(xs: &[i64]) -> Weight {
        Weight(xs.to_vec())
    }

    fn comps(list: &[(&[i64], u64)]) -> Vec<IrrComponent> {
        let mut v: Vec<_> = list
            .iter()
            .map(|(hw, m)| IrrComponent { highest_weight: w(hw), multiplicity: *m })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn sl2_string() {
        let ws = weight_multiplicities(&rs("A1"), &w(&[3])).unwrap();
        let expect: BTreeMap<Weight, u64> =
            [3, 1, -1, -3].iter().map(|&x| (w(&[x]), 1)).collect();
        assert_eq!(ws.entries, expect);
    }

    #[test]
    fn trivial_weight_system() {
        let ws = weight_multiplicities(&rs("B3"), &w(&[0, 0, 0])).unwrap();
        assert_eq!(ws.entries.len(), 1);
        assert_eq!(ws.multiplicity(&w(&[0, 0, 0])), 1);
    }

    #[test]
    fn a2_adjoint_weights() {
        let ws = weight_multiplicities(&rs("A2"), &w(&[1, 1])).unwrap();
        assert_eq!(ws.multiplicity(&w(&[0, 0])), 2);
        assert_eq!(ws.entries.len(), 7);
        assert_eq!(ws.entries.values().filter(|&&m| m == 1).count(), 6);
        assert_eq!(ws.total(), 8);
    }

    #[test]
    fn clebsch_gordan() {
        let a1 = rs("A1");
        assert_eq!(tensor_decompose(&a1, &w(&[1]), &w(&[1])).unwrap(), comps(&[(&[0], 1), (&[2], 1)]));
        assert_eq!(tensor_decompose(&a1, &w(&[5]), &w(&[0])).unwrap(), comps(&[(&[5], 1)]));
    }

    #[test]
    fn a2_adjoint_square() {
        let got = tensor_decompose(&rs("A2"), &w(&[1, 1]), &w(&[1, 1])).unwrap();
        let want = comps(&[(&[2, 2], 1), (&[3, 0], 1), (&[0, 3], 1), (&[1, 1], 2), (&[0, 0], 1)]);
        assert_eq!(got, want);
    }

    #[test]
    fn gperp_examples() {
        assert!(gperp_decompose(&rs("A1"), &w(&[1])).unwrap().is_empty());
        assert_eq!(gperp_decompose(&rs("A1"), &w(&[2])).unwrap(), comps(&[(&[4], 1)]));
        let a2 = gperp_decompose(&rs("A2"), &w(&[1, 1])).unwrap();
        assert_eq!(a2, comps(&[(&[2, 2], 1), (&[3, 0], 1), (&[0, 3], 1), (&[1, 1], 1)]));
        assert_eq!(gperp_decompose(&rs("A1xA1"), &w(&[1, 1])).unwrap(), comps(&[(&[2, 2], 1)]));
    }

    #[test]
    fn gperp_rejects_degenerate_weights() {
        assert_eq!(gperp_decompose(&rs("A2"), &w(&[0, 0])), Err(RepError::TooSmall));
        assert_eq!(
            gperp_decompose(&rs("A1xA1"), &w(&[1, 0])),
            Err(RepError::AdjointMissing { factor: 1 })
        );
    }

    #[test]
    fn sl2_defining_matrices() {
        let rep = construct_rep(&rs("A1"), &w(&[1]), 30).unwrap();
        assert_eq!(rep.e[0], RatMatrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]));
        assert_eq!(rep.f[0], RatMatrix::from_i64_rows(&[vec![0, 0], vec![1, 0]]));
        assert_eq!(rep.h[0], RatMatrix::from_i64_rows(&[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn sl2_three_dim_ladder() {
        let rep = construct_rep(&rs("A1"), &w(&[2]), 30).unwrap();
        assert_eq!(rep.f[0], RatMatrix::from_i64_rows(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]));
        assert_eq!(rep.e[0], RatMatrix::from_i64_rows(&[vec![0, 2, 0], vec![0, 0, 2], vec![0, 0, 0]]));
        assert!(rep.check_relations(&rs("A1")));
    }

    #[test]
    fn sl3_defining_matrices() {
        let a2 = rs("A2");
        let rep = construct_rep(&a2, &w(&[1, 0]), 30).unwrap();
        let unit = |r: usize, c: usize| {
            let mut m = RatMatrix::zeros(3, 3);
            m.set(r, c, rat(1));
            m
        };
        assert_eq!(rep.e[0], unit(0, 1));
        assert_eq!(rep.e[1], unit(1, 2));
        assert!(rep.check_relations(&a2));
    }

    #[test]
    fn relations_hold_beyond_sl2() {
        for (t, hw) in [("A2", vec![1, 1]), ("B2", vec![1, 0]), ("B2", vec![0, 1]), ("G2", vec![1, 0]), ("A1xA2", vec![1, 0, 1])] {
            let r = rs(t);
            let rep = construct_rep(&r, &w(&hw), 30).unwrap();
            assert!(rep.check_relations(&r), "{t} {hw:?}");
        }
    }

    #[test]
    fn oracle_bound_enforced() {
        let err = construct_rep(&rs("A2"), &w(&[2, 2]), 26).unwrap_err();
        assert!(matches!(err, RepError::OracleBound { bound: 26, .. }));
    }
}
