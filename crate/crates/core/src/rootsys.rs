//! Root systems of semisimple Lie algebras in Bourbaki numbering.
//!
//! Node numbering (all tables, CLI input and output use it):
//!
//! | type | diagram                                        |
//! |------|------------------------------------------------|
//! | A_n  | 1 - 2 - ... - n                                |
//! | B_n  | 1 - 2 - ... - (n-1) => n       (α_n short)     |
//! | C_n  | 1 - 2 - ... - (n-1) <= n       (α_n long)      |
//! | D_n  | 1 - ... - (n-2) - (n-1), (n-2) - n             |
//! | E_n  | 1 - 3 - 4 - 5 - ... - n, with 2 attached to 4  |
//! | F_4  | 1 - 2 => 3 - 4                 (α_3, α_4 short)|
//! | G_2  | 1 <= 2                         (α_1 short)     |
//!
//! The Cartan matrix is stored as `a[i][j] = ⟨α_i^∨, α_j⟩`, so that
//! `[h_i, e_j] = a[i][j] e_j` and column `j` holds the simple root `α_j` in
//! fundamental-weight coordinates. Weights are always kept in the
//! fundamental-weight basis; simple-root coordinates are obtained through the
//! inverse Cartan matrix when needed. Products of simple factors are block
//! diagonal, in the order given, with global node indices running through the
//! factors consecutively.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, ratio, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("invalid simple factor {0}")]
    InvalidFactor(String),
    #[error("weight has {found} coordinates, rank is {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("simple root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SimpleFactor {
    pub family: Family,
    pub rank: usize,
}

impl SimpleFactor {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        let f = SimpleFactor { family, rank };
        if ok {
            Ok(f)
        } else {
            Err(RootSystemError::InvalidFactor(f.to_string()))
        }
    }

    /// Number of positive roots from the classification.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    pub fn dimension(&self) -> usize {
        2 * self.positive_root_count() + self.rank
    }

    /// Permutation of nodes induced by `-w_0` (0-based).
    fn duality_involution(&self) -> Vec<usize> {
        let n = self.rank;
        let id: Vec<usize> = (0..n).collect();
        match self.family {
            Family::A => (0..n).rev().collect(),
            Family::D if n % 2 == 1 => {
                let mut p = id;
                p.swap(n - 2, n - 1);
                p
            }
            Family::E if n == 6 => vec![5, 1, 4, 3, 2, 0],
            _ => id,
        }
    }

    /// Symmetric Gram matrix of the simple roots, long roots of squared length 2.
    fn gram(&self) -> Vec<Vec<Rational>> {
        let n = self.rank;
        let mut g = vec![vec![Rational::zero(); n]; n];
        let link = |g: &mut Vec<Vec<Rational>>, i: usize, j: usize, v: Rational| {
            g[i][j] = v.clone();
            g[j][i] = v;
        };
        match self.family {
            Family::A | Family::D | Family::E => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = rat(2);
                }
                let edges: Vec<(usize, usize)> = match self.family {
                    Family::A => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
                    Family::D => {
                        let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                        e.push((n - 3, n - 1));
                        e
                    }
                    _ => {
                        let mut e = vec![(0, 2), (2, 3), (1, 3)];
                        e.extend((3..n - 1).map(|i| (i, i + 1)));
                        e
                    }
                };
                for (i, j) in edges {
                    link(&mut g, i, j, rat(-1));
                }
            }
            Family::B => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = if i + 1 < n { rat(2) } else { rat(1) };
                }
                for i in 0..n - 1 {
                    link(&mut g, i, i + 1, rat(-1));
                }
            }
            Family::C => {
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = if i + 1 < n { rat(1) } else { rat(2) };
                }
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, ratio(-1, 2));
                }
                link(&mut g, n - 2, n - 1, rat(-1));
            }
            Family::F => {
                let d = [rat(2), rat(2), rat(1), rat(1)];
                for (i, x) in d.into_iter().enumerate() {
                    g[i][i] = x;
                }
                link(&mut g, 0, 1, rat(-1));
                link(&mut g, 1, 2, rat(-1));
                link(&mut g, 2, 3, ratio(-1, 2));
            }
            Family::G => {
                g[0][0] = ratio(2, 3);
                g[1][1] = rat(2);
                link(&mut g, 0, 1, rat(-1));
            }
        }
        g
    }
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for SimpleFactor {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootSystemError::InvalidFactor(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        SimpleFactor::new(family, rank).map_err(|_| bad())
    }
}

impl Serialize for SimpleFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SimpleFactor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `"A1xA1"`, `"A1×A1"` or `"A1,A1"` into a list of factors.
pub fn parse_factors(s: &str) -> Result<Vec<SimpleFactor>, RootSystemError> {
    s.split(['x', '×', ',', '*'])
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(RootSystemError::InvalidFactor(s.to_string()))
            } else {
                Ok(v)
            }
        })
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Parses comma separated integers, e.g. `"0,1,0"`.
pub fn parse_weight(s: &str) -> Result<Weight, std::num::ParseIntError> {
    s.split(',').map(|p| p.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>().map(Weight)
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    factors: Vec<SimpleFactor>,
    offsets: Vec<usize>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    cartan_matrix: RatMatrix,
    inverse_cartan: RatMatrix,
    /// `(α_i, α_i) / 2`, long roots normalized to 1.
    half_norms: Vec<Rational>,
    positive_roots: Vec<Vec<i64>>,
    /// Coroot `α^∨` in simple-coroot coordinates, parallel to `positive_roots`.
    positive_coroots: Vec<Vec<i64>>,
    root_factor: Vec<usize>,
    root_index: BTreeMap<Vec<i64>, usize>,
    highest_roots: Vec<Vec<i64>>,
}

impl RootSystem {
    pub fn build(factors: &[SimpleFactor]) -> Result<Self, RootSystemError> {
        if factors.is_empty() {
            return Err(RootSystemError::InvalidFactor("empty product".into()));
        }
        for f in factors {
            SimpleFactor::new(f.family, f.rank)?;
        }
        let rank: usize = factors.iter().map(|f| f.rank).sum();
        let mut offsets = Vec::with_capacity(factors.len());
        let mut gram = vec![vec![Rational::zero(); rank]; rank];
        let mut off = 0;
        for f in factors {
            offsets.push(off);
            for (i, row) in f.gram().into_iter().enumerate() {
                for (j, x) in row.into_iter().enumerate() {
                    gram[off + i][off + j] = x;
                }
            }
            off += f.rank;
        }
        let half_norms: Vec<Rational> = (0..rank).map(|i| &gram[i][i] / rat(2)).collect();
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let a = &gram[i][j] / &half_norms[i];
                assert!(a.is_integer(), "non-integral Cartan entry");
                cartan[i][j] = i64::try_from(a.to_integer()).expect("small Cartan entry");
            }
        }
        let cartan_matrix = RatMatrix::from_i64_rows(&cartan);
        let inverse_cartan = cartan_matrix.inverse().expect("Cartan matrices are invertible");

        let mut rs = RootSystem {
            factors: factors.to_vec(),
            offsets,
            rank,
            cartan,
            cartan_matrix,
            inverse_cartan,
            half_norms,
            positive_roots: Vec::new(),
            positive_coroots: Vec::new(),
            root_factor: Vec::new(),
            root_index: BTreeMap::new(),
            highest_roots: Vec::new(),
        };
        rs.enumerate_roots();
        Ok(rs)
    }

    /// Closure of the simple roots under `β ↦ β + α_i` using root strings.
    fn enumerate_roots(&mut self) {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut known: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        let mut layer: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        while !layer.is_empty() {
            for r in &layer {
                known.insert(r.clone(), roots.len());
                roots.push(r.clone());
            }
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    let mut is_simple_i = beta[i] == 1;
                    for (j, &c) in beta.iter().enumerate() {
                        if j != i && c != 0 {
                            is_simple_i = false;
                        }
                    }
                    if is_simple_i {
                        continue;
                    }
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..n).map(|j| self.cartan[i][j] * beta[j]).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            next.sort();
            layer = next;
        }
        self.positive_coroots = roots.iter().map(|r| self.coroot_of(r)).collect();
        self.root_factor = roots
            .iter()
            .map(|r| {
                let first = r.iter().position(|&c| c != 0).expect("nonzero root");
                self.factor_of_node(first)
            })
            .collect();
        self.highest_roots = (0..self.factors.len())
            .map(|s| {
                roots
                    .iter()
                    .zip(&self.root_factor)
                    .filter(|(_, &f)| f == s)
                    .map(|(r, _)| r)
                    .max_by_key(|r| r.iter().sum::<i64>())
                    .expect("factor has roots")
                    .clone()
            })
            .collect();
        self.root_index = known;
        self.positive_roots = roots;
    }

    fn coroot_of(&self, root: &[i64]) -> Vec<i64> {
        let weight = self.root_to_weight(root);
        let norm = self.inner_root_weight(root, &weight);
        let half = norm / rat(2);
        (0..self.rank)
            .map(|k| {
                let c = rat(root[k]) * &self.half_norms[k] / &half;
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).expect("small coroot coefficient")
            })
            .collect()
    }

    pub fn factors(&self) -> &[SimpleFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// First global (0-based) node of each factor.
    pub fn factor_offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn factor_of_node(&self, node: usize) -> usize {
        self.offsets.iter().rposition(|&o| o <= node).expect("node in range")
    }

    pub fn factor_nodes(&self, factor: usize) -> std::ops::Range<usize> {
        let o = self.offsets[factor];
        o..o + self.factors[factor].rank
    }

    pub fn cartan(&self) -> &RatMatrix {
        &self.cartan_matrix
    }

    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn inverse_cartan(&self) -> &RatMatrix {
        &self.inverse_cartan
    }

    /// Positive roots in simple-root coordinates, ordered by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn root_factor(&self, root: usize) -> usize {
        self.root_factor[root]
    }

    pub fn root_position(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn highest_root(&self, factor: usize) -> &[i64] {
        &self.highest_roots[factor]
    }

    /// Highest root of a factor as a weight (the adjoint highest weight).
    pub fn highest_root_weight(&self, factor: usize) -> Weight {
        Weight(self.root_to_weight(&self.highest_roots[factor]))
    }

    pub fn dimension(&self) -> usize {
        2 * self.positive_roots.len() + self.rank
    }

    pub fn weyl_vector(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Simple root `α_i` (0-based) in fundamental-weight coordinates.
    pub fn simple_root_weight(&self, i: usize) -> Weight {
        Weight((0..self.rank).map(|k| self.cartan[k][i]).collect())
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, root: &[i64]) -> Vec<i64> {
        (0..self.rank).map(|k| (0..self.rank).map(|j| self.cartan[k][j] * root[j]).sum()).collect()
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn weight_to_root_coords(&self, w: &[i64]) -> Vec<Rational> {
        let v: Vec<Rational> = w.iter().map(|&x| rat(x)).collect();
        self.inverse_cartan.mul_vec(&v).expect("rank-length weight")
    }

    fn inner_root_weight(&self, root: &[i64], w: &[i64]) -> Rational {
        (0..self.rank)
            .filter(|&k| root[k] != 0 && w[k] != 0)
            .fold(Rational::zero(), |acc, k| acc + rat(root[k] * w[k]) * &self.half_norms[k])
    }

    /// Invariant form with `(θ, θ) = 2` for the highest root of every factor.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rational {
        let c = self.weight_to_root_coords(a);
        (0..self.rank)
            .filter(|&k| b[k] != 0)
            .fold(Rational::zero(), |acc, k| acc + &c[k] * &self.half_norms[k] * rat(b[k]))
    }

    /// `⟨μ, α^∨⟩` for the positive root with the given index.
    pub fn coroot_pairing(&self, mu: &[i64], root: usize) -> i64 {
        self.positive_coroots[root].iter().zip(mu).map(|(a, b)| a * b).sum()
    }

    pub fn check_weight(&self, w: &Weight) -> Result<(), RootSystemError> {
        if w.len() != self.rank {
            return Err(RootSystemError::WeightLength { expected: self.rank, found: w.len() });
        }
        Ok(())
    }

    fn check_dominant(&self, w: &Weight) -> Result<(), RootSystemError> {
        self.check_weight(w)?;
        if !w.is_dominant() {
            return Err(RootSystemError::NotDominant(w.clone()));
        }
        Ok(())
    }

    /// Weyl dimension formula `∏ ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
    pub fn weyl_dim(&self, lam: &Weight) -> Result<BigInt, RootSystemError> {
        self.check_dominant(lam)?;
        Ok(self.weyl_dim_over(lam, |_| true))
    }

    /// Weyl dimension formula restricted to the roots accepted by `keep`;
    /// used for Levi subalgebras.
    pub(crate) fn weyl_dim_over(&self, lam: &Weight, keep: impl Fn(usize) -> bool) -> BigInt {
        let shifted = lam.add(&self.weyl_vector());
        let rho = self.weyl_vector();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for r in (0..self.positive_roots.len()).filter(|&r| keep(r)) {
            num *= BigInt::from(self.coroot_pairing(&shifted.0, r));
            den *= BigInt::from(self.coroot_pairing(&rho.0, r));
        }
        let q = Rational::new(num, den);
        assert!(q.is_integer(), "Weyl dimension must be integral");
        q.to_integer()
    }

    /// `⟨λ, λ + 2ρ⟩` with `(θ, θ) = 2`.
    pub fn casimir(&self, lam: &Weight) -> Result<Rational, RootSystemError> {
        self.check_weight(lam)?;
        let shifted = lam.add(&self.weyl_vector().scale(2));
        Ok(self.inner(&lam.0, &shifted.0))
    }

    /// Linear reflection `s_i(μ) = μ - ⟨μ, α_i^∨⟩ α_i` (0-based index).
    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        let c = mu.0[i];
        Weight((0..self.rank).map(|k| mu.0[k] - c * self.cartan[k][i]).collect())
    }

    /// Dot action `σ_i · μ = σ_i(μ + ρ) - ρ` for a 1-based node index.
    pub fn affine_action(&self, index: usize, mu: &Weight) -> Result<Weight, RootSystemError> {
        self.check_weight(mu)?;
        if index == 0 || index > self.rank {
            return Err(RootSystemError::IndexOutOfRange { index, rank: self.rank });
        }
        let i = index - 1;
        let c = mu.0[i] + 1;
        Ok(Weight((0..self.rank).map(|k| mu.0[k] - c * self.cartan[k][i]).collect()))
    }

    /// Dominant Weyl conjugate and the parity of the number of reflections used.
    pub fn dominant_conjugate(&self, mu: &Weight) -> (Weight, bool) {
        let mut w = mu.clone();
        let mut odd = false;
        while let Some(i) = w.0.iter().position(|&x| x < 0) {
            w = self.reflect(i, &w);
            odd = !odd;
        }
        (w, odd)
    }

    /// Highest weight of the dual module, `-w_0 λ`.
    pub fn dual_weight(&self, lam: &Weight) -> Weight {
        let mut out = vec![0; self.rank];
        for (s, f) in self.factors.iter().enumerate() {
            let off = self.offsets[s];
            for (i, j) in f.duality_involution().into_iter().enumerate() {
                out[off + j] = lam.0[off + i];
            }
        }
        Weight(out)
    }

    /// `λ - μ` as a nonnegative integer combination of simple roots.
    pub fn dominates(&self, lam: &Weight, mu: &Weight) -> bool {
        self.weight_to_root_coords(&lam.sub(mu).0).iter().all(crate::linalg::is_nonnegative_integer)
    }

    /// Height of `λ - μ` in simple-root coordinates.
    pub fn depth_below(&self, lam: &Weight, mu: &Weight) -> Rational {
        self.weight_to_root_coords(&lam.sub(mu).0).into_iter().sum()
    }
}
