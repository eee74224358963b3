//! Tableaux of linear Pfaffian systems.
//!
//! A tableau is a subspace `A ⊂ W⊗V*`, stored as a basis of `dim W × dim V`
//! matrices (an element is a linear map `V → W`). Tensors in `W⊗V*⊗V*` are
//! flattened with index `(w·n + i)·n + j`; an element `a ⊗ e^j` of `A⊗V*`
//! places `a[w][i]` at slot `(w, i, j)`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    format_rational, independent_subset, intersect, parse_rational, kernel_basis, rank, rat, span_dim, RatMatrix, Rational, RowEchelon,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("basis[{index}]: expected {expected} entries, found {found}")]
    EntryCount { index: usize, expected: usize, found: usize },
    #[error("basis[{index}]: {message}")]
    BadEntry { index: usize, message: String },
    #[error("basis is linearly dependent")]
    Dependent,
    #[error("bracket image vector {index} does not lie in A⊗V*")]
    OutsideAV { index: usize },
    #[error("bracket image vector {index} has length {found}, expected {expected}")]
    ImageLength { index: usize, expected: usize, found: usize },
    #[error("second fundamental form: {0}")]
    SecondFormShape(String),
}

/// `A ⊂ W⊗V*` given by independent `dim_W × dim_V` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    dim_v: usize,
    dim_w: usize,
    basis: Vec<RatMatrix>,
}

impl Tableau {
    pub fn new(dim_v: usize, dim_w: usize, basis: Vec<RatMatrix>) -> Result<Self, TableauError> {
        for (index, b) in basis.iter().enumerate() {
            if b.rows() != dim_w || b.cols() != dim_v {
                return Err(TableauError::EntryCount {
                    index,
                    expected: dim_w * dim_v,
                    found: b.rows() * b.cols(),
                });
            }
        }
        let flat: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
        if span_dim(dim_v * dim_w, &flat).expect("shapes checked") != basis.len() {
            return Err(TableauError::Dependent);
        }
        Ok(Tableau { dim_v, dim_w, basis })
    }

    /// Keeps an independent subset of `candidates`.
    pub fn spanned_by(dim_v: usize, dim_w: usize, candidates: &[RatMatrix]) -> Self {
        let flat: Vec<Vec<Rational>> = candidates.iter().map(|b| b.entries().to_vec()).collect();
        let keep = independent_subset(dim_v * dim_w, &flat).expect("uniform shapes");
        let basis = keep.into_iter().map(|i| candidates[i].clone()).collect();
        Tableau { dim_v, dim_w, basis }
    }

    pub fn zero(dim_v: usize, dim_w: usize) -> Self {
        Tableau { dim_v, dim_w, basis: Vec::new() }
    }

    pub fn full(dim_v: usize, dim_w: usize) -> Self {
        let basis = (0..dim_w)
            .flat_map(|w| {
                (0..dim_v).map(move |i| {
                    let mut m = RatMatrix::zeros(dim_w, dim_v);
                    m.set(w, i, Rational::one());
                    m
                })
            })
            .collect();
        Tableau { dim_v, dim_w, basis }
    }

    /// `{[[a, b], [-b, a]]}`, the symbol of the Cauchy–Riemann equations.
    pub fn cauchy_riemann() -> Self {
        let a = RatMatrix::from_i64_rows(&[vec![1, 0], vec![0, 1]]);
        let b = RatMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]);
        Tableau { dim_v: 2, dim_w: 2, basis: vec![a, b] }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    fn tensor_len(&self) -> usize {
        self.dim_w * self.dim_v * self.dim_v
    }

    /// Spanning set of `A⊗V*` inside the flattened `W⊗V*⊗V*`.
    fn a_tensor_v(&self) -> Vec<Vec<Rational>> {
        let n = self.dim_v;
        let mut out = Vec::with_capacity(self.dim() * n);
        for b in &self.basis {
            for j in 0..n {
                let mut v = vec![Rational::zero(); self.tensor_len()];
                for w in 0..self.dim_w {
                    for i in 0..n {
                        v[(w * n + i) * n + j] = b.get(w, i).clone();
                    }
                }
                out.push(v);
            }
        }
        out
    }

    /// Basis of `W⊗S²V*` inside the flattened `W⊗V*⊗V*`.
    fn symmetric_tensors(&self) -> Vec<Vec<Rational>> {
        let n = self.dim_v;
        let mut out = Vec::new();
        for w in 0..self.dim_w {
            for i in 0..n {
                for j in i..n {
                    let mut v = vec![Rational::zero(); self.tensor_len()];
                    v[(w * n + i) * n + j] = Rational::one();
                    v[(w * n + j) * n + i] = Rational::one();
                    out.push(v);
                }
            }
        }
        out
    }

    /// Rank of `δ: A⊗V* → W⊗Λ²V*`, from the skew parts directly.
    pub fn delta_rank(&self) -> usize {
        let n = self.dim_v;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let width = self.dim_w * pairs.len();
        if width == 0 {
            return 0;
        }
        let images: Vec<Vec<Rational>> = self
            .a_tensor_v()
            .iter()
            .map(|t| {
                let mut v = Vec::with_capacity(width);
                for w in 0..self.dim_w {
                    for &(i, j) in &pairs {
                        v.push(&t[(w * n + i) * n + j] - &t[(w * n + j) * n + i]);
                    }
                }
                v
            })
            .collect();
        span_dim(width, &images).expect("uniform lengths")
    }

    fn from_json_raw(raw: TableauJson) -> Result<Self, TableauError> {
        let mut basis = Vec::with_capacity(raw.basis.len());
        for (index, entries) in raw.basis.iter().enumerate() {
            let expected = raw.dim_v * raw.dim_w;
            if entries.len() != expected {
                return Err(TableauError::EntryCount { index, expected, found: entries.len() });
            }
            let data = entries
                .iter()
                .map(|s| parse_rational(s).map_err(|e| TableauError::BadEntry { index, message: e.to_string() }))
                .collect::<Result<Vec<_>, _>>()?;
            basis.push(RatMatrix::from_vec(raw.dim_w, raw.dim_v, data).expect("length checked"));
        }
        Tableau::new(raw.dim_v, raw.dim_w, basis)
    }
}

#[derive(Serialize, Deserialize)]
struct TableauJson {
    #[serde(rename = "dim_V")]
    dim_v: usize,
    #[serde(rename = "dim_W")]
    dim_w: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableauJson {
            dim_v: self.dim_v,
            dim_w: self.dim_w,
            basis: self.basis.iter().map(|b| b.entries().iter().map(format_rational).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Tableau::from_json_raw(TableauJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A `W`-valued symmetric bilinear form on `V`, one `n × n` matrix per `W` coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm(pub Vec<RatMatrix>);

/// Basis of `A⁽¹⁾ = (A⊗V*) ∩ (W⊗S²V*)`.
pub fn prolong(t: &Tableau) -> Vec<SymmetricForm> {
    let (n, wd) = (t.dim_v, t.dim_w);
    // functionals on W⊗V* vanishing on A
    let flat: Vec<Vec<Rational>> = t.basis.iter().map(|b| b.entries().to_vec()).collect();
    let annihilator = kernel_basis(&RatMatrix::from_rows(wd * n, &flat).expect("uniform lengths"));
    let sym = t.symmetric_tensors();
    if annihilator.is_empty() {
        return sym.iter().map(|v| unflatten(v, n, wd)).collect();
    }
    // each symmetric generator, sliced along the last V* slot, must land in A
    let mut rows = vec![vec![Rational::zero(); sym.len()]; annihilator.len() * n];
    for (c, s) in sym.iter().enumerate() {
        for j in 0..n {
            for (r, phi) in annihilator.iter().enumerate() {
                let mut acc = Rational::zero();
                for w in 0..wd {
                    for i in 0..n {
                        let x = &s[(w * n + i) * n + j];
                        if !x.is_zero() {
                            acc += x * &phi[w * n + i];
                        }
                    }
                }
                rows[r * n + j][c] = acc;
            }
        }
    }
    let m = RatMatrix::from_rows(sym.len(), &rows).expect("uniform lengths");
    kernel_basis(&m)
        .into_iter()
        .map(|coeffs| {
            let mut v = vec![Rational::zero(); t.tensor_len()];
            for (c, s) in coeffs.iter().zip(&sym) {
                if !c.is_zero() {
                    for (x, y) in v.iter_mut().zip(s) {
                        *x += c * y;
                    }
                }
            }
            unflatten(&v, n, wd)
        })
        .collect()
}

fn unflatten(v: &[Rational], n: usize, wd: usize) -> SymmetricForm {
    SymmetricForm((0..wd).map(|w| RatMatrix::from_vec(n, n, v[w * n * n..(w + 1) * n * n].to_vec()).expect("n×n")).collect())
}

fn flatten_form(f: &SymmetricForm) -> Vec<Rational> {
    f.0.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

/// `dim A_j` for `j = 0..=n` along the flag whose `j`-th space annihilates
/// `u_1, ..., u_j` (columns of `flag`). Stops early, returning a partial
/// sequence, once it is lexicographically worse than `cutoff`.
fn flag_dims(t: &Tableau, flag: &RatMatrix, cutoff: Option<&[usize]>) -> Vec<usize> {
    let k = t.dim();
    let mut out = vec![k];
    let mut echelon = RowEchelon::new();
    for j in 0..t.dim_v {
        let u = flag.column(j);
        let images: Vec<Vec<Rational>> = t.basis.iter().map(|b| b.mul_vec(&u).expect("dim V")).collect();
        for w in 0..t.dim_w {
            echelon.insert(images.iter().map(|img| img[w].clone()).collect());
        }
        out.push(k - echelon.rank());
        if let Some(best) = cutoff {
            match out.as_slice().cmp(&best[..out.len()]) {
                std::cmp::Ordering::Greater => return out,
                std::cmp::Ordering::Less => return complete(t, flag, out, echelon),
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    out
}

fn complete(t: &Tableau, flag: &RatMatrix, mut out: Vec<usize>, mut echelon: RowEchelon) -> Vec<usize> {
    let k = t.dim();
    for j in out.len() - 1..t.dim_v {
        let u = flag.column(j);
        let images: Vec<Vec<Rational>> = t.basis.iter().map(|b| b.mul_vec(&u).expect("dim V")).collect();
        for w in 0..t.dim_w {
            echelon.insert(images.iter().map(|img| img[w].clone()).collect());
        }
        out.push(k - echelon.rank());
    }
    out
}

const COORDINATE_FLAG_BUDGET: usize = 720;
const RANDOM_FLAGS: usize = 16;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `dim A_j`, `j = 0..n-1`, for the flag minimizing them lexicographically
/// among coordinate flags and seeded random rational flags.
pub fn cartan_characters(t: &Tableau, seed: u64) -> Vec<usize> {
    let n = t.dim_v;
    let mut flags = Vec::new();
    for p in permutations(n).into_iter().take(COORDINATE_FLAG_BUDGET) {
        let mut m = RatMatrix::zeros(n, n);
        for (col, &row) in p.iter().enumerate() {
            m.set(row, col, Rational::one());
        }
        flags.push(m);
    }
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = flags.len() + RANDOM_FLAGS;
    while flags.len() < target {
        let data: Vec<Rational> = (0..n * n).map(|_| rat(rng.gen_range(-4..=4))).collect();
        let m = RatMatrix::from_vec(n, n, data).expect("n×n");
        if rank(&m) == n {
            flags.push(m);
        }
    }
    let mut best = flag_dims(t, &flags[0], None);
    for f in &flags[1..] {
        let dims = flag_dims(t, f, Some(&best));
        if dims.len() == best.len() && dims < best {
            best = dims;
        }
    }
    best.truncate(n);
    best
}

/// Outcome of Cartan's test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutivityReport {
    pub dim_a: usize,
    /// `dim A_j` for `j = 0..n-1`.
    pub characters: Vec<usize>,
    pub dim_prolongation: usize,
    pub bound: usize,
    pub involutive: bool,
    /// First `r` with `A_r = 0`; absent for the zero tableau.
    pub character_of_generality: Option<usize>,
}

pub fn is_involutive(t: &Tableau, seed: u64) -> InvolutivityReport {
    let characters = cartan_characters(t, seed);
    let dim_prolongation = prolong(t).len();
    let bound: usize = characters.iter().sum();
    let character_of_generality = if t.dim() == 0 {
        None
    } else {
        Some(characters.iter().position(|&d| d == 0).unwrap_or(t.dim_v))
    };
    InvolutivityReport {
        dim_a: t.dim(),
        characters,
        dim_prolongation,
        bound,
        involutive: dim_prolongation == bound,
        character_of_generality,
    }
}

/// `dim W⊗Λ²V* / δ(A⊗V*)`.
pub fn torsion_quotient_dim(t: &Tableau) -> usize {
    t.dim_w * t.dim_v * t.dim_v.saturating_sub(1) / 2 - t.delta_rank()
}

/// Reduced prolongation `A⁽¹⁾ / (A⁽¹⁾ ∩ span(image))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedProlongation {
    pub dim: usize,
    /// Rank of the part of the image lying outside `A⁽¹⁾`.
    pub discarded_rank: usize,
}

/// `bracket_image` vectors are flattened elements of `W⊗V*⊗V*` lying in `A⊗V*`.
pub fn reduced_prolongation_dim(
    t: &Tableau,
    bracket_image: &[Vec<Rational>],
) -> Result<ReducedProlongation, TableauError> {
    let len = t.tensor_len();
    let av = t.a_tensor_v();
    let av_dim = span_dim(len, &av).expect("uniform");
    for (index, v) in bracket_image.iter().enumerate() {
        if v.len() != len {
            return Err(TableauError::ImageLength { index, expected: len, found: v.len() });
        }
        let mut with = av.clone();
        with.push(v.clone());
        if span_dim(len, &with).expect("uniform") != av_dim {
            return Err(TableauError::OutsideAV { index });
        }
    }
    let a1: Vec<Vec<Rational>> = prolong(t).iter().map(flatten_form).collect();
    let image_rank = span_dim(len, bracket_image).expect("uniform");
    let common = intersect(&a1, bracket_image).expect("uniform").len();
    Ok(ReducedProlongation { dim: a1.len() - common, discarded_rank: image_rank - common })
}

/// A second fundamental form `F₂ ∈ S²T*⊗N⊗L` with `dim L = 1`: one
/// symmetric `t × t` matrix per basis vector of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondForm {
    pub dim_t: usize,
    pub components: Vec<RatMatrix>,
}

impl SecondForm {
    pub fn new(dim_t: usize, components: Vec<RatMatrix>) -> Result<Self, TableauError> {
        for (k, m) in components.iter().enumerate() {
            if m.rows() != dim_t || m.cols() != dim_t {
                return Err(TableauError::SecondFormShape(format!(
                    "component {k} is {}×{}, expected {dim_t}×{dim_t}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m != &m.transpose() {
                return Err(TableauError::SecondFormShape(format!("component {k} is not symmetric")));
            }
        }
        Ok(SecondForm { dim_t, components })
    }

    pub fn dim_n(&self) -> usize {
        self.components.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerPair {
    pub dim_r: usize,
    pub block_dim: usize,
    /// Whether the trace form restricted to `r⊥` is nondegenerate, so that
    /// `r⊥` maps isomorphically onto the tableau.
    pub r_perp_nondegenerate: bool,
    pub tableau_r_perp: Tableau,
}

/// Block element `(c, M, P) ∈ gl(L)⊕gl(T)⊕gl(N)` from a flat coordinate vector.
fn split_block(x: &[Rational], t: usize, a: usize) -> (Rational, RatMatrix, RatMatrix) {
    let c = x[0].clone();
    let m = RatMatrix::from_vec(t, t, x[1..1 + t * t].to_vec()).expect("t×t");
    let p = RatMatrix::from_vec(a, a, x[1 + t * t..1 + t * t + a * a].to_vec()).expect("a×a");
    (c, m, p)
}

/// Leibniz action: `L` by `c`, `T*` by `-Mᵀ` on both slots, `N` by `P`.
fn act(f2: &SecondForm, c: &Rational, m: &RatMatrix, p: &RatMatrix) -> Vec<RatMatrix> {
    let mt = m.transpose();
    (0..f2.dim_n())
        .map(|nu| {
            let mut out = f2.components[nu].scale(c);
            for mu in 0..f2.dim_n() {
                let coef = p.get(nu, mu);
                if !coef.is_zero() {
                    out = out.add(&f2.components[mu].scale(coef)).expect("t×t");
                }
            }
            let f = &f2.components[nu];
            let left = mt.mul(f).expect("t×t");
            let right = f.mul(m).expect("t×t");
            out.sub(&left).expect("t×t").sub(&right).expect("t×t")
        })
        .collect()
}

fn unit(len: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[k] = Rational::one();
    v
}

/// Stabilizer `r` of `F₂` in `gl(L)⊕gl(T)⊕gl(N)` and the tableau `r⊥ · F₂`.
///
/// The tableau lives in `W⊗V*` with `V = L*⊗T` (dimension `t`) and
/// `W = (L*⊗N) ⊕ (T*⊗N)`; the `L*⊗N` rows are zero, and row `a + k·dim N + ν`
/// column `i` holds `(Y.F₂)_ν(e_i, e_k)`.
pub fn stabilizer_and_tableau(f2: &SecondForm) -> StabilizerPair {
    let t = f2.dim_t;
    let a = f2.dim_n();
    let block_dim = 1 + t * t + a * a;
    let images: Vec<Vec<RatMatrix>> = (0..block_dim)
        .map(|k| {
            let (c, m, p) = split_block(&unit(block_dim, k), t, a);
            act(f2, &c, &m, &p)
        })
        .collect();
    let action = RatMatrix::from_columns(
        a * t * t,
        &images.iter().map(|im| im.iter().flat_map(|x| x.entries().iter().cloned()).collect()).collect::<Vec<_>>(),
    )
    .unwrap_or_else(|_| RatMatrix::zeros(0, block_dim));
    let r = if a * t * t == 0 { (0..block_dim).map(|k| unit(block_dim, k)).collect() } else { kernel_basis(&action) };
    for x in &r {
        let (c, m, p) = split_block(x, t, a);
        assert!(act(f2, &c, &m, &p).iter().all(RatMatrix::is_zero), "stabilizer annihilates F₂");
    }

    // Trace form on block-diagonal elements is the Euclidean form on the
    // flat coordinates of (c, M, Pᵀ) against (c', Mᵀ', P'); symmetric gl
    // pairing tr(XY) = Σ X_ij Y_ji.
    let transpose_coords = |x: &[Rational]| -> Vec<Rational> {
        let (c, m, p) = split_block(x, t, a);
        let mut v = vec![c];
        v.extend(m.transpose().entries().iter().cloned());
        v.extend(p.transpose().entries().iter().cloned());
        v
    };
    let r_t: Vec<Vec<Rational>> = r.iter().map(|x| transpose_coords(x)).collect();
    let r_perp = if r_t.is_empty() {
        (0..block_dim).map(|k| unit(block_dim, k)).collect()
    } else {
        kernel_basis(&RatMatrix::from_rows(block_dim, &r_t).expect("width"))
    };
    let meet = intersect(&r, &r_perp).expect("uniform").len();

    let to_matrix = |forms: &[RatMatrix]| -> RatMatrix {
        let mut out = RatMatrix::zeros(a + t * a, t);
        for (nu, f) in forms.iter().enumerate() {
            for k in 0..t {
                for i in 0..t {
                    let v = f.get(i, k);
                    if !v.is_zero() {
                        out.set(a + k * a + nu, i, v.clone());
                    }
                }
            }
        }
        out
    };
    let candidates: Vec<RatMatrix> = if meet == 0 {
        r_perp
            .iter()
            .map(|y| {
                let (c, m, p) = split_block(y, t, a);
                to_matrix(&act(f2, &c, &m, &p))
            })
            .collect()
    } else {
        images.iter().map(|im| to_matrix(im)).collect()
    };
    let tableau = Tableau::spanned_by(t, a + t * a, &candidates);
    debug_assert_eq!(tableau.dim() + r.len(), block_dim);
    StabilizerPair { dim_r: r.len(), block_dim, r_perp_nondegenerate: meet == 0, tableau_r_perp: tableau }
}

/// Random tableau with small integer entries; the basis is thinned to an
/// independent subset, so `dim` may come out smaller than requested.
pub fn random_tableau<R: Rng>(rng: &mut R, dim_v: usize, dim_w: usize, dim: usize) -> Tableau {
    let mut candidates: Vec<RatMatrix> = (0..dim)
        .map(|_| {
            let data = (0..dim_v * dim_w).map(|_| rat(rng.gen_range(-2..=2))).collect();
            RatMatrix::from_vec(dim_w, dim_v, data).expect("shape")
        })
        .collect();
    candidates.shuffle(rng);
    Tableau::spanned_by(dim_v, dim_w, &candidates)
}
