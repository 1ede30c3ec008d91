//! Finite-type free graded modules, graded maps and chain complexes, with
//! homology computed from an elementary-complex decomposition.
//!
//! Every object carries a degree cutoff `N_max`. Boundaries into degree
//! `N_max` from degree `N_max + 1` are unknown, so homology and everything
//! built on it is only reported in the trust window `0..=N_max - 1`.

use std::collections::BTreeMap;
use std::fmt;

use log::warn;

use crate::matrix::{ExactMatrix, LinalgError};
use crate::scalar::{Fp, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("duplicate basis name {name:?} in degree {degree}")]
    DuplicateName { name: String, degree: usize },
    #[error("degree {degree} exceeds the cutoff N_max = {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("block at degree {degree} has shape {found:?}, expected {expected:?}")]
    BlockShape {
        degree: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("differential must have degree -1, got {0}")]
    NotADifferential(i64),
    #[error("d∘d is nonzero from degree {degree}")]
    SquareNonzero { degree: usize },
    #[error("degree {degree} is outside the trust window 0..={window} (boundaries from degree {above} are unknown)")]
    OutsideWindow {
        degree: usize,
        window: i64,
        above: usize,
    },
    #[error("source and target bases differ")]
    BasisMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Linear combination as text, e.g. `e*f^2 - 3*f`; zero prints as `0`.
pub fn format_vector<S: Scalar>(names: &[String], v: &[S]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Per-degree ordered lists of basis names, degrees `0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<Vec<String>>,
}

impl GradedBasis {
    pub fn new(max_degree: usize) -> Self {
        GradedBasis {
            names: vec![Vec::new(); max_degree + 1],
        }
    }

    pub fn from_elements<N: Into<String>>(
        max_degree: usize,
        elements: impl IntoIterator<Item = (N, usize)>,
    ) -> Result<Self, GradedError> {
        let mut b = Self::new(max_degree);
        for (name, deg) in elements {
            b.push(deg, name)?;
        }
        Ok(b)
    }

    /// Appends a basis element, returning its index within its degree.
    pub fn push(&mut self, degree: usize, name: impl Into<String>) -> Result<usize, GradedError> {
        let name = name.into();
        if degree > self.max_degree() {
            return Err(GradedError::DegreeTooLarge {
                degree,
                max: self.max_degree(),
            });
        }
        if self.names[degree].contains(&name) {
            return Err(GradedError::DuplicateName { name, degree });
        }
        self.names[degree].push(name);
        Ok(self.names[degree].len() - 1)
    }

    pub fn max_degree(&self) -> usize {
        self.names.len() - 1
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < 0 || degree as usize > self.max_degree() {
            0
        } else {
            self.names[degree as usize].len()
        }
    }

    pub fn names(&self, degree: usize) -> &[String] {
        self.names.get(degree).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn index_of(&self, degree: usize, name: &str) -> Option<usize> {
        self.names(degree).iter().position(|n| n == name)
    }

    pub fn total_dim(&self) -> usize {
        self.names.iter().map(|v| v.len()).sum()
    }

    pub fn hilbert_series(&self) -> Vec<usize> {
        self.names.iter().map(|v| v.len()).collect()
    }

    /// `(sM)_i = M_{i-1}`, names prefixed with `s`. Elements pushed past the
    /// cutoff are dropped with a warning.
    pub fn suspend(&self) -> GradedBasis {
        let (b, dropped) = self.suspend_checked();
        if !dropped.is_empty() {
            warn!(
                "suspension truncated {} element(s) past N_max = {}: {:?}",
                dropped.len(),
                self.max_degree(),
                dropped
            );
        }
        b
    }

    /// Suspension, also returning the names that fell off the top.
    pub fn suspend_checked(&self) -> (GradedBasis, Vec<String>) {
        let mut out = Self::new(self.max_degree());
        for (deg, names) in self.names.iter().enumerate() {
            for n in names {
                if deg < self.max_degree() {
                    out.names[deg + 1].push(format!("s{n}"));
                }
            }
        }
        let dropped = self.names[self.max_degree()]
            .iter()
            .map(|n| format!("s{n}"))
            .collect();
        (out, dropped)
    }

    /// Dual basis in upper degrees `M^k = Hom(M_k, R)`, names suffixed `*`.
    pub fn dual(&self) -> GradedBasis {
        GradedBasis {
            names: self
                .names
                .iter()
                .map(|v| v.iter().map(|n| format!("{n}*")).collect())
                .collect(),
        }
    }
}

/// Degree-`d` linear map given by one matrix per source degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap<S: Scalar> {
    source: GradedBasis,
    target: GradedBasis,
    degree: i64,
    p: u64,
    blocks: BTreeMap<usize, ExactMatrix<S>>,
}

impl<S: Scalar> fmt::Debug for GradedMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GradedMap of degree {}", self.degree)?;
        for (n, b) in &self.blocks {
            writeln!(f, "degree {n}: {b:?}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> GradedMap<S> {
    pub fn zero(source: GradedBasis, target: GradedBasis, degree: i64, p: u64) -> Self {
        GradedMap {
            source,
            target,
            degree,
            p,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(basis: &GradedBasis, p: u64) -> Self {
        let mut m = Self::zero(basis.clone(), basis.clone(), 0, p);
        for n in 0..=basis.max_degree() {
            let d = basis.dim(n as i64);
            if d > 0 {
                m.blocks.insert(n, ExactMatrix::identity(d, p));
            }
        }
        m
    }

    pub fn source(&self) -> &GradedBasis {
        &self.source
    }

    pub fn target(&self) -> &GradedBasis {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn shape(&self, n: usize) -> (usize, usize) {
        (
            self.target.dim(n as i64 + self.degree),
            self.source.dim(n as i64),
        )
    }

    /// Sets the block `source_n -> target_{n+d}`.
    pub fn set_block(&mut self, n: usize, m: ExactMatrix<S>) -> Result<(), GradedError> {
        let expected = self.shape(n);
        if (m.rows(), m.cols()) != expected {
            return Err(GradedError::BlockShape {
                degree: n,
                expected,
                found: (m.rows(), m.cols()),
            });
        }
        if m.is_zero() {
            self.blocks.remove(&n);
        } else {
            self.blocks.insert(n, m);
        }
        Ok(())
    }

    /// Block at source degree `n`; missing blocks are zero.
    pub fn block(&self, n: usize) -> ExactMatrix<S> {
        match self.blocks.get(&n) {
            Some(b) => b.clone(),
            None => {
                let (r, c) = self.shape(n);
                ExactMatrix::zeros(r, c, self.p)
            }
        }
    }

    pub fn block_ref(&self, n: usize) -> Option<&ExactMatrix<S>> {
        self.blocks.get(&n)
    }

    pub fn apply(&self, n: usize, v: &[S]) -> Result<Vec<S>, GradedError> {
        Ok(self.block(n).mul_vec(v)?)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap<S>) -> Result<GradedMap<S>, GradedError> {
        if other.target != self.source {
            return Err(GradedError::BasisMismatch);
        }
        let mut out = GradedMap::zero(
            other.source.clone(),
            self.target.clone(),
            self.degree + other.degree,
            self.p,
        );
        for n in 0..=other.source.max_degree() {
            let mid = n as i64 + other.degree;
            if mid < 0 || mid as usize > self.source.max_degree() {
                continue;
            }
            let prod = self.block(mid as usize).mul(&other.block(n))?;
            out.set_block(n, prod)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap<S>) -> Result<GradedMap<S>, GradedError> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree
        {
            return Err(GradedError::BasisMismatch);
        }
        let mut out = self.clone();
        for n in 0..=self.source.max_degree() {
            out.set_block(n, self.block(n).add(&other.block(n))?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> GradedMap<S> {
        let mut out = GradedMap::zero(
            self.source.clone(),
            self.target.clone(),
            self.degree,
            self.p,
        );
        for (n, b) in &self.blocks {
            out.set_block(*n, b.scale(c)).expect("same shape");
        }
        out
    }

    /// Dual map `f^♯: N^♯ -> M^♯`, `f^♯(φ) = φ∘f`, on the dual bases in upper
    /// degrees. A degree-`d` map becomes a degree `-d` map in upper grading;
    /// each block is the plain transpose.
    pub fn dualize(&self) -> GradedMap<S> {
        let mut out = GradedMap::zero(self.target.dual(), self.source.dual(), -self.degree, self.p);
        for (n, b) in &self.blocks {
            let k = *n as i64 + self.degree;
            if k >= 0 && k as usize <= self.target.max_degree() {
                out.set_block(k as usize, b.transpose())
                    .expect("transposed shape");
            }
        }
        out
    }

    pub fn to_fp(&self) -> GradedMap<Fp> {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            p: self.p,
            blocks: self
                .blocks
                .iter()
                .map(|(n, b)| (*n, b.to_fp()))
                .filter(|(_, b)| !b.is_zero())
                .collect(),
        }
    }
}

/// Basis of `(A ⊗ B)_n = ⊕_a A_a ⊗ B_{n-a}` for `n <= max_degree`, ordered by
/// `a`, then the `A` index, then the `B` index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorBasis {
    left: Vec<usize>,
    right: Vec<usize>,
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl TensorBasis {
    pub fn new(left: &GradedBasis, right: &GradedBasis, max_degree: usize) -> Self {
        let l: Vec<usize> = (0..=max_degree).map(|n| left.dim(n as i64)).collect();
        let r: Vec<usize> = (0..=max_degree).map(|n| right.dim(n as i64)).collect();
        let mut offsets = Vec::with_capacity(max_degree + 1);
        let mut dims = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let mut off = Vec::with_capacity(n + 2);
            let mut acc = 0;
            for a in 0..=n {
                off.push(acc);
                acc += l[a] * r[n - a];
            }
            off.push(acc);
            offsets.push(off);
            dims.push(acc);
        }
        TensorBasis {
            left: l,
            right: r,
            offsets,
            dims,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Position of `a_i ⊗ b_j` inside degree `a_deg + b_deg`.
    pub fn index(&self, a_deg: usize, i: usize, b_deg: usize, j: usize) -> usize {
        self.offsets[a_deg + b_deg][a_deg] + i * self.right[b_deg] + j
    }

    /// Index range of the `A_a ⊗ B_{n-a}` block.
    pub fn block(&self, n: usize, a_deg: usize) -> std::ops::Range<usize> {
        self.offsets[n][a_deg]..self.offsets[n][a_deg + 1]
    }

    /// All `(a_deg, i, b_deg, j)` in degree `n`, in basis order.
    pub fn entries(&self, n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.dim(n));
        for a in 0..=n {
            for i in 0..self.left[a] {
                for j in 0..self.right[n - a] {
                    out.push((a, i, n - a, j));
                }
            }
        }
        out
    }

    pub fn graded_basis(&self, left: &GradedBasis, right: &GradedBasis) -> GradedBasis {
        let mut b = GradedBasis::new(self.max_degree());
        for n in 0..=self.max_degree() {
            for (a, i, c, j) in self.entries(n) {
                b.push(n, format!("{}⊗{}", left.names(a)[i], right.names(c)[j]))
                    .expect("distinct pairs");
            }
        }
        b
    }

    /// `a ⊗ b` for homogeneous `a ∈ A_{a_deg}`, `b ∈ B_{b_deg}`.
    pub fn tensor<S: Scalar>(
        &self,
        a_deg: usize,
        a: &[S],
        b_deg: usize,
        b: &[S],
        p: u64,
    ) -> Vec<S> {
        let n = a_deg + b_deg;
        let mut out = vec![S::zero(p); self.dim(n)];
        let base = self.offsets[n][a_deg];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[base + i * self.right[b_deg] + j] = x.mul_ref(y);
                }
            }
        }
        out
    }

    /// The `A_a ⊗ B_{n-a}` part of `v` as a `dim A_a × dim B_{n-a}` matrix.
    pub fn block_matrix<S: Scalar>(
        &self,
        n: usize,
        a_deg: usize,
        v: &[S],
        p: u64,
    ) -> ExactMatrix<S> {
        let (r, c) = (self.left[a_deg], self.right[n - a_deg]);
        let base = self.offsets[n][a_deg];
        let mut m = ExactMatrix::zeros(r, c, p);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, v[base + i * c + j].clone());
            }
        }
        m
    }

    /// `(f ⊗ g)(v)` for `v` of degree `n`, with the Koszul sign
    /// `(f ⊗ g)(a ⊗ b) = (-1)^{|g||a|} f(a) ⊗ g(b)`. Components landing outside
    /// the target window are dropped.
    pub fn apply<S: Scalar>(
        &self,
        target: &TensorBasis,
        f: &GradedMap<S>,
        g: &GradedMap<S>,
        n: usize,
        v: &[S],
    ) -> Vec<S> {
        let p = f.prime();
        let m = n as i64 + f.degree() + g.degree();
        if m < 0 || m as usize > target.max_degree() {
            return Vec::new();
        }
        let m = m as usize;
        let mut out = vec![S::zero(p); target.dim(m)];
        for a in 0..=n {
            if self.block(n, a).is_empty() {
                continue;
            }
            let fa = a as i64 + f.degree();
            let gb = (n - a) as i64 + g.degree();
            if fa < 0 || gb < 0 || fa as usize + gb as usize != m {
                continue;
            }
            let blk = self.block_matrix(n, a, v, p);
            if blk.is_zero() {
                continue;
            }
            let img = f
                .block(a)
                .mul(&blk)
                .expect("shapes")
                .mul(&g.block(n - a).transpose())
                .expect("shapes");
            let negate = g.degree() % 2 != 0 && a % 2 != 0;
            let base = target.offsets[m][fa as usize];
            let cols = target.right[gb as usize];
            for i in 0..img.rows() {
                for j in 0..img.cols() {
                    let x = img.get(i, j);
                    if !x.is_zero() {
                        out[base + i * cols + j] = if negate { -x.clone() } else { x.clone() };
                    }
                }
            }
        }
        out
    }
}

/// Free graded chain complex of finite type with a degree −1 differential.
#[derive(Clone, Debug)]
pub struct GradedChainComplex<S: Scalar> {
    basis: GradedBasis,
    d: GradedMap<S>,
}

impl<S: Scalar> GradedChainComplex<S> {
    /// Checks the degree, the bases and `d∘d = 0`.
    pub fn new(basis: GradedBasis, d: GradedMap<S>) -> Result<Self, GradedError> {
        if d.degree() != -1 {
            return Err(GradedError::NotADifferential(d.degree()));
        }
        if d.source() != &basis || d.target() != &basis {
            return Err(GradedError::BasisMismatch);
        }
        for n in 2..=basis.max_degree() {
            let dd = d.block(n - 1).mul(&d.block(n))?;
            if !dd.is_zero() {
                return Err(GradedError::SquareNonzero { degree: n });
            }
        }
        Ok(GradedChainComplex { basis, d })
    }

    /// Builds from boundary matrices `d_n: C_n -> C_{n-1}` keyed by `n`.
    pub fn from_boundaries(
        basis: GradedBasis,
        p: u64,
        boundaries: impl IntoIterator<Item = (usize, ExactMatrix<S>)>,
    ) -> Result<Self, GradedError> {
        let mut d = GradedMap::zero(basis.clone(), basis.clone(), -1, p);
        for (n, m) in boundaries {
            d.set_block(n, m)?;
        }
        Self::new(basis, d)
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn differential(&self) -> &GradedMap<S> {
        &self.d
    }

    pub fn prime(&self) -> u64 {
        self.d.prime()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    /// Highest degree whose homology is trustworthy (`N_max - 1`), or −1.
    pub fn window(&self) -> i64 {
        self.max_degree() as i64 - 1
    }

    /// `d_n: C_n -> C_{n-1}`.
    pub fn boundary(&self, n: usize) -> ExactMatrix<S> {
        self.d.block(n)
    }

    pub fn to_fp(&self) -> GradedChainComplex<Fp> {
        GradedChainComplex {
            basis: self.basis.clone(),
            d: self.d.to_fp(),
        }
    }

    /// Multiplies the differential by a scalar (still a complex).
    pub fn scaled(&self, c: &S) -> GradedChainComplex<S> {
        GradedChainComplex {
            basis: self.basis.clone(),
            d: self.d.scale(c),
        }
    }

    /// `dim H_n(C ⊗ F_p)` for `n` in the trust window, from ranks mod p.
    pub fn mod_p_homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=self.max_degree())
            .map(|n| self.boundary(n).to_fp().rank())
            .collect();
        (0..self.max_degree())
            .map(|n| self.basis.dim(n as i64) - ranks[n] - ranks.get(n + 1).copied().unwrap_or(0))
            .collect()
    }

    pub fn decompose(&self) -> Result<Decomposition<S>, GradedError> {
        Decomposition::compute(self)
    }

    pub fn homology(&self) -> Result<HomologySummary, GradedError> {
        Ok(self.decompose()?.homology())
    }
}

/// Role of a decomposed basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisRole {
    /// Cycle that is not hit by any boundary within the complex.
    Free,
    /// Source `y` of an elementary piece `y -> p^k x`.
    Top { piece: usize },
    /// Target `x` of an elementary piece.
    Bottom { piece: usize },
}

/// Two-term summand `Z_(p) --p^k--> Z_(p)` spanning degrees `(n+1, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementaryPiece {
    pub top_degree: usize,
    pub top_index: usize,
    pub bottom_index: usize,
    pub exponent: u32,
}

impl ElementaryPiece {
    pub fn bottom_degree(&self) -> usize {
        self.top_degree - 1
    }
}

/// Splitting of a complex into free and elementary pieces, with the
/// per-degree change of basis that realizes it.
#[derive(Clone, Debug)]
pub struct Decomposition<S: Scalar> {
    max_degree: usize,
    p: u64,
    /// Columns are the new basis vectors written in the original basis.
    change_of_basis: Vec<ExactMatrix<S>>,
    inverse: Vec<ExactMatrix<S>>,
    roles: Vec<Vec<BasisRole>>,
    pieces: Vec<ElementaryPiece>,
}

impl<S: Scalar> Decomposition<S> {
    fn compute(c: &GradedChainComplex<S>) -> Result<Self, GradedError> {
        let top = c.max_degree();
        let p = c.prime();
        let dims: Vec<usize> = (0..=top).map(|n| c.basis.dim(n as i64)).collect();

        // Smith forms of every boundary: the kernel columns of V_n span Z_n,
        // the remaining columns a complement K_n mapping injectively.
        let snfs: Vec<Option<crate::matrix::SnfResult<S>>> = (0..=top)
            .map(|n| {
                if n == 0 {
                    None
                } else {
                    Some(c.boundary(n).snf_any_ring())
                }
            })
            .collect();
        let rank = |n: usize| snfs[n].as_ref().map_or(0, |s| s.rank());
        let v_of = |n: usize| {
            snfs[n]
                .as_ref()
                .map_or_else(|| ExactMatrix::identity(dims[n], p), |s| s.v.clone())
        };
        let vinv_of = |n: usize| {
            snfs[n]
                .as_ref()
                .map_or_else(|| ExactMatrix::identity(dims[n], p), |s| s.v_inv.clone())
        };

        // For each n >= 1, the map K_n -> Z_{n-1} in kernel coordinates, and its Smith form.
        let mut pair_snf: Vec<Option<crate::matrix::SnfResult<S>>> = vec![None; top + 1];
        for n in 1..=top {
            let r = rank(n);
            if r == 0 {
                continue;
            }
            let vn = v_of(n);
            let k_cols: Vec<usize> = (0..r).collect();
            let k_basis = vn.select(&(0..dims[n]).collect::<Vec<_>>(), &k_cols);
            let image = c.boundary(n).mul(&k_basis)?;
            let coords = vinv_of(n - 1).mul(&image)?;
            let r_below = rank(n - 1);
            debug_assert!((0..r_below).all(|i| (0..r).all(|j| coords.get(i, j).is_zero())));
            let z_rows: Vec<usize> = (r_below..dims[n - 1]).collect();
            let m = coords.select(&z_rows, &k_cols);
            pair_snf[n] = Some(m.snf_any_ring());
        }

        let mut change_of_basis = Vec::with_capacity(top + 1);
        let mut inverse = Vec::with_capacity(top + 1);
        let mut roles: Vec<Vec<BasisRole>> = vec![Vec::new(); top + 1];
        let mut pieces = Vec::new();

        // Piece ids are assigned by top degree so both ends agree.
        let mut piece_ids: Vec<Vec<usize>> = vec![Vec::new(); top + 2];
        for n in 1..=top {
            if let Some(s) = &pair_snf[n] {
                for (i, &k) in s.invariant_exponents.iter().enumerate() {
                    let r_below = rank(n - 1);
                    let id = pieces.len();
                    pieces.push(ElementaryPiece {
                        top_degree: n,
                        top_index: (dims[n] - rank(n)) + i,
                        bottom_index: i,
                        exponent: k,
                    });
                    let _ = r_below;
                    piece_ids[n].push(id);
                }
            }
        }

        for n in 0..=top {
            let dim = dims[n];
            let r = rank(n);
            let z_dim = dim - r;
            let vn = v_of(n);
            let vn_inv = vinv_of(n);
            // Block transform T with P_n = V_n' · T, where V_n' lists the
            // kernel columns first and the complement after.
            let order: Vec<usize> = (r..dim).chain(0..r).collect();
            let v_reordered = vn.select(&(0..dim).collect::<Vec<_>>(), &order);
            let vinv_reordered = vn_inv.select(&order, &(0..dim).collect::<Vec<_>>());

            let mut t = ExactMatrix::<S>::identity(dim, p);
            let mut t_inv = ExactMatrix::<S>::identity(dim, p);
            // Kernel part adapted to the image from degree n+1.
            if n < top {
                if let Some(s) = &pair_snf[n + 1] {
                    for i in 0..z_dim {
                        for j in 0..z_dim {
                            t.set(i, j, s.u_inv.get(i, j).clone());
                            t_inv.set(i, j, s.u.get(i, j).clone());
                        }
                    }
                }
            }
            // Complement adapted to the map into degree n-1.
            if let Some(s) = &pair_snf[n] {
                for i in 0..r {
                    for j in 0..r {
                        t.set(z_dim + i, z_dim + j, s.v.get(i, j).clone());
                        t_inv.set(z_dim + i, z_dim + j, s.v_inv.get(i, j).clone());
                    }
                }
            }
            let pn = v_reordered.mul(&t)?;
            let pn_inv = t_inv.mul(&vinv_reordered)?;

            let mut role = vec![BasisRole::Free; dim];
            let hit = if n < top { piece_ids[n + 1].len() } else { 0 };
            for (i, &id) in piece_ids[n + 1].iter().enumerate().take(hit) {
                role[i] = BasisRole::Bottom { piece: id };
            }
            for (i, &id) in piece_ids[n].iter().enumerate() {
                role[z_dim + i] = BasisRole::Top { piece: id };
            }
            roles[n] = role;
            change_of_basis.push(pn);
            inverse.push(pn_inv);
        }

        let dec = Decomposition {
            max_degree: top,
            p,
            change_of_basis,
            inverse,
            roles,
            pieces,
        };
        dec.verify(c)?;
        Ok(dec)
    }

    /// Checks `P_{n-1}^{-1} d_n P_n` is the elementary form exactly.
    fn verify(&self, c: &GradedChainComplex<S>) -> Result<(), GradedError> {
        for n in 0..=self.max_degree {
            let id = self.change_of_basis[n].mul(&self.inverse[n])?;
            assert_eq!(
                id,
                ExactMatrix::identity(id.rows(), self.p),
                "change of basis not invertible at degree {n}"
            );
        }
        for n in 1..=self.max_degree {
            let conj = self.inverse[n - 1]
                .mul(&c.boundary(n))?
                .mul(&self.change_of_basis[n])?;
            let mut expected = ExactMatrix::zeros(conj.rows(), conj.cols(), self.p);
            for piece in self.pieces.iter().filter(|pc| pc.top_degree == n) {
                expected.set(
                    piece.bottom_index,
                    piece.top_index,
                    S::p_pow(piece.exponent, self.p),
                );
            }
            assert_eq!(
                conj, expected,
                "decomposition does not conjugate d_{n} to elementary form"
            );
        }
        Ok(())
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn pieces(&self) -> &[ElementaryPiece] {
        &self.pieces
    }

    pub fn roles(&self, n: usize) -> &[BasisRole] {
        &self.roles[n]
    }

    pub fn change_of_basis(&self, n: usize) -> &ExactMatrix<S> {
        &self.change_of_basis[n]
    }

    pub fn inverse(&self, n: usize) -> &ExactMatrix<S> {
        &self.inverse[n]
    }

    /// Free generators in degree `n` (indices into the decomposed basis).
    pub fn free_indices(&self, n: usize) -> Vec<usize> {
        self.roles[n]
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == BasisRole::Free)
            .map(|(i, _)| i)
            .collect()
    }

    /// Decomposed basis vector `i` of degree `n`, in original coordinates.
    pub fn vector(&self, n: usize, i: usize) -> Vec<S> {
        self.change_of_basis[n].column(i)
    }

    /// Largest exponent of a piece whose lower end lies in the trust window.
    pub fn max_exponent(&self) -> u32 {
        self.pieces
            .iter()
            .filter(|pc| pc.bottom_degree() < self.max_degree)
            .map(|pc| pc.exponent)
            .max()
            .unwrap_or(0)
    }

    /// Betti numbers and torsion exponents in the trust window.
    pub fn homology(&self) -> HomologySummary {
        let window = self.max_degree as i64 - 1;
        let mut betti = Vec::new();
        let mut torsion = Vec::new();
        for n in 0..self.max_degree {
            betti.push(self.free_indices(n).len());
            let mut t: Vec<u32> = self
                .pieces
                .iter()
                .filter(|pc| pc.bottom_degree() == n && pc.exponent >= 1)
                .map(|pc| pc.exponent)
                .collect();
            t.sort_unstable();
            torsion.push(t);
        }
        HomologySummary {
            window,
            betti,
            torsion,
        }
    }
}

/// `H_n ≅ Z_(p)^{betti_n} ⊕ ⊕ Z/p^{k}` for `n` in the trust window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    window: i64,
    betti: Vec<usize>,
    torsion: Vec<Vec<u32>>,
}

impl HomologySummary {
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn degrees(&self) -> std::ops::Range<usize> {
        0..self.betti.len()
    }

    /// `(betti_n, torsion exponents of H_n)`; refuses degrees outside the window.
    pub fn at(&self, n: usize) -> Result<(usize, &[u32]), GradedError> {
        if n as i64 > self.window {
            return Err(GradedError::OutsideWindow {
                degree: n,
                window: self.window,
                above: (self.window + 1) as usize,
            });
        }
        Ok((self.betti[n], &self.torsion[n]))
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn torsion(&self) -> &[Vec<u32>] {
        &self.torsion
    }

    /// `dim H_n(C ⊗ F_p)` predicted by universal coefficients.
    pub fn mod_p_dims(&self) -> Vec<usize> {
        (0..self.betti.len())
            .map(|n| {
                self.betti[n]
                    + self.torsion[n].len()
                    + if n > 0 { self.torsion[n - 1].len() } else { 0 }
            })
            .collect()
    }
}
