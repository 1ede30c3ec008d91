//! Universal enveloping algebras in the ordered-monomial (PBW) basis.

use std::collections::HashMap;

use super::{DgLie, LieError};
use crate::graded::{GradedBasis, GradedChainComplex, GradedMap, TensorBasis};
use crate::matrix::ExactMatrix;
use crate::monomial::{admissible_monomials, merge_sign, power_name, sub_exponents};
use crate::scalar::{binomial, Scalar};

/// `UL` truncated at `N_max`, with product, differential and coproduct.
#[derive(Clone, Debug)]
pub struct PbwAlgebra<S: Scalar> {
    lie: DgLie<S>,
    monomials: Vec<Vec<Vec<u32>>>,
    index: HashMap<Vec<u32>, (usize, usize)>,
    basis: GradedBasis,
    /// `right_mul[g][n]`: `u ↦ u·x_g` from degree `n`, present when `n + |x_g| <= N_max`.
    right_mul: Vec<Vec<ExactMatrix<S>>>,
    differential: GradedMap<S>,
    tensor: TensorBasis,
    /// `coproduct[n][i]`: nonzero entries `(row, coefficient)` of `Δ` on
    /// the `i`-th monomial of degree `n`, rows in the tensor basis.
    coproduct: Vec<Vec<Vec<(usize, S)>>>,
}

/// Per-degree basis of the primitive elements, as coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSpace<S: Scalar> {
    pub vectors: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> PrimitiveSpace<S> {
    pub fn dim(&self, n: usize) -> usize {
        self.vectors.get(n).map_or(0, |v| v.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.len()).collect()
    }
}

impl<S: Scalar> PbwAlgebra<S> {
    /// Builds `UL` up to the cutoff of `lie`; `lie` must validate.
    pub fn build(lie: &DgLie<S>) -> Result<Self, LieError> {
        lie.ensure_valid()?;
        let top = lie.max_degree();
        let p = lie.prime();
        let s = lie.len();

        let monomials = admissible_monomials(lie.degrees(), top);
        let mut index = HashMap::new();
        let mut basis = GradedBasis::new(top);
        for (n, list) in monomials.iter().enumerate() {
            for (i, m) in list.iter().enumerate() {
                index.insert(m.clone(), (n, i));
                basis
                    .push(n, power_name(lie.names(), m))
                    .expect("distinct monomials");
            }
        }

        let mut builder = Builder {
            lie,
            monomials: &monomials,
            index: &index,
            memo: HashMap::new(),
        };
        let mut right_mul = Vec::with_capacity(s);
        for g in 0..s {
            let d = lie.degree(g);
            let mut per = Vec::new();
            for n in 0..=top {
                if n + d > top {
                    break;
                }
                let cols: Vec<Vec<S>> = (0..monomials[n].len())
                    .map(|i| builder.rmul(n, i, g))
                    .collect();
                per.push(ExactMatrix::from_columns(&cols, monomials[n + d].len(), p));
            }
            right_mul.push(per);
        }

        let mut alg = PbwAlgebra {
            lie: lie.clone(),
            monomials,
            index,
            tensor: TensorBasis::new(&basis, &basis, top),
            differential: GradedMap::zero(basis.clone(), basis.clone(), -1, p),
            basis,
            right_mul,
            coproduct: Vec::new(),
        };
        alg.build_differential()?;
        alg.build_coproduct();
        Ok(alg)
    }

    fn build_differential(&mut self) -> Result<(), LieError> {
        let top = self.max_degree();
        let p = self.prime();
        let mut columns: Vec<Vec<Vec<S>>> = vec![Vec::new(); top + 1];
        for n in 0..=top {
            for i in 0..self.dim(n) {
                let m = &self.monomials[n][i];
                let col = match m.iter().rposition(|&k| k > 0) {
                    None => Vec::new(),
                    Some(x) => {
                        // m = m'·x, so ∂m = ∂(m')·x + (-1)^{|m'|} m'·∂x.
                        let mut prefix = m.clone();
                        prefix[x] -= 1;
                        let (pd, pi) = self.index[&prefix];
                        let mut out = vec![S::zero(p); self.dim(n - 1)];
                        if pd > 0 {
                            let dprefix = &columns[pd][pi];
                            let moved = self.right_mul[x][pd - 1].mul_vec(dprefix).expect("shape");
                            add_into(&mut out, &moved);
                        }
                        let unit = unit_vec(self.dim(pd), pi, p);
                        for (z, c) in self.lie.differential_of(x).iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let term = self.right_mul[z][pd].mul_vec(&unit).expect("shape");
                            let c = if pd % 2 == 1 { -c.clone() } else { c.clone() };
                            for (o, t) in out.iter_mut().zip(&term) {
                                o.add_mul_assign(&c, t);
                            }
                        }
                        out
                    }
                };
                columns[n].push(col);
            }
        }
        for n in 1..=top {
            let m = ExactMatrix::from_columns(&columns[n], self.dim(n - 1), p);
            self.differential.set_block(n, m)?;
        }
        Ok(())
    }

    fn build_coproduct(&mut self) {
        let p = self.prime();
        let mut out = Vec::with_capacity(self.max_degree() + 1);
        for n in 0..=self.max_degree() {
            let mut columns = Vec::with_capacity(self.dim(n));
            for k in &self.monomials[n] {
                let mut col = Vec::new();
                for j in sub_exponents(k) {
                    let rest: Vec<u32> = k.iter().zip(&j).map(|(a, b)| a - b).collect();
                    let mut coeff = num_bigint::BigInt::from(1);
                    for (a, b) in k.iter().zip(&j) {
                        coeff *= binomial(*a as u64, *b as u64);
                    }
                    // Δ(x_1^{k_1})...Δ(x_s^{k_s}): x_i^{k_i-j_i} moves past x_l^{j_l} for i < l.
                    if merge_sign(self.lie.degrees(), &j, &rest) < 0 {
                        coeff = -coeff;
                    }
                    let (ad, ai) = self.index[&j];
                    let (bd, bi) = self.index[&rest];
                    let c = S::from_bigint(&coeff, p);
                    if !c.is_zero() {
                        col.push((self.tensor.index(ad, ai, bd, bi), c));
                    }
                }
                col.sort_by_key(|e| e.0);
                columns.push(col);
            }
            out.push(columns);
        }
        self.coproduct = out;
    }

    pub fn lie(&self) -> &DgLie<S> {
        &self.lie
    }

    pub fn prime(&self) -> u64 {
        self.lie.prime()
    }

    pub fn max_degree(&self) -> usize {
        self.lie.max_degree()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self, n: usize) -> usize {
        self.monomials.get(n).map_or(0, |v| v.len())
    }

    pub fn hilbert_series(&self) -> Vec<usize> {
        self.basis.hilbert_series()
    }

    pub fn monomial(&self, n: usize, i: usize) -> &[u32] {
        &self.monomials[n][i]
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<(usize, usize)> {
        self.index.get(exponents).copied()
    }

    /// Degree and coordinates of the generator `x_g`.
    pub fn generator(&self, g: usize) -> (usize, Vec<S>) {
        let mut m = vec![0u32; self.lie.len()];
        m[g] = 1;
        let (n, i) = self.index[&m];
        (n, unit_vec(self.dim(n), i, self.prime()))
    }

    pub fn unit(&self) -> Vec<S> {
        vec![S::one(self.prime())]
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<S> {
        unit_vec(self.dim(n), i, self.prime())
    }

    /// Right multiplication by `x_g` out of degree `n`.
    pub fn right_mul(&self, g: usize, n: usize) -> Option<&ExactMatrix<S>> {
        self.right_mul[g].get(n)
    }

    /// `a·b`, or `None` past the cutoff.
    pub fn mul(&self, na: usize, a: &[S], nb: usize, b: &[S]) -> Option<Vec<S>> {
        let p = self.prime();
        if na + nb > self.max_degree() {
            return None;
        }
        let mut out = vec![S::zero(p); self.dim(na + nb)];
        for (j, c) in b.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut v = a.to_vec();
            let mut deg = na;
            for (g, &k) in self.monomials[nb][j].iter().enumerate() {
                for _ in 0..k {
                    v = self.right_mul[g][deg].mul_vec(&v).expect("shape");
                    deg += self.lie.degree(g);
                }
            }
            for (o, x) in out.iter_mut().zip(&v) {
                o.add_mul_assign(c, x);
            }
        }
        Some(out)
    }

    /// Product of two basis monomials.
    pub fn mul_basis(&self, na: usize, i: usize, nb: usize, j: usize) -> Option<Vec<S>> {
        let p = self.prime();
        self.mul(
            na,
            &unit_vec(self.dim(na), i, p),
            nb,
            &unit_vec(self.dim(nb), j, p),
        )
    }

    /// Extended differential `∂` on `UL`.
    pub fn differential(&self) -> &GradedMap<S> {
        &self.differential
    }

    pub fn chain_complex(&self) -> Result<GradedChainComplex<S>, LieError> {
        Ok(GradedChainComplex::new(
            self.basis.clone(),
            self.differential.clone(),
        )?)
    }

    /// Basis of `UL ⊗ UL` used by [`Self::coproduct`].
    pub fn tensor_basis(&self) -> &TensorBasis {
        &self.tensor
    }

    /// `Δ: UL_n -> (UL ⊗ UL)_n` as a dense matrix.
    pub fn coproduct(&self, n: usize) -> ExactMatrix<S> {
        let mut m = ExactMatrix::zeros(self.tensor.dim(n), self.dim(n), self.prime());
        for (c, col) in self.coproduct[n].iter().enumerate() {
            for (r, x) in col {
                m.set(*r, c, x.clone());
            }
        }
        m
    }

    /// Nonzero entries `(row, coefficient)` of `Δ` on the `i`-th monomial of degree `n`.
    pub fn coproduct_column(&self, n: usize, i: usize) -> &[(usize, S)] {
        &self.coproduct[n][i]
    }

    /// `Δu` for `u` in degree `n`.
    pub fn apply_coproduct(&self, n: usize, u: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(self.prime()); self.tensor.dim(n)];
        for (col, a) in self.coproduct[n].iter().zip(u) {
            if a.is_zero() {
                continue;
            }
            for (r, x) in col {
                out[*r].add_mul_assign(a, x);
            }
        }
        out
    }

    fn is_unit_row(&self, n: usize, r: usize) -> bool {
        self.tensor.block(n, 0).contains(&r) || self.tensor.block(n, n).contains(&r)
    }

    /// `Δu - u⊗1 - 1⊗u` on degree `n >= 1`.
    pub fn reduced_coproduct(&self, n: usize) -> ExactMatrix<S> {
        let mut m = self.coproduct(n);
        let zero = S::zero(self.prime());
        for r in self.tensor.block(n, 0).chain(self.tensor.block(n, n)) {
            for c in 0..m.cols() {
                m.set(r, c, zero.clone());
            }
        }
        m
    }

    pub fn is_primitive(&self, n: usize, u: &[S]) -> bool {
        n > 0
            && self
                .apply_coproduct(n, u)
                .iter()
                .enumerate()
                .all(|(r, c)| c.is_zero() || self.is_unit_row(n, r))
    }

    /// Primitive elements in degrees `1..=N_max` (saturated over `Z_(p)`).
    pub fn primitives(&self) -> PrimitiveSpace<S> {
        let p = self.prime();
        let mut vectors = vec![Vec::new()];
        for n in 1..=self.max_degree() {
            // Only the rows hit by some column matter for the kernel.
            let mut rows: Vec<usize> = self.coproduct[n]
                .iter()
                .flatten()
                .map(|e| e.0)
                .filter(|&r| !self.is_unit_row(n, r))
                .collect();
            rows.sort_unstable();
            rows.dedup();
            let mut m = ExactMatrix::zeros(rows.len(), self.dim(n), p);
            for (c, col) in self.coproduct[n].iter().enumerate() {
                for (r, x) in col {
                    if let Ok(i) = rows.binary_search(r) {
                        m.set(i, c, x.clone());
                    }
                }
            }
            vectors.push(m.kernel_basis());
        }
        PrimitiveSpace { vectors }
    }

    /// Inclusion `L -> UL` on the graded basis of `L`.
    pub fn lie_inclusion(&self) -> GradedMap<S> {
        let lb = self.lie.basis();
        let p = self.prime();
        let pos = self.lie.positions();
        let mut f = GradedMap::zero(lb.clone(), self.basis.clone(), 0, p);
        for n in 1..=self.max_degree() {
            let gens: Vec<usize> = (0..self.lie.len())
                .filter(|&g| self.lie.degree(g) == n)
                .collect();
            if gens.is_empty() {
                continue;
            }
            let mut m = ExactMatrix::zeros(self.dim(n), gens.len(), p);
            for &g in &gens {
                let (_, v) = self.generator(g);
                for (i, c) in v.into_iter().enumerate() {
                    m.set(i, pos[g].1, c);
                }
            }
            f.set_block(n, m).expect("shape");
        }
        f
    }

    /// Whether `θ` (any degree) satisfies `θ(ab) = θ(a)b + (-1)^{|θ||a|} aθ(b)`
    /// on all basis pairs; on failure returns the offending pair of names.
    pub fn check_derivation(&self, theta: &GradedMap<S>) -> Result<(), String> {
        let p = self.prime();
        let td = theta.degree();
        for na in 1..=self.max_degree() {
            for nb in 1..=self.max_degree() - na {
                let target = na as i64 + nb as i64 + td;
                if target < 0 || target as usize > self.max_degree() {
                    continue;
                }
                for i in 0..self.dim(na) {
                    for j in 0..self.dim(nb) {
                        let a = unit_vec(self.dim(na), i, p);
                        let b = unit_vec(self.dim(nb), j, p);
                        let ab = self.mul(na, &a, nb, &b).expect("in window");
                        let lhs = theta.apply(na + nb, &ab).expect("shape");
                        let mut rhs = vec![S::zero(p); self.dim(target as usize)];
                        let ta = na as i64 + td;
                        if ta >= 0 {
                            let t = theta.apply(na, &a).expect("shape");
                            if let Some(v) = self.mul(ta as usize, &t, nb, &b) {
                                add_into(&mut rhs, &v);
                            }
                        }
                        let tb = nb as i64 + td;
                        if tb >= 0 {
                            let t = theta.apply(nb, &b).expect("shape");
                            if let Some(mut v) = self.mul(na, &a, tb as usize, &t) {
                                if td % 2 != 0 && na % 2 != 0 {
                                    v.iter_mut().for_each(|x| *x = -x.clone());
                                }
                                add_into(&mut rhs, &v);
                            }
                        }
                        if lhs != rhs {
                            return Err(format!(
                                "({}, {})",
                                self.basis.names(na)[i],
                                self.basis.names(nb)[j]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `Δθ = (θ⊗1 + 1⊗θ)Δ` on all basis elements.
    pub fn check_coderivation(&self, theta: &GradedMap<S>) -> Result<(), String> {
        let id = GradedMap::identity(&self.basis, self.prime());
        for n in 0..=self.max_degree() {
            let target = n as i64 + theta.degree();
            if target < 0 || target as usize > self.max_degree() {
                continue;
            }
            for i in 0..self.dim(n) {
                let u = unit_vec(self.dim(n), i, self.prime());
                let lhs =
                    self.apply_coproduct(target as usize, &theta.apply(n, &u).expect("shape"));
                let du = self.apply_coproduct(n, &u);
                let mut rhs = self.tensor.apply(&self.tensor, theta, &id, n, &du);
                add_into(
                    &mut rhs,
                    &self.tensor.apply(&self.tensor, &id, theta, n, &du),
                );
                if lhs != rhs {
                    return Err(self.basis.names(n)[i].clone());
                }
            }
        }
        Ok(())
    }

    pub fn format(&self, n: usize, v: &[S]) -> String {
        crate::graded::format_vector(self.basis.names(n), v)
    }
}

pub(crate) fn unit_vec<S: Scalar>(len: usize, i: usize, p: u64) -> Vec<S> {
    let mut v = vec![S::zero(p); len];
    v[i] = S::one(p);
    v
}

pub(crate) fn add_into<S: Scalar>(acc: &mut [S], v: &[S]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a = a.add_ref(b);
        }
    }
}

/// Memoized straightening of `m·x_g` for basis monomials `m`.
struct Builder<'a, S: Scalar> {
    lie: &'a DgLie<S>,
    monomials: &'a [Vec<Vec<u32>>],
    index: &'a HashMap<Vec<u32>, (usize, usize)>,
    memo: HashMap<(usize, usize, usize), Vec<S>>,
}

impl<S: Scalar> Builder<'_, S> {
    fn rmul(&mut self, n: usize, i: usize, g: usize) -> Vec<S> {
        if let Some(v) = self.memo.get(&(n, i, g)) {
            return v.clone();
        }
        let p = self.lie.prime();
        let dg = self.lie.degree(g);
        let target = n + dg;
        let m = self.monomials[n][i].clone();
        let mut out = vec![S::zero(p); self.monomials[target].len()];
        match m.iter().rposition(|&k| k > 0) {
            Some(y) if y > g => {
                // m = m'y and y x = (-1)^{|x||y|} x y + [y, x].
                let mut prefix = m.clone();
                prefix[y] -= 1;
                let (pd, pi) = self.index[&prefix];
                let px = self.rmul(pd, pi, g);
                let dy = self.lie.degree(y);
                let negate = dg % 2 == 1 && dy % 2 == 1;
                for (t, c) in px.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let c = if negate { -c.clone() } else { c.clone() };
                    let term = self.rmul(pd + dg, t, y);
                    for (o, x) in out.iter_mut().zip(&term) {
                        o.add_mul_assign(&c, x);
                    }
                }
                let br = self.lie.bracket_basis(y, g).to_vec();
                for (z, c) in br.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let term = self.rmul(pd, pi, z);
                    for (o, x) in out.iter_mut().zip(&term) {
                        o.add_mul_assign(c, x);
                    }
                }
            }
            Some(y) if y == g && dg % 2 == 1 => {
                // x·x = ½[x, x] for odd x.
                let mut prefix = m.clone();
                prefix[y] = 0;
                let (pd, pi) = self.index[&prefix];
                let half = S::from_i64(2, p).unit_inverse().expect("p is odd");
                let br = self.lie.bracket_basis(g, g).to_vec();
                for (z, c) in br.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let c = c.mul_ref(&half);
                    let term = self.rmul(pd, pi, z);
                    for (o, x) in out.iter_mut().zip(&term) {
                        o.add_mul_assign(&c, x);
                    }
                }
            }
            _ => {
                let mut next = m;
                next[g] += 1;
                let (_, j) = self.index[&next];
                out[j] = S::one(p);
            }
        }
        self.memo.insert((n, i, g), out.clone());
        out
    }
}
