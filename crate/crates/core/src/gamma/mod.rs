//! Free graded-commutative algebras `ΛV` and free divided-powers algebras
//! `Γ(V)` on a graded basis, with the divided-power operations and the
//! Γ-morphism and Γ-derivation predicates.

pub mod pairing;
pub mod tensor;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::graded::{GradedBasis, GradedError, GradedMap, TensorBasis};
use crate::lie::PbwAlgebra;
use crate::matrix::ExactMatrix;
use crate::monomial::{admissible_monomials, divided_name, merge_sign, power_name, sub_exponents};
use crate::scalar::{binomial, factorial, Scalar};
use tensor::{shuffle_product, single, Combination};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error("divided powers are only defined in nonzero even degree, got degree {0}")]
    OddDegree(usize),
    #[error("operation needs a divided-powers algebra")]
    NotGamma,
    #[error("operation needs an exterior-polynomial algebra")]
    NotLambda,
    #[error("generator {0:?} must have positive degree at most N_max")]
    BadGenerator(String),
    #[error("expected {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("image of generator {0:?} is not homogeneous of the generator's degree")]
    ImageDegree(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `ΛV`: polynomial on even, exterior on odd generators.
    Lambda,
    /// `Γ(V)`: divided powers on even, exterior on odd generators.
    Gamma,
}

/// Failure witness of a Γ-morphism or Γ-derivation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaWitness {
    /// Multiplicativity (or Leibniz) fails on this pair of basis elements.
    Product { left: String, right: String },
    /// The divided-power identity fails for `γ^k(element)`; `lhs` and `rhs`
    /// are the two sides, fully expanded.
    DividedPower {
        element: String,
        k: u32,
        lhs: String,
        rhs: String,
    },
}

impl fmt::Display for GammaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaWitness::Product { left, right } => write!(f, "product of {left} and {right}"),
            GammaWitness::DividedPower {
                element,
                k,
                lhs,
                rhs,
            } => {
                write!(f, "a = {element}, k = {k}: {lhs} ≠ {rhs}")
            }
        }
    }
}

/// `ΛV` or `Γ(V)` truncated at `N_max`, in the monomial basis.
#[derive(Clone, Debug)]
pub struct FreeAlgebra<S: Scalar> {
    kind: AlgebraKind,
    p: u64,
    names: Vec<String>,
    degrees: Vec<usize>,
    monomials: Vec<Vec<Vec<u32>>>,
    index: HashMap<Vec<u32>, (usize, usize)>,
    basis: GradedBasis,
    tensor: TensorBasis,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> FreeAlgebra<S> {
    pub fn new<N: AsRef<str>>(
        kind: AlgebraKind,
        p: u64,
        max_degree: usize,
        generators: &[(N, usize)],
    ) -> Result<Self, GammaError> {
        let names: Vec<String> = generators
            .iter()
            .map(|(n, _)| n.as_ref().to_string())
            .collect();
        let degrees: Vec<usize> = generators.iter().map(|(_, d)| *d).collect();
        for (n, &d) in names.iter().zip(&degrees) {
            if d == 0 || d > max_degree {
                return Err(GammaError::BadGenerator(n.clone()));
            }
        }
        let monomials = admissible_monomials(&degrees, max_degree);
        let mut index = HashMap::new();
        let mut basis = GradedBasis::new(max_degree);
        for (n, list) in monomials.iter().enumerate() {
            for (i, m) in list.iter().enumerate() {
                index.insert(m.clone(), (n, i));
                let name = match kind {
                    AlgebraKind::Lambda => power_name(&names, m),
                    AlgebraKind::Gamma => divided_name(&names, m),
                };
                basis.push(n, name)?;
            }
        }
        let tensor = TensorBasis::new(&basis, &basis, max_degree);
        Ok(FreeAlgebra {
            kind,
            p,
            names,
            degrees,
            monomials,
            index,
            basis,
            tensor,
            _marker: Default::default(),
        })
    }

    pub fn lambda<N: AsRef<str>>(
        p: u64,
        max_degree: usize,
        generators: &[(N, usize)],
    ) -> Result<Self, GammaError> {
        Self::new(AlgebraKind::Lambda, p, max_degree, generators)
    }

    pub fn gamma<N: AsRef<str>>(
        p: u64,
        max_degree: usize,
        generators: &[(N, usize)],
    ) -> Result<Self, GammaError> {
        Self::new(AlgebraKind::Gamma, p, max_degree, generators)
    }

    /// `Γ(L^♯)`, identified with `(UL)^♯` through the dual of the PBW basis:
    /// the functional dual to `x_1^{k_1}...x_s^{k_s}` is
    /// `γ^{k_1}(x_1^♯)...γ^{k_s}(x_s^♯)`, and both bases are indexed alike.
    pub fn dual_of_ul(ul: &PbwAlgebra<S>) -> Result<Self, GammaError> {
        let gens: Vec<(String, usize)> = ul
            .lie()
            .names()
            .iter()
            .zip(ul.lie().degrees())
            .map(|(n, d)| (format!("{n}*"), *d))
            .collect();
        Self::gamma(ul.prime(), ul.max_degree(), &gens)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degrees
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

    pub fn index_of(&self, m: &[u32]) -> Option<(usize, usize)> {
        self.index.get(m).copied()
    }

    pub fn tensor_basis(&self) -> &TensorBasis {
        &self.tensor
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(self.p); self.dim(n)];
        v[i] = S::one(self.p);
        v
    }

    /// Degree and coordinates of generator `g`.
    pub fn generator(&self, g: usize) -> (usize, Vec<S>) {
        let mut m = vec![0u32; self.names.len()];
        m[g] = 1;
        let (n, i) = self.index[&m];
        (n, self.unit_vector(n, i))
    }

    pub fn format(&self, n: usize, v: &[S]) -> String {
        crate::graded::format_vector(self.basis.names(n), v)
    }

    /// Product of basis monomials as `(index, coefficient)` in degree `na + nb`,
    /// `None` when zero or past the cutoff.
    pub fn mul_basis(&self, na: usize, i: usize, nb: usize, j: usize) -> Option<(usize, S)> {
        if na + nb > self.max_degree() {
            return None;
        }
        let a = &self.monomials[na][i];
        let b = &self.monomials[nb][j];
        let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let (_, idx) = self.index_of(&sum)?;
        let mut c = BigInt::from(merge_sign(&self.degrees, a, b));
        if self.kind == AlgebraKind::Gamma {
            for (x, y) in a.iter().zip(b) {
                c *= binomial((x + y) as u64, *x as u64);
            }
        }
        Some((idx, S::from_bigint(&c, self.p)))
    }

    /// `a·b`, or `None` past the cutoff.
    pub fn mul(&self, na: usize, a: &[S], nb: usize, b: &[S]) -> Option<Vec<S>> {
        if na + nb > self.max_degree() {
            return None;
        }
        let mut out = vec![S::zero(self.p); self.dim(na + nb)];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some((k, c)) = self.mul_basis(na, i, nb, j) {
                    out[k].add_mul_assign(&x.mul_ref(y), &c);
                }
            }
        }
        Some(out)
    }

    /// `a^k` (plain power), `None` past the cutoff.
    pub fn pow(&self, n: usize, a: &[S], k: u32) -> Option<Vec<S>> {
        let mut acc = vec![S::one(self.p)];
        let mut deg = 0;
        for _ in 0..k {
            acc = self.mul(deg, &acc, n, a)?;
            deg += n;
        }
        Some(acc)
    }

    /// Coproduct `Δ: A_n -> (A ⊗ A)_n` with primitive generators (`Λ`) or the
    /// deconcatenation coproduct `Δγ^k(v) = Σ γ^j(v) ⊗ γ^{k-j}(v)` (`Γ`).
    pub fn coproduct(&self, n: usize) -> ExactMatrix<S> {
        let mut m = ExactMatrix::zeros(self.tensor.dim(n), self.dim(n), self.p);
        for (col, k) in self.monomials[n].iter().enumerate() {
            for j in sub_exponents(k) {
                let rest: Vec<u32> = k.iter().zip(&j).map(|(a, b)| a - b).collect();
                let mut c = BigInt::from(merge_sign(&self.degrees, &j, &rest));
                if self.kind == AlgebraKind::Lambda {
                    for (a, b) in k.iter().zip(&j) {
                        c *= binomial(*a as u64, *b as u64);
                    }
                }
                let (ad, ai) = self.index[&j];
                let (bd, bi) = self.index[&rest];
                m.set(
                    self.tensor.index(ad, ai, bd, bi),
                    col,
                    S::from_bigint(&c, self.p),
                );
            }
        }
        m
    }

    /// Image in `T_C V` of a `Γ(V)` basis monomial: the shuffle product of
    /// the blocks `[v_i|...|v_i]` (`k_i` letters).
    pub fn embed_monomial(&self, n: usize, i: usize) -> Result<Combination<S>, GammaError> {
        if self.kind != AlgebraKind::Gamma {
            return Err(GammaError::NotGamma);
        }
        let mut acc: Combination<S> = single(Vec::new(), self.p);
        for (g, &k) in self.monomials[n][i].iter().enumerate() {
            if k > 0 {
                acc = shuffle_product(&self.degrees, &acc, &single(vec![g; k as usize], self.p));
            }
        }
        Ok(acc)
    }

    /// `γ^j` of a single basis monomial of even degree.
    fn divided_power_monomial(&self, n: usize, i: usize, j: u32) -> Option<Vec<S>> {
        if j == 0 {
            return Some(vec![S::one(self.p)]);
        }
        if j == 1 {
            return Some(self.unit_vector(n, i));
        }
        let target = n * j as usize;
        if target > self.max_degree() {
            return None;
        }
        let m = &self.monomials[n][i];
        let mut out = vec![S::zero(self.p); self.dim(target)];
        // γ^j(ab) = 0 when a, b are odd: any odd factor forces zero here.
        if m.iter()
            .enumerate()
            .any(|(g, &k)| k > 0 && self.degrees[g] % 2 == 1)
        {
            return Some(out);
        }
        // γ^j(γ^{a_1}(v_1)...γ^{a_s}(v_s)) = Π_i (j a_i)!/(a_i!)^j / j! · γ^{j a}(v).
        let mut num = BigInt::from(1);
        let mut den = factorial(j as u64);
        for &a in m.iter().filter(|&&a| a > 0) {
            num *= factorial(j as u64 * a as u64);
            den *= factorial(a as u64).pow(j);
        }
        let (q, r) = num.div_rem(&den);
        debug_assert!(r == BigInt::from(0));
        let scaled: Vec<u32> = m.iter().map(|&a| a * j).collect();
        let (_, idx) = self.index[&scaled];
        out[idx] = S::from_bigint(&q, self.p);
        Some(out)
    }

    /// `γ^k(a)` for `a` of nonzero even degree `n`, expanded with
    /// `γ^k(a + b) = Σ γ^j(a)γ^{k-j}(b)` and `γ^k(λa) = λ^k γ^k(a)`.
    /// `Ok(None)` when `nk` exceeds the cutoff.
    pub fn divided_power(&self, n: usize, a: &[S], k: u32) -> Result<Option<Vec<S>>, GammaError> {
        if self.kind != AlgebraKind::Gamma {
            return Err(GammaError::NotGamma);
        }
        if n == 0 || n % 2 == 1 {
            return Err(GammaError::OddDegree(n));
        }
        if n * k as usize > self.max_degree() {
            return Ok(None);
        }
        // acc[j] = γ^j(partial sum)
        let mut acc: Vec<Vec<S>> = (0..=k)
            .map(|j| {
                if j == 0 {
                    vec![S::one(self.p)]
                } else {
                    vec![S::zero(self.p); self.dim(n * j as usize)]
                }
            })
            .collect();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let powers: Vec<Vec<S>> = (0..=k)
                .map(|j| {
                    let g = self.divided_power_monomial(n, i, j).expect("within cutoff");
                    let cj = c.pow(j);
                    g.iter().map(|x| x.mul_ref(&cj)).collect()
                })
                .collect();
            let mut next = Vec::with_capacity(k as usize + 1);
            for j in 0..=k {
                let mut sum = vec![S::zero(self.p); self.dim(n * j as usize)];
                for l in 0..=j {
                    let prod = self
                        .mul(
                            n * l as usize,
                            &acc[l as usize],
                            n * (j - l) as usize,
                            &powers[(j - l) as usize],
                        )
                        .expect("within cutoff");
                    for (s, x) in sum.iter_mut().zip(&prod) {
                        *s = s.add_ref(x);
                    }
                }
                next.push(sum);
            }
            acc = next;
        }
        Ok(acc.pop())
    }

    /// Algebra map out of `ΛV` determined by generator images (each a
    /// homogeneous element of `target` of the generator's degree).
    pub fn extend_multiplicatively(
        &self,
        target: &FreeAlgebra<S>,
        images: &[Vec<S>],
    ) -> Result<GradedMap<S>, GammaError> {
        if self.kind != AlgebraKind::Lambda {
            return Err(GammaError::NotLambda);
        }
        self.check_images(target, images)?;
        let top = self.max_degree().min(target.max_degree());
        let mut f = GradedMap::zero(self.basis.clone(), target.basis.clone(), 0, self.p);
        for n in 0..=top {
            let cols: Vec<Vec<S>> = self.monomials[n]
                .iter()
                .map(|m| {
                    let mut acc = vec![S::one(self.p)];
                    let mut deg = 0;
                    for (g, &k) in m.iter().enumerate() {
                        for _ in 0..k {
                            acc = target
                                .mul(deg, &acc, self.degrees[g], &images[g])
                                .expect("degree within window");
                            deg += self.degrees[g];
                        }
                    }
                    acc
                })
                .collect();
            f.set_block(n, ExactMatrix::from_columns(&cols, target.dim(n), self.p))?;
        }
        Ok(f)
    }

    /// The Γ-morphism (or, for `Λ`, algebra map) induced by a degree-zero
    /// linear map on generators, `γ^k(v) ↦ γ^k(f(v))`.
    pub fn induced_map(
        &self,
        target: &FreeAlgebra<S>,
        images: &[Vec<S>],
    ) -> Result<GradedMap<S>, GammaError> {
        self.check_images(target, images)?;
        if self.kind == AlgebraKind::Lambda {
            return self.extend_multiplicatively(target, images);
        }
        let top = self.max_degree().min(target.max_degree());
        let mut f = GradedMap::zero(self.basis.clone(), target.basis.clone(), 0, self.p);
        for n in 0..=top {
            let cols: Vec<Vec<S>> = self.monomials[n]
                .iter()
                .map(|m| {
                    let mut acc = vec![S::one(self.p)];
                    let mut deg = 0;
                    for (g, &k) in m.iter().enumerate() {
                        if k == 0 {
                            continue;
                        }
                        let d = self.degrees[g];
                        let factor = if d.is_multiple_of(2) {
                            target
                                .divided_power(d, &images[g], k)
                                .expect("even degree")
                                .expect("within window")
                        } else {
                            images[g].clone()
                        };
                        acc = target
                            .mul(deg, &acc, d * k as usize, &factor)
                            .expect("within window");
                        deg += d * k as usize;
                    }
                    acc
                })
                .collect();
            f.set_block(n, ExactMatrix::from_columns(&cols, target.dim(n), self.p))?;
        }
        Ok(f)
    }

    fn check_images(&self, target: &FreeAlgebra<S>, images: &[Vec<S>]) -> Result<(), GammaError> {
        if images.len() != self.names.len() {
            return Err(GammaError::ImageCount {
                expected: self.names.len(),
                found: images.len(),
            });
        }
        for (g, img) in images.iter().enumerate() {
            if img.len() != target.dim(self.degrees[g]) {
                return Err(GammaError::ImageDegree(self.names[g].clone()));
            }
        }
        Ok(())
    }

    /// Checks that `f: self -> target` is multiplicative and commutes with
    /// every `γ^k` on even basis elements within the window.
    pub fn check_gamma_morphism(
        &self,
        target: &FreeAlgebra<S>,
        f: &GradedMap<S>,
    ) -> Result<(), GammaWitness> {
        let top = self.max_degree().min(target.max_degree());
        if self.kind == AlgebraKind::Gamma && target.kind == AlgebraKind::Gamma {
            for n in (2..=top).step_by(2) {
                for i in 0..self.dim(n) {
                    let a = self.unit_vector(n, i);
                    let fa = f.apply(n, &a).expect("shape");
                    for k in 2..=(top / n) as u32 {
                        let ga = self.divided_power(n, &a, k).expect("even").expect("window");
                        let lhs = f.apply(n * k as usize, &ga).expect("shape");
                        let rhs = target
                            .divided_power(n, &fa, k)
                            .expect("even")
                            .expect("window");
                        if lhs != rhs {
                            return Err(GammaWitness::DividedPower {
                                element: self.basis.names(n)[i].clone(),
                                k,
                                lhs: target.format(n * k as usize, &lhs),
                                rhs: target.format(n * k as usize, &rhs),
                            });
                        }
                    }
                }
            }
        }
        for na in 1..=top {
            for nb in 1..=top - na {
                for i in 0..self.dim(na) {
                    let fa = f.apply(na, &self.unit_vector(na, i)).expect("shape");
                    for j in 0..self.dim(nb) {
                        let lhs = match self.mul_basis(na, i, nb, j) {
                            Some((k, c)) => f
                                .apply(na + nb, &self.unit_vector(na + nb, k))
                                .expect("shape")
                                .iter()
                                .map(|x| x.mul_ref(&c))
                                .collect(),
                            None => vec![S::zero(self.p); target.dim(na + nb)],
                        };
                        let fb = f.apply(nb, &self.unit_vector(nb, j)).expect("shape");
                        let rhs = target.mul(na, &fa, nb, &fb).expect("within window");
                        if lhs != rhs {
                            return Err(GammaWitness::Product {
                                left: self.basis.names(na)[i].clone(),
                                right: self.basis.names(nb)[j].clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the Leibniz rule `θ(ab) = θ(a)b + (-1)^{|θ||a|}aθ(b)` and, for
    /// `Γ`, `θ(γ^k(a)) = θ(a)γ^{k-1}(a)` on even basis elements.
    pub fn check_gamma_derivation(&self, theta: &GradedMap<S>) -> Result<(), GammaWitness> {
        let top = self.max_degree();
        let td = theta.degree();
        let shifted = |n: usize| -> Option<usize> {
            let m = n as i64 + td;
            (m >= 0 && m as usize <= top).then_some(m as usize)
        };
        if self.kind == AlgebraKind::Gamma {
            for n in (2..=top).step_by(2) {
                let Some(tn) = shifted(n) else { continue };
                for i in 0..self.dim(n) {
                    let a = self.unit_vector(n, i);
                    let ta = theta.apply(n, &a).expect("shape");
                    for k in 2..=(top / n) as u32 {
                        let Some(t) = shifted(n * k as usize) else {
                            continue;
                        };
                        let ga = self.divided_power(n, &a, k).expect("even").expect("window");
                        let lhs = theta.apply(n * k as usize, &ga).expect("shape");
                        let gk1 = self
                            .divided_power(n, &a, k - 1)
                            .expect("even")
                            .expect("window");
                        let rhs = self
                            .mul(tn, &ta, n * (k as usize - 1), &gk1)
                            .expect("within window");
                        if lhs != rhs {
                            return Err(GammaWitness::DividedPower {
                                element: self.basis.names(n)[i].clone(),
                                k,
                                lhs: self.format(t, &lhs),
                                rhs: self.format(t, &rhs),
                            });
                        }
                    }
                }
            }
        }
        for na in 1..=top {
            for nb in 1..=top - na {
                let Some(t) = shifted(na + nb) else { continue };
                for i in 0..self.dim(na) {
                    for j in 0..self.dim(nb) {
                        let lhs = match self.mul_basis(na, i, nb, j) {
                            Some((k, c)) => theta
                                .apply(na + nb, &self.unit_vector(na + nb, k))
                                .expect("shape")
                                .iter()
                                .map(|x| x.mul_ref(&c))
                                .collect(),
                            None => vec![S::zero(self.p); self.dim(t)],
                        };
                        let mut rhs = vec![S::zero(self.p); self.dim(t)];
                        if let Some(ta) = shifted(na) {
                            let th = theta.apply(na, &self.unit_vector(na, i)).expect("shape");
                            if let Some(v) = self.mul(ta, &th, nb, &self.unit_vector(nb, j)) {
                                crate::lie::add_into(&mut rhs, &v);
                            }
                        }
                        if let Some(tb) = shifted(nb) {
                            let th = theta.apply(nb, &self.unit_vector(nb, j)).expect("shape");
                            if let Some(mut v) = self.mul(na, &self.unit_vector(na, i), tb, &th) {
                                if td % 2 != 0 && na % 2 == 1 {
                                    v.iter_mut().for_each(|x| *x = -x.clone());
                                }
                                crate::lie::add_into(&mut rhs, &v);
                            }
                        }
                        if lhs != rhs {
                            return Err(GammaWitness::Product {
                                left: self.basis.names(na)[i].clone(),
                                right: self.basis.names(nb)[j].clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `(jk)!/(j!(k!)^j)`, the coefficient in `γ^j(γ^k(a)) = c·γ^{jk}(a)`.
pub fn nested_divided_power_coefficient(j: u64, k: u64) -> BigInt {
    let (q, r) = factorial(j * k).div_rem(&(factorial(j) * factorial(k).pow(j as u32)));
    debug_assert!(r == BigInt::from(0));
    q
}
