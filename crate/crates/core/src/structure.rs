//! Structural checks on enveloping algebras and their Bockstein pages:
//! whether a coderivation or a Hopf map preserves the Lie algebra (directly
//! and through the dual divided-powers algebra), the Hopf structure induced
//! on each page, and the per-page primitivity and PBW-dimension checks.

use std::collections::BTreeMap;

use crate::bss::{bockstein_pages, bss_of_morphism, BssError, BssResult, SpectralPage};
use crate::gamma::{FreeAlgebra, GammaError, GammaWitness};
use crate::graded::{GradedError, GradedMap, TensorBasis};
use crate::lie::{add_into, LieError, LieMorphism, PbwAlgebra};
use crate::matrix::ExactMatrix;
use crate::scalar::{Fp, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("operator is not a derivation: Leibniz fails on {0}")]
    NotADerivation(String),
    #[error("operator is not a coderivation: fails on {0}")]
    NotACoderivation(String),
    #[error("map is not multiplicative on {left} · {right}")]
    NotAlgebraMap { left: String, right: String },
    #[error("map does not commute with the coproduct on {0}")]
    NotCoalgebraMap(String),
    #[error("image of generator {0} has the wrong degree or length")]
    ImageShape(String),
    #[error("page {page} is not among the computed pages")]
    MissingPage { page: u32 },
    #[error("induced {what} is ill-defined on page {page} in degree {degree}")]
    IllDefined {
        what: &'static str,
        page: u32,
        degree: usize,
    },
    #[error(transparent)]
    Bss(#[from] BssError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Derivation of degree `degree` on `UL` with the given values on the
/// generators, via `θ(m'x) = θ(m')x + (-1)^{|θ||m'|} m'θ(x)` along the PBW
/// basis. `images[g]` lies in degree `|x_g| + degree`; use an empty vector
/// when that degree is outside `0..=N_max`.
pub fn derivation_from_generators<S: Scalar>(
    ul: &PbwAlgebra<S>,
    images: &[Vec<S>],
    degree: i64,
) -> Result<GradedMap<S>, StructureError> {
    let lie = ul.lie();
    let p = ul.prime();
    let top = ul.max_degree();
    let target_degree = |n: usize| -> Option<usize> {
        let m = n as i64 + degree;
        (m >= 0 && m as usize <= top).then_some(m as usize)
    };
    if images.len() != lie.len() {
        return Err(StructureError::ImageShape(format!(
            "{} images",
            images.len()
        )));
    }
    for (g, v) in images.iter().enumerate() {
        let expected = target_degree(lie.degree(g)).map_or(0, |m| ul.dim(m));
        if v.len() != expected {
            return Err(StructureError::ImageShape(lie.names()[g].clone()));
        }
    }
    let mut columns: Vec<Vec<Vec<S>>> = vec![Vec::new(); top + 1];
    for n in 0..=top {
        let Some(t) = target_degree(n) else {
            continue;
        };
        for i in 0..ul.dim(n) {
            let m = ul.monomial(n, i);
            let Some(g) = m.iter().rposition(|&k| k > 0) else {
                columns[n].push(vec![S::zero(p); ul.dim(t)]);
                continue;
            };
            let mut rest = m.to_vec();
            rest[g] -= 1;
            let (nr, ir) = ul.index_of(&rest).expect("prefix of a PBW monomial");
            let (ng, gen) = ul.generator(g);
            let mut col = vec![S::zero(p); ul.dim(t)];
            if let Some(tr) = target_degree(nr) {
                if let Some(v) = ul.mul(tr, &columns[nr][ir], ng, &gen) {
                    add_into(&mut col, &v);
                }
            }
            if let Some(tg) = target_degree(ng) {
                let rest_vec = ul.unit_vector(nr, ir);
                if let Some(mut v) = ul.mul(nr, &rest_vec, tg, &images[g]) {
                    if degree % 2 != 0 && nr % 2 == 1 {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    add_into(&mut col, &v);
                }
            }
            columns[n].push(col);
        }
    }
    let mut theta = GradedMap::zero(ul.basis().clone(), ul.basis().clone(), degree, p);
    for n in 0..=top {
        if let Some(t) = target_degree(n) {
            theta.set_block(n, ExactMatrix::from_columns(&columns[n], ul.dim(t), p))?;
        }
    }
    ul.check_derivation(&theta)
        .map_err(StructureError::NotADerivation)?;
    Ok(theta)
}

/// `f^♯: Γ(target) -> Γ(source)`, the plain transpose of `f` in the
/// dual PBW bases.
pub fn dual_map<S: Scalar>(
    f: &GradedMap<S>,
    source_dual: &FreeAlgebra<S>,
    target_dual: &FreeAlgebra<S>,
) -> GradedMap<S> {
    let p = f.prime();
    let d = f.degree();
    let mut out = GradedMap::zero(
        target_dual.basis().clone(),
        source_dual.basis().clone(),
        -d,
        p,
    );
    for m in 0..=target_dual.max_degree() {
        let n = m as i64 - d;
        if n < 0 || n as usize > source_dual.max_degree() {
            continue;
        }
        out.set_block(m, f.block(n as usize).transpose())
            .expect("dual shapes");
    }
    out
}

/// First generator whose image in `UL` has a component outside `L`, as
/// `"x ↦ image"`.
fn leaves_lie<S: Scalar>(
    target: &PbwAlgebra<S>,
    names: &[String],
    images: impl Iterator<Item = (usize, usize, Vec<S>)>,
) -> Result<(), String> {
    for (g, n, v) in images {
        let outside = v
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && target.monomial(n, i).iter().sum::<u32>() != 1);
        if outside {
            return Err(format!("{} ↦ {}", names[g], target.format(n, &v)));
        }
    }
    Ok(())
}

/// The two verdicts on whether `∂(L) ⊆ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionVerdict {
    /// Direct check on generators; the witness is the offending image.
    pub direct: Result<(), String>,
    /// Whether `∂^♯` is a Γ-derivation of `(UL)^♯ = Γ(L^♯)`.
    pub dual: Result<(), GammaWitness>,
}

impl RestrictionVerdict {
    pub fn restricts(&self) -> bool {
        self.direct.is_ok()
    }

    pub fn agree(&self) -> bool {
        self.direct.is_ok() == self.dual.is_ok()
    }
}

/// Decides `θ(L) ⊆ L` for a derivation and coderivation `θ` of `UL`, both
/// directly and by testing `θ^♯` for the Γ-derivation property.
pub fn differential_restricts_to_lie<S: Scalar>(
    ul: &PbwAlgebra<S>,
    theta: &GradedMap<S>,
) -> Result<RestrictionVerdict, StructureError> {
    ul.check_derivation(theta)
        .map_err(StructureError::NotADerivation)?;
    ul.check_coderivation(theta)
        .map_err(StructureError::NotACoderivation)?;
    let lie = ul.lie();
    let images = (0..lie.len()).filter_map(|g| {
        let (n, x) = ul.generator(g);
        let t = n as i64 + theta.degree();
        (t >= 0 && t as usize <= ul.max_degree())
            .then(|| (g, t as usize, theta.apply(n, &x).expect("shape")))
    });
    let direct = leaves_lie(ul, lie.names(), images);
    let gamma = FreeAlgebra::dual_of_ul(ul)?;
    let dual_theta = dual_map(theta, &gamma, &gamma);
    let dual = gamma.check_gamma_derivation(&dual_theta);
    Ok(RestrictionVerdict { direct, dual })
}

/// Hopf algebra map `UL_1 -> UL_2` determined by the images of the
/// generators of `L_1`.
#[derive(Clone, Debug)]
pub struct HopfMorphism<'a, S: Scalar> {
    source: &'a PbwAlgebra<S>,
    target: &'a PbwAlgebra<S>,
    map: GradedMap<S>,
}

impl<'a, S: Scalar> HopfMorphism<'a, S> {
    /// Extends the images multiplicatively along the PBW basis, then checks
    /// multiplicativity on all basis pairs and `Δφ = (φ ⊗ φ)Δ`.
    pub fn new(
        source: &'a PbwAlgebra<S>,
        target: &'a PbwAlgebra<S>,
        images: &[Vec<S>],
    ) -> Result<Self, StructureError> {
        let lie = source.lie();
        let p = source.prime();
        if images.len() != lie.len() {
            return Err(StructureError::ImageShape(format!(
                "{} images",
                images.len()
            )));
        }
        for (g, v) in images.iter().enumerate() {
            let n = lie.degree(g);
            if n <= target.max_degree() && v.len() != target.dim(n) {
                return Err(StructureError::ImageShape(lie.names()[g].clone()));
            }
        }
        let top = source.max_degree().min(target.max_degree());
        let mut map = GradedMap::zero(source.basis().clone(), target.basis().clone(), 0, p);
        for n in 0..=top {
            let cols: Vec<Vec<S>> = (0..source.dim(n))
                .map(|i| {
                    let mut acc = target.unit();
                    let mut deg = 0;
                    for (g, &k) in source.monomial(n, i).iter().enumerate() {
                        for _ in 0..k {
                            acc = target
                                .mul(deg, &acc, lie.degree(g), &images[g])
                                .expect("within window");
                            deg += lie.degree(g);
                        }
                    }
                    acc
                })
                .collect();
            map.set_block(n, ExactMatrix::from_columns(&cols, target.dim(n), p))?;
        }
        let phi = HopfMorphism {
            source,
            target,
            map,
        };
        phi.check_algebra()?;
        phi.check_coalgebra()?;
        Ok(phi)
    }

    /// `U(θ)` for a Lie algebra morphism `θ`.
    pub fn from_lie_morphism(
        source: &'a PbwAlgebra<S>,
        target: &'a PbwAlgebra<S>,
        theta: &LieMorphism<S>,
    ) -> Result<Self, StructureError> {
        theta.check(source.lie(), target.lie())?;
        let inclusion = target.lie_inclusion();
        let pos = target.lie().positions();
        let images: Vec<Vec<S>> = (0..source.lie().len())
            .map(|g| {
                let n = source.lie().degree(g);
                let v = theta.apply(target.lie(), &source.lie().unit(g));
                // Coordinates of θ(x_g) within the degree-n block of L_2.
                let block: Vec<S> = pos
                    .iter()
                    .enumerate()
                    .filter(|(_, (d, _))| *d == n)
                    .map(|(h, _)| v[h].clone())
                    .collect();
                inclusion.apply(n, &block).expect("shape")
            })
            .collect();
        Self::new(source, target, &images)
    }

    pub fn map(&self) -> &GradedMap<S> {
        &self.map
    }

    pub fn source(&self) -> &PbwAlgebra<S> {
        self.source
    }

    pub fn target(&self) -> &PbwAlgebra<S> {
        self.target
    }

    /// `other ∘ self`.
    pub fn then<'b>(
        &self,
        other: &HopfMorphism<'b, S>,
    ) -> Result<HopfMorphism<'a, S>, StructureError>
    where
        'b: 'a,
    {
        let images: Vec<Vec<S>> = (0..self.source.lie().len())
            .map(|g| {
                let (n, x) = self.source.generator(g);
                let y = self.map.apply(n, &x).expect("shape");
                other.map.apply(n, &y).expect("shape")
            })
            .collect();
        HopfMorphism::new(self.source, other.target, &images)
    }

    fn check_algebra(&self) -> Result<(), StructureError> {
        let (src, tgt) = (self.source, self.target);
        let top = src.max_degree().min(tgt.max_degree());
        for na in 1..top {
            for nb in 1..=top - na {
                for i in 0..src.dim(na) {
                    let a = src.unit_vector(na, i);
                    let fa = self.map.apply(na, &a).expect("shape");
                    for j in 0..src.dim(nb) {
                        let b = src.unit_vector(nb, j);
                        let ab = src.mul(na, &a, nb, &b).expect("window");
                        let lhs = self.map.apply(na + nb, &ab).expect("shape");
                        let fb = self.map.apply(nb, &b).expect("shape");
                        let rhs = tgt.mul(na, &fa, nb, &fb).expect("window");
                        if lhs != rhs {
                            return Err(StructureError::NotAlgebraMap {
                                left: src.basis().names(na)[i].clone(),
                                right: src.basis().names(nb)[j].clone(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_coalgebra(&self) -> Result<(), StructureError> {
        let (src, tgt) = (self.source, self.target);
        let top = src.max_degree().min(tgt.max_degree());
        for n in 0..=top {
            for i in 0..src.dim(n) {
                let u = src.unit_vector(n, i);
                let lhs = tgt.apply_coproduct(n, &self.map.apply(n, &u).expect("shape"));
                let du = src.apply_coproduct(n, &u);
                let rhs =
                    src.tensor_basis()
                        .apply(tgt.tensor_basis(), &self.map, &self.map, n, &du);
                if lhs != rhs {
                    return Err(StructureError::NotCoalgebraMap(
                        src.basis().names(n)[i].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Decides `φ(L_1) ⊆ L_2` directly and by testing `φ^♯` for the
    /// Γ-morphism property.
    pub fn is_lie_type(&self) -> Result<LieTypeVerdict, StructureError> {
        let images = (0..self.source.lie().len()).filter_map(|g| {
            let (n, x) = self.source.generator(g);
            (n <= self.target.max_degree()).then(|| (g, n, self.map.apply(n, &x).expect("shape")))
        });
        let direct = leaves_lie(self.target, self.source.lie().names(), images);
        let src_dual = FreeAlgebra::dual_of_ul(self.source)?;
        let tgt_dual = FreeAlgebra::dual_of_ul(self.target)?;
        let f = dual_map(&self.map, &src_dual, &tgt_dual);
        let dual = tgt_dual.check_gamma_morphism(&src_dual, &f);
        Ok(LieTypeVerdict { direct, dual })
    }
}

/// The two verdicts on whether a Hopf map comes from a Lie algebra map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieTypeVerdict {
    pub direct: Result<(), String>,
    pub dual: Result<(), GammaWitness>,
}

impl LieTypeVerdict {
    pub fn is_lie_type(&self) -> bool {
        self.direct.is_ok()
    }

    pub fn agree(&self) -> bool {
        self.direct.is_ok() == self.dual.is_ok()
    }
}

fn lift<S: Scalar>(x: &Fp, p: u64) -> S {
    S::from_i64(x.value() as i64, p)
}

/// Product, coproduct and `β^r` induced on one page of the BSS of `UL`.
#[derive(Clone, Debug)]
pub struct PageAlgebra<'a, S: Scalar> {
    ul: &'a PbwAlgebra<S>,
    bss: &'a BssResult<S>,
    r: u32,
    tensor: TensorBasis,
    /// `slot_rows[n][i]`: the row of `P_n^{-1}` at the slot of class `i`, mod p.
    slot_rows: Vec<Vec<Vec<Fp>>>,
}

impl<'a, S: Scalar> PageAlgebra<'a, S> {
    /// `bss` must be the BSS of `ul.chain_complex()`.
    pub fn new(
        ul: &'a PbwAlgebra<S>,
        bss: &'a BssResult<S>,
        r: u32,
    ) -> Result<Self, StructureError> {
        let page = bss.page(r).ok_or(StructureError::MissingPage { page: r })?;
        let tensor = TensorBasis::new(page.basis(), page.basis(), page.window());
        let dec = bss.decomposition();
        let slot_rows = (0..=page.window())
            .map(|n| {
                let inv = dec.inverse(n);
                page.classes(n)
                    .iter()
                    .map(|c| inv.row(c.slot).iter().map(|x| x.to_fp()).collect())
                    .collect()
            })
            .collect();
        Ok(PageAlgebra {
            ul,
            bss,
            r,
            tensor,
            slot_rows,
        })
    }

    pub fn page(&self) -> &SpectralPage<S> {
        self.bss.page(self.r).expect("checked")
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn window(&self) -> usize {
        self.page().window()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.page().dim(n)
    }

    pub fn tensor_basis(&self) -> &TensorBasis {
        &self.tensor
    }

    pub fn unit_vector(&self, n: usize, i: usize) -> Vec<Fp> {
        let mut v = vec![Fp::new(0, self.ul.prime()); self.dim(n)];
        v[i] = Fp::new(1, self.ul.prime());
        v
    }

    /// A chain representing the page element `u`.
    pub fn lift(&self, n: usize, u: &[Fp]) -> Vec<S> {
        let p = self.ul.prime();
        let mut out = vec![S::zero(p); self.ul.dim(n)];
        for (c, class) in u.iter().zip(self.page().classes(n)) {
            if !c.is_zero() {
                let s: S = lift(c, p);
                for (o, x) in out.iter_mut().zip(&class.representative) {
                    o.add_mul_assign(&s, x);
                }
            }
        }
        out
    }

    fn class(&self, n: usize, z: &[S], what: &'static str) -> Result<Vec<Fp>, StructureError> {
        self.bss
            .class_of(self.r, n, z)
            .ok_or(StructureError::IllDefined {
                what,
                page: self.r,
                degree: n,
            })
    }

    /// `uv`, or `None` past the window.
    pub fn mul(
        &self,
        na: usize,
        u: &[Fp],
        nb: usize,
        v: &[Fp],
    ) -> Result<Option<Vec<Fp>>, StructureError> {
        if na + nb > self.window() {
            return Ok(None);
        }
        let ab = self
            .ul
            .mul(na, &self.lift(na, u), nb, &self.lift(nb, v))
            .expect("within window");
        self.class(na + nb, &ab, "product").map(Some)
    }

    pub fn pow(&self, n: usize, u: &[Fp], k: u32) -> Result<Option<Vec<Fp>>, StructureError> {
        let p = self.ul.prime();
        let mut acc = vec![Fp::new(1, p); self.dim(0)];
        let mut deg = 0;
        for _ in 0..k {
            match self.mul(deg, &acc, n, u)? {
                Some(v) => acc = v,
                None => return Ok(None),
            }
            deg += n;
        }
        Ok(Some(acc))
    }

    /// `Δu` in the page tensor basis, read off through the splitting of the
    /// complex into surviving and dying elementary pieces.
    pub fn coproduct(&self, n: usize, u: &[Fp]) -> Vec<Fp> {
        let p = self.ul.prime();
        let mut dz: BTreeMap<usize, Fp> = BTreeMap::new();
        for (i, c) in self.lift(n, u).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_fp();
            for (r, x) in self.ul.coproduct_column(n, i) {
                let e = dz.entry(*r).or_insert(Fp::new(0, p));
                *e = *e + c * x.to_fp();
            }
        }
        let ul_tensor = self.ul.tensor_basis();
        let starts: Vec<usize> = (0..=n).map(|a| ul_tensor.block(n, a).start).collect();
        let mut out = vec![Fp::new(0, p); self.tensor.dim(n)];
        for (r, c) in dz {
            if c.is_zero() {
                continue;
            }
            let a = starts.partition_point(|&s| s <= r) - 1;
            let b = n - a;
            let (ra, rb) = (&self.slot_rows[a], &self.slot_rows[b]);
            let off = r - starts[a];
            let (k, l) = (off / self.ul.dim(b), off % self.ul.dim(b));
            for (i, row_a) in ra.iter().enumerate() {
                let x = row_a[k] * c;
                if x.is_zero() {
                    continue;
                }
                for (j, row_b) in rb.iter().enumerate() {
                    let t = self.tensor.index(a, i, b, j);
                    out[t] = out[t] + x * row_b[l];
                }
            }
        }
        out
    }

    pub fn coproduct_matrix(&self, n: usize) -> ExactMatrix<Fp> {
        let cols: Vec<Vec<Fp>> = (0..self.dim(n))
            .map(|i| self.coproduct(n, &self.unit_vector(n, i)))
            .collect();
        ExactMatrix::from_columns(&cols, self.tensor.dim(n), self.ul.prime())
    }

    /// Primitives `P(E^r)_n` for `1 <= n <= window`, as a basis per degree.
    pub fn primitives(&self) -> Vec<Vec<Vec<Fp>>> {
        let p = self.ul.prime();
        let mut out = vec![Vec::new()];
        for n in 1..=self.window() {
            let cols: Vec<Vec<Fp>> = (0..self.dim(n))
                .map(|i| self.coproduct(n, &self.unit_vector(n, i)))
                .collect();
            // Keep the rows outside u⊗1 and 1⊗u that some column reaches.
            let rows: Vec<usize> = (0..self.tensor.dim(n))
                .filter(|&r| !self.is_unit_row(n, r) && cols.iter().any(|c| !c[r].is_zero()))
                .collect();
            let mut m = ExactMatrix::zeros(rows.len(), self.dim(n), p);
            for (j, c) in cols.iter().enumerate() {
                for (i, &r) in rows.iter().enumerate() {
                    m.set(i, j, c[r]);
                }
            }
            out.push(m.kernel_basis());
        }
        out
    }

    fn is_unit_row(&self, n: usize, r: usize) -> bool {
        self.tensor.block(n, 0).contains(&r) || self.tensor.block(n, n).contains(&r)
    }

    pub fn is_primitive(&self, n: usize, u: &[Fp]) -> bool {
        let d = self.coproduct(n, u);
        d.iter()
            .enumerate()
            .all(|(k, x)| x.is_zero() || self.is_unit_row(n, k))
    }

    /// `β^r(uv) = β^r(u)v + (-1)^{|u|} uβ^r(v)` on all pairs of page classes.
    pub fn check_beta_derivation(&self) -> Result<(), StructureError> {
        let beta = self.page().beta();
        let top = self.window();
        for na in 0..=top {
            for nb in 0..=top - na {
                for i in 0..self.dim(na) {
                    for j in 0..self.dim(nb) {
                        let (u, v) = (self.unit_vector(na, i), self.unit_vector(nb, j));
                        let Some(uv) = self.mul(na, &u, nb, &v)? else {
                            continue;
                        };
                        if na + nb == 0 {
                            continue;
                        }
                        let lhs = beta.apply(na + nb, &uv).expect("shape");
                        let mut rhs = vec![Fp::new(0, self.ul.prime()); self.dim(na + nb - 1)];
                        if na > 0 {
                            let bu = beta.apply(na, &u).expect("shape");
                            if let Some(x) = self.mul(na - 1, &bu, nb, &v)? {
                                add_into(&mut rhs, &x);
                            }
                        }
                        if nb > 0 {
                            let bv = beta.apply(nb, &v).expect("shape");
                            if let Some(mut x) = self.mul(na, &u, nb - 1, &bv)? {
                                if na % 2 == 1 {
                                    x.iter_mut().for_each(|c| *c = -*c);
                                }
                                add_into(&mut rhs, &x);
                            }
                        }
                        if lhs != rhs {
                            return Err(StructureError::NotADerivation(format!(
                                "β^{} on page {} at ({}, {})",
                                self.r,
                                self.r,
                                self.page().classes(na)[i].name,
                                self.page().classes(nb)[j].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `Δβ^r = (β^r ⊗ 1 + 1 ⊗ β^r)Δ` on every page class.
    pub fn check_beta_coderivation(&self) -> Result<(), StructureError> {
        let beta = self.page().beta();
        let id = GradedMap::identity(self.page().basis(), self.ul.prime());
        for n in 1..=self.window() {
            for i in 0..self.dim(n) {
                let u = self.unit_vector(n, i);
                let lhs = self.coproduct(n - 1, &beta.apply(n, &u).expect("shape"));
                let du = self.coproduct(n, &u);
                let mut rhs = self.tensor.apply(&self.tensor, beta, &id, n, &du);
                add_into(
                    &mut rhs,
                    &self.tensor.apply(&self.tensor, &id, beta, n, &du),
                );
                if lhs != rhs {
                    return Err(StructureError::NotACoderivation(format!(
                        "β^{} on {}",
                        self.r,
                        self.page().classes(n)[i].name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Hilbert series through degree `max` of the enveloping algebra of an
/// abelian Lie algebra with `dims[n]` generators in degree `n`: polynomial
/// on even and exterior on odd generators.
pub fn pbw_series(dims: &[usize], max: usize) -> Vec<usize> {
    let mut series = vec![0usize; max + 1];
    series[0] = 1;
    for (n, &count) in dims.iter().enumerate().skip(1) {
        for _ in 0..count {
            if n % 2 == 0 {
                for m in n..=max {
                    series[m] += series[m - n];
                }
            } else {
                for m in (n..=max).rev() {
                    series[m] += series[m - n];
                }
            }
        }
    }
    series
}

/// Per-page results of the checks run by `verify_theorem3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem3Page {
    pub r: u32,
    pub page_dims: Vec<usize>,
    pub primitive_dims: Vec<usize>,
    /// `dim P(E^r)_n` minus the rank of `p`-th powers of even primitives.
    pub lie_dims: Vec<usize>,
    pub pbw_dims: Vec<usize>,
    /// (a) `β^r(P(E^r)) ⊆ P(E^r)`.
    pub closed_under_beta: Result<(), String>,
    /// (b) `E^r` has the Hilbert series of `U(L^r)` with `L^r` as above.
    pub pbw_series: Result<(), String>,
    /// (c) `im E^r(ι) ⊆ P(E^r)`.
    pub lie_image: Result<(), String>,
}

impl Theorem3Page {
    pub fn passed(&self) -> bool {
        self.closed_under_beta.is_ok() && self.pbw_series.is_ok() && self.lie_image.is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem3Report {
    pub window: usize,
    pub pages: Vec<Theorem3Page>,
}

impl Theorem3Report {
    pub fn passed(&self) -> bool {
        self.pages.iter().all(Theorem3Page::passed)
    }
}

/// Runs checks (a)–(c) on pages `1..=r_max` of the BSS of `U(L,∂)`.
pub fn verify_theorem3<S: Scalar>(
    ul: &PbwAlgebra<S>,
    r_max: u32,
) -> Result<Theorem3Report, StructureError> {
    let p = ul.prime();
    let ul_complex = ul.chain_complex()?;
    let lie_complex = ul.lie().chain_complex()?;
    let ul_bss = bockstein_pages(&ul_complex, r_max)?;
    let lie_bss = bockstein_pages(&lie_complex, r_max)?;
    let iota = bss_of_morphism(
        &ul.lie_inclusion(),
        &lie_complex,
        &ul_complex,
        &lie_bss,
        &ul_bss,
    )?;
    let window = ul_bss.window();
    let mut pages = Vec::new();
    for r in 1..=r_max {
        let page = PageAlgebra::new(ul, &ul_bss, r)?;
        let prims = page.primitives();
        let primitive_dims: Vec<usize> = prims.iter().map(|b| b.len()).collect();
        let beta = page.page().beta();

        let mut closed_under_beta = Ok(());
        'outer: for n in 2..=window {
            for u in &prims[n] {
                let bu = beta.apply(n, u).expect("shape");
                if !page.is_primitive(n - 1, &bu) {
                    closed_under_beta = Err(format!(
                        "β^{r} of the primitive {} is not primitive",
                        format_page(page.page(), n, u)
                    ));
                    break 'outer;
                }
            }
        }

        let mut lie_dims = primitive_dims.clone();
        let mut power_error = None;
        for n in (2..=window).step_by(2) {
            let m = n * p as usize;
            if m > window {
                break;
            }
            let mut powers = Vec::new();
            for u in &prims[n] {
                match page.pow(n, u, p as u32)? {
                    Some(v) => powers.push(v),
                    None => break,
                }
            }
            if powers.is_empty() {
                continue;
            }
            let rank = ExactMatrix::from_columns(&powers, page.dim(m), p).rank();
            if rank > lie_dims[m] {
                power_error = Some(format!("p-th powers in degree {m} are not primitive"));
            } else {
                lie_dims[m] -= rank;
            }
        }
        let pbw_dims = pbw_series(&lie_dims, window);
        let page_dims: Vec<usize> = (0..=window).map(|n| page.dim(n)).collect();
        let pbw_check = match power_error {
            Some(e) => Err(e),
            None => match (0..=window).find(|&n| pbw_dims[n] != page_dims[n]) {
                Some(n) => Err(format!(
                    "degree {n}: dim E^{r} = {} but the PBW count gives {}",
                    page_dims[n], pbw_dims[n]
                )),
                None => Ok(()),
            },
        };

        let mut lie_image = Ok(());
        let lie_page = lie_bss.page(r).expect("computed");
        'img: for n in 1..=window {
            let block = iota[(r - 1) as usize].block(n);
            for j in 0..lie_page.dim(n) {
                let v = block.column(j);
                if !page.is_primitive(n, &v) {
                    lie_image = Err(format!(
                        "E^{r}(ι)({}) = {} is not primitive",
                        lie_page.classes(n)[j].name,
                        format_page(page.page(), n, &v)
                    ));
                    break 'img;
                }
            }
        }

        pages.push(Theorem3Page {
            r,
            page_dims,
            primitive_dims,
            lie_dims,
            pbw_dims,
            closed_under_beta,
            pbw_series: pbw_check,
            lie_image,
        });
    }
    Ok(Theorem3Report { window, pages })
}

fn format_page<S: Scalar>(page: &SpectralPage<S>, n: usize, v: &[Fp]) -> String {
    crate::graded::format_vector(page.basis().names(n), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::DgLie;

    const P: u64 = 3;

    fn f(n: i64) -> Fp {
        Fp::new(n, P)
    }

    /// `L_ab(a, b, c)` over `F_3` with the given degrees, no differential.
    fn abelian(max: usize, gens: &[(&str, usize)]) -> PbwAlgebra<Fp> {
        PbwAlgebra::build(&DgLie::<Fp>::new(P, max, gens).unwrap()).unwrap()
    }

    #[test]
    fn pbw_series_of_one_even_and_one_odd() {
        assert_eq!(pbw_series(&[0, 1, 1], 4), vec![1, 1, 1, 1, 1]);
        assert_eq!(pbw_series(&[0, 0, 2], 4), vec![1, 0, 2, 0, 3]);
    }

    #[test]
    fn zero_derivation_restricts() {
        let ul = abelian(8, &[("e", 1), ("f", 2)]);
        let zero = GradedMap::zero(ul.basis().clone(), ul.basis().clone(), -1, P);
        let v = differential_restricts_to_lie(&ul, &zero).unwrap();
        assert!(v.restricts() && v.agree());
    }

    #[test]
    fn pth_power_perturbation_is_caught_both_ways() {
        let ul = abelian(8, &[("a", 6), ("b", 7), ("c", 2)]);
        let (_, a) = ul.generator(0);
        let (_, c) = ul.generator(2);
        let c3 = ul
            .mul(2, &c, 2, &c)
            .and_then(|c2| ul.mul(4, &c2, 2, &c))
            .unwrap();
        let mut db = a.clone();
        add_into(&mut db, &c3);
        let images = vec![vec![f(0); ul.dim(5)], db, vec![f(0); ul.dim(1)]];
        let theta = derivation_from_generators(&ul, &images, -1).unwrap();
        let v = differential_restricts_to_lie(&ul, &theta).unwrap();
        assert!(!v.restricts());
        assert!(v.agree());
        match v.dual {
            Err(GammaWitness::DividedPower { element, k, .. }) => {
                assert_eq!(element, "c*");
                assert_eq!(k, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn example_two_automorphism_is_not_of_lie_type() {
        let ul = abelian(8, &[("a", 5), ("b", 6), ("c", 2)]);
        let (_, a) = ul.generator(0);
        let (_, b) = ul.generator(1);
        let (_, c) = ul.generator(2);
        let c3 = ul
            .mul(2, &c, 2, &c)
            .and_then(|c2| ul.mul(4, &c2, 2, &c))
            .unwrap();
        let mut bb = b.clone();
        add_into(&mut bb, &c3);
        let phi = HopfMorphism::new(&ul, &ul, &[a.clone(), bb, c.clone()]).unwrap();
        let v = phi.is_lie_type().unwrap();
        assert!(!v.is_lie_type());
        assert!(v.agree());
        let id = HopfMorphism::new(&ul, &ul, &[a, b, c]).unwrap();
        let v = id.is_lie_type().unwrap();
        assert!(v.is_lie_type() && v.agree());
    }

    #[test]
    fn non_primitive_image_is_not_hopf() {
        let ul = abelian(8, &[("a", 4), ("c", 2)]);
        let (_, c) = ul.generator(1);
        let c2 = ul.mul(2, &c, 2, &c).unwrap();
        assert!(matches!(
            HopfMorphism::new(&ul, &ul, &[c2, c]),
            Err(StructureError::NotCoalgebraMap(_))
        ));
    }

    #[test]
    fn theorem3_on_zero_differential() {
        let ul = abelian(10, &[("e", 3), ("f", 2)]);
        let report = verify_theorem3(&ul, 2).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
