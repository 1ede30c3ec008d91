//! Cochains `C*(L,∂) = (ΛV, d_0 + d_1)` with `V = (sL)^♯`, the dual chains
//! on `Γ(sL)`, commutative cochain algebras in general and a
//! quasi-isomorphism check for maps between them.

use crate::gamma::pairing::{PairingError, PairingTable};
use crate::gamma::{FreeAlgebra, GammaError};
use crate::graded::{GradedChainComplex, GradedError, GradedMap};
use crate::lie::{add_into, DgLie, LieError};
use crate::matrix::ExactMatrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CceError {
    #[error("d∘d is nonzero on {monomial} (degree {degree})")]
    SquareNonzero { monomial: String, degree: usize },
    #[error("map does not commute with the differentials on {element} (degree {degree})")]
    NotCochainMap { element: String, degree: usize },
    #[error("generator {generator} has degree {expected} but its image has degree {found}")]
    DegreeMismatch {
        generator: String,
        expected: usize,
        found: usize,
    },
    #[error("map is not an isomorphism on cohomology in degree {degree}")]
    NotQuasiIso { degree: usize },
    #[error("window {requested} needs both algebras up to degree {needed}")]
    WindowTooLarge { requested: usize, needed: usize },
    #[error("pairing is degenerate in degree {0}")]
    DegeneratePairing(usize),
    #[error("generator differential of {0} has the wrong length")]
    DifferentialShape(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// `H^n ≅ R^{rank} ⊕ ⊕ Z/p^{k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u32>,
}

impl CohomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Free cochain complex `d^n: C^n -> C^{n+1}` for `0 <= n < top`.
#[derive(Clone, Debug)]
pub struct CochainComplex<S: Scalar> {
    dims: Vec<usize>,
    d: Vec<ExactMatrix<S>>,
}

impl<S: Scalar> CochainComplex<S> {
    pub fn new(dims: Vec<usize>, d: Vec<ExactMatrix<S>>) -> Self {
        debug_assert_eq!(d.len() + 1, dims.len());
        CochainComplex { dims, d }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `H^n` for `0 <= n < top`; the top degree has no outgoing differential
    /// in the window and is not reported.
    pub fn cohomology(&self) -> Vec<CohomologyGroup> {
        let snfs: Vec<Vec<u32>> = self
            .d
            .iter()
            .map(|m| m.snf_any_ring().invariant_exponents)
            .collect();
        (0..self.top())
            .map(|n| {
                let out_rank = snfs[n].len();
                let (in_rank, torsion) = if n == 0 {
                    (0, Vec::new())
                } else {
                    let e = &snfs[n - 1];
                    (e.len(), e.iter().copied().filter(|&k| k > 0).collect())
                };
                CohomologyGroup {
                    rank: self.dims[n] - out_rank - in_rank,
                    torsion,
                }
            })
            .collect()
    }

    /// `dim H^n(C ⊗ F_p)` for `0 <= n < top`.
    pub fn mod_p_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(|m| m.to_fp().rank()).collect();
        (0..self.top())
            .map(|n| self.dims[n] - ranks[n] - if n > 0 { ranks[n - 1] } else { 0 })
            .collect()
    }
}

/// Commutative cochain algebra `(ΛW, d)` with `d` a degree +1 derivation.
#[derive(Clone, Debug)]
pub struct CochainAlgebra<S: Scalar> {
    algebra: FreeAlgebra<S>,
    d: GradedMap<S>,
}

impl<S: Scalar> CochainAlgebra<S> {
    /// Extends the generator differentials as a derivation and checks `d² = 0`.
    /// `differentials[g]` lives in degree `|w_g| + 1` and is ignored when that
    /// degree is past the cutoff.
    pub fn new(algebra: FreeAlgebra<S>, differentials: &[Vec<S>]) -> Result<Self, CceError> {
        let d = extend_derivation(&algebra, differentials)?;
        let out = CochainAlgebra { algebra, d };
        out.check_square()?;
        Ok(out)
    }

    /// `(ΛW, 0)`.
    pub fn with_zero_differential(algebra: FreeAlgebra<S>) -> Self {
        let basis = algebra.basis().clone();
        let p = algebra.prime();
        CochainAlgebra {
            algebra,
            d: GradedMap::zero(basis.clone(), basis, 1, p),
        }
    }

    pub fn algebra(&self) -> &FreeAlgebra<S> {
        &self.algebra
    }

    pub fn differential(&self) -> &GradedMap<S> {
        &self.d
    }

    pub fn prime(&self) -> u64 {
        self.algebra.prime()
    }

    pub fn max_degree(&self) -> usize {
        self.algebra.max_degree()
    }

    pub fn complex(&self) -> CochainComplex<S> {
        let top = self.max_degree();
        CochainComplex::new(
            (0..=top).map(|n| self.algebra.dim(n)).collect(),
            (0..top).map(|n| self.d.block(n)).collect(),
        )
    }

    pub fn cohomology(&self) -> Vec<CohomologyGroup> {
        self.complex().cohomology()
    }

    fn check_square(&self) -> Result<(), CceError> {
        check_square(&self.algebra, &self.d)
    }

    /// Algebra map to `target` given by generator images `(degree, vector)`,
    /// checked against both differentials.
    pub fn cochain_map(
        &self,
        target: &CochainAlgebra<S>,
        images: &[(usize, Vec<S>)],
    ) -> Result<GradedMap<S>, CceError> {
        let src = &self.algebra;
        for (g, (deg, _)) in images.iter().enumerate() {
            let expected = src.generator_degrees()[g];
            if *deg != expected {
                return Err(CceError::DegreeMismatch {
                    generator: src.generator_names()[g].clone(),
                    expected,
                    found: *deg,
                });
            }
        }
        let vectors: Vec<Vec<S>> = images.iter().map(|(_, v)| v.clone()).collect();
        let f = src.extend_multiplicatively(&target.algebra, &vectors)?;
        let top = src.max_degree().min(target.max_degree());
        for n in 0..top {
            let lhs = f
                .block(n + 1)
                .mul(&self.d.block(n))
                .map_err(GradedError::from)?;
            let rhs = target
                .d
                .block(n)
                .mul(&f.block(n))
                .map_err(GradedError::from)?;
            if lhs != rhs {
                let j = (0..src.dim(n))
                    .find(|&j| lhs.column(j) != rhs.column(j))
                    .expect("some column differs");
                return Err(CceError::NotCochainMap {
                    element: src.basis().names(n)[j].clone(),
                    degree: n,
                });
            }
        }
        Ok(f)
    }

    /// Mapping cone `Cone^c = A^c ⊕ B^{c-1}`, `D(a, b) = (-da, f(a) + db)`,
    /// up to degree `min(N_A, N_B + 1)`.
    pub fn mapping_cone(&self, target: &CochainAlgebra<S>, f: &GradedMap<S>) -> CochainComplex<S> {
        let p = self.prime();
        let top = self.max_degree().min(target.max_degree() + 1);
        let a_dim = |n: usize| self.algebra.dim(n);
        let b_dim = |c: usize| if c == 0 { 0 } else { target.algebra.dim(c - 1) };
        let dims: Vec<usize> = (0..=top).map(|c| a_dim(c) + b_dim(c)).collect();
        let d = (0..top)
            .map(|c| {
                let mut m = ExactMatrix::zeros(dims[c + 1], dims[c], p);
                let da = self.d.block(c);
                for i in 0..da.rows() {
                    for j in 0..da.cols() {
                        m.set(i, j, -da.get(i, j).clone());
                    }
                }
                let fa = f.block(c);
                for i in 0..fa.rows() {
                    for j in 0..fa.cols() {
                        m.set(a_dim(c + 1) + i, j, fa.get(i, j).clone());
                    }
                }
                if c > 0 {
                    let db = target.d.block(c - 1);
                    for i in 0..db.rows() {
                        for j in 0..db.cols() {
                            m.set(a_dim(c + 1) + i, a_dim(c) + j, db.get(i, j).clone());
                        }
                    }
                }
                m
            })
            .collect();
        CochainComplex::new(dims, d)
    }

    /// `Ok(())` when the generator images define a cochain map inducing an
    /// isomorphism `H^n(self) -> H^n(target)` for every `n <= window`.
    pub fn check_quasi_iso(
        &self,
        target: &CochainAlgebra<S>,
        images: &[(usize, Vec<S>)],
        window: usize,
    ) -> Result<(), CceError> {
        let needed = window + 2;
        if self.max_degree() < needed || target.max_degree() + 1 < needed {
            return Err(CceError::WindowTooLarge {
                requested: window,
                needed,
            });
        }
        let f = self.cochain_map(target, images)?;
        let cone = self.mapping_cone(target, &f);
        // H^c(cone) sits between H^{c-1}(f) and H^c(f).
        for (c, h) in cone.cohomology().iter().enumerate().take(window + 2) {
            if !h.is_zero() {
                return Err(CceError::NotQuasiIso {
                    degree: c.saturating_sub(1),
                });
            }
        }
        Ok(())
    }

    /// `check_quasi_iso` as a predicate; a degree mismatch or cohomology
    /// failure gives `false`, a map that is not a cochain map is an error.
    pub fn verify_quasi_iso(
        &self,
        target: &CochainAlgebra<S>,
        images: &[(usize, Vec<S>)],
        window: usize,
    ) -> Result<bool, CceError> {
        match self.check_quasi_iso(target, images, window) {
            Ok(()) => Ok(true),
            Err(CceError::DegreeMismatch { .. } | CceError::NotQuasiIso { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

/// Derivation of degree +1 on `ΛW` with the given values on generators,
/// via `d(m'w) = d(m')w + (-1)^{|m'|} m' dw`.
pub fn extend_derivation<S: Scalar>(
    algebra: &FreeAlgebra<S>,
    differentials: &[Vec<S>],
) -> Result<GradedMap<S>, CceError> {
    let p = algebra.prime();
    let top = algebra.max_degree();
    let degrees = algebra.generator_degrees();
    for (g, v) in differentials.iter().enumerate() {
        let n = degrees[g] + 1;
        if n <= top && v.len() != algebra.dim(n) {
            return Err(CceError::DifferentialShape(
                algebra.generator_names()[g].clone(),
            ));
        }
    }
    let mut columns: Vec<Vec<Vec<S>>> = Vec::with_capacity(top);
    for n in 0..top {
        let mut cols = Vec::with_capacity(algebra.dim(n));
        for i in 0..algebra.dim(n) {
            let m = algebra.monomial(n, i);
            let Some(g) = m.iter().rposition(|&k| k > 0) else {
                cols.push(vec![S::zero(p); algebra.dim(n + 1)]);
                continue;
            };
            let mut rest = m.to_vec();
            rest[g] -= 1;
            let (nr, ir) = algebra.index_of(&rest).expect("admissible");
            let (ng, ig) = algebra
                .index_of(&unit_exponent(m.len(), g))
                .expect("generator");
            let (_, c) = algebra.mul_basis(nr, ir, ng, ig).expect("m' w = ±m");
            let gen = algebra.unit_vector(ng, ig);
            let mut col = algebra
                .mul(nr + 1, &columns[nr][ir], ng, &gen)
                .expect("within cutoff");
            let rest_vec = algebra.unit_vector(nr, ir);
            let mut second = algebra
                .mul(nr, &rest_vec, ng + 1, &differentials[g])
                .expect("within cutoff");
            if nr % 2 == 1 {
                second.iter_mut().for_each(|x| *x = -x.clone());
            }
            add_into(&mut col, &second);
            let inv = c.unit_inverse().expect("sign");
            cols.push(col.iter().map(|x| x.mul_ref(&inv)).collect());
        }
        columns.push(cols);
    }
    let mut d = GradedMap::zero(algebra.basis().clone(), algebra.basis().clone(), 1, p);
    for (n, cols) in columns.iter().enumerate() {
        d.set_block(n, ExactMatrix::from_columns(cols, algebra.dim(n + 1), p))?;
    }
    Ok(d)
}

fn unit_exponent(len: usize, g: usize) -> Vec<u32> {
    let mut e = vec![0; len];
    e[g] = 1;
    e
}

fn check_square<S: Scalar>(algebra: &FreeAlgebra<S>, d: &GradedMap<S>) -> Result<(), CceError> {
    for n in 0..algebra.max_degree().saturating_sub(1) {
        let dd = d.block(n + 1).mul(&d.block(n)).map_err(GradedError::from)?;
        if let Some(j) = (0..dd.cols()).find(|&j| dd.column(j).iter().any(|x| !x.is_zero())) {
            return Err(CceError::SquareNonzero {
                monomial: algebra.basis().names(n)[j].clone(),
                degree: n,
            });
        }
    }
    Ok(())
}

/// `C*(L,∂)` together with the pairing against `Γ(sL)` used to build it.
#[derive(Clone, Debug)]
pub struct CceCochains<S: Scalar> {
    cochains: CochainAlgebra<S>,
    d0: GradedMap<S>,
    d1: GradedMap<S>,
    gamma: FreeAlgebra<S>,
    pairing: PairingTable<S>,
}

/// Cochains up to degree `N_max(L) + 1`, so every `v_x` is present.
pub fn cochains<S: Scalar>(l: &DgLie<S>) -> Result<CceCochains<S>, CceError> {
    cochains_to(l, l.max_degree() + 1)
}

/// Cochains truncated at `max_degree`; generators of `V` above it are dropped.
pub fn cochains_to<S: Scalar>(l: &DgLie<S>, max_degree: usize) -> Result<CceCochains<S>, CceError> {
    let p = l.prime();
    let keep: Vec<usize> = (0..l.len()).filter(|&i| l.degree(i) < max_degree).collect();
    let gens_v: Vec<(String, usize)> = keep
        .iter()
        .map(|&i| (format!("s{}*", l.names()[i]), l.degree(i) + 1))
        .collect();
    let gens_w: Vec<(String, usize)> = keep
        .iter()
        .map(|&i| (format!("s{}", l.names()[i]), l.degree(i) + 1))
        .collect();
    let lambda = FreeAlgebra::lambda(p, max_degree, &gens_v)?;
    let gamma = FreeAlgebra::gamma(p, max_degree, &gens_w)?;
    let pairing = PairingTable::new(&lambda, &gamma)?;
    if let Some(n) = pairing.first_degenerate_degree() {
        return Err(CceError::DegeneratePairing(n));
    }
    let degrees = lambda.generator_degrees().to_vec();
    let sign = |n: usize| {
        if n.is_multiple_of(2) {
            S::one(p)
        } else {
            -S::one(p)
        }
    };

    // Coordinates of a linear functional on Γ(sL)_n as an element of ΛV_n.
    let solve = |n: usize, values: Vec<S>| -> Vec<S> {
        pairing
            .block(n)
            .transpose()
            .solve(&values)
            .expect("square block")
            .expect("unimodular pairing")
    };

    let mut d0_images = Vec::with_capacity(keep.len());
    let mut d1_images = Vec::with_capacity(keep.len());
    for (gy, &y) in keep.iter().enumerate() {
        let n = degrees[gy] + 1;
        if n > max_degree {
            d0_images.push(Vec::new());
            d1_images.push(Vec::new());
            continue;
        }
        // ⟨d0 v_y, sx⟩ = (-1)^{|v_y|} ⟨v_y, s∂x⟩
        let mut values = vec![S::zero(p); gamma.dim(n)];
        for (gx, &x) in keep.iter().enumerate() {
            if degrees[gx] != n {
                continue;
            }
            let (_, idx) = gamma
                .index_of(&unit_exponent(keep.len(), gx))
                .expect("generator");
            values[idx] = sign(degrees[gy]).mul_ref(&l.differential_of(x)[y]);
        }
        d0_images.push(solve(n, values));

        // ⟨d1 v_z, sx·sy⟩ = (-1)^{|sy|} ⟨v_z, s[x,y]⟩, read off on each
        // word-length-two basis element of Γ(sL)_n.
        let mut values = vec![S::zero(p); gamma.dim(n)];
        for (idx, value) in values.iter_mut().enumerate() {
            let b = gamma.monomial(n, idx);
            if b.iter().sum::<u32>() != 2 {
                continue;
            }
            let first = b.iter().position(|&k| k > 0).expect("nonempty");
            let second = b.iter().rposition(|&k| k > 0).expect("nonempty");
            let (nx, ix) = gamma
                .index_of(&unit_exponent(keep.len(), first))
                .expect("generator");
            let (ny, iy) = gamma
                .index_of(&unit_exponent(keep.len(), second))
                .expect("generator");
            // sx·sy = c·b, with c = 2 for a divided square.
            let (_, c) = gamma.mul_basis(nx, ix, ny, iy).expect("in degree n");
            let bracket = &l.bracket_basis(keep[first], keep[second])[y];
            let pairing_value = sign(ny).mul_ref(bracket);
            *value = pairing_value.mul_ref(&c.unit_inverse().expect("p odd"));
        }
        d1_images.push(solve(n, values));
    }
    let d0 = extend_derivation(&lambda, &d0_images)?;
    let d1 = extend_derivation(&lambda, &d1_images)?;
    let d = d0.add(&d1)?;
    check_square(&lambda, &d)?;
    Ok(CceCochains {
        cochains: CochainAlgebra { algebra: lambda, d },
        d0,
        d1,
        gamma,
        pairing,
    })
}

impl<S: Scalar> CceCochains<S> {
    pub fn cochains(&self) -> &CochainAlgebra<S> {
        &self.cochains
    }

    pub fn algebra(&self) -> &FreeAlgebra<S> {
        &self.cochains.algebra
    }

    pub fn d0(&self) -> &GradedMap<S> {
        &self.d0
    }

    pub fn d1(&self) -> &GradedMap<S> {
        &self.d1
    }

    pub fn differential(&self) -> &GradedMap<S> {
        &self.cochains.d
    }

    pub fn gamma(&self) -> &FreeAlgebra<S> {
        &self.gamma
    }

    pub fn pairing(&self) -> &PairingTable<S> {
        &self.pairing
    }

    /// Predual of a degree +1 cochain operator: the degree −1 operator `Q`
    /// on `Γ(sL)` with `⟨δa, b⟩ = (-1)^{|a|+1} ⟨a, Qb⟩`.
    pub fn predual(&self, delta: &GradedMap<S>) -> GradedMap<S> {
        let p = self.gamma.prime();
        let top = self.gamma.max_degree();
        let mut q = GradedMap::zero(
            self.gamma.basis().clone(),
            self.gamma.basis().clone(),
            -1,
            p,
        );
        for n in 1..=top {
            // Q: Γ_n -> Γ_{n-1} is G_{n-1}^{-1} D_{n-1}^T G_n, up to sign.
            let g_low = self.pairing.block(n - 1).inverse().expect("unimodular");
            let m = g_low
                .mul(&delta.block(n - 1).transpose())
                .and_then(|x| x.mul(self.pairing.block(n)))
                .expect("shapes");
            let m = if n % 2 == 1 { m.scale(&-S::one(p)) } else { m };
            q.set_block(n, m).expect("shape");
        }
        q
    }

    /// `C_*(L,∂) = (Γ(sL), ∂_0 + ∂_1)`.
    pub fn chains(&self) -> Result<GradedChainComplex<S>, CceError> {
        Ok(GradedChainComplex::new(
            self.gamma.basis().clone(),
            self.predual(&self.cochains.d),
        )?)
    }
}

/// `C_*(L,∂)`, computed as the predual of the cochains.
pub fn chains<S: Scalar>(l: &DgLie<S>) -> Result<GradedChainComplex<S>, CceError> {
    cochains(l)?.chains()
}
