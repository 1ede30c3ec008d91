//! Graded Lie algebras and DGLs given by a basis, structure constants and a
//! differential, with validation of every axiom on basis elements.

mod pbw;

pub(crate) use pbw::add_into;
pub use pbw::{PbwAlgebra, PrimitiveSpace};

use std::fmt;

use crate::graded::{GradedBasis, GradedChainComplex, GradedError, GradedMap};
use crate::matrix::ExactMatrix;
use crate::scalar::{Fp, Scalar};
use crate::sign::transposition_sign;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("generator {name:?} has degree {degree} above N_max = {max}")]
    DegreeTooLarge {
        name: String,
        degree: usize,
        max: usize,
    },
    #[error("coefficient vector has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("invalid DGL:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    NotAMorphism(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    NonPositiveDegree,
    BracketDegree,
    DifferentialDegree,
    AntiCommutativity,
    OddSquare,
    Jacobi,
    Derivation,
    DifferentialSquare,
}

impl ViolationKind {
    pub fn label(&self) -> &'static str {
        match self {
            ViolationKind::NonPositiveDegree => "generator of non-positive degree",
            ViolationKind::BracketDegree => "bracket degree mismatch",
            ViolationKind::DifferentialDegree => "differential degree mismatch",
            ViolationKind::AntiCommutativity => "anti-commutativity fails",
            ViolationKind::OddSquare => "[x,[x,x]] nonzero for odd x",
            ViolationKind::Jacobi => "Jacobi identity fails",
            ViolationKind::Derivation => "differential is not a derivation",
            ViolationKind::DifferentialSquare => "differential does not square to zero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.kind.label(), v.witness)?;
        }
        Ok(())
    }
}

/// Graded Lie algebra with basis `x_1, ..., x_s` (in input order),
/// `[x_i, x_j] = Σ c_{ij}^k x_k` and `∂x_i = Σ a_i^k x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLie<S: Scalar> {
    p: u64,
    max_degree: usize,
    names: Vec<String>,
    degrees: Vec<usize>,
    bracket: Vec<Vec<Vec<S>>>,
    diff: Vec<Vec<S>>,
}

impl<S: Scalar> DgLie<S> {
    /// Abelian Lie algebra with zero differential on the given generators.
    pub fn new<N: AsRef<str>>(
        p: u64,
        max_degree: usize,
        generators: &[(N, usize)],
    ) -> Result<Self, LieError> {
        let mut names: Vec<String> = Vec::new();
        let mut degrees = Vec::new();
        for (name, deg) in generators {
            let name = name.as_ref().to_string();
            if names.contains(&name) {
                return Err(LieError::DuplicateGenerator(name));
            }
            if *deg > max_degree {
                return Err(LieError::DegreeTooLarge {
                    name,
                    degree: *deg,
                    max: max_degree,
                });
            }
            names.push(name);
            degrees.push(*deg);
        }
        let s = names.len();
        Ok(DgLie {
            p,
            max_degree,
            names,
            degrees,
            bracket: vec![vec![vec![S::zero(p); s]; s]; s],
            diff: vec![vec![S::zero(p); s]; s],
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LieError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))
    }

    fn check_len(&self, v: &[S]) -> Result<(), LieError> {
        if v.len() != self.len() {
            return Err(LieError::Length {
                expected: self.len(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Sets `[x_i, x_j]` only; the mirror entry is left alone.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: Vec<S>) -> Result<(), LieError> {
        self.check_len(&value)?;
        self.bracket[i][j] = value;
        Ok(())
    }

    /// Sets `[x_i, x_j]` and `[x_j, x_i] = -(-1)^{|x_i||x_j|}[x_i, x_j]`.
    pub fn set_bracket_antisymmetric(
        &mut self,
        i: usize,
        j: usize,
        value: Vec<S>,
    ) -> Result<(), LieError> {
        let sign = -transposition_sign(self.degrees[i] as i64, self.degrees[j] as i64);
        let mirror: Vec<S> = value
            .iter()
            .map(|c| c.mul_ref(&S::from_i64(sign as i64, self.p)))
            .collect();
        self.set_bracket(i, j, value)?;
        if i != j {
            self.set_bracket(j, i, mirror)?;
        }
        Ok(())
    }

    pub fn set_differential(&mut self, i: usize, value: Vec<S>) -> Result<(), LieError> {
        self.check_len(&value)?;
        self.diff[i] = value;
        Ok(())
    }

    /// Coefficient vector of the generator `x_i`.
    pub fn unit(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(self.p); self.len()];
        v[i] = S::one(self.p);
        v
    }

    /// `[x_i, x_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[S] {
        &self.bracket[i][j]
    }

    /// `∂x_i`.
    pub fn differential_of(&self, i: usize) -> &[S] {
        &self.diff[i]
    }

    pub fn bracket(&self, u: &[S], v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(self.p); self.len()];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul_ref(b);
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    out[k].add_mul_assign(&ab, c);
                }
            }
        }
        out
    }

    pub fn apply_differential(&self, u: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(self.p); self.len()];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, c) in self.diff[i].iter().enumerate() {
                out[k].add_mul_assign(a, c);
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().flatten().all(|c| c.is_zero())
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().flatten().all(|c| c.is_zero())
    }

    pub fn format_element(&self, v: &[S]) -> String {
        crate::graded::format_vector(&self.names, v)
    }

    /// Runs every axiom check on all generator pairs and triples.
    pub fn validate(&self) -> ValidationReport {
        let mut out = Vec::new();
        let s = self.len();
        let deg = |i: usize| self.degrees[i] as i64;
        let mut push = |kind, witness: String| out.push(Violation { kind, witness });
        let neg = |v: &[S]| v.iter().map(|c| -c.clone()).collect::<Vec<S>>();
        let add = |a: &[S], b: &[S]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.add_ref(y))
                .collect::<Vec<S>>()
        };
        let scaled = |sign: i32, v: &[S]| -> Vec<S> {
            if sign < 0 {
                neg(v)
            } else {
                v.to_vec()
            }
        };
        let is_zero = |v: &[S]| v.iter().all(|c| c.is_zero());

        for i in 0..s {
            if self.degrees[i] == 0 {
                push(
                    ViolationKind::NonPositiveDegree,
                    format!("|{}| = 0", self.names[i]),
                );
            }
            for (k, c) in self.diff[i].iter().enumerate() {
                if !c.is_zero() && deg(k) != deg(i) - 1 {
                    push(
                        ViolationKind::DifferentialDegree,
                        format!(
                            "∂{} has a {} term in degree {}, expected {}",
                            self.names[i],
                            self.names[k],
                            deg(k),
                            deg(i) - 1
                        ),
                    );
                }
            }
        }
        for i in 0..s {
            for j in 0..s {
                for (k, c) in self.bracket[i][j].iter().enumerate() {
                    if !c.is_zero() && deg(k) != deg(i) + deg(j) {
                        push(
                            ViolationKind::BracketDegree,
                            format!(
                                "[{},{}] has a {} term in degree {}, expected {}",
                                self.names[i],
                                self.names[j],
                                self.names[k],
                                deg(k),
                                deg(i) + deg(j)
                            ),
                        );
                    }
                }
                let lhs = &self.bracket[i][j];
                let rhs = scaled(-transposition_sign(deg(i), deg(j)), &self.bracket[j][i]);
                if i <= j && *lhs != rhs {
                    push(
                        ViolationKind::AntiCommutativity,
                        format!(
                            "[{a},{b}] = {} but -(-1)^(|{a}||{b}|)[{b},{a}] = {}",
                            self.format_element(lhs),
                            self.format_element(&rhs),
                            a = self.names[i],
                            b = self.names[j]
                        ),
                    );
                }
                // ∂[x,y] = [∂x,y] + (-1)^{|x|}[x,∂y]
                let lhs = self.apply_differential(lhs);
                let rhs = add(
                    &self.bracket(&self.diff[i], &self.unit(j)),
                    &scaled(
                        if deg(i) % 2 == 0 { 1 } else { -1 },
                        &self.bracket(&self.unit(i), &self.diff[j]),
                    ),
                );
                if lhs != rhs {
                    push(
                        ViolationKind::Derivation,
                        format!(
                            "∂[{},{}] = {} but [∂x,y] ± [x,∂y] = {}",
                            self.names[i],
                            self.names[j],
                            self.format_element(&lhs),
                            self.format_element(&rhs)
                        ),
                    );
                }
            }
            if deg(i) % 2 != 0 {
                let xx = self.bracket(&self.unit(i), &self.unit(i));
                let w = self.bracket(&self.unit(i), &xx);
                if !is_zero(&w) {
                    push(
                        ViolationKind::OddSquare,
                        format!(
                            "[{x},[{x},{x}]] = {}",
                            self.format_element(&w),
                            x = self.names[i]
                        ),
                    );
                }
            }
            let dd = self.apply_differential(&self.diff[i]);
            if !is_zero(&dd) {
                push(
                    ViolationKind::DifferentialSquare,
                    format!("∂∂{} = {}", self.names[i], self.format_element(&dd)),
                );
            }
        }
        // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let (x, y, z) = (self.unit(i), self.unit(j), self.unit(k));
                    let lhs = self.bracket(&x, &self.bracket(&y, &z));
                    let rhs = add(
                        &self.bracket(&self.bracket(&x, &y), &z),
                        &scaled(
                            transposition_sign(deg(i), deg(j)),
                            &self.bracket(&y, &self.bracket(&x, &z)),
                        ),
                    );
                    if lhs != rhs {
                        push(
                            ViolationKind::Jacobi,
                            format!(
                                "x={}, y={}, z={}: [x,[y,z]] = {} but [[x,y],z] ± [y,[x,z]] = {}",
                                self.names[i],
                                self.names[j],
                                self.names[k],
                                self.format_element(&lhs),
                                self.format_element(&rhs)
                            ),
                        );
                    }
                }
            }
        }
        ValidationReport { violations: out }
    }

    pub fn ensure_valid(&self) -> Result<(), LieError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(LieError::Invalid(report))
        }
    }

    /// Position of each generator inside its degree of [`Self::basis`].
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut count = vec![0usize; self.max_degree + 1];
        self.degrees
            .iter()
            .map(|&d| {
                count[d] += 1;
                (d, count[d] - 1)
            })
            .collect()
    }

    /// Generators graded by degree, in input order within each degree.
    pub fn basis(&self) -> GradedBasis {
        let mut b = GradedBasis::new(self.max_degree);
        for (n, d) in self.names.iter().zip(&self.degrees) {
            b.push(*d, n.clone()).expect("names are unique");
        }
        b
    }

    /// `(L, ∂)` as a chain complex.
    pub fn chain_complex(&self) -> Result<GradedChainComplex<S>, LieError> {
        let basis = self.basis();
        let pos = self.positions();
        let mut d = GradedMap::zero(basis.clone(), basis.clone(), -1, self.p);
        for n in 1..=self.max_degree {
            let mut m = ExactMatrix::zeros(basis.dim(n as i64 - 1), basis.dim(n as i64), self.p);
            for i in (0..self.len()).filter(|&i| self.degrees[i] == n) {
                for (k, c) in self.diff[i].iter().enumerate() {
                    if !c.is_zero() {
                        m.set(pos[k].1, pos[i].1, c.clone());
                    }
                }
            }
            d.set_block(n, m)?;
        }
        Ok(GradedChainComplex::new(basis, d)?)
    }

    /// Same structure constants with a new cutoff.
    pub fn with_max_degree(&self, max_degree: usize) -> Result<Self, LieError> {
        if let Some(i) = (0..self.len()).find(|&i| self.degrees[i] > max_degree) {
            return Err(LieError::DegreeTooLarge {
                name: self.names[i].clone(),
                degree: self.degrees[i],
                max: max_degree,
            });
        }
        let mut out = self.clone();
        out.max_degree = max_degree;
        Ok(out)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DgLie<T> {
        DgLie {
            p: self.p,
            max_degree: self.max_degree,
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            bracket: self
                .bracket
                .iter()
                .map(|r| r.iter().map(|v| v.iter().map(&f).collect()).collect())
                .collect(),
            diff: self
                .diff
                .iter()
                .map(|v| v.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_fp(&self) -> DgLie<Fp> {
        self.map_scalars(|c| c.to_fp())
    }
}

/// Degree-preserving linear map of Lie algebras given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieMorphism<S: Scalar> {
    /// `images[i]` is the image of source generator `i` in target coordinates.
    pub images: Vec<Vec<S>>,
}

impl<S: Scalar> LieMorphism<S> {
    pub fn identity(l: &DgLie<S>) -> Self {
        LieMorphism {
            images: (0..l.len()).map(|i| l.unit(i)).collect(),
        }
    }

    pub fn apply(&self, target: &DgLie<S>, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(target.prime()); target.len()];
        for (i, a) in v.iter().enumerate() {
            for (k, c) in self.images[i].iter().enumerate() {
                out[k].add_mul_assign(a, c);
            }
        }
        out
    }

    /// `ψ ∘ self`.
    pub fn then(&self, psi: &LieMorphism<S>, middle: &DgLie<S>) -> LieMorphism<S> {
        LieMorphism {
            images: self.images.iter().map(|v| psi.apply(middle, v)).collect(),
        }
    }

    /// Checks degrees, brackets and differentials on generators.
    pub fn check(&self, source: &DgLie<S>, target: &DgLie<S>) -> Result<(), LieError> {
        if self.images.len() != source.len() {
            return Err(LieError::NotAMorphism(format!(
                "{} images for {} generators",
                self.images.len(),
                source.len()
            )));
        }
        for (i, img) in self.images.iter().enumerate() {
            target.check_len(img)?;
            if img
                .iter()
                .enumerate()
                .any(|(k, c)| !c.is_zero() && target.degree(k) != source.degree(i))
            {
                return Err(LieError::NotAMorphism(format!(
                    "image of {} is not of degree {}",
                    source.names[i],
                    source.degree(i)
                )));
            }
            if self.apply(target, source.differential_of(i)) != target.apply_differential(img) {
                return Err(LieError::NotAMorphism(format!(
                    "does not commute with ∂ on {}",
                    source.names[i]
                )));
            }
            for (j, jmg) in self.images.iter().enumerate() {
                if self.apply(target, source.bracket_basis(i, j)) != target.bracket(img, jmg) {
                    return Err(LieError::NotAMorphism(format!(
                        "does not preserve [{},{}]",
                        source.names[i], source.names[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PLocal;

    const P: u64 = 3;

    fn c(n: i64) -> PLocal {
        PLocal::from_i64(n, P)
    }

    #[test]
    fn abelian_is_valid() {
        let l = DgLie::<PLocal>::new(P, 10, &[("e", 1), ("f", 2)]).unwrap();
        assert!(l.validate().is_valid());
    }

    #[test]
    fn example_differential_is_valid() {
        let mut l = DgLie::<PLocal>::new(P, 10, &[("e", 1), ("f", 2)]).unwrap();
        l.set_differential(1, vec![c(3), c(0)]).unwrap();
        assert!(l.validate().is_valid());
        let h = l.chain_complex().unwrap().homology().unwrap();
        assert_eq!(h.torsion()[1], vec![1]);
    }

    #[test]
    fn broken_anticommutativity_is_reported() {
        let mut l = DgLie::<PLocal>::new(P, 10, &[("a", 2), ("b", 2), ("c", 4)]).unwrap();
        l.set_bracket(0, 1, vec![c(0), c(0), c(1)]).unwrap();
        let r = l.validate();
        assert!(r.has(ViolationKind::AntiCommutativity));
        l.set_bracket_antisymmetric(0, 1, vec![c(0), c(0), c(1)])
            .unwrap();
        assert!(l.validate().is_valid());
    }

    #[test]
    fn bracket_degree_mismatch_is_reported() {
        let mut l = DgLie::<PLocal>::new(P, 10, &[("a", 2), ("b", 2), ("c", 3)]).unwrap();
        l.set_bracket_antisymmetric(0, 1, vec![c(0), c(0), c(1)])
            .unwrap();
        let r = l.validate();
        assert!(r.has(ViolationKind::BracketDegree));
        assert!(r.to_string().contains("bracket degree mismatch"));
    }

    #[test]
    fn non_derivation_is_reported() {
        // [a,b] = c with ∂b = e but ∂c = 0 while [a,e] = 0: ∂[a,b] ≠ [a,∂b] unless [a,e] = ∂c.
        let mut l =
            DgLie::<PLocal>::new(P, 10, &[("a", 2), ("b", 3), ("c", 5), ("e", 2), ("g", 4)])
                .unwrap();
        let unit = |k: usize| -> Vec<PLocal> { (0..5).map(|i| c((i == k) as i64)).collect() };
        l.set_bracket_antisymmetric(0, 1, unit(2)).unwrap();
        l.set_bracket_antisymmetric(0, 3, unit(4)).unwrap();
        l.set_differential(1, unit(3)).unwrap();
        let r = l.validate();
        assert!(r.has(ViolationKind::Derivation), "{r}");
        l.set_differential(2, unit(4)).unwrap();
        assert!(l.validate().is_valid(), "{}", l.validate());
    }

    #[test]
    fn differential_square_is_reported() {
        let mut l = DgLie::<PLocal>::new(P, 10, &[("a", 1), ("b", 2), ("c", 3)]).unwrap();
        l.set_differential(2, vec![c(0), c(1), c(0)]).unwrap();
        l.set_differential(1, vec![c(1), c(0), c(0)]).unwrap();
        assert!(l.validate().has(ViolationKind::DifferentialSquare));
    }

    #[test]
    fn jacobi_failure_is_reported() {
        // [x,y] = z and [z,u] = w with u otherwise central breaks Jacobi on (x, y, u).
        let mut l =
            DgLie::<PLocal>::new(P, 12, &[("x", 2), ("y", 2), ("u", 2), ("z", 4), ("w", 6)])
                .unwrap();
        let unit = |k: usize| -> Vec<PLocal> { (0..5).map(|i| c((i == k) as i64)).collect() };
        l.set_bracket_antisymmetric(0, 1, unit(3)).unwrap();
        l.set_bracket_antisymmetric(3, 2, unit(4)).unwrap();
        assert!(l.validate().has(ViolationKind::Jacobi));
    }

    #[test]
    fn lie_morphism_check() {
        let mut l = DgLie::<PLocal>::new(P, 10, &[("e", 1), ("f", 2)]).unwrap();
        l.set_differential(1, vec![c(3), c(0)]).unwrap();
        let id = LieMorphism::identity(&l);
        assert!(id.check(&l, &l).is_ok());
        let twice = LieMorphism {
            images: vec![vec![c(2), c(0)], vec![c(2), c(0)]],
        };
        assert!(twice.check(&l, &l).is_err());
    }
}
