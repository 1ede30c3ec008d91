//! The pairings `TV ⊗ T_C W -> R` and `ΛV ⊗ ΓW -> R` for `W = V^♯` with
//! dual bases, so that `⟨v_i, w_j⟩ = δ_ij` and `|w_i| ≡ |v_i|` mod 2.

use crate::matrix::ExactMatrix;
use crate::scalar::Scalar;
use crate::sign::koszul_sign;

use super::tensor::Combination;
use super::{AlgebraKind, FreeAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairingError {
    #[error(
        "left side must be an exterior-polynomial algebra and right side a divided-powers algebra"
    )]
    WrongKinds,
    #[error("generator degrees of the two sides are not dual")]
    MismatchedBases,
}

/// `⟨v_{i_1}⊗...⊗v_{i_k}, [w_{j_1}|...|w_{j_k}]⟩`: zero unless the words
/// agree letter by letter, otherwise the sign of the permutation
/// `v_1..v_k w_1..w_k ↦ v_1 w_1 ... v_k w_k`.
pub fn tensor_pairing(degrees: &[usize], left: &[usize], right: &[usize]) -> i32 {
    if left != right {
        return 0;
    }
    let k = left.len();
    let mut degs: Vec<i64> = left.iter().map(|&l| degrees[l] as i64).collect();
    degs.extend(degs.clone());
    let order: Vec<usize> = (0..k).flat_map(|i| [i, k + i]).collect();
    koszul_sign(&degs, &order)
}

/// Pairing of a word against a combination of words.
pub fn pair_with_combination<S: Scalar>(
    degrees: &[usize],
    left: &[usize],
    right: &Combination<S>,
    p: u64,
) -> S {
    let mut acc = S::zero(p);
    for (w, c) in right {
        let s = tensor_pairing(degrees, left, w);
        if s != 0 {
            acc.add_mul_assign(c, &S::from_i64(s as i64, p));
        }
    }
    acc
}

/// The word `[v_1|..|v_1|v_2|..]` lifting the monomial `v_1^{a_1}v_2^{a_2}...`.
pub fn ordered_word(exponents: &[u32]) -> Vec<usize> {
    exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i, a as usize))
        .collect()
}

/// Matrices of `ΛV ⊗ ΓW -> R`, one per degree, rows indexed by the
/// monomials of `ΛV` and columns by those of `ΓW`.
#[derive(Clone, Debug)]
pub struct PairingTable<S: Scalar> {
    blocks: Vec<ExactMatrix<S>>,
}

impl<S: Scalar> PairingTable<S> {
    pub fn new(lambda: &FreeAlgebra<S>, gamma: &FreeAlgebra<S>) -> Result<Self, PairingError> {
        if lambda.kind() != AlgebraKind::Lambda || gamma.kind() != AlgebraKind::Gamma {
            return Err(PairingError::WrongKinds);
        }
        if lambda.generator_degrees() != gamma.generator_degrees()
            || lambda.max_degree() != gamma.max_degree()
        {
            return Err(PairingError::MismatchedBases);
        }
        let p = lambda.prime();
        let degrees = lambda.generator_degrees();
        let blocks = (0..=lambda.max_degree())
            .map(|n| {
                let mut m = ExactMatrix::zeros(lambda.dim(n), gamma.dim(n), p);
                for i in 0..lambda.dim(n) {
                    let a = lambda.monomial(n, i);
                    // The block-ordered word occurs in the shuffle image of
                    // γ^b(w) with coefficient 1, and only when a = b.
                    if let Some((_, j)) = gamma.index_of(a) {
                        let w = ordered_word(a);
                        m.set(i, j, S::from_i64(tensor_pairing(degrees, &w, &w) as i64, p));
                    }
                }
                m
            })
            .collect();
        Ok(PairingTable { blocks })
    }

    /// Same table, computed by pairing the lifted word of each monomial
    /// against the full shuffle image of each divided-power monomial.
    pub fn by_shuffles(
        lambda: &FreeAlgebra<S>,
        gamma: &FreeAlgebra<S>,
    ) -> Result<Self, PairingError> {
        if lambda.kind() != AlgebraKind::Lambda || gamma.kind() != AlgebraKind::Gamma {
            return Err(PairingError::WrongKinds);
        }
        if lambda.generator_degrees() != gamma.generator_degrees()
            || lambda.max_degree() != gamma.max_degree()
        {
            return Err(PairingError::MismatchedBases);
        }
        let p = lambda.prime();
        let degrees = lambda.generator_degrees();
        let blocks = (0..=lambda.max_degree())
            .map(|n| {
                let mut m = ExactMatrix::zeros(lambda.dim(n), gamma.dim(n), p);
                for j in 0..gamma.dim(n) {
                    let image = gamma.embed_monomial(n, j).expect("gamma side");
                    for i in 0..lambda.dim(n) {
                        let w = ordered_word(lambda.monomial(n, i));
                        m.set(i, j, pair_with_combination(degrees, &w, &image, p));
                    }
                }
                m
            })
            .collect();
        Ok(PairingTable { blocks })
    }

    pub fn block(&self, n: usize) -> &ExactMatrix<S> {
        &self.blocks[n]
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `⟨a, b⟩` for homogeneous `a ∈ ΛV_n`, `b ∈ ΓW_n`.
    pub fn pair(&self, n: usize, a: &[S], b: &[S]) -> S {
        let mb = self.blocks[n]
            .mul_vec(b)
            .expect("vector of the block width");
        let p = self.blocks[n].prime();
        let mut acc = S::zero(p);
        for (x, y) in a.iter().zip(&mb) {
            acc.add_mul_assign(x, y);
        }
        acc
    }

    /// First degree whose pairing matrix is not invertible over the ring.
    pub fn first_degenerate_degree(&self) -> Option<usize> {
        self.blocks.iter().position(|m| !m.is_unimodular())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PLocal;

    const P: u64 = 3;

    #[test]
    fn generators_pair_to_delta() {
        let d = [2, 3];
        assert_eq!(tensor_pairing(&d, &[0], &[0]), 1);
        assert_eq!(tensor_pairing(&d, &[1], &[1]), 1);
        assert_eq!(tensor_pairing(&d, &[0], &[1]), 0);
        assert_eq!(tensor_pairing(&d, &[0, 1], &[0]), 0);
    }

    #[test]
    fn odd_pair_sign() {
        // v_1 v_2 w_1 w_2 -> v_1 w_1 v_2 w_2 moves w_1 past v_2.
        assert_eq!(tensor_pairing(&[1, 3], &[0, 1], &[0, 1]), -1);
        assert_eq!(tensor_pairing(&[2, 3], &[0, 1], &[0, 1]), 1);
    }

    #[test]
    fn table_matches_shuffle_expansion() {
        let gens = [("x", 2usize), ("y", 3), ("z", 1)];
        let l = FreeAlgebra::<PLocal>::lambda(P, 12, &gens).unwrap();
        let g = FreeAlgebra::<PLocal>::gamma(P, 12, &gens).unwrap();
        let fast = PairingTable::new(&l, &g).unwrap();
        let slow = PairingTable::by_shuffles(&l, &g).unwrap();
        for n in 0..=12 {
            assert_eq!(fast.block(n), slow.block(n), "degree {n}");
        }
        assert_eq!(fast.first_degenerate_degree(), None);
    }
}
