//! Built-in DGLs and maps: `L_ab(e, f)` with `∂f = pe`, `L_ab(e, f, g)` with
//! `∂f = pe`, the mod-p model of `L_ab(e, f)` with `∂f = e`, and the Hopf
//! automorphism `b ↦ b + c^p` of `U L_ab(a, b, c)`.

use crate::cce::{cochains_to, CceError, CochainAlgebra, CohomologyGroup};
use crate::gamma::FreeAlgebra;
use crate::lie::{DgLie, LieError, PbwAlgebra};
use crate::scalar::{Fp, PLocal, Scalar};
use crate::structure::pbw_series;

/// `N_max = 2np^{r_max} + 2`, enough to see pages `1..=r_max` of the
/// built-in examples.
pub fn default_max_degree(p: u64, n: usize, r_max: u32) -> usize {
    2 * n * (p as usize).pow(r_max) + 2
}

fn unit<S: Scalar>(len: usize, i: usize, c: i64, p: u64) -> Vec<S> {
    let mut v = vec![S::zero(p); len];
    v[i] = S::from_i64(c, p);
    v
}

/// `L_ab(e, f)` over `Z_(p)` with `|e| = 2n-1`, `|f| = 2n`, `∂f = pe`.
pub fn example1(p: u64, n: usize, max_degree: usize) -> Result<DgLie<PLocal>, LieError> {
    let mut l = DgLie::new(p, max_degree, &[("e", 2 * n - 1), ("f", 2 * n)])?;
    l.set_differential(1, unit(2, 0, p as i64, p))?;
    Ok(l)
}

/// `L_ab(e, f, g)` over `Z_(p)` with `|e| = 2n-1`, `|f| = |g| = 2n`, `∂f = pe`.
pub fn example2(p: u64, n: usize, max_degree: usize) -> Result<DgLie<PLocal>, LieError> {
    let mut l = DgLie::new(
        p,
        max_degree,
        &[("e", 2 * n - 1), ("f", 2 * n), ("g", 2 * n)],
    )?;
    l.set_differential(1, unit(3, 0, p as i64, p))?;
    Ok(l)
}

/// `L_ab(e, f)` over `F_p` with `|e| = 2n-1`, `|f| = 2n`, `∂f = e`.
pub fn prop61_lie(p: u64, n: usize, max_degree: usize) -> Result<DgLie<Fp>, LieError> {
    let mut l = DgLie::new(p, max_degree, &[("e", 2 * n - 1), ("f", 2 * n)])?;
    l.set_differential(1, unit(2, 0, 1, p))?;
    Ok(l)
}

/// Outcome of checking the model `(Λ(x_1, y_1), 0) -> C*(L, ∂)`,
/// `x_1 ↦ x^p`, `y_1 ↦ x^{p-1}y`.
#[derive(Clone, Debug)]
pub struct Prop61Report {
    pub p: u64,
    pub n: usize,
    pub window: usize,
    /// `C*(L,∂) = (Λ(x, y), dx = y)` with `x = se*`, `y = sf*`.
    pub cochains_match: bool,
    pub quasi_iso: bool,
    /// `H^k(C*(L,∂))` for `k <= window`.
    pub cochain_cohomology: Vec<CohomologyGroup>,
    /// `dim H_k(UL)` over `F_p` for `k <= window`.
    pub ul_homology: Vec<usize>,
    /// Hilbert series of `U L_ab(e_1, f_1)`, `|e_1| = 2np-1`, `|f_1| = 2np`.
    pub expected_homology: Vec<usize>,
    /// Result of the same check with `y_1 ↦ x^{p-2}y`.
    pub wrong_power_quasi_iso: bool,
}

impl Prop61Report {
    pub fn passed(&self) -> bool {
        self.cochains_match
            && self.quasi_iso
            && self.ul_homology == self.expected_homology
            && !self.wrong_power_quasi_iso
    }

    /// Degrees of the generators of `H(UL)`.
    pub fn generator_degrees(&self) -> (usize, usize) {
        (
            2 * self.n * self.p as usize - 1,
            2 * self.n * self.p as usize,
        )
    }
}

/// Checks the model and the homology of `UL` through degree `window`.
pub fn prop61(p: u64, n: usize, window: usize) -> Result<Prop61Report, CceError> {
    let top = window + 2;
    let l = prop61_lie(p, n, top)?;
    let cc = cochains_to(&l, top)?;
    let target = cc.cochains();
    let lam = target.algebra();
    let (dx_deg, x) = lam.generator(0);
    let (_, y) = lam.generator(1);
    let dx = target.differential().apply(dx_deg, &x)?;
    let cochains_match = lam.generator_degrees() == [2 * n, 2 * n + 1] && dx == y;

    let pp = p as usize;
    let source = CochainAlgebra::with_zero_differential(FreeAlgebra::lambda(
        p,
        top,
        &[("x1", 2 * n * pp), ("y1", 2 * n * pp + 1)],
    )?);
    let power = |k: usize| -> (usize, Vec<Fp>) {
        (
            2 * n * k,
            lam.pow(2 * n, &x, k as u32).expect("within window"),
        )
    };
    let times_y = |(deg, v): (usize, Vec<Fp>)| -> (usize, Vec<Fp>) {
        (
            deg + 2 * n + 1,
            lam.mul(deg, &v, 2 * n + 1, &y).expect("within window"),
        )
    };
    let images = [power(pp), times_y(power(pp - 1))];
    let quasi_iso = source.verify_quasi_iso(target, &images, window)?;
    let wrong = [power(pp), times_y(power(pp - 2))];
    let wrong_power_quasi_iso = source.verify_quasi_iso(target, &wrong, window)?;

    let ul = PbwAlgebra::build(&l)?;
    let ul_homology: Vec<usize> = ul.chain_complex()?.mod_p_homology_dims()[..=window].to_vec();
    let mut gens = vec![0usize; window + 1];
    for d in [2 * n * pp - 1, 2 * n * pp] {
        if d <= window {
            gens[d] += 1;
        }
    }
    let expected_homology = pbw_series(&gens, window);
    Ok(Prop61Report {
        p,
        n,
        window,
        cochains_match,
        quasi_iso,
        cochain_cohomology: target.cohomology()[..=window].to_vec(),
        ul_homology,
        expected_homology,
        wrong_power_quasi_iso,
    })
}

/// `U L_ab(a, b, c)` over `F_p` with `|a| = 2np-1`, `|b| = 2np`, `|c| = 2n`.
pub fn example2_target(p: u64, n: usize, max_degree: usize) -> Result<PbwAlgebra<Fp>, LieError> {
    let pp = p as usize;
    let l = DgLie::new(
        p,
        max_degree,
        &[("a", 2 * n * pp - 1), ("b", 2 * n * pp), ("c", 2 * n)],
    )?;
    PbwAlgebra::build(&l)
}

/// Generator images of `a ↦ a`, `b ↦ b + c^p`, `c ↦ c`.
pub fn example2_automorphism(ul: &PbwAlgebra<Fp>, n: usize) -> Vec<Vec<Fp>> {
    let p = ul.prime();
    let (_, a) = ul.generator(0);
    let (nb, mut b) = ul.generator(1);
    let (_, c) = ul.generator(2);
    let mut cp = c.clone();
    let mut deg = 2 * n;
    for _ in 1..p {
        cp = ul.mul(deg, &cp, 2 * n, &c).expect("within window");
        deg += 2 * n;
    }
    debug_assert_eq!(deg, nb);
    for (x, y) in b.iter_mut().zip(&cp) {
        *x = *x + *y;
    }
    vec![a, b, c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::HopfMorphism;

    #[test]
    fn prop61_for_p3_n1() {
        let r = prop61(3, 1, 12).unwrap();
        assert!(r.cochains_match);
        assert!(r.quasi_iso);
        assert!(!r.wrong_power_quasi_iso);
        assert_eq!(r.ul_homology, r.expected_homology);
        assert_eq!(r.generator_degrees(), (5, 6));
    }

    #[test]
    fn example2_map_is_hopf_but_not_lie() {
        let ul = example2_target(3, 1, 8).unwrap();
        let images = example2_automorphism(&ul, 1);
        let phi = HopfMorphism::new(&ul, &ul, &images).unwrap();
        let v = phi.is_lie_type().unwrap();
        assert!(!v.is_lie_type() && v.agree());
    }
}
