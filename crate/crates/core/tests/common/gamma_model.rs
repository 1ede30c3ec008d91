use dgl_core::gamma::tensor::Combination;
use dgl_core::gamma::FreeAlgebra;
use dgl_core::scalar::{PLocal, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::random_small;

pub const P: u64 = 3;
pub const MAX: usize = 24;
pub const GENS: [(&str, usize); 5] = [("u", 2), ("v", 2), ("w", 4), ("o", 1), ("q", 3)];

pub fn algebra() -> FreeAlgebra<PLocal> {
    FreeAlgebra::gamma(P, MAX, &GENS).unwrap()
}

pub fn monomials(g: &FreeAlgebra<PLocal>, n: usize) -> Vec<Vec<u32>> {
    (0..g.dim(n)).map(|i| g.monomial(n, i).to_vec()).collect()
}

/// Random element of degree `n` supported on monomials with exponents `<= p^2`.
pub fn random_element(rng: &mut ChaCha8Rng, g: &FreeAlgebra<PLocal>, n: usize) -> Vec<PLocal> {
    let mut v = vec![PLocal::zero(P); g.dim(n)];
    let mut idx: Vec<usize> = (0..g.dim(n))
        .filter(|&i| g.monomial(n, i).iter().all(|&e| e as u64 <= P * P))
        .collect();
    idx.shuffle(rng);
    for &i in idx.iter().take(3) {
        v[i] = PLocal::from_i64(random_small(rng), P);
    }
    if v.iter().all(|c| c.is_zero()) && !idx.is_empty() {
        v[idx[0]] = PLocal::one(P);
    }
    v
}

pub fn scaled(v: &[PLocal], c: i64) -> Vec<PLocal> {
    v.iter()
        .map(|x| x.mul_ref(&PLocal::from_i64(c, P)))
        .collect()
}

pub fn sum(a: &[PLocal], b: &[PLocal]) -> Vec<PLocal> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn gp(g: &FreeAlgebra<PLocal>, n: usize, a: &[PLocal], k: u32) -> Vec<PLocal> {
    g.divided_power(n, a, k).unwrap().expect("within cutoff")
}

pub fn max_k(n: usize) -> u32 {
    ((MAX / n) as u32).min((P * P) as u32)
}

pub fn random_word_combination(rng: &mut ChaCha8Rng, letters: usize) -> Combination<PLocal> {
    let mut c = Combination::new();
    for _ in 0..rng.gen_range(1..=2) {
        let len = rng.gen_range(1..=3);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..letters)).collect();
        c.insert(w, PLocal::from_i64(rng.gen_range(1..=4), P));
    }
    c
}

pub fn degree_of(degrees: &[usize], c: &Combination<PLocal>) -> Vec<usize> {
    c.keys()
        .map(|w| w.iter().map(|&i| degrees[i]).sum())
        .collect()
}

fn times(v: &[PLocal], c: &num_bigint::BigInt) -> Vec<PLocal> {
    v.iter()
        .map(|x| x.mul_ref(&PLocal::from_bigint(c, P)))
        .collect()
}

/// Runs the five divided-power axioms and the rational model on `trials`
/// random elements; returns one message per violation.
pub fn axiom_violations(rng: &mut ChaCha8Rng, trials: usize) -> Vec<String> {
    use dgl_core::gamma::nested_divided_power_coefficient;
    use dgl_core::scalar::binomial;

    let g = algebra();
    let degrees: Vec<usize> = GENS.iter().map(|g| g.1).collect();
    let mut bad = Vec::new();
    for t in 0..trials {
        let n = *[2usize, 4, 6].choose(rng).unwrap();
        let a = random_element(rng, &g, n);
        let b = random_element(rng, &g, n);
        let k = rng.gen_range(1..=max_k(n));
        if gp(&g, n, &a, 0) != g.unit_vector(0, 0) || gp(&g, n, &a, 1) != a {
            bad.push(format!("trial {t}: axiom 1"));
        }
        let mut rhs = vec![PLocal::zero(P); g.dim(n * k as usize)];
        for j in 0..=k {
            let prod = g
                .mul(
                    n * j as usize,
                    &gp(&g, n, &a, j),
                    n * (k - j) as usize,
                    &gp(&g, n, &b, k - j),
                )
                .unwrap();
            rhs = sum(&rhs, &prod);
        }
        if gp(&g, n, &sum(&a, &b), k) != rhs {
            bad.push(format!("trial {t}: axiom 2, n = {n}, k = {k}"));
        }
        let j = rng.gen_range(0..=k);
        let lhs = g
            .mul(
                n * j as usize,
                &gp(&g, n, &a, j),
                n * (k - j) as usize,
                &gp(&g, n, &a, k - j),
            )
            .unwrap();
        if lhs != times(&gp(&g, n, &a, k), &binomial(k as u64, j as u64)) {
            bad.push(format!("trial {t}: axiom 3, j = {j}, k = {k}"));
        }
        let (j, k2) = (rng.gen_range(1..=3u32), rng.gen_range(1..=3u32));
        if 2 * (j * k2) as usize <= MAX {
            let a2 = random_element(rng, &g, 2);
            let lhs = gp(&g, 2 * k2 as usize, &gp(&g, 2, &a2, k2), j);
            let c = nested_divided_power_coefficient(j as u64, k2 as u64);
            if lhs != times(&gp(&g, 2, &a2, j * k2), &c) {
                bad.push(format!("trial {t}: axiom 4, j = {j}, k = {k2}"));
            }
        }
        let x = random_element(rng, &g, 2);
        let y = random_element(rng, &g, 4);
        let xy = g.mul(2, &x, 4, &y).unwrap();
        let k3 = rng.gen_range(1..=4u32);
        let rhs = g
            .mul(
                2 * k3 as usize,
                &g.pow(2, &x, k3).unwrap(),
                4 * k3 as usize,
                &gp(&g, 4, &y, k3),
            )
            .unwrap();
        let o = random_element(rng, &g, 3);
        let q = random_element(rng, &g, 5);
        let oq = g.mul(3, &o, 5, &q).unwrap();
        if gp(&g, 6, &xy, k3) != rhs || gp(&g, 8, &oq, 2).iter().any(|c| !c.is_zero()) {
            bad.push(format!("trial {t}: axiom 5"));
        }
        let lhs = super::q_image(&monomials(&g, n * k as usize), &gp(&g, n, &a, k));
        if lhs != super::q_divided(&degrees, &super::q_image(&monomials(&g, n), &a), k) {
            bad.push(format!("trial {t}: rational model, n = {n}, k = {k}"));
        }
    }
    bad
}
