mod common;

use common::gamma_model::*;
use common::{is_integral, q_divided, q_image, q_mul, rng};
use dgl_core::gamma::nested_divided_power_coefficient;
use dgl_core::gamma::pairing::PairingTable;
use dgl_core::gamma::tensor::{shuffle_product, Combination};
use dgl_core::gamma::FreeAlgebra;
use dgl_core::scalar::{binomial, PLocal, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn axiom1_unit_and_identity() {
    let g = algebra();
    let mut r = rng(1);
    for n in [2, 4, 6, 8] {
        let a = random_element(&mut r, &g, n);
        assert_eq!(gp(&g, n, &a, 0), g.unit_vector(0, 0));
        assert_eq!(gp(&g, n, &a, 1), a);
    }
}

#[test]
fn axiom2_sum_rule() {
    let g = algebra();
    let mut r = rng(2);
    for _ in 0..30 {
        let n = *[2usize, 4, 6].choose(&mut r).unwrap();
        let k = r.gen_range(1..=max_k(n));
        let a = random_element(&mut r, &g, n);
        let b = random_element(&mut r, &g, n);
        let lhs = gp(&g, n, &sum(&a, &b), k);
        let mut rhs = vec![PLocal::zero(P); g.dim(n * k as usize)];
        for j in 0..=k {
            let ga = gp(&g, n, &a, j);
            let gb = gp(&g, n, &b, k - j);
            let prod = g
                .mul(n * j as usize, &ga, n * (k - j) as usize, &gb)
                .unwrap();
            rhs = sum(&rhs, &prod);
        }
        assert_eq!(lhs, rhs, "n = {n}, k = {k}");
    }
}

#[test]
fn axiom3_product_of_divided_powers() {
    let g = algebra();
    let mut r = rng(3);
    for _ in 0..30 {
        let n = *[2usize, 4].choose(&mut r).unwrap();
        let j = r.gen_range(0..=max_k(n) / 2);
        let k = r.gen_range(0..=max_k(n) - j);
        let a = random_element(&mut r, &g, n);
        let lhs = g
            .mul(
                n * j as usize,
                &gp(&g, n, &a, j),
                n * k as usize,
                &gp(&g, n, &a, k),
            )
            .unwrap();
        let c = binomial((j + k) as u64, j as u64);
        let rhs: Vec<PLocal> = gp(&g, n, &a, j + k)
            .iter()
            .map(|x| x.mul_ref(&PLocal::from_bigint(&c, P)))
            .collect();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn axiom4_nested_divided_powers() {
    let g = algebra();
    let mut r = rng(4);
    for (j, k) in [
        (2u32, 2u32),
        (2, 3),
        (3, 2),
        (2, 4),
        (4, 3),
        (3, 3),
        (6, 2),
        (2, 6),
    ] {
        let n = 2;
        if n * (j * k) as usize > MAX {
            continue;
        }
        let a = random_element(&mut r, &g, n);
        let inner = gp(&g, n, &a, k);
        let lhs = gp(&g, n * k as usize, &inner, j);
        let c = nested_divided_power_coefficient(j as u64, k as u64);
        let rhs: Vec<PLocal> = gp(&g, n, &a, j * k)
            .iter()
            .map(|x| x.mul_ref(&PLocal::from_bigint(&c, P)))
            .collect();
        assert_eq!(lhs, rhs, "j = {j}, k = {k}");
    }
}

#[test]
fn axiom4_coefficients_are_integral() {
    let fact = |n: u64| -> BigInt { (1..=n).fold(BigInt::from(1), |a, k| a * k) };
    for j in 1..=6u64 {
        for k in 1..=6u64 {
            let c = nested_divided_power_coefficient(j, k);
            let q = BigRational::new(fact(j * k), fact(j) * fact(k).pow(j as u32));
            assert!(is_integral(&q));
            assert_eq!(q.to_integer(), c);
            let swapped = BigRational::new(fact(j * k), fact(j).pow(k as u32) * fact(k));
            assert!(is_integral(&swapped));
        }
    }
}

#[test]
fn axiom5_products() {
    let g = algebra();
    let mut r = rng(5);
    for _ in 0..20 {
        // Both even: γ^k(ab) = a^k γ^k(b).
        let a = random_element(&mut r, &g, 2);
        let b = random_element(&mut r, &g, 4);
        let ab = g.mul(2, &a, 4, &b).unwrap();
        let k = r.gen_range(1..=4);
        let lhs = gp(&g, 6, &ab, k);
        let ak = g.pow(2, &a, k).unwrap();
        let rhs = g
            .mul(2 * k as usize, &ak, 4 * k as usize, &gp(&g, 4, &b, k))
            .unwrap();
        assert_eq!(lhs, rhs);
        // Both odd: γ^k(ab) = 0 for k >= 2.
        let x = random_element(&mut r, &g, 3);
        let y = random_element(&mut r, &g, 5);
        let xy = g.mul(3, &x, 5, &y).unwrap();
        let k = r.gen_range(2..=3);
        assert!(gp(&g, 8, &xy, k).iter().all(|c| c.is_zero()));
    }
}

#[test]
fn divided_powers_match_rational_model() {
    let g = algebra();
    let degrees: Vec<usize> = GENS.iter().map(|g| g.1).collect();
    let mut r = rng(6);
    for _ in 0..40 {
        let n = *[2usize, 4, 6, 8].choose(&mut r).unwrap();
        let k = r.gen_range(0..=max_k(n));
        let a = random_element(&mut r, &g, n);
        let lhs = q_image(&monomials(&g, n * k as usize), &gp(&g, n, &a, k));
        let rhs = q_divided(&degrees, &q_image(&monomials(&g, n), &a), k);
        assert_eq!(lhs, rhs, "n = {n}, k = {k}");
    }
}

#[test]
fn products_match_rational_model() {
    let g = algebra();
    let degrees: Vec<usize> = GENS.iter().map(|g| g.1).collect();
    let mut r = rng(7);
    for _ in 0..40 {
        let na = r.gen_range(1..=10);
        let nb = r.gen_range(1..=MAX - na);
        let a = random_element(&mut r, &g, na);
        let b = random_element(&mut r, &g, nb);
        let ab = g.mul(na, &a, nb, &b).unwrap();
        let lhs = q_image(&monomials(&g, na + nb), &ab);
        let rhs = q_mul(
            &degrees,
            &q_image(&monomials(&g, na), &a),
            &q_image(&monomials(&g, nb), &b),
        );
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn shuffle_product_is_associative_and_graded_commutative() {
    let degrees = [1usize, 2, 3, 4];
    let mut r = rng(8);
    for _ in 0..60 {
        let a = random_word_combination(&mut r, 4);
        let b = random_word_combination(&mut r, 4);
        let c = random_word_combination(&mut r, 4);
        let left = shuffle_product(&degrees, &shuffle_product(&degrees, &a, &b), &c);
        let right = shuffle_product(&degrees, &a, &shuffle_product(&degrees, &b, &c));
        assert_eq!(left, right);

        // Commutativity per homogeneous pair of words.
        for (wa, ca) in &a {
            for (wb, cb) in &b {
                let x: Combination<PLocal> = [(wa.clone(), ca.clone())].into();
                let y: Combination<PLocal> = [(wb.clone(), cb.clone())].into();
                let da = degree_of(&degrees, &x)[0];
                let db = degree_of(&degrees, &y)[0];
                let sign = if da * db % 2 == 1 { -1 } else { 1 };
                let xy = shuffle_product(&degrees, &x, &y);
                let yx: Combination<PLocal> = shuffle_product(&degrees, &y, &x)
                    .into_iter()
                    .map(|(w, c)| (w, c.mul_ref(&PLocal::from_i64(sign, P))))
                    .collect();
                assert_eq!(xy, yx);
            }
        }
    }
}

#[test]
fn pairing_is_nondegenerate_in_every_degree() {
    for p in [3u64, 5] {
        let gens = [("a", 1usize), ("b", 2), ("c", 2), ("d", 3), ("e", 4)];
        let lam = FreeAlgebra::<PLocal>::lambda(p, 16, &gens).unwrap();
        let gam = FreeAlgebra::<PLocal>::gamma(p, 16, &gens).unwrap();
        let table = PairingTable::new(&lam, &gam).unwrap();
        assert_eq!(table.first_degenerate_degree(), None);
        let brute = PairingTable::by_shuffles(&lam, &gam).unwrap();
        for n in 0..=16 {
            assert_eq!(table.block(n), brute.block(n), "degree {n}");
        }
    }
}

#[test]
fn rational_model_sanity() {
    // γ^2(u) ↦ u^2/2 and u·u = 2γ^2(u).
    let g = algebra();
    let (_, u) = g.generator(0);
    let uu = g.mul(2, &u, 2, &u).unwrap();
    let img = q_image(&monomials(&g, 4), &uu);
    assert_eq!(img.len(), 1);
    assert!(!img.values().next().unwrap().is_zero());
    assert_eq!(uu, scaled(&gp(&g, 2, &u, 2), 2));
}
