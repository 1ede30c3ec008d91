#![allow(dead_code)]

pub mod gamma_model;

use std::collections::BTreeMap;

use dgl_core::bss::bockstein_pages;
use dgl_core::graded::{GradedBasis, GradedChainComplex};
use dgl_core::lie::DgLie;
use dgl_core::matrix::ExactMatrix;
use dgl_core::scalar::{PLocal, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Integer matrices mod p^R, eliminated by minimal-valuation pivoting.

pub type IMat = Vec<Vec<i128>>;

fn valuation(mut x: i128, p: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

fn inverse_mod(a: i128, q: i128) -> i128 {
    let (mut r0, mut r1) = (a.rem_euclid(q), q);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(q)
}

/// Reduces `a` (rows x cols, entries mod `p^big_r`) to diagonal form.
/// Returns the pivot valuations and the accumulated column operations `v`,
/// so that `a * v` is row-equivalent to the diagonal.
fn eliminate(mut a: IMat, cols: usize, p: i128, big_r: u32) -> (Vec<u32>, IMat) {
    let q = p.pow(big_r);
    let rows = a.len();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(q);
        }
    }
    let mut v: IMat = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut exps = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                let e = valuation(x, p, big_r);
                if e < big_r && best.is_none_or(|b| e < b.0) {
                    best = Some((e, i, j));
                }
            }
        }
        let Some((e, i, j)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        let pe = p.pow(e);
        let u = inverse_mod(a[t][t] / pe, q);
        for x in a[t].iter_mut() {
            *x = (*x * u).rem_euclid(q);
        }
        for i2 in 0..rows {
            if i2 != t && a[i2][t] != 0 {
                let c = a[i2][t] / pe;
                for j2 in 0..cols {
                    a[i2][j2] = (a[i2][j2] - c * a[t][j2]).rem_euclid(q);
                }
            }
        }
        for j2 in 0..cols {
            if j2 != t && a[t][j2] != 0 {
                let c = a[t][j2] / pe;
                for row in a.iter_mut() {
                    row[j2] = (row[j2] - c * row[t]).rem_euclid(q);
                }
                for row in v.iter_mut() {
                    row[j2] = (row[j2] - c * row[t]).rem_euclid(q);
                }
            }
        }
        exps.push(e);
    }
    (exps, v)
}

/// Generators of `{x : a x = 0}` in `(Z/p^big_r)^cols`.
pub fn kernel_mod(a: &IMat, cols: usize, p: i128, big_r: u32) -> Vec<Vec<i128>> {
    let q = p.pow(big_r);
    if big_r == 0 {
        return (0..cols)
            .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
            .collect();
    }
    let (exps, v) = eliminate(a.clone(), cols, p, big_r);
    (0..cols)
        .map(|i| {
            let scale = if i < exps.len() {
                p.pow(big_r - exps[i])
            } else {
                1
            };
            (0..cols).map(|k| (v[k][i] * scale).rem_euclid(q)).collect()
        })
        .collect()
}

/// `log_p` of the order of the subgroup of `(Z/p^big_r)^m` spanned by `gens`.
pub fn log_order(gens: &[Vec<i128>], m: usize, p: i128, big_r: u32) -> u32 {
    if m == 0 || gens.is_empty() {
        return 0;
    }
    let a: IMat = (0..m)
        .map(|i| gens.iter().map(|g| g[i]).collect())
        .collect();
    let (exps, _) = eliminate(a, gens.len(), p, big_r);
    exps.iter().map(|e| big_r - e).sum()
}

fn apply(d: &IMat, x: &[i128]) -> Vec<i128> {
    d.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Integer lifts of generators of `Z^s_n = {c : d c ≡ 0 mod p^s}` as a lattice.
fn cycles_mod(d: Option<&IMat>, m: usize, p: i128, s: u32) -> Vec<Vec<i128>> {
    let mut gens = match d {
        Some(d) if !d.is_empty() && s > 0 => kernel_mod(d, m, p, s),
        _ => (0..m)
            .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
            .collect(),
    };
    let ps = p.pow(s);
    for i in 0..m {
        gens.push((0..m).map(|j| if i == j { ps } else { 0 }).collect());
    }
    gens
}

/// Integer chain complex with `d[n]: C_n -> C_{n-1}` (`dims[n-1] x dims[n]`).
#[derive(Clone, Debug)]
pub struct IntComplex {
    pub dims: Vec<usize>,
    pub d: Vec<IMat>,
}

impl IntComplex {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    fn boundary(&self, n: usize) -> Option<&IMat> {
        if n == 0 || n > self.top() || self.dims[n] == 0 || self.dims[n - 1] == 0 {
            None
        } else {
            Some(&self.d[n])
        }
    }

    /// `dim E^r_n` as the chain-level subquotient
    /// `Z^r / (p Z^{r-1} + p^{-(r-1)} d Z^{r-1})`.
    pub fn page_dim(&self, p: i128, r: u32, n: usize) -> u32 {
        let m = self.dims[n];
        if m == 0 {
            return 0;
        }
        let zr = cycles_mod(self.boundary(n), m, p, r);
        let mut b: Vec<Vec<i128>> = cycles_mod(self.boundary(n), m, p, r - 1)
            .into_iter()
            .map(|z| z.into_iter().map(|x| p * x).collect())
            .collect();
        if n < self.top() {
            if let Some(d1) = self.boundary(n + 1) {
                let div = p.pow(r - 1);
                for z in cycles_mod(self.boundary(n + 1), self.dims[n + 1], p, r - 1) {
                    let dz = apply(d1, &z);
                    assert!(dz.iter().all(|x| x % div == 0));
                    b.push(dz.into_iter().map(|x| x / div).collect());
                }
            }
        }
        log_order(&zr, m, p, r) - log_order(&b, m, p, r)
    }

    /// `dim H_n(C ⊗ F_p)` by Gaussian elimination over `F_p`.
    pub fn mod_p_homology(&self, p: i128, n: usize) -> usize {
        let rank = |k: usize| self.boundary(k).map_or(0, |d| rank_mod_p(d, p));
        let up = if n < self.top() { rank(n + 1) } else { 0 };
        self.dims[n] - rank(n) - up
    }

    pub fn to_engine(&self, p: u64) -> GradedChainComplex<PLocal> {
        let top = self.top();
        let basis = GradedBasis::from_elements(
            top,
            (0..=top).flat_map(|n| (0..self.dims[n]).map(move |i| (format!("c{n}_{i}"), n))),
        )
        .unwrap();
        let blocks = (1..=top).filter_map(|n| {
            self.boundary(n).map(|d| {
                let rows: Vec<Vec<i64>> = d
                    .iter()
                    .map(|r| r.iter().map(|&x| x as i64).collect())
                    .collect();
                (n, ExactMatrix::from_i64_rows(&rows, self.dims[n], p))
            })
        });
        GradedChainComplex::from_boundaries(basis, p, blocks).unwrap()
    }
}

pub fn rank_mod_p(a: &IMat, p: i128) -> usize {
    let mut m: IMat = a
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inverse_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn matmul(a: &IMat, b: &IMat, inner: usize, cols: usize) -> IMat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Random unimodular `u` with its inverse.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (IMat, IMat) {
    let mut u = identity(n);
    let mut inv = identity(n);
    if n < 2 {
        return (u, inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c: i128 = rng.gen_range(-2..=2);
        // u <- E u with E = I + c e_ij (row i += c row j); inv <- inv E^{-1}.
        for k in 0..n {
            let x = u[j][k];
            u[i][k] += c * x;
        }
        for row in inv.iter_mut() {
            let x = row[i];
            row[j] -= c * x;
        }
    }
    (u, inv)
}

/// Random complex in degrees `0..=top` with at most `max_total` basis
/// elements: a sum of elementary pieces `p^k` (with `k = 0` acyclic) and
/// free classes, in random bases.
pub fn random_complex(rng: &mut ChaCha8Rng, p: i128, top: usize, max_total: usize) -> IntComplex {
    let mut dims = vec![0usize; top + 1];
    let mut pieces: Vec<(usize, u32)> = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(2..=max_total);
    while total < target {
        if rng.gen_bool(0.7) && total + 2 <= target {
            let n = rng.gen_range(1..=top);
            pieces.push((n, rng.gen_range(0..=4)));
            dims[n] += 1;
            dims[n - 1] += 1;
            total += 2;
        } else {
            dims[rng.gen_range(0..=top)] += 1;
            total += 1;
        }
    }
    // Positions: tops of pieces first, then bottoms, then free classes.
    let mut next = vec![0usize; top + 1];
    let mut diag: Vec<IMat> = (0..=top)
        .map(|n| {
            if n == 0 {
                Vec::new()
            } else {
                vec![vec![0; dims[n]]; dims[n - 1]]
            }
        })
        .collect();
    for &(n, k) in &pieces {
        let i = next[n];
        next[n] += 1;
        let j = next[n - 1];
        next[n - 1] += 1;
        diag[n][j][i] = p.pow(k);
    }
    let changes: Vec<(IMat, IMat)> = dims.iter().map(|&m| random_unimodular(rng, m)).collect();
    let mut d = vec![Vec::new(); top + 1];
    for n in 1..=top {
        if dims[n] == 0 || dims[n - 1] == 0 {
            d[n] = vec![vec![0; dims[n]]; dims[n - 1]];
            continue;
        }
        let left = matmul(&changes[n - 1].0, &diag[n], dims[n - 1], dims[n]);
        d[n] = matmul(&left, &changes[n].1, dims[n], dims[n]);
    }
    IntComplex { dims, d }
}

/// Ranks of `β^r: E^r_n -> E^r_{n-1}` forced by `E^{r+1} = H(E^r, β^r)`.
fn beta_ranks(c: &IntComplex, p: i128, r: u32, window: usize) -> Vec<u32> {
    let mut ranks = vec![0u32; window + 1];
    for n in 0..window {
        let drop = c.page_dim(p, r, n) - c.page_dim(p, r + 1, n);
        ranks[n + 1] = drop - ranks[n];
    }
    ranks
}

pub fn compare_with_oracle(c: &IntComplex, p: u64) -> Result<(), String> {
    let engine = bockstein_pages(&c.to_engine(p), 3).map_err(|e| e.to_string())?;
    let window = c.top() - 1;
    let pi = p as i128;
    for n in 0..=window {
        let e1 = engine.page(1).unwrap().dim(n);
        if e1 != c.mod_p_homology(pi, n) {
            return Err(format!(
                "E^1_{n} = {e1}, mod-p homology {}",
                c.mod_p_homology(pi, n)
            ));
        }
    }
    for r in 1..=3u32 {
        let page = engine.page(r).unwrap();
        let ranks = beta_ranks(c, pi, r, window);
        for n in 0..=window {
            let oracle = c.page_dim(pi, r, n) as usize;
            if page.dim(n) != oracle {
                return Err(format!(
                    "E^{r}_{n}: engine {}, oracle {oracle}",
                    page.dim(n)
                ));
            }
            if n >= 1 {
                let rank = page.beta().block(n).rank() as u32;
                if rank != ranks[n] {
                    return Err(format!(
                        "rank β^{r} in degree {n}: engine {rank}, oracle {}",
                        ranks[n]
                    ));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Graded-commutative polynomial algebra over Q (the rational model of Γ(V)).

pub type QPoly = BTreeMap<Vec<u32>, BigRational>;

pub fn q_of(x: &PLocal) -> BigRational {
    BigRational::new(x.numerator().clone(), x.denominator().clone())
}

fn qfact(n: u32) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |a, k| a * k))
}

/// Product of monomials: the sign counts odd factors of `b` moved past odd
/// factors of `a` with larger index.
pub fn q_mono_mul(degrees: &[usize], a: &[u32], b: &[u32]) -> Option<(Vec<u32>, i32)> {
    let mut sign = 1;
    for (j, &bj) in b.iter().enumerate() {
        if bj == 0 || degrees[j].is_multiple_of(2) {
            continue;
        }
        for (i, &ai) in a.iter().enumerate().skip(j + 1) {
            if ai == 1 && degrees[i] % 2 == 1 {
                sign = -sign;
            }
        }
    }
    let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    if m.iter().zip(degrees).any(|(&e, &d)| d % 2 == 1 && e > 1) {
        return None;
    }
    Some((m, sign))
}

pub fn q_mul(degrees: &[usize], a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, s)) = q_mono_mul(degrees, ma, mb) {
                let c = ca * cb * BigRational::from_integer(BigInt::from(s));
                *out.entry(m).or_insert_with(BigRational::zero) += c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn q_pow(degrees: &[usize], a: &QPoly, k: u32) -> QPoly {
    let mut out = QPoly::new();
    out.insert(vec![0; degrees.len()], BigRational::one());
    for _ in 0..k {
        out = q_mul(degrees, &out, a);
    }
    out
}

/// Image of `Γ(V)` in `Q[V]`: `γ^{k_1}(v_1)...` maps to `v_1^{k_1}/k_1! ...`.
pub fn q_image(monomials: &[Vec<u32>], v: &[PLocal]) -> QPoly {
    let mut out = QPoly::new();
    for (m, c) in monomials.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let denom = m.iter().fold(BigRational::one(), |a, &e| a * qfact(e));
        out.insert(m.clone(), q_of(c) / denom);
    }
    out
}

pub fn q_divided(degrees: &[usize], a: &QPoly, k: u32) -> QPoly {
    let f = qfact(k);
    q_pow(degrees, a, k)
        .into_iter()
        .map(|(m, c)| (m, c / &f))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub fn random_small(rng: &mut ChaCha8Rng) -> i64 {
    let x: i64 = rng.gen_range(-3..=3);
    if rng.gen_bool(0.2) {
        x * 3
    } else {
        x
    }
}

pub fn is_integral(c: &BigRational) -> bool {
    c.denom().abs().is_one()
}

// ---------------------------------------------------------------------------
// Corpus of DG Lie algebras, including nonabelian ones.

fn vec_of(l_len: usize, entries: &[(usize, i64)], p: u64) -> Vec<PLocal> {
    let mut v = vec![PLocal::zero(p); l_len];
    for &(i, c) in entries {
        v[i] = PLocal::from_i64(c, p);
    }
    v
}

pub fn corpus(p: u64, max_degree: usize) -> Vec<(&'static str, DgLie<PLocal>)> {
    let mut out = Vec::new();

    out.push((
        "example1",
        dgl_core::examples::example1(p, 1, max_degree).unwrap(),
    ));
    out.push((
        "example2",
        dgl_core::examples::example2(p, 1, max_degree).unwrap(),
    ));

    // [x, y] = z with x, y even.
    let mut l = DgLie::new(p, max_degree, &[("x", 2), ("y", 2), ("z", 4)]).unwrap();
    l.set_bracket_antisymmetric(0, 1, vec_of(3, &[(2, 1)], p))
        .unwrap();
    out.push(("heisenberg", l));

    // [a, a] = b with a odd, ∂c = 3b.
    let mut l = DgLie::new(p, max_degree, &[("a", 1), ("b", 2), ("c", 3)]).unwrap();
    l.set_bracket(0, 0, vec_of(3, &[(1, 1)], p)).unwrap();
    l.set_differential(2, vec_of(3, &[(1, 3)], p)).unwrap();
    out.push(("odd_square", l));

    // [x, y] = w, ∂v = w, with x, y odd.
    let mut l = DgLie::new(p, max_degree, &[("x", 1), ("y", 1), ("w", 2), ("v", 3)]).unwrap();
    l.set_bracket_antisymmetric(0, 1, vec_of(4, &[(2, 1)], p))
        .unwrap();
    l.set_differential(3, vec_of(4, &[(2, 1)], p)).unwrap();
    out.push(("odd_pair", l));

    // [u, t] = s, ∂t = u with |u| = 1, |t| = 2, |s| = 3: the differential
    // of [u, u] = 0 forces [∂u, u] - [u, ∂u] = 0, fine since ∂u = 0; and
    // ∂[u, t] = -[u, ∂t] = -[u, u] = 0 forces ∂s = 0.
    let mut l = DgLie::new(p, max_degree, &[("u", 1), ("t", 2), ("s", 3)]).unwrap();
    l.set_bracket_antisymmetric(0, 1, vec_of(3, &[(2, 1)], p))
        .unwrap();
    l.set_differential(1, vec_of(3, &[(0, 1)], p)).unwrap();
    out.push(("derived_bracket", l));

    out
}

// ---------------------------------------------------------------------------
// Random instances for the structural suites.

use dgl_core::lie::PbwAlgebra;
use dgl_core::scalar::Fp;
use dgl_core::structure::{
    derivation_from_generators, differential_restricts_to_lie, HopfMorphism, LieTypeVerdict,
    RestrictionVerdict,
};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

pub fn abelian_ul(p: u64, degrees: &[usize], max_degree: usize) -> PbwAlgebra<Fp> {
    let gens: Vec<(String, usize)> = names(degrees.len())
        .into_iter()
        .zip(degrees.iter().copied())
        .collect();
    PbwAlgebra::build(&DgLie::new(p, max_degree, &gens).unwrap()).unwrap()
}

/// Random element of `L` in degree `n` plus, when `power` is set and some
/// generator `c` of even degree has `p|c| = n`, a nonzero multiple of `c^p`.
fn random_primitive(
    rng: &mut ChaCha8Rng,
    ul: &PbwAlgebra<Fp>,
    n: usize,
    power: bool,
) -> (Vec<Fp>, bool) {
    let p = ul.prime();
    let lie = ul.lie();
    let mut v = vec![Fp::new(0, p); ul.dim(n)];
    for g in 0..lie.len() {
        if lie.degree(g) == n {
            let (_, x) = ul.generator(g);
            let c = Fp::new(rng.gen_range(0..p as i64), p);
            for (a, b) in v.iter_mut().zip(&x) {
                *a = *a + c * *b;
            }
        }
    }
    let mut used = false;
    if power {
        if let Some(g) = (0..lie.len())
            .find(|&g| lie.degree(g).is_multiple_of(2) && lie.degree(g) * p as usize == n)
        {
            let (d, c) = ul.generator(g);
            let cp = (1..p).fold(c.clone(), |acc, k| {
                ul.mul(d * k as usize, &acc, d, &c).unwrap()
            });
            let lambda = Fp::new(rng.gen_range(1..p as i64), p);
            for (a, b) in v.iter_mut().zip(&cp) {
                *a = *a + lambda * *b;
            }
            used = true;
        }
    }
    (v, used)
}

fn random_degrees(rng: &mut ChaCha8Rng, max_gen_degree: usize) -> Vec<usize> {
    let count = rng.gen_range(2..=4);
    let mut d: Vec<usize> = (0..count)
        .map(|_| rng.gen_range(1..=max_gen_degree))
        .collect();
    d.sort();
    d
}

/// Random degree −1 derivation-coderivation of an abelian `UL` (at most four
/// generators). With `allow_power`, some instances carry a generator of
/// degree `2p + 1` so that `θ` can hit `c^p` with `|c| = 2`.
pub fn restriction_instance(
    rng: &mut ChaCha8Rng,
    p: u64,
    allow_power: bool,
) -> (bool, RestrictionVerdict) {
    let mut degrees = random_degrees(rng, 6);
    if allow_power && rng.gen_bool(0.6) {
        degrees.truncate(2);
        degrees.push(2);
        degrees.push(2 * p as usize + 1);
        degrees.sort();
    }
    let max_degree = degrees.iter().max().unwrap() + 1;
    let ul = abelian_ul(p, &degrees, max_degree);
    let mut expect = true;
    let images: Vec<Vec<Fp>> = degrees
        .iter()
        .map(|&d| {
            let power = rng.gen_bool(0.5);
            let (v, used) = random_primitive(rng, &ul, d - 1, power);
            expect &= !used;
            v
        })
        .collect();
    let theta = derivation_from_generators(&ul, &images, -1).unwrap();
    (expect, differential_restricts_to_lie(&ul, &theta).unwrap())
}

/// Random Hopf map `UL_ab -> UL_ab` (at most four generators on each side,
/// degrees at most 6): Lie-type images plus, sometimes, a multiple of `c^p`.
pub fn lie_type_instance(rng: &mut ChaCha8Rng, p: u64) -> (bool, LieTypeVerdict) {
    let source_degrees = random_degrees(rng, 6);
    let mut target_degrees = source_degrees.clone();
    let top_source = *source_degrees.iter().max().unwrap();
    if target_degrees.len() < 4 && 2 * p as usize <= 6 && rng.gen_bool(0.6) {
        target_degrees.push(2);
        target_degrees.sort();
    }
    let max_degree = top_source.max(2 * p as usize) + 1;
    let source = abelian_ul(p, &source_degrees, max_degree);
    let target = abelian_ul(p, &target_degrees, max_degree);
    let mut expect = true;
    let images: Vec<Vec<Fp>> = source_degrees
        .iter()
        .map(|&d| {
            let power = rng.gen_bool(0.5);
            let (v, used) = random_primitive(rng, &target, d, power);
            expect &= !used;
            v
        })
        .collect();
    let phi = HopfMorphism::new(&source, &target, &images).unwrap();
    (expect, phi.is_lie_type().unwrap())
}

/// Random abelian DGL over `Z_(p)` whose differential is divisible by `p`:
/// pairs `∂f = p^k u e` and free generators, degrees at most 6.
pub fn random_divisible_dgl(
    rng: &mut ChaCha8Rng,
    p: u64,
    max_degree: usize,
    max_gens: usize,
) -> DgLie<PLocal> {
    let mut gens: Vec<(String, usize)> = Vec::new();
    let mut pairs = Vec::new();
    while gens.len() < max_gens {
        if gens.len() + 2 <= max_gens && rng.gen_bool(0.6) {
            let d = rng.gen_range(2..=6);
            pairs.push((gens.len(), gens.len() + 1, rng.gen_range(1..=2u32)));
            gens.push((format!("e{}", gens.len()), d - 1));
            gens.push((format!("f{}", gens.len()), d));
        } else {
            gens.push((format!("z{}", gens.len()), rng.gen_range(1..=6)));
            if rng.gen_bool(0.3) {
                break;
            }
        }
    }
    let mut l = DgLie::new(p, max_degree, &gens).unwrap();
    for (e, f, k) in pairs {
        let mut v = vec![PLocal::zero(p); gens.len()];
        let unit = [1i64, 2, -1][rng.gen_range(0..3)];
        v[e] = PLocal::from_i64(unit * (p as i64).pow(k), p);
        l.set_differential(f, v).unwrap();
    }
    l
}
