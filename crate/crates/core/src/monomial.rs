//! Exponent-vector monomials shared by enveloping, exterior-polynomial and
//! divided-powers algebras: enumeration, naming and signs.

/// Exponent vectors `k` with `Σ k_i |x_i| = n` for `n <= max_degree`, where
/// odd-degree letters have exponent at most 1. Within a degree the order is
/// descending lexicographic.
pub(crate) fn admissible_monomials(degrees: &[usize], max_degree: usize) -> Vec<Vec<Vec<u32>>> {
    let s = degrees.len();
    let mut out: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_degree + 1];
    let mut stack = vec![(0usize, 0usize, vec![0u32; s])];
    while let Some((g, deg, m)) = stack.pop() {
        if g == s {
            out[deg].push(m);
            continue;
        }
        let d = degrees[g];
        let cap = if d % 2 == 1 { 1 } else { u32::MAX };
        let mut cur = m;
        let mut k = 0u32;
        while k <= cap && deg + d * k as usize <= max_degree {
            cur[g] = k;
            stack.push((g + 1, deg + d * k as usize, cur.clone()));
            if d == 0 {
                break;
            }
            k += 1;
        }
    }
    for list in out.iter_mut() {
        list.sort_by(|a, b| b.cmp(a));
    }
    out
}

/// `e*f^2`-style name; `1` for the empty monomial.
pub(crate) fn power_name(names: &[String], m: &[u32]) -> String {
    join(m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| {
        if k == 1 {
            names[i].clone()
        } else {
            format!("{}^{}", names[i], k)
        }
    }))
}

/// `γ^2(v)*w`-style name for divided-power monomials.
pub(crate) fn divided_name(names: &[String], m: &[u32]) -> String {
    join(m.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| {
        if k == 1 {
            names[i].clone()
        } else {
            format!("γ^{}({})", k, names[i])
        }
    }))
}

fn join(parts: impl Iterator<Item = String>) -> String {
    let parts: Vec<String> = parts.collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// All `j` with `0 <= j <= k` componentwise.
pub(crate) fn sub_exponents(k: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(k.len())];
    for &ki in k {
        let mut next = Vec::with_capacity(out.len() * (ki as usize + 1));
        for prefix in &out {
            for j in 0..=ki {
                let mut v = prefix.clone();
                v.push(j);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Sign of rearranging `(x^a)(x^b)` (two ordered monomials, letters in
/// generator order) into the ordered monomial `x^{a+b}`: every letter of
/// `x_i^{a_i}` passes every letter of `x_l^{b_l}` with `l < i`.
pub(crate) fn merge_sign(degrees: &[usize], a: &[u32], b: &[u32]) -> i32 {
    let mut odd = 0u64;
    for i in 0..a.len() {
        for l in 0..i {
            odd += (degrees[i] as u64 * a[i] as u64) * (degrees[l] as u64 * b[l] as u64) % 2;
        }
    }
    if odd.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
