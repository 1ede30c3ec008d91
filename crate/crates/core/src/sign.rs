//! Koszul signs by explicit transposition counting.
//!
//! This is the only place signs of graded permutations are computed; every
//! other module (tensor pairings, shuffles, enveloping algebras, cochains)
//! goes through it.

/// Sign of reordering homogeneous factors with the given degrees into
/// `order` (so the result reads `x_{order[0]}, x_{order[1]}, ...`).
///
/// Each adjacent transposition of `x, y` contributes `(-1)^{|x||y|}`.
pub fn koszul_sign(degrees: &[i64], order: &[usize]) -> i32 {
    debug_assert_eq!(degrees.len(), order.len());
    let mut odd_swaps = 0usize;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            // x_{order[a]} ends up left of x_{order[b]}; they were transposed
            // iff they started in the opposite order.
            if order[a] > order[b] && degrees[order[a]] % 2 != 0 && degrees[order[b]] % 2 != 0 {
                odd_swaps += 1;
            }
        }
    }
    if odd_swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^{ab}`.
pub fn transposition_sign(a: i64, b: i64) -> i32 {
    if a % 2 != 0 && b % 2 != 0 {
        -1
    } else {
        1
    }
}
