//! Tensor words over a graded basis: shuffle product, deconcatenation and
//! unshuffle coproducts, all with Koszul signs.

use std::collections::BTreeMap;

use crate::graded::GradedBasis;
use crate::scalar::Scalar;
use crate::sign::koszul_sign;

/// Word `[v_{i_1}| ... |v_{i_k}]` as the list of letter indices.
pub type Word = Vec<usize>;

/// Linear combination of words.
pub type Combination<S> = BTreeMap<Word, S>;

pub fn word_degree(degrees: &[usize], w: &[usize]) -> usize {
    w.iter().map(|&i| degrees[i]).sum()
}

fn letter_degrees(degrees: &[usize], w: &[usize]) -> Vec<i64> {
    w.iter().map(|&i| degrees[i] as i64).collect()
}

/// All `(|a|, |b|)`-shuffles of `a` and `b` with their Koszul signs.
pub fn shuffles(degrees: &[usize], a: &[usize], b: &[usize]) -> Vec<(Word, i32)> {
    let concat: Vec<usize> = a.iter().chain(b).copied().collect();
    let degs = letter_degrees(degrees, &concat);
    let (m, n) = (a.len(), b.len());
    let mut out = Vec::new();
    // order[t] = position in `concat` of the letter placed at slot t.
    let mut order = Vec::with_capacity(m + n);
    fn rec(
        i: usize,
        j: usize,
        m: usize,
        n: usize,
        order: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == m && j == n {
            out.push(order.clone());
            return;
        }
        if i < m {
            order.push(i);
            rec(i + 1, j, m, n, order, out);
            order.pop();
        }
        if j < n {
            order.push(m + j);
            rec(i, j + 1, m, n, order, out);
            order.pop();
        }
    }
    let mut orders = Vec::new();
    rec(0, 0, m, n, &mut order, &mut orders);
    for ord in orders {
        let word = ord.iter().map(|&t| concat[t]).collect();
        out.push((word, koszul_sign(&degs, &ord)));
    }
    out
}

fn add_term<S: Scalar>(acc: &mut Combination<S>, w: Word, c: S) {
    if c.is_zero() {
        return;
    }
    let zero = acc.get(&w).is_some_and(|x| x.add_ref(&c).is_zero());
    if zero {
        acc.remove(&w);
    } else {
        let e = acc.entry(w).or_insert_with(|| S::zero(c.prime()));
        *e = e.add_ref(&c);
    }
}

pub fn single<S: Scalar>(w: Word, p: u64) -> Combination<S> {
    let mut c = Combination::new();
    c.insert(w, S::one(p));
    c
}

pub fn scale<S: Scalar>(a: &Combination<S>, c: &S) -> Combination<S> {
    let mut out = Combination::new();
    for (w, x) in a {
        add_term(&mut out, w.clone(), x.mul_ref(c));
    }
    out
}

pub fn add<S: Scalar>(a: &Combination<S>, b: &Combination<S>) -> Combination<S> {
    let mut out = a.clone();
    for (w, x) in b {
        add_term(&mut out, w.clone(), x.clone());
    }
    out
}

/// Shuffle product on `T_C V`.
pub fn shuffle_product<S: Scalar>(
    degrees: &[usize],
    a: &Combination<S>,
    b: &Combination<S>,
) -> Combination<S> {
    let mut out = Combination::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let c = ca.mul_ref(cb);
            for (w, s) in shuffles(degrees, wa, wb) {
                add_term(&mut out, w, if s < 0 { -c.clone() } else { c.clone() });
            }
        }
    }
    out
}

/// Concatenation product on `TV`.
pub fn concatenate<S: Scalar>(a: &Combination<S>, b: &Combination<S>) -> Combination<S> {
    let mut out = Combination::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            add_term(
                &mut out,
                wa.iter().chain(wb).copied().collect(),
                ca.mul_ref(cb),
            );
        }
    }
    out
}

/// Deconcatenation `Δ[w_1|...|w_k] = Σ [w_1|...|w_i] ⊗ [w_{i+1}|...|w_k]`.
pub fn deconcatenate(w: &[usize]) -> Vec<(Word, Word)> {
    (0..=w.len())
        .map(|i| (w[..i].to_vec(), w[i..].to_vec()))
        .collect()
}

/// Coproduct of `TV` with primitive letters: signed sum over unshuffles.
pub fn unshuffle(degrees: &[usize], w: &[usize]) -> Vec<(Word, Word, i32)> {
    let k = w.len();
    let degs = letter_degrees(degrees, w);
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1u64 << k) {
        let left: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let right: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
        let order: Vec<usize> = left.iter().chain(&right).copied().collect();
        out.push((
            left.iter().map(|&i| w[i]).collect(),
            right.iter().map(|&i| w[i]).collect(),
            koszul_sign(&degs, &order),
        ));
    }
    out
}

/// Words of each degree `0..=max_degree` over letters of positive degree.
#[derive(Clone, Debug)]
pub struct WordBasis {
    degrees: Vec<usize>,
    words: Vec<Vec<Word>>,
    index: BTreeMap<Word, usize>,
    basis: GradedBasis,
}

impl WordBasis {
    pub fn new(names: &[String], degrees: &[usize], max_degree: usize) -> Self {
        assert!(
            degrees.iter().all(|&d| d > 0),
            "letters must have positive degree"
        );
        let mut words: Vec<Vec<Word>> = vec![Vec::new(); max_degree + 1];
        words[0].push(Vec::new());
        for n in 1..=max_degree {
            let mut here = Vec::new();
            for (i, &d) in degrees.iter().enumerate() {
                if d <= n {
                    for w in &words[n - d] {
                        let mut nw = w.clone();
                        nw.push(i);
                        here.push(nw);
                    }
                }
            }
            here.sort();
            words[n] = here;
        }
        let mut index = BTreeMap::new();
        let mut basis = GradedBasis::new(max_degree);
        for (n, ws) in words.iter().enumerate() {
            for (i, w) in ws.iter().enumerate() {
                index.insert(w.clone(), i);
                let label = format!(
                    "[{}]",
                    w.iter()
                        .map(|&l| names[l].as_str())
                        .collect::<Vec<_>>()
                        .join("|")
                );
                basis.push(n, label).expect("distinct words");
            }
        }
        WordBasis {
            degrees: degrees.to_vec(),
            words,
            index,
            basis,
        }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn words(&self, n: usize) -> &[Word] {
        &self.words[n]
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    /// Dense coordinates of a homogeneous combination of degree `n`.
    pub fn to_vector<S: Scalar>(&self, n: usize, c: &Combination<S>, p: u64) -> Vec<S> {
        let mut v = vec![S::zero(p); self.words[n].len()];
        for (w, x) in c {
            v[self.index[w]] = x.clone();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PLocal;

    const P: u64 = 3;

    #[test]
    fn two_letter_shuffle() {
        // [v]·[w] = [v|w] + (-1)^{|v||w|}[w|v]
        let degs = [1, 3];
        let s = shuffles(&degs, &[0], &[1]);
        assert_eq!(s, vec![(vec![0, 1], 1), (vec![1, 0], -1)]);
        let degs = [2, 3];
        assert_eq!(
            shuffles(&degs, &[0], &[1]),
            vec![(vec![0, 1], 1), (vec![1, 0], 1)]
        );
    }

    #[test]
    fn empty_word_is_unit() {
        let degs = [2, 1];
        let a: Combination<PLocal> = single(vec![0, 1, 1], P);
        assert_eq!(shuffle_product(&degs, &single(vec![], P), &a), a);
        assert_eq!(shuffle_product(&degs, &a, &single(vec![], P)), a);
    }

    #[test]
    fn cube_of_even_letter() {
        let degs = [2];
        let v: Combination<PLocal> = single(vec![0], P);
        let left = shuffle_product(&degs, &shuffle_product(&degs, &v, &v), &v);
        let right = shuffle_product(&degs, &v, &shuffle_product(&degs, &v, &v));
        assert_eq!(left, right);
        assert_eq!(
            left,
            scale(&single(vec![0, 0, 0], P), &PLocal::from_i64(6, P))
        );
    }

    #[test]
    fn odd_letter_squares_to_zero() {
        let degs = [1];
        let v: Combination<PLocal> = single(vec![0], P);
        assert!(shuffle_product(&degs, &v, &v).is_empty());
    }

    #[test]
    fn word_basis_counts() {
        let names = ["a".to_string(), "b".to_string()];
        let wb = WordBasis::new(&names, &[1, 2], 4);
        // compositions of n into parts 1 and 2 are Fibonacci numbers
        let dims: Vec<usize> = (0..=4).map(|n| wb.words(n).len()).collect();
        assert_eq!(dims, vec![1, 1, 2, 3, 5]);
        assert_eq!(wb.basis().names(2), ["[a|a]", "[b]"]);
    }
}
