//! Dense matrices over `Z_(p)` and `F_p`: Smith normal form with transforms,
//! saturated kernels, exact solving, inverses.

use std::fmt;

use crate::scalar::{Fp, RingKind, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operation requires a {expected} matrix, got {found}")]
    WrongRing { expected: RingKind, found: RingKind },
}

/// Dense row-major matrix with exact entries.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for ExactMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}x{} over {} (p={})",
            self.rows,
            self.cols,
            S::RING,
            self.p
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        ExactMatrix {
            rows,
            cols,
            p,
            data: vec![S::zero(p); rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, S::one(p));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize, p: u64) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        ExactMatrix {
            rows: r,
            cols,
            p,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], cols: usize, p: u64) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_i64(x, p)).collect())
                .collect(),
            cols,
            p,
        )
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(columns: &[Vec<S>], rows: usize, p: u64) -> Self {
        let mut m = Self::zeros(rows, columns.len(), p);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn ring(&self) -> RingKind {
        S::RING
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: S) {
        self.data[i * self.cols + j] = x;
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &S) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self.data.iter().map(|x| x.mul_ref(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.get_mut(i, j).add_mul_assign(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![S::zero(self.p); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    o.add_mul_assign(self.get(i, j), x);
                }
            }
        }
        Ok(out)
    }

    /// Sub-matrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len(), self.p);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn to_fp(&self) -> ExactMatrix<Fp> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self.data.iter().map(|x| x.to_fp()).collect(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExactMatrix<T> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += c * row[src]
    fn add_row_multiple(&mut self, target: usize, src: usize, c: &S) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[target * self.cols + j].add_mul_assign(c, &s);
            }
        }
    }

    /// col[target] += c * col[src]
    fn add_col_multiple(&mut self, target: usize, src: usize, c: &S) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + target].add_mul_assign(c, &s);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &S) {
        for j in 0..self.cols {
            let x = self.data[i * self.cols + j].mul_ref(c);
            self.data[i * self.cols + j] = x;
        }
    }

    fn scale_col(&mut self, j: usize, c: &S) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + j].mul_ref(c);
            self.data[i * self.cols + j] = x;
        }
    }

    /// Rank over the fraction field (equivalently the number of nonzero
    /// invariant factors).
    pub fn rank(&self) -> usize {
        diagonalize(self.clone(), Track::None).exponents.len()
    }

    /// Smith normal form `U·A·V = S` over `Z_(p)`.
    pub fn snf(&self) -> Result<SnfResult<S>, LinalgError> {
        if S::RING != RingKind::Local {
            return Err(LinalgError::WrongRing {
                expected: RingKind::Local,
                found: S::RING,
            });
        }
        Ok(self.snf_any_ring())
    }

    /// Smith form over either ring; over `F_p` every exponent is zero.
    pub fn snf_any_ring(&self) -> SnfResult<S> {
        let d = diagonalize(self.clone(), Track::Both);
        SnfResult {
            u: d.u.expect("tracked"),
            u_inv: d.u_inv.expect("tracked"),
            s: d.s,
            v: d.v.expect("tracked"),
            v_inv: d.v_inv.expect("tracked"),
            invariant_exponents: d.exponents,
        }
    }

    /// Basis of the kernel as column vectors; over `Z_(p)` it spans a direct summand.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let d = diagonalize(self.clone(), Track::Columns);
        let v = d.v.expect("tracked");
        (d.exponents.len()..self.cols)
            .map(|j| v.column(j))
            .collect()
    }

    /// Solves `A·x = b`. `Ok(None)` when `b` is not in the image over the ring.
    pub fn solve(&self, b: &[S]) -> Result<Option<Vec<S>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let d = diagonalize(self.clone(), Track::Both);
        let c = d.u.as_ref().expect("tracked").mul_vec(b)?;
        let rank = d.exponents.len();
        if c[rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut y = vec![S::zero(self.p); self.cols];
        for i in 0..rank {
            match c[i].div_p_pow(d.exponents[i]) {
                Some(q) => y[i] = q,
                None => return Ok(None),
            }
        }
        Ok(Some(d.v.expect("tracked").mul_vec(&y)?))
    }

    /// Two-sided inverse when the matrix is square and invertible over the ring.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let d = diagonalize(self.clone(), Track::Both);
        if d.exponents.len() != self.rows || d.exponents.iter().any(|&k| k != 0) {
            return None;
        }
        // S = I, so A^{-1} = V U.
        d.v.expect("tracked").mul(&d.u.expect("tracked")).ok()
    }

    /// `true` when the matrix is square with unit determinant.
    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols
            && diagonalize(self.clone(), Track::None)
                .exponents
                .iter()
                .filter(|&&k| k == 0)
                .count()
                == self.rows
    }
}

/// Smith normal form with both transforms and their inverses.
#[derive(Debug, Clone)]
pub struct SnfResult<S: Scalar> {
    pub u: ExactMatrix<S>,
    pub u_inv: ExactMatrix<S>,
    pub s: ExactMatrix<S>,
    pub v: ExactMatrix<S>,
    pub v_inv: ExactMatrix<S>,
    /// `S[i][i] = p^{k_i}` for `i < rank`, non-decreasing.
    pub invariant_exponents: Vec<u32>,
}

impl<S: Scalar> SnfResult<S> {
    pub fn rank(&self) -> usize {
        self.invariant_exponents.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Track {
    None,
    Columns,
    Both,
}

struct Diagonal<S: Scalar> {
    s: ExactMatrix<S>,
    u: Option<ExactMatrix<S>>,
    u_inv: Option<ExactMatrix<S>>,
    v: Option<ExactMatrix<S>>,
    v_inv: Option<ExactMatrix<S>>,
    exponents: Vec<u32>,
}

/// Diagonalizes over the local ring by always pivoting on an entry of minimal
/// valuation; that entry divides everything left in the block, so plain
/// row/column clearing suffices and exponents come out sorted.
fn diagonalize<S: Scalar>(mut a: ExactMatrix<S>, track: Track) -> Diagonal<S> {
    let (m, n, p) = (a.rows, a.cols, a.p);
    let rows_tracked = track == Track::Both;
    let cols_tracked = track != Track::None;
    let mut u = rows_tracked.then(|| ExactMatrix::<S>::identity(m, p));
    let mut u_inv = rows_tracked.then(|| ExactMatrix::<S>::identity(m, p));
    let mut v = cols_tracked.then(|| ExactMatrix::<S>::identity(n, p));
    let mut v_inv = cols_tracked.then(|| ExactMatrix::<S>::identity(n, p));
    let mut exponents = Vec::new();

    for t in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                if let Some(val) = a.get(i, j).valuation() {
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((k, pi, pj)) = best else { break };

        if pi != t {
            a.swap_rows(pi, t);
            if let Some(u) = u.as_mut() {
                u.swap_rows(pi, t);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.swap_cols(pi, t);
            }
        }
        if pj != t {
            a.swap_cols(pj, t);
            if let Some(v) = v.as_mut() {
                v.swap_cols(pj, t);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.swap_rows(pj, t);
            }
        }

        // Normalize the pivot to p^k.
        let pivot = a.get(t, t).clone();
        let unit = pivot.div_p_pow(k).expect("valuation k");
        let unit_inv = unit.unit_inverse().expect("unit part");
        if !unit.is_one() {
            a.scale_row(t, &unit_inv);
            if let Some(u) = u.as_mut() {
                u.scale_row(t, &unit_inv);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.scale_col(t, &unit);
            }
        }

        // Clear column t below the pivot.
        for i in t + 1..m {
            if a.get(i, t).is_zero() {
                continue;
            }
            let c = -a
                .get(i, t)
                .div_p_pow(k)
                .expect("pivot has minimal valuation");
            a.add_row_multiple(i, t, &c);
            if let Some(u) = u.as_mut() {
                u.add_row_multiple(i, t, &c);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.add_col_multiple(t, i, &-c.clone());
            }
        }
        // Clear row t to the right of the pivot.
        for j in t + 1..n {
            if a.get(t, j).is_zero() {
                continue;
            }
            let c = -a
                .get(t, j)
                .div_p_pow(k)
                .expect("pivot has minimal valuation");
            a.add_col_multiple(j, t, &c);
            if let Some(v) = v.as_mut() {
                v.add_col_multiple(j, t, &c);
            }
            if let Some(vi) = v_inv.as_mut() {
                vi.add_row_multiple(t, j, &-c.clone());
            }
        }
        exponents.push(k);
    }

    Diagonal {
        s: a,
        u,
        u_inv,
        v,
        v_inv,
        exponents,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PLocal;

    fn zp(rows: &[Vec<i64>], cols: usize) -> ExactMatrix<PLocal> {
        ExactMatrix::from_i64_rows(rows, cols, 3)
    }

    fn check_snf(a: &ExactMatrix<PLocal>) -> SnfResult<PLocal> {
        let r = a.snf().unwrap();
        let prod = r.u.mul(a).unwrap().mul(&r.v).unwrap();
        assert_eq!(prod, r.s);
        assert!(r.u.is_unimodular() && r.v.is_unimodular());
        assert_eq!(
            r.u.mul(&r.u_inv).unwrap(),
            ExactMatrix::identity(a.rows(), 3)
        );
        assert_eq!(
            r.v.mul(&r.v_inv).unwrap(),
            ExactMatrix::identity(a.cols(), 3)
        );
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        for (i, &k) in r.invariant_exponents.iter().enumerate() {
            assert_eq!(*r.s.get(i, i), PLocal::p_pow(k, 3));
        }
        assert!(r.invariant_exponents.windows(2).all(|w| w[0] <= w[1]));
        r
    }

    #[test]
    fn snf_of_zero_and_identity() {
        assert!(check_snf(&zp(&[vec![0, 0], vec![0, 0]], 2))
            .invariant_exponents
            .is_empty());
        assert_eq!(
            check_snf(&ExactMatrix::identity(2, 3)).invariant_exponents,
            vec![0, 0]
        );
    }

    #[test]
    fn snf_sorts_exponents() {
        let r = check_snf(&zp(&[vec![3, 0], vec![0, 1]], 2));
        assert_eq!(r.invariant_exponents, vec![0, 1]);
    }

    #[test]
    fn snf_mixed_matrix() {
        let a = zp(&[vec![6, 9, 3], vec![2, 27, 18], vec![4, 0, 9]], 3);
        check_snf(&a);
    }

    #[test]
    fn snf_rejects_field_matrices() {
        let a: ExactMatrix<Fp> = ExactMatrix::identity(2, 3);
        assert!(matches!(a.snf(), Err(LinalgError::WrongRing { .. })));
    }

    #[test]
    fn kernel_examples() {
        assert!(ExactMatrix::<PLocal>::identity(3, 3)
            .kernel_basis()
            .is_empty());
        let k = zp(&[vec![3, 0]], 2).kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(k[0][0].is_zero() && k[0][1].is_unit());
    }

    #[test]
    fn solve_examples() {
        let p = 3;
        let one = |x: i64| PLocal::from_i64(x, p);
        let a = zp(&[vec![1]], 1);
        assert_eq!(a.solve(&[one(3)]).unwrap(), Some(vec![one(3)]));
        let a = zp(&[vec![3]], 1);
        assert_eq!(a.solve(&[one(1)]).unwrap(), None);
        let af: ExactMatrix<Fp> = ExactMatrix::from_i64_rows(&[vec![3]], 1, p);
        assert_eq!(af.solve(&[Fp::new(1, p)]).unwrap(), None);
        assert!(a.solve(&[one(1), one(2)]).is_err());
    }

    #[test]
    fn rank_mod_p_counts_unit_exponents() {
        let a = zp(&[vec![3, 1, 0], vec![0, 9, 3], vec![3, 10, 3]], 3);
        let r = a.snf().unwrap();
        let units = r.invariant_exponents.iter().filter(|&&k| k == 0).count();
        assert_eq!(a.to_fp().rank(), units);
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = zp(&[vec![1, 3], vec![2, 7]], 2);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), ExactMatrix::identity(2, 3));
        assert!(zp(&[vec![3, 0], vec![0, 1]], 2).inverse().is_none());
    }
}
