//! Dense matrices over any [`Ring`], with elimination routines for fields.

use serde::{Deserialize, Serialize};

use crate::algebra::quotient::{QuotElem, QuotRing};
use crate::algebra::ring::Ring;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

/// Square matrix over A/P^n.
pub type RingMatrix = Matrix<QuotElem>;

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<E>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn entries(&self) -> &[E] {
        &self.data
    }
    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols() != b.rows() {
        return Err(Error::Mismatch(format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    Ok(Matrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).fold(ring.zero(), |acc, k| ring.add(&acc, &ring.mul(a.get(i, k), b.get(k, j))))))
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    (0..a.rows()).map(|i| a.row(i).iter().zip(v).fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))).collect()
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Mismatch("matrix shapes differ".into()));
    }
    Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| ring.add(a.get(i, j), b.get(i, j))))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Mismatch("matrix shapes differ".into()));
    }
    Ok(Matrix::from_fn(a.rows(), a.cols(), |i, j| ring.sub(a.get(i, j), b.get(i, j))))
}

pub fn scalar_mul<R: Ring>(ring: &R, c: &R::Elem, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| ring.mul(c, x))
}

/// `m - c*I`.
pub fn minus_scalar<R: Ring>(ring: &R, m: &Matrix<R::Elem>, c: &R::Elem) -> Matrix<R::Elem> {
    let mut out = m.clone();
    for i in 0..m.rows().min(m.cols()) {
        out.set(i, i, ring.sub(m.get(i, i), c));
    }
    out
}

pub fn minus_identity<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    minus_scalar(ring, m, &ring.one())
}

/// Determinant over any commutative ring: Laplace expansion along rows,
/// memoised on the set of used columns (O(n 2^n) ring operations).
pub fn det<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 16, "Laplace determinant limited to n <= 16");
    let mut memo: Vec<Option<R::Elem>> = vec![None; 1 << n];
    memo[(1 << n) - 1] = Some(ring.one());
    fn go<R: Ring>(ring: &R, m: &Matrix<R::Elem>, used: usize, memo: &mut Vec<Option<R::Elem>>) -> R::Elem {
        if let Some(v) = &memo[used] {
            return v.clone();
        }
        let n = m.rows();
        let row = used.count_ones() as usize;
        let mut acc = ring.zero();
        let mut sign_neg = false;
        for j in 0..n {
            if used & (1 << j) != 0 {
                continue;
            }
            let a = m.get(row, j);
            if !ring.is_zero(a) {
                let t = ring.mul(a, &go(ring, m, used | (1 << j), memo));
                acc = if sign_neg { ring.sub(&acc, &t) } else { ring.add(&acc, &t) };
            }
            sign_neg = !sign_neg;
        }
        memo[used] = Some(acc.clone());
        acc
    }
    go(ring, m, 0, &mut memo)
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref<R: Ring>(ring: &R, m: &mut Matrix<R::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(p) = (row..m.rows()).find(|&i| !ring.is_zero(m.get(i, col))) else {
            continue;
        };
        m.swap_rows(row, p);
        let inv = ring.try_inv(m.get(row, col)).expect("rref requires a field");
        for j in col..m.cols() {
            let v = ring.mul(m.get(row, j), &inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows() {
            if i == row || ring.is_zero(m.get(i, col)) {
                continue;
            }
            let c = m.get(i, col).clone();
            for j in col..m.cols() {
                let v = ring.sub(m.get(i, j), &ring.mul(&c, m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank over a field.
pub fn rank<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> usize {
    let mut a = m.clone();
    rref(ring, &mut a).len()
}

/// Basis of the right kernel `{v : m v = 0}` over a field.
pub fn kernel<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let mut a = m.clone();
    let pivots = rref(ring, &mut a);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![ring.zero(); m.cols()];
            v[fc] = ring.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ring.neg(a.get(r, fc));
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b` over a field.
pub fn solve<R: Ring>(ring: &R, m: &Matrix<R::Elem>, b: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let mut aug = Matrix::from_fn(m.rows(), m.cols() + 1, |i, j| if j < m.cols() { m.get(i, j).clone() } else { b[i].clone() });
    let pivots = rref(ring, &mut aug);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![ring.zero(); m.cols()];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols()).clone();
    }
    Some(x)
}

/// Invertibility over a field.
pub fn is_invertible_field<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    m.is_square() && rank(ring, m) == m.rows()
}

/// Inverse over a field.
pub fn inverse_field<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Option<Matrix<R::Elem>> {
    let n = m.rows();
    let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            ring.one()
        } else {
            ring.zero()
        }
    });
    let pivots = rref(ring, &mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
}

/// A matrix over A/P^n is invertible iff its reduction mod P is.
pub fn is_invertible(ring: &QuotRing, m: &RingMatrix) -> Result<bool> {
    let res = ring.residue_field()?;
    Ok(is_invertible_field(&res, &ring.project_matrix(&res, m)))
}

/// Dimension over A/P of the kernel of the reduction of `m` mod P.
pub fn kernel_rank_mod_p(ring: &QuotRing, m: &RingMatrix) -> Result<usize> {
    let res = ring.residue_field()?;
    let red = ring.project_matrix(&res, m);
    Ok(m.cols() - rank(&res, &red))
}

/// Matrix operations bundle over A/P^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatOps {
    pub product: RingMatrix,
    pub det: QuotElem,
    pub minus_identity: RingMatrix,
    pub fixed_kernel_rank: usize,
}

pub fn mat_ops(ring: &QuotRing, m: &RingMatrix, n: &RingMatrix) -> Result<MatOps> {
    if !m.is_square() || !n.is_square() {
        return Err(Error::Mismatch("square matrices required".into()));
    }
    let product = mat_mul(ring, m, n)?;
    let minus = minus_identity(ring, m);
    Ok(MatOps { product, det: det(ring, m), fixed_kernel_rank: kernel_rank_mod_p(ring, &minus)?, minus_identity: minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Fq;
    use crate::algebra::ideal::PrimeIdeal;
    use crate::algebra::poly::APoly;

    fn f2_mod_t() -> QuotRing {
        let f = Fq::new(2).unwrap();
        QuotRing::prime_power(f.clone(), &PrimeIdeal::parse("T", &f).unwrap(), 1).unwrap()
    }

    #[test]
    fn identity_ops() {
        let r = f2_mod_t();
        let id = identity(&r, 3);
        let ops = mat_ops(&r, &id, &id).unwrap();
        assert_eq!(ops.det, APoly::one());
        assert_eq!(ops.fixed_kernel_rank, 3);
        assert_eq!(ops.product, id);
    }

    #[test]
    fn scalar_non_one_has_trivial_fixed_space() {
        let f = Fq::new(3).unwrap();
        let r = QuotRing::prime_power(f.clone(), &PrimeIdeal::parse("T", &f).unwrap(), 1).unwrap();
        let m = Matrix::from_rows(vec![vec![APoly::constant(2)]]);
        assert_eq!(kernel_rank_mod_p(&r, &minus_identity(&r, &m)).unwrap(), 0);
    }

    #[test]
    fn all_2x2_over_f2_against_brute_force() {
        let r = f2_mod_t();
        for n in 0..16u64 {
            let bits: Vec<u8> = (0..4).map(|i| ((n >> i) & 1) as u8).collect();
            let m = Matrix::from_fn(2, 2, |i, j| APoly::constant(bits[2 * i + j]));
            let d = (bits[0] * bits[3] + bits[1] * bits[2]) % 2;
            assert_eq!(det(&r, &m), APoly::constant(d));
            // brute-force fixed vectors
            let fixed = (0..4u8)
                .filter(|v| {
                    let (x, y) = (v & 1, (v >> 1) & 1);
                    (bits[0] * x + bits[1] * y) % 2 == x && (bits[2] * x + bits[3] * y) % 2 == y
                })
                .count();
            let k = kernel_rank_mod_p(&r, &minus_identity(&r, &m)).unwrap();
            assert_eq!(1usize << k, fixed);
            assert_eq!(is_invertible(&r, &m).unwrap(), d == 1);
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let r = f2_mod_t();
        let a = identity(&r, 2);
        let b = identity(&r, 3);
        assert!(matches!(mat_mul(&r, &a, &b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn det_agrees_with_elimination_over_f5() {
        let f = Fq::new(5).unwrap();
        let m = Matrix::from_rows(vec![vec![1u8, 2, 3, 4], vec![0, 1, 4, 2], vec![3, 3, 1, 0], vec![2, 4, 4, 1]]);
        let d = det(&f, &m);
        let inv = inverse_field(&f, &m);
        assert_eq!(d != 0, inv.is_some());
        if let Some(inv) = inv {
            assert_eq!(mat_mul(&f, &m, &inv).unwrap(), identity(&f, 4));
        }
    }

    #[test]
    fn invertible_iff_level_one_reduction_invertible() {
        // exhaustive at r = 2, q = 2, P = T, n = 2: det is a unit iff mod-T det is nonzero
        let f = Fq::new(2).unwrap();
        let p = PrimeIdeal::parse("T", &f).unwrap();
        let r2 = QuotRing::prime_power(f.clone(), &p, 2).unwrap();
        for n in 0..256u64 {
            let m = Matrix::from_fn(2, 2, |i, j| r2.elem_from_index((n >> (2 * (2 * i + j))) & 3));
            let unit_det = r2.is_unit(&det(&r2, &m));
            let has_inverse = r2.elements().count() > 0
                && (0..256u64).any(|k| {
                    let w = Matrix::from_fn(2, 2, |i, j| r2.elem_from_index((k >> (2 * (2 * i + j))) & 3));
                    mat_mul(&r2, &m, &w).unwrap() == identity(&r2, 2)
                });
            assert_eq!(is_invertible(&r2, &m).unwrap(), has_inverse);
            assert_eq!(unit_det, has_inverse);
        }
    }

    #[test]
    fn kernel_and_solve() {
        let f = Fq::new(3).unwrap();
        let m = Matrix::from_rows(vec![vec![1u8, 2, 0], vec![2, 1, 0]]);
        let ker = kernel(&f, &m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&f, &m, v).iter().all(|&x| x == 0));
        }
        let x = solve(&f, &m, &[1, 2]).unwrap();
        assert_eq!(mat_vec(&f, &m, &x), vec![1, 2]);
        assert!(solve(&f, &Matrix::from_rows(vec![vec![0u8]]), &[1]).is_none());
    }
}
