//! Smith normal forms: over the local ring A/P^n (as pivot valuations) and
//! over the Euclidean ring F_q[T] (as invariant factors).

use crate::algebra::field::Fq;
use crate::algebra::matrix::Matrix;
use crate::algebra::poly::APoly;
use crate::algebra::quotient::{QuotElem, QuotRing};
use crate::algebra::ring::Ring;

/// Valuations `k_1 <= ... <= k_m` of the Smith diagonal `diag(P^k_i)` of a
/// matrix over A/P^n, `m = min(rows, cols)`. A zero diagonal entry has
/// valuation `n`. Eliminates with a pivot of minimal valuation, dividing out
/// only units.
pub fn local_smith_valuations(ring: &QuotRing, m: &Matrix<QuotElem>) -> Vec<u32> {
    let n = ring.level().expect("local Smith form needs a prime-power modulus");
    let p = ring.prime().unwrap().generator().clone();
    let f = ring.fq();
    let mut a = m.clone();
    let size = a.rows().min(a.cols());
    let mut diag = Vec::with_capacity(size);
    // P^k mod P^n, precomputed
    let ppow: Vec<APoly> = (0..=n).map(|k| ring.reduce(&p.pow(k as u64, f))).collect();
    for t in 0..size {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..a.rows() {
            for j in t..a.cols() {
                let v = ring.valuation(a.get(i, j));
                if v < n && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, bi, bj)) = best else {
            diag.extend(std::iter::repeat_n(n, size - t));
            break;
        };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        let (_, unit) = ring.split_unit(a.get(t, t));
        let unit_inv = ring.inv(&unit).expect("unit part");
        for i in t + 1..a.rows() {
            if a.get(i, t).is_zero() {
                continue;
            }
            let (w, c) = ring.split_unit(a.get(i, t));
            let factor = ring.mul(&ppow[(w - v) as usize], &ring.mul(&c, &unit_inv));
            for j in t..a.cols() {
                let x = ring.sub(a.get(i, j), &ring.mul(&factor, a.get(t, j)));
                a.set(i, j, x);
            }
        }
        for j in t + 1..a.cols() {
            if a.get(t, j).is_zero() {
                continue;
            }
            let (w, c) = ring.split_unit(a.get(t, j));
            let factor = ring.mul(&ppow[(w - v) as usize], &ring.mul(&c, &unit_inv));
            for i in t..a.rows() {
                let x = ring.sub(a.get(i, j), &ring.mul(&factor, a.get(i, t)));
                a.set(i, j, x);
            }
        }
        diag.push(v);
    }
    diag
}

/// Invariant factors `d_1 | d_2 | ...` (monic, units dropped) of a square
/// matrix over F_q[T]; zero factors are reported as the zero polynomial.
pub fn poly_invariant_factors(fq: &Fq, m: &Matrix<APoly>) -> Vec<APoly> {
    let mut a = m.clone();
    let n = a.rows().min(a.cols());
    let mut diag = Vec::with_capacity(n);
    let mut t = 0;
    while t < n {
        // pivot of least degree
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..a.rows() {
            for j in t..a.cols() {
                if let Some(d) = a.get(i, j).degree() {
                    if best.is_none_or(|(bd, _, _)| d < bd) {
                        best = Some((d, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else {
            diag.extend(std::iter::repeat_n(APoly::zero(), n - t));
            break;
        };
        a.swap_rows(t, bi);
        a.swap_cols(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..a.rows() {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let (qt, _) = a.get(i, t).divrem(a.get(t, t), fq);
                for j in t..a.cols() {
                    let x = a.get(i, j).sub(&qt.mul(a.get(t, j), fq), fq);
                    a.set(i, j, x);
                }
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..a.cols() {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let (qt, _) = a.get(t, j).divrem(a.get(t, t), fq);
                for i in t..a.rows() {
                    let x = a.get(i, j).sub(&qt.mul(a.get(i, t), fq), fq);
                    a.set(i, j, x);
                }
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // pivot must divide the remaining block
            let bad = (t + 1..a.rows()).flat_map(|i| (t + 1..a.cols()).map(move |j| (i, j))).find(|&(i, j)| !a.get(t, t).divides(a.get(i, j), fq));
            match bad {
                Some((i, _)) => {
                    for j in t..a.cols() {
                        let x = a.get(t, j).add(a.get(i, j), fq);
                        a.set(t, j, x);
                    }
                }
                None => break,
            }
        }
        diag.push(a.get(t, t).monic(fq));
        t += 1;
    }
    diag.into_iter().filter(|d| !d.is_one()).collect()
}

/// Invariant factors of the F_q[T]-module F_q^n with T acting by `x`:
/// the nontrivial invariant factors of `T I - x`.
pub fn module_invariant_factors(fq: &Fq, x: &Matrix<u8>) -> Vec<APoly> {
    let n = x.rows();
    let m = Matrix::from_fn(n, n, |i, j| {
        let c = APoly::constant(fq.neg(*x.get(i, j)));
        if i == j {
            c.add(&APoly::t(), fq)
        } else {
            c
        }
    });
    poly_invariant_factors(fq, &m)
}
