//! The twisted polynomial ring L{tau}, with tau * a = a^q * tau.

use crate::algebra::ring::FqAlgebra;

/// `sum_i a_i tau^i`, no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TwistedPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> TwistedPoly<E> {
    pub fn new<R: FqAlgebra<Elem = E>>(ring: &R, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    pub fn zero() -> Self {
        TwistedPoly { coeffs: Vec::new() }
    }

    pub fn constant<R: FqAlgebra<Elem = E>>(ring: &R, c: E) -> Self {
        Self::new(ring, vec![c])
    }

    /// tau^n
    pub fn tau_pow<R: FqAlgebra<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut v = vec![ring.zero(); n + 1];
        v[n] = ring.one();
        TwistedPoly { coeffs: v }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// tau-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
    /// The constant-term map D.
    pub fn constant_term<R: FqAlgebra<Elem = E>>(&self, ring: &R) -> E {
        self.coeffs.first().cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> TwistedPoly<F> {
        TwistedPoly { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

pub fn tw_add<R: FqAlgebra>(ring: &R, f: &TwistedPoly<R::Elem>, g: &TwistedPoly<R::Elem>) -> TwistedPoly<R::Elem> {
    let n = f.coeffs.len().max(g.coeffs.len());
    let z = ring.zero();
    let c = (0..n).map(|i| ring.add(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z))).collect();
    TwistedPoly::new(ring, c)
}

pub fn tw_sub<R: FqAlgebra>(ring: &R, f: &TwistedPoly<R::Elem>, g: &TwistedPoly<R::Elem>) -> TwistedPoly<R::Elem> {
    let n = f.coeffs.len().max(g.coeffs.len());
    let z = ring.zero();
    let c = (0..n).map(|i| ring.sub(f.coeffs.get(i).unwrap_or(&z), g.coeffs.get(i).unwrap_or(&z))).collect();
    TwistedPoly::new(ring, c)
}

/// `(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)`.
pub fn tw_mul<R: FqAlgebra>(ring: &R, f: &TwistedPoly<R::Elem>, g: &TwistedPoly<R::Elem>) -> TwistedPoly<R::Elem> {
    if f.is_zero() || g.is_zero() {
        return TwistedPoly::zero();
    }
    let mut out = vec![ring.zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (j, b) in g.coeffs.iter().enumerate() {
        let mut bq = b.clone();
        for (i, a) in f.coeffs.iter().enumerate() {
            if i > 0 {
                bq = ring.frob(&bq);
            }
            if !ring.is_zero(a) && !ring.is_zero(&bq) {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, &bq));
            }
        }
    }
    TwistedPoly::new(ring, out)
}

/// `f(x) = sum a_i x^(q^i)`.
pub fn tw_eval<R: FqAlgebra>(ring: &R, f: &TwistedPoly<R::Elem>, x: &R::Elem) -> R::Elem {
    let mut acc = ring.zero();
    let mut xq = x.clone();
    for (i, a) in f.coeffs.iter().enumerate() {
        if i > 0 {
            xq = ring.frob(&xq);
        }
        if !ring.is_zero(a) {
            acc = ring.add(&acc, &ring.mul(a, &xq));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{canonical_field, FieldElem};
    use crate::algebra::ring::Ring;

    #[test]
    fn tau_times_constant() {
        let k = canonical_field(3, 1, 4).unwrap();
        let tau = TwistedPoly::tau_pow(&k, 1);
        for c in [k.elem(&[1, 2]), k.elem(&[0, 1, 1, 2]), k.generator()] {
            let lhs = tw_mul(&k, &tau, &TwistedPoly::constant(&k, c.clone()));
            let mut rhs = vec![k.zero(), k.frob(&c)];
            rhs[0] = k.zero();
            assert_eq!(lhs, TwistedPoly::new(&k, rhs));
        }
    }

    #[test]
    fn characteristic_two_square() {
        let k = canonical_field(2, 1, 2).unwrap();
        let f = TwistedPoly::new(&k, vec![k.one(), k.one()]);
        assert_eq!(tw_mul(&k, &f, &f), TwistedPoly::new(&k, vec![k.one(), k.zero(), k.one()]));
    }

    #[test]
    fn theta_plus_tau_squared() {
        let k = canonical_field(3, 1, 3).unwrap();
        let th = k.generator();
        let f = TwistedPoly::new(&k, vec![th.clone(), k.one()]);
        let expect = TwistedPoly::new(&k, vec![k.mul(&th, &th), k.add(&th, &k.frob(&th)), k.one()]);
        assert_eq!(tw_mul(&k, &f, &f), expect);
    }

    #[test]
    fn eval_basics_and_linearity_over_f8() {
        let k = canonical_field(2, 1, 3).unwrap();
        let tau = TwistedPoly::tau_pow(&k, 1);
        let c = k.elem(&[1, 1, 0]);
        let cf = TwistedPoly::constant(&k, c.clone());
        let elems: Vec<FieldElem> = k.elements().collect();
        let f = TwistedPoly::new(&k, vec![k.elem(&[0, 1]), k.elem(&[1, 0, 1]), k.one()]);
        for x in &elems {
            assert_eq!(tw_eval(&k, &tau, x), k.pow(x, 2));
            assert_eq!(tw_eval(&k, &cf, x), k.mul(&c, x));
            for y in &elems {
                assert_eq!(tw_eval(&k, &f, &k.add(x, y)), k.add(&tw_eval(&k, &f, x), &tw_eval(&k, &f, y)));
            }
        }
    }

    /// Composition law, exhaustive over F_8 for a family of tau-degree <= 2 pairs.
    #[test]
    fn composition_law_over_f8() {
        let k = canonical_field(2, 1, 3).unwrap();
        let elems: Vec<FieldElem> = k.elements().collect();
        let polys: Vec<TwistedPoly<FieldElem>> = (0..24)
            .map(|i| TwistedPoly::new(&k, vec![elems[i % 8].clone(), elems[(i * 3 + 1) % 8].clone(), elems[(i * 5 + 2) % 8].clone()]))
            .collect();
        for f in &polys {
            for g in polys.iter().step_by(5) {
                let fg = tw_mul(&k, f, g);
                for x in &elems {
                    assert_eq!(tw_eval(&k, &fg, x), tw_eval(&k, f, &tw_eval(&k, g, x)));
                }
            }
        }
    }

    #[test]
    fn degree_is_additive_with_field_coefficients() {
        let k = canonical_field(3, 1, 5).unwrap();
        let f = TwistedPoly::new(&k, vec![k.one(), k.generator(), k.elem(&[2, 1])]);
        let g = TwistedPoly::new(&k, vec![k.generator(), k.elem(&[0, 0, 1])]);
        assert_eq!(tw_mul(&k, &f, &g).degree(), Some(3));
        assert_eq!(tw_mul(&k, &f, &TwistedPoly::zero()).degree(), None);
    }
}
