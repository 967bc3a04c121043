use std::fmt::Debug;
use std::hash::Hash;

use crate::algebra::field::Fq;

/// A commutative ring with cheap-clone handle semantics. Elements carry no
/// reference to their ring; every operation goes through the handle.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse of a unit, `None` otherwise.
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// An F_q-algebra: constants from F_q embed, and `frob` is x -> x^q.
pub trait FqAlgebra: Ring {
    fn base(&self) -> &Fq;
    fn lift_base(&self, c: u8) -> Self::Elem;

    fn frob(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.base().q() as u64)
    }

    /// `c * a` for a constant `c` in F_q.
    fn scale(&self, c: u8, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.lift_base(c), a)
    }
}
