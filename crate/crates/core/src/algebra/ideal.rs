use std::fmt;

use crate::algebra::field::Fq;
use crate::algebra::poly::APoly;
use crate::error::{Error, Result};

/// A nonzero prime ideal of F_q[T], given by its monic irreducible generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    generator: APoly,
    q: u8,
}

impl PrimeIdeal {
    pub fn new(generator: APoly, fq: &Fq) -> Result<PrimeIdeal> {
        if !generator.is_monic() || !generator.is_irreducible(fq) {
            return Err(Error::NotIrreducible(generator.to_expr()));
        }
        Ok(PrimeIdeal { generator, q: fq.q() })
    }

    pub fn parse(s: &str, fq: &Fq) -> Result<PrimeIdeal> {
        PrimeIdeal::new(APoly::parse(s, fq)?, fq)
    }

    pub fn generator(&self) -> &APoly {
        &self.generator
    }
    pub fn degree(&self) -> usize {
        self.generator.degree().unwrap()
    }
    pub fn q(&self) -> u8 {
        self.q
    }

    /// N(P) = card(A/P) = q^deg P.
    pub fn norm(&self) -> u128 {
        (self.q as u128).pow(self.degree() as u32)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let f3 = Fq::new(3).unwrap();
        assert_eq!(PrimeIdeal::parse("T", &f3).unwrap().norm(), 3);
        assert_eq!(PrimeIdeal::parse("T^2+1", &f3).unwrap().norm(), 9);
        let f2 = Fq::new(2).unwrap();
        assert_eq!(PrimeIdeal::parse("T^2+T+1", &f2).unwrap().norm(), 4);
    }

    #[test]
    fn rejects_reducible_and_non_monic() {
        let f2 = Fq::new(2).unwrap();
        assert!(PrimeIdeal::parse("T^2+1", &f2).is_err());
        let f3 = Fq::new(3).unwrap();
        assert!(PrimeIdeal::parse("2T+1", &f3).is_err());
    }
}
