//! Arithmetic of F_q, F_{q^k}, A = F_q[T], its primes and quotients, and
//! matrices over them.

pub mod epoly;
pub mod field;
pub mod ideal;
pub mod matrix;
pub mod poly;
pub mod quotient;
pub mod ring;
pub mod snf;
