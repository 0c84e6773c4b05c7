//! Arithmetic over binary-extension finite fields GF(2^m), 1 <= m <= 8.
//!
//! Elements are stored as `u8` in polynomial basis: bit i of the value is the
//! coefficient of x^i. Addition is XOR. Multiplication and inversion go
//! through precomputed tables built from a fixed primitive polynomial per
//! degree, so results are bit-identical across implementations for a given
//! seed. GF(2) skips the tables entirely.

use alloc::vec;
use alloc::vec::Vec;
use rand_core::RngCore;

use crate::{Error, Result};

/// A field element. Valid values are `0..q` for the field that produced it.
pub type Element = u8;

/// Fixed primitive polynomials per extension degree, bitmask including the
/// leading term: m=1 is x+1, m=8 is x^8+x^4+x^3+x^2+1 and so on.
const PRIMITIVE_POLY: [u32; 8] = [
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1000011,
    0b10001001,
    0b100011101,
];

/// A binary-extension finite field GF(2^m).
///
/// Immutable after construction; share freely across tasks.
pub struct Field {
    m: u32,
    q: u32,
    poly: u32,
    /// exp[i] = x^i, doubled to 2(q-1) entries so exp[log a + log b] needs no
    /// modular reduction. Empty for GF(2).
    exp: Vec<u8>,
    /// log[a] = discrete log of a base x; log[0] unused. Empty for GF(2).
    log: Vec<u8>,
    /// Flat q*q multiplication table, mul[a*q + b] = a*b. Empty for GF(2).
    mul: Vec<u8>,
    /// inv[a] for a >= 1; inv[0] unused. Empty for GF(2).
    inv: Vec<u8>,
}

impl Field {
    /// Build GF(2^m) for 1 <= m <= 8.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=8).contains(&m) {
            return Err(Error::DegreeOutOfRange(m));
        }
        let q = 1u32 << m;
        let poly = PRIMITIVE_POLY[(m - 1) as usize];
        if m == 1 {
            return Ok(Field { m, q, poly, exp: Vec::new(), log: Vec::new(), mul: Vec::new(), inv: Vec::new() });
        }

        let order = (q - 1) as usize;
        let mut exp = vec![0u8; 2 * order];
        let mut log = vec![0u8; q as usize];
        let mut v: u32 = 1;
        for i in 0..order {
            exp[i] = v as u8;
            exp[i + order] = v as u8;
            log[v as usize] = i as u8;
            v <<= 1;
            if v & q != 0 {
                v ^= poly;
            }
        }
        // The polynomial is primitive iff x returns to 1 only after q-1 steps.
        debug_assert_eq!(v, 1, "reduction polynomial is not primitive");

        let mut mul = vec![0u8; (q * q) as usize];
        for a in 1..q {
            for b in 1..q {
                let s = log[a as usize] as usize + log[b as usize] as usize;
                mul[(a * q + b) as usize] = exp[s];
            }
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            inv[a as usize] = exp[order - log[a as usize] as usize];
        }
        Ok(Field { m, q, poly, exp, log, mul, inv })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Field order q = 2^m.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn reduction_poly(&self) -> u32 {
        self.poly
    }

    /// Antilog table x^0 .. x^{2(q-1)-1} (doubled); empty for GF(2).
    pub fn exp_table(&self) -> &[u8] {
        &self.exp
    }

    /// Discrete-log table; entry 0 is unused. Empty for GF(2).
    pub fn log_table(&self) -> &[u8] {
        &self.log
    }

    /// Addition (and subtraction): bitwise XOR in characteristic 2.
    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        if self.m == 1 {
            a & b
        } else {
            self.mul[(a as usize) * self.q as usize + b as usize]
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: Element) -> Result<Element> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(if self.m == 1 { 1 } else { self.inv[a as usize] })
    }

    /// One row of the multiplication table: `mul_row(a)[b] == a*b`.
    /// Only meaningful for m >= 2; used by the decoder's scaled-row updates.
    #[inline]
    pub(crate) fn mul_row(&self, a: Element) -> &[u8] {
        let q = self.q as usize;
        &self.mul[a as usize * q..(a as usize + 1) * q]
    }

    /// Uniform element draw. q is a power of two, so masking the low bits of
    /// the generator output is exactly uniform.
    #[inline]
    pub fn sample_uniform<R: RngCore>(&self, rng: &mut R) -> Element {
        (rng.next_u32() & (self.q - 1)) as Element
    }
}

impl core::fmt::Debug for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("q", &self.q)
            .field("poly", &self.poly)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::SeedableRng;

    #[test]
    fn degree_bounds() {
        assert!(matches!(Field::new(0), Err(Error::DegreeOutOfRange(0))));
        assert!(matches!(Field::new(9), Err(Error::DegreeOutOfRange(9))));
        assert_eq!(Field::new(1).unwrap().order(), 2);
        assert_eq!(Field::new(4).unwrap().order(), 16);
        assert_eq!(Field::new(8).unwrap().order(), 256);
    }

    #[test]
    fn exp_table_period_255() {
        // x^255 = 1 in GF(256), verified by repeated multiplication.
        let f = Field::new(8).unwrap();
        assert_eq!(f.exp_table().len(), 510);
        assert_eq!(f.exp_table()[0], 1);
        assert_eq!(f.exp_table()[255], 1);
        assert_eq!(f.log_table()[2], 1);
        let x: Element = 2;
        let mut v: Element = 1;
        for _ in 0..255 {
            v = f.mul(v, x);
        }
        assert_eq!(v, 1);
        // and no earlier return to 1 (x is primitive)
        let mut v: Element = 1;
        for i in 1..255 {
            v = f.mul(v, x);
            assert_ne!(v, 1, "x has order {i} < 255");
        }
    }

    #[test]
    fn gf2_basics() {
        let f = Field::new(1).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.mul(1, 0), 0);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
    }

    #[test]
    fn gf4_alpha_squared() {
        // With x^2 + x + 1: alpha * alpha = alpha + 1, i.e. 2*2 = 3.
        let f = Field::new(2).unwrap();
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for m in 1..=8 {
            let f = Field::new(m).unwrap();
            let q = f.order() as u16;
            for a in 0..q {
                let a = a as Element;
                assert_eq!(f.add(a, a), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.mul(a, 1), a);
                for b in 0..q {
                    let b = b as Element;
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn distributivity() {
        // Exhaustive up to GF(16), randomized spot checks for GF(256).
        for m in [1, 2, 3, 4] {
            let f = Field::new(m).unwrap();
            let q = f.order() as u16;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        let (a, b, c) = (a as Element, b as Element, c as Element);
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
        let f = Field::new(8).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let a = f.sample_uniform(&mut rng);
            let b = f.sample_uniform(&mut rng);
            let c = f.sample_uniform(&mut rng);
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }

    #[test]
    fn associativity_mul_gf256_randomized() {
        let f = Field::new(8).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = f.sample_uniform(&mut rng);
            let b = f.sample_uniform(&mut rng);
            let c = f.sample_uniform(&mut rng);
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        }
    }

    #[test]
    fn sample_uniform_gf2_frequency() {
        let f = Field::new(1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let ones: u64 = (0..n).map(|_| f.sample_uniform(&mut rng) as u64).sum();
        let frac = ones as f64 / n as f64;
        // binomial 3-sigma interval around 0.5
        assert!((0.498..=0.502).contains(&frac), "frac = {frac}");
    }

    #[test]
    fn sample_uniform_gf16_covers_all_values() {
        let f = Field::new(4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut seen = [false; 16];
        for _ in 0..10_000 {
            seen[f.sample_uniform(&mut rng) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn sample_uniform_reproducible() {
        let f = Field::new(6).unwrap();
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            assert_eq!(f.sample_uniform(&mut a), f.sample_uniform(&mut b));
        }
    }
}
