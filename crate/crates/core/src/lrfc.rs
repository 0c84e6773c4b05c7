//! Linear random fountain code: encoder, incremental decoder, and the
//! closed-form decoding-failure / overhead analytics.
//!
//! An output symbol is a random linear combination of the k input symbols
//! with coefficients drawn i.i.d. uniform from the field. The decoder keeps
//! the received coefficient matrix in row-echelon form and absorbs one column
//! at a time, so the rank is known after every received symbol.

use alloc::vec;
use alloc::vec::Vec;
use rand_core::RngCore;

use crate::gf::{Element, Field};
use crate::{Error, Result};

/// Default certified-tail truncation tolerance for the overhead series.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// A file fragment: the vector u of k input symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock {
    symbols: Vec<Element>,
}

impl SourceBlock {
    pub fn new(symbols: Vec<Element>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("source block must be nonempty"));
        }
        Ok(SourceBlock { symbols })
    }

    /// A block of k uniform random symbols.
    pub fn random<R: RngCore>(field: &Field, k: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("source block must be nonempty"));
        }
        Ok(SourceBlock {
            symbols: (0..k).map(|_| field.sample_uniform(rng)).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Element] {
        &self.symbols
    }
}

/// One output symbol: a coefficient column g and the value c = <g, u>.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSymbol {
    coeffs: Vec<Element>,
    value: Element,
}

impl CodedSymbol {
    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn value(&self) -> Element {
        self.value
    }
}

/// Generate one output symbol with i.i.d. uniform coefficients.
pub fn encode<R: RngCore>(field: &Field, block: &SourceBlock, rng: &mut R) -> CodedSymbol {
    let coeffs: Vec<Element> = (0..block.k()).map(|_| field.sample_uniform(rng)).collect();
    let value = inner_product(field, &coeffs, block.symbols());
    CodedSymbol { coeffs, value }
}

fn inner_product(field: &Field, a: &[Element], b: &[Element]) -> Element {
    let mut acc = 0;
    for (&x, &y) in a.iter().zip(b) {
        acc ^= field.mul(x, y);
    }
    acc
}

// Row-echelon storage. Rows are indexed by pivot position (the first nonzero
// coefficient). GF(2) columns with k <= 128 are bit-packed into a u128, which
// turns a row update into two XORs; everything else keeps full byte rows
// normalized to a unit pivot.
enum Rows {
    Bits(Vec<Option<(u128, Element)>>),
    Bytes(Vec<Option<ByteRow>>),
}

struct ByteRow {
    coeffs: Vec<Element>,
    value: Element,
}

/// Incremental Gaussian-elimination decoder for one source block.
///
/// Single-owner mutable; create one per decoding attempt.
pub struct Decoder<'a> {
    field: &'a Field,
    k: usize,
    rank: usize,
    collected: u64,
    rows: Rows,
}

impl<'a> Decoder<'a> {
    pub fn new(field: &'a Field, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1"));
        }
        let rows = if field.order() == 2 && k <= 128 {
            Rows::Bits(vec![None; k])
        } else {
            Rows::Bytes((0..k).map(|_| None).collect())
        };
        Ok(Decoder { field, k, rank: 0, collected: 0, rows })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of symbols absorbed so far (m).
    pub fn collected(&self) -> u64 {
        self.collected
    }

    /// Receiver overhead so far: collected - k (negative before k symbols).
    pub fn overhead(&self) -> i64 {
        self.collected as i64 - self.k as i64
    }

    pub fn is_complete(&self) -> bool {
        self.rank == self.k
    }

    /// Absorb one coded symbol; returns 1 if its column was linearly
    /// independent of those already absorbed, 0 otherwise.
    pub fn add(&mut self, sym: &CodedSymbol) -> Result<u32> {
        if sym.coeffs.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: sym.coeffs.len() });
        }
        self.collected += 1;
        let delta = match &mut self.rows {
            Rows::Bits(rows) => {
                let mut v: u128 = 0;
                for (i, &c) in sym.coeffs.iter().enumerate() {
                    v |= (c as u128) << i;
                }
                let mut val = sym.value;
                loop {
                    if v == 0 {
                        break 0;
                    }
                    let p = v.trailing_zeros() as usize;
                    match rows[p] {
                        Some((rc, rv)) => {
                            v ^= rc;
                            val ^= rv;
                        }
                        None => {
                            rows[p] = Some((v, val));
                            break 1;
                        }
                    }
                }
            }
            Rows::Bytes(rows) => {
                let field = self.field;
                let mut v = sym.coeffs.clone();
                let mut val = sym.value;
                let mut delta = 0;
                for p in 0..self.k {
                    let c = v[p];
                    if c == 0 {
                        continue;
                    }
                    match &rows[p] {
                        Some(row) => {
                            val ^= field.mul(c, row.value);
                            addmul(field, &mut v[p..], &row.coeffs[p..], c);
                        }
                        None => {
                            // Normalize to a unit pivot before inserting.
                            let s = field.inv(c).expect("pivot is nonzero");
                            scale(field, &mut v[p..], s);
                            val = field.mul(val, s);
                            rows[p] = Some(ByteRow { coeffs: v, value: val });
                            delta = 1;
                            break;
                        }
                    }
                }
                delta
            }
        };
        self.rank += delta as usize;
        debug_assert!(self.rank <= self.k && (self.rank as u64) <= self.collected);
        Ok(delta)
    }

    /// Back-substitute and return the source block. Requires rank = k.
    pub fn solve(&self) -> Result<SourceBlock> {
        if self.rank < self.k {
            return Err(Error::RankDeficient { rank: self.rank, k: self.k });
        }
        let k = self.k;
        let mut x = vec![0u8; k];
        match &self.rows {
            Rows::Bits(rows) => {
                for p in (0..k).rev() {
                    let (rc, rv) = rows[p].expect("full rank");
                    let mut val = rv;
                    let mut rest = (rc >> 1) >> p; // bits above the pivot
                    let mut j = p + 1;
                    while rest != 0 {
                        let step = rest.trailing_zeros() as usize;
                        j += step;
                        val ^= x[j];
                        rest >>= step + 1;
                        j += 1;
                    }
                    x[p] = val;
                }
            }
            Rows::Bytes(rows) => {
                for p in (0..k).rev() {
                    let row = rows[p].as_ref().expect("full rank");
                    let mut val = row.value;
                    for j in p + 1..k {
                        val ^= self.field.mul(row.coeffs[j], x[j]);
                    }
                    x[p] = val;
                }
            }
        }
        SourceBlock::new(x)
    }
}

/// dst += c * src, element-wise.
fn addmul(field: &Field, dst: &mut [Element], src: &[Element], c: Element) {
    debug_assert_eq!(dst.len(), src.len());
    if c == 0 {
        return;
    }
    if c == 1 || field.degree() == 1 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        let row = field.mul_row(c);
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= row[*s as usize];
        }
    }
}

/// v *= c, element-wise.
fn scale(field: &Field, v: &mut [Element], c: Element) {
    if c == 1 || field.degree() == 1 {
        return;
    }
    let row = field.mul_row(c);
    for e in v.iter_mut() {
        *e = row[*e as usize];
    }
}

// ---------------------------------------------------------------------------
// Closed-form analytics
// ---------------------------------------------------------------------------

/// Decoding-failure probability with k input symbols and overhead delta:
/// 1 - prod_{i=1..k} (1 - q^{i-1-k-delta}).
///
/// Extended with P_F = 1 for delta < 0 (fewer than k symbols can never be
/// full rank), which makes the conditional backhaul pmf uniform across cases.
pub fn p_fail(k: usize, delta: i64, q: u32) -> f64 {
    debug_assert!(k >= 1 && q >= 2);
    if delta < 0 {
        return 1.0;
    }
    let qf = q as f64;
    // Terms are q^{-(delta+1)}, q^{-(delta+2)}, ... Accumulate the product
    // in log space so failure probabilities far below machine epsilon (large
    // delta, large q) keep full relative accuracy; they must still sit
    // strictly inside the q^{-delta-1} .. q^{-delta}/(q-1) sandwich.
    let mut t = libm::pow(qf, -((delta + 1) as f64));
    let mut log_prod = 0.0;
    for _ in 0..k {
        if t == 0.0 {
            break;
        }
        log_prod += libm::log1p(-t);
        t /= qf;
    }
    -libm::expm1(log_prod)
}

/// Lower bound q^{-delta-1} on the failure probability (delta >= 0).
pub fn p_fail_lower(delta: i64, q: u32) -> f64 {
    debug_assert!(delta >= 0 && q >= 2);
    libm::pow(q as f64, -((delta + 1) as f64))
}

/// Upper bound q^{-delta} / (q-1) on the failure probability (delta >= 0).
pub fn p_fail_upper(delta: i64, q: u32) -> f64 {
    debug_assert!(delta >= 0 && q >= 2);
    libm::pow(q as f64, -(delta as f64)) / (q as f64 - 1.0)
}

/// Probability that decoding succeeds with exactly k + delta collected
/// symbols: P_F(delta-1) - P_F(delta).
pub fn overhead_pmf(k: usize, delta: i64, q: u32) -> f64 {
    debug_assert!(delta >= 0);
    p_fail(k, delta - 1, q) - p_fail(k, delta, q)
}

/// Average receiver overhead E[Delta] = sum_{delta >= 0} P_F(delta).
///
/// The series is truncated at the first D with p_fail_upper(D, q) < tail_tol;
/// the discarded geometric tail is below q^{-D} * q / (q-1)^2.
pub fn avg_overhead(k: usize, q: u32, tail_tol: f64) -> f64 {
    debug_assert!(tail_tol > 0.0);
    let mut sum = 0.0;
    let mut delta = 0;
    while p_fail_upper(delta, q) >= tail_tol {
        sum += p_fail(k, delta, q);
        delta += 1;
    }
    sum
}

/// Closed-form upper bound on the average overhead: q / (q-1)^2.
pub fn avg_overhead_bound(q: u32) -> f64 {
    debug_assert!(q >= 2);
    let qf = q as f64;
    qf / ((qf - 1.0) * (qf - 1.0))
}
