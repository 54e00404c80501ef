//! Truth-table Boolean functions on F_{2^n}.
//!
//! A table stores one bit per field element, indexed by the element's
//! integer encoding, packed 64 per word. All the transforms (Walsh, ANF)
//! and the exhaustive low-order nonlinearity sweep live here.

use std::sync::Arc;

use rayon::prelude::*;

use crate::field::{FieldContext, FieldElement};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BoolFunError {
    #[error("truth tables come from different fields")]
    ContextMismatch,
    #[error("direction {0:#x} is not an element of this field")]
    DirectionOutOfRange(u32),
    #[error("order {order} not in 1..={n}")]
    InvalidOrder { order: u32, n: u32 },
    #[error("sweep needs 2^{required_log2} transforms, budget allows {budget}")]
    BudgetExceeded { required_log2: u32, budget: u64 },
    #[error("hex truth table has wrong length (expected {expected} digits)")]
    BadHexLength { expected: usize },
    #[error("invalid hex digit in truth table")]
    BadHexDigit,
}

/// Boolean function given by its 2^n-entry truth table.
#[derive(Clone)]
pub struct TruthTable {
    ctx: Arc<FieldContext>,
    words: Vec<u64>,
}

impl std::fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TruthTable(n={}, wt={})", self.n(), self.weight())
    }
}

impl PartialEq for TruthTable {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx) && self.words == other.words
    }
}
impl Eq for TruthTable {}

fn words_for(n: u32) -> usize {
    1.max((1usize << n) >> 6)
}

impl TruthTable {
    pub fn zero(ctx: Arc<FieldContext>) -> TruthTable {
        let words = vec![0u64; words_for(ctx.n())];
        TruthTable { ctx, words }
    }

    pub fn from_fn(ctx: Arc<FieldContext>, mut f: impl FnMut(u32) -> bool) -> TruthTable {
        let mut tt = TruthTable::zero(ctx);
        for x in 0..tt.len() as u32 {
            if f(x) {
                tt.set(x, true);
            }
        }
        tt
    }

    /// f(x) = tr_n(lambda * x^d). Built incrementally along the cyclic group
    /// generated by the primitive element: one multiplication per entry.
    pub fn trace_monomial(ctx: Arc<FieldContext>, lambda: FieldElement, d: u64) -> TruthTable {
        let mut tt = TruthTable::zero(ctx);
        let ctx = tt.ctx.clone();
        if d == 0 {
            // x^0 = 1 everywhere under the 0^0 = 1 convention.
            if ctx.abs_trace(lambda) == 1 {
                for x in 0..tt.len() as u32 {
                    tt.set(x, true);
                }
            }
            return tt;
        }
        let g = ctx.generator();
        let gd = ctx.pow(g, (d % ctx.order() as u64) as i64).expect("g != 0");
        let mut x = FieldElement::ONE;
        let mut y = lambda; // lambda * x^d along the orbit
        for _ in 0..ctx.order() {
            if ctx.abs_trace(y) == 1 {
                tt.set(x.0, true);
            }
            x = ctx.mul(x, g);
            y = ctx.mul(y, gd);
        }
        // f(0) = tr(lambda * 0^d) = 0 for d > 0.
        tt
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn len(&self) -> usize {
        1usize << self.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: u32, v: bool) {
        let w = &mut self.words[(x >> 6) as usize];
        if v {
            *w |= 1 << (x & 63);
        } else {
            *w &= !(1 << (x & 63));
        }
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn distance(&self, other: &TruthTable) -> Result<u64, BoolFunError> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(BoolFunError::ContextMismatch);
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    pub fn xor(&self, other: &TruthTable) -> Result<TruthTable, BoolFunError> {
        if !self.ctx.same_field(&other.ctx) {
            return Err(BoolFunError::ContextMismatch);
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(TruthTable {
            ctx: self.ctx.clone(),
            words,
        })
    }

    pub(crate) fn xor_in_place(&mut self, other: &TruthTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// D_a f(x) = f(x) + f(x + a); field addition is XOR of encodings.
    pub fn derivative(&self, a: FieldElement) -> Result<TruthTable, BoolFunError> {
        if a.0 as usize >= self.len() {
            return Err(BoolFunError::DirectionOutOfRange(a.0));
        }
        let mut out = TruthTable::zero(self.ctx.clone());
        for x in 0..self.len() as u32 {
            out.set(x, self.get(x) ^ self.get(x ^ a.0));
        }
        Ok(out)
    }

    pub fn derivative_chain(&self, dirs: &[FieldElement]) -> Result<TruthTable, BoolFunError> {
        let mut cur = self.clone();
        for &a in dirs {
            cur = cur.derivative(a)?;
        }
        Ok(cur)
    }

    /// Signed Walsh spectrum W_f(alpha) over all alpha, via one in-place
    /// butterfly followed by the trace-form index substitution.
    pub fn walsh_transform(&self) -> WalshSpectrum {
        let size = self.len();
        let mut v = vec![0i32; size];
        for (x, slot) in v.iter_mut().enumerate() {
            *slot = if self.get(x as u32) { -1 } else { 1 };
        }
        fwht_in_place(&mut v);
        // v[beta] = sum_x (-1)^{f(x) + <beta, x>}; reindex beta = phi(alpha)
        // where bit i of phi(alpha) is tr(alpha * x^i).
        let rows = dual_basis_rows(&self.ctx);
        let mut values = vec![0i32; size];
        for (alpha, slot) in values.iter_mut().enumerate() {
            let mut beta = 0u32;
            let mut a = alpha as u32;
            while a != 0 {
                let j = a.trailing_zeros();
                beta ^= rows[j as usize];
                a &= a - 1;
            }
            *slot = v[beta as usize];
        }
        WalshSpectrum {
            n: self.n(),
            values,
        }
    }

    /// First-order nonlinearity 2^{n-1} - max|W|/2.
    pub fn nonlinearity(&self) -> u64 {
        let size = self.len();
        let mut v = vec![0i32; size];
        for (x, slot) in v.iter_mut().enumerate() {
            *slot = if self.get(x as u32) { -1 } else { 1 };
        }
        fwht_in_place(&mut v);
        let max = v.iter().map(|w| w.unsigned_abs() as u64).max().unwrap();
        (size as u64 - max) / 2
    }

    /// Algebraic normal form via the binary Moebius transform.
    pub fn anf(&self) -> AnfTable {
        let mut words = self.words.clone();
        moebius_in_place(&mut words, self.n());
        AnfTable {
            n: self.n(),
            words,
        }
    }

    /// Degree of the ANF; the zero function has degree 0 by convention.
    pub fn algebraic_degree(&self) -> u32 {
        self.anf().degree()
    }

    /// Exact r-th order nonlinearity by exhausting every homogeneous part of
    /// degrees 2..=r and minimizing the first-order nonlinearity of the
    /// shifted function; the affine part is absorbed by the Walsh maximum.
    ///
    /// `budget` caps the number of Walsh transforms the sweep may spend.
    pub fn exact_nl_r(&self, r: u32, budget: u64) -> Result<u64, BoolFunError> {
        let n = self.n();
        if r == 0 || r > n {
            return Err(BoolFunError::InvalidOrder { order: r, n });
        }
        if r == 1 {
            return Ok(self.nonlinearity());
        }
        let monomials: Vec<u32> = (0..self.len() as u32)
            .filter(|m| {
                let w = m.count_ones();
                2 <= w && w <= r
            })
            .collect();
        let m = monomials.len() as u32;
        if m >= 63 || (1u64 << m) > budget {
            return Err(BoolFunError::BudgetExceeded {
                required_log2: m,
                budget,
            });
        }
        // Truth table of each monomial: set where the support mask is covered.
        let mono_tables: Vec<TruthTable> = monomials
            .iter()
            .map(|&s| TruthTable::from_fn(self.ctx.clone(), |x| x & s == s))
            .collect();

        let total: u64 = 1 << m;
        let chunk = (total / 512).clamp(1, 1 << 16);
        let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
        let best = starts
            .into_par_iter()
            .map(|lo| {
                let hi = (lo + chunk).min(total);
                let mut cur = self.clone();
                let mut bits = lo ^ (lo >> 1);
                while bits != 0 {
                    let i = bits.trailing_zeros();
                    cur.xor_in_place(&mono_tables[i as usize]);
                    bits &= bits - 1;
                }
                let mut buf = vec![0i32; cur.len()];
                let mut best = u64::MAX;
                for idx in lo..hi {
                    for (x, slot) in buf.iter_mut().enumerate() {
                        *slot = if cur.get(x as u32) { -1 } else { 1 };
                    }
                    fwht_in_place(&mut buf);
                    let max = buf.iter().map(|w| w.unsigned_abs() as u64).max().unwrap();
                    best = best.min((cur.len() as u64 - max) / 2);
                    if idx + 1 < hi {
                        // Consecutive Gray codes differ in exactly this bit.
                        let flip = (idx + 1).trailing_zeros();
                        cur.xor_in_place(&mono_tables[flip as usize]);
                    }
                }
                best
            })
            .min()
            .unwrap_or_else(|| self.nonlinearity());
        Ok(best)
    }

    /// Hex export: bytes in index order, bit j of byte k is entry 8k+j.
    pub fn to_hex(&self) -> String {
        self.to_bytes()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = 1.max(self.len() / 8);
        let mut out = vec![0u8; nbytes];
        for (k, byte) in out.iter_mut().enumerate() {
            let w = self.words[k / 8];
            *byte = (w >> ((k % 8) * 8)) as u8;
        }
        out
    }

    pub fn from_hex(ctx: Arc<FieldContext>, s: &str) -> Result<TruthTable, BoolFunError> {
        let expected = 2 * 1.max((1usize << ctx.n()) / 8);
        if s.len() != expected {
            return Err(BoolFunError::BadHexLength { expected });
        }
        let mut bytes = Vec::with_capacity(expected / 2);
        for i in (0..s.len()).step_by(2) {
            let b = u8::from_str_radix(&s[i..i + 2], 16)
                .map_err(|_| BoolFunError::BadHexDigit)?;
            bytes.push(b);
        }
        Ok(TruthTable::from_bytes(ctx, &bytes))
    }

    pub fn from_bytes(ctx: Arc<FieldContext>, bytes: &[u8]) -> TruthTable {
        let mut tt = TruthTable::zero(ctx);
        for (k, &b) in bytes.iter().enumerate() {
            if k * 8 >= tt.len() {
                break;
            }
            tt.words[k / 8] |= (b as u64) << ((k % 8) * 8);
        }
        // Mask stray bits beyond 2^n for sub-word tables.
        if tt.len() < 64 {
            tt.words[0] &= (1u64 << tt.len()) - 1;
        }
        tt
    }
}

/// Signed Walsh spectrum: values[enc(alpha)] = W_f(alpha).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i32>,
}

impl WalshSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn value_at(&self, alpha: FieldElement) -> i32 {
        self.values[alpha.0 as usize]
    }

    pub fn max_abs(&self) -> u32 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap()
    }

    /// Exact Parseval identity: sum of squares equals 2^{2n}.
    pub fn parseval_holds(&self) -> bool {
        let sum: u128 = self.values.iter().map(|&v| (v as i128 * v as i128) as u128).sum();
        sum == 1u128 << (2 * self.n)
    }

    /// Multiset of values as (value, multiplicity), ascending by value.
    pub fn multiset(&self) -> Vec<(i32, u64)> {
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        let mut out: Vec<(i32, u64)> = Vec::new();
        for v in sorted {
            match out.last_mut() {
                Some((val, c)) if *val == v => *c += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

/// ANF coefficients packed like a truth table, indexed by monomial mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfTable {
    n: u32,
    words: Vec<u64>,
}

impl AnfTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn coeff(&self, mask: u32) -> bool {
        self.words[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
    }

    pub fn degree(&self) -> u32 {
        let mut deg = 0;
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                let mask = (wi as u32) << 6 | b;
                deg = deg.max(mask.count_ones());
                w &= w - 1;
            }
        }
        deg
    }

    /// Inverse Moebius transform back to a truth table.
    pub fn to_truth_table(&self, ctx: Arc<FieldContext>) -> TruthTable {
        assert_eq!(ctx.n(), self.n);
        let mut words = self.words.clone();
        moebius_in_place(&mut words, self.n);
        TruthTable { ctx, words }
    }
}

/// In-place Walsh-Hadamard butterfly over +/-1 integers widened to i32.
pub fn fwht_in_place(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        for chunk in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for i in 0..h {
                let a = lo[i];
                let b = hi[i];
                lo[i] = a + b;
                hi[i] = a - b;
            }
        }
        h <<= 1;
    }
}

/// In-place binary Moebius (subset-sum over GF(2)) transform on a packed
/// table; an involution.
fn moebius_in_place(words: &mut [u64], n: u32) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for k in 0..n {
        if k < 6 {
            let shift = 1usize << k;
            let mask = MASKS[k as usize];
            let upto = 1.max((1usize << n) >> 6);
            for w in words.iter_mut().take(upto) {
                *w ^= (*w & mask) << shift;
            }
        } else {
            let stride = 1usize << (k - 6);
            let block = stride * 2;
            let total = (1usize << n) >> 6;
            let mut base = 0;
            while base < total {
                for i in 0..stride {
                    let lo = words[base + i];
                    words[base + stride + i] ^= lo;
                }
                base += block;
            }
        }
    }
}

/// Rows of the trace dual-basis substitution: rows[j] has bit i set iff
/// tr(x^{i+j} mod modulus) = 1.
fn dual_basis_rows(ctx: &FieldContext) -> Vec<u32> {
    let n = ctx.n();
    let mut tp = vec![0u8; (2 * n - 1) as usize];
    let mut p = FieldElement::ONE;
    for t in tp.iter_mut() {
        *t = ctx.abs_trace(p);
        p = ctx.mul(p, FieldElement(0b10));
    }
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| (tp[(i + j) as usize] as u32) << i)
                .fold(0, |acc, b| acc | b)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn ctx(n: u32) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(n).unwrap())
    }

    /// Direct-evaluation oracle for trace monomials.
    fn trace_monomial_naive(ctx: &Arc<FieldContext>, lambda: FieldElement, d: u64) -> TruthTable {
        TruthTable::from_fn(ctx.clone(), |x| {
            let xp = ctx.pow(FieldElement(x), d as i64).unwrap();
            ctx.abs_trace(ctx.mul(lambda, xp)) == 1
        })
    }

    #[test]
    fn trace_monomial_matches_direct_evaluation() {
        for n in 1..=8 {
            let c = ctx(n);
            for d in [0u64, 1, 3, 7, 15, (1 << n) - 2] {
                for lambda in [FieldElement::ZERO, FieldElement::ONE, c.generator()] {
                    let fast = TruthTable::trace_monomial(c.clone(), lambda, d);
                    let slow = trace_monomial_naive(&c, lambda, d);
                    assert_eq!(fast, slow, "n={n} d={d} lambda={lambda}");
                }
            }
        }
    }

    #[test]
    fn trace_monomial_edge_cases() {
        let c2 = ctx(2);
        let zero = TruthTable::trace_monomial(c2.clone(), FieldElement::ZERO, 3);
        assert_eq!(zero.weight(), 0);
        // x^3 = 1 on GF(4)* and tr_2(1) = 0, so the table is identically zero.
        let f = TruthTable::trace_monomial(c2, FieldElement::ONE, 3);
        assert_eq!(f.weight(), 0);
        let c3 = ctx(3);
        let f = TruthTable::trace_monomial(c3, FieldElement::ONE, 1);
        assert_eq!(f.weight(), 4);
    }

    #[test]
    fn walsh_of_affine_functions() {
        let c = ctx(5);
        let zero = TruthTable::zero(c.clone());
        let s = zero.walsh_transform();
        assert_eq!(s.value_at(FieldElement::ZERO), 32);
        assert_eq!(s.values().iter().filter(|&&v| v == 0).count(), 31);
        assert!(s.parseval_holds());
        for beta in [FieldElement::ONE, c.generator(), FieldElement(0b101)] {
            let f = TruthTable::trace_monomial(c.clone(), beta, 1);
            let s = f.walsh_transform();
            assert_eq!(s.value_at(beta), 32, "W(beta) = 2^n for f = tr(beta x)");
            let nonzero = s.values().iter().filter(|&&v| v != 0).count();
            assert_eq!(nonzero, 1);
            assert_eq!(f.nonlinearity(), 0);
        }
    }

    #[test]
    fn walsh_parseval_and_affine_distance_oracle() {
        // nl from the spectrum equals the brute-force distance to all
        // 2^{n+1} affine functions, for every monomial at small n.
        for n in 2..=5u32 {
            let c = ctx(n);
            for d in 1..(1u64 << n) {
                let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, d);
                let s = f.walsh_transform();
                assert!(s.parseval_holds(), "n={n} d={d}");
                let mut best = u64::MAX;
                for beta in 0..(1u32 << n) {
                    let lin = TruthTable::trace_monomial(c.clone(), FieldElement(beta), 1);
                    let dist = f.distance(&lin).unwrap();
                    best = best.min(dist).min((1u64 << n) - dist);
                }
                assert_eq!(f.nonlinearity(), best, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn anf_is_an_involution_and_degrees_match() {
        let c = ctx(6);
        let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, 15);
        let anf = f.anf();
        assert_eq!(anf.to_truth_table(c.clone()), f);
        assert_eq!(anf.degree(), 4); // wt2(15)
        let f7 = TruthTable::trace_monomial(ctx(5), FieldElement::ONE, 7);
        assert_eq!(f7.algebraic_degree(), 3);
        assert_eq!(TruthTable::zero(c).algebraic_degree(), 0);
    }

    #[test]
    fn monomial_degree_is_exponent_weight() {
        for n in 2..=8u32 {
            let c = ctx(n);
            for d in 1..(1u64 << n) {
                let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, d);
                if f.weight() > 0 {
                    assert_eq!(f.algebraic_degree(), (d as u32).count_ones(), "n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn derivatives() {
        let c = ctx(5);
        let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, 7);
        let z = f.derivative(FieldElement::ZERO).unwrap();
        assert_eq!(z.weight(), 0);
        let a = FieldElement(0b01001);
        let dd = f.derivative(a).unwrap().derivative(a).unwrap();
        assert_eq!(dd.weight(), 0);
        // Derivatives lose at least one degree.
        for d in [7u64, 15] {
            for n in 4..=10u32 {
                let c = ctx(n);
                let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, d);
                let deg = f.algebraic_degree();
                for a in [1u32, 2, (1 << n) - 1] {
                    let da = f.derivative(FieldElement(a)).unwrap();
                    assert!(da.algebraic_degree() <= deg.saturating_sub(1));
                }
            }
        }
    }

    #[test]
    fn derivative_matches_expanded_formula() {
        // D_a f(ax) = tr(a^7 (x^6 + ... + x + 1)) for f = tr(x^7).
        let c = ctx(5);
        let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, 7);
        for a in [FieldElement::ONE, c.generator(), FieldElement(0b11011)] {
            let da = f.derivative(a).unwrap();
            let a7 = c.pow(a, 7).unwrap();
            let rhs = TruthTable::from_fn(c.clone(), |x| {
                let x = FieldElement(x);
                let mut s = FieldElement::ZERO;
                for i in 0..=6 {
                    s = c.add(s, c.pow(x, i).unwrap());
                }
                c.abs_trace(c.mul(a7, s)) == 1
            });
            // rhs(x) = D_a f(a x): compare through the substitution x -> a^{-1} x.
            let scaled = TruthTable::from_fn(c.clone(), |x| {
                let y = c.mul(c.inv(a).unwrap(), FieldElement(x));
                rhs.get(y.0)
            });
            assert_eq!(da, scaled);
        }
    }

    #[test]
    fn exact_nl_r_basics() {
        let c = ctx(4);
        let zero = TruthTable::zero(c.clone());
        assert_eq!(zero.exact_nl_r(2, 1 << 20).unwrap(), 0);
        let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, 7);
        assert_eq!(f.exact_nl_r(1, 1 << 20).unwrap(), f.nonlinearity());
        // Degree-3 function: distance zero to itself once degree 3 allowed.
        assert_eq!(f.exact_nl_r(3, 1 << 20).unwrap(), 0);
        assert!(matches!(
            f.exact_nl_r(2, 4),
            Err(BoolFunError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn bent_witness_at_n4() {
        // Some monomial tr(lambda x^d) on GF(16) has a flat +/-4 spectrum,
        // reaching the maximum 2^{n-1} - 2^{n/2-1} = 6.
        let c = ctx(4);
        let found = (1..16u32).any(|lam| {
            (1..16u64).any(|d| {
                let f = TruthTable::trace_monomial(c.clone(), FieldElement(lam), d);
                f.nonlinearity() == 6
            })
        });
        assert!(found, "expected a bent trace monomial at n=4");
    }

    #[test]
    fn hex_roundtrip() {
        let c = ctx(5);
        let f = TruthTable::trace_monomial(c.clone(), FieldElement::ONE, 7);
        let hex = f.to_hex();
        assert_eq!(hex.len(), 8);
        let back = TruthTable::from_hex(c, &hex).unwrap();
        assert_eq!(back, f);
    }
}
