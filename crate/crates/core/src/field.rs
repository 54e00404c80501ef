//! Exact arithmetic in binary fields F_{2^n} for 1 <= n <= 24.
//!
//! Elements are polynomial-basis residues encoded as little-endian bit
//! integers: bit i of the encoding is the coefficient of x^i. Addition is
//! XOR, multiplication is a carryless multiply followed by reduction modulo
//! a pinned irreducible polynomial. Truth-table indices elsewhere in the
//! crate reuse this encoding, so the two must never diverge.

use std::fmt;
use std::sync::OnceLock;

use crate::linalg;

pub const MIN_DEGREE: u32 = 1;
pub const MAX_DEGREE: u32 = 24;

/// Built-in table of default moduli: for each degree the lexicographically
/// smallest irreducible polynomial (smallest integer encoding with bit n set).
const DEFAULT_MODULI: &str = include_str!("../moduli.txt");

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("extension degree {0} out of supported range {MIN_DEGREE}..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("modulus {0:#x} does not have degree {1}")]
    WrongModulusDegree(u32, u32),
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("encoding {0:#x} is not an element of GF(2^{1})")]
    NotAnElement(u32, u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("zero has no negative power")]
    NegativePowerOfZero,
    #[error("operation requires a nonzero field element")]
    NonzeroRequired,
    #[error("subfield degree {r} does not divide {n}")]
    SubfieldDegree { r: u32, n: u32 },
    #[error("malformed moduli table line {0:?}")]
    MalformedModuliTable(String),
    #[error("moduli table has no entry for degree {0}")]
    MissingModulus(u32),
}

/// An element of F_{2^n}, valid only together with the context it came from.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase-hex encoding used by every serialized surface.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<FieldElement> {
        u32::from_str_radix(s, 16).ok().map(FieldElement)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:#x})", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Immutable description of one F_{2^n}: degree, modulus, a primitive
/// element, and the precomputed trace mask. Safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    n: u32,
    modulus: u32,
    g: FieldElement,
    order: u32,
    trace_mask: u32,
}

impl FieldContext {
    /// Builds the field with the pinned default modulus for `n`.
    pub fn new(n: u32) -> Result<FieldContext, FieldError> {
        let modulus = default_modulus(n)?;
        FieldContext::with_modulus(n, modulus)
    }

    /// Builds the field with an explicit modulus, which must be irreducible
    /// of degree exactly `n`.
    pub fn with_modulus(n: u32, modulus: u32) -> Result<FieldContext, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
            return Err(FieldError::DegreeOutOfRange(n));
        }
        if modulus.leading_zeros() != 31 - n {
            return Err(FieldError::WrongModulusDegree(modulus, n));
        }
        if !is_irreducible(modulus, n) {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        let order = (1u32 << n) - 1;
        let mut ctx = FieldContext {
            n,
            modulus,
            g: FieldElement::ONE,
            order,
            trace_mask: 0,
        };
        // Trace of each power basis element; bootstrapped before the mask
        // exists, so computed by explicit power sums.
        let mut mask = 0u32;
        for i in 0..n {
            if ctx.trace_by_powers(FieldElement(1 << i)) == 1 {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        ctx.g = ctx.find_primitive()?;
        Ok(ctx)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> u32 {
        1 << self.n
    }

    /// The pinned primitive element: smallest encoding of full order.
    pub fn generator(&self) -> FieldElement {
        self.g
    }

    /// Two contexts describe the same field iff degree and modulus agree.
    pub fn same_field(&self, other: &FieldContext) -> bool {
        self.n == other.n && self.modulus == other.modulus
    }

    pub fn element(&self, bits: u32) -> Result<FieldElement, FieldError> {
        if bits < self.size() {
            Ok(FieldElement(bits))
        } else {
            Err(FieldError::NotAnElement(bits, self.n))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size()).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.size()).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.reduce(clmul(a.0 as u64, b.0 as u64)))
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// a^e with the exponent normalized modulo 2^n - 1. Conventions:
    /// 0^0 = 1, 0^e = 0 for e > 0, and negative powers of zero are an error.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(FieldElement::ONE),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::NegativePowerOfZero),
            };
        }
        let m = self.order as i64;
        let e = if m == 0 { 0 } else { e.rem_euclid(m) } as u32;
        let mut acc = FieldElement::ONE;
        let mut base = a;
        let mut e = e;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        self.pow(a, -1)
    }

    /// Absolute trace tr_n(a) = a + a^2 + ... + a^{2^{n-1}}, returned as a bit.
    pub fn abs_trace(&self, a: FieldElement) -> u8 {
        ((a.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Relative trace onto the subfield F_{2^r}: a + a^{2^r} + ... .
    pub fn rel_trace(&self, a: FieldElement, r: u32) -> Result<FieldElement, FieldError> {
        if r == 0 || self.n % r != 0 {
            return Err(FieldError::SubfieldDegree { r, n: self.n });
        }
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.n / r {
            for _ in 0..r {
                t = self.square(t);
            }
            acc = self.add(acc, t);
        }
        Ok(acc)
    }

    /// Membership test for the subfield F_{2^r} viewed inside F_{2^n}.
    pub fn in_subfield(&self, a: FieldElement, r: u32) -> Result<bool, FieldError> {
        if r == 0 || self.n % r != 0 {
            return Err(FieldError::SubfieldDegree { r, n: self.n });
        }
        let mut t = a;
        for _ in 0..r {
            t = self.square(t);
        }
        Ok(t == a)
    }

    /// All solutions of x^2 + x = c: two (differing by 1) iff tr(c) = 0,
    /// none otherwise. Solved as an F_2-linear system.
    pub fn solve_artin_schreier(&self, c: FieldElement) -> Vec<FieldElement> {
        if self.abs_trace(c) != 0 {
            return Vec::new();
        }
        let n = self.n as usize;
        // Matrix of x |-> x^2 + x in the power basis, rows indexed by output bit.
        let mut rows = vec![0u32; n];
        for j in 0..n {
            let img = self.add(self.square(FieldElement(1 << j)), FieldElement(1 << j));
            for (i, row) in rows.iter_mut().enumerate() {
                *row |= (img.0 >> i & 1) << j;
            }
        }
        let x0 = linalg::solve(&rows, n, c.0)
            .expect("tr(c)=0 guarantees solvability of x^2+x=c");
        let mut roots = vec![FieldElement(x0), FieldElement(x0 ^ 1)];
        roots.sort();
        roots
    }

    /// Whether a nonzero `a` lies in the cube subgroup {g^{3s}}. Every
    /// nonzero element qualifies when gcd(3, 2^n - 1) = 1, i.e. odd n.
    pub fn cube_residue(&self, a: FieldElement) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::NonzeroRequired);
        }
        if self.order % 3 != 0 {
            return Ok(true);
        }
        Ok(self.pow(a, (self.order / 3) as i64)? == FieldElement::ONE)
    }

    /// All cube roots of a nonzero `a`: one root when gcd(3, 2^n-1) = 1,
    /// three when `a` is a cube residue, none otherwise.
    pub fn cube_roots(&self, a: FieldElement) -> Result<Vec<FieldElement>, FieldError> {
        if a.is_zero() {
            return Err(FieldError::NonzeroRequired);
        }
        let order = self.order as u64;
        if order % 3 != 0 {
            let inv3 = mod_inverse(3, order).expect("gcd(3, order) = 1");
            return Ok(vec![self.pow(a, inv3 as i64)?]);
        }
        if !self.cube_residue(a)? {
            return Ok(Vec::new());
        }
        // Split the group order as 3^s * m with gcd(3, m) = 1 and take cube
        // roots in the two factors separately.
        let (mut s, mut m) = (0u32, order);
        while m % 3 == 0 {
            s += 1;
            m /= 3;
        }
        let pow3s = 3u64.pow(s);
        let gamma = mod_inverse(pow3s % m, m).expect("gcd(3^s, m) = 1");
        let beta = mod_inverse(m % pow3s, pow3s).expect("gcd(m, 3^s) = 1");
        let c_part = self.pow(a, ((pow3s % order) * gamma % order) as i64)?;
        let d_part = self.pow(a, ((m % order) * beta % order) as i64)?;
        let e1 = self.pow(c_part, mod_inverse(3, m).expect("gcd(3,m)=1") as i64)?;
        // The 3-Sylow part is tiny (3^s <= 27 for n <= 24); search it.
        let h = self.pow(self.g, m as i64)?;
        let mut hj = FieldElement::ONE;
        let mut sylow_root = None;
        for _ in 0..pow3s {
            if self.pow(hj, 3)? == d_part {
                sylow_root = Some(hj);
                break;
            }
            hj = self.mul(hj, h);
        }
        let sylow_root = sylow_root.expect("cube residue has a root in the 3-Sylow subgroup");
        let root = self.mul(e1, sylow_root);
        let omega = self.pow(self.g, (order / 3) as i64)?;
        let mut roots = vec![
            root,
            self.mul(root, omega),
            self.mul(root, self.square(omega)),
        ];
        roots.sort();
        Ok(roots)
    }

    /// Multiplicative order of `a` (a != 0).
    pub fn element_order(&self, a: FieldElement) -> Result<u32, FieldError> {
        if a.is_zero() {
            return Err(FieldError::NonzeroRequired);
        }
        let mut ord = self.order;
        for p in prime_factors(self.order as u64) {
            while ord % p as u32 == 0
                && self.pow(a, (ord / p as u32) as i64)? == FieldElement::ONE
            {
                ord /= p as u32;
            }
        }
        Ok(ord)
    }

    fn reduce(&self, mut v: u64) -> u32 {
        let m = self.modulus as u64;
        while v >> self.n != 0 {
            let d = 63 - v.leading_zeros();
            v ^= m << (d - self.n);
        }
        v as u32
    }

    fn trace_by_powers(&self, a: FieldElement) -> u8 {
        let mut acc = a;
        let mut t = a;
        for _ in 1..self.n {
            t = self.square(t);
            acc = self.add(acc, t);
        }
        debug_assert!(acc.0 <= 1, "trace landed outside GF(2)");
        acc.0 as u8
    }

    fn find_primitive(&self) -> Result<FieldElement, FieldError> {
        if self.order == 1 {
            return Ok(FieldElement::ONE);
        }
        let factors = prime_factors(self.order as u64);
        'cand: for bits in 2..self.size() {
            let cand = FieldElement(bits);
            for &p in &factors {
                if self.pow(cand, (self.order as u64 / p) as i64)? == FieldElement::ONE {
                    continue 'cand;
                }
            }
            return Ok(cand);
        }
        unreachable!("every finite field has a primitive element")
    }
}

/// Carryless (GF(2)[x]) product of two polynomials of degree < 32.
fn clmul(mut a: u64, mut b: u64) -> u64 {
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility over GF(2): gcd(x^{2^i} + x, f) = 1 for all i < n, and
/// x^{2^n} = x (mod f).
fn is_irreducible(f: u32, n: u32) -> bool {
    let f = f as u64;
    let x = poly_mod(0b10, f);
    let mut t = x;
    for i in 1..=n {
        t = poly_mod(clmul(t, t), f);
        if i < n {
            if poly_gcd(t ^ x, f) != 1 {
                return false;
            }
        } else if t != x {
            return false;
        }
    }
    true
}

/// Parses a moduli table in the shipped `n<TAB>hex` format.
pub fn parse_moduli_table(text: &str) -> Result<Vec<(u32, u32)>, FieldError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(ns), Some(hs)) = (it.next(), it.next()) else {
            return Err(FieldError::MalformedModuliTable(line.to_string()));
        };
        let n: u32 = ns
            .parse()
            .map_err(|_| FieldError::MalformedModuliTable(line.to_string()))?;
        let h = u32::from_str_radix(hs, 16)
            .map_err(|_| FieldError::MalformedModuliTable(line.to_string()))?;
        out.push((n, h));
    }
    Ok(out)
}

fn builtin_moduli() -> &'static Vec<(u32, u32)> {
    static TABLE: OnceLock<Vec<(u32, u32)>> = OnceLock::new();
    TABLE.get_or_init(|| parse_moduli_table(DEFAULT_MODULI).expect("shipped table is well formed"))
}

/// The pinned default modulus for degree `n`.
pub fn default_modulus(n: u32) -> Result<u32, FieldError> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        return Err(FieldError::DegreeOutOfRange(n));
    }
    builtin_moduli()
        .iter()
        .find(|&&(deg, _)| deg == n)
        .map(|&(_, m)| m)
        .ok_or(FieldError::MissingModulus(n))
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v % p == 0 {
            out.push(p);
            while v % p == 0 {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_match_pinned_values() {
        assert_eq!(default_modulus(3).unwrap(), 0b1011);
        assert_eq!(default_modulus(2).unwrap(), 0b111);
        // AES polynomial x^8+x^4+x^3+x+1 is the smallest irreducible octic.
        assert_eq!(default_modulus(8).unwrap(), 0x11b);
        assert!(default_modulus(0).is_err());
        assert!(default_modulus(25).is_err());
    }

    #[test]
    fn explicit_modulus_is_validated() {
        assert!(FieldContext::with_modulus(8, 0x11b).is_ok());
        // x^4 + x^2 + 1 = (x^2+x+1)^2 is reducible.
        assert_eq!(
            FieldContext::with_modulus(4, 0b10101).unwrap_err(),
            FieldError::ReducibleModulus(0b10101)
        );
        assert!(matches!(
            FieldContext::with_modulus(4, 0b1011),
            Err(FieldError::WrongModulusDegree(..))
        ));
    }

    #[test]
    fn small_products() {
        let f = FieldContext::new(3).unwrap();
        let x = FieldElement(0b010);
        assert_eq!(f.mul(x, x), FieldElement(0b100));
        assert_eq!(f.mul(FieldElement(0b100), x), FieldElement(0b011)); // x^3 = x+1
        for a in f.elements() {
            assert_eq!(f.mul(a, FieldElement::ONE), a);
        }
    }

    #[test]
    fn pow_and_inv() {
        let f = FieldContext::new(3).unwrap();
        assert_eq!(f.pow(FieldElement::ZERO, 5).unwrap(), FieldElement::ZERO);
        assert_eq!(f.pow(FieldElement::ZERO, 0).unwrap(), FieldElement::ONE);
        assert!(f.pow(FieldElement::ZERO, -2).is_err());
        for a in f.nonzero_elements() {
            assert_eq!(f.pow(a, f.order() as i64).unwrap(), FieldElement::ONE);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
        // 1/x = x^2 + 1 in GF(8) with modulus x^3+x+1.
        assert_eq!(f.inv(FieldElement(0b010)).unwrap(), FieldElement(0b101));
    }

    #[test]
    fn traces() {
        let f3 = FieldContext::new(3).unwrap();
        let f2 = FieldContext::new(2).unwrap();
        assert_eq!(f3.abs_trace(FieldElement::ZERO), 0);
        assert_eq!(f3.abs_trace(FieldElement::ONE), 1);
        assert_eq!(f2.abs_trace(FieldElement::ONE), 0);
    }

    #[test]
    fn relative_trace_lands_in_subfield() {
        let f = FieldContext::new(4).unwrap();
        assert_eq!(f.rel_trace(FieldElement::ZERO, 2).unwrap(), FieldElement::ZERO);
        for a in f.elements() {
            assert_eq!(f.rel_trace(a, 4).unwrap(), a);
            let t = f.rel_trace(a, 2).unwrap();
            assert!(f.in_subfield(t, 2).unwrap());
        }
        let zeros = f
            .elements()
            .filter(|&a| f.rel_trace(a, 2).unwrap().is_zero())
            .count();
        assert_eq!(zeros, 4); // 2^{n-r} preimages of each subfield value
        assert!(f.rel_trace(FieldElement::ONE, 3).is_err());
    }

    #[test]
    fn artin_schreier_solutions() {
        let f = FieldContext::new(3).unwrap();
        assert_eq!(
            f.solve_artin_schreier(FieldElement::ZERO),
            vec![FieldElement::ZERO, FieldElement::ONE]
        );
        let x = FieldElement(0b010);
        let c = f.add(f.square(x), x);
        assert_eq!(f.solve_artin_schreier(c), vec![x, FieldElement(0b011)]);
        for c in f.elements() {
            let roots = f.solve_artin_schreier(c);
            if f.abs_trace(c) == 0 {
                assert_eq!(roots.len(), 2);
                for &r in &roots {
                    assert_eq!(f.add(f.square(r), r), c);
                }
            } else {
                assert!(roots.is_empty());
            }
        }
    }

    #[test]
    fn cube_residues_and_roots() {
        // Odd n: cubing is a bijection, everything is a residue.
        let f5 = FieldContext::new(5).unwrap();
        for a in f5.nonzero_elements() {
            assert!(f5.cube_residue(a).unwrap());
            let roots = f5.cube_roots(a).unwrap();
            assert_eq!(roots.len(), 1);
            assert_eq!(f5.pow(roots[0], 3).unwrap(), a);
        }
        // Even n: exactly (2^n-1)/3 residues, three roots each.
        let f4 = FieldContext::new(4).unwrap();
        assert!(f4.cube_residue(FieldElement::ONE).unwrap());
        assert!(f4.cube_roots(FieldElement::ONE).unwrap().contains(&FieldElement::ONE));
        assert!(!f4.cube_residue(f4.generator()).unwrap());
        let mut residues = 0;
        for a in f4.nonzero_elements() {
            let roots = f4.cube_roots(a).unwrap();
            if f4.cube_residue(a).unwrap() {
                residues += 1;
                assert_eq!(roots.len(), 3);
                for &r in &roots {
                    assert_eq!(f4.pow(r, 3).unwrap(), a);
                }
            } else {
                assert!(roots.is_empty());
            }
        }
        assert_eq!(residues, 5);
        // Fields whose group order is divisible by 9 exercise the Sylow search.
        let f6 = FieldContext::new(6).unwrap();
        for a in f6.nonzero_elements() {
            let roots = f6.cube_roots(a).unwrap();
            for &r in &roots {
                assert_eq!(f6.pow(r, 3).unwrap(), a);
            }
            assert_eq!(roots.len(), if f6.cube_residue(a).unwrap() { 3 } else { 0 });
        }
    }

    #[test]
    fn generator_has_full_order() {
        for n in 1..=10 {
            let f = FieldContext::new(n).unwrap();
            assert_eq!(f.element_order(f.generator()).unwrap(), f.order());
        }
    }
}
