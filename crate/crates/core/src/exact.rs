//! Exact evaluation of square-root expressions over arbitrary-precision
//! rationals, with directed-rounding enclosures for the irrational cases.
//!
//! Values are carried exactly for as long as possible: plain rationals,
//! or elements a + b*sqrt(2) of the quadratic extension (half-integer
//! powers of two show up throughout the bound formulas). A square root
//! that cannot be taken exactly degrades the value to a certified
//! interval whose endpoints round outward on a dyadic grid. Since a
//! square root of an irrational number is irrational, any value that ever
//! degrades is provably not an integer, so ceiling/floor certification by
//! precision escalation terminates.

use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::{One, Signed, Zero};

pub type BigRational = Ratio<BigInt>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("radicand is negative")]
    NegativeRadicand,
    #[error("enclosure too wide to certify at the requested precision")]
    EnclosureTooWide,
    #[error("denominator must be positive")]
    ZeroDenominator,
}

/// Floor of the integer square root.
pub fn isqrt_floor(v: &BigUint) -> BigUint {
    v.sqrt()
}

pub fn rat_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact 2^e as a rational (negative exponents allowed).
pub fn pow2_rat(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn point(v: BigRational) -> Enclosure {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Enclosure {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    /// Outward-rounded square root. A provably negative interval is an
    /// error; a lower endpoint below zero from rounding noise clamps to 0.
    pub fn sqrt(&self, guard: u32) -> Result<Enclosure, ExactError> {
        if self.hi.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        let lo = if self.lo.is_negative() {
            BigRational::zero()
        } else {
            sqrt_lower(&self.lo, guard)
        };
        Ok(Enclosure {
            lo,
            hi: sqrt_upper(&self.hi, guard),
        })
    }

    pub fn ceil_if_certain(&self) -> Option<BigInt> {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.ceil().to_integer();
        (a == b).then_some(a)
    }

    pub fn floor_if_certain(&self) -> Option<BigInt> {
        let a = self.lo.floor().to_integer();
        let b = self.hi.floor().to_integer();
        (a == b).then_some(a)
    }
}

/// Rational lower bound on sqrt(v) within 2^-guard: isqrt(p*q*4^G) / (q*2^G).
fn sqrt_lower(v: &BigRational, guard: u32) -> BigRational {
    debug_assert!(!v.is_negative());
    let p = v.numer().magnitude();
    let q = v.denom().magnitude();
    let m = (p * q) << (2 * guard as usize);
    let s = isqrt_floor(&m);
    BigRational::new(BigInt::from(s), BigInt::from(q << guard as usize))
}

fn sqrt_upper(v: &BigRational, guard: u32) -> BigRational {
    debug_assert!(!v.is_negative());
    let p = v.numer().magnitude();
    let q = v.denom().magnitude();
    let m = (p * q) << (2 * guard as usize);
    let s = isqrt_floor(&m);
    let s = if &s * &s == m { s } else { s + BigUint::one() };
    BigRational::new(BigInt::from(s), BigInt::from(q << guard as usize))
}

/// Exact element a + b*sqrt(2) of Q(sqrt 2).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt {
    pub rational: BigRational,
    pub sqrt2: BigRational,
}

impl QuadExt {
    pub fn zero() -> QuadExt {
        QuadExt {
            rational: BigRational::zero(),
            sqrt2: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational) -> QuadExt {
        QuadExt {
            rational: r,
            sqrt2: BigRational::zero(),
        }
    }

    /// c * 2^{e2/2}: an exact power-of-two term given a doubled exponent.
    pub fn term(c: &BigRational, e2: i64) -> QuadExt {
        if e2 % 2 == 0 {
            QuadExt::from_rational(c * pow2_rat(e2 / 2))
        } else {
            QuadExt {
                rational: BigRational::zero(),
                sqrt2: c * pow2_rat(e2.div_euclid(2)),
            }
        }
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        QuadExt {
            rational: &self.rational + &o.rational,
            sqrt2: &self.sqrt2 + &o.sqrt2,
        }
    }

    pub fn scale(&self, c: &BigRational) -> QuadExt {
        QuadExt {
            rational: &self.rational * c,
            sqrt2: &self.sqrt2 * c,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    pub fn enclosure(&self, guard: u32) -> Enclosure {
        if self.is_rational() {
            return Enclosure::point(self.rational.clone());
        }
        let root2 = Enclosure::point(rat_u64(2)).sqrt(guard).expect("2 >= 0");
        root2
            .scale(&self.sqrt2)
            .add(&Enclosure::point(self.rational.clone()))
    }

    /// Sign, decidable exactly (a + b*sqrt2 compares against 0 via squaring).
    pub fn is_negative(&self) -> bool {
        let (a, b) = (&self.rational, &self.sqrt2);
        match (a.is_negative(), b.is_negative()) {
            (false, false) => false,
            (true, true) => !(a.is_zero() && b.is_zero()),
            // Signs differ: compare a^2 with 2 b^2.
            (false, true) => a * a < rat_u64(2) * b * b,
            (true, false) => a * a > rat_u64(2) * b * b,
        }
    }
}

/// Exact square root of a nonnegative rational, if it exists.
fn rational_sqrt_exact(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let p = v.numer().magnitude();
    let q = v.denom().magnitude();
    let sp = isqrt_floor(p);
    let sq = isqrt_floor(q);
    (&sp * &sp == *p && &sq * &sq == *q)
        .then(|| BigRational::new(BigInt::from(sp), BigInt::from(sq)))
}

/// A value tracked exactly in Q(sqrt 2) while possible, or as a certified
/// enclosure once a square root fails to denest.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(QuadExt),
    Approx(Enclosure),
}

impl Value {
    pub fn rational(r: BigRational) -> Value {
        Value::Exact(QuadExt::from_rational(r))
    }

    pub fn zero() -> Value {
        Value::rational(BigRational::zero())
    }

    /// Exact 2^{e2/2} for a doubled exponent e2.
    pub fn pow2_half(e2: i64) -> Value {
        Value::Exact(QuadExt::term(&BigRational::one(), e2))
    }

    /// 2^{num/2^log2den}. Exact when the reduced exponent has denominator 1
    /// or 2; otherwise an enclosure built from iterated square roots of 2.
    pub fn pow2_dyadic(mut num: i64, mut log2den: u32, guard: u32) -> Value {
        while log2den > 0 && num % 2 == 0 {
            num /= 2;
            log2den -= 1;
        }
        match log2den {
            0 => Value::rational(pow2_rat(num)),
            1 => Value::pow2_half(num),
            k => {
                let ipart = num.div_euclid(1 << k);
                let mut frac = num.rem_euclid(1 << k) as u64;
                let mut acc = Enclosure::point(pow2_rat(ipart));
                // 2^{frac/2^k} = product over set bits j of 2^{1/2^{k-j}}.
                let mut j = 0u32;
                while frac != 0 {
                    if frac & 1 == 1 {
                        let mut root = Enclosure::point(rat_u64(2));
                        for _ in 0..(k - j) {
                            root = root.sqrt(guard).expect("2^t >= 0");
                        }
                        acc = mul_enclosures(&acc, &root);
                    }
                    frac >>= 1;
                    j += 1;
                }
                Value::Approx(acc)
            }
        }
    }

    pub fn add(&self, o: &Value, guard: u32) -> Value {
        match (self, o) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a.add(b)),
            _ => Value::Approx(self.enclosure(guard).add(&o.enclosure(guard))),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Value {
        match self {
            Value::Exact(q) => Value::Exact(q.scale(c)),
            Value::Approx(e) => Value::Approx(e.scale(c)),
        }
    }

    pub fn sqrt(&self, guard: u32) -> Result<Value, ExactError> {
        match self {
            Value::Exact(q) if q.is_rational() => {
                if q.rational.is_negative() {
                    return Err(ExactError::NegativeRadicand);
                }
                if let Some(root) = rational_sqrt_exact(&q.rational) {
                    return Ok(Value::rational(root));
                }
                // sqrt(2 s^2) = s sqrt(2) stays exact.
                let half = &q.rational / rat_u64(2);
                if let Some(s) = rational_sqrt_exact(&half) {
                    return Ok(Value::Exact(QuadExt {
                        rational: BigRational::zero(),
                        sqrt2: s,
                    }));
                }
                Ok(Value::Approx(
                    Enclosure::point(q.rational.clone()).sqrt(guard)?,
                ))
            }
            Value::Exact(q) => {
                if q.is_negative() {
                    return Err(ExactError::NegativeRadicand);
                }
                Ok(Value::Approx(q.enclosure(guard).sqrt(guard)?))
            }
            Value::Approx(e) => Ok(Value::Approx(e.sqrt(guard)?)),
        }
    }

    pub fn enclosure(&self, guard: u32) -> Enclosure {
        match self {
            Value::Exact(q) => q.enclosure(guard),
            Value::Approx(e) => e.clone(),
        }
    }

    pub fn exact_quad(&self) -> Option<&QuadExt> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Approx(_) => None,
        }
    }

    fn round_if_certain(&self, guard: u32, ceil: bool) -> Option<BigInt> {
        match self {
            Value::Exact(q) if q.is_rational() => Some(if ceil {
                q.rational.ceil().to_integer()
            } else {
                q.rational.floor().to_integer()
            }),
            v => {
                let e = v.enclosure(guard);
                if ceil {
                    e.ceil_if_certain()
                } else {
                    e.floor_if_certain()
                }
            }
        }
    }
}

fn mul_enclosures(a: &Enclosure, b: &Enclosure) -> Enclosure {
    // Both factors nonnegative in every use here.
    debug_assert!(!a.lo.is_negative() && !b.lo.is_negative());
    Enclosure {
        lo: &a.lo * &b.lo,
        hi: &a.hi * &b.hi,
    }
}

const GUARD_LADDER: [u32; 6] = [96, 192, 384, 768, 1536, 3072];

/// Certified ceiling of an expression, re-evaluated with escalating
/// precision until the enclosure's endpoints agree.
pub fn certify_ceil(
    eval: impl FnMut(u32) -> Result<Value, ExactError>,
) -> Result<BigInt, ExactError> {
    certify(eval, true)
}

/// Certified floor; see `certify_ceil`.
pub fn certify_floor(
    eval: impl FnMut(u32) -> Result<Value, ExactError>,
) -> Result<BigInt, ExactError> {
    certify(eval, false)
}

fn certify(
    mut eval: impl FnMut(u32) -> Result<Value, ExactError>,
    ceil: bool,
) -> Result<BigInt, ExactError> {
    for guard in GUARD_LADDER {
        let v = eval(guard)?;
        if let Some(r) = v.round_if_certain(guard, ceil) {
            return Ok(r);
        }
    }
    Err(ExactError::EnclosureTooWide)
}

/// Certified floor of sqrt(p/q) together with a reusable enclosure. The
/// perfect-square case is detected exactly; otherwise the root is
/// irrational and the requested guard either certifies or errors so the
/// caller can retry wider.
pub fn certified_sqrt_floor(
    p: &BigUint,
    q: &BigUint,
    guard: u32,
) -> Result<(BigInt, Enclosure), ExactError> {
    if q.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    let v = BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()));
    if let Some(root) = rational_sqrt_exact(&v) {
        let floor = root.floor().to_integer();
        return Ok((floor, Enclosure::point(root)));
    }
    let e = Enclosure::point(v).sqrt(guard)?;
    match e.floor_if_certain() {
        Some(f) => Ok((f, e)),
        None => Err(ExactError::EnclosureTooWide),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn integer_square_roots() {
        assert_eq!(isqrt_floor(&big(4)), big(2));
        assert_eq!(isqrt_floor(&big(7232)), big(85)); // 85^2 = 7225 <= 7232 < 86^2
        assert_eq!(isqrt_floor(&big(0)), big(0));
    }

    #[test]
    fn certified_sqrt_floor_examples() {
        let (f, _) = certified_sqrt_floor(&big(4), &big(1), 64).unwrap();
        assert_eq!(f, BigInt::from(2));
        let (f, e) = certified_sqrt_floor(&big(7232), &big(1), 64).unwrap();
        assert_eq!(f, BigInt::from(85));
        assert!(e.lo <= e.hi);
        let (f, e) = certified_sqrt_floor(&big(2), &big(1), 64).unwrap();
        assert_eq!(f, BigInt::from(1));
        // Enclosure of sqrt(2) is tight to ~2^-64.
        let width = &e.hi - &e.lo;
        assert!(width < rat_frac(1, 1 << 60));
        assert!(certified_sqrt_floor(&big(2), &big(0), 64).is_err());
    }

    #[test]
    fn exact_value_sqrt_paths() {
        let v = Value::rational(rat_frac(9, 4));
        let r = v.sqrt(64).unwrap();
        assert_eq!(r.exact_quad().unwrap().rational, rat_frac(3, 2));
        // sqrt(8) = 2 sqrt(2) exactly.
        let r = Value::rational(rat_u64(8)).sqrt(64).unwrap();
        let q = r.exact_quad().unwrap();
        assert!(q.rational.is_zero());
        assert_eq!(q.sqrt2, rat_u64(2));
        // sqrt(3) degrades to an enclosure containing the truth.
        let r = Value::rational(rat_u64(3)).sqrt(96).unwrap();
        let e = r.enclosure(96);
        assert!(e.lo < rat_frac(17321, 10000) && rat_frac(17320, 10000) < e.hi);
        assert!(Value::rational(rat_i64(-1)).sqrt(64).is_err());
    }

    #[test]
    fn half_and_dyadic_powers() {
        assert_eq!(
            Value::pow2_half(6).exact_quad().unwrap().rational,
            rat_u64(8)
        );
        let v = Value::pow2_half(5); // 2^{5/2} = 4 sqrt 2
        let q = v.exact_quad().unwrap();
        assert_eq!(q.sqrt2, rat_u64(4));
        // 2^{5/4} ~ 2.3784
        let v = Value::pow2_dyadic(5, 2, 128);
        let e = v.enclosure(128);
        assert!(e.lo < rat_frac(23785, 10000) && rat_frac(23784, 10000) < e.hi);
        // Reduction to exact cases.
        assert_eq!(
            Value::pow2_dyadic(8, 2, 64).exact_quad().unwrap().rational,
            rat_u64(4)
        );
        assert_eq!(
            Value::pow2_dyadic(-2, 0, 64).exact_quad().unwrap().rational,
            rat_frac(1, 4)
        );
    }

    #[test]
    fn quadext_sign() {
        // 3 - 2 sqrt2 > 0, 1 - sqrt2 < 0.
        let pos = QuadExt {
            rational: rat_u64(3),
            sqrt2: rat_i64(-2),
        };
        assert!(!pos.is_negative());
        let neg = QuadExt {
            rational: rat_u64(1),
            sqrt2: rat_i64(-1),
        };
        assert!(neg.is_negative());
    }

    #[test]
    fn certification_drivers() {
        // ceil(16 - sqrt(100)/2) with exact detection: radicand perfect square.
        let c = certify_ceil(|g| {
            let root = Value::rational(rat_u64(400)).sqrt(g)?;
            Ok(Value::rational(rat_u64(16)).add(&root.scale(&rat_frac(-1, 2)), g))
        })
        .unwrap();
        assert_eq!(c, BigInt::from(6));
        // Irrational case: ceil(-sqrt(2)) = -1, floor = -2.
        let eval = |g: u32| Value::rational(rat_u64(2)).sqrt(g).map(|v| v.scale(&rat_i64(-1)));
        assert_eq!(certify_ceil(eval).unwrap(), BigInt::from(-1));
        assert_eq!(certify_floor(eval).unwrap(), BigInt::from(-2));
    }
}
