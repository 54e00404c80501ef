//! Linear kernels of quadratic functions and the root-counting machinery
//! that classifies derivative families of trace monomials.
//!
//! The kernel of a quadratic q is the set of directions b where D_b q is
//! constant; it is the nullspace of the Gram matrix of the associated
//! bilinear form, so one parameter of a sweep costs O(n^2) table lookups
//! plus an O(n^3) elimination instead of a 2^n scan.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfun::{BoolFunError, TruthTable};
use crate::field::{FieldContext, FieldElement, FieldError};
use crate::linalg;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QuadraticError {
    #[error("function has degree {0} > 2")]
    DegreeTooHigh(u32),
    #[error("kernel dimension {k} and n = {n} have different parities")]
    ParityMismatch { n: u32, k: u32 },
    #[error("kernel size {0} is not a power of two")]
    KernelSizeNotPowerOfTwo(u64),
    #[error("{poly} has {count} roots, not a power of two")]
    RootCountNotPowerOfTwo { poly: &'static str, count: u64 },
    #[error("sweep requires {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    BoolFun(#[from] BoolFunError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Kernel of a quadratic function: dimension, an F_2-basis, and for each
/// basis vector the constant value of the derivative in that direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub dim: u32,
    pub basis: Vec<FieldElement>,
    /// Constant value of D_b q for the matching basis vector (0 <-> E0, 1 <-> E1).
    pub constant_bits: Vec<u8>,
    /// q(0).
    pub f0: u8,
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// Gram-matrix kernel of a quadratic given as a point evaluator.
/// Used directly by the 4^n sweeps, where building tables would dominate.
pub(crate) fn kernel_from_fn(n: u32, q: impl Fn(u32) -> bool) -> KernelReport {
    let q0 = q(0);
    let qe: Vec<bool> = (0..n).map(|i| q(1 << i)).collect();
    let mut rows = vec![0u32; n as usize];
    for i in 0..n as usize {
        for j in 0..i {
            let v = q0 ^ qe[i] ^ qe[j] ^ q(1 << i | 1 << j);
            rows[i] |= (v as u32) << j;
            rows[j] |= (v as u32) << i;
        }
    }
    let mut basis: Vec<FieldElement> = linalg::nullspace(&rows, n as usize)
        .into_iter()
        .map(FieldElement)
        .collect();
    basis.sort();
    let constant_bits = basis.iter().map(|&b| (q(b.0) ^ q0) as u8).collect();
    KernelReport {
        dim: basis.len() as u32,
        basis,
        constant_bits,
        f0: q0 as u8,
    }
}

/// Kernel of a quadratic truth table. Rejects functions of degree > 2.
pub fn linear_kernel(tt: &TruthTable) -> Result<KernelReport, QuadraticError> {
    let deg = tt.algebraic_degree();
    if deg > 2 {
        return Err(QuadraticError::DegreeTooHigh(deg));
    }
    let report = kernel_from_fn(tt.n(), |x| tt.get(x));
    debug_assert_eq!(report.dim % 2, tt.n() % 2, "kernel parity follows n");
    Ok(report)
}

/// Direct-enumeration oracle: counts directions with constant derivative by
/// scanning all of F_{2^n} per direction. O(2^{2n}); intended for n <= 12.
pub fn kernel_dim_brute(tt: &TruthTable) -> Result<u32, QuadraticError> {
    let deg = tt.algebraic_degree();
    if deg > 2 {
        return Err(QuadraticError::DegreeTooHigh(deg));
    }
    let size = tt.len() as u32;
    let count = (0..size)
        .filter(|&b| {
            let v = tt.get(0) ^ tt.get(b);
            (0..size).all(|x| (tt.get(x) ^ tt.get(x ^ b)) == v)
        })
        .count() as u64;
    if !count.is_power_of_two() {
        return Err(QuadraticError::KernelSizeNotPowerOfTwo(count));
    }
    Ok(count.trailing_zeros())
}

/// Walsh-value multiset of any quadratic with kernel dimension k and
/// constant term f0, as (value, multiplicity) pairs ascending by value.
pub fn spectrum_from_dim(n: u32, k: u32, f0: u8) -> Result<Vec<(i32, u64)>, QuadraticError> {
    if k > n || (n + k) % 2 != 0 {
        return Err(QuadraticError::ParityMismatch { n, k });
    }
    let peak = 1i32 << ((n + k) / 2);
    let zero_count = (1u64 << n) - (1u64 << (n - k));
    let (plus, minus) = if k == n {
        // Constant or affine: a single +/-2^n peak picked by f0.
        if f0 == 0 { (1u64, 0u64) } else { (0, 1) }
    } else {
        let base = 1u64 << (n - k - 1);
        let dev = 1u64 << ((n - k - 2) / 2);
        if f0 == 0 {
            (base + dev, base - dev)
        } else {
            (base - dev, base + dev)
        }
    };
    let mut out = Vec::new();
    if minus > 0 {
        out.push((-peak, minus));
    }
    if zero_count > 0 {
        out.push((0, zero_count));
    }
    if plus > 0 {
        out.push((peak, plus));
    }
    Ok(out)
}

/// Nonlinearity of any quadratic with kernel dimension k: 2^{n-1} - 2^{(n+k)/2-1}.
pub fn nl_from_dim(n: u32, k: u32) -> Result<u64, QuadraticError> {
    if k > n || (n + k) % 2 != 0 {
        return Err(QuadraticError::ParityMismatch { n, k });
    }
    Ok((1u64 << (n - 1)) - (1u64 << ((n + k) / 2 - 1)))
}

/// What a histogram was swept over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepDescriptor {
    pub family: String,
    pub n: u32,
    pub d: u64,
    /// Fixed first direction for second-derivative sweeps, hex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_a: Option<String>,
    pub parameter: String,
}

/// Kernel-dimension histogram of a derivative sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimHistogram {
    pub sweep: SweepDescriptor,
    pub counts: BTreeMap<u32, u64>,
    /// Parameters whose derivative collapses to the zero function.
    pub degenerate: u64,
}

impl DimHistogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.degenerate
    }

    pub fn count_dim_at_most(&self, k: u32) -> u64 {
        self.counts
            .iter()
            .filter(|&(&dim, _)| dim <= k)
            .map(|(_, &c)| c)
            .sum()
    }
}

fn merge_counts(mut a: BTreeMap<u32, u64>, b: BTreeMap<u32, u64>) -> BTreeMap<u32, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Kernel dimensions of D_a f over all a in F_{2^n}^*, for f = tr(x^d) of
/// degree 3 (so every derivative is quadratic).
pub fn kernel_dim_sweep_first(
    ctx: &Arc<FieldContext>,
    d: u64,
) -> Result<DimHistogram, QuadraticError> {
    if (d as u32).count_ones() != 3 {
        return Err(QuadraticError::InvalidParameter(
            "a cubic exponent (binary weight 3)",
        ));
    }
    let f = TruthTable::trace_monomial(ctx.clone(), FieldElement::ONE, d);
    let n = ctx.n();
    let counts = (1..ctx.size())
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u32, u64>, a| {
            let rep = kernel_from_fn(n, |x| f.get(x) ^ f.get(x ^ a));
            *acc.entry(rep.dim).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, merge_counts);
    Ok(DimHistogram {
        sweep: SweepDescriptor {
            family: format!("x{d}"),
            n,
            d,
            fixed_a: None,
            parameter: "a in F*".into(),
        },
        counts,
        degenerate: 0,
    })
}

/// Kernel dimensions of D_{ab} D_a f over all b in F_{2^n}, for fixed a and
/// f = tr(x^d) of degree 4. The pairs b in {0,1} collapse the derivative to
/// zero and are tallied as degenerate.
pub fn kernel_dim_sweep_second(
    ctx: &Arc<FieldContext>,
    d: u64,
    a: FieldElement,
) -> Result<DimHistogram, QuadraticError> {
    if (d as u32).count_ones() != 4 {
        return Err(QuadraticError::InvalidParameter(
            "a quartic exponent (binary weight 4)",
        ));
    }
    if a.is_zero() || a.0 >= ctx.size() {
        return Err(QuadraticError::InvalidParameter("a nonzero direction a"));
    }
    let f = TruthTable::trace_monomial(ctx.clone(), FieldElement::ONE, d);
    let n = ctx.n();
    let counts = (2..ctx.size())
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u32, u64>, b| {
            let ab = ctx.mul(a, FieldElement(b)).0;
            let rep = kernel_from_fn(n, |x| {
                f.get(x) ^ f.get(x ^ a.0) ^ f.get(x ^ ab) ^ f.get(x ^ a.0 ^ ab)
            });
            *acc.entry(rep.dim).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, merge_counts);
    Ok(DimHistogram {
        sweep: SweepDescriptor {
            family: format!("x{d}"),
            n,
            d,
            fixed_a: Some(a.to_hex()),
            parameter: "b in F minus {0,1}".into(),
        },
        counts,
        degenerate: 2,
    })
}

/// Class of the swept direction a for f = tr(x^{2^r+3}), n = 2r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DirectionClass {
    /// a in F_{2^r}^* (odd r, where the subfield is not split further).
    Subfield,
    /// a a nonzero cube of the subfield F_{2^r} (even r).
    SubfieldCube,
    /// a in F_{2^r}^* but not a cube (even r).
    SubfieldNonCube,
    /// a outside the subfield.
    Outside,
}

impl DirectionClass {
    pub fn label(self) -> &'static str {
        match self {
            DirectionClass::Subfield => "subfield",
            DirectionClass::SubfieldCube => "subfield-cube",
            DirectionClass::SubfieldNonCube => "subfield-noncube",
            DirectionClass::Outside => "outside",
        }
    }
}

/// Kernel-dimension histogram keyed by (class, dim) for f = tr(x^{2^r+3}),
/// n = 2r, swept over a in F_{2^n}^*.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassedDimHistogram {
    pub sweep: SweepDescriptor,
    pub classes: BTreeMap<DirectionClass, BTreeMap<u32, u64>>,
}

impl ClassedDimHistogram {
    pub fn total(&self) -> u64 {
        self.classes.values().flat_map(|m| m.values()).sum()
    }

    pub fn count(&self, class: DirectionClass, dim: u32) -> u64 {
        self.classes
            .get(&class)
            .and_then(|m| m.get(&dim))
            .copied()
            .unwrap_or(0)
    }
}

pub fn dim_sweep_x2r3(ctx: &Arc<FieldContext>) -> Result<ClassedDimHistogram, QuadraticError> {
    let n = ctx.n();
    if n % 2 != 0 {
        return Err(QuadraticError::InvalidParameter("even n = 2r"));
    }
    let r = n / 2;
    let d = (1u64 << r) + 3;
    let f = TruthTable::trace_monomial(ctx.clone(), FieldElement::ONE, d);
    let subfield_order = (1u32 << r) - 1;
    let classify = |a: FieldElement| -> Result<DirectionClass, QuadraticError> {
        if !ctx.in_subfield(a, r)? {
            return Ok(DirectionClass::Outside);
        }
        if r % 2 == 1 {
            return Ok(DirectionClass::Subfield);
        }
        // Even r: cube subgroup of the subfield has index 3.
        let t = ctx.pow(a, (subfield_order / 3) as i64)?;
        Ok(if t == FieldElement::ONE {
            DirectionClass::SubfieldCube
        } else {
            DirectionClass::SubfieldNonCube
        })
    };
    let mut classes: BTreeMap<DirectionClass, BTreeMap<u32, u64>> = BTreeMap::new();
    let per_a: Vec<(DirectionClass, u32)> = (1..ctx.size())
        .into_par_iter()
        .map(|a| {
            let class = classify(FieldElement(a))?;
            let rep = kernel_from_fn(n, |x| f.get(x) ^ f.get(x ^ a));
            Ok((class, rep.dim))
        })
        .collect::<Result<_, QuadraticError>>()?;
    for (class, dim) in per_a {
        *classes.entry(class).or_default().entry(dim).or_insert(0) += 1;
    }
    Ok(ClassedDimHistogram {
        sweep: SweepDescriptor {
            family: "x2r3".into(),
            n,
            d,
            fixed_a: None,
            parameter: "a in F*".into(),
        },
        classes,
    })
}

/// Root counts of the linearized polynomials attached to the second
/// derivatives of tr(x^15).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PqrCounts {
    pub n_p: u64,
    pub n_q: u64,
    pub n_q1: u64,
    pub n_r: u64,
    pub n_r1: u64,
}

/// Counts roots of P, Q, Q+1, R, R+1 by full evaluation over F_{2^n}, where
///   R(x) = a^30 B^6 u^4 + a^15 B^5 u,   u = (x^2+x)^2 + (x^2+x) B,
///   Q(x) = B^{-4} R (R + 1),
///   P(x) = Q (Q + 1),
/// with B = b^2 + b. The roots of P are exactly the kernel of D_{ab} D_a f.
pub fn pqr_root_counts(
    ctx: &Arc<FieldContext>,
    a: FieldElement,
    b: FieldElement,
) -> Result<PqrCounts, QuadraticError> {
    if a.is_zero() || a.0 >= ctx.size() {
        return Err(QuadraticError::InvalidParameter("a nonzero direction a"));
    }
    if b.0 <= 1 || b.0 >= ctx.size() {
        return Err(QuadraticError::InvalidParameter("b outside {0,1}"));
    }
    let one = FieldElement::ONE;
    let big_b = ctx.add(ctx.square(b), b);
    let a15 = ctx.pow(a, 15)?;
    let a30 = ctx.square(a15);
    let b2 = ctx.square(big_b);
    let b4 = ctx.square(b2);
    let b5 = ctx.mul(b4, big_b);
    let b6 = ctx.mul(b4, b2);
    let c1 = ctx.mul(a30, b6);
    let c2 = ctx.mul(a15, b5);
    let binv4 = ctx.inv(b4)?;
    let (mut n_p, mut n_q, mut n_q1, mut n_r, mut n_r1) = (0u64, 0, 0, 0, 0);
    for x in ctx.elements() {
        let t = ctx.add(ctx.square(x), x);
        let u = ctx.add(ctx.square(t), ctx.mul(t, big_b));
        let u4 = ctx.square(ctx.square(u));
        let r_val = ctx.add(ctx.mul(c1, u4), ctx.mul(c2, u));
        let q_val = ctx.mul(binv4, ctx.mul(r_val, ctx.add(r_val, one)));
        let p_val = ctx.mul(q_val, ctx.add(q_val, one));
        n_r += r_val.is_zero() as u64;
        n_r1 += (r_val == one) as u64;
        n_q += q_val.is_zero() as u64;
        n_q1 += (q_val == one) as u64;
        n_p += p_val.is_zero() as u64;
    }
    for (poly, count) in [("P", n_p), ("Q", n_q), ("R", n_r)] {
        if !count.is_power_of_two() {
            return Err(QuadraticError::RootCountNotPowerOfTwo { poly, count });
        }
    }
    Ok(PqrCounts {
        n_p,
        n_q,
        n_q1,
        n_r,
        n_r1,
    })
}
