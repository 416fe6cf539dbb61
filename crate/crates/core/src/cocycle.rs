//! From rational points on E^{-27D} (D = -3n^2) to pure cubic fields Q(cbrt m)
//! and to F3 exponent vectors over a fixed prime support.
//!
//! A point P = (x0, y0) gives the field generated by the cube root of
//! (y0 - 9n)/(y0 + 9n). Its exponent vector mod 3 over the support primes is
//! the coordinate vector of the class of P in E^{-27D}(Q)/phi_D(E^D(Q)),
//! defined up to a global sign.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exactmath::{
    cube_free_class, exact_nth_root, int_valuation, is_cube_free, is_pm_one_mod9, prime_divisors,
    rat, CubeFreeClass, Rational,
};
use crate::mordell::{preimage_by_phi, MordellPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DedekindType {
    /// m not congruent to +-1 mod 9; disc = -27 (hk)^2
    I,
    /// m congruent to +-1 mod 9; disc = -3 (hk)^2
    II,
}

impl fmt::Display for DedekindType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DedekindType::I => "I",
            DedekindType::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisContext {
    pub n: BigInt,
    pub disc: BigInt,
    pub branch: DedekindType,
    /// Type II: [3, primes of n]. Type I: primes of n / 3.
    pub prime_support: Vec<BigInt>,
}

impl AnalysisContext {
    pub fn from_n(n: &BigInt) -> Result<Self> {
        if !n.is_positive() {
            return domain("n must be positive");
        }
        let disc = -BigInt::from(3) * n * n;
        let three = BigInt::from(3);
        let (branch, prime_support) = if n.is_multiple_of(&three) {
            (DedekindType::I, prime_divisors(&(n / &three)))
        } else {
            let mut support = vec![three];
            support.extend(prime_divisors(n));
            (DedekindType::II, support)
        };
        Ok(AnalysisContext { n: n.clone(), disc, branch, prime_support })
    }

    /// Accepts D only of the form -3n^2 with n > 0.
    pub fn from_disc(disc: &BigInt) -> Result<Self> {
        let three = BigInt::from(3);
        if !disc.is_negative() || !disc.is_multiple_of(&three) {
            return domain(format!("{disc} is not of the form -3n^2"));
        }
        match exact_nth_root(&(-disc / &three), 2) {
            Some(n) if n.is_positive() => AnalysisContext::from_n(&n),
            _ => domain(format!("{disc} is not of the form -3n^2")),
        }
    }

    pub fn disc_rational(&self) -> Rational {
        Rational::from_integer(self.disc.clone())
    }

    /// The point (0, 9n) = (0, sqrt(-27D)) generating the kernel of phi_hat.
    pub fn dual_kernel_point(&self) -> MordellPoint {
        MordellPoint::quartic(rat(0), Rational::from_integer(BigInt::from(9) * &self.n))
    }
}

/// F3 exponent vector over a context's prime support, entries in {0, 1, 2}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaVector(pub Vec<u8>);

impl LambdaVector {
    pub fn zero(len: usize) -> Self {
        LambdaVector(vec![0; len])
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = i64>) -> Self {
        LambdaVector(exps.into_iter().map(|e| e.rem_euclid(3) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn neg(&self) -> Self {
        LambdaVector(self.0.iter().map(|&v| (3 - v) % 3).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        LambdaVector(self.0.iter().zip(&other.0).map(|(a, b)| (a + b) % 3).collect())
    }

    pub fn scale(&self, s: u8) -> Self {
        LambdaVector(self.0.iter().map(|&v| (v * (s % 3)) % 3).collect())
    }

    /// Representative of {v, -v} whose first nonzero entry is 1.
    pub fn canonical(&self) -> Self {
        match self.0.iter().find(|&&v| v != 0) {
            Some(2) => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// prod p_i^{lambda_i} with lambda lifted to {0, 1, 2}.
    pub fn value(&self, support: &[BigInt]) -> BigInt {
        assert_eq!(self.len(), support.len());
        self.0
            .iter()
            .zip(support)
            .fold(BigInt::one(), |acc, (&e, p)| acc * num_traits::pow(p.clone(), e as usize))
    }
}

impl fmt::Display for LambdaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    /// min(h k^2, h^2 k)
    pub m: BigInt,
    pub h: BigInt,
    pub k: BigInt,
    pub field_type: DedekindType,
    pub disc: BigInt,
    pub trivially_monogenic: bool,
}

impl PartialOrd for FieldDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldDescriptor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.m
            .cmp(&other.m)
            .then(self.trivially_monogenic.cmp(&other.trivially_monogenic))
    }
}

/// Result of mapping a point to a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointField {
    /// Cube class is 1: the point lies in phi_D(E^D(Q)).
    TrivialClass,
    Field(FieldDescriptor),
}

fn canonical_class(class: &CubeFreeClass) -> CubeFreeClass {
    let conj = class.conjugate();
    if conj.m < class.m {
        conj
    } else {
        class.clone()
    }
}

fn descriptor(class: &CubeFreeClass) -> FieldDescriptor {
    let c = canonical_class(class);
    let hk = &c.h * &c.k;
    let (field_type, factor) = if is_pm_one_mod9(&c.m) {
        (DedekindType::II, -3)
    } else {
        (DedekindType::I, -27)
    };
    FieldDescriptor {
        disc: BigInt::from(factor) * &hk * &hk,
        m: c.m,
        h: c.h,
        k: c.k,
        field_type,
        trivially_monogenic: false,
    }
}

pub fn classify_field(m: &BigInt) -> Result<FieldDescriptor> {
    if *m <= BigInt::one() {
        return domain(format!("{m} does not define a cubic field"));
    }
    if !is_cube_free(m) {
        return domain(format!("{m} is not cube-free"));
    }
    Ok(descriptor(&cube_free_class(&Rational::from_integer(m.clone()))?))
}

/// (y0 - 9n)/(y0 + 9n) for an affine P on E^{-27D}.
pub fn primitive_ratio(p: &MordellPoint, ctx: &AnalysisContext) -> Result<Rational> {
    let p = p.to_quartic();
    let Some((_, y0)) = p.coords() else {
        return domain("point at infinity has no primitive ratio");
    };
    let nine_n = Rational::from_integer(BigInt::from(9) * &ctx.n);
    let den = y0 + &nine_n;
    if den.is_zero() {
        return Err(Error::DualKernelPoint);
    }
    Ok((y0 - &nine_n) / den)
}

fn require_on_dual_curve(p: &MordellPoint, ctx: &AnalysisContext) -> Result<()> {
    let c = crate::mordell::MordellCurve::quartic(rat(-27) * ctx.disc_rational())?;
    if crate::mordell::on_curve(&c, p) {
        Ok(())
    } else {
        Err(Error::OffCurve(format!("{p} on E^{}", c.k())))
    }
}

// Rational whose cube class is the field of P: the primitive ratio, or D
// itself for the two points with x0 = 0.
fn class_source(p: &MordellPoint, ctx: &AnalysisContext) -> Result<Rational> {
    let p = p.to_quartic();
    let Some((x0, _)) = p.coords() else {
        return domain("point at infinity");
    };
    require_on_dual_curve(&p, ctx)?;
    if x0.is_zero() {
        return Ok(ctx.disc_rational());
    }
    primitive_ratio(&p, ctx)
}

/// Exponents of q at the support primes, after checking that what remains is
/// a rational cube.
fn support_exponents(q: &Rational, support: &[BigInt]) -> Result<Vec<i64>> {
    let mut num = q.numer().abs();
    let mut den = q.denom().clone();
    let mut exps = Vec::with_capacity(support.len());
    for p in support {
        let en = int_valuation(&num, p);
        let ed = int_valuation(&den, p);
        num /= num_traits::pow(p.clone(), en as usize);
        den /= num_traits::pow(p.clone(), ed as usize);
        exps.push(en as i64 - ed as i64);
    }
    if exact_nth_root(&num, 3).is_none() || exact_nth_root(&den, 3).is_none() {
        let rest = Rational::new(num, den);
        let class = cube_free_class(&rest)?;
        let prime = crate::exactmath::prime_divisors(&class.m)
            .into_iter()
            .next()
            .unwrap_or_else(BigInt::zero);
        return Err(Error::SupportViolation { prime });
    }
    Ok(exps)
}

pub fn field_of_point(p: &MordellPoint, ctx: &AnalysisContext) -> Result<PointField> {
    let q = class_source(p, ctx)?;
    let class = match support_exponents(&q, &ctx.prime_support) {
        Ok(exps) => CubeFreeClass::from_exponents(ctx.prime_support.iter().zip(exps)),
        Err(Error::SupportViolation { .. }) => cube_free_class(&q)?,
        Err(e) => return Err(e),
    };
    if class.is_trivial() {
        return Ok(PointField::TrivialClass);
    }
    let mut desc = descriptor(&class);
    desc.trivially_monogenic = trivially_monogenic(ctx)
        .map(|t| t.m == desc.m)
        .unwrap_or(false);
    Ok(PointField::Field(desc))
}

/// Like `field_of_point`, and additionally checks that a trivial class
/// coincides with P having a rational phi_D-preimage.
pub fn field_of_point_checked(p: &MordellPoint, ctx: &AnalysisContext) -> Result<PointField> {
    let field = field_of_point(p, ctx)?;
    let in_image = preimage_by_phi(&ctx.disc_rational(), p)?.is_some();
    if in_image != (field == PointField::TrivialClass) {
        return Err(Error::Internal(format!(
            "cube class and phi-preimage disagree at {p} (in image: {in_image})"
        )));
    }
    Ok(field)
}

pub fn lambda_vector(p: &MordellPoint, ctx: &AnalysisContext) -> Result<LambdaVector> {
    let q = class_source(p, ctx)?;
    let exps = support_exponents(&q, &ctx.prime_support)?;
    Ok(LambdaVector::from_exponents(exps).canonical())
}

/// Uncanonicalized vector, for homomorphism checks.
pub fn raw_lambda_vector(p: &MordellPoint, ctx: &AnalysisContext) -> Result<LambdaVector> {
    let q = class_source(p, ctx)?;
    Ok(LambdaVector::from_exponents(support_exponents(&q, &ctx.prime_support)?))
}

/// Q(cbrt(n/3)) when 3 | n and the cube-free reduction of n/3 is not
/// +-1 mod 9; its index form X^3 - (n/3) Y^3 represents 1.
pub fn trivially_monogenic(ctx: &AnalysisContext) -> Option<FieldDescriptor> {
    let three = BigInt::from(3);
    if !ctx.n.is_multiple_of(&three) {
        return None;
    }
    let class = cube_free_class(&Rational::from_integer(&ctx.n / &three)).ok()?;
    if class.is_trivial() || is_pm_one_mod9(&class.m) {
        return None;
    }
    let mut desc = descriptor(&class);
    desc.trivially_monogenic = true;
    Some(desc)
}
