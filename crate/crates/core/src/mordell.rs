//! Mordell curves E^k : Y^2 = 4X^3 + k with exact rational points, the group
//! law, the 3-isogeny phi_D : E^D -> E^{-27D} and its dual, torsion
//! classification and a naive point search.
//!
//! All arithmetic happens in the `4X3` model. The `X3Q` model
//! (y^2 = x^3 + k/4, y = Y/2) exists for ingesting generators printed in that
//! convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exactmath::{rat, rational_cbrt, rational_nth_root, rational_roots, rational_sqrt, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Y^2 = 4X^3 + k
    Quartic,
    /// y^2 = x^3 + k/4
    Halved,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::Quartic => "4X3",
            Model::Halved => "X3Q",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "4X3" => Ok(Model::Quartic),
            "X3Q" => Ok(Model::Halved),
            other => Err(Error::Parse(format!("unknown model tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MordellCurve {
    k: Rational,
    model: Model,
}

impl MordellCurve {
    pub fn new(k: Rational, model: Model) -> Result<Self> {
        if k.is_zero() {
            return domain("Mordell curve needs k != 0");
        }
        Ok(MordellCurve { k, model })
    }

    /// E^k in the 4X3 model.
    pub fn quartic(k: Rational) -> Result<Self> {
        MordellCurve::new(k, Model::Quartic)
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Right-hand side of the equation in the given model.
    fn rhs(&self, x: &Rational, model: Model) -> Rational {
        let x3 = x * x * x;
        match model {
            Model::Quartic => rat(4) * x3 + &self.k,
            Model::Halved => x3 + &self.k / rat(4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MordellPoint {
    Infinity,
    Affine { x: Rational, y: Rational, model: Model },
}

impl MordellPoint {
    pub fn affine(x: Rational, y: Rational, model: Model) -> Self {
        MordellPoint::Affine { x, y, model }
    }

    pub fn quartic(x: Rational, y: Rational) -> Self {
        MordellPoint::affine(x, y, Model::Quartic)
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        MordellPoint::quartic(rat(x), rat(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, MordellPoint::Infinity)
    }

    pub fn coords(&self) -> Option<(&Rational, &Rational)> {
        match self {
            MordellPoint::Infinity => None,
            MordellPoint::Affine { x, y, .. } => Some((x, y)),
        }
    }

    pub fn model(&self) -> Option<Model> {
        match self {
            MordellPoint::Infinity => None,
            MordellPoint::Affine { model, .. } => Some(*model),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            MordellPoint::Infinity => MordellPoint::Infinity,
            MordellPoint::Affine { x, y, model } => MordellPoint::affine(x.clone(), -y, *model),
        }
    }

    pub fn to_model(&self, target: Model) -> Self {
        match self {
            MordellPoint::Affine { model, .. } if *model != target => convert_model(self),
            _ => self.clone(),
        }
    }

    pub fn to_quartic(&self) -> Self {
        self.to_model(Model::Quartic)
    }
}

impl fmt::Display for MordellPoint {
    /// "x,y" with each coordinate as num/den, or "infinity".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MordellPoint::Infinity => write!(f, "infinity"),
            MordellPoint::Affine { x, y, .. } => write!(f, "{x},{y}"),
        }
    }
}

pub fn on_curve(c: &MordellCurve, p: &MordellPoint) -> bool {
    match p {
        MordellPoint::Infinity => true,
        MordellPoint::Affine { x, y, model } => y * y == c.rhs(x, *model),
    }
}

fn require_on_curve(c: &MordellCurve, p: &MordellPoint) -> Result<()> {
    if on_curve(c, p) {
        Ok(())
    } else {
        Err(Error::OffCurve(format!("{p} on E^{}", c.k)))
    }
}

/// (x, y) in X3Q <-> (x, 2y) in 4X3.
pub fn convert_model(p: &MordellPoint) -> MordellPoint {
    match p {
        MordellPoint::Infinity => MordellPoint::Infinity,
        MordellPoint::Affine { x, y, model: Model::Halved } => {
            MordellPoint::affine(x.clone(), rat(2) * y, Model::Quartic)
        }
        MordellPoint::Affine { x, y, model: Model::Quartic } => {
            MordellPoint::affine(x.clone(), y / rat(2), Model::Halved)
        }
    }
}

// Chord-tangent law on Y^2 = 4X^3 + k; inputs in the 4X3 model.
fn add_quartic(p: &MordellPoint, q: &MordellPoint) -> MordellPoint {
    let (Some((x1, y1)), Some((x2, y2))) = (p.coords(), q.coords()) else {
        return if p.is_infinity() { q.clone() } else { p.clone() };
    };
    let slope = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return MordellPoint::Infinity;
        }
        rat(6) * x1 * x1 / y1
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &slope * &slope / rat(4) - x1 - x2;
    let y3 = -(y1 + &slope * (&x3 - x1));
    MordellPoint::quartic(x3, y3)
}

pub fn add(c: &MordellCurve, p: &MordellPoint, q: &MordellPoint) -> Result<MordellPoint> {
    require_on_curve(c, p)?;
    require_on_curve(c, q)?;
    Ok(add_quartic(&p.to_quartic(), &q.to_quartic()).to_model(c.model))
}

/// Non-adjacent form, least significant digit first.
fn naf(t: &BigInt) -> Vec<i8> {
    let mut t = t.clone();
    let mut digits = Vec::new();
    let four = BigInt::from(4);
    while !t.is_zero() {
        if t.is_odd() {
            let d = if t.mod_floor(&four) == BigInt::one() { 1 } else { -1 };
            t -= d;
            digits.push(d as i8);
        } else {
            digits.push(0);
        }
        t >>= 1;
    }
    digits
}

pub fn scalar_mul(c: &MordellCurve, t: &BigInt, p: &MordellPoint) -> Result<MordellPoint> {
    require_on_curve(c, p)?;
    let base = p.to_quartic();
    let minus = base.neg();
    let mut acc = MordellPoint::Infinity;
    for d in naf(t).into_iter().rev() {
        acc = add_quartic(&acc, &acc);
        match d {
            1 => acc = add_quartic(&acc, &base),
            -1 => acc = add_quartic(&acc, &minus),
            _ => {}
        }
    }
    Ok(acc.to_model(c.model))
}

pub fn scalar_mul_i64(c: &MordellCurve, t: i64, p: &MordellPoint) -> Result<MordellPoint> {
    scalar_mul(c, &BigInt::from(t), p)
}

fn quartic_curve(k: Rational) -> Result<MordellCurve> {
    MordellCurve::quartic(k)
}

/// phi_D : E^D -> E^{-27D}, (x, y) -> ((x^3 + D)/x^2, y (x^3 - 2D)/x^3).
pub fn phi(disc: &Rational, q: &MordellPoint) -> Result<MordellPoint> {
    let source = quartic_curve(disc.clone())?;
    require_on_curve(&source, q)?;
    let q = q.to_quartic();
    let Some((x, y)) = q.coords() else {
        return Ok(MordellPoint::Infinity);
    };
    if x.is_zero() {
        return Ok(MordellPoint::Infinity);
    }
    let x2 = x * x;
    let x3 = &x2 * x;
    Ok(MordellPoint::quartic(
        (&x3 + disc) / &x2,
        y * (&x3 - rat(2) * disc) / &x3,
    ))
}

/// Dual isogeny E^{-27D} -> E^D, (x, y) -> ((x^3 - 27D)/(9x^2), y (x^3 + 54D)/(27x^3)).
pub fn phi_hat(disc: &Rational, p: &MordellPoint) -> Result<MordellPoint> {
    let source = quartic_curve(rat(-27) * disc)?;
    require_on_curve(&source, p)?;
    let p = p.to_quartic();
    let Some((x, y)) = p.coords() else {
        return Ok(MordellPoint::Infinity);
    };
    if x.is_zero() {
        return Ok(MordellPoint::Infinity);
    }
    let x2 = x * x;
    let x3 = &x2 * x;
    Ok(MordellPoint::quartic(
        (&x3 - rat(27) * disc) / (rat(9) * &x2),
        y * (&x3 + rat(54) * disc) / (rat(27) * &x3),
    ))
}

// Rational points over the roots of `x_poly` whose image under `map` is `target`.
fn preimage_via_roots(
    source_k: &Rational,
    x_poly: [Rational; 4],
    target: &MordellPoint,
    map: impl Fn(&MordellPoint) -> Result<MordellPoint>,
) -> Result<Option<MordellPoint>> {
    for alpha in rational_roots(&x_poly) {
        let y2 = rat(4) * &alpha * &alpha * &alpha + source_k;
        let Some(y) = rational_sqrt(&y2) else { continue };
        for cand in [y.clone(), -y] {
            let q = MordellPoint::quartic(alpha.clone(), cand);
            if map(&q)? == *target {
                return Ok(Some(q));
            }
        }
    }
    Ok(None)
}

/// A rational Q on E^D with phi_D(Q) = P, if one exists. Doubles as the
/// membership test for phi_D(E^D(Q)).
pub fn preimage_by_phi(disc: &Rational, p: &MordellPoint) -> Result<Option<MordellPoint>> {
    require_on_curve(&quartic_curve(rat(-27) * disc)?, p)?;
    let p = p.to_quartic();
    let Some((x0, _)) = p.coords() else {
        return Ok(Some(MordellPoint::Infinity));
    };
    let poly = [rat(1), -x0.clone(), rat(0), disc.clone()];
    preimage_via_roots(disc, poly, &p, |q| phi(disc, q))
}

/// A rational Q on E^{-27D} with phi_hat_D(Q) = P, if one exists.
pub fn preimage_by_phi_hat(disc: &Rational, p: &MordellPoint) -> Result<Option<MordellPoint>> {
    require_on_curve(&quartic_curve(disc.clone())?, p)?;
    let p = p.to_quartic();
    let Some((x0, _)) = p.coords() else {
        return Ok(Some(MordellPoint::Infinity));
    };
    let poly = [rat(1), rat(-9) * x0, rat(0), rat(-27) * disc];
    let dual_k = rat(-27) * disc;
    preimage_via_roots(&dual_k, poly, &p, |q| phi_hat(disc, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionClass {
    Trivial,
    Z2,
    Z3,
    Z6,
}

impl TorsionClass {
    pub fn order(self) -> u32 {
        match self {
            TorsionClass::Trivial => 1,
            TorsionClass::Z2 => 2,
            TorsionClass::Z3 => 3,
            TorsionClass::Z6 => 6,
        }
    }
}

/// Torsion of E^k (4X3 model), i.e. of y^2 = x^3 + k/4, together with the
/// flag delta = 1 iff the torsion is Z/3.
///
/// Classification is by the sixth-power-free reduction kappa of k/4:
/// Z6 iff kappa = 1, Z3 iff kappa is a square or kappa = -432, Z2 iff kappa
/// is a cube, trivial otherwise. The predicates are invariant under sixth
/// powers, so they are tested on k/4 directly.
pub fn torsion_class(k: &Rational) -> Result<(TorsionClass, u8)> {
    if k.is_zero() {
        return domain("torsion of a singular curve");
    }
    let kappa = k / rat(4);
    let class = if rational_nth_root(&kappa, 6).is_some() {
        TorsionClass::Z6
    } else if rational_nth_root(&(&kappa / rat(-432)), 6).is_some() || rational_sqrt(&kappa).is_some() {
        TorsionClass::Z3
    } else if rational_cbrt(&kappa).is_some() {
        TorsionClass::Z2
    } else {
        TorsionClass::Trivial
    };
    Ok((class, u8::from(class == TorsionClass::Z3)))
}

/// Points with x = u/v^2, |u| <= bound, 1 <= v <= 8, one per +-y pair (y >= 0),
/// ascending in x, in the curve's model.
pub fn naive_search(c: &MordellCurve, bound: u64) -> Vec<MordellPoint> {
    const MAX_DENOM: i64 = 8;
    let bound = bound as i64;
    let mut found: BTreeMap<Rational, Rational> = BTreeMap::new();
    for v in 1..=MAX_DENOM {
        let v2 = BigInt::from(v * v);
        for u in -bound..=bound {
            let x = Rational::new(BigInt::from(u), v2.clone());
            if found.contains_key(&x) {
                continue;
            }
            let y2 = c.rhs(&x, c.model);
            if y2.is_negative() {
                continue;
            }
            if let Some(y) = rational_sqrt(&y2) {
                found.insert(x, y);
            }
        }
    }
    found
        .into_iter()
        .map(|(x, y)| MordellPoint::affine(x, y, c.model))
        .collect()
}
