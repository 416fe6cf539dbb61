//! Binary cubic forms over Q: discriminant, the twisted GL2 action, the
//! Hessian and Jacobian covariants, index forms of cubic rings, and a bounded
//! search for unit values.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{domain, Result};
use crate::exactmath::{int, integer_roots, rat, rational_cbrt, Rational};
use crate::mordell::MordellPoint;

/// Binary form of arbitrary degree, coefficients of X^d, X^(d-1)Y, ..., Y^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        BinaryForm::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        BinaryForm::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Rational::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BinaryForm::new(vec![rat(1)]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn d_x(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::new(vec![rat(0)]);
        }
        BinaryForm::new(
            self.coeffs[..d]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat((d - i) as i64))
                .collect(),
        )
    }

    pub fn d_y(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::new(vec![rat(0)]);
        }
        BinaryForm::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat((i + 1) as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(x.clone(), d - i) * num_traits::pow(y.clone(), i))
            .sum()
    }

    /// f(p X + q Y, r X + s Y).
    pub fn substitute(&self, p: &Rational, q: &Rational, r: &Rational, s: &Rational) -> Self {
        let d = self.degree();
        let lx = BinaryForm::new(vec![p.clone(), q.clone()]);
        let ly = BinaryForm::new(vec![r.clone(), s.clone()]);
        let mut out = BinaryForm::new(vec![Rational::zero(); d + 1]);
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = lx.pow((d - i) as u32).mul(&ly.pow(i as u32)).scale(c);
            out = out.add(&term);
        }
        out
    }
}

/// aX^3 + bX^2Y + cXY^2 + dY^3 over Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryCubicForm {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl BinaryCubicForm {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm::new(rat(a), rat(b), rat(c), rat(d))
    }

    /// X^2 Y - (D/4) Y^3, the reducible form of discriminant D.
    pub fn reference(disc: &Rational) -> Self {
        BinaryCubicForm::new(rat(0), rat(1), rat(0), -disc / rat(4))
    }

    pub fn as_form(&self) -> BinaryForm {
        BinaryForm::new(vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()])
    }

    pub fn from_form(f: &BinaryForm) -> Self {
        assert_eq!(f.degree(), 3);
        let c = &f.coeffs;
        BinaryCubicForm::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.as_form().eval(x, y)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !disc_form(self).is_zero()
    }

    pub fn integer_coeffs(&self) -> Option<[BigInt; 4]> {
        let all = [&self.a, &self.b, &self.c, &self.d];
        if all.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(all.map(|c| c.to_integer()))
    }

    /// True if f(X, 1) has a rational root or the form vanishes at (1, 0).
    pub fn has_rational_linear_factor(&self) -> bool {
        if self.a.is_zero() {
            return true;
        }
        !crate::exactmath::rational_roots(&[
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        ])
        .is_empty()
    }
}

impl std::fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Binary quadratic form pX^2 + qXY + rY^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryQuadraticForm {
    pub p: Rational,
    pub q: Rational,
    pub r: Rational,
}

/// Matrix [[g11, g12], [g21, g22]] acting on row vectors (X, Y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GL2Matrix {
    pub g11: Rational,
    pub g12: Rational,
    pub g21: Rational,
    pub g22: Rational,
}

impl GL2Matrix {
    pub fn new(g11: Rational, g12: Rational, g21: Rational, g22: Rational) -> Self {
        GL2Matrix { g11, g12, g21, g22 }
    }

    pub fn identity() -> Self {
        GL2Matrix::new(rat(1), rat(0), rat(0), rat(1))
    }

    pub fn det(&self) -> Rational {
        &self.g11 * &self.g22 - &self.g12 * &self.g21
    }

    pub fn mul(&self, o: &GL2Matrix) -> GL2Matrix {
        GL2Matrix::new(
            &self.g11 * &o.g11 + &self.g12 * &o.g21,
            &self.g11 * &o.g12 + &self.g12 * &o.g22,
            &self.g21 * &o.g11 + &self.g22 * &o.g21,
            &self.g21 * &o.g12 + &self.g22 * &o.g22,
        )
    }
}

pub fn disc_form(f: &BinaryCubicForm) -> Rational {
    let (a, b, c, d) = (&f.a, &f.b, &f.c, &f.d);
    b * b * c * c + rat(18) * a * b * c * d
        - rat(4) * a * c * c * c
        - rat(4) * d * b * b * b
        - rat(27) * a * a * d * d
}

/// Twisted action: det(g)^-1 f((X, Y) g).
pub fn act(g: &GL2Matrix, f: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    let det = g.det();
    if det.is_zero() {
        return domain("singular matrix");
    }
    // (X, Y) g = (g11 X + g21 Y, g12 X + g22 Y)
    let sub = f.as_form().substitute(&g.g11, &g.g21, &g.g12, &g.g22);
    Ok(BinaryCubicForm::from_form(&sub.scale(&(rat(1) / det))))
}

/// Hessian h = (f_xx f_yy - f_xy^2) / 4 and g = f_x h_y - f_y h_x.
pub fn covariants(f: &BinaryCubicForm) -> (BinaryQuadraticForm, BinaryCubicForm) {
    let ff = f.as_form();
    let (fx, fy) = (ff.d_x(), ff.d_y());
    let hess = fx.d_x().mul(&fy.d_y()).sub(&fx.d_y().mul(&fx.d_y())).scale(&Rational::new(int(1), int(4)));
    let g = fx.mul(&hess.d_y()).sub(&fy.mul(&hess.d_x()));
    let h = BinaryQuadraticForm {
        p: hess.coeffs[0].clone(),
        q: hess.coeffs[1].clone(),
        r: hess.coeffs[2].clone(),
    };
    (h, BinaryCubicForm::from_form(&g))
}

/// The polynomial g^2 + 27 disc(f) f^2 + 4 h^3, which must vanish identically.
pub fn syzygy_residual(f: &BinaryCubicForm) -> BinaryForm {
    let (h, g) = covariants(f);
    let h = BinaryForm::new(vec![h.p, h.q, h.r]);
    let g = g.as_form();
    let ff = f.as_form();
    g.pow(2)
        .add(&ff.pow(2).scale(&(rat(27) * disc_form(f))))
        .add(&h.pow(3).scale(&rat(4)))
}

pub fn syzygy_holds(f: &BinaryCubicForm) -> bool {
    syzygy_residual(f).is_zero()
}

/// Structure constants of a normal basis {1, w2, w3}:
/// w2 w3 = n, w2^2 = m - b w2 + a w3, w3^2 = l - d w2 + c w3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicRingData {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub l: Rational,
    pub m: Rational,
    pub n: Rational,
}

/// Element of a cubic ring in coordinates over {1, w2, w3}.
pub type RingElement = [Rational; 3];

impl CubicRingData {
    /// The constants forced by associativity for given (a, b, c, d).
    pub fn from_form(f: &BinaryCubicForm) -> Self {
        CubicRingData {
            a: f.a.clone(),
            b: f.b.clone(),
            c: f.c.clone(),
            d: f.d.clone(),
            l: -&f.b * &f.d,
            m: -&f.a * &f.c,
            n: -&f.a * &f.d,
        }
    }

    /// Ring Z[theta] for theta a root of X^3 + aX^2 + bX + c, normalized via
    /// w2 = theta + a, w3 = theta^2 + b.
    pub fn from_monic(a: &Rational, b: &Rational, c: &Rational) -> Self {
        CubicRingData {
            a: rat(1),
            b: rat(-2) * a,
            c: a * a + b,
            d: c - a * b,
            l: rat(2) * a * c - rat(2) * a * a * b,
            m: -(a * a) - b,
            n: a * b - c,
        }
    }

    fn basis_product(&self, i: usize, j: usize) -> RingElement {
        let z = Rational::zero;
        match (i, j) {
            (0, k) | (k, 0) => {
                let mut e = [z(), z(), z()];
                e[k] = rat(1);
                e
            }
            (1, 1) => [self.m.clone(), -&self.b, self.a.clone()],
            (1, 2) | (2, 1) => [self.n.clone(), z(), z()],
            (2, 2) => [self.l.clone(), -&self.d, self.c.clone()],
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
        for i in 0..3 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y[j].is_zero() {
                    continue;
                }
                let coef = &x[i] * &y[j];
                for (o, p) in out.iter_mut().zip(self.basis_product(i, j)) {
                    *o += &coef * p;
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let unit = |k: usize| {
            let mut e = [Rational::zero(), Rational::zero(), Rational::zero()];
            e[k] = rat(1);
            e
        };
        for i in 1..3 {
            for j in 1..3 {
                for k in 1..3 {
                    let (ei, ej, ek) = (unit(i), unit(j), unit(k));
                    let left = self.mul(&self.mul(&ei, &ej), &ek);
                    let right = self.mul(&ei, &self.mul(&ej, &ek));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn index_form_from_ring(r: &CubicRingData) -> Result<BinaryCubicForm> {
    if !r.is_associative() {
        return domain("structure constants do not define an associative ring");
    }
    Ok(BinaryCubicForm::new(r.a.clone(), r.b.clone(), r.c.clone(), r.d.clone()))
}

/// Lexicographically smallest (x, y) with max(|x|, |y|) <= bound and
/// f(x, y) = +-1. Scans y and solves the cubic in x exactly.
pub fn represents_unit(f: &BinaryCubicForm, bound: u64) -> Result<Option<(BigInt, BigInt)>> {
    let Some([a, b, c, d]) = f.integer_coeffs() else {
        return domain("represents_unit needs integer coefficients");
    };
    if bound == 0 {
        return domain("bound must be positive");
    }
    let bound_i = BigInt::from(bound);
    let mut best: Option<(BigInt, BigInt)> = None;
    let mut y = -&bound_i;
    while y <= bound_i {
        let (y2, y3) = (&y * &y, &y * &y * &y);
        for target in [int(1), int(-1)] {
            let coeffs = [a.clone(), &b * &y, &c * &y2, &d * &y3 - &target];
            let xs: Vec<BigInt> = if coeffs[..3].iter().all(Zero::is_zero) {
                // value independent of x
                if coeffs[3].is_zero() { vec![-&bound_i] } else { vec![] }
            } else {
                integer_roots(&coeffs)
            };
            for x in xs.into_iter().filter(|x| x.abs() <= bound_i) {
                let cand = (x, y.clone());
                if best.as_ref().map_or(true, |cur| cand < *cur) {
                    best = Some(cand);
                }
            }
        }
        y += 1;
    }
    Ok(best)
}

/// Checks that gamma * (X^3 - m Y^3) is the homogenized depressed cubic
/// X^3 - (x0^2/3) X + (27D - 2 x0^3)/27 attached to P = (x0, y0) on E^{-27D},
/// with D = -3n^2 and gamma built from x0, y0, n and m.
pub fn verify_gamma_equivalence(point: &MordellPoint, n: &BigInt, m: &BigInt) -> Result<bool> {
    let Some((x0, y0)) = point.coords() else {
        return domain("point at infinity");
    };
    if x0.is_zero() {
        return domain("x0 = 0 is a kernel point; no gamma in this parametrization");
    }
    if m.is_zero() {
        return domain("m must be nonzero");
    }
    let n = Rational::from_integer(n.clone());
    let m = Rational::from_integer(m.clone());
    let disc = rat(-3) * &n * &n;
    let nine_n = rat(9) * &n;
    let target = BinaryCubicForm::new(
        rat(1),
        rat(0),
        -(x0 * x0) / rat(3),
        (rat(27) * &disc - rat(2) * x0 * x0 * x0) / rat(27),
    );
    let source = BinaryCubicForm::new(rat(1), rat(0), rat(0), -m.clone());
    if (y0 + &nine_n).is_zero() || (y0 - &nine_n).is_zero() {
        return Ok(false);
    }
    let r = (y0 - &nine_n) / (y0 + &nine_n);
    let base = rat(2) * x0 * x0 * x0 - rat(27) * &disc;
    let cross = rat(9) * y0 * &n;
    for ratio in [r.clone(), rat(1) / &r] {
        let Some(u) = rational_cbrt(&(&ratio / &m)) else { continue };
        for sign in [rat(1), rat(-1)] {
            let g11 = &sign * x0 * &u / rat(3);
            if g11.is_zero() {
                continue;
            }
            for branch in [rat(1), rat(-1)] {
                let g12 = x0 * x0 / (rat(9) * &m * &g11);
                let g21 = (&base + &branch * &cross) * &g11 / (rat(6) * x0 * x0);
                let g22 = (&base - &branch * &cross) / (rat(54) * &m * &g11);
                let gamma = GL2Matrix::new(g11.clone(), g12, g21, g22);
                if gamma.det().is_zero() {
                    continue;
                }
                if act(&gamma, &source)? == target {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
