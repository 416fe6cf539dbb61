//! Arithmetic of pure cubic fields Q(theta), theta^3 = m: integral bases,
//! index forms, monogenity witnesses and a mod-p isomorphism sanity check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cocycle::{classify_field, DedekindType};
use crate::error::{domain, Error, Result};
use crate::exactmath::{integer_roots, primes_up_to, rat, Rational};
use crate::forms::{index_form_from_ring, represents_unit, BinaryCubicForm, CubicRingData};

/// An element a + b theta + c theta^2.
pub type FieldElement = [Rational; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralBasis {
    pub m: BigInt,
    pub h: BigInt,
    pub k: BigInt,
    pub field_type: DedekindType,
    /// 1, theta, and the third element, in (1, theta, theta^2) coordinates
    pub elements: [FieldElement; 3],
    pub denominator: BigInt,
    pub disc: BigInt,
}

fn mul(m: &Rational, x: &FieldElement, y: &FieldElement) -> FieldElement {
    let mut raw = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
    for i in 0..3 {
        for j in 0..3 {
            raw[i + j] += &x[i] * &y[j];
        }
    }
    // theta^3 = m, theta^4 = m theta
    [
        &raw[0] + m * &raw[3],
        &raw[1] + m * &raw[4],
        raw[2].clone(),
    ]
}

fn trace(x: &FieldElement) -> Rational {
    rat(3) * &x[0]
}

/// Matrix of multiplication by x on (1, theta, theta^2), columns = images.
fn mult_matrix(m: &Rational, x: &FieldElement) -> [[Rational; 3]; 3] {
    let z = Rational::zero;
    let basis = [[rat(1), z(), z()], [z(), rat(1), z()], [z(), z(), rat(1)]];
    let cols: Vec<FieldElement> = basis.iter().map(|e| mul(m, x, e)).collect();
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()))
}

fn det3(a: &[[Rational; 3]; 3]) -> Rational {
    &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1])
        - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
        + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
}

/// Characteristic polynomial t^3 + c2 t^2 + c1 t + c0 of x, as [c2, c1, c0].
pub fn char_poly(m: &BigInt, x: &FieldElement) -> [Rational; 3] {
    let a = mult_matrix(&Rational::from_integer(m.clone()), x);
    let tr = &a[0][0] + &a[1][1] + &a[2][2];
    let minors = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0] + &a[0][0] * &a[2][2]
        - &a[0][2] * &a[2][0]
        + &a[1][1] * &a[2][2]
        - &a[1][2] * &a[2][1];
    [-tr, minors, -det3(&a)]
}

pub fn is_algebraic_integer(m: &BigInt, x: &FieldElement) -> bool {
    char_poly(m, x).iter().all(|c| c.is_integer())
}

/// det(Tr(w_i w_j)) for a basis of Q(theta).
pub fn basis_discriminant(m: &BigInt, basis: &[FieldElement; 3]) -> Rational {
    let mr = Rational::from_integer(m.clone());
    let gram: [[Rational; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| trace(&mul(&mr, &basis[i], &basis[j]))));
    det3(&gram)
}

fn element(a: Rational, b: Rational, c: Rational) -> FieldElement {
    [a, b, c]
}

pub fn integral_basis(m: &BigInt) -> Result<IntegralBasis> {
    let desc = classify_field(m)?;
    // theta^3 = m with m = h k^2 as given, not the canonical representative
    let class = crate::exactmath::cube_free_class(&Rational::from_integer(m.clone()))?;
    let (h, k) = (class.h, class.k);
    let kr = Rational::from_integer(k.clone());
    let one = element(rat(1), rat(0), rat(0));
    let theta = element(rat(0), rat(1), rat(0));
    let (third, denominator) = match desc.field_type {
        DedekindType::I => (element(rat(0), rat(0), rat(1) / &kr), k.clone()),
        DedekindType::II => {
            let den = BigInt::from(3) * &k;
            let denr = Rational::from_integer(den.clone());
            let sign = if (m % 9u32) == BigInt::one() { 1 } else { -1 };
            let k2 = &k * &k;
            let classical = element(
                Rational::new(k2.mod_floor(&den), den.clone()),
                Rational::new((BigInt::from(sign) * &k2 * &h).mod_floor(&den), den.clone()),
                rat(1) / &denr,
            );
            // the classical choice u = k^2, v = +-h k^2 is tried before the search
            let mut found = is_algebraic_integer(m, &classical).then_some(classical);
            'search: for u in num_iter(&den) {
                if found.is_some() {
                    break;
                }
                for v in num_iter(&den) {
                    let nu = element(
                        Rational::from_integer(u.clone()) / &denr,
                        Rational::from_integer(v.clone()) / &denr,
                        rat(1) / &denr,
                    );
                    if is_algebraic_integer(m, &nu) {
                        found = Some(nu);
                        break 'search;
                    }
                }
            }
            let nu = found.ok_or_else(|| Error::Internal(format!("no integral nu for m = {m}")))?;
            (nu, den)
        }
    };
    let elements = [one, theta, third];
    let disc = basis_discriminant(m, &elements);
    let hk = &h * &k;
    let expected = match desc.field_type {
        DedekindType::I => BigInt::from(-27) * &hk * &hk,
        DedekindType::II => BigInt::from(-3) * &hk * &hk,
    };
    if disc != Rational::from_integer(expected.clone()) {
        return Err(Error::Internal(format!("basis discriminant {disc} for m = {m}, expected {expected}")));
    }
    Ok(IntegralBasis {
        m: m.clone(),
        h,
        k,
        field_type: desc.field_type,
        elements,
        denominator,
        disc: expected,
    })
}

fn num_iter(end: &BigInt) -> impl Iterator<Item = BigInt> {
    let end = end.clone();
    std::iter::successors(Some(BigInt::zero()), |x| Some(x + 1)).take_while(move |x| *x < end)
}

fn inverse3(a: &[[Rational; 3]; 3]) -> Option<[[Rational; 3]; 3]> {
    let d = det3(a);
    if d.is_zero() {
        return None;
    }
    let cof = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let minor = &a[r[0]][c[0]] * &a[r[1]][c[1]] - &a[r[0]][c[1]] * &a[r[1]][c[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // inverse = adjugate / det, adjugate = transpose of cofactors
    Some(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / &d)))
}

/// Coordinates of x in the basis, i.e. solve x = sum c_i w_i.
/// `inv` inverts the matrix whose columns are the basis elements.
fn coordinates(inv: &[[Rational; 3]; 3], x: &FieldElement) -> [Rational; 3] {
    std::array::from_fn(|i| (0..3).map(|j| &inv[i][j] * &x[j]).sum())
}

/// Structure constants of {1, w2, w3} after shifting to a normal basis
/// (w2 w3 in Z).
pub fn ring_data(basis: &IntegralBasis) -> Result<CubicRingData> {
    let mr = Rational::from_integer(basis.m.clone());
    let cols: [[Rational; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| basis.elements[j][i].clone()));
    let inv = inverse3(&cols).ok_or_else(|| Error::Internal("singular basis".into()))?;
    let [_, w2, w3] = &basis.elements;
    let coords = |x: &FieldElement| coordinates(&inv, x);
    let q = coords(&mul(&mr, w2, w3));
    // w2' = w2 - q3, w3' = w3 - q2 makes w2' w3' rational
    let shift = |w: &FieldElement, s: &Rational| element(&w[0] - s, w[1].clone(), w[2].clone());
    let w2s = shift(w2, &q[2]);
    let w3s = shift(w3, &q[1]);
    let normal = [basis.elements[0].clone(), w2s.clone(), w3s.clone()];
    let ncols: [[Rational; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| normal[j][i].clone()));
    let ninv = inverse3(&ncols).ok_or_else(|| Error::Internal("singular basis".into()))?;
    let nc = |x: &FieldElement| coordinates(&ninv, x);
    let p = nc(&mul(&mr, &w2s, &w2s));
    let qq = nc(&mul(&mr, &w2s, &w3s));
    let r = nc(&mul(&mr, &w3s, &w3s));
    if !qq[1].is_zero() || !qq[2].is_zero() {
        return Err(Error::Internal("normal-basis shift failed".into()));
    }
    Ok(CubicRingData {
        a: p[2].clone(),
        b: -&p[1],
        c: r[2].clone(),
        d: -&r[1],
        l: r[0].clone(),
        m: p[0].clone(),
        n: qq[0].clone(),
    })
}

/// Index form of the ring of integers of Q(cbrt m). For type I this is
/// k X^3 - h Y^3.
pub fn index_form_of_field(m: &BigInt) -> Result<BinaryCubicForm> {
    let basis = integral_basis(m)?;
    index_form_from_ring(&ring_data(&basis)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monogenity {
    Monogenic { witness: (BigInt, BigInt), value: i8 },
    Undetermined,
}

pub fn certify_monogenic(m: &BigInt, bound: u64) -> Result<Monogenity> {
    if bound == 0 {
        return domain("bound must be at least 1");
    }
    let form = index_form_of_field(m)?;
    Ok(match represents_unit(&form, bound)? {
        Some((x, y)) => {
            let v = form.eval(&Rational::from_integer(x.clone()), &Rational::from_integer(y.clone()));
            let value = if v.is_one() { 1 } else { -1 };
            Monogenity::Monogenic { witness: (x, y), value }
        }
        None => Monogenity::Undetermined,
    })
}

/// Discriminant of X^3 + a X^2 + b X + c.
pub fn cubic_discriminant(f: &[BigInt; 3]) -> BigInt {
    let [a, b, c] = f;
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

fn roots_mod_p(f: &[BigInt; 3], p: u32) -> usize {
    let pb = BigInt::from(p);
    let [a, b, c] = [&f[0], &f[1], &f[2]].map(|x| x.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0));
    let p64 = u64::from(p);
    (0..p64)
        .filter(|&x| {
            let v = ((x * x % p64 + a * x % p64 + b) % p64 * x % p64 + c) % p64;
            v == 0
        })
        .count()
}

/// Compares the splitting shapes of monic cubics X^3 + f0 X^2 + f1 X + f2
/// modulo good primes. `false` proves the fields differ; `true` is only
/// consistency.
pub fn splitting_consistent(f: &[BigInt; 3], g: &[BigInt; 3], prime_bound: u32) -> Result<bool> {
    for poly in [f, g] {
        let coeffs = [BigInt::one(), poly[0].clone(), poly[1].clone(), poly[2].clone()];
        if !integer_roots(&coeffs).is_empty() {
            return domain("polynomial has a rational root");
        }
        if cubic_discriminant(poly).is_zero() {
            return domain("polynomial has a repeated root");
        }
    }
    let (df, dg) = (cubic_discriminant(f), cubic_discriminant(g));
    for p in primes_up_to(prime_bound) {
        let pb = BigInt::from(p);
        if (&df % &pb).is_zero() || (&dg % &pb).is_zero() {
            continue;
        }
        if roots_mod_p(f, p) != roots_mod_p(g, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, is_cube_free, ratio};
    use crate::forms::disc_form;
    use num_traits::Signed;

    fn el(a: Rational, b: Rational, c: Rational) -> FieldElement {
        [a, b, c]
    }

    #[test]
    fn integral_basis_examples() {
        let b = integral_basis(&int(2)).unwrap();
        assert_eq!(b.elements[2], el(rat(0), rat(0), rat(1)));
        assert_eq!(b.disc, int(-108));

        let b = integral_basis(&int(10)).unwrap();
        assert_eq!(b.field_type, DedekindType::II);
        assert_eq!(b.elements[2], el(ratio(1, 3), ratio(1, 3), ratio(1, 3)));
        assert_eq!(b.disc, int(-300));

        let b = integral_basis(&int(30)).unwrap();
        assert_eq!(b.elements[2], el(rat(0), rat(0), rat(1)));
        assert_eq!(b.disc, int(-24300));

        assert!(integral_basis(&int(16)).is_err());

        // type II with a large square part
        let k = int(1_000_009);
        let m = int(10) * &k * &k;
        assert!(crate::exactmath::is_pm_one_mod9(&m));
        let b = integral_basis(&m).unwrap();
        assert_eq!(b.field_type, DedekindType::II);
        assert_eq!(b.disc, int(-3) * (int(10) * &k) * (int(10) * &k));
        assert!(integral_basis(&int(1)).is_err());
    }

    #[test]
    fn index_form_examples() {
        assert_eq!(index_form_of_field(&int(30)).unwrap(), BinaryCubicForm::from_ints(1, 0, 0, -30));
        assert_eq!(index_form_of_field(&int(60)).unwrap(), BinaryCubicForm::from_ints(2, 0, 0, -15));
        assert_eq!(index_form_of_field(&int(90)).unwrap(), BinaryCubicForm::from_ints(3, 0, 0, -10));
        let f = index_form_of_field(&int(10)).unwrap();
        assert_eq!(disc_form(&f), rat(-300));
        assert!(f.integer_coeffs().is_some());
    }

    #[test]
    fn certify_examples() {
        assert_eq!(
            certify_monogenic(&int(90), 3).unwrap(),
            Monogenity::Monogenic { witness: (int(-3), int(-2)), value: -1 }
        );
        // lexicographic minimum; (1, 1) is its negation
        assert_eq!(
            certify_monogenic(&int(150), 2).unwrap(),
            Monogenity::Monogenic { witness: (int(-1), int(-1)), value: 1 }
        );
        // Z[cbrt 7] has index 3 in the maximal order; record what the search finds
        let r = certify_monogenic(&int(7), 3).unwrap();
        if let Monogenity::Monogenic { witness: (x, y), value } = &r {
            let f = index_form_of_field(&int(7)).unwrap();
            assert_eq!(f.eval(&Rational::from_integer(x.clone()), &Rational::from_integer(y.clone())), rat(i64::from(*value)));
        }
        assert!(certify_monogenic(&int(7), 0).is_err());
    }

    #[test]
    fn splitting_examples() {
        let f = [int(9), int(0), int(-300)];
        let g = [int(0), int(0), int(-3)];
        assert!(splitting_consistent(&f, &g, 1000).unwrap());
        let two = [int(0), int(0), int(-2)];
        assert!(!splitting_consistent(&two, &g, 100).unwrap());
        assert!(splitting_consistent(&g, &g, 100).unwrap());
        assert!(splitting_consistent(&[int(0), int(0), int(-8)], &g, 100).is_err());
    }

    // the index map oracle: I(x, y) = det of (1, xi, xi^2) in basis coordinates
    fn index_by_map(basis: &IntegralBasis, x: i64, y: i64) -> Rational {
        let mr = Rational::from_integer(basis.m.clone());
        let [_, w2, w3] = &basis.elements;
        let xi: FieldElement = std::array::from_fn(|i| rat(x) * &w2[i] + rat(y) * &w3[i]);
        let xi2 = mul(&mr, &xi, &xi);
        let cols: [[Rational; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| basis.elements[j][i].clone()));
        let inv = inverse3(&cols).unwrap();
        let c1 = coordinates(&inv, &xi);
        let c2 = coordinates(&inv, &xi2);
        &c1[1] * &c2[2] - &c1[2] * &c2[1]
    }

    #[test]
    fn small_fields_satisfy_basis_and_form_invariants() {
        for m in 2..=1000i64 {
            let mi = int(m);
            if !is_cube_free(&mi) || crate::exactmath::exact_nth_root(&mi, 3).is_some() {
                continue;
            }
            let basis = integral_basis(&mi).unwrap();
            for e in &basis.elements {
                assert!(is_algebraic_integer(&mi, e), "m = {m}");
            }
            if m > 300 {
                continue;
            }
            let f = index_form_of_field(&mi).unwrap();
            assert_eq!(disc_form(&f), Rational::from_integer(basis.disc.clone()), "m = {m}");
            assert!(!f.has_rational_linear_factor(), "m = {m}");
            for (x, y) in [(1, 0), (0, 1), (2, -1), (3, 5)] {
                let v = f.eval(&rat(x), &rat(y));
                assert_eq!(v.abs(), index_by_map(&basis, x, y).abs(), "m = {m}");
            }
            if basis.field_type == DedekindType::I {
                let expected = BinaryCubicForm::new(
                    Rational::from_integer(basis.k.clone()),
                    rat(0),
                    rat(0),
                    -Rational::from_integer(basis.h.clone()),
                );
                assert_eq!(f, expected);
            }
        }
    }

    #[test]
    fn splitting_is_symmetric() {
        let polys = [
            [int(9), int(0), int(-300)],
            [int(0), int(0), int(-3)],
            [int(0), int(0), int(-2)],
            [int(1), int(-2), int(1)],
            [int(0), int(-3), int(1)],
        ];
        for f in &polys {
            for g in &polys {
                assert_eq!(
                    splitting_consistent(f, g, 200).unwrap(),
                    splitting_consistent(g, f, 200).unwrap()
                );
            }
        }
    }
}
