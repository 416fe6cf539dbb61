//! F3 linear algebra over lambda-vectors and the enumeration of
//! quasi-monogenic pure cubic fields of a fixed discriminant.
//!
//! Two independent routes produce the field set:
//! - the matrix route enumerates the row space of the generator matrix and
//!   filters vectors by the Dedekind-type conditions;
//! - the point route forms every combination sum a_i P_i (a_i in {0,1,2}) with
//!   the group law and maps each point to its field directly.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cocycle::{
    field_of_point, lambda_vector, trivially_monogenic, AnalysisContext, DedekindType,
    FieldDescriptor, LambdaVector, PointField,
};
use crate::error::{domain, Error, Result};
use crate::exactmath::{is_pm_one_mod9, rat};
use crate::mordell::{add, on_curve, preimage_by_phi, torsion_class, MordellCurve, MordellPoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F3Matrix {
    pub rows: Vec<LambdaVector>,
    pub cols: usize,
}

impl F3Matrix {
    pub fn new(rows: Vec<LambdaVector>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols || r.0.iter().any(|&v| v > 2)) {
            return domain("rows must be F3 vectors of the matrix width");
        }
        Ok(F3Matrix { rows, cols })
    }

    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        F3Matrix::new(rows.iter().map(|r| LambdaVector(r.to_vec())).collect(), cols)
            .expect("well-formed rows")
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        F3Matrix { rows: vec![LambdaVector::zero(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| LambdaVector((0..n).map(|j| u8::from(i == j)).collect()))
            .collect();
        F3Matrix { rows, cols: n }
    }
}

fn inv3(v: u8) -> u8 {
    // 1 * 1 = 1, 2 * 2 = 4 = 1
    v
}

/// Reduced row echelon form over F3 and its rank.
pub fn rref3(m: &F3Matrix) -> (F3Matrix, usize) {
    let mut rows: Vec<LambdaVector> = m.rows.clone();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r].0[col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = inv3(rows[pivot_row].0[col]);
        rows[pivot_row] = rows[pivot_row].scale(inv);
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let v = row.0[col];
            if r != pivot_row && v != 0 {
                *row = row.add(&pivot.scale(3 - v));
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    (F3Matrix { rows, cols: m.cols }, pivot_row)
}

/// Every vector in the span of `basis` (3^len of them).
pub fn span(basis: &[LambdaVector], cols: usize) -> Vec<LambdaVector> {
    let mut out = vec![LambdaVector::zero(cols)];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * 3);
        for v in &out {
            next.push(v.clone());
            next.push(v.add(b));
            next.push(v.add(&b.scale(2)));
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub disc: BigInt,
    /// Points on E^{-27D} in the 4X3 model; row 0 is the dual-kernel point.
    pub points: Vec<MordellPoint>,
    pub claimed_rank: Option<u32>,
    pub includes_dual_kernel: bool,
}

impl GeneratorSet {
    /// Validates the points and prepends (0, 9n) when -27D is a square, which
    /// is always the case for D = -3n^2.
    pub fn new(ctx: &AnalysisContext, points: Vec<MordellPoint>, claimed_rank: Option<u32>) -> Result<Self> {
        let curve = MordellCurve::quartic(rat(-27) * ctx.disc_rational())?;
        let kernel = ctx.dual_kernel_point();
        let mut out = vec![kernel.clone()];
        for p in points {
            let p = p.to_quartic();
            if p.is_infinity() {
                continue;
            }
            if !on_curve(&curve, &p) {
                return Err(Error::OffCurve(format!("{p} on E^{}", curve.k())));
            }
            if p == kernel || p == kernel.neg() {
                continue;
            }
            out.push(p);
        }
        Ok(GeneratorSet {
            disc: ctx.disc.clone(),
            points: out,
            claimed_rank,
            includes_dual_kernel: true,
        })
    }

    /// Generators other than the dual-kernel point.
    pub fn free_points(&self) -> &[MordellPoint] {
        &self.points[usize::from(self.includes_dual_kernel)..]
    }
}

pub fn build_matrix(gens: &GeneratorSet, ctx: &AnalysisContext) -> Result<F3Matrix> {
    let rows = gens
        .points
        .iter()
        .map(|p| lambda_vector(p, ctx))
        .collect::<Result<Vec<_>>>()?;
    F3Matrix::new(rows, ctx.prime_support.len())
}

/// Whether an F3 vector over the context support corresponds to a
/// quasi-monogenic field of discriminant D, and which one.
fn admissible_field(v: &LambdaVector, ctx: &AnalysisContext) -> Option<FieldDescriptor> {
    let entries = &v.0;
    let admissible = match ctx.branch {
        DedekindType::II => {
            entries[0] == 0
                && entries[1..].iter().all(|&e| e != 0)
                && is_pm_one_mod9(&LambdaVector(entries[1..].to_vec()).value(&ctx.prime_support[1..]))
        }
        DedekindType::I => {
            entries.iter().all(|&e| e != 0) && !is_pm_one_mod9(&v.value(&ctx.prime_support))
        }
    };
    if !admissible || v.is_zero() {
        return None;
    }
    let value = v.value(&ctx.prime_support);
    let mut desc = crate::cocycle::classify_field(&value).ok()?;
    // non-squarefree n admit vectors whose field has a smaller discriminant
    if desc.disc != ctx.disc {
        return None;
    }
    desc.trivially_monogenic = trivially_monogenic(ctx).is_some_and(|t| t.m == desc.m);
    Some(desc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// N = 3^(rank + delta) = #E^D(Q)/3E^D(Q)
    pub n_mod_3: BigInt,
    /// (cN - 1)/2 for c = 1 and c = 3
    pub algebras_c1: BigInt,
    pub algebras_c3: BigInt,
    /// 2^(rho-1) for type I, 2^(rho-2) for type II, 0 when the exponent is negative
    pub field_bound: BigInt,
    /// 2^r for type I, 2^(r-1) for type II
    pub rank_field_bound: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundRecord {
    pub n_mod_3: BigInt,
    pub algebras: BigInt,
    pub field_bound: BigInt,
    pub rank_field_bound: BigInt,
}

fn pow2_floor(e: i64) -> BigInt {
    if e < 0 {
        BigInt::zero()
    } else {
        BigInt::one() << (e as usize)
    }
}

pub fn bounds(rank: u32, delta: u8, c: u8, rho: usize, field_type: DedekindType) -> Result<BoundRecord> {
    if delta > 1 {
        return domain("delta is 0 or 1");
    }
    if c != 1 && c != 3 {
        return domain("c is 1 or 3");
    }
    let n = num_traits::pow(BigInt::from(3), (rank + u32::from(delta)) as usize);
    let algebras = (BigInt::from(c) * &n - 1) / 2;
    let (field_bound, rank_field_bound) = match field_type {
        DedekindType::I => (pow2_floor(rho as i64 - 1), pow2_floor(rank as i64)),
        DedekindType::II => (pow2_floor(rho as i64 - 2), pow2_floor(rank as i64 - 1)),
    };
    Ok(BoundRecord { n_mod_3: n, algebras, field_bound, rank_field_bound })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiMonogenicReport {
    pub ctx: AnalysisContext,
    pub rho: usize,
    pub rref: F3Matrix,
    pub fields: Vec<FieldDescriptor>,
    pub bounds: Bounds,
    pub rank_input: u32,
    pub delta: u8,
}

/// Matrix route: enumerate the row space and keep the vectors that pass the
/// type filter.
pub fn enumerate_quasimonogenic(
    m: &F3Matrix,
    ctx: &AnalysisContext,
    rank: u32,
) -> Result<QuasiMonogenicReport> {
    if m.cols != ctx.prime_support.len() {
        return domain("matrix width differs from the context support");
    }
    let (reduced, rho) = rref3(m);
    let basis = &reduced.rows[..rho];
    let canon: BTreeSet<LambdaVector> = span(basis, m.cols).iter().map(LambdaVector::canonical).collect();
    let mut fields: Vec<FieldDescriptor> = canon.iter().filter_map(|v| admissible_field(v, ctx)).collect();
    fields.sort();
    fields.dedup_by(|a, b| a.m == b.m);

    let (_, delta) = torsion_class(&ctx.disc_rational())?;
    let r1 = bounds(rank, delta, 1, rho, ctx.branch)?;
    let r3 = bounds(rank, delta, 3, rho, ctx.branch)?;
    let report_bounds = Bounds {
        n_mod_3: r1.n_mod_3,
        algebras_c1: r1.algebras,
        algebras_c3: r3.algebras,
        field_bound: r1.field_bound,
        rank_field_bound: r1.rank_field_bound,
    };
    Ok(QuasiMonogenicReport {
        ctx: ctx.clone(),
        rho,
        rref: reduced,
        fields,
        bounds: report_bounds,
        rank_input: rank,
        delta,
    })
}

/// Point route: every combination of generators through the group law and
/// the primitive-element map. Independent of the F3 matrix.
pub fn enumerate_by_points(gens: &GeneratorSet, ctx: &AnalysisContext) -> Result<Vec<FieldDescriptor>> {
    let curve = MordellCurve::quartic(rat(-27) * ctx.disc_rational())?;
    let disc = ctx.disc_rational();
    // multiples 0, P, 2P of each generator
    let multiples: Vec<[MordellPoint; 3]> = gens
        .points
        .iter()
        .map(|p| {
            let twice = add(&curve, p, p)?;
            Ok([MordellPoint::Infinity, p.clone(), twice])
        })
        .collect::<Result<_>>()?;
    let mut sums = vec![MordellPoint::Infinity];
    for mult in &multiples {
        let mut next = Vec::with_capacity(sums.len() * 3);
        for s in &sums {
            for m in mult {
                next.push(add(&curve, s, m)?);
            }
        }
        sums = next;
    }
    let mut found: BTreeSet<FieldDescriptor> = BTreeSet::new();
    for p in sums.iter().filter(|p| !p.is_infinity()) {
        if preimage_by_phi(&disc, p)?.is_some() {
            continue;
        }
        if let PointField::Field(desc) = field_of_point(p, ctx)? {
            if desc.disc == ctx.disc {
                found.insert(desc);
            }
        }
    }
    let mut out: Vec<FieldDescriptor> = found.into_iter().collect();
    out.dedup_by(|a, b| a.m == b.m);
    Ok(out)
}

/// Greedily keeps generators whose lambda-vectors raise the rank, starting
/// with the dual-kernel point. The quotient by phi_D(E^D(Q)) only sees the
/// row space, so nothing is lost.
pub fn independent_generators(
    ctx: &AnalysisContext,
    candidates: &[MordellPoint],
    claimed_rank: Option<u32>,
) -> Result<GeneratorSet> {
    let all = GeneratorSet::new(ctx, candidates.to_vec(), claimed_rank)?;
    let mut kept: Vec<MordellPoint> = Vec::new();
    let mut rows: Vec<LambdaVector> = Vec::new();
    let cols = ctx.prime_support.len();
    for p in &all.points {
        let row = lambda_vector(p, ctx)?;
        let mut trial = rows.clone();
        trial.push(row.clone());
        let (_, before) = rref3(&F3Matrix { rows: rows.clone(), cols });
        let (_, after) = rref3(&F3Matrix { rows: trial, cols });
        if after > before || kept.is_empty() {
            kept.push(p.clone());
            rows.push(row);
        }
    }
    Ok(GeneratorSet {
        disc: all.disc,
        points: kept,
        claimed_rank,
        includes_dual_kernel: true,
    })
}

pub fn field_set(fields: &[FieldDescriptor]) -> Vec<BigInt> {
    fields.iter().map(|f| f.m.clone()).collect()
}
