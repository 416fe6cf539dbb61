//! End-to-end runs: gather generators, enumerate fields both ways, certify
//! monogenity, and audit tabulated rows.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cocycle::{trivially_monogenic, AnalysisContext, DedekindType, FieldDescriptor};
use crate::engine::{
    build_matrix, enumerate_by_points, enumerate_quasimonogenic, field_set, independent_generators,
    GeneratorSet, QuasiMonogenicReport,
};
use crate::error::{Error, Result};
use crate::exactmath::rat;
use crate::fieldkit::{certify_monogenic, Monogenity};
use crate::ingest::{GeneratorFile, TableRow};
use crate::mordell::{naive_search, preimage_by_phi_hat, MordellCurve, MordellPoint};

/// Candidate points on E^{-27D}: a naive search there, plus phi_hat-preimages
/// of naive-search points on E^D.
pub fn search_generators(ctx: &AnalysisContext, bound: u64) -> Result<Vec<MordellPoint>> {
    let disc = ctx.disc_rational();
    let dual = MordellCurve::quartic(rat(-27) * &disc)?;
    let base = MordellCurve::quartic(disc.clone())?;
    let mut out = naive_search(&dual, bound);
    for p in naive_search(&base, bound) {
        if let Some(q) = preimage_by_phi_hat(&disc, &p)? {
            out.push(q);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldReport {
    pub field: FieldDescriptor,
    pub monogenity: Monogenity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub report: QuasiMonogenicReport,
    pub generators: GeneratorSet,
    pub by_points: Vec<FieldDescriptor>,
    pub routes_agree: bool,
    pub fields: Vec<FieldReport>,
}

/// Runs both enumeration routes on an F3-independent subset of `candidates`
/// and certifies every field found with a unit search up to `index_bound`.
pub fn analyze(
    ctx: &AnalysisContext,
    candidates: &[MordellPoint],
    claimed_rank: Option<u32>,
    index_bound: u64,
) -> Result<Analysis> {
    let generators = independent_generators(ctx, candidates, claimed_rank)?;
    let matrix = build_matrix(&generators, ctx)?;
    let rank = claimed_rank.unwrap_or(generators.free_points().len() as u32);
    let report = enumerate_quasimonogenic(&matrix, ctx, rank)?;
    let by_points = enumerate_by_points(&generators, ctx)?;
    let routes_agree = field_set(&report.fields) == field_set(&by_points);
    let fields = report
        .fields
        .iter()
        .map(|f| {
            Ok(FieldReport {
                field: f.clone(),
                monogenity: certify_monogenic(&f.m, index_bound)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis { report, generators, by_points, routes_agree, fields })
}

fn s(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

impl Analysis {
    pub fn to_json(&self) -> Value {
        let r = &self.report;
        let b = &r.bounds;
        json!({
            "D": s(&r.ctx.disc),
            "n": s(&r.ctx.n),
            "type": r.ctx.branch.to_string(),
            "support": r.ctx.prime_support.iter().map(s).collect::<Vec<_>>(),
            "rho": r.rho,
            "rank_input": r.rank_input,
            "bounds": {
                "N": s(&b.n_mod_3),
                "delta": r.delta,
                "algebras_c1": s(&b.algebras_c1),
                "algebras_c3": s(&b.algebras_c3),
                "field_bound": s(&b.field_bound),
                "rank_field_bound": s(&b.rank_field_bound),
            },
            "routes_agree": self.routes_agree,
            "generators": self.generators.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "fields": self.fields.iter().map(|f| {
                let mono = match &f.monogenity {
                    Monogenity::Monogenic { witness: (x, y), value } => json!({
                        "status": "monogenic",
                        "witness": [s(x), s(y)],
                        "value": value,
                    }),
                    Monogenity::Undetermined => json!({"status": "undetermined"}),
                };
                json!({
                    "m": s(&f.field.m),
                    "h": s(&f.field.h),
                    "k": s(&f.field.k),
                    "disc": s(&f.field.disc),
                    "trivially_monogenic": f.field.trivially_monogenic,
                    "monogenity": mono,
                })
            }).collect::<Vec<_>>(),
        })
    }

    /// One header line of key=value pairs, then one line per field.
    pub fn to_tsv(&self) -> String {
        let r = &self.report;
        let mut out = format!(
            "D={}\tn={}\ttype={}\trho={}\trank_input={}\tfield_bound={}\troutes_agree={}\n",
            r.ctx.disc, r.ctx.n, r.ctx.branch, r.rho, r.rank_input, r.bounds.field_bound, self.routes_agree
        );
        out.push_str("m\th\tk\tdisc\ttrivially_monogenic\tmonogenity\twitness\n");
        for f in &self.fields {
            let (status, witness) = match &f.monogenity {
                Monogenity::Monogenic { witness: (x, y), .. } => ("monogenic", format!("{x},{y}")),
                Monogenity::Undetermined => ("undetermined", String::new()),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                f.field.m, f.field.h, f.field.k, f.field.disc, f.field.trivially_monogenic, status, witness
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowPipeline {
    Skipped(String),
    Compared { computed: Vec<BigInt>, expected: Vec<BigInt>, routes_agree: bool },
}

impl RowPipeline {
    pub fn passed(&self) -> bool {
        match self {
            RowPipeline::Skipped(_) => true,
            RowPipeline::Compared { computed, expected, routes_agree } => *routes_agree && computed == expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowAudit {
    pub disc: BigInt,
    pub branch: DedekindType,
    /// n' = sqrt(-D/27) for type I rows, n = sqrt(-D/3) otherwise
    pub root: BigInt,
    pub expected_trivial: Option<BigInt>,
    pub starred: Vec<BigInt>,
    pub pipeline: RowPipeline,
}

impl RowAudit {
    pub fn trivial_ok(&self) -> bool {
        match &self.expected_trivial {
            Some(m) => self.starred == [m.clone()],
            None => self.starred.is_empty(),
        }
    }

    pub fn passed(&self) -> bool {
        self.trivial_ok() && self.pipeline.passed()
    }

    pub fn summary(&self) -> String {
        let trivial = match &self.expected_trivial {
            Some(m) => format!("trivial field {m}"),
            None => "no trivial field".to_string(),
        };
        let check = if self.trivial_ok() { "ok" } else { "MISMATCH" };
        let pipeline = match &self.pipeline {
            RowPipeline::Skipped(why) => format!("skipped: {why}"),
            RowPipeline::Compared { computed, expected, routes_agree } => {
                let list = |v: &[BigInt]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
                if self.pipeline.passed() {
                    format!("pipeline ok [{}]", list(computed))
                } else {
                    format!(
                        "pipeline MISMATCH computed [{}] expected [{}] routes_agree={routes_agree}",
                        list(computed),
                        list(expected)
                    )
                }
            }
        };
        let root = match self.branch {
            DedekindType::I => "n'",
            DedekindType::II => "n",
        };
        format!("D={} {root}={} type {}: {trivial} {check}; {pipeline}", self.disc, self.root, self.branch)
    }
}

/// Checks a tabulated row: the discriminant shape, the trivially monogenic
/// marker, and, when generators are supplied, the complete field list.
pub fn audit_row(row: &TableRow, generators: Option<&GeneratorFile>, index_bound: u64) -> Result<RowAudit> {
    let ctx = AnalysisContext::from_disc(&row.disc)?;
    let root = match ctx.branch {
        DedekindType::I => &ctx.n / 3,
        DedekindType::II => ctx.n.clone(),
    };
    let expected_trivial = trivially_monogenic(&ctx).map(|f| f.m);
    let starred: Vec<BigInt> = row.fields.iter().filter(|f| f.trivially_monogenic).map(|f| f.m.clone()).collect();
    let pipeline = match generators {
        None => RowPipeline::Skipped("generators unavailable".to_string()),
        Some(file) => {
            if file.disc != row.disc {
                return Err(Error::Parse(format!(
                    "generator file is for D = {}, row has D = {}",
                    file.disc, row.disc
                )));
            }
            let points = file.quartic_points()?;
            let analysis = analyze(&ctx, &points, Some(row.rank_grh), index_bound)?;
            let mut expected: Vec<BigInt> = row.fields.iter().map(|f| f.m.clone()).collect();
            expected.sort();
            RowPipeline::Compared {
                computed: field_set(&analysis.report.fields),
                expected,
                routes_agree: analysis.routes_agree,
            }
        }
    };
    Ok(RowAudit { disc: row.disc.clone(), branch: ctx.branch, root, expected_trivial, starred, pipeline })
}
