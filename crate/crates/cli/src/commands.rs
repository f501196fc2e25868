use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sumcomplex::collapse::{is_collapsible, CollapseTrace, Collapsibility, NoCertificate};
use sumcomplex::complex::{facets, validate_params};
use sumcomplex::field::FieldCtx;
use sumcomplex::fourier::{chebotarev_scan, default_max_order, theorem1_kernel_dims};
use sumcomplex::homology::{betti, integral_homology, HomologyResult};
use sumcomplex::zn::{all_subsets, canonical_form, gcd, is_arithmetic_progression, is_prime, ZSet};
use sumcomplex::Error;

use crate::args::{FieldSpec, Instance};

/// Why a command did not produce a clean result. Maps onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Internal(String),
    /// the two methods disagree; the record is still written
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "invalid input: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
            Failure::Mismatch(_) => {
                f.write_str("cross-check mismatch between the Fourier and boundary methods")
            }
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

/// What a command hands back to `main`.
pub enum Report {
    Record(Value),
    /// survey rows, already in output order
    Table(Vec<SurveyRow>),
}

fn parse_instance(inst: &Instance) -> CmdResult<ZSet> {
    let a = ZSet::parse(inst.n, &inst.a)?;
    validate_params(inst.n, inst.k, &a)?;
    Ok(a)
}

fn check_characteristic(p: u64, n: u64) -> CmdResult<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p).into());
    }
    if gcd(p, n) != 1 {
        return Err(Error::BadCharacteristic { char: p, n }.into());
    }
    Ok(())
}

fn base_record(command: &str, inst: &Instance, a: &ZSet) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("n".into(), json!(inst.n));
    m.insert("k".into(), json!(inst.k));
    m.insert("A".into(), json!(a.to_string()));
    m
}

fn betti_map(h: &HomologyResult) -> Value {
    h.h.iter()
        .map(|(d, b)| (format!("h_{d}"), json!(b)))
        .collect::<Map<_, _>>()
        .into()
}

/// `Z^2 + Z/2`, or `0` for the trivial group.
fn group_text(free: u64, torsion: &[String]) -> String {
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn torsion_strings(h: &HomologyResult, dim: usize) -> Vec<String> {
    h.torsion
        .get(&dim)
        .map(|t| t.iter().map(|d| d.to_string()).collect())
        .unwrap_or_default()
}

pub fn homology(inst: &Instance, field: FieldSpec) -> CmdResult<Report> {
    let a = parse_instance(inst)?;
    let x = facets(inst.n, inst.k, &a)?;
    let mut rec = base_record("homology", inst, &a);
    rec.insert("field".into(), json!(field.to_string()));
    rec.insert("method".into(), json!("boundary"));
    rec.insert("f_vector".into(), json!(x.f_vector()));
    let h = match field {
        FieldSpec::Z => {
            let h = integral_homology(&x)?;
            let groups: Map<_, _> =
                h.h.iter()
                    .map(|(&d, &r)| {
                        (
                            format!("H_{d}"),
                            json!(group_text(r, &torsion_strings(&h, d))),
                        )
                    })
                    .collect();
            let torsion: Map<_, _> =
                h.h.keys()
                    .map(|&d| (format!("H_{d}"), json!(torsion_strings(&h, d))))
                    .collect();
            rec.insert("groups".into(), groups.into());
            rec.insert("torsion".into(), torsion.into());
            h
        }
        other => betti(&x, &field_ctx(other, inst.n)?)?,
    };
    rec.insert("betti".into(), betti_map(&h));
    Ok(Report::Record(rec.into()))
}

/// The field named on the command line, for the boundary method.
fn field_ctx(field: FieldSpec, n: u64) -> CmdResult<FieldCtx> {
    Ok(match field {
        FieldSpec::Q => FieldCtx::rational(),
        FieldSpec::QOmega => FieldCtx::rational_cyclotomic(n)?,
        FieldSpec::Fp(p) => {
            check_characteristic(p, n)?;
            FieldCtx::prime(p)?
        }
        FieldSpec::FpExt(p) => {
            check_characteristic(p, n)?;
            FieldCtx::splitting_field(p, n)?
        }
        FieldSpec::Z => return Err(Failure::Input("z is not a field".into())),
    })
}

pub fn theorem1(inst: &Instance, field: FieldSpec, cross_check: bool) -> CmdResult<Report> {
    let a = parse_instance(inst)?;
    let (n, k) = (inst.n, inst.k);
    let ctx = match field {
        FieldSpec::Q | FieldSpec::QOmega => FieldCtx::rational_cyclotomic(n)?,
        FieldSpec::FpExt(_) => field_ctx(field, n)?,
        FieldSpec::Fp(p) => {
            return Err(Failure::Input(format!(
                "the Fourier formula needs a primitive n-th root of unity; use fpext:{p}"
            )))
        }
        FieldSpec::Z => {
            return Err(Failure::Input(
                "the Fourier formula needs a field, not z".into(),
            ))
        }
    };
    let dims = theorem1_kernel_dims(n, k, &a, &ctx)?;
    let total: u64 = dims.iter().map(|&(_, d)| d as u64).sum();
    let divisor = k as u64 + 1;
    if total % divisor != 0 {
        return Err(Error::DivisibilityViolation {
            sum: total,
            divisor,
        }
        .into());
    }
    let h = total / divisor;
    let mut rec = base_record("theorem1", inst, &a);
    rec.insert("field".into(), json!(field.to_string()));
    rec.insert("field_description".into(), json!(ctx.describe()));
    rec.insert("method".into(), json!("fourier"));
    rec.insert("kernel_sum".into(), json!(total));
    let singular: Vec<Value> = dims
        .iter()
        .filter(|&&(_, d)| d > 0)
        .map(|(b, d)| json!({"B": b.to_string(), "nullity": d}))
        .collect();
    rec.insert("singular_B".into(), singular.into());
    let mut bm = Map::new();
    bm.insert(format!("h_{}", k - 1), json!(h));
    bm.insert(format!("h_{k}"), json!(h));
    rec.insert("betti".into(), bm.into());
    if cross_check {
        let x = facets(n, k, &a)?;
        let b = betti(&x, &ctx)?;
        let (lo, hi) = (b.get(k - 1), b.get(k));
        let agree = lo == Some(h) && hi == Some(h);
        rec.insert(
            "cross_check".into(),
            json!({"method": "boundary", "betti": betti_map(&b), "agree": agree}),
        );
        if !agree {
            return Err(Failure::Mismatch(rec.into()));
        }
    }
    Ok(Report::Record(rec.into()))
}

/// The collapse verdict, and the trace to write for it.
pub fn collapse(inst: &Instance, budget: u64) -> CmdResult<(Report, CollapseTrace)> {
    let a = parse_instance(inst)?;
    let (n, k) = (inst.n, inst.k);
    let decision = is_collapsible(n, k, &a, budget)?;
    let mut rec = base_record("collapse", inst, &a);
    rec.insert("budget".into(), json!(budget));
    rec.insert("verdict".into(), json!(decision.label()));
    let trace = match decision {
        Collapsibility::Yes(t) => {
            rec.insert("method".into(), json!(method_for(n, &a)?));
            t
        }
        Collapsibility::No(NoCertificate::Necessity(r)) => {
            rec.insert("method".into(), json!("forced_collapses"));
            rec.insert(
                "certificate".into(),
                json!({"initial_free": r.initial_free, "after_steps_free": r.after_steps_free}),
            );
            r.to_trace(n, k, &a)
        }
        Collapsibility::No(NoCertificate::Stuck(t)) => {
            rec.insert("method".into(), json!("greedy"));
            t
        }
        Collapsibility::Unknown(t) => {
            rec.insert("method".into(), json!("greedy"));
            t
        }
    };
    rec.insert("outcome".into(), json!(trace.outcome.to_string()));
    rec.insert("steps".into(), json!(trace.steps.len()));
    rec.insert("diagnostics".into(), json!(trace.diagnostics));
    Ok((Report::Record(rec.into()), trace))
}

fn method_for(n: u64, a: &ZSet) -> CmdResult<&'static str> {
    Ok(if is_prime(n) && is_arithmetic_progression(a)? {
        "collapse_order"
    } else {
        "greedy"
    })
}

pub fn chebotarev(n: u64, max_order: Option<usize>) -> CmdResult<Report> {
    let max_order = max_order.unwrap_or_else(|| default_max_order(n));
    let r = chebotarev_scan(n, max_order)?;
    let singular: Vec<Value> = r
        .singular
        .iter()
        .map(|(rows, cols)| json!({"rows": rows.to_string(), "cols": cols.to_string()}))
        .collect();
    Ok(Report::Record(json!({
        "command": "chebotarev",
        "n": r.n,
        "max_order": r.max_order,
        "checked": r.checked,
        "singular_count": r.singular.len(),
        "singular": singular,
    })))
}

/// One line of the survey table.
#[derive(Debug, Clone)]
pub struct SurveyRow {
    pub n: u64,
    pub k: usize,
    pub a: ZSet,
    pub canonical: ZSet,
    pub is_ap: bool,
    pub h_q: u64,
    pub h_fp: Option<u64>,
    /// invariant factors of `H_{k-1}(Z)`, `;`-separated
    pub torsion: String,
    pub collapsible: &'static str,
}

pub const SURVEY_COLUMNS: [&str; 9] = [
    "n",
    "k",
    "A",
    "canonical_A",
    "is_ap",
    "h_km1_q",
    "h_km1_fp",
    "torsion",
    "collapsible",
];

impl SurveyRow {
    pub fn fields(&self) -> [String; 9] {
        [
            self.n.to_string(),
            self.k.to_string(),
            self.a.to_string(),
            self.canonical.to_string(),
            self.is_ap.to_string(),
            self.h_q.to_string(),
            self.h_fp.map(|h| h.to_string()).unwrap_or_default(),
            self.torsion.clone(),
            self.collapsible.to_string(),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "A": self.a.to_string(),
            "canonical_A": self.canonical.to_string(),
            "is_ap": self.is_ap,
            "h_km1_q": self.h_q,
            "h_km1_fp": self.h_fp,
            "torsion": self.torsion,
            "collapsible": self.collapsible,
        })
    }
}

pub fn survey(n: u64, k: usize, classes: bool, p: Option<u64>, budget: u64) -> CmdResult<Report> {
    let first = ZSet::new(n, 0..=k as u64)?;
    validate_params(n, k, &first)?;
    let fp = match p {
        Some(p) => {
            check_characteristic(p, n)?;
            Some(FieldCtx::prime(p)?)
        }
        None => None,
    };
    let sets: Vec<ZSet> = if classes {
        let reps = all_subsets(n, k + 1)
            .map(|a| canonical_form(&a, k))
            .collect::<Result<BTreeSet<_>, _>>()?;
        reps.into_iter().collect()
    } else {
        all_subsets(n, k + 1).collect()
    };
    let q = FieldCtx::rational();
    let rows = sets
        .par_iter()
        .map(|a| -> CmdResult<SurveyRow> {
            let x = facets(n, k, a)?;
            let h_q = betti(&x, &q)?.get(k - 1).unwrap_or(0);
            let h_fp = match &fp {
                Some(ctx) => Some(betti(&x, ctx)?.get(k - 1).unwrap_or(0)),
                None => None,
            };
            let z = integral_homology(&x)?;
            Ok(SurveyRow {
                n,
                k,
                a: a.clone(),
                canonical: canonical_form(a, k)?,
                is_ap: is_arithmetic_progression(a)?,
                h_q,
                h_fp,
                torsion: torsion_strings(&z, k - 1).join(";"),
                collapsible: is_collapsible(n, k, a, budget)?.label(),
            })
        })
        .collect::<CmdResult<Vec<_>>>()?;
    Ok(Report::Table(rows))
}
