//! The subcommands. Each returns rendered output and an exit status.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use phizeta::arith::{parse_rational, Arg};
use phizeta::identities::{
    build_catalog_with, generate, theorem_rhs, verify_with, CatalogFault, Family, Identity,
    VerificationReport,
};
use phizeta::qsqrt5::{fib, lucas};
use phizeta::series::{converges, sum_series, Classification, Kind, SeriesSpec};
use phizeta::specfun::{bernoulli, cot_deriv, polygamma, zeta_int};
use phizeta::{Error, QS5};

use crate::config::{Fault, Filter, Kernel, Point, RunConfig};
use crate::report::{pass_count, render_text, to_json, Header, ReportDocument};
use crate::{CliError, Exit, Output};

pub fn catalog(cfg: &RunConfig) -> Vec<Identity> {
    let fault = (cfg.fault == Some(Fault::ExampleConstant)).then_some(CatalogFault::ExampleConstant);
    build_catalog_with(fault)
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    Family::from_name(s).ok_or_else(|| CliError::Usage(format!("unknown family {s:?}")))
}

fn apply_filter<'a>(cat: &'a [Identity], f: &Filter) -> Result<Vec<&'a Identity>, CliError> {
    let family = f.family.as_deref().map(parse_family).transpose()?;
    Ok(cat
        .iter()
        .filter(|i| family.is_none_or(|fam| i.family == fam))
        .filter(|i| !(f.divergent && i.convergent) && !(f.convergent && !i.convergent))
        .collect())
}

fn parse_z(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("bad rational {s:?}: {e}")))
}

fn parse_point(p: &Point) -> Result<QS5, CliError> {
    Ok(QS5::new(parse_z(&p.x)?, parse_z(&p.x_sqrt5)?))
}

/// Library errors caused by the input are usage errors; the rest are failures.
fn classify(e: Error) -> CliError {
    match e {
        Error::Usage(m) => CliError::Usage(m),
        Error::Domain(_) | Error::Pole(_) => CliError::Usage(e.to_string()),
        other => CliError::Failure(other.to_string()),
    }
}

#[derive(Serialize)]
struct ListRow<'a> {
    id: &'a str,
    family: Family,
    kind: String,
    m: String,
    r: String,
    z: String,
    convergent: bool,
    provenance: &'a str,
}

pub fn list(cfg: &RunConfig, filter: &Filter) -> Result<Output, CliError> {
    let cat = catalog(cfg);
    let rows: Vec<ListRow> = apply_filter(&cat, filter)?
        .into_iter()
        .map(|i| ListRow {
            id: &i.id,
            family: i.family,
            kind: i.kind().to_string(),
            m: i.m.to_string(),
            r: i.r.to_string(),
            z: i.z.to_string(),
            convergent: i.convergent,
            provenance: &i.provenance,
        })
        .collect();
    let body = if cfg.json {
        to_json(&Header::new(cfg), &json!({ "identities": rows }))
    } else {
        let w = rows.iter().map(|r| r.id.len()).max().unwrap_or(2);
        let mut s = String::new();
        for r in &rows {
            let conv = if r.convergent { "convergent" } else { "divergent" };
            s.push_str(&format!(
                "{:w$}  {:8}  {}(m={}, r={}, z={})  {:10}  {}\n",
                r.id,
                r.family.name(),
                r.kind,
                r.m,
                r.r,
                r.z,
                conv,
                r.provenance
            ));
        }
        s.push_str(&format!("{} identities\n", rows.len()));
        s
    };
    Ok(Output { body, exit: Exit::Pass })
}

/// Verifies `entries` on a worker pool; reports keep catalog order.
pub fn verify_entries(cfg: &RunConfig, entries: &[&Identity]) -> Vec<VerificationReport> {
    let tol = cfg.tolerance();
    let run = || {
        entries
            .par_iter()
            .flat_map_iter(|i| verify_with(i, cfg.precision, &tol, cfg.max_terms))
            .collect::<Vec<_>>()
    };
    match cfg.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    }
}

fn report_output(cfg: &RunConfig, reports: Vec<VerificationReport>) -> Output {
    let (passed, total) = pass_count(&reports);
    let exit = if passed == total { Exit::Pass } else { Exit::Fail };
    let body = if cfg.json {
        ReportDocument { header: Header::new(cfg), reports }.to_json()
    } else {
        render_text(&reports)
    };
    Output { body, exit }
}

pub fn verify(cfg: &RunConfig, ids: &[String], all: bool, filter: &Filter) -> Result<Output, CliError> {
    let cat = catalog(cfg);
    let entries: Vec<&Identity> = if all {
        apply_filter(&cat, filter)?
    } else if ids.is_empty() {
        return Err(CliError::Usage("give --id ID (repeatable) or --all".into()));
    } else {
        ids.iter()
            .map(|id| {
                cat.iter()
                    .find(|i| &i.id == id)
                    .ok_or_else(|| CliError::Usage(format!("unknown identity {id:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    Ok(report_output(cfg, verify_entries(cfg, &entries)))
}

pub fn sum(cfg: &RunConfig, kind: &str, m: u32, r: i64, z: &str) -> Result<Output, CliError> {
    let kind: Kind = kind.parse().map_err(classify)?;
    let z = parse_z(z)?;
    let spec = SeriesSpec::new(kind, m, r, z.clone()).map_err(classify)?;
    let p = cfg.precision;
    let tol = cfg.tolerance();
    let digits = p.digits() as usize;
    let (convergent, ratio) = converges(r, &z);
    let poly = theorem_rhs(kind, m, r, &z, p).map_err(classify)?;
    let mut exit = Exit::Pass;
    let mut fields = serde_json::Map::new();
    let mut text = format!("series: {spec}\n");
    let class = if convergent {
        format!("convergent (|α^r z| = {ratio} < 1)")
    } else {
        format!("divergent (|α^r z| = {ratio} > 1)")
    };
    text.push_str(&format!("classification: {class}\n"));
    fields.insert("series".into(), json!(spec.to_string()));
    fields.insert(
        "classification".into(),
        json!(if convergent { Classification::Convergent } else { Classification::Divergent }),
    );
    fields.insert("ratio".into(), json!(ratio.to_string()));
    if convergent {
        match sum_series(&spec, p, &tol.div_int(10), cfg.max_terms) {
            Ok(res) => {
                let v = res.value.expect("convergent sums carry a value");
                let tail = res.tail_bound.expect("convergent sums carry a tail bound");
                let diff = (&v - &poly).abs();
                if diff >= tol {
                    exit = Exit::Fail;
                }
                text.push_str(&format!("direct sum: {}\n", v.to_decimal(digits)));
                text.push_str(&format!("tail bound: {}\n", tail.to_decimal(3)));
                text.push_str(&format!("terms used: {}\n", res.terms_used));
                text.push_str(&format!("|sum - polygamma|: {}\n", diff.to_decimal(3)));
                fields.insert("direct_sum".into(), json!(v.to_decimal(digits)));
                fields.insert("tail_bound".into(), json!(tail.to_decimal(digits)));
                fields.insert("terms_used".into(), json!(res.terms_used.to_string()));
                fields.insert("abs_error".into(), json!(diff.to_decimal(digits)));
            }
            Err(Error::Truncation { terms, partial, .. }) => {
                exit = Exit::Fail;
                text.push_str(&format!("direct sum: truncated after {terms} terms at {}\n", partial.to_decimal(digits)));
                fields.insert("direct_sum".into(), serde_json::Value::Null);
                fields.insert("terms_used".into(), json!(terms.to_string()));
            }
            Err(e) => return Err(classify(e)),
        }
    }
    text.push_str(&format!("polygamma form: {}\n", poly.to_decimal(digits)));
    fields.insert("polygamma_form".into(), json!(poly.to_decimal(digits)));
    let body = if cfg.json { to_json(&Header::new(cfg), &fields) } else { text };
    Ok(Output { body, exit })
}

pub fn eval(cfg: &RunConfig, kernel: &Kernel) -> Result<Output, CliError> {
    let p = cfg.precision;
    let digits = p.digits() as usize;
    let (label, value) = match kernel {
        Kernel::Polygamma { m, point } => {
            let x = parse_point(point)?;
            let v = polygamma(*m, Arg::Exact(x.clone()), p).map_err(classify)?;
            (format!("psi^({m})({x})"), v.to_decimal(digits))
        }
        Kernel::Zeta { k } => {
            let v = zeta_int(*k, p).map_err(classify)?;
            (format!("zeta({k})"), v.to_decimal(digits))
        }
        Kernel::Cot { m, point } => {
            let x = parse_point(point)?;
            let v = cot_deriv(*m, Arg::Exact(x.clone()), p).map_err(classify)?;
            (format!("d^{m}/dx^{m} cot(pi x) at x = {x}"), v.to_decimal(digits))
        }
        Kernel::Bernoulli { n } => {
            let b = bernoulli(*n);
            (format!("B_{n}"), b.to_string())
        }
        Kernel::Fib { n } => {
            let (f, l): (BigInt, BigInt) = (fib(*n), lucas(*n));
            (format!("F_{n}, L_{n}"), format!("{f}, {l}"))
        }
    };
    let body = if cfg.json {
        to_json(&Header::new(cfg), &json!({ "kernel": label, "value": value }))
    } else {
        format!("{label} = {value}\n")
    };
    Ok(Output { body, exit: Exit::Pass })
}

pub fn generate_cmd(cfg: &RunConfig, family: &str, m: u32, r: i64, run_verify: bool) -> Result<Output, CliError> {
    let family = parse_family(family)?;
    let id = generate(family, m, r).map_err(classify)?;
    let canonical = id.rhs.canonical().map_err(classify)?;
    let reports = if run_verify { verify_entries(cfg, &[&id]) } else { Vec::new() };
    let (passed, total) = pass_count(&reports);
    let exit = if passed == total { Exit::Pass } else { Exit::Fail };
    let series = format!(
        "{}{}",
        if id.lhs_sign < 0 { "-" } else { "" },
        id.lhs
    );
    let body = if cfg.json {
        to_json(
            &Header::new(cfg),
            &json!({
                "id": id.id,
                "family": family,
                "lhs": series,
                "convergent": id.convergent,
                "rhs": id.rhs.to_string(),
                "rhs_canonical": canonical.to_string(),
                "reports": reports,
            }),
        )
    } else {
        let mut s = format!(
            "id: {}\nfamily: {}\nlhs: {}\nconvergent: {}\nrhs: {}\ncanonical: {}\n",
            id.id, family, series, id.convergent, id.rhs, canonical
        );
        if run_verify {
            s.push_str(&render_text(&reports));
        }
        s
    };
    Ok(Output { body, exit })
}
