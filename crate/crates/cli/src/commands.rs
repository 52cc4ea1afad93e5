use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use num_rational::Rational64;
use rayon::prelude::*;
use serde_json::{json, Value};

use ldpclab::ensembles::{ldpc_containment_mc, max_list_size, sample_ldpc, sample_rlc, LdpcEnsembleParams};
use ldpclab::fourier::{exact_layer_prob, ldpc_contain_bound};
use ldpclab::rowdist::{empirical_containment, listdec_threshold_search, row_distribution_of, rstar};
use ldpclab::util::{log_q, parse_rational, rational_to_f64};
use ldpclab::{DistanceCertificate, Error, ErrorClass, FieldSpec, FqMatrix, GvParams, RowDistribution};

use crate::{Common, DistanceProfileArgs, Format, LdpcContainArgs, ListdecodeArgs, SampleArgs, ThresholdArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Precondition => 2,
                ErrorClass::Resource => 3,
                ErrorClass::Numeric => 4,
            },
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn field(common: &Common) -> CliResult<FieldSpec> {
    let (p, h) = common.field.unwrap_or((2, 1));
    Ok(FieldSpec::new(p, h)?)
}

fn seed(common: &Common, what: &str) -> CliResult<u64> {
    common.seed.ok_or_else(|| CliError::Usage(format!("--seed is required for {what}")))
}

fn rate(s: &str) -> CliResult<Rational64> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("cannot parse rate {s:?}; use a fraction like 1/3 or a decimal")))
}

fn read(path: &std::path::Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn check_field(common: &Common, actual: &FieldSpec) -> CliResult<()> {
    match common.field {
        Some((p, h)) if (p, h) != (actual.p(), actual.h()) => Err(CliError::Usage(format!(
            "--field {p},{h} does not match the input file's field {},{}",
            actual.p(),
            actual.h()
        ))),
        _ => Ok(()),
    }
}

fn json_only(common: &Common, what: &str) -> CliResult<()> {
    match common.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("{what} writes JSON only"))),
        _ => Ok(()),
    }
}

fn emit(common: &Common, mut content: String) -> CliResult<()> {
    if !content.ends_with('\n') {
        content.push('\n');
    }
    match &common.out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn median(sorted: &[usize]) -> f64 {
    let m = sorted.len() / 2;
    match sorted.len() {
        0 => f64::NAN,
        l if l % 2 == 0 => (sorted[m - 1] + sorted[m]) as f64 / 2.0,
        _ => sorted[m] as f64,
    }
}

pub fn sample(a: &SampleArgs) -> CliResult<()> {
    json_only(&a.common, "sample")?;
    let f = field(&a.common)?;
    let rate = rate(&a.rate)?;
    let code = match a.s {
        Some(s) => {
            let params = LdpcEnsembleParams::new(&f, a.n, s, rate)?;
            sample_ldpc(&params, seed(&a.common, "sample")?)
        }
        None => {
            ldpclab::ensembles::rlc_check_count(a.n, rate)?;
            sample_rlc(a.n, rate, &f, seed(&a.common, "sample")?)?
        }
    };
    emit(&a.common, code.to_json())
}

pub fn distance_profile(a: &DistanceProfileArgs) -> CliResult<()> {
    let f = field(&a.common)?;
    let rate = rate(&a.rate)?;
    let params = GvParams::new(f.q(), a.s, rational_to_f64(&rate), a.delta, a.eps)?;
    let ensemble = if a.empirical { Some(LdpcEnsembleParams::new(&f, a.n, a.s as usize, rate)?) } else { None };
    let cert = DistanceCertificate::compute(&params, a.n)?;
    let empirical = match ensemble {
        None => None,
        Some(ensemble) => {
            let seed = seed(&a.common, "--empirical")?;
            let weights = (0..a.trials)
                .into_par_iter()
                .map(|i| {
                    let (d, _) = sample_ldpc(&ensemble, seed.wrapping_add(i)).min_distance()?;
                    Ok((d * a.n as f64).round() as usize)
                })
                .collect::<ldpclab::Result<Vec<usize>>>()?;
            let target = (a.delta * a.n as f64 - 1e-9).ceil() as usize;
            let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
            for &w in &weights {
                *histogram.entry(w).or_insert(0) += 1;
            }
            let reached = weights.iter().filter(|&&w| w >= target).count();
            Some(json!({
                "codes": a.trials,
                "seed": seed,
                "min_distance_histogram": histogram,
                "target_weight": target,
                "fraction_at_least_delta": reached as f64 / a.trials.max(1) as f64,
            }))
        }
    };
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = cert.to_csv();
            if let Some(e) = &empirical {
                writeln!(out, "# empirical {}", serde_json::to_string(e).expect("values serialize")).unwrap();
            }
            emit(&a.common, out)
        }
        Format::Json => {
            let mut v = json!({ "certificate": cert });
            if let Some(e) = empirical {
                v["empirical"] = e;
            }
            emit(&a.common, pretty(&v))
        }
    }
}

pub fn threshold(a: &ThresholdArgs) -> CliResult<()> {
    let tau = RowDistribution::from_json(&read(&a.tau)?)?;
    check_field(&a.common, tau.field())?;
    let report = rstar(&tau)?;
    let mut value = report.to_json_value();
    let mut curve = Vec::new();
    if a.empirical {
        let n = a.n.ok_or_else(|| CliError::Usage("--n is required with --empirical".into()))?;
        let seed = seed(&a.common, "--empirical")?;
        let step = (n / 32).max(1);
        for k in (step..n).step_by(step) {
            let r = Rational64::new(k as i64, n as i64);
            let est = empirical_containment(&tau, n, r, a.trials, seed.wrapping_add(k as u64))?;
            curve.push((k as f64 / n as f64, est));
        }
        value["empirical"] = json!({
            "n": n,
            "seed": seed,
            "curve": curve.iter().map(|(r, e)| json!({"rate": r, "estimate": e})).collect::<Vec<_>>(),
        });
    }
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => emit(&a.common, pretty(&value)),
        Format::Csv => {
            let mut report_only = value.clone();
            if let Some(obj) = report_only.as_object_mut() {
                obj.remove("empirical");
            }
            let mut out = format!("# {}\nrate,hits,trials,p,std_err\n", serde_json::to_string(&report_only).unwrap());
            for (r, e) in &curve {
                writeln!(out, "{r},{},{},{},{}", e.hits, e.trials, e.p, e.std_err).unwrap();
            }
            emit(&a.common, out)
        }
    }
}

pub fn ldpc_contain(a: &LdpcContainArgs) -> CliResult<()> {
    json_only(&a.common, "ldpc-contain")?;
    let m = FqMatrix::from_json(&read(&a.matrix)?)?;
    check_field(&a.common, m.field())?;
    let params = LdpcEnsembleParams::new(m.field(), m.rows(), a.s, rate(&a.rate)?)?;
    let bound = ldpc_contain_bound(&m, &params, a.eps)?;
    let q = m.field().q();
    let t = params.t();
    let exact = match exact_layer_prob(&row_distribution_of(&m), m.rows(), a.s) {
        Ok(p) => json!({
            "layer_probability": p,
            "probability": p.powi(t as i32),
            "log_q_probability": t as f64 * log_q(p, q),
        }),
        Err(e) if e.class() == ErrorClass::Resource => json!({ "unavailable": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    let mut value = json!({
        "q": q,
        "n": m.rows(),
        "ell": m.cols(),
        "s": a.s,
        "t": t,
        "rate": params.rate_f64(),
        "bound": bound,
        "bound_probability": (q as f64).powf(bound.log_q_bound),
        "exact": exact,
    });
    if a.trials > 0 {
        let seed = seed(&a.common, "the Monte Carlo estimate")?;
        value["monte_carlo"] = json!({ "seed": seed, "estimate": ldpc_containment_mc(&m, &params, a.trials, seed)? });
    }
    emit(&a.common, pretty(&value))
}

pub fn listdecode(a: &ListdecodeArgs) -> CliResult<()> {
    let f = field(&a.common)?;
    let seed = seed(&a.common, "listdecode")?;
    if a.s == 0 || !a.n.is_multiple_of(a.s) {
        return Err(Error::DivisibilityViolation(format!("s = {} must divide n = {}", a.s, a.n)).into());
    }
    let mut scan = Vec::new();
    for t in 1..a.s {
        let r = Rational64::new((a.s - t) as i64, a.s as i64);
        let params = LdpcEnsembleParams::new(&f, a.n, a.s, r)?;
        let base = seed.wrapping_add(1000 * t as u64);
        let mut sizes = (0..a.trials)
            .into_par_iter()
            .map(|i| max_list_size(&sample_ldpc(&params, base.wrapping_add(i)), a.alpha, None).map(|res| res.size))
            .collect::<ldpclab::Result<Vec<usize>>>()?;
        sizes.sort_unstable();
        let within = sizes.iter().filter(|&&l| l <= a.list_size).count();
        scan.push(json!({
            "rate": rational_to_f64(&r),
            "median": median(&sizes),
            "max": sizes.last().copied().unwrap_or(0),
            "fraction_within_list_size": within as f64 / sizes.len().max(1) as f64,
            "sizes": sizes,
        }));
    }
    let search = listdec_threshold_search(&f, a.alpha, a.list_size, a.support_cap, a.search_iterations, seed)?;
    let search = json!({
        "rstar": search.rstar,
        "evaluated": search.evaluated,
        "tau": search.tau.to_doc(),
        "report": search.report.to_json_value(),
    });
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => emit(
            &a.common,
            pretty(&json!({
                "q": f.q(), "n": a.n, "s": a.s, "alpha": a.alpha, "list_size": a.list_size, "seed": seed,
                "scan": scan, "search": search,
            })),
        ),
        Format::Csv => {
            let mut out = format!("# search {}\nrate,median,max,fraction_within_list_size\n", serde_json::to_string(&search).unwrap());
            for row in &scan {
                writeln!(out, "{},{},{},{}", row["rate"], row["median"], row["max"], row["fraction_within_list_size"]).unwrap();
            }
            emit(&a.common, out)
        }
    }
}
