use std::fs;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::Value;

use kbonacci::analysis::{check_m_properties, error_table, max_abs_error, rounding_threshold, DEFAULT_GRID};
use kbonacci::binet::{
    binet_round_from, coefficient_m, coefficient_m_complex, coefficient_sj, coefficient_spickerman_k3,
    start_precision,
};
use kbonacci::charpoly::{all_roots, dominant_root, root_bounds};
use kbonacci::enclosure::format_radius;
use kbonacci::exact::{first_index, kbonacci_matrix, kbonacci_range};
use kbonacci::{BigComplex, Dyadic, Error, RealEnclosure, ThresholdPreset};

use crate::output::OutputRecord;
use crate::{Failure, Global, Method, Preset, ThresholdArgs};

const ROOT_PRECISION: u32 = 128;
const ROOT_DECIMALS: usize = 20;
const ERROR_DECIMALS: usize = 3;
const PRESET_TERMS: i64 = 40;

/// A failed command, possibly with a partial record worth printing.
pub struct Outcome {
    pub record: Option<OutputRecord>,
    pub failure: Failure,
}

impl From<Failure> for Outcome {
    fn from(failure: Failure) -> Self {
        Outcome { record: None, failure }
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Failure::from(e).into()
    }
}

type CmdResult = Result<OutputRecord, Outcome>;

fn check_domain(k: usize, lo: i64) -> Result<(), Error> {
    let min = first_index(k);
    if lo < min {
        return Err(Error::IndexOutOfRange { k, n: lo, min });
    }
    Ok(())
}

fn range_text((lo, hi): (i64, i64)) -> String {
    format!("{lo}..{hi}")
}

fn big(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn sci(d: &Dyadic) -> String {
    format!("{:.3e}", d.to_f64())
}

pub fn gen(g: &Global, k: usize, (lo, hi): (i64, i64), method: Method) -> CmdResult {
    check_domain(k, lo)?;
    let method_name = match method {
        Method::Iter => "iter",
        Method::Matrix => "matrix",
        Method::Round => "round",
    };
    let columns: &[&str] = match method {
        Method::Round => &["n", "F_n", "precision_bits", "proof_gap"],
        _ => &["n", "F_n"],
    };
    let mut record = OutputRecord::new("gen", columns);
    record.param("k", k).param("range", range_text((lo, hi))).param("method", method_name);

    match method {
        Method::Iter => {
            for (n, v) in (lo..=hi).zip(kbonacci_range(k, lo, hi)?) {
                record.push(vec![n.into(), big(v)]);
            }
            record.certify("exact", true);
        }
        Method::Matrix => {
            let values: Result<Vec<_>, Error> = (lo..=hi).into_par_iter().map(|n| kbonacci_matrix(k, n)).collect();
            for (n, v) in (lo..=hi).zip(values?) {
                record.push(vec![n.into(), big(v)]);
            }
            record.certify("exact", true);
        }
        Method::Round => {
            let values: Result<Vec<_>, Error> = (lo..=hi)
                .into_par_iter()
                .map(|n| binet_round_from(k, n, g.precision.unwrap_or_else(|| start_precision(n))))
                .collect();
            let values = values?;
            let max_bits = values.iter().map(|c| c.precision_used).max().unwrap_or(0);
            for (n, c) in (lo..=hi).zip(values) {
                record.push(vec![n.into(), big(&c.value), c.precision_used.into(), sci(&c.proof_gap).into()]);
            }
            record.certify("certified", true).certify("max_precision_bits", max_bits);
        }
    }
    Ok(record)
}

pub fn roots(g: &Global, k: usize, all: bool) -> CmdResult {
    let prec = g.precision.unwrap_or(ROOT_PRECISION);
    let d = g.decimals.unwrap_or(ROOT_DECIMALS);
    let mut record = OutputRecord::new("roots", &["index", "re", "im", "modulus", "status"]);
    record.param("k", k).param("precision", prec).param("all", all);

    let alpha = dominant_root(k, prec)?;
    let bounds = root_bounds(k)?;
    record.push(vec![
        0.into(),
        format!("{alpha:.d$}").into(),
        "0".into(),
        format!("{alpha:.d$}").into(),
        "certified".into(),
    ]);
    if all {
        let set = all_roots(k, prec)?;
        for (i, z) in set.others.iter().enumerate() {
            let v = &z.value;
            record.push(vec![
                (i + 1).into(),
                v.re.to_decimal_string(d).into(),
                v.im.to_decimal_string(d).into(),
                v.abs().to_decimal_string(d).into(),
                format!("residual<={}", format_radius(&z.residual_bound)).into(),
            ]);
        }
    }
    let m = coefficient_m(k, &alpha)?;
    record
        .certify("enclosure_width", format_radius(&alpha.width()))
        .certify("lower_bound", bounds.lower.to_string())
        .certify("tight_lower_bound", bounds.tight_lower.to_string())
        .certify("upper_bound", bounds.upper.to_string())
        .certify("within_bounds", alpha.is_above_rational(&bounds.tight_lower) && alpha.is_below_rational(&bounds.upper))
        .certify("coefficient_m", format!("{m:.d$}"));
    Ok(record)
}

pub fn errors(g: &Global, k: usize, (lo, hi): (i64, i64)) -> CmdResult {
    check_domain(k, lo)?;
    let d = g.decimals.unwrap_or(ERROR_DECIMALS);
    let needed = u32::try_from(hi.max(0) + 64).unwrap_or(u32::MAX);
    let prec = g.precision.unwrap_or(ROOT_PRECISION).max(needed);
    let mut record = OutputRecord::new("errors", &["n", "F_n", "dominant_term", "abs_error"]);
    record.param("k", k).param("range", range_text((lo, hi))).param("decimals", d);

    let rows = error_table(k, lo, hi, prec)?;
    for row in &rows {
        record.push(vec![
            row.n.into(),
            big(&row.exact),
            row.approx.midpoint().to_decimal_string(d).into(),
            row.error.abs().midpoint().to_decimal_string(d).into(),
        ]);
    }
    record
        .certify("precision_bits", prec)
        .certify("max_abs_error", sci(&max_abs_error(&rows)))
        .certify("below_half", true);
    Ok(record)
}

struct OrderReport {
    values_checked: usize,
    value_problems: Vec<String>,
    problems: Vec<String>,
    coefficients_ok: bool,
    bounds_ok: bool,
    m_properties_ok: bool,
}

fn verify_values(k: usize, n_max: i64, start: Option<u32>) -> (usize, Vec<String>) {
    let lo = first_index(k);
    let exact = match kbonacci_range(k, lo, n_max) {
        Ok(v) => v,
        Err(e) => return (0, vec![format!("k={k}: {e}")]),
    };
    let problems: Vec<String> = exact
        .par_iter()
        .enumerate()
        .filter_map(|(i, want)| {
            let n = lo + i as i64;
            let rounded = binet_round_from(k, n, start.unwrap_or_else(|| start_precision(n)));
            let matrix = kbonacci_matrix(k, n);
            match (rounded, matrix) {
                (Ok(r), Ok(m)) if &r.value == want && &m == want => None,
                (Ok(r), Ok(m)) => Some(format!("k={k} n={n}: recurrence {want}, rounding {}, matrix {m}", r.value)),
                (Err(e), _) | (_, Err(e)) => Some(format!("k={k} n={n}: {e}")),
            }
        })
        .collect();
    (exact.len(), problems)
}

fn verify_coefficients(k: usize) -> Result<(), String> {
    let tol = RealEnclosure::from_rational(&BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 20)), 128);
    let tol = tol.lo();
    let set = all_roots(k, ROOT_PRECISION).map_err(|e| e.to_string())?;
    for (i, z) in set.values().iter().enumerate() {
        let sj = coefficient_sj(k, z).map_err(|e| e.to_string())?;
        let m = if i == 0 {
            BigComplex::real(coefficient_m(k, &set.dominant).map_err(|e| e.to_string())?.midpoint(), z.precision())
        } else {
            coefficient_m_complex(k, z).map_err(|e| e.to_string())?
        };
        if &sj.value.sub(&m).abs() >= tol {
            return Err(format!("k={k}: coefficient forms disagree at root {i}"));
        }
    }
    if k == 3 {
        let cubic = coefficient_spickerman_k3(&set).map_err(|e| e.to_string())?;
        let m = coefficient_m(3, &set.dominant).map_err(|e| e.to_string())?;
        if &(&cubic.midpoint() - &m.midpoint()).abs() >= tol {
            return Err("k=3: cubic coefficient form disagrees".into());
        }
    }
    Ok(())
}

fn verify_bounds(k: usize) -> Result<(), String> {
    let alpha = dominant_root(k, ROOT_PRECISION).map_err(|e| e.to_string())?;
    let b = root_bounds(k).map_err(|e| e.to_string())?;
    if !(alpha.is_above_rational(&b.lower) && alpha.is_above_rational(&b.tight_lower) && alpha.is_below_rational(&b.upper)) {
        return Err(format!("k={k}: dominant root not certified inside its bounds"));
    }
    let m = coefficient_m(k, &alpha).map_err(|e| e.to_string())?;
    let half = BigRational::new(1.into(), 2.into());
    if !(m.is_above_rational(&half) && m.is_below_rational(&BigRational::from_integer(1.into()))) {
        return Err(format!("k={k}: m(alpha) not certified inside (1/2, 1)"));
    }
    Ok(())
}

fn verify_order(k: usize, n_max: i64, start: Option<u32>) -> OrderReport {
    let (values_checked, value_problems) = verify_values(k, n_max, start);
    let mut problems = Vec::new();
    let mut record_check = |r: Result<(), String>| match r {
        Ok(()) => true,
        Err(e) => {
            problems.push(e);
            false
        }
    };
    let coefficients_ok = record_check(verify_coefficients(k));
    let bounds_ok = record_check(verify_bounds(k));
    let m_properties_ok = record_check(match check_m_properties(k, DEFAULT_GRID) {
        Ok(r) if r.passed() => Ok(()),
        Ok(r) => Err(format!("k={k}: coefficient function properties fail: {r:?}")),
        Err(e) => Err(format!("k={k}: {e}")),
    });
    OrderReport {
        values_checked,
        value_problems,
        problems,
        coefficients_ok,
        bounds_ok,
        m_properties_ok,
    }
}

pub fn verify(g: &Global, k_max: usize, n_max: i64) -> CmdResult {
    let mut record = OutputRecord::new(
        "verify",
        &["k", "values_checked", "value_mismatches", "coefficients", "bounds", "m_properties"],
    );
    record.param("k_max", k_max).param("n_max", n_max);

    let reports: Vec<OrderReport> = (2..=k_max).into_par_iter().map(|k| verify_order(k, n_max, g.precision)).collect();
    let pass = |ok: bool| if ok { "pass" } else { "fail" };
    let mut problems = Vec::new();
    let mut values = 0;
    let mut mismatches = 0;
    for (k, r) in (2..=k_max).zip(reports) {
        values += r.values_checked;
        mismatches += r.value_problems.len();
        record.push(vec![
            k.into(),
            r.values_checked.into(),
            r.value_problems.len().into(),
            pass(r.coefficients_ok).into(),
            pass(r.bounds_ok).into(),
            pass(r.m_properties_ok).into(),
        ]);
        problems.extend(r.value_problems);
        problems.extend(r.problems);
    }
    record
        .certify("orders", k_max - 1)
        .certify("values_checked", values)
        .certify("value_mismatches", mismatches)
        .certify("failures", problems.len())
        .certify("status", pass(problems.is_empty()));
    if problems.is_empty() {
        return Ok(record);
    }
    for p in &problems {
        eprintln!("FAIL {p}");
    }
    Err(Outcome {
        record: Some(record),
        failure: Failure::check(format!("{} check(s) failed", problems.len())),
    })
}

fn read_sequence(path: &std::path::Path) -> Result<Vec<BigInt>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v = t
            .parse::<BigInt>()
            .map_err(|_| Failure::usage(format!("{}:{}: `{t}` is not an integer", path.display(), i + 1)))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(Failure::usage(format!("{}: no values", path.display())));
    }
    Ok(values)
}

pub fn threshold(_g: &Global, args: &ThresholdArgs) -> CmdResult {
    let mut record = OutputRecord::new("threshold", &["n", "target", "rounded", "match"]);
    let (coefficient, base, mut target, n_start) = match args.preset {
        Some(preset) => {
            let n_max = args.n_max.unwrap_or(PRESET_TERMS);
            if n_max < 1 {
                return Err(Failure::usage("--n-max must be at least 1").into());
            }
            let (name, which) = match preset {
                Preset::ScaledFib => ("scaled-fib", ThresholdPreset::ScaledFibonacci),
                Preset::Gn => ("gn", ThresholdPreset::SecondOrderG),
            };
            record.param("preset", name);
            let p = which.problem(n_max as usize);
            (p.coefficient, p.base, p.target, p.n_start)
        }
        None => {
            let (Some(c), Some(b), Some(path)) = (&args.coeff, &args.base, &args.seq) else {
                return Err(Failure::usage("give --preset, or all of --coeff, --base and --seq").into());
            };
            record.param("seq", path.display().to_string());
            (c.clone(), b.clone(), read_sequence(path)?, args.n_start)
        }
    };
    if let Some(n_max) = args.n_max {
        let keep = usize::try_from(n_max - n_start + 1).unwrap_or(0);
        target.truncate(keep);
    }
    record
        .param("coeff", coefficient.to_string())
        .param("base", base.to_string())
        .param("n_start", n_start);

    let report = rounding_threshold(&coefficient, &base, &target, n_start)?;
    let mut power = base.powi(n_start).ok_or_else(|| Failure::usage("base is zero"))?;
    for (i, want) in report.target.iter().enumerate() {
        let n = n_start + i as i64;
        let rounded = coefficient.mul(&power)?.round_half_up();
        record.push(vec![n.into(), big(want), big(&rounded), (&rounded == want).into()]);
        power = power.mul(&base)?;
    }
    record
        .certify("threshold", report.threshold.map_or(Value::Null, Value::from))
        .certify("verified_up_to", report.verified_up_to)
        .certify("mismatches", report.mismatches.len());
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_message_names_the_bound() {
        let e = check_domain(2, -1).unwrap_err();
        assert!(e.to_string().contains("n >= 2 - k"), "{e}");
        assert!(check_domain(4, -2).is_ok());
    }

    #[test]
    fn small_sweep_passes() {
        let r = verify_order(3, 40, None);
        assert!(r.value_problems.is_empty() && r.problems.is_empty(), "{:?}", r.problems);
        assert_eq!(r.values_checked, 42);
        assert!(r.coefficients_ok && r.bounds_ok && r.m_properties_ok);
    }
}
