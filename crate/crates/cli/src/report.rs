//! Report records: one line per check, numbers with 17 significant digits.

use std::collections::HashSet;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Result};
use serde_json::{Map, Number, Value};

use bianchi_klf::verify::{CheckRecord, Status};

use crate::config::Format;

/// `x` with 17 significant digits; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float parses"))
}

pub fn to_json(r: &CheckRecord) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), Value::String(r.id.clone()));
    m.insert("anchor".into(), Value::String(r.anchor.to_string()));
    let inputs = r.inputs.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    m.insert("inputs".into(), Value::Object(inputs));
    let values = r.values.iter().map(|(k, v)| (k.clone(), number(*v))).collect();
    m.insert("value".into(), Value::Object(values));
    m.insert("residual".into(), number(r.residual));
    m.insert("tol".into(), number(r.tol));
    m.insert("status".into(), Value::String(r.status.as_str().into()));
    m.insert("ms".into(), Value::from(r.ms as u64));
    Value::Object(m)
}

fn tsv_line(r: &CheckRecord) -> String {
    let inputs: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let values: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={v:.16e}")).collect();
    format!(
        "{}\t{}\t{}\t{:.16e}\t{:.16e}\t{}\t{}\t{}",
        r.id,
        r.anchor,
        r.status.as_str(),
        r.residual,
        r.tol,
        r.ms,
        inputs.join(";"),
        values.join(";")
    )
}

pub fn check_unique(records: &[CheckRecord]) -> Result<()> {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.id.as_str()) {
            bail!("duplicate check id {}", r.id);
        }
    }
    Ok(())
}

pub fn write(records: &[CheckRecord], format: Format, out: &mut impl Write) -> Result<()> {
    check_unique(records)?;
    if format == Format::Tsv {
        writeln!(out, "id\tanchor\tstatus\tresidual\ttol\tms\tinputs\tvalue")?;
    }
    for r in records {
        match format {
            Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&to_json(r))?)?,
            Format::Tsv => writeln!(out, "{}", tsv_line(r))?,
        }
    }
    Ok(())
}

pub fn summary(records: &[CheckRecord], out: &mut impl Write) -> Result<()> {
    let width = records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    writeln!(out, "{:<width$}  {:<11}  {:>10}  {:>8}  {:>7}", "id", "status", "residual", "tol", "ms")?;
    for r in records {
        writeln!(
            out,
            "{:<width$}  {:<11}  {:>10.3e}  {:>8.0e}  {:>7}",
            r.id,
            r.status.as_str(),
            r.residual,
            r.tol,
            r.ms
        )?;
    }
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    writeln!(
        out,
        "{} checks: {} pass, {} fail, {} report-only",
        records.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::ReportOnly)
    )?;
    Ok(())
}

/// Report-only records never fail a run.
pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, status: Status, residual: f64) -> CheckRecord {
        CheckRecord {
            id: id.into(),
            anchor: "test",
            inputs: vec![("s".into(), "2".into())],
            values: vec![("v".into(), 0.1)],
            residual,
            tol: 1e-6,
            status,
            ms: 3,
        }
    }

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(number(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(number(-2.0 / 3.0).to_string(), "-6.6666666666666663e-1");
        assert_eq!(number(f64::NAN), Value::Null);
        let back: f64 = number(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn records_have_the_fixed_fields() {
        let v = to_json(&rec("a", Status::Pass, 1e-9));
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["id", "anchor", "inputs", "value", "residual", "tol", "status", "ms"]);
        assert_eq!(v["status"], "pass");
    }

    #[test]
    fn report_only_never_fails_and_ids_are_unique() {
        let rs = vec![rec("a", Status::Pass, 0.0), rec("b", Status::ReportOnly, 5.0)];
        assert!(all_pass(&rs));
        assert!(!all_pass(&[rec("c", Status::Fail, 1.0)]));
        let mut buf = Vec::new();
        write(&rs, Format::Jsonl, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 2);
        assert!(write(&[rec("a", Status::Pass, 0.0), rec("a", Status::Pass, 0.0)], Format::Tsv, &mut Vec::new()).is_err());
    }
}
