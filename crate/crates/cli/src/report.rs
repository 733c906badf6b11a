//! JSON and CSV rendering of probe reports.

use bregkit_core::analysis::{ProbeReport, Witness};
use bregkit_core::extended::format_g17;
use serde_json::{Map, Number, Value};

pub const FIELDS: [&str; 7] = ["probe", "seed", "samples", "violations", "worst_margin", "witness", "pass"];

/// A float as a JSON number with 17 significant digits, or the string "inf"/"-inf".
pub fn number(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(format_g17(v).parse::<Number>().expect("g17 output is a JSON number"))
    } else if v > 0.0 {
        Value::String("inf".into())
    } else if v < 0.0 {
        Value::String("-inf".into())
    } else {
        Value::String("nan".into())
    }
}

fn witness_value(w: &Witness) -> Value {
    let mut m = Map::new();
    for (k, v) in &w.fields {
        m.insert(k.clone(), Value::Array(v.iter().map(|&c| number(c)).collect()));
    }
    Value::Object(m)
}

pub fn to_value(r: &ProbeReport) -> Value {
    let mut m = Map::new();
    m.insert("probe".into(), Value::String(r.probe.clone()));
    m.insert("seed".into(), Value::Number(r.seed.into()));
    m.insert("samples".into(), Value::Number(r.samples.into()));
    m.insert("violations".into(), Value::Number(r.violations.into()));
    m.insert("worst_margin".into(), number(r.worst_margin));
    m.insert("witness".into(), r.witness.as_ref().map_or(Value::Null, witness_value));
    m.insert("pass".into(), Value::Bool(r.pass));
    Value::Object(m)
}

pub fn to_json(reports: &[ProbeReport]) -> String {
    let arr = Value::Array(reports.iter().map(to_value).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("serializable");
    s.push('\n');
    s
}

/// One row per report under a fixed header. The witness column holds compact JSON.
pub fn to_csv(reports: &[ProbeReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(FIELDS).expect("in-memory write");
    for r in reports {
        let witness = r.witness.as_ref().map(|x| witness_value(x).to_string()).unwrap_or_default();
        w.write_record([
            r.probe.clone(),
            r.seed.to_string(),
            r.samples.to_string(),
            r.violations.to_string(),
            render(r.worst_margin),
            witness,
            r.pass.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flushed")).expect("utf-8")
}

/// Text form used in CSV and on the terminal.
pub fn render(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format_g17(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ProbeReport {
        ProbeReport {
            probe: "oracle/bgs".into(),
            seed: 42,
            samples: 3,
            violations: 1,
            worst_margin: -0.1,
            witness: Some(Witness::new(&[("x", &[1.0, 2.5])])),
            pass: false,
        }
    }

    #[test]
    fn json_fields_and_numbers() {
        let v = to_value(&sample());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut want: Vec<&str> = FIELDS.to_vec();
        want.sort();
        let mut got: Vec<&str> = keys.iter().map(|k| k.as_str()).collect();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(v["worst_margin"].to_string(), "-0.10000000000000001");
        let mut r = sample();
        r.worst_margin = f64::INFINITY;
        r.witness = None;
        let v = to_value(&r);
        assert_eq!(v["worst_margin"], Value::String("inf".into()));
        assert!(v["witness"].is_null());
    }

    #[test]
    fn csv_header_and_quoting() {
        let text = to_csv(&[sample()]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), FIELDS.join(","));
        let row = lines.next().unwrap();
        assert!(row.starts_with("oracle/bgs,42,3,1,-0.10000000000000001,\""), "{row}");
        assert!(row.ends_with(",false"));
    }
}
