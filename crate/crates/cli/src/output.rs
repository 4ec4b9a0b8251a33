//! JSON and CSV rendering of reports.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::Value;

use repzeta::Format;

pub fn rat(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => serde_json::to_string(v).unwrap(),
    }
}

fn table(rows: &[Value], prefix: &[(&str, String)]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = prefix.iter().map(|(k, _)| k.to_string()).collect();
    for r in rows {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
    }
    let body = rows
        .iter()
        .map(|r| {
            header
                .iter()
                .map(|h| match prefix.iter().find(|(k, _)| k == h) {
                    Some((_, v)) => v.clone(),
                    None => r.get(h).map(cell).unwrap_or_default(),
                })
                .collect()
        })
        .collect();
    (header, body)
}

fn csv(v: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(suites) = v.get("suites").and_then(Value::as_array) {
        w.write_record(["suite", "label", "passed", "detail"])
            .unwrap();
        for s in suites {
            let name = cell(&s["suite"]);
            for r in s["rows"].as_array().into_iter().flatten() {
                w.write_record([
                    name.clone(),
                    cell(&r["label"]),
                    cell(&r["passed"]),
                    cell(&r["detail"]),
                ])
                .unwrap();
            }
        }
    } else if let Some((key, rows)) = v.as_object().and_then(|m| {
        m.iter().find_map(|(k, x)| {
            x.as_array()
                .filter(|a| a.iter().all(Value::is_object) && !a.is_empty())
                .map(|a| (k, a))
        })
    }) {
        let scalars: Vec<(&str, String)> = v
            .as_object()
            .unwrap()
            .iter()
            .filter(|(k, x)| *k != key && !x.is_array() && !x.is_object())
            .map(|(k, x)| (k.as_str(), cell(x)))
            .collect();
        let (header, body) = table(rows, &scalars);
        w.write_record(&header).unwrap();
        for b in body {
            w.write_record(&b).unwrap();
        }
    } else {
        w.write_record(["key", "value"]).unwrap();
        for (k, x) in v.as_object().into_iter().flatten() {
            w.write_record([k.as_str(), &cell(x)]).unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn emit(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap() + "\n",
        Format::Csv => csv(v),
    }
}
