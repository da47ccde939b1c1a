//! Deterministic text output: JSON and CSV with every float written to 17
//! significant digits, so values round-trip exactly.

use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

/// `%.17g`: 17 significant digits, fixed notation for decimal exponents in
/// `[-5, 17)`, scientific otherwise, trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty-printed JSON (two-space indent, fields in declaration order).
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("f64");
                if x.is_finite() {
                    out.push_str(&format_float(x));
                } else {
                    out.push_str("null");
                }
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                indent(depth + 1, out);
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                indent(depth + 1, out);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, depth + 1, out);
            }
            out.push('\n');
            indent(depth, out);
            out.push('}');
        }
    }
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// A header line plus one line per row; cells must not contain commas.
pub fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.into_iter().collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0, "1"),
            (0.5, "0.5"),
            (2.0f64.sqrt(), "1.4142135623730951"),
            (1e-7, "9.9999999999999995e-08"),
            (1.5e-5, "1.5e-05"),
            (1e17, "1e+17"),
            (123456.0, "123456"),
            (-0.25, "-0.25"),
            (1e16, "10000000000000000"),
            (0.0001, "0.0001"),
        ];
        for (x, s) in cases {
            assert_eq!(format_float(x), s, "{x:e}");
        }
    }

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, 1e-300, 0.8665349718507698] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_layout() {
        #[derive(Serialize)]
        struct Row {
            z: f64,
            a: Vec<u32>,
            name: &'static str,
            missing: f64,
        }
        let s = to_json(&Row {
            z: 0.1,
            a: vec![1, 2],
            name: "x\"y",
            missing: f64::NAN,
        })
        .unwrap();
        assert_eq!(
            s,
            "{\n  \"z\": 0.10000000000000001,\n  \"a\": [\n    1,\n    2\n  ],\n  \"name\": \"x\\\"y\",\n  \"missing\": null\n}\n"
        );
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["z"].as_f64(), Some(0.1));
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&["a", "b"], [vec!["1".to_string(), "x".to_string()]]);
        assert_eq!(s, "a,b\n1,x\n");
    }
}
