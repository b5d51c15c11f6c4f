//! Byte-stable JSON text: sorted keys, two-space indent, every float in
//! scientific notation with 17 significant digits.

use serde_json::Value;

pub fn to_stable_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(x)) => out.push_str(&float(x)),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, level);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], level + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_seventeen_digits() {
        let v = json!({"b": 0.1, "a": [1, -2.5e-300]});
        let s = to_stable_string(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [1, -2.5000000000000000e-300],\n  \"b\": 1.0000000000000001e-1\n}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn round_trip_is_exact() {
        for x in [
            std::f64::consts::PI / 7.0,
            1e-10,
            2.0 / 3.0,
            5e-324,
            -1.7976931348623157e308,
        ] {
            let s = to_stable_string(&json!([x, {"k": [x]}]));
            let back: Value = serde_json::from_str(&s).unwrap();
            assert_eq!(back[0].as_f64(), Some(x));
            assert_eq!(back[1]["k"][0].as_f64(), Some(x));
        }
    }
}
