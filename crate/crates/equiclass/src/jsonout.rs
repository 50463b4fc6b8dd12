//! Deterministic JSON rendering: object keys sorted, floats rounded to 12
//! significant digits, no dependence on hash ordering anywhere. Output for
//! a fixed input must be byte-identical across runs, so everything routes
//! through one value type with a canonical renderer.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// A JSON value with sorted object keys.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(BTreeMap<String, Json>),
}

impl Json {
    pub fn object(pairs: Vec<(&str, Json)>) -> Json {
        Json::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn array<I: IntoIterator<Item = Json>>(items: I) -> Json {
        Json::Array(items.into_iter().collect())
    }

    /// A complex number as a two-element [re, im] array.
    pub fn complex(z: Complex64) -> Json {
        Json::Array(vec![Json::Float(z.re), Json::Float(z.im)])
    }

    pub fn usize(n: usize) -> Json {
        Json::Int(n as i64)
    }

    pub fn usizes(items: &[usize]) -> Json {
        Json::Array(items.iter().map(|&n| Json::usize(n)).collect())
    }

    /// Compact canonical rendering with a space after `:` and `,`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(n) => out.push_str(&n.to_string()),
            Json::Float(x) => out.push_str(&format_float(*x)),
            Json::Str(s) => write_escaped(s, out),
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_escaped(k, out);
                    out.push_str(": ");
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

impl From<bool> for Json {
    fn from(b: bool) -> Json {
        Json::Bool(b)
    }
}

impl From<i64> for Json {
    fn from(n: i64) -> Json {
        Json::Int(n)
    }
}

impl From<usize> for Json {
    fn from(n: usize) -> Json {
        Json::Int(n as i64)
    }
}

impl From<f64> for Json {
    fn from(x: f64) -> Json {
        Json::Float(x)
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Json {
        Json::Str(s.to_string())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Json {
        Json::Str(s)
    }
}

/// Round to 12 significant digits, then print the shortest representation
/// of the rounded value (never more digits than the rounding kept).
fn format_float(x: f64) -> String {
    assert!(x.is_finite(), "refusing to serialize a non-finite float");
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float reparses");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        let v = Json::object(vec![
            ("zebra", Json::Int(1)),
            ("alpha", Json::Int(2)),
            ("mid", Json::Bool(false)),
        ]);
        assert_eq!(v.render(), r#"{"alpha": 2, "mid": false, "zebra": 1}"#);
    }

    #[test]
    fn float_formatting() {
        assert_eq!(Json::Float(0.5).render(), "0.5");
        assert_eq!(Json::Float(3.0).render(), "3");
        assert_eq!(Json::Float(0.0).render(), "0");
        assert_eq!(Json::Float(-0.0).render(), "0");
        // Rounded to 12 significant digits.
        assert_eq!(Json::Float(1.0 / 3.0).render(), "0.333333333333");
        assert_eq!(Json::Float(2.0f64.sqrt()).render(), "1.41421356237");
        assert_eq!(
            Json::Float(-1.23456789012345e-7).render(),
            "-0.000000123456789012"
        );
        // Addition noise washes out at 12 digits.
        assert_eq!(Json::Float(0.1 + 0.2).render(), "0.3");
    }

    #[test]
    fn arrays_and_nesting() {
        let v = Json::object(vec![
            ("classes", Json::Int(3)),
            (
                "values",
                Json::array(vec![Json::complex(Complex64::new(1.0, -0.5)), Json::Null]),
            ),
        ]);
        assert_eq!(
            v.render(),
            r#"{"classes": 3, "values": [[1, -0.5], null]}"#
        );
    }

    #[test]
    fn string_escapes() {
        let v = Json::Str("a\"b\\c\nd\u{1}".to_string());
        assert_eq!(v.render(), "\"a\\\"b\\\\c\\nd\\u0001\"");
    }
}
