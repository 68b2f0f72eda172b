//! Deterministic JSON and CSV emission.
//!
//! serde_json prints floats in shortest-roundtrip form, which is not what a
//! byte-reproducibility contract wants; this tiny writer pins field order
//! and renders every float with 17 significant digits, so identical
//! invocations produce identical bytes.

use num_complex::Complex64;

/// 17-significant-digit scientific form; -0.0 is normalized to 0.0.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

pub fn fmt_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A JSON object with caller-fixed field order.
pub fn obj(fields: &[(&str, String)]) -> String {
    let body = fields
        .iter()
        .map(|(k, v)| format!("{}:{}", fmt_str(k), v))
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{body}}}")
}

pub fn arr(items: &[String]) -> String {
    format!("[{}]", items.join(","))
}

/// One CSV table: a header row plus data rows, floats at 17 digits.
pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        CsvTable {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        for row in &self.rows {
            out.push('\n');
            out.push_str(&row.join(","));
        }
        out
    }
}
