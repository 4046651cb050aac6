//! Fixed CSV schema for every dataset the tool emits: header row, comma
//! separator, scientific notation with 17 significant digits so repeated
//! runs are byte-identical and round-trip exactly.

use std::io::Write;

/// One long-format dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub series: String,
    pub t_or_param: f64,
    pub x: f64,
    pub value: f64,
}

/// 17 significant digits, scientific notation.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render_rows(rows: &[Row]) -> String {
    let mut out = String::with_capacity(rows.len() * 64 + 32);
    out.push_str("series,t_or_param,x,value\n");
    for r in rows {
        out.push_str(&r.series);
        out.push(',');
        out.push_str(&sig17(r.t_or_param));
        out.push(',');
        out.push_str(&sig17(r.x));
        out.push(',');
        out.push_str(&sig17(r.value));
        out.push('\n');
    }
    out
}

/// Moments table: one `(t, mean, variance)` row per snapshot.
pub fn render_moments(moments: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("t,mean,variance\n");
    for (t, mean, var) in moments {
        out.push_str(&format!("{},{},{}\n", sig17(*t), sig17(*mean), sig17(*var)));
    }
    out
}

pub fn write_file(path: &std::path::Path, content: &str) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(content.as_bytes())
}

/// Parse a rows CSV back; used by tests and the moments inspection path.
pub fn parse_rows(content: &str) -> Result<Vec<Row>, String> {
    let mut lines = content.lines();
    match lines.next() {
        Some("series,t_or_param,x,value") => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .map(|line| {
            let mut parts = line.split(',');
            let series = parts.next().ok_or("missing series")?.to_string();
            let mut num = |name: &str| -> Result<f64, String> {
                parts
                    .next()
                    .ok_or(format!("missing {name}"))?
                    .parse()
                    .map_err(|e| format!("bad {name}: {e}"))
            };
            Ok(Row {
                series,
                t_or_param: num("t_or_param")?,
                x: num("x")?,
                value: num("value")?,
            })
        })
        .collect()
}
