use std::io::Write;

use serde_json::Value;

use crate::sweep::SweepTable;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Plain decimal with 12 significant digits, trailing zeros trimmed.
/// Never uses exponent notation or a locale-dependent separator.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_owned()
        } else if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

/// `x` rounded to 12 significant digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format_sig12(x).parse().unwrap_or(x)
}

/// Rounds every floating-point number in a JSON tree to 12 significant digits.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let mut tree = serde_json::to_value(value)?;
    round_json(&mut tree);
    let mut out = serde_json::to_string_pretty(&tree)?;
    out.push('\n');
    Ok(out)
}

/// Header is the swept parameter followed by the output columns; one row
/// per grid point.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![table.parameter.name().to_owned()];
    header.extend(table.outputs.iter().map(|o| o.name().to_owned()));
    w.write_record(&header)?;
    for row in &table.rows {
        let mut record = vec![format_sig12(row.x)];
        record.extend(row.values.iter().map(|&v| format_sig12(v)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(table, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
