use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::simulator::{derive_metrics, MetricSeries, Trace};

/// Formats `x` with 9 significant digits in the shortest of fixed or
/// scientific notation, like C's `%.9g`. NaN becomes an empty field.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, format_number)
}

fn finish<W: Write>(buf: csv::Writer<Vec<u8>>, mut dest: W) -> io::Result<usize> {
    let bytes = buf
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    dest.write_all(&bytes)?;
    dest.flush()?;
    Ok(bytes.len())
}

/// One row per agent turn: `t, agent, action, state_before, state_after,
/// root_value`, then one column per declared metric. Returns the byte count.
pub fn emit_trace_csv<W: Write>(trace: &Trace, dest: W) -> io::Result<usize> {
    let sys = &trace.system;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "t",
        "agent",
        "action",
        "state_before",
        "state_after",
        "root_value",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(trace.metrics.iter().map(|m| m.name(sys)));
    w.write_record(&header)?;
    for r in &trace.records {
        let mut row = vec![
            r.t.to_string(),
            sys.agent_name(r.agent).to_string(),
            sys.action_name(r.action).to_string(),
            sys.state_name(r.state_before).to_string(),
            sys.state_name(r.state_after).to_string(),
            opt(r.root_value),
        ];
        row.extend(trace.metrics.iter().map(|m| opt(m.record_value(r))));
        w.write_record(&row)?;
    }
    finish(w, dest)
}

/// Sampled metrics, one row per step boundary `t = 0..=horizon`.
pub fn emit_series_csv<W: Write>(series: &MetricSeries, dest: W) -> io::Result<usize> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(series.sampled.iter().map(|s| s.name.clone()));
    w.write_record(&header)?;
    let len = series.sampled.first().map_or(0, |s| s.values.len());
    for t in 0..len {
        let mut row = vec![t.to_string()];
        row.extend(series.sampled.iter().map(|s| format_number(s.values[t])));
        w.write_record(&row)?;
    }
    finish(w, dest)
}

/// Windowed metrics, one row per window.
pub fn emit_windows_csv<W: Write>(series: &MetricSeries, dest: W) -> io::Result<usize> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["start".to_string(), "end".to_string()];
    header.extend(series.windowed.iter().map(|s| s.name.clone()));
    w.write_record(&header)?;
    for (k, (start, end)) in series.windows.iter().enumerate() {
        let mut row = vec![start.to_string(), end.to_string()];
        row.extend(series.windowed.iter().map(|s| format_number(s.values[k])));
        w.write_record(&row)?;
    }
    finish(w, dest)
}

/// Writes `trace.csv`, `series.csv` and `windows.csv` into `dir`, creating it
/// if needed.
pub fn write_run_outputs(trace: &Trace, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let series = derive_metrics(trace);
    emit_trace_csv(trace, fs::File::create(dir.join("trace.csv"))?)?;
    emit_series_csv(&series, fs::File::create(dir.join("series.csv"))?)?;
    emit_windows_csv(&series, fs::File::create(dir.join("windows.csv"))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::format_number;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-0.5), "-0.5");
        assert_eq!(format_number(1.0 / 3.0), "0.333333333");
        assert_eq!(format_number(2.0 / 3.0), "0.666666667");
        assert_eq!(format_number(1.6), "1.6");
        assert_eq!(format_number(123456789.0), "123456789");
        assert_eq!(format_number(1234567890.0), "1.23456789e+09");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(0.00001234), "1.234e-05");
        assert_eq!(format_number(f64::NAN), "");
    }
}
