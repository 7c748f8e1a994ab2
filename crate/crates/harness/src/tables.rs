use crate::metrics::MetricsRow;
use crate::HarnessError;
use std::fmt::Write as _;
use std::path::Path;

/// Machine-diffable metric tables: `errors.csv` with the fixed header
/// `architecture,l_inf_final,l2_final,l_inf_all,l2_all`, one row per
/// architecture; `conservation.csv` with signed per-component final/total
/// columns; optionally a combined `metrics.json`.
pub fn write_tables(
    rows: &[&MetricsRow],
    components: &[&str],
    dir: &Path,
    json_too: bool,
) -> Result<(), HarnessError> {
    std::fs::write(dir.join("errors.csv"), errors_csv(rows))?;
    std::fs::write(dir.join("conservation.csv"), conservation_csv(rows, components))?;
    if json_too {
        std::fs::write(dir.join("metrics.json"), metrics_json(rows, components))?;
    }
    Ok(())
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn errors_csv(rows: &[&MetricsRow]) -> String {
    let mut s = String::from("architecture,l_inf_final,l2_final,l_inf_all,l2_all\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.architecture,
            f(r.l_inf_final),
            f(r.l2_final),
            f(r.l_inf_all),
            f(r.l2_all)
        );
    }
    s
}

pub fn conservation_csv(rows: &[&MetricsRow], components: &[&str]) -> String {
    let mut s = String::from("architecture");
    for c in components {
        let _ = write!(s, ",conservation_final_{c}");
    }
    for c in components {
        let _ = write!(s, ",conservation_total_{c}");
    }
    s.push('\n');
    for r in rows {
        let _ = write!(s, "{}", r.architecture);
        for v in &r.conservation_final {
            let _ = write!(s, ",{}", f(*v));
        }
        for v in &r.conservation_total {
            let _ = write!(s, ",{}", f(*v));
        }
        s.push('\n');
    }
    s
}

pub fn metrics_json(rows: &[&MetricsRow], components: &[&str]) -> String {
    let mut s = String::from("{\n  \"rows\": [\n");
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        let cf: Vec<String> = r.conservation_final.iter().map(|v| f(*v)).collect();
        let ct: Vec<String> = r.conservation_total.iter().map(|v| f(*v)).collect();
        let _ = write!(
            s,
            "    {{\"architecture\": \"{}\", \"l_inf_final\": {}, \"l2_final\": {}, \
             \"l_inf_all\": {}, \"l2_all\": {}, \"conservation_final\": [{}], \
             \"conservation_total\": [{}]}}",
            r.architecture,
            f(r.l_inf_final),
            f(r.l2_final),
            f(r.l_inf_all),
            f(r.l2_all),
            cf.join(","),
            ct.join(",")
        );
        s.push_str(if i + 1 < n { ",\n" } else { "\n" });
    }
    let _ = write!(
        s,
        "  ],\n  \"components\": [{}]\n}}",
        components
            .iter()
            .map(|c| format!("\"{c}\""))
            .collect::<Vec<_>>()
            .join(",")
    );
    s
}
