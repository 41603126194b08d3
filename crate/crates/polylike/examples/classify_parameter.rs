//! Classifies parameters and measures the space around the critical value
//! at every level, via the same pipeline as `polylike analyze`.
//!
//! `cargo run --release --example classify_parameter [-- <degree> <c1>]`

use polylike::reports::{cmd_analyze, RunConfig};

fn main() -> polylike::error::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let configs = match args.as_slice() {
        [l, c] => vec![RunConfig {
            degree: l.parse().expect("degree"),
            c1: Some(c.parse().expect("c1")),
            ..Default::default()
        }],
        _ => vec![
            RunConfig { c1: Some(0.5), ..Default::default() },
            RunConfig { c1: Some(-0.1), ..Default::default() },
            RunConfig { param_query: Some("cascade:5".into()), ..Default::default() },
            RunConfig { param_query: Some("fibonacci:8".into()), ..Default::default() },
            RunConfig { degree: 4, param_query: Some("fibonacci:8".into()), ..Default::default() },
        ],
    };
    for cfg in configs {
        let report = cmd_analyze(&cfg)?.report;
        let c = report.parameter.map(|q| q.value).unwrap_or(f64::NAN);
        println!("l = {}, c1 = {c:.12}", cfg.degree);
        for s in &report.sections {
            let notes: Vec<String> = s.notes.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            let ratio = s.values.get("space_ratio").map(|q| format!("  space {:.4}", q.value)).unwrap_or_default();
            let bound = s.values.get("space_bound").map(|q| format!(" (bound {:.4})", q.value)).unwrap_or_default();
            println!("  {:<16} {}{ratio}{bound}", s.name, notes.join(", "));
            if let Some(e) = &s.error {
                println!("  {:<16} error: {e}", "");
            }
        }
        println!("  all checks passed: {}\n", report.all_passed());
    }
    Ok(())
}
