//! Run the inequality harness on a small table and persist the result as a
//! versioned JSON report.

use nof_workbench::function::gen_random;
use nof_workbench::help::{self, ComplexityReport, HarnessLimits};
use nof_workbench::report::{self, Report};

fn main() -> nof_workbench::Result<()> {
    let a = gen_random(2, 3, 3, 21)?;
    let rec = help::harness_verify(&a, &HarnessLimits::default())?;
    for c in &rec.checks {
        println!("{:<24} {:?} vs {:?}: {:?}", c.name, c.lhs, c.rhs, c.verdict);
    }

    let path = std::env::temp_dir().join("nof_harness_report.json");
    let config = serde_json::json!({ "seed": 21, "side": 3, "colors": 3 });
    report::write_report(&Report::new(&config, &rec)?, &path)?;
    let back: ComplexityReport = report::load_report(&path)?.results_as()?;
    assert_eq!(back, rec);
    println!("report written to {}", path.display());
    Ok(())
}
