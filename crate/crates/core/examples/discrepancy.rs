//! Exact and sampled rectangle discrepancy, the discrepancy lower bound and
//! the trace-function trend table.

use nof_workbench::discrepancy::{self, TrendOptions};
use nof_workbench::function::{gen_latin, gen_random};

fn main() -> nof_workbench::Result<()> {
    let latin = gen_latin(2)?;
    let d = discrepancy::disc_rect_exact(&latin)?;
    println!(
        "disc(latin 2) = {} at rows {:#b}, cols {:#b}, value {}",
        d.value, d.witness.rows, d.witness.cols, d.witness_color
    );
    println!("lower bound: {:?}", discrepancy::bhk_bound(&d.value, 0, 2));

    let a = gen_random(2, 12, 3, 8)?;
    let exact = discrepancy::disc_rect_exact(&a)?;
    let sampled = discrepancy::disc_rect_sampled(&a, 500, 1)?;
    println!("12x12 random: exact {} >= sampled {}", exact.value, sampled.value);

    let rows = discrepancy::tmp_trend(&[2, 3], &[1, 2], 2, TrendOptions::default())?;
    print!("{}", discrepancy::format_trend_table(&rows));
    Ok(())
}
