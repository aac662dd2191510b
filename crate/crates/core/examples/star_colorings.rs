//! A-stars, star-free colorings and the peeling procedure.

use nof_workbench::function::{gen_latin, gen_random};
use nof_workbench::stars::{self, ChiLimits, ChiOutcome};

fn main() -> nof_workbench::Result<()> {
    let latin = gen_latin(2)?;
    println!("stars of the 2x2 Latin square: {}", stars::enumerate_stars(&latin)?.len());

    let a = gen_random(2, 4, 3, 11)?;
    let greedy = stars::color_greedy(&a)?;
    println!("greedy coloring uses {} colors", greedy.colors_used());
    match stars::chi_star_exact(&a, ChiLimits::default())? {
        ChiOutcome::Exact { colors, witness } => {
            println!("star chromatic number: {colors}");
            assert!(stars::verify_star_free(&a, &witness)?.is_none());
        }
        other => println!("exact search stopped: {other:?}"),
    }

    let trace = stars::peel(&a, &greedy)?;
    for (i, it) in trace.iterations.iter().enumerate() {
        println!(
            "peel {}: value {} color {} witness {} entries, ratio {:.3}",
            i + 1,
            it.value,
            it.color,
            it.witness.len(),
            it.density_ratio
        );
    }
    println!("{} iterations <= {} colors", trace.len(), trace.colors_used);
    Ok(())
}
