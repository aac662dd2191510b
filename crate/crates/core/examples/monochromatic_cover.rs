//! Minimum monochromatic rectangle covers and the protocol they induce.

use nof_workbench::cylinder::{self, CoverLimits, EntrySet};
use nof_workbench::function::{gen_latin, gen_random};

fn main() -> nof_workbench::Result<()> {
    let latin = gen_latin(2)?;
    let scope = EntrySet::full(2)?;
    let cover = cylinder::min_mono_cover(&latin, &scope, CoverLimits::default())?;
    print!("{}", cylinder::serialize_cover(cover.cover()));
    let run = cylinder::simulate_cover_protocol(&latin, &scope, cover.cover(), (1, 0))?;
    println!(
        "input (1, 0): transcript {:?} -> rectangle {} outputs {} after {} bits",
        run.transcript, run.member, run.output, run.cost
    );

    let a = gen_random(2, 4, 3, 5)?;
    let part = EntrySet::with_values(&a, &[0, 1])?;
    let out = cylinder::min_mono_cover(&a, &part, CoverLimits::default())?;
    println!(
        "cover of the entries valued 0 or 1 in a random 4x4 table: {} rectangles (exact: {}), cover_cc {}",
        out.cover().chi(),
        out.is_exact(),
        cylinder::cover_cc(out.cover())?
    );

    println!("simulation bound for k = 3, c_n = 2: {}", cylinder::det_sim_bound(3, 2)?);
    Ok(())
}
