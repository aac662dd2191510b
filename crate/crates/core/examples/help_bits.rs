//! Two-player deterministic complexity, help-bit partitions and the
//! closed-form bound evaluators.

use nof_workbench::cylinder::EntrySet;
use nof_workbench::function::{gen_latin, gen_random};
use nof_workbench::help::{self, CostMode, EvaluatorInputs, PartLimits};

fn main() -> nof_workbench::Result<()> {
    let latin = gen_latin(3)?;
    let full = EntrySet::full(3)?;
    println!("D(latin 3) = {:?}", help::det_cc_exact_2p(&latin, &full, 32)?);

    let limits = PartLimits::default();
    for b in 0..=1 {
        for mode in [CostMode::Det, CostMode::Nondet] {
            let best = help::best_partition_micro(&latin, b, mode, &limits)?;
            println!(
                "b = {b}, {mode:?}: cost {} with {} parts (exhaustive: {})",
                best.cost,
                best.partition.parts().len(),
                best.exhaustive
            );
        }
    }

    let a = gen_random(2, 4, 4, 3)?;
    let buckets = help::value_bucket_partition(&a, 1)?;
    println!(
        "value buckets for b = 1 on a 4-valued table: det cost {}",
        help::partition_cost(&a, &buckets, CostMode::Det, &limits)?
    );

    println!("pad (h = 2, c = 5) to b = 4: {:?}", help::pad_help_bits(2, 5, 4)?);
    for nb in help::bound_evaluators(&EvaluatorInputs {
        k: 3.0,
        colors: 4.0,
        b: 1.0,
        dh: Some(3.0),
        nh: Some(2.0),
        c: Some(1.0),
    }) {
        println!("{:<22} {:?}", nb.name, nb.value);
    }
    Ok(())
}
