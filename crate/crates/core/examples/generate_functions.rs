//! Build base functions, lift them to boolean functions and round-trip the
//! `noffn` file format.

use nof_workbench::function::{self, base_of, gen_latin, gen_random, gen_trace, lift};
use nof_workbench::LiftKind;

fn main() -> nof_workbench::Result<()> {
    let latin = gen_latin(4)?;
    println!("cyclic Latin square of side 4:");
    for x in 0..4 {
        let row: Vec<String> = (0..4).map(|y| latin.at(x, y).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    let trace = gen_trace(2, 2, 2)?;
    let ones = trace.values().iter().filter(|&&v| v == 1).count();
    println!(
        "trace function over 2x2 matrices mod 2: side {}, {ones} of {} entries are 1",
        trace.side(),
        trace.len()
    );

    let a = gen_random(2, 3, 5, 42)?;
    for kind in [LiftKind::Unary, LiftKind::Binary, LiftKind::GreaterThan] {
        let f = lift(&a, kind)?;
        assert_eq!(base_of(&f)?, a);
        println!("{kind:?} lift: last coordinate has width {}", f.last_dim());
    }

    let text = function::serialize(&a);
    assert_eq!(function::parse(&text)?, a);
    print!("noffn file:\n{text}");
    Ok(())
}
