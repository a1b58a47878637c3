//! Completing the square, the scribe's way and the modern way.
//!
//! `cargo run --example complete_square`

use susa::equations::{complete_square, Mode, Quadratic};
use susa::numeral::ExactNumber;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 20z^2 + 20z = 10,0 (SMT 8, second problem)
    let q = Quadratic::new(20.into(), 20.into(), 600.into())?;
    for mode in [Mode::Scribal, Mode::Modern] {
        let sol = complete_square(&q, mode)?;
        println!("{q}  [{mode}]");
        for e in &sol.trace.entries {
            println!("  {e}");
        }
        for r in &sol.roots {
            println!("  root {} ({:?}), residual {}", r.value, r.branch, q.residual(&r.value));
        }
    }

    // (0;6,40)x^2 - (1;1,40)x = -0;29,10 has two positive roots
    let q = Quadratic::new(ExactNumber::ratio(1, 9), ExactNumber::ratio(-37, 36), ExactNumber::ratio(-35, 72))?;
    let sol = complete_square(&q, Mode::Scribal)?;
    let roots: Vec<String> = sol.values().iter().map(ToString::to_string).collect();
    println!("{q}: {}", roots.join(", "));

    // x^2 = 2 has no rational root
    let q = Quadratic::new(1.into(), 0.into(), 2.into())?;
    println!("{q}: {}", complete_square(&q, Mode::Modern).unwrap_err());
    Ok(())
}
