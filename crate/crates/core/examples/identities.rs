//! The algebraic identities behind SMT 17 and SMT 19.
//!
//! `cargo run --example identities`

use susa::corpus::{identity_check, Identity};
use susa::numeral::ExactNumber;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pairs = [
        (ExactNumber::ratio(2, 3), ExactNumber::ratio(1, 3)),
        (ExactNumber::from(40), ExactNumber::from(30)),
        (ExactNumber::ratio(-7, 12), ExactNumber::ratio(5, 9)),
    ];
    for id in Identity::ALL {
        for (x, y) in &pairs {
            let (l, r) = id.sides(x, y);
            println!("{id:<18} x = {x}, y = {y}: {l} = {r}");
            assert!(identity_check(id, x, y));
        }
    }
    Ok(())
}
