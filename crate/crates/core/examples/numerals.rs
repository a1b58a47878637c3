//! Parsing, anchoring and printing base-60 numerals.
//!
//! `cargo run --example numerals`

use susa::numeral::{self, anchor, parse, ExactNumber, Numeral};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // ';' fixes the place value
    let half = numeral::sexagesimal("0;30", 0)?;
    println!("0;30 = {}", half.to_ratio_string());

    // without it the digits float; the reader supplies the scale
    let Numeral::Floating(digits) = parse("26,40")? else {
        unreachable!("no ';' means floating")
    };
    for k in [-2, 0, 1] {
        let v = anchor(&digits, k);
        println!("26,40 with last digit at 60^{k:<2} = {} = {}", numeral::format(&v)?, v.to_ratio_string());
    }

    let a = numeral::sexagesimal("0;30,50", 0)?;
    let b = numeral::sexagesimal("0;27,30", 0)?;
    println!("0;30,50 - 0;27,30 = {}", a.sub(&b));
    println!("(0;30,50)^2 = {}", a.square());

    // 1/7 has no finite expansion; Display falls back to p/q
    let seventh = ExactNumber::ratio(1, 7);
    println!("1/7 terminates? {}  shown as {seventh}", seventh.is_terminating());
    assert!(numeral::format(&seventh).is_err());

    match parse("1,60") {
        Err(e) => println!("1,60 rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
