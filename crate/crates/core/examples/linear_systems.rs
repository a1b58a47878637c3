//! Exact Gaussian elimination.
//!
//! `cargo run --example linear_systems`

use susa::equations::{gaussian_eliminate, LinearSystem, SolutionSet};

fn show(set: &SolutionSet) -> String {
    let v = |xs: &[susa::numeral::ExactNumber]| {
        xs.iter().map(|x| x.to_ratio_string()).collect::<Vec<_>>().join(", ")
    };
    match set {
        SolutionSet::Unique(xs) => format!("({})", v(xs)),
        SolutionSet::Parametric { particular, basis } => {
            let dirs: Vec<String> = basis.iter().map(|d| format!("t({})", v(d))).collect();
            format!("({}) + {}", v(particular), dirs.join(" + "))
        }
        SolutionSet::Inconsistent => "no solution".into(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square = LinearSystem::from_integers(&[&[2, -1, 3], &[1, 1, 2], &[-1, 2, 1]], &[2, 1, 0])?;
    println!("3x3: {}", show(&gaussian_eliminate(&square)));

    let line = LinearSystem::from_integers(&[&[1, 1, -1], &[1, -1, 1]], &[1, 1])?;
    println!("2x3: {}", show(&gaussian_eliminate(&line)));

    let clash = LinearSystem::from_integers(&[&[1, 1], &[2, 2]], &[1, 3])?;
    println!("clash: {}", show(&gaussian_eliminate(&clash)));
    Ok(())
}
