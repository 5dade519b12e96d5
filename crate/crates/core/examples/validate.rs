//! Runs the numerical self-check suite and prints one line per check.

fn main() -> sanloc::Result<()> {
    let report = sanloc::validation::validate()?;
    println!("{report}");
    if !report.passed() {
        std::process::exit(2);
    }
    Ok(())
}
