//! Recomputes the catalog table and the optimal term breakdowns.

fn main() -> qineq::Result<()> {
    let report = qineq::harness::verify_tables()?;
    print!("{}", report.render());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
