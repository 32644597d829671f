// How far off is the JHU daily series if used as a drop-in for RKI?

use epinowcast::cli::default_window;
use epinowcast::ingest::load_fixture;
use epinowcast::nowcast::compare_raw;

pub fn run_example() -> epinowcast::Result<()> {
    let data = load_fixture()?;
    let cmp = compare_raw(&data.rki, &data.jhu, &default_window())?;
    println!("{:<12}{:>8}{:>8}{:>8}", "date", "RKI", "JHU", "APE");
    for row in &cmp.rows {
        println!("{:<12}{:>8}{:>8}{:>8.3}", row.date, row.truth, row.other, row.ape);
    }
    println!("MAPE over {} days: {:.3}", cmp.rows.len(), cmp.mape);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
