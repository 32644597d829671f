// Saves a fitted lag-3 search model as JSON, reloads it and predicts the
// official count for the three days after the last search observation.

use chrono::Duration;
use epinowcast::cli::default_window;
use epinowcast::ingest::load_fixture;
use epinowcast::nowcast::{fit_nowcast, NowcastSpec};
use epinowcast::report::FitReport;

pub fn run_example() -> epinowcast::Result<()> {
    let data = load_fixture()?;
    let model = fit_nowcast(&NowcastSpec::new(&data.rki, &data.google, 3, default_window()))?;
    let json = FitReport::from_model(&model).to_json();

    let coefficients = FitReport::from_json(&json)?.coefficients()?;
    let (last, _) = data.google.last().expect("search series is not empty");
    for offset in (0..3).rev() {
        let source_date = last - Duration::days(offset);
        let value = data.google.get(source_date).expect("consecutive days");
        let target_date = source_date + Duration::days(3);
        println!(
            "{target_date}: {:.0} expected (search index {value} on {source_date})",
            coefficients.predict(value, target_date)?
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
