// Fits the three reference models on the embedded dataset and prints them
// as regression tables.

use epinowcast::cli::default_window;
use epinowcast::ingest::load_fixture;
use epinowcast::nowcast::{fit_nowcast, NowcastSpec};
use epinowcast::report::FitReport;

pub fn run_example() -> epinowcast::Result<()> {
    let data = load_fixture()?;
    let window = default_window();
    for (predictor, lag) in [(&data.jhu, 0), (&data.google, 3), (&data.twitter, 3)] {
        let model = fit_nowcast(&NowcastSpec::new(&data.rki, predictor, lag, window))?;
        println!("{}", FitReport::from_model(&model).render_text());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
