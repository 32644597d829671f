// Sweeps lags 0 to 10 for the search and social-media series and writes the
// tidy table used for plotting to stdout.

use epinowcast::cli::default_window;
use epinowcast::ingest::load_fixture;
use epinowcast::lag_sweep::{emit_sweep_table, sweep, write_sweep_csv, SelectionRule, PLOT_METRICS};

pub fn run_example() -> epinowcast::Result<()> {
    let data = load_fixture()?;
    let window = default_window();
    let mut rows = Vec::new();
    for predictor in [&data.google, &data.twitter] {
        let result = sweep(&data.rki, predictor, &window, 10, SelectionRule::Combined)?;
        println!(
            "{}: adjusted R2 picks lag {}, MAE picks lag {}",
            result.predictor, result.best_by_adj_r2, result.best_by_mae
        );
        rows.extend(emit_sweep_table(&result, &PLOT_METRICS));
    }
    write_sweep_csv(&rows, std::io::stdout().lock())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
