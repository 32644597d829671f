// Input preparation: turn a cumulative JHU-style wide table into daily counts,
// then rescale a series so its peak is 100.

use epinowcast::ingest::{parse_jhu_wide_cumulative, write_long_daily};
use epinowcast::series::index_to_100;

const CONFIRMED: &str = "\
Province/State,Country/Region,Lat,Long,3/24/20,3/25/20,3/26/20,3/27/20,3/28/20
,Germany,51.0,9.0,32986,37323,43938,50871,57695
,France,46.2,2.2,22302,25233,29155,32964,37575
";

pub fn run_example() -> epinowcast::Result<()> {
    let (daily, warnings) = parse_jhu_wide_cumulative(CONFIRMED.as_bytes(), "Germany")?;
    for w in &warnings {
        eprintln!("cumulative count fell on {} by {}", w.date, -w.value);
    }
    println!("daily new cases:");
    write_long_daily(&daily, std::io::stdout().lock())?;

    println!("indexed to 100:");
    write_long_daily(&index_to_100(&daily)?, std::io::stdout().lock())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
