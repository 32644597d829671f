// Compares two vintages of the official series and measures how much of the
// final count for each day arrived late.

use chrono::NaiveDate;
use epinowcast::cli::default_window;
use epinowcast::ingest::load_fixture;
use epinowcast::revisions::{revision_profile, weekend_gap, RevisionShare, Snapshot, SnapshotStore};
use epinowcast::DailySeries;

fn day(m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, m, d).unwrap()
}

pub fn run_example() -> epinowcast::Result<()> {
    let start = day(3, 26);
    let older = DailySeries::from_values("RKI", start, &[2874.0, 2949.0, 1703.0, 3380.0])?;
    let newer = DailySeries::from_values("RKI", start, &[2874.0, 2949.0, 2212.0, 10000.0, 1500.0])?;
    let mut store = SnapshotStore::new();
    store.insert(Snapshot::new(day(3, 30), older)?)?;
    store.insert(Snapshot::new(day(3, 31), newer)?)?;

    for row in revision_profile(&store, day(3, 31), day(3, 30))? {
        match row.share {
            RevisionShare::Share(s) => println!("{}  {:>5.1}% reported late", row.reporting_date, 100.0 * s),
            RevisionShare::Undefined => println!("{}  undefined", row.reporting_date),
        }
    }

    let gap = weekend_gap(&load_fixture()?.rki, &default_window())?;
    println!(
        "weekend mean {:.0} vs weekday mean {:.0} ({:+.1}%)",
        gap.weekend_mean,
        gap.weekday_mean,
        100.0 * gap.ratio
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
