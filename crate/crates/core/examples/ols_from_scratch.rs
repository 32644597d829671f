// The OLS engine on its own: any response, any named regressors.

use epinowcast::dist::t_two_tailed_p;
use epinowcast::ols::{fit, DesignMatrix};

pub fn run_example() -> epinowcast::Result<()> {
    let x: Vec<f64> = (0..12).map(f64::from).collect();
    let noise = [0.3, -0.2, 0.1, 0.4, -0.5, 0.0, 0.2, -0.1, -0.3, 0.5, 0.1, -0.2];
    let y: Vec<f64> = x.iter().zip(noise).map(|(x, e)| 2.0 + 0.5 * x + e).collect();

    let design = DesignMatrix::new(y, vec![("x".to_string(), x)], true)?;
    let ols = fit(&design)?;
    for c in &ols.coefficients {
        println!(
            "{:<10} {:>8.4} (se {:.4}, t {:>6.2}, p {:.4}) {}",
            c.name,
            c.estimate,
            c.std_error,
            c.t_stat,
            c.p_value,
            c.stars()
        );
    }
    println!(
        "R2 {:.4}, adj R2 {:.4}, F {:.2} on ({}, {}) df",
        ols.r_squared, ols.adj_r_squared, ols.f_statistic.value, ols.f_statistic.df1, ols.f_statistic.df2
    );
    println!("two-tailed p for t = 2.0 with 10 df: {:.4}", t_two_tailed_p(2.0, 10));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
