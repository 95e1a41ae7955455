//! Fits the exponential growth rate of `|a_n| / (n-1)!` and the norm ratio of
//! the normalized sequence.

use binrec::exact::parse_rational;
use binrec::spectral::{growth_rate, norm_ratio_trace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x = parse_rational(&args.next().unwrap_or_else(|| "-1/2".into()))?;
    let (lo, hi) = (150, 300);

    let fit = growth_rate(&x, lo, hi)?;
    println!(
        "slope over [{lo}, {hi}]: {:.6} from {} points",
        fit.slope, fit.points
    );
    println!(
        "predicted: {:.6} (relative error {:.2e})",
        fit.predicted, fit.relative_error
    );

    let ratios = norm_ratio_trace(&x, 20, hi)?;
    let (n, min) =
        ratios.iter().copied().fold(
            (0, f64::INFINITY),
            |acc, r| if r.1 < acc.1 { r } else { acc },
        );
    println!("min ||s_n||_1 / ||s_n||_inf = {min:.6} at n = {n}");
    Ok(())
}
