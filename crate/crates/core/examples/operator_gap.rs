//! Compares the discrete kernel with its continuous limit: the exact measure of
//! the set where they differ and the Hilbert-Schmidt norm of the difference.

use binrec::exact::format_rational;
use binrec::spectral::operator_gap;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>10} {:>14} {:>14}",
        "n", "measure", "hs_norm", "1/sqrt(n)"
    );
    for n in [2, 5, 10, 50, 100, 500] {
        let g = operator_gap(n)?;
        println!(
            "{n:>6} {:>10} {:>14.10} {:>14.10}",
            format_rational(&g.measure),
            g.hs_norm,
            g.hs_bound
        );
    }
    Ok(())
}
