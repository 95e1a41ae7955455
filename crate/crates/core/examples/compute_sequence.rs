//! Prints `a_n` at a rational `x`, exactly and as a float.
//!
//!     cargo run --example compute_sequence -- -1/2 20

use binrec::exact::{format_rational, parse_rational, to_f64};
use binrec::recursion::{a_polynomials, a_sequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x = parse_rational(&args.next().unwrap_or_else(|| "1".into()))?;
    let n_max: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10);

    for (i, a) in a_sequence(&x, n_max)?.iter().enumerate() {
        println!(
            "a_{:<3} = {:>24}  ({:e})",
            i + 1,
            format_rational(a),
            to_f64(a)
        );
    }

    // the same values come out of the polynomial recursion
    println!();
    for (i, p) in a_polynomials(n_max.min(8)).iter().enumerate() {
        println!("a_{}(x) = {p}", i + 1);
    }
    Ok(())
}
