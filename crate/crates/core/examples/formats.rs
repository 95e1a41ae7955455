//! Basic and binomial formats of `a_n`, plus the three ways of counting
//! primitive arrays by descents.

use binrec::combinatorics::{primitive_counts_by_enumeration, primitive_counts_dp, Caps};
use binrec::recursion::{basic_format, binomial_format_from};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(6);
    let basic = basic_format(n)?;
    let binom = binomial_format_from(&basic)?;

    println!("n = {n}");
    println!("{:>3} {:>12} {:>12}", "r", "xi_r", "P(n, r)");
    for (r, xi) in &basic.xi {
        let p = binom.prim.get(r).cloned().unwrap_or_default();
        println!("{r:>3} {xi:>12} {p:>12}");
    }
    println!("a_n(1) = {}", basic.total());

    let dp = primitive_counts_dp(n);
    let agree = dp == binom.prim;
    match primitive_counts_by_enumeration(n, &Caps::from_env()) {
        Ok(en) => println!(
            "dp = back-substitution: {agree}, enumeration agrees: {}",
            en == dp
        ),
        Err(e) => println!("dp = back-substitution: {agree}, enumeration skipped: {e}"),
    }
    Ok(())
}
