//! Steps the sequence `S_n` forward and prints the detected shape events.
//!
//!     cargo run --example pattern_dynamics -- -1/2 16

use binrec::dynamics::{s_iter, shape_report};
use binrec::exact::{format_rational, parse_rational, to_f64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x = parse_rational(&args.next().unwrap_or_else(|| "-1/2".into()))?;
    let n_max: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(12);

    for s in s_iter(&x)?.take(n_max.saturating_sub(1)) {
        let values: Vec<String> = s
            .values()
            .iter()
            .map(|v| format!("{:+.3e}", to_f64(v)))
            .collect();
        println!(
            "n = {:<3} total {:<14} [{}]",
            s.n(),
            format_rational(&s.total()),
            values.join(" ")
        );
        if let Ok(r) = shape_report(&s) {
            println!(
                "       sign change {:?}, extreme {:?}, inflection {:?}, zeros {}",
                r.sign_change_locus(),
                r.extreme_locus(),
                r.inflection_locus(),
                r.zero_count
            );
        }
    }
    Ok(())
}
