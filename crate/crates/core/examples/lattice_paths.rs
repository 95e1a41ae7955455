//! Monotone lattice paths below the diagonal, the reflection argument, and the
//! correspondence with nondecreasing patterns.

use binrec::combinatorics::{
    monotone_path_count, nondecreasing_pattern_path_bijection, reflection_check, Caps,
};
use binrec::recursion::catalan;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let caps = Caps::from_env();
    println!(
        "{:>3} {:>8} {:>8} {:>8} {:>10}",
        "n", "paths", "crossing", "catalan", "reflection"
    );
    for n in 1..=caps.paths.min(12) {
        let r = reflection_check(n, &caps)?;
        println!(
            "{n:>3} {:>8} {:>8} {:>8} {:>10}",
            monotone_path_count(n, &caps)?,
            r.crossing,
            catalan(n + 1)?,
            r.bijective
        );
    }
    println!();
    for n in 1..=caps.patterns.min(8) {
        let b = nondecreasing_pattern_path_bijection(n, &caps)?;
        println!(
            "n = {n}: {} nondecreasing patterns, {} distinct paths, round trip {}",
            b.patterns, b.distinct_paths, b.round_trip
        );
    }
    Ok(())
}
