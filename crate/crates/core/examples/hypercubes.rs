//! Splits the n-arrays into hypercube components, one per pattern.

use binrec::combinatorics::{decomposition_summary, hypercube_decomposition, Caps};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(5);
    let caps = Caps::from_env();

    for h in hypercube_decomposition(n, &caps)? {
        let status = match h.verify() {
            Ok(()) => "ok".to_string(),
            Err(e) => e,
        };
        println!(
            "{:<16} dim {} size {:>3} {status}",
            h.pattern.to_string(),
            h.dimension,
            h.size()
        );
    }

    let summary = decomposition_summary(n, &caps)?;
    println!();
    println!(
        "{} components, {} arrays",
        summary.components, summary.arrays
    );
    for (d, count) in &summary.by_dimension {
        println!("  dimension {d}: {count}");
    }
    Ok(())
}
