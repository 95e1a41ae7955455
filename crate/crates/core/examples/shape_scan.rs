//! Checks the shape rules over a range of n and lists every violation.

use binrec::dynamics::{shape_scan_range, ShapeRule};
use binrec::exact::parse_rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x = parse_rational(&args.next().unwrap_or_else(|| "-1/2".into()))?;
    let n_hi: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);

    let scan = shape_scan_range(&x, 6, n_hi)?;
    for rule in [
        ShapeRule::ShA,
        ShapeRule::ShB,
        ShapeRule::ShC,
        ShapeRule::ShD,
        ShapeRule::ShE,
    ] {
        let bad: Vec<usize> = scan.violations_of(rule).map(|v| v.n).collect();
        println!(
            "{rule}: {}",
            if bad.is_empty() {
                "holds".to_string()
            } else {
                format!("fails at {bad:?}")
            }
        );
    }
    println!(
        "ShE hypotheses met at {} of {} indices",
        scan.she_tested,
        scan.reports.len()
    );
    for v in scan.violations.iter().take(10) {
        println!("  n = {} {}: {}", v.n, v.rule, v.detail);
    }
    Ok(())
}
