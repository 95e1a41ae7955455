//! Tracks the angle between `s_n` and the dominant eigenspace, then runs the
//! tan-regime check on the tail.

use binrec::exact::parse_rational;
use binrec::spectral::{angle_trace, tan_regime_check, AngleTrace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x = parse_rational(&args.next().unwrap_or_else(|| "-1/2".into()))?;
    let n_hi: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(300);

    let trace = angle_trace(&x, 10, n_hi)?;
    for r in trace.records.iter().filter(|r| r.n % 25 == 0) {
        println!(
            "n = {:>4}  theta = {:.6}  tan = {:.6}",
            r.n, r.theta, r.tan_theta
        );
    }

    let tail = AngleTrace {
        x: trace.x,
        records: trace
            .records
            .iter()
            .filter(|r| 2 * r.n >= n_hi)
            .copied()
            .collect(),
    };
    let report = tan_regime_check(&tail, trace.x)?;
    println!(
        "threshold {:.1}, {} steps: {} relative, {} absolute ({} vacuous), {} violations",
        report.threshold,
        report.checked,
        report.relative_steps,
        report.absolute_steps,
        report.vacuous_steps,
        report.violations.len()
    );
    Ok(())
}
