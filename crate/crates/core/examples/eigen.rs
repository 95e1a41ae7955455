//! Eigenvalues of the limiting operator and the residual of each eigenpair.

use binrec::spectral::{dominant_moduli, eigen_residual, eigenpairs, log_ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(-0.5);
    let target = x / (1.0 + x);
    println!("x = {x}, log|x/y| = {:.6}", log_ratio(x));
    for pair in eigenpairs(x, -3..=3)? {
        let err = ((-1.0 / pair.lambda).exp() - target).norm();
        println!(
            "m = {:>2}  lambda = {:+.6} {:+.6}i  |lambda| = {:.6}  exp err {err:.1e}  residual {:.1e}",
            pair.m,
            pair.lambda.re,
            pair.lambda.im,
            pair.modulus(),
            eigen_residual(x, &pair, 10_000)
        );
    }
    let (lambda, mu) = dominant_moduli(x)?;
    println!("dominant modulus {lambda:.6}, next {mu:.6}");
    Ok(())
}
