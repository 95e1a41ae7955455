//! Lists the n-signatures with their array counts and checks the counts
//! against the integer sequence computed by recursion.

use binrec::combinatorics::{count_arrays, enumerate_signatures};
use binrec::recursion::nzc_sequence;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(6);
    for s in enumerate_signatures(n)? {
        println!("{s:<20} arrays = {}", count_arrays(&s));
    }

    let seq = nzc_sequence(20)?;
    let counts: Vec<usize> = (1..=20)
        .map(|m| enumerate_signatures(m).map(|s| s.len()))
        .collect::<Result<_, _>>()?;
    println!();
    println!("signature counts: {counts:?}");
    println!(
        "match recursion:  {}",
        counts.iter().zip(&seq).all(|(c, s)| *s == (*c).into())
    );
    Ok(())
}
