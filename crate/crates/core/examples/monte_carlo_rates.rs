//! Random symmetric-unitary codes decoded with the pretty-good measurement.
//!
//! The numbers are descriptive: at these blocklengths nothing approaches the
//! asymptotic rates, but the gap between symmetric and asymmetric inputs shows.

use asymcap::prelude::*;

fn main() -> Result<()> {
    let dec = decompose(&catalog::representation("q8/u_tensor_I")?, 1e-7, 42)?;
    let psi = optimal_state(&dec);
    let mixed = DensityMatrix::maximally_mixed(dec.dim());

    println!("{:<16} {:>2} {:>5} {:>8} {:>10} {:>10}", "input", "n", "rate", "messages", "mean err", "max err");
    for (name, rho) in [("optimal ψ", &psi), ("symmetric I/4", &mixed)] {
        for (n, rate) in [(1, 1.0), (1, 2.0), (2, 1.0), (2, 1.5)] {
            let r = monte_carlo_rate_test(&dec, rho, n, rate, 50, 42, EncoderKind::SymmetricUnitary)?;
            println!(
                "{name:<16} {n:>2} {rate:>5.2} {:>8} {:>10.4} {:>10.4}",
                r.messages, r.mean_error, r.max_error
            );
        }
    }
    Ok(())
}
