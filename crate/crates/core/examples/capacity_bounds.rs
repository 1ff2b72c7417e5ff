//! Capacity report for a random state and for the two optimal states.

use asymcap::prelude::*;
use asymcap::states::random_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let dec = decompose(&catalog::representation("s3/regular")?, 1e-7, 42)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let states = [
        ("random", random_state(dec.dim(), &mut rng)),
        ("optimal ψ", optimal_state(&dec)),
        ("optimal covariant ψ*", optimal_covariant_state(&dec)),
        ("maximally mixed", DensityMatrix::maximally_mixed(dec.dim())),
    ];
    println!("c_sym = {:.6} bits, c_max = {:.6} bits", capacity_symmetric(&dec), capacity_max(&dec));
    for (name, rho) in &states {
        let r = capacity_report(&dec, rho);
        println!(
            "{name:<22} general {:>9.6}  covariant {:>9.6}  p = {:.3?}",
            r.lower_bound, r.covariant_lower_bound, r.p
        );
    }
    Ok(())
}
