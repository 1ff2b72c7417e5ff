//! Twirling, the Schur form of symmetric states and the entropy split.

use asymcap::prelude::*;
use asymcap::states::random_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let dec = decompose(&catalog::representation("q8/regular")?, 1e-7, 42)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let rho = random_state(dec.dim(), &mut rng);
    let sigma = twirl(dec.rep(), &rho);
    println!("ρ symmetric? {}   twirl(ρ) symmetric? {}", is_symmetric(dec.rep(), &rho, 1e-9), is_symmetric(dec.rep(), &sigma, 1e-9));

    let form = symmetric_form(&dec, &sigma)?;
    let split: f64 = shannon(&form.r)
        + dec
            .blocks()
            .iter()
            .zip(&form.r)
            .zip(&form.sigma_blocks)
            .map(|((b, r), s)| r * ((b.d_left as f64).log2() + entropy(s)))
            .sum::<f64>();
    println!("block weights r = {:.4?}", form.r);
    println!("H(σ) = {:.10}  vs  H(r) + Σ r_q (log d_L + H(σ_q)) = {:.10}", entropy(&sigma), split);
    Ok(())
}
