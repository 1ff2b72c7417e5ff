//! The orthogonal symmetric codebook achieving log Σ_q d_R.

use asymcap::prelude::*;

fn main() -> Result<()> {
    for id in ["z2/sign", "s3/regular", "q8/u", "s4/natural"] {
        let dec = decompose(&catalog::representation(id)?, 1e-7, 42)?;
        let code = symmetric_codebook(&dec);
        let err = simulate_error(&code, &projective_decoder(&code)?)?;
        let ensemble: Vec<_> = code.states.iter().map(|s| (1.0 / code.len() as f64, s.clone())).collect();
        println!(
            "{id:<12} {} states, χ = {:.6}, c_sym = {:.6}, decoding error {:.1e}",
            code.len(),
            holevo_quantity(&ensemble)?,
            capacity_symmetric(&dec),
            err.max_error
        );
    }
    Ok(())
}
