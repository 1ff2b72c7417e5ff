//! Two bits in one copy of a system whose symmetric states carry only one.

use asymcap::oneshot::pgm_decoder_uniform;
use asymcap::prelude::*;

fn main() -> Result<()> {
    let dec = decompose(&catalog::representation("q8/u_tensor_I")?, 1e-7, 42)?;
    let code = bell_codebook(&dec, 0)?;
    let residual = code.verify()?;

    let povm = pgm_decoder_uniform(&code)?;
    let err = simulate_error(&code, &povm)?;
    println!("{} covariant encoders (block residual {residual:.1e})", code.len());
    println!("one-shot rate {} bits, c_sym = {} bit", code.rate_bits(), capacity_symmetric(&dec));
    println!("PGM error: max {:.1e}, avg {:.1e}", err.max_error, err.avg_error);
    Ok(())
}
