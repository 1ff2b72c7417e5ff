//! Isotypic decomposition of the regular representation of S3.

use asymcap::prelude::*;

fn main() -> Result<()> {
    let rep = catalog::representation("s3/regular")?;
    let dec = decompose(&rep, 1e-7, 42)?;

    for (q, block) in dec.blocks().iter().enumerate() {
        let chi: Vec<String> = block.character.iter().map(|z| format!("{:+.0}", z.re + 0.0).replace("-0", "+0")).collect();
        println!("block {q}: d_L = {}, d_R = {}, character [{}]", block.d_left, block.d_right, chi.join(" "));
    }
    println!("reconstruction residual  {:.2e}", dec.max_reconstruction_residual());
    println!("alignment residual       {:.2e}", dec.max_alignment_residual());
    println!("commutant dimension      {}", commutant_basis(&rep).len());
    println!("algebra dimension        {}", algebra_dimension(&rep));

    // Two copies: blocks of the tensor-power system, built from the single-copy data.
    let two = dec.tensor_power(2)?;
    println!("S3 regular ⊗2: {} blocks, dim {}", two.blocks().len(), two.dim());
    Ok(())
}
