//! Which builtin systems admit superdense coding under symmetric encoders?

use asymcap::prelude::*;

fn main() -> Result<()> {
    println!("{:<22} {:<48} {:>7} {:>7}  superdense", "fixture", "blocks (d_L,d_R)", "c_sym", "c_max");
    for id in catalog::FIXTURES {
        let dec = decompose(&catalog::representation(id)?, 1e-7, 42)?;
        let class = classify(&dec);
        let blocks: Vec<String> = dec.block_dims().iter().map(|(l, r)| format!("({l},{r})")).collect();
        println!(
            "{:<22} {:<48} {:>7.4} {:>7.4}  {}",
            id,
            blocks.join(" "),
            capacity_symmetric(&dec),
            capacity_max(&dec),
            if class.superdense_possible { "possible" } else { "-" }
        );
    }
    Ok(())
}
