//! Loading a representation from JSON: Z3 acting on a qutrit by a clock matrix,
//! tensored with a two-level memory.

use asymcap::prelude::*;
use asymcap::repcore::io::representation_from_json;

fn main() -> Result<()> {
    let clock = |k: usize| {
        let (s, c) = ((k as f64) * 2.0 * std::f64::consts::PI / 3.0).sin_cos();
        (c, s)
    };
    // diag(1, ω^k, ω^{2k}) ⊗ I_2, written out entry by entry as [re, im]
    let matrix = |g: usize| {
        let mut rows = Vec::new();
        for i in 0..6 {
            let mut row = Vec::new();
            for j in 0..6 {
                let (re, im) = if i == j { clock(g * (i / 2)) } else { (0.0, 0.0) };
                row.push(format!("[{re},{im}]"));
            }
            rows.push(format!("[{}]", row.join(",")));
        }
        format!("[{}]", rows.join(","))
    };
    let text = format!(
        r#"{{"order": 3, "cayley": [[0,1,2],[1,2,0],[2,0,1]], "generators": [1], "dim": 6,
            "matrices": [{}, {}, {}]}}"#,
        matrix(0),
        matrix(1),
        matrix(2)
    );

    let rep = representation_from_json(&text, 1e-9)?;
    let dec = decompose(&rep, 1e-7, 42)?;
    let class = classify(&dec);
    println!("blocks {:?}", dec.block_dims());
    println!("c_sym = {:.4}, c_max = {:.4}", capacity_symmetric(&dec), capacity_max(&dec));
    println!("superdense possible: {} (abelian: {})", class.superdense_possible, class.abelian);
    Ok(())
}
