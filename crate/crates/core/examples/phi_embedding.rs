//! The map into the rotation algebra, tested on clock and shift matrices.

use nctorus::bridge::{
    clock_shift, independence_evidence, index_box, intertwine_check, phi_inverse_roundtrip, phi_relation_residuals,
    spectral_check,
};
use nctorus::coeff::FloatDomain;
use nctorus::params::derive_params;

fn main() -> nctorus::Result<()> {
    let params = derive_params(2, (1, 11))?;
    let pair = clock_shift(11, 1)?;
    let rel = phi_relation_residuals(&pair, &params)?;
    println!("relations under phi: max residual {:.2e}", rel.max_residual);
    for r in [
        spectral_check(&params, &pair, 64)?,
        intertwine_check(&pair, &params)?,
        phi_inverse_roundtrip(&pair, &params)?,
        independence_evidence(&FloatDomain::new(&params), &pair, &index_box(-2..=2, 0..=2))?,
    ] {
        println!("{:<13} {:.3e}  pass {}", r.check, r.residual_or_bound, r.pass);
    }
    Ok(())
}
