use nctorus::basis::{casimir_reduce, lambda_reconstruction, CasimirVariant};
use nctorus::coeff::ExactDomain;
use nctorus::params::derive_params;
use nctorus::parse::format_poly;
use nctorus::rewrite::ReductionSystem;

fn main() -> nctorus::Result<()> {
    for (mu, theta) in [(2, (1, 5)), (3, (1, 3)), (5, (1, 7)), (2, (2, 9)), (4, (1, 6))] {
        let sys = ReductionSystem::new(ExactDomain::new(&derive_params(mu, theta)?)?);
        let d = sys.domain();
        let c = casimir_reduce(&sys, CasimirVariant::Corrected)?;
        let l = sys.normal_form(&lambda_reconstruction(d)?)?;
        println!("mu = {mu}, theta = {}/{}: C = {}, L rebuilt = {}", theta.0, theta.1, format_poly(&c, d), format_poly(&l, d));
    }
    // With 1/(4 hbar^4) in front of the commutator term the result is not central-one.
    let sys = ReductionSystem::new(ExactDomain::new(&derive_params(2, (1, 5))?)?);
    let bad = casimir_reduce(&sys, CasimirVariant::Printed)?;
    println!("hbar^4 normalization: {}", format_poly(&bad, sys.domain()));
    Ok(())
}
