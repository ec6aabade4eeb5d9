use nctorus::coeff::{ExactDomain, FloatDomain};
use nctorus::params::derive_params;
use nctorus::parse::{format_poly, parse_expression};
use nctorus::rewrite::ReductionSystem;

fn main() -> nctorus::Result<()> {
    let params = derive_params(2, (1, 5))?;
    let exact = ReductionSystem::new(ExactDomain::new(&params)?);
    let float = ReductionSystem::new(FloatDomain::new(&params));

    for text in ["W W* L", "W* W", "L* W L", "W^2 W* + W* W^2", "(W W* - mu)^2", "q^(1/2) L W"] {
        let e = exact.normal_form(&parse_expression(text, exact.domain())?)?;
        let f = float.normal_form(&parse_expression(text, float.domain())?)?;
        println!("{text}");
        println!("  exact: {}", format_poly(&e, exact.domain()));
        println!("  float: {}", format_poly(&f, float.domain()));
    }
    Ok(())
}
