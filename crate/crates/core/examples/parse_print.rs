//! The canonical syntax round-trips through the parser in both backends.
//! A `*` right after a generator is its adjoint, so `W*L` reads as `W* L`.

use nctorus::coeff::{ExactDomain, FloatDomain};
use nctorus::params::derive_params;
use nctorus::parse::{format_poly, parse_expression};

fn main() -> nctorus::Result<()> {
    let params = derive_params(3, (1, 3))?;
    let exact = ExactDomain::new(&params)?;
    let float = FloatDomain::new(&params);
    for text in ["2*W L - q*L W", "W*L", "(mu + z*L + zbar*L*)^2", "q^(-1/2) L^-2 W*", "1.5*hbar*X", "i*W W*"] {
        match parse_expression(text, &exact) {
            Ok(p) => {
                let printed = format_poly(&p, &exact);
                let again = parse_expression(&printed, &exact)?;
                println!("{text:<28} -> {printed}   (round trip {})", again == p);
            }
            Err(e) => println!("{text:<28} -> {e}"),
        }
        if let Ok(p) = parse_expression(text, &float) {
            println!("{:<28}    float: {}", "", format_poly(&p, &float));
        }
    }
    Ok(())
}
