//! Products of the T and S bases close with a half-integer power of q.

use nctorus::basis::{basis_product, cocycle_check, product_law_check, to_basis, BasisIndex, ProductLaw};
use nctorus::coeff::ExactDomain;
use nctorus::params::derive_params;
use nctorus::parse::{format_poly, parse_expression};
use nctorus::rewrite::ReductionSystem;

fn main() -> nctorus::Result<()> {
    let sys = ReductionSystem::new(ExactDomain::new(&derive_params(2, (1, 5))?)?);
    let d = sys.domain();

    let (a, b) = (BasisIndex::t(1, 2), BasisIndex::t(-1, 1));
    if let ProductLaw::Closed { index, .. } = basis_product(&a, &b, d) {
        println!("T(1,2) T(-1,1) = q^(-3/2) T({},{})", index.m1, index.m2);
    }

    let p = parse_expression("W L W* + L^2 W", d)?;
    let v = to_basis(&p, &sys)?;
    println!("W L W* + L^2 W in the basis:");
    for e in v.entries() {
        println!("  {:?}({},{}) -> {:+.6} {:+.6}i", e.kind, e.m1, e.m2, e.re, e.im);
    }
    println!("back to a polynomial: {}", format_poly(&v.to_poly(d), d));

    let report = product_law_check(&sys, 3)?;
    println!("{} pairs checked, max discrepancy {}, pass {}", report.pairs_checked, report.max_discrepancy, report.pass);
    println!("phase cocycle on [-3,3]: {}", cocycle_check(d, 3));
    Ok(())
}
