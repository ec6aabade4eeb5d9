//! Exact confluence certificate for the reduction system, plus what a broken
//! rule looks like.

use nctorus::coeff::ExactDomain;
use nctorus::params::derive_params;
use nctorus::parse::parse_expression;
use nctorus::rewrite::ReductionSystem;

fn main() -> nctorus::Result<()> {
    for (mu, theta) in [(2, (1, 5)), (3, (1, 3))] {
        let sys = ReductionSystem::new(ExactDomain::new(&derive_params(mu, theta)?)?);
        let report = sys.check_confluence()?;
        println!("mu = {mu}, theta = {}/{}: {} ambiguities", theta.0, theta.1, report.ambiguities.len());
        for a in &report.ambiguities {
            println!("  {:<8} {} / {}  -> {}", a.overlap, a.rule_a, a.rule_b, if a.pass { "resolves" } else { "FAILS" });
        }
        report.certify()?;
    }

    // Drop the constant term from the W W* rule and the system stops being confluent.
    let sys = ReductionSystem::new(ExactDomain::new(&derive_params(2, (1, 5))?)?);
    let broken = sys.with_rule_rhs("S7", parse_expression("z*L + zbar*L*", sys.domain())?)?;
    match broken.check_confluence()?.certify() {
        Ok(()) => println!("perturbed system unexpectedly confluent"),
        Err(e) => println!("perturbed system: {e}"),
    }
    Ok(())
}
