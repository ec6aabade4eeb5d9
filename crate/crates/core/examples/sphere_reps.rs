use nctorus::reps::{fit_mu, relation_residuals, sphere_rep};

fn main() -> nctorus::Result<()> {
    for (n, theta) in [(2, 0.1), (4, 0.05), (4, 0.1), (6, 0.01)] {
        let rep = sphere_rep(n, theta)?;
        let r = relation_residuals(&rep);
        println!("N = {n}, theta = {theta}: mu = {:.16}, refit {:.16}, max residual {:.2e}", rep.spec.mu, fit_mu(&rep)?, r.max_residual);
    }
    Ok(())
}
