//! N x N representations at theta = p/N and their relation residuals.

use nctorus::reps::{casimir_residuals, lambda_reconstruct, relation_residuals, torus_rep};

fn main() -> nctorus::Result<()> {
    for (n, p, mu) in [(5, 1, 2.0), (8, 3, 4.0), (11, 1, 2.0)] {
        let rep = torus_rep(n, p, mu)?;
        let rel = relation_residuals(&rep);
        let cas = casimir_residuals(&rep);
        let (_, lam) = lambda_reconstruct(&rep)?;
        println!("N = {n}, p = {p}, mu = {mu}: max relation residual {:.2e}, Casimir {:.2e}, Lambda {:.2e}", rel.max_residual, cas.max_residual, lam);
        for (name, r) in &rel.residuals {
            println!("  {name:<40} {r:.2e}");
        }
    }
    Ok(())
}
