//! Functions on R x Z_n as a right module, with a constant-curvature connection.

use nctorus::module::{
    act, curvature_check, leibniz_residual, relation_checks, sample_points, DerivationVariant, ExtFactor,
    ModuleElement, ModuleParams,
};
use nctorus::params::derive_params;
use nctorus::word::Letter;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nctorus::Result<()> {
    let mp = ModuleParams::new(1, 2, derive_params(2, (1, 5))?)?;
    let phi = ModuleElement::random_seed(&mp, &mut ChaCha8Rng::seed_from_u64(42));
    let pts = sample_points(mp.n, 200, 7);

    let w = act(&phi, ExtFactor::Letter(Letter::W))?;
    println!("(phi W)(0.3, 0) = {:.6}", w.value(0.3, 0));

    for c in relation_checks(&phi, &pts)? {
        println!("{:<32} {:.2e}", c.name, c.max_residual);
    }
    for a in Letter::TORUS {
        for j in [1, 2] {
            let r = leibniz_residual(&phi, a, j, DerivationVariant::Corrected, &pts)?;
            println!("Leibniz {:<12} {:.2e}", r.name, r.max_residual);
        }
    }
    let printed = leibniz_residual(&phi, Letter::W, 1, DerivationVariant::Printed, &pts)?;
    println!("without the 1/2 on d1 W: {:.2e}", printed.max_residual);

    for (m, n) in [(1, 2), (0, 1), (2, 3)] {
        let mp = ModuleParams::new(m, n, derive_params(2, (1, 5))?)?;
        let r = curvature_check(&ModuleElement::gaussian(&mp), &sample_points(n, 200, 1))?;
        println!("m = {m}, n = {n}: curvature {:.12}i (expected {:.12}i)", r.constant[1], r.expected[1]);
    }
    Ok(())
}
