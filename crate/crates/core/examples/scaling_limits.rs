//! Fuzzy torus and fuzzy sphere limits: errors shrink like eps^2.

use nctorus::reps::{scaling_sphere, scaling_torus};

fn main() -> nctorus::Result<()> {
    let ladder = [0.1, 0.01, 0.001];
    let torus = scaling_torus(6, 1, &ladder)?;
    println!("torus, N = 6");
    for s in &torus.summary {
        println!("  eps {:<6} max |W~ - 1| = {:.3e}  (bound {:.3e})", s.eps, s.max_abs_err, s.bound_or_deviation);
    }
    println!("  order {:.4}, Lambda drift {:.1e}", torus.order, torus.lambda_drift.unwrap_or(0.0));

    let sphere = scaling_sphere(5, 0.1, &ladder)?;
    println!("sphere, N = 5, theta~ = 0.1");
    for s in &sphere.summary {
        println!("  eps {:<6} max entry error {:.3e}  su(2) deviation {:.3e}", s.eps, s.max_abs_err, s.bound_or_deviation);
    }
    println!("  order {:.4}", sphere.order);
    print!("{}", sphere.to_csv());
    Ok(())
}
