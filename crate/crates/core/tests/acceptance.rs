//! End-to-end acceptance run. One line per criterion; exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use nctorus::basis::{casimir_reduce, cocycle_check, product_law_check, CasimirVariant};
use nctorus::bridge::{
    clock_shift, independence_evidence, index_box, intertwine_check, phi_inverse_roundtrip, phi_relation_residuals,
    spectral_check,
};
use nctorus::coeff::{Domain, ExactDomain, FloatDomain};
use nctorus::linalg::op_norm;
use nctorus::module::{
    curvature_check, leibniz_residual, relation_checks, sample_points, DerivationVariant, ModuleElement, ModuleParams,
};
use nctorus::params::derive_params;
use nctorus::poisson::{poisson_bracket, CommutativePoly3 as P};
use nctorus::poly::NcPoly;
use nctorus::reps::{
    casimir_residuals, evaluate, lambda_reconstruct, relation_residuals, scaling_sphere, scaling_torus, torus_rep,
};
use nctorus::rewrite::ReductionSystem;
use nctorus::word::{Letter, Word};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn exact_system(mu: i64, theta: (i64, i64)) -> Result<ReductionSystem<ExactDomain>, String> {
    let p = derive_params(mu, theta).map_err(|e| e.to_string())?;
    Ok(ReductionSystem::new(ExactDomain::new(&p).map_err(|e| e.to_string())?))
}

/// Overlaps counted directly from the left-hand sides: a proper suffix of one
/// equal to a proper prefix of another, or one contained in another.
fn brute_force_ambiguities(lhs: &[Word]) -> usize {
    let mut count = 0;
    for a in lhs {
        for b in lhs {
            let (la, lb) = (a.letters(), b.letters());
            for k in 1..la.len().min(lb.len()) {
                if la[la.len() - k..] == lb[..k] {
                    count += 1;
                }
            }
            if !std::ptr::eq(a, b) && lb.len() < la.len() && la.windows(lb.len()).any(|w| w == lb) {
                count += 1;
            }
        }
    }
    count
}

fn criterion_1() -> Check {
    let mut notes = Vec::new();
    for (mu, theta) in [(2, (1, 5)), (3, (1, 3))] {
        let sys = exact_system(mu, theta)?;
        let start = Instant::now();
        let report = sys.check_confluence().map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let lhs: Vec<Word> = sys.rules().iter().map(|r| r.lhs.clone()).collect();
        let expected = brute_force_ambiguities(&lhs);
        ensure(report.pass, format!("mu={mu}: unresolved ambiguity"))?;
        ensure(report.ambiguities.len() == expected, format!("{} ambiguities, scan finds {expected}", report.ambiguities.len()))?;
        ensure(took < Duration::from_secs(1), format!("took {took:?}"))?;
        notes.push(format!("{} ambiguities in {:.0?}", report.ambiguities.len(), took));
    }
    Ok(notes.join(", "))
}

fn criterion_2() -> Check {
    let sys = exact_system(2, (1, 5))?;
    let d = sys.domain();
    let p = NcPoly::word(d, Word::from([Letter::W, Letter::Ws, Letter::L]));
    let nf = sys.normal_form(&p).map_err(|e| e.to_string())?;
    let expected = NcPoly::from_terms([
        (Word::from([Letter::L, Letter::L]), d.z()),
        (Word::letter(Letter::L), d.mu()),
        (Word::unit(), d.zbar()),
    ]);
    ensure(nf == expected, "NF(W W* L) differs from z L^2 + mu L + zbar")?;
    Ok("z L^2 + mu L + zbar exactly".into())
}

fn criterion_3() -> Check {
    let sys = exact_system(2, (1, 5))?;
    let r = product_law_check(&sys, 3).map_err(|e| e.to_string())?;
    ensure(r.pass && r.exact && r.max_discrepancy == 0.0, format!("{} failures", r.failures))?;
    ensure(cocycle_check(sys.domain(), 3), "phase cocycle fails")?;
    Ok(format!("{} pairs, zero discrepancy, cocycle holds", r.pairs_checked))
}

fn criterion_4() -> Check {
    let points = [(2, (1, 5)), (3, (1, 3)), (5, (1, 7)), (2, (2, 9)), (4, (1, 6))];
    for (mu, theta) in points {
        let sys = exact_system(mu, theta)?;
        let one = NcPoly::constant(sys.domain().one());
        let c = casimir_reduce(&sys, CasimirVariant::Corrected).map_err(|e| e.to_string())?;
        ensure(c == one, format!("Casimir != 1 at mu={mu}"))?;
        let printed = casimir_reduce(&sys, CasimirVariant::Printed).map_err(|e| e.to_string())?;
        ensure(printed != one, format!("hbar^4 normalization unexpectedly 1 at mu={mu}"))?;
    }
    Ok("C = 1 at 5 points; hbar^4 normalization fails as expected".into())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (n, p, mu) in [(5, 1, 2.0), (8, 3, 4.0), (11, 1, 2.0)] {
        let rep = torus_rep(n, p, mu).map_err(|e| e.to_string())?;
        let rel = relation_residuals(&rep);
        let cas = casimir_residuals(&rep);
        let (_, lam) = lambda_reconstruct(&rep).map_err(|e| e.to_string())?;
        for (name, r) in rel.residuals.iter().chain(cas.residuals.iter()) {
            ensure(*r < 1e-12, format!("N={n}: {name} = {r:e}"))?;
        }
        ensure(lam < 1e-12, format!("N={n}: Lambda reconstruction {lam:e}"))?;
        worst = worst.max(rel.max_residual).max(cas.max_residual).max(lam);
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), format!("took {took:?}"))?;
    Ok(format!("max residual {worst:.1e} in {took:.0?}"))
}

fn random_poly<D: Domain<Coeff = Complex64>>(d: &D, rng: &mut ChaCha8Rng) -> NcPoly<Complex64> {
    let terms = rng.gen_range(1..=4);
    let mut p = NcPoly::zero();
    for _ in 0..terms {
        let len = rng.gen_range(0..=6);
        let w = Word::new((0..len).map(|_| Letter::TORUS[rng.gen_range(0..4)]).collect());
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        p = p.add(&NcPoly::word(d, w).scale(&c));
    }
    p
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for (n, p, mu) in [(5, 1, 2i64), (8, 3, 4), (11, 1, 2)] {
        let params = derive_params(mu, (p, n as i64)).map_err(|e| e.to_string())?;
        let sys = ReductionSystem::new(FloatDomain::new(&params));
        let rep = torus_rep(n, p, mu as f64).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let poly = random_poly(sys.domain(), &mut rng);
            let nf = sys.normal_form(&poly).map_err(|e| e.to_string())?;
            let a = evaluate(&poly, &rep).map_err(|e| e.to_string())?;
            let b = evaluate(&nf, &rep).map_err(|e| e.to_string())?;
            worst = worst.max(op_norm(&(a - b)));
        }
    }
    ensure(worst < 1e-10, format!("max gap {worst:e}"))?;
    Ok(format!("300 polynomials, max gap {worst:.1e}"))
}

fn criterion_7() -> Check {
    let e = |x: nctorus::Error| x.to_string();
    let mut worst_rel = 0.0f64;
    for (n, p) in [(5, 1), (11, 1), (8, 3)] {
        let params = derive_params(4, (p, n as i64)).map_err(e)?;
        let pair = clock_shift(n, p).map_err(e)?;
        let rel = phi_relation_residuals(&pair, &params).map_err(e)?;
        ensure(rel.max_residual < 1e-12, format!("N={n}: relation residual {:e}", rel.max_residual))?;
        worst_rel = worst_rel.max(rel.max_residual);
        let it = intertwine_check(&pair, &params).map_err(e)?;
        ensure(it.residual_or_bound < 1e-12, format!("N={n}: intertwiner {:e}", it.residual_or_bound))?;
        let rt = phi_inverse_roundtrip(&pair, &params).map_err(e)?;
        ensure(rt.residual_or_bound < 1e-10, format!("N={n}: roundtrip {:e}", rt.residual_or_bound))?;
        let sp = spectral_check(&params, &pair, 64).map_err(e)?;
        let bound = params.spectral_floor();
        ensure(sp.residual_or_bound >= bound - 1e-12, format!("N={n}: min eig below {bound}"))?;
    }
    let params = derive_params(2, (1, 11)).map_err(e)?;
    let pair = clock_shift(11, 1).map_err(e)?;
    let indices = index_box(-2..=2, 0..=2);
    ensure(indices.len() == 15, "index box size")?;
    let ind = independence_evidence(&FloatDomain::new(&params), &pair, &indices).map_err(e)?;
    ensure(ind.residual_or_bound > 1e-8, format!("Gram minimum {:e}", ind.residual_or_bound))?;
    Ok(format!("relations {worst_rel:.1e}, Gram minimum {:.3}", ind.residual_or_bound))
}

fn criterion_8() -> Check {
    let e = |x: nctorus::Error| x.to_string();
    let ladder = [1e-1, 1e-2, 1e-3];
    let torus = scaling_torus(6, 1, &ladder).map_err(e)?;
    for s in &torus.summary {
        ensure(s.max_abs_err <= s.bound_or_deviation, format!("eps={}: {} > {}", s.eps, s.max_abs_err, s.bound_or_deviation))?;
    }
    ensure((1.9..=2.1).contains(&torus.order), format!("torus order {}", torus.order))?;
    let drift = torus.lambda_drift.unwrap_or(f64::NAN);
    ensure(drift < 1e-14, format!("Lambda drifts by {drift:e}"))?;
    let sphere = scaling_sphere(5, 0.1, &ladder).map_err(e)?;
    ensure((1.9..=2.1).contains(&sphere.order), format!("sphere order {}", sphere.order))?;
    Ok(format!("torus order {:.3}, sphere order {:.3}", torus.order, sphere.order))
}

fn criterion_9() -> Check {
    let e = |x: nctorus::Error| x.to_string();
    let params = derive_params(2, (1, 5)).map_err(e)?;
    let mp = ModuleParams::new(1, 2, params.clone()).map_err(e)?;
    let phi = ModuleElement::random_seed(&mp, &mut ChaCha8Rng::seed_from_u64(9));
    let pts = sample_points(mp.n, 200, 9);
    let mut worst_rel = 0.0f64;
    for c in relation_checks(&phi, &pts).map_err(e)? {
        ensure(c.max_residual < 1e-12, format!("{}: {:e}", c.name, c.max_residual))?;
        worst_rel = worst_rel.max(c.max_residual);
    }
    let mut worst_leib = 0.0f64;
    for a in Letter::TORUS {
        for j in [1, 2] {
            let r = leibniz_residual(&phi, a, j, DerivationVariant::Corrected, &pts).map_err(e)?;
            ensure(r.max_residual < 1e-10, format!("{}: {:e}", r.name, r.max_residual))?;
            worst_leib = worst_leib.max(r.max_residual);
        }
    }
    for (m, n) in [(1, 2), (0, 1), (2, 3)] {
        let mp = ModuleParams::new(m, n, params.clone()).map_err(e)?;
        let r = curvature_check(&ModuleElement::gaussian(&mp), &sample_points(n, 200, 3)).map_err(e)?;
        ensure(r.max_deviation < 1e-12, format!("(m,n)=({m},{n}): deviation {:e}", r.max_deviation))?;
        if (m, n) == (1, 2) {
            let target = 1.0 / (1.4 * std::f64::consts::PI);
            ensure((r.expected[1] - target).abs() < 1e-15, "curvature is not i/(1.4 pi)")?;
        }
    }
    Ok(format!("relations {worst_rel:.1e}, Leibniz {worst_leib:.1e}, curvature constant"))
}

fn criterion_10() -> Check {
    let c = P::torus_sphere_level_set();
    let r2 = P::constant(2).mul(&P::x().pow(2).add(&P::y().pow(2)).sub(&P::mu()));
    let cases = [
        (P::x(), P::y(), P::z()),
        (P::y(), P::z(), r2.mul(&P::x())),
        (P::z(), P::x(), r2.mul(&P::y())),
        (c.clone(), P::x(), P::zero()),
        (c.clone(), P::y(), P::zero()),
        (c.clone(), P::z(), P::zero()),
    ];
    for (f, g, expect) in &cases {
        let got = poisson_bracket(f, g, &c);
        ensure(got == *expect, format!("{{{f},{g}}} = {got}, expected {expect}"))?;
    }
    Ok("6 brackets equal symbolically".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("confluence certificate", criterion_1),
        ("normal-form anchor", criterion_2),
        ("basis product law", criterion_3),
        ("Casimir identity", criterion_4),
        ("representation residuals", criterion_5),
        ("symbolic/numeric consistency", criterion_6),
        ("embedding into the rotation algebra", criterion_7),
        ("scaling limits", criterion_8),
        ("projective module", criterion_9),
        ("classical Poisson layer", criterion_10),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 passed in {:.2?}", 10 - failed, total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
