use nctorus::poisson::{poisson_bracket, CommutativePoly3 as P};

fn main() {
    let c = P::torus_sphere_level_set();
    println!("C = {c}");
    let gens = [("x", P::x()), ("y", P::y()), ("z", P::z())];
    for i in 0..3 {
        let (a, f) = &gens[i];
        let (b, g) = &gens[(i + 1) % 3];
        println!("{{{a},{b}}} = {}", poisson_bracket(f, g, &c));
    }
    for (a, f) in &gens {
        println!("{{C,{a}}} = {}", poisson_bracket(&c, f, &c));
    }
}
