// The totally skewed 1-stable law `S₁(6/π, 1, 0)`: density, distribution
// function, median and the mass check with its heavy right tail.

use qknot::stats::{stable_cdf, stable_density, stable_density_zolotarev, stable_mass, stable_median, StableLawSpec};

pub fn run_example() -> qknot::Result<()> {
    let s = StableLawSpec::conjectured();
    for x in [-8.0, -4.0, 0.0, 2.0, 5.0, 20.0, 100.0] {
        println!("x = {x:>6}: f = {:.6e}, F = {:.10}", stable_density(x, &s), stable_cdf(x, &s));
    }
    let a = stable_density(1.0, &s);
    let b = stable_density_zolotarev(1.0, &s);
    println!("inversion vs Zolotarev at x = 1: {:.1e}", (a - b).abs());

    let inside = stable_mass(-100.0, 100.0, &s);
    let tails = (1.0 - stable_cdf(100.0, &s)) + stable_cdf(-100.0, &s);
    println!("mass on [−100, 100] = {inside:.6}, tails = {tails:.6}, total = {:.12}", inside + tails);
    println!("median = {:.6}", stable_median(&s));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
