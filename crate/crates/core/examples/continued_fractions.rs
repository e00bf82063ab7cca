// Continued fractions, Dedekind sums and the `γx = h/k` bookkeeping.

use qknot::arith::{cf_expand, dedekind_sum, farey_interior, modular_setup, sigma_r, Fraction};
use qknot::stats::fibonacci_family;

pub fn run_example() -> qknot::Result<()> {
    let a: Fraction = "13/47".parse()?;
    let cf = cf_expand(a)?;
    let (sigma, r) = sigma_r(a)?;
    println!("{a} = {cf}  Σ = {sigma}, r = {r}");
    assert_eq!(cf.value(), a);

    // s(p,q) + s(q,p) = (p/q + q/p + 1/pq)/12 − 1/4
    let (p, q) = (5, 17);
    let lhs = dedekind_sum(p, q)?.to_f64() + dedekind_sum(q, p)?.to_f64();
    let rhs = (p as f64 / q as f64 + q as f64 / p as f64 + 1.0 / (p * q) as f64) / 12.0 - 0.25;
    println!("s(5,17) + s(17,5) = {lhs:.12} vs {rhs:.12}");
    assert!((lhs - rhs).abs() < 1e-12);

    println!("Farey interior of order 6: {:?}", farey_interior(6).iter().map(|f| f.to_string()).collect::<Vec<_>>());

    let s = modular_setup(1, 3, 1, 0, 7, 2)?;
    println!("γ = (p,q;p̄,q̄) = (1,3;1,0), N = 7, d = 2: x = {}, γx = {} = {}/{}", s.x, s.gx, s.h, s.k);

    let (n, f) = *fibonacci_family(12)?.last().unwrap();
    println!("Fibonacci ratio n = {n}: {f} = {}", cf_expand(f)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
