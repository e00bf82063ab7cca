// Growth of `log𝒥_{4₁}` along three families of roots of unity: `1/n`,
// `[0; a, b]` with `b` growing, and Fibonacci ratios.

use qknot::stats::{fibonacci_slope, inverse_family, lln_check, two_term_family};

pub fn run_example() -> qknot::Result<()> {
    let prec = 64;
    for row in lln_check(&inverse_family(&[25, 50, 100, 200])?, prec)? {
        println!("α = {:>6}: log𝒥 = {:>9.4}, ratio to (Vol/2π)·Σ = {:.4}", row.alpha.to_string(), row.log_j, row.ratio);
    }
    for row in lln_check(&two_term_family(3, &[20, 40, 80])?, prec)? {
        println!("α = {:>6}: Σ = {}, r = {}, ratio {:.4}", row.alpha.to_string(), row.sigma, row.r, row.ratio);
    }
    let fit = fibonacci_slope(18, prec)?;
    println!("Fibonacci ratios: log𝒥 ≈ {:.4}·n + {:.4}", fit.slope, fit.intercept);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
