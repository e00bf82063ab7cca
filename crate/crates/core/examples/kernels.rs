// The line-integral kernels behind the error terms: `H_κ(u, v)`, the
// Taylor integrals `B_ℓ(v)` and the error term `ℰ_s`.

use qknot::abelplana::{b_integral, b_integral_closed, err_e, err_estar, h_kernel, h_one_zero, h_one_zero_by_limit, ErrParams, KernelParams, Point};
use qknot::arith::Fraction;
use qknot::special::Precision;

pub fn run_example() -> qknot::Result<()> {
    let prec = Precision::new(128)?;
    let kappa: Fraction = "1/16".parse()?;

    let closed = h_one_zero(kappa, 128);
    let limit = h_one_zero_by_limit(kappa, &prec)?;
    println!("H_1/16(1, 0) closed = {closed:.25}");
    println!("          by limit  = {limit:.25}");

    let h = h_kernel(&KernelParams { kappa, u: Point::Rat("1/3".parse()?), v: "1/4".parse()? }, &prec)?;
    println!("H_1/16(1/3, 1/4) = {h:.25}");

    for l in 0..4 {
        let v: Fraction = "1/3".parse()?;
        let q = b_integral(l, v, &prec)?;
        let c = b_integral_closed(l, v, 128);
        println!("B_{l}(1/3): quadrature {:.20e}, closed {:.20e}", q.to_f64(), c.to_f64());
    }

    let params = ErrParams { s: 1, lambda: Point::Rat("2/5".parse()?), kappa, p: 1, pbar: 1, q: 3 };
    let e = err_e(&params, &prec)?;
    let es = err_estar(&params, &prec)?;
    println!("ℰ_1 = {e:.20}");
    println!("ℰ*_1 = {es:.20}  (conjugate for real λ)");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
