// Arbitrary-precision building blocks: `e(x)`, Bernoulli polynomials,
// the Lobachevsky function, `Li₂` and the log-sine function `𝔣`.

use qknot::arith::Fraction;
use qknot::special::{
    bernoulli_number, bernoulli_tilde, bracket, e_frac, f_log1me, li2_series, lobachevsky_rat, pi, PComplex,
};
use rug::Float;

pub fn run_example() -> qknot::Result<()> {
    let prec = 192;
    let third: Fraction = "1/3".parse()?;
    let z = e_frac(third, prec);
    println!("e(1/3) = {z:.30}");

    println!("B₁₂ = {}", bernoulli_number(12));
    println!("B̃₃(1/4) = {:.20}", bernoulli_tilde(3, "1/4".parse()?, prec).to_f64());

    // Vol(4₁) = 6Λ(π/3)
    let vol = lobachevsky_rat(third, prec) * 6u32;
    println!("6Λ(π/3) = {:.25}", vol);

    // Li₂(1/2) = π²/12 − log²2/2
    let li = li2_series(&PComplex::from_f64(prec, 0.5, 0.0))?;
    let ln2 = Float::with_val(prec, 2).ln();
    let want = pi(prec).square() / 12u32 - ln2.square() / 2u32;
    println!("Li₂(1/2) − (π²/12 − log²2/2) = {:.1e}", Float::with_val(prec, &li.re - &want).to_f64());

    let f = f_log1me(&PComplex::from_f64(prec, 0.25, 0.1))?;
    println!("𝔣(0.25 + 0.1i) = {f:.20}");

    // [α]_n [ᾱ]_{k−1−n} = 1
    let a: Fraction = "2/7".parse()?;
    let abar = Fraction::new(-2, 7)?;
    for n in 0..7 {
        let prod = &bracket(a, n, prec) * &bracket(abar, 6 - n, prec);
        assert!((&prod - &PComplex::one(prec)).abs().to_f64() < 1e-40);
    }
    println!("[2/7]_n [−2/7]_(6−n) = 1 for n = 0..6");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
