// Extracting the constant in the exponential growth of `𝒥(e(γN))` as
// `N → ∞` from a few values of `N`, and comparing it with its closed form.

use qknot::knots::knot;
use qknot::modularity::{extract_constant, Gamma};

pub fn run_example() -> qknot::Result<()> {
    let s = Gamma::new(0, -1, 1, 0)?;
    let fit = extract_constant(knot("4_1")?, s, 1, &[100, 200, 400], 128)?;
    for x in &fit.samples {
        println!("N = {:>4}, k = {:>4}: Q = {:.12}", x.n, x.k, x.q);
    }
    println!("fitted power of k: {:.4}", fit.exponent);
    println!("extrapolated: {:.12}", fit.constant);
    if let (Some(r), Some((j, n))) = (&fit.reference, fit.root_of_unity) {
        println!("closed form × e({j}/{n}): {r:.12}  (relative error {:.1e})", fit.rel_error.unwrap());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
