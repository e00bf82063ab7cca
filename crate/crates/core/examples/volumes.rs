// Critical points of the potential, volumes and Chern–Simons invariants for
// the preset knots.

use qknot::knots::{critical_point, knot, vol_cs, KNOTS};
use qknot::special::e_c;

pub fn run_example() -> qknot::Result<()> {
    let prec = 128;
    for k in KNOTS.iter() {
        let (vol, cs) = vol_cs(k, prec)?;
        println!("{:>5}: Vol = {:.12}  CS = {:+.12}", k.name, vol.to_f64(), cs.to_f64());
    }

    let s = critical_point(knot("5_2")?, prec)?;
    println!("5_2 critical point after {} Newton steps:", s.iterations);
    for (i, mu) in s.mu.iter().enumerate() {
        println!("  e(μ{}) = {:.15}", i + 1, e_c(mu));
    }
    println!("  V̂ = {:.20}", s.v_hat);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
