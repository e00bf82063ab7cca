// The bound on the boundary potential `W` against `Vol/2π`, and the
// elementary inequalities for the Lobachevsky function it rests on.

use qknot::knots::{lobachevsky_inequalities, vol_cs, w_bound_check, KNOTS};

pub fn run_example() -> qknot::Result<()> {
    for k in KNOTS.iter().take(4) {
        let w = w_bound_check(k, 1.0 / 24.0)?;
        let v = vol_cs(k, 64)?.0.to_f64() / (2.0 * std::f64::consts::PI);
        println!("{:>5}: sup W = {:.5}, Vol/2π − 0.01 = {:.5}, holds: {}", k.name, w.sup, v - 0.01, w.holds(v));
    }
    for c in lobachevsky_inequalities(400) {
        println!("{}: observed {:.6} vs {:.6} → {}", c.name, c.observed, c.bound, c.holds);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
