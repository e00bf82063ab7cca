// The exact reciprocity identity for `(e(γx))_r` under
// `γ = (p, q; p̄, q̄)`: both sides at every `r`, then the defect of a sweep.

use qknot::arith::modular_setup;
use qknot::modularity::{ir_sweep, verify_ir};
use qknot::special::Precision;

pub fn run_example() -> qknot::Result<()> {
    let prec = Precision::new(128)?;
    let setup = modular_setup(1, 3, 1, 0, 5, 2)?;
    println!("x = {}, γx = {}/{}", setup.x, setup.h, setup.k);
    for r in [1, 4, setup.k - 1] {
        let rep = verify_ir(&setup, r, &prec)?;
        println!("r = {r:>2} (L = {}, λ = {}): lhs {:.18}  defect {:.1e}", rep.l, rep.lambda, rep.lhs, rep.defect);
    }

    let worst = ir_sweep(&setup, &prec)?.iter().map(|r| r.defect).fold(0.0, f64::max);
    println!("all r < k: max defect {worst:.1e}");
    assert!(worst < 1e-25);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
