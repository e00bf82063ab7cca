// Two consequences of reciprocity for `log𝒥_{4₁}`: the bounded cocycle
// `H(h/k) = log𝒥(h/k) − log𝒥(k/h)` and the cotangent-sum main term.

use qknot::modularity::{reciprocity_h, th4_check};

pub fn run_example() -> qknot::Result<()> {
    let prec = 64;
    for (h, k) in [(1, 7), (2, 9), (3, 10), (5, 13), (8, 21)] {
        let r = reciprocity_h(h, k, prec)?;
        println!("H({h}/{k}) = {:+.6}  (bound {:.3})", r.value, r.bound);
        assert!(r.value.abs() <= r.bound);
    }

    let h = 5;
    for k in [101, 103, 107, 109, 113] {
        match th4_check(h, k, prec) {
            Ok(t) => println!(
                "h = {h}, k = {k}: c₀ = {:+.4}, main {:.4}, residual {:.3e} (envelope {:.3e})",
                t.c0, t.main, t.residual, t.envelope
            ),
            Err(e) => println!("h = {h}, k = {k}: skipped ({e})"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
