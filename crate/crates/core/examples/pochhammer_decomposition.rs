// The exact product identity that factors `(e(−h̄/k))_r` through the
// Pochhammer symbol at `k̄/h`, a Pochhammer symbol in `e(1/k)` and two
// trigonometric products. It holds exactly, so the defect only tracks rounding.

use qknot::modularity::{thp_sweep, verify_thp_decomposition};

pub fn run_example() -> qknot::Result<()> {
    let prec = 128;
    let (h, k) = (7, penultimate(7));
    let d = verify_thp_decomposition(h, k, 3, prec)?;
    println!("{h}/{k}, r = 3: defect {d:.1e}");
    for (h, k) in [(5, 12), (9, 40), (13, 101)] {
        let worst = thp_sweep(h, k, prec)?.into_iter().fold(0.0, f64::max);
        println!("{h}/{k}, all r: max defect {worst:.1e}");
        assert!(worst < 1e-30);
    }
    Ok(())
}

/// Smallest `k > h` coprime to `h`, past the trivial `h + 1`.
fn penultimate(h: i64) -> i64 {
    (h + 2..).find(|k| qknot::arith::gcd(h, *k) == 1).unwrap()
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
