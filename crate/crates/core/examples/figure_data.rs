// The data behind the `H` / `H*` figure: `H` stays bounded while `H*`
// grows with `N`.

use qknot::stats::{cf_label, dichotomy, figure_rows, scan_roots};

pub fn run_example() -> qknot::Result<()> {
    let k = qknot::knots::knot("4_1")?;
    for n in [100, 200] {
        let recs = scan_roots(k, n, 64, None)?;
        let d = dichotomy(&recs);
        println!("N = {n}: H residual {:.4}, max|H*| = {:.3}", d.h_residual, d.h_star_max);
        if n == 200 {
            let rows = figure_rows(&recs, Some((0.3, 0.32)));
            for r in rows.iter().take(5) {
                println!("  x = {:.5}: H = {:+.4}, H* = {:+.4}", r.x, r.h, r.h_star);
            }
        }
    }
    println!("label for 7/30: {}", cf_label(7, 30)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
