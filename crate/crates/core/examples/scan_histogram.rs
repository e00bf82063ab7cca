// Scanning `log𝒥_{4₁}` over every reduced `h/k` with `k ≤ N`, with an
// on-disk cache, then comparing the normalised values with the stable law.

use qknot::knots::knot;
use qknot::stats::{histogram_compare, scan_roots, vol_over_2pi, write_scan_csv, Cache, Centering, StableLawSpec};

pub fn run_example() -> qknot::Result<()> {
    let dir = std::env::temp_dir().join(format!("qknot-example-{}", std::process::id()));
    let cache = Cache::new(&dir);
    let k = knot("4_1")?;
    let recs = scan_roots(k, 120, 64, Some(&cache))?;
    // the second pass reads the cache
    let again = scan_roots(k, 120, 64, Some(&cache))?;
    assert_eq!(recs.len(), again.len());
    println!("{} records, cache in {}", recs.len(), cache.dir().display());

    let mut head = Vec::new();
    write_scan_csv(&recs[..5], &mut head)?;
    print!("{}", String::from_utf8_lossy(&head));

    let rep = histogram_compare(&recs, vol_over_2pi(k)?, &StableLawSpec::conjectured(), 30, Centering::Median)?;
    println!("D_K = {:.4}, mean {:.4}, KS distance {:.4}", rep.d_k, rep.mean, rep.ks);
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
