//! One PASS/FAIL line per acceptance criterion. Criteria that cannot hold as
//! stated are listed in `KNOWN_FAILURES` with the reason; anything else that
//! fails makes the target exit non-zero.

use std::time::{Duration, Instant};

use qknot::abelplana::{b_integral, b_integral_closed, h_one_zero, h_one_zero_by_limit};
use qknot::arith::{modular_setup, Fraction};
use qknot::knots::{critical_point, kashaev_41, kashaev_eval, knot, lobachevsky_inequalities, vol_cs, w_bound_check, KNOTS};
use qknot::modularity::{align_root_of_unity, closed_form_cd, extract_constant, ir_sweep, thp_sweep, Gamma};
use qknot::special::{bernoulli_number, e_c, pochhammer, PComplex, Precision};
use qknot::stats::{
    dichotomy, fibonacci_slope, histogram_compare, inverse_family, lln_check, scan_roots, stable_cdf, stable_mass,
    vol_over_2pi, Centering, StableLawSpec,
};
use rug::ops::Pow;
use rug::{Float, Rational};

const KNOWN_FAILURES: &[(u32, &str)] = &[(
    8,
    "log𝒥(e(1/400))/((Vol/2π)·400) carries the (3/2)log N/((Vol/2π)N) ≈ 7% prefactor correction, so the 5% band is unreachable at N = 400",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fr(a: i64, b: i64) -> Fraction {
    Fraction::new(a, b).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn c1() -> Outcome {
    let t = Instant::now();
    let prec = 128;
    let tol = Float::with_val(prec, Float::u_exp(1, -(prec as i32) + 16));
    let mut worst = Float::new(prec);
    for (x, want) in [(fr(0, 1), 1), (fr(1, 2), 5), (fr(1, 3), 13)] {
        // literal Σ_{r<k} |(q)_r|²
        let mut lit = PComplex::zero(prec);
        for r in 0..x.den() {
            let p = pochhammer(x, r, prec + 16);
            lit += &(&p * &p.conj());
        }
        for v in [lit, kashaev_41(x, prec).unwrap(), kashaev_eval(&KNOTS[0], x, prec).unwrap()] {
            let d = (&v - &PComplex::from_f64(prec, want as f64, 0.0)).abs();
            worst = worst.max(&d);
        }
    }
    let el = t.elapsed();
    ok(worst <= tol && el < Duration::from_secs(1), format!("max error {:.1e}, {}", worst.to_f64(), secs(el)))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let gammas = [(0, 1, 1, 1), (1, 2, 1, 0), (1, 3, 1, 0), (2, 3, 2, -1), (1, 5, 1, 0), (2, 5, 3, -1)];
    let p192 = Precision::new(192).unwrap();
    let (mut worst, mut rows) = (0f64, 0usize);
    for &(p, q, pb, qb) in &gammas {
        for d in 1..=3 {
            for n in 1..=50 {
                let Ok(s) = modular_setup(p, q, pb, qb, n, d) else { continue };
                for r in ir_sweep(&s, &p192).unwrap() {
                    worst = worst.max(r.defect);
                    rows += 1;
                }
            }
        }
    }
    let el = t.elapsed();
    // doubling 96 → 192 bits should roughly double −log₂(defect)
    let s = modular_setup(1, 3, 1, 0, 17, 2).unwrap();
    let max_def = |bits| ir_sweep(&s, &Precision::new(bits).unwrap()).unwrap().iter().map(|r| r.defect).fold(0.0, f64::max);
    let (lo, hi) = (max_def(96), max_def(192));
    let gain = hi.log2() / lo.log2();
    ok(
        worst < 1e-15 && (1.6..=2.6).contains(&gain) && el < Duration::from_secs(300),
        format!("{rows} rows, max defect {worst:.1e} at 192 bits, −log₂ defect ×{gain:.2} per precision doubling, {}", secs(el)),
    )
}

fn c3() -> Outcome {
    let t = Instant::now();
    let prec = 128;
    let mut worst = 0f64;
    let mut rows = 0;
    for h in [5i64, 7, 9, 13] {
        for k in h + 1..=200 {
            if qknot::arith::gcd(h, k) != 1 {
                continue;
            }
            for d in thp_sweep(h, k, prec).unwrap() {
                worst = worst.max(d);
                rows += 1;
            }
        }
    }
    let el = t.elapsed();
    let bound = 2f64.powi(-(prec as i32) + 24);
    ok(worst < bound && el < Duration::from_secs(120), format!("{rows} rows, max defect {worst:.1e} (< {bound:.1e}), {}", secs(el)))
}

fn c4() -> Outcome {
    let prec = Precision::new(128).unwrap();
    let tol = 2f64.powi(-64);
    let mut worst_h = 0f64;
    for den in [8, 64, 512] {
        let k = fr(1, den);
        let d = (&h_one_zero_by_limit(k, &prec).unwrap() - &h_one_zero(k, 128)).abs().to_f64();
        worst_h = worst_h.max(d);
    }
    let mut worst_b = 0f64;
    for l in 0..=8 {
        for v in [fr(0, 1), fr(1, 6), fr(1, 4), fr(1, 3), fr(1, 2), fr(2, 3), fr(5, 6)] {
            let d = Float::with_val(128, b_integral(l, v, &prec).unwrap() - b_integral_closed(l, v, 128)).abs().to_f64();
            worst_b = worst_b.max(d);
        }
    }
    ok(worst_h < tol && worst_b < tol, format!("H_κ(1,0) max error {worst_h:.1e}; B-integral (ℓ ≤ 8, 7 v) max error {worst_b:.1e}"))
}

/// `Σ_{n≥0} (3n+1)^{-2} − (3n+2)^{-2}` by direct summation plus an
/// Euler–Maclaurin tail.
fn l_chi3(prec: u32) -> Float {
    let n0 = 200i64;
    let mut s = Float::new(prec);
    for n in 0..n0 {
        s += Float::with_val(prec, 3 * n + 1).pow(-2i32) - Float::with_val(prec, 3 * n + 2).pow(-2i32);
    }
    let x = |a: i64| Float::with_val(prec, 3 * n0 + a);
    // ∫_N^∞ f + f(N)/2 − Σ B_{2j}/(2j)! f^{(2j−1)}(N)
    let mut tail = Float::with_val(prec, x(1).recip() - x(2).recip()) / 3u32;
    tail += (Float::with_val(prec, x(1).pow(-2i32)) - Float::with_val(prec, x(2).pow(-2i32))) / 2u32;
    let mut fact = Rational::from(1);
    for j in 1..=12usize {
        let kd = 2 * j - 1;
        fact *= Rational::from(((2 * j - 1) * (2 * j)) as u64);
        // f^{(k)}(N) = (−1)^k (k+1)! 3^k [(3N+1)^{−k−2} − (3N+2)^{−k−2}]
        let mut kf = Rational::from(1);
        for i in 2..=kd + 1 {
            kf *= Rational::from(i as u64);
        }
        let three = Float::with_val(prec, 3).pow(kd as u32);
        let e = -(kd as i32) - 2;
        let diff = Float::with_val(prec, x(1).pow(e)) - Float::with_val(prec, x(2).pow(e));
        let deriv = -(Float::with_val(prec, &kf) * three * diff);
        let coef = Float::with_val(prec, bernoulli_number(2 * j)) / Float::with_val(prec, &fact);
        tail -= coef * deriv;
    }
    s + tail
}

fn c5() -> Outcome {
    let prec = 192;
    let (vol, cs) = vol_cs(knot("4_1").unwrap(), prec).unwrap();
    let oracle = l_chi3(prec) * Float::with_val(prec, 3).sqrt() * 3u32 / 2u32;
    let dv = Float::with_val(prec, &vol - &oracle).abs().to_f64();
    let dcs = cs.abs().to_f64();
    let s = critical_point(knot("5_2").unwrap(), prec).unwrap();
    // complex root of τ³ − τ + 1 by Newton from the quoted value
    let mut tau = PComplex::from_f64(prec, 0.665, 0.562);
    for _ in 0..60 {
        let t2 = &tau * &tau;
        let f = &(&(&t2 * &tau) - &tau) + &PComplex::from_f64(prec, 1.0, 0.0);
        let df = &t2.scale(&Float::with_val(prec, 3)) - &PComplex::from_f64(prec, 1.0, 0.0);
        tau = &tau - &(&f / &df);
    }
    let d52 = (&e_c(&s.mu[0]) - &(&tau * &tau)).abs().to_f64();
    ok(
        dv < 1e-20 && dcs < 1e-20 && d52 < 1e-15,
        format!("Vol(4₁) − (3√3/2)L(2,χ₃) = {dv:.1e}, |CS(4₁)| = {dcs:.1e}, |e(μ₁) − τ²| (5₂) = {d52:.1e}, τ = {:.5}+{:.5}i", tau.to_c64().0, tau.to_c64().1),
    )
}

fn c6() -> Outcome {
    let mut failures = Vec::new();
    let mut tightest = f64::INFINITY;
    for k in KNOTS.iter() {
        let step = if k.m == 4 { 1.0 / 24.0 } else { 1.0 / 64.0 };
        let w = w_bound_check(k, step).unwrap();
        let v = vol_cs(k, 64).unwrap().0.to_f64() / (2.0 * std::f64::consts::PI);
        if !w.holds(v) {
            failures.push(k.name);
        }
        if w.sup.is_finite() {
            tightest = tightest.min(v - 0.01 - w.sup);
        }
    }
    let ineq = lobachevsky_inequalities(1000);
    let bad: Vec<&str> = ineq.iter().filter(|c| !c.holds).map(|c| c.name).collect();
    let m = ineq.iter().find(|c| c.name.starts_with('M')).map(|c| c.observed).unwrap_or(f64::NAN);
    let pass = failures.is_empty() && bad.is_empty() && (0.16..=0.162).contains(&m);
    ok(pass, format!("W-bound fails: {failures:?}; smallest margin {tightest:.4}; inequality fails: {bad:?}; M = {m:.6}"))
}

fn c7() -> Outcome {
    let t = Instant::now();
    let s = Gamma::new(0, -1, 1, 0).unwrap();
    let fit = extract_constant(knot("4_1").unwrap(), s, 1, &[500, 1000, 2000], 128).unwrap();
    // (i√3)^{−1/2}, computed here rather than by closed_form_cd
    let i_sqrt3 = PComplex::new(Float::new(128), Float::with_val(128, 3).sqrt());
    let reference = i_sqrt3.powf(&Float::with_val(128, -0.5));
    let errs: Vec<f64> = fit.samples.iter().map(|x| align_root_of_unity(&x.q, &reference, 8).1).collect();
    let halving = errs.windows(2).all(|w| (1.6..=2.5).contains(&(w[0] / w[1])));
    let (_, final_err) = align_root_of_unity(&fit.constant, &reference, 8);
    let cf = closed_form_cd(knot("4_1").unwrap(), fr(0, 1), 128).unwrap();
    let cf_agrees = align_root_of_unity(&cf, &reference, 8).1 < 1e-30;
    let fit52 = extract_constant(knot("5_2").unwrap(), s, 1, &[100, 200, 400], 128).unwrap();
    let e52 = fit52.rel_error.unwrap();
    let el = t.elapsed();
    ok(
        halving && errs[2] < 1e-2 && final_err < 1e-2 && cf_agrees && e52 < 5e-4 && el < Duration::from_secs(600),
        format!(
            "4₁ raw errors {:.2e}/{:.2e}/{:.2e}, extrapolated {final_err:.1e}; 5₂ at N ≤ 400 {e52:.1e}; {}",
            errs[0],
            errs[1],
            errs[2],
            secs(el)
        ),
    )
}

fn c8() -> Outcome {
    let fib = fibonacci_slope(22, 64).unwrap();
    let inv = lln_check(&inverse_family(&[400]).unwrap(), 64).unwrap();
    let ratio = inv[0].ratio;
    ok(
        (1.0..=1.2).contains(&fib.slope) && (ratio - 1.0).abs() < 0.05,
        format!("Fibonacci slope {:.4}; 1/400 ratio {ratio:.4}", fib.slope),
    )
}

fn c9() -> Outcome {
    let k = knot("4_1").unwrap();
    let recs = scan_roots(k, 300, 64, None).unwrap();
    let spec = StableLawSpec::conjectured();
    let total = stable_mass(-100.0, 100.0, &spec) + (1.0 - stable_cdf(100.0, &spec)) + stable_cdf(-100.0, &spec);
    let v = vol_over_2pi(k).unwrap();
    let a = histogram_compare(&recs, v, &spec, 60, Centering::Median).unwrap();
    let again = scan_roots(k, 300, 64, None).unwrap();
    let b = histogram_compare(&again, v, &spec, 60, Centering::Median).unwrap();
    let same = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    let pass = recs.len() == 27397 && (total - 1.0).abs() < 1e-6 && same && a.ks.is_finite() && (0.0..=1.0).contains(&a.ks);
    ok(
        pass,
        format!("{} records; total mass {total:.12}; deterministic {same}; KS {:.4} (D_K = {:.4})", recs.len(), a.ks, a.d_k),
    )
}

fn c10() -> Outcome {
    let k = knot("4_1").unwrap();
    let d300 = dichotomy(&scan_roots(k, 300, 64, None).unwrap());
    let d600 = dichotomy(&scan_roots(k, 600, 64, None).unwrap());
    let growth = d600.h_star_max / d300.h_star_max - 1.0;
    ok(
        d300.h_residual < 10.0 && growth > 0.2,
        format!("H residual {:.4} (N = 300); max|H*| {:.2} → {:.2} (+{:.0}%)", d300.h_residual, d300.h_star_max, d600.h_star_max, growth * 100.0),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] =
        [(1, c1), (2, c2), (3, c3), (4, c4), (5, c5), (6, c6), (7, c7), (8, c8), (9, c9), (10, c10)];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let o = f();
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == n);
        println!("criterion {n:>2}: {} — {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("              known: {why}"),
            (false, None) => unexpected.push(n),
            (true, Some(_)) => println!("              (listed as a known failure but passed)"),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
