//! The two reciprocity formulas for `(e(α))_r` checked to working precision,
//! the reciprocity of `𝒥_{4₁}` under `h̄/k ↔ k̄/h`, and the asymptotic
//! constants of `𝒥_K(γx)/𝒥_K(x)`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::abelplana::{err_e, ErrParams, Point};
use crate::arith::{dedekind_sum, gcd, mod_inverse, modular_setup, rep1, Fraction, ModularSetup};
use crate::knots::{critical_point, kashaev_41, kashaev_eval, KnotPreset};
use crate::special::{
    cot_partial_max, cot_pi_rat, cotangent_sum_c0, e_c, e_rat, f_log1me, lie_real, lobachevsky, pi, pochhammer,
    pochhammer_table, rat, PComplex, Precision,
};
use crate::{Error, Result};

fn rel_defect(lhs: &PComplex, rhs: &PComplex) -> f64 {
    let q = lhs / rhs;
    (&q - &PComplex::one(q.prec())).abs().to_f64()
}

/// One row of the first reciprocity formula.
#[derive(Clone, Debug, Serialize)]
pub struct IrReport {
    pub setup: ModularSetup,
    pub r: i64,
    /// `L = ⌊rd/k⌋` and `λ = {rd/k}`.
    pub l: i64,
    pub lambda: Fraction,
    pub lhs: PComplex,
    pub rhs: PComplex,
    pub defect: f64,
}

/// `πi(p+p̄)/(12q) − πi s(p,q) − πi/4 + ½log(k/d)`, the part of the exponent
/// that does not depend on `r`.
fn ir_constant(setup: &ModularSetup, wp: u32) -> Result<PComplex> {
    let s = dedekind_sum(setup.p, setup.q)?;
    // (p+p̄)/(12q) − s(p,q) − 1/4, as one rational multiple of πi
    let phase = Fraction::new(setup.p + setup.pbar, 12 * setup.q)? - s - Fraction::new(1, 4)?;
    let im = pi(wp) * phase.num() / phase.den();
    let re = Float::with_val(wp, rat(wp, setup.k, setup.d).ln_ref()) / 2u32;
    Ok(PComplex::new(re, im))
}

fn ir_rhs(setup: &ModularSetup, r: i64, constant: &PComplex, prec: &Precision) -> Result<(i64, Fraction, PComplex)> {
    let wp = prec.bits + 16;
    let (k, d, q) = (setup.k, setup.d, setup.q);
    let l = r * d / k;
    let lambda = Fraction::new((r * d).rem_euclid(k), k)?;
    // the index that closes the identity is r − Lp̄, not r (they agree while L = 0)
    let e = err_e(
        &ErrParams { s: r - l * setup.pbar, lambda: Point::Rat(lambda), kappa: Fraction::new(d, k)?, p: setup.p, pbar: setup.pbar, q },
        prec,
    )?;
    let lie = lie_real(&rat(wp, lambda.num(), lambda.den()))?;
    let mut x = lie.scale(&rat(wp, k, q * d));
    x += constant;
    x += &e;
    Ok((l, lambda, x.exp()))
}

fn check_r(setup: &ModularSetup, r: i64) -> Result<()> {
    if r < 1 || r >= setup.k {
        return Err(Error::Domain(format!("r = {r} outside 1..{}", setup.k)));
    }
    Ok(())
}

/// Both sides of
/// `(e(γx))_r e(γx/24) / ((e(x))_L e(x/24)) = exp(πi(p+p̄)/(12q) − πi s(p,q)
/// − πi/4 + ½log(k/d) + (k/(qd))Lie(λ) + ℰ_s(λ, d/k))` with `s = r − Lp̄`.
pub fn verify_ir(setup: &ModularSetup, r: i64, prec: &Precision) -> Result<IrReport> {
    check_r(setup, r)?;
    let wp = prec.bits + 16;
    let constant = ir_constant(setup, wp)?;
    let (l, lambda, rhs) = ir_rhs(setup, r, &constant, prec)?;
    let top = &pochhammer(setup.gx, r, wp) * &e_rat(setup.h, 24 * setup.k, wp);
    let bottom = &pochhammer(setup.x.fract(), l, wp) * &e_rat(setup.n, 24 * setup.d, wp);
    let lhs = &top / &bottom;
    Ok(report(setup, r, l, lambda, lhs, rhs, prec.bits))
}

fn report(setup: &ModularSetup, r: i64, l: i64, lambda: Fraction, lhs: PComplex, rhs: PComplex, bits: u32) -> IrReport {
    let defect = rel_defect(&lhs, &rhs);
    IrReport { setup: *setup, r, l, lambda, lhs: lhs.with_prec(bits), rhs: rhs.with_prec(bits), defect }
}

/// [`verify_ir`] for every `1 ≤ r < k`, sharing the Pochhammer prefix tables.
pub fn ir_sweep(setup: &ModularSetup, prec: &Precision) -> Result<Vec<IrReport>> {
    let wp = prec.bits + 16;
    let constant = ir_constant(setup, wp)?;
    let top = pochhammer_table(setup.gx, setup.k as usize, wp);
    let bottom = pochhammer_table(setup.x.fract(), setup.d as usize, wp);
    let phase = &e_rat(setup.h, 24 * setup.k, wp) / &e_rat(setup.n, 24 * setup.d, wp);
    (1..setup.k)
        .into_par_iter()
        .map(|r| {
            let (l, lambda, rhs) = ir_rhs(setup, r, &constant, prec)?;
            let lhs = &(&top[r as usize] * &phase) / &bottom[l as usize];
            Ok(report(setup, r, l, lambda, lhs, rhs, prec.bits))
        })
        .collect()
}

fn check_hk(h: i64, k: i64) -> Result<()> {
    if h < 4 || h >= k {
        return Err(Error::Domain(format!("need 4 ≤ h < k, got h = {h}, k = {k}")));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    Ok(())
}

/// Running products of both sides of
/// `(e(−h̄/k))_r = (e(k̄/h))_{r₀} h^{⌊r/h⌋} 𝒫 ℳ ℒ` for `r = 0..k`, with
/// `𝒫 = Π_{n ≤ ⌊r/h⌋}(1 − e(−n/k))`, `ℳ = Π_{h∤n}(1 + e(−n/(hk)))/2`,
/// `ℒ = Π_{h∤n}(1 − cot(πnk̄/h) tan(πn/(hk)))`.
fn thp_sides(h: i64, k: i64, r_max: i64, prec: u32) -> Result<Vec<(PComplex, PComplex)>> {
    check_hk(h, k)?;
    let hbar = mod_inverse(h, k)?;
    let kbar = mod_inverse(k, h)?;
    let small = pochhammer_table(Fraction::new(kbar, h)?, h as usize, prec);
    let one = PComplex::one(prec);
    let mut lhs = one.clone();
    let (mut hpow, mut p, mut m, mut l) = (Float::with_val(prec, 1), one.clone(), one.clone(), one.clone());
    let pi_ = pi(prec);
    let mut out = vec![(one.clone(), one.clone())];
    for n in 1..=r_max {
        lhs *= &(&one - &e_rat(-n * hbar, k, prec));
        if n % h == 0 {
            hpow *= h;
            p *= &(&one - &e_rat(-(n / h), k, prec));
        } else {
            let mut f = &one + &e_rat(-n, h * k, prec);
            f.re /= 2u32;
            f.im /= 2u32;
            m *= &f;
            let t = Float::with_val(prec, &pi_ * n) / (h * k);
            let t = t.tan();
            let c = cot_pi_rat((n * kbar).rem_euclid(h), h, prec);
            l *= &PComplex::from_real(1 - t * c);
        }
        let mut rhs = &small[(n % h) as usize] * &p;
        rhs = &(&rhs * &m) * &l;
        rhs *= &hpow;
        out.push((lhs.clone(), rhs));
    }
    Ok(out)
}

/// `|lhs/rhs − 1|` for the exact product decomposition behind the second
/// reciprocity formula.
pub fn verify_thp_decomposition(h: i64, k: i64, r: i64, prec: u32) -> Result<f64> {
    if !(0..k).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside 0..{k}")));
    }
    let sides = thp_sides(h, k, r, prec)?;
    let (a, b) = &sides[r as usize];
    Ok(rel_defect(a, b))
}

/// [`verify_thp_decomposition`] for every `0 ≤ r < k`.
pub fn thp_sweep(h: i64, k: i64, prec: u32) -> Result<Vec<f64>> {
    Ok(thp_sides(h, k, k - 1, prec)?.iter().map(|(a, b)| rel_defect(a, b)).collect())
}

/// Distance of `x` to the nearest multiple of `2π`.
fn reduce_2pi(x: &Float) -> Float {
    let two_pi = pi(x.prec()) * 2u32;
    let n = Float::with_val(x.prec(), x / &two_pi).round();
    Float::with_val(x.prec(), x - n * two_pi)
}

/// Main terms of the second reciprocity formula for `(e(−h̄/k))_r`:
/// returns `|log LHS − (k/h)Lie(r/k) + (π/k)Σ_{n≤r₀} cot(πnk̄/h)n/h −
/// (π/k)⌊r/h⌋c₀(k̄/h)|`, the imaginary part taken mod 2π.
pub fn thp_main_terms(h: i64, k: i64, r: i64, prec: u32) -> Result<f64> {
    check_hk(h, k)?;
    if !(0..k).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside 0..{k}")));
    }
    let wp = prec + 16;
    let hbar = mod_inverse(h, k)?;
    let kbar = mod_inverse(k, h)?;
    let r0 = r % h;
    let top = &pochhammer(Fraction::new(-hbar, k)?, r, wp) * &e_rat(-h, 24 * k, wp);
    let bottom = &pochhammer(Fraction::new(kbar, h)?, r0, wp) * &e_rat(k, 24 * h, wp);
    let log_lhs = (&top / &bottom).ln();
    let mut main = lie_real(&rat(wp, r, k))?.scale(&rat(wp, k, h));
    let mut partial = Float::new(wp);
    for n in 1..=r0 {
        partial += cot_pi_rat((n * kbar).rem_euclid(h), h, wp) * n / h;
    }
    let c0 = cotangent_sum_c0(kbar, h, wp)?;
    let pk = Float::with_val(wp, pi(wp) / k);
    main.re -= Float::with_val(wp, &pk * &partial);
    main.re += Float::with_val(wp, &pk * &c0) * (r / h);
    let d = &log_lhs - &main;
    let im = reduce_2pi(&d.im);
    Ok(Float::with_val(wp, d.re.hypot_ref(&im)).to_f64())
}

fn inverse_or_zero(a: i64, m: i64) -> Result<i64> {
    if m == 1 {
        Ok(0)
    } else {
        mod_inverse(a, m)
    }
}

/// `log 𝒥_{4₁}(e(a/m))`.
fn log_j41(a: i64, m: i64, prec: u32) -> Result<Float> {
    let j = kashaev_41(Fraction::new(a, m)?, prec)?;
    Ok(j.re.ln())
}

/// `Vol(4₁)/2π = 3Λ(1/3)`.
pub fn vol41_over_2pi(prec: u32) -> Float {
    lobachevsky(&rat(prec, 1, 3)) * 3u32
}

/// `H = log 𝒥_{4₁}(e(h̄/k)) − log 𝒥_{4₁}(e(k̄/h)) − (Vol(4₁)/2π)(k/h)` and the
/// shape of its bound,
/// `(1/k)max_{r'<h}|Σ_{n≤r'} cot(πnk̄/h)n/h| + |c₀(k̄/h)|/h + log(k/h) + k/h²`.
#[derive(Clone, Debug, Serialize)]
pub struct HReport {
    pub h: i64,
    pub k: i64,
    pub value: f64,
    pub bound: f64,
}

pub fn reciprocity_h(h: i64, k: i64, prec: u32) -> Result<HReport> {
    if h < 1 || h > k || (h == 1 && k == 1) {
        return Err(Error::Domain(format!("need 1 ≤ h ≤ k, (h, k) ≠ (1, 1); got {h}/{k}")));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    let hbar = inverse_or_zero(h, k)?;
    let kbar = inverse_or_zero(k, h)?;
    let mut value = log_j41(hbar, k, prec)? - log_j41(kbar, h, prec)?;
    value -= vol41_over_2pi(prec) * k / h;
    let (hf, kf) = (h as f64, k as f64);
    let mut bound = (kf / hf).ln() + kf / (hf * hf);
    if h >= 2 {
        bound += cot_partial_max(h, k, 64)?.to_f64() / kf;
        bound += cotangent_sum_c0(kbar, h, 64)?.to_f64().abs() / hf;
    }
    Ok(HReport { h, k, value: value.to_f64(), bound })
}

/// Residual of `log|𝒥(e(h̄/k))| = log|𝒥(e(k̄/h))| − (2π/h)c₀(k̄/h) + O(E)`
/// with `E = k/h + max_{r'<h}|Σ_{n≤r'} cot(πnk̄/h)n/(hk)|`.
#[derive(Clone, Debug, Serialize)]
pub struct Th4Report {
    pub h: i64,
    pub k: i64,
    pub c0: f64,
    /// `(2π/h)|c₀(k̄/h)|`, the main term.
    pub main: f64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
}

pub fn th4_check(h: i64, k: i64, prec: u32) -> Result<Th4Report> {
    if h < 2 || h > k {
        return Err(Error::Domain(format!("need 2 ≤ h ≤ k, got {h}/{k}")));
    }
    if gcd(h, k) != 1 {
        return Err(Error::NotCoprime { a: h, b: k });
    }
    let hbar = inverse_or_zero(h, k)?;
    let kbar = mod_inverse(k, h)?;
    let c0 = cotangent_sum_c0(kbar, h, prec)?;
    if c0 >= 0 {
        return Err(Error::Domain(format!("c₀({kbar}/{h}) = {} is not negative", c0.to_f64())));
    }
    let main = Float::with_val(prec, &c0 * (pi(prec) * 2u32)) / h;
    let d = log_j41(hbar, k, prec)? - log_j41(kbar, h, prec)? + &main;
    let (hf, kf) = (h as f64, k as f64);
    let envelope = kf / hf + cot_partial_max(h, k, 64)?.to_f64() / kf;
    let residual = d.to_f64();
    Ok(Th4Report {
        h,
        k,
        c0: c0.to_f64(),
        main: -main.to_f64(),
        residual,
        envelope,
        ratio: residual / envelope,
    })
}

/// `h/k = [0; b₁, …, b_{2n}, X, Y]`, the family along which
/// `(2π/h)|c₀(k̄/h)|` is unbounded.
pub fn th4_family(b: &[i64], x: i64, y: i64) -> Result<Fraction> {
    let mut q = b.to_vec();
    q.extend([x, y]);
    Ok(crate::arith::ContinuedFraction::from_quotients(q)?.value())
}

/// `γ = (a, b; c, d)` in `SL₂(ℤ)`, acting by homography.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gamma {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Setup(format!("det ({a},{b};{c},{d}) = {} ≠ 1", a * d - b * c)));
        }
        if c == 0 {
            return Err(Error::Setup("γ(∞) = ∞ is not rational".into()));
        }
        // ±γ act identically; keep c > 0
        Ok(if c < 0 { Gamma { a: -a, b: -b, c: -c, d: -d } } else { Gamma { a, b, c, d } })
    }

    /// `γ(∞) = a/c`.
    pub fn cusp(&self) -> Fraction {
        Fraction::new(self.a, self.c).expect("c ≠ 0")
    }

    /// `(p, q, p̄, q̄)` with `γ = (p, −q̄; q, p̄)`.
    pub fn setup(&self, n: i64, d: i64) -> Result<ModularSetup> {
        modular_setup(self.a, self.c, self.d, -self.b, n, d)
    }
}

/// One sample `Q(x)` of the normalised ratio.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticSample {
    pub n: i64,
    pub k: i64,
    pub q: PComplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticFit {
    pub knot: &'static str,
    pub gamma: Gamma,
    pub d: i64,
    pub samples: Vec<AsymptoticSample>,
    /// Power of `k` left after removing the exponential growth, from the last
    /// two samples (the conjecture predicts 3/2).
    pub exponent: f64,
    /// Extrapolated limit of `Q`.
    pub constant: PComplex,
    /// Closed form, where one is available, and the `8c`-th root of unity
    /// `e(j/8c)` that best aligns it with `constant`.
    pub reference: Option<PComplex>,
    pub root_of_unity: Option<(i64, i64)>,
    pub rel_error: Option<f64>,
}

/// Polynomial extrapolation to `t = 0` through the last three `(t, y)`.
fn richardson(points: &[(Float, PComplex)]) -> PComplex {
    let pts = &points[points.len().saturating_sub(3)..];
    let p = pts[0].1.prec();
    let mut acc = PComplex::zero(p);
    for (i, (ti, yi)) in pts.iter().enumerate() {
        let mut w = Float::with_val(p, 1);
        for (j, (tj, _)) in pts.iter().enumerate() {
            if i != j {
                // Lagrange basis at 0: Π tj/(tj − ti)
                w *= Float::with_val(p, tj / Float::with_val(p, tj - ti));
            }
        }
        acc += &yi.scale(&w);
    }
    acc
}

/// `Q(x) = [𝒥(γx)/𝒥(x)]·(ħ/2π)^{3/2}·exp(−i(Vol − i·cs)/ħ)` along
/// `x = N/d`, `ħ = 2πi/(x − γ⁻¹(∞)) = 2πi·dq/k`, extrapolated to `N → ∞`.
pub fn extract_constant(knot: &KnotPreset, gamma: Gamma, d: i64, ns: &[i64], prec: u32) -> Result<AsymptoticFit> {
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("N list must be non-empty and increasing".into()));
    }
    let wp = prec + 32;
    let saddle = critical_point(knot, wp)?;
    let mut samples = Vec::new();
    let mut points = Vec::new();
    let mut logs = Vec::new();
    for &n in ns {
        let s = gamma.setup(n, d)?;
        let top = kashaev_eval(knot, s.gx, wp)?;
        let bottom = kashaev_eval(knot, s.x.fract(), wp)?;
        if bottom.abs().is_zero() {
            return Err(Error::Domain(format!("𝒥({}) vanishes", s.x)));
        }
        let ratio = &top / &bottom;
        // ħ/2π = i·dq/k; −i(2πV̂)/ħ = −V̂·k/(dq)
        let hbar_2pi = PComplex::new(Float::new(wp), rat(wp, d * s.q, s.k));
        let growth = saddle.v_hat.with_prec(wp).scale(&rat(wp, -s.k, d * s.q)).exp();
        let stripped = &ratio * &growth;
        logs.push((Float::with_val(wp, s.k).ln(), stripped.abs().ln()));
        let three_halves = Float::with_val(wp, 1.5);
        let q = &stripped * &hbar_2pi.powf(&three_halves);
        points.push((rat(wp, 1, n), q.clone()));
        samples.push(AsymptoticSample { n, k: s.k, q: q.with_prec(prec) });
    }
    let exponent = match logs.len() {
        1 => f64::NAN,
        l => {
            let (a, b) = (&logs[l - 2], &logs[l - 1]);
            Float::with_val(wp, &b.1 - &a.1).to_f64() / Float::with_val(wp, &b.0 - &a.0).to_f64()
        }
    };
    let constant = richardson(&points).with_prec(prec);
    let alpha = gamma.cusp();
    let reference = match knot.name {
        "4_1" | "5_2" => Some(closed_form_cd(knot, alpha, prec)?),
        _ => None,
    };
    let (root_of_unity, rel_error) = match &reference {
        Some(r) => {
            let (j, err) = align_root_of_unity(&constant, r, 8 * alpha.den());
            (Some((j, 8 * alpha.den())), Some(err))
        }
        None => (None, None),
    };
    Ok(AsymptoticFit {
        knot: knot.name,
        gamma,
        d,
        samples,
        exponent,
        constant,
        reference: reference.map(|r| r.with_prec(prec)),
        root_of_unity,
        rel_error,
    })
}

/// The `j` minimising `|e(j/n)·value − reference|/|reference|`, and that error.
pub fn align_root_of_unity(value: &PComplex, reference: &PComplex, n: i64) -> (i64, f64) {
    let p = value.prec();
    (0..n)
        .map(|j| {
            let z = &e_rat(j, n, p) * value;
            (j, ((&z - reference).abs() / reference.abs()).to_f64())
        })
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
}

fn one_minus(z: &PComplex) -> PComplex {
    &PComplex::one(z.prec()) - z
}

/// `C_K(α)·D_{K,0}(α)` from its closed form, for `K ∈ {4₁, 5₂}`.
///
/// 4₁: `c·δ^{−1/2}·(Π_g |ω_g|^{2g/c})·Σ_{r=1}^c Π_{g≤r}|ω_g|²` with
/// `δ = i√3`, `ω_g = 1 − e(gα − 5/(6c))`.
///
/// 5₂: `e(s(α)/2)·c^{1/2}·δ^{−1/2}·e(μ₁(c+1)/(2c))·Π_g ω_g^{−g/c}χ_g^{−2g/c}
/// ·Σ_{r₁,r₂} e((μ₁(r₁+r₂) + μ₂r₁)/c + r₁/2 − αr₁(1+r₁+2r₂)/2)
/// Π_{g≤r₁}ω_g^{−1} Π_{g≤r₂}χ_g^{−2}` with `δ = 3τ − 2τ²`,
/// `ω_g = 1 − e(−gα + μ₁/c)`, `χ_g = 1 − e(gα − μ₂/c)`, principal logarithms.
pub fn closed_form_cd(knot: &KnotPreset, alpha: Fraction, prec: u32) -> Result<PComplex> {
    let wp = prec + 32;
    let c = alpha.den();
    let (a, cf) = (alpha.num(), Float::with_val(wp, c));
    let out = match knot.name {
        "4_1" => {
            let delta = PComplex::new(Float::new(wp), Float::with_val(wp, 3).sqrt());
            let minus_half = Float::with_val(wp, -0.5);
            let omega: Vec<Float> = (1..=c)
                .map(|g| {
                    // gα − 5/(6c) = (6ga − 5)/(6c)
                    one_minus(&e_rat(6 * g * a - 5, 6 * c, wp)).abs()
                })
                .collect();
            let mut prod = Float::with_val(wp, 1);
            for (g, w) in omega.iter().enumerate() {
                let e = Float::with_val(wp, 2 * (g as i64 + 1)) / &cf;
                prod *= Float::with_val(wp, w.pow(&e));
            }
            let mut sum = Float::new(wp);
            let mut run = Float::with_val(wp, 1);
            for w in &omega {
                run *= Float::with_val(wp, w.square_ref());
                sum += &run;
            }
            delta.powf(&minus_half).scale(&(prod * sum * &cf))
        }
        "5_2" => {
            let s = critical_point(knot, wp)?;
            let (mu1, mu2) = (&s.mu[0], &s.mu[1]);
            let e1 = e_c(mu1);
            let tau = &e_c(mu2) - &e1;
            let three_tau = tau.scale(&Float::with_val(wp, 3));
            let delta = &three_tau - &(&tau * &tau).scale(&Float::with_val(wp, 2));
            let inv_c = Float::with_val(wp, 1) / &cf;
            let mu1c = mu1.scale(&inv_c);
            let mu2c = mu2.scale(&inv_c);
            let omega: Vec<PComplex> = (1..=c).map(|g| one_minus(&e_c(&(&mu1c - &frac_c(-g * a, c, wp))))).collect();
            let chi: Vec<PComplex> = (1..=c).map(|g| one_minus(&e_c(&(&frac_c(g * a, c, wp) - &mu2c)))).collect();
            let mut log_prod = PComplex::zero(wp);
            for g in 1..=c {
                let w = Float::with_val(wp, g) / &cf;
                log_prod -= &omega[g as usize - 1].ln().scale(&w);
                log_prod -= &chi[g as usize - 1].ln().scale(&Float::with_val(wp, &w * 2u32));
            }
            let head = e_c(&mu1.scale(&(Float::with_val(wp, c + 1) / (2 * c))));
            let mut om_pref = vec![PComplex::one(wp)];
            let mut chi_pref = vec![PComplex::one(wp)];
            for g in 0..c as usize {
                om_pref.push(&om_pref[g] / &omega[g]);
                chi_pref.push(&chi_pref[g] / &(&chi[g] * &chi[g]));
            }
            let mut sum = PComplex::zero(wp);
            for r1 in 1..=c {
                for r2 in 1..=c {
                    let mut arg = &mu1c.scale(&Float::with_val(wp, r1 + r2)) + &mu2c.scale(&Float::with_val(wp, r1));
                    // r₁/2 − α r₁(1 + r₁ + 2r₂)/2, exactly
                    let lin = Fraction::new(r1, 2)? - Fraction::new(a * r1 * (1 + r1 + 2 * r2), 2 * c)?;
                    arg.re += rat(wp, lin.num(), lin.den());
                    let t = &(&e_c(&arg) * &om_pref[r1 as usize]) * &chi_pref[r2 as usize];
                    sum += &t;
                }
            }
            let dk = dedekind_sum(a, c)?;
            let phase = e_rat(dk.num(), 2 * dk.den(), wp);
            let minus_half = Float::with_val(wp, -0.5);
            let mut v = &(&phase * &delta.powf(&minus_half)) * &(&head * &log_prod.exp());
            v = &v * &sum;
            v.scale(&Float::with_val(wp, c).sqrt())
        }
        other => return Err(Error::Domain(format!("no closed form for {other}"))),
    };
    Ok(out.with_prec(prec))
}

fn frac_c(num: i64, den: i64, prec: u32) -> PComplex {
    PComplex::from_real(rat(prec, num, den))
}

/// The congruence sum
/// `C(s) = Σ_{i,j} Σ_{g=1}^q B₁(⟨gp̄ − ℓ_{i,j}(s)⟩/q)·ψ_i((g − ℓ_{i,j}(μ))/q)`
/// with `ψ₁ = 𝔣`, `ψ₂ = 𝔣(1 − ·)`, `ψ₃ = −𝔣`, `ψ₄ = −𝔣(1 − ·)`.
pub fn congruence_sum(knot: &KnotPreset, s: &[i64], p: i64, q: i64, mu: &[PComplex], prec: u32) -> Result<PComplex> {
    if s.len() != knot.m || mu.len() != knot.m {
        return Err(Error::Domain(format!("{} needs {} residues and saddle coordinates", knot.name, knot.m)));
    }
    if q < 1 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime { a: p, b: q });
    }
    let wp = prec + 16;
    let pbar = inverse_or_zero(p, q)?;
    let mut out = PComplex::zero(wp);
    for (i, f) in knot.all_forms() {
        let ls: i64 = f.iter().zip(s).map(|(&c, &x)| c as i64 * x).sum();
        let mut lmu = PComplex::zero(wp);
        for (u, &c) in f.iter().enumerate().take(knot.m) {
            match c {
                1 => lmu += &mu[u].with_prec(wp),
                -1 => lmu -= &mu[u].with_prec(wp),
                _ => {}
            }
        }
        for g in 1..=q {
            // B₁(⟨n⟩/q) = ⟨n⟩/q − 1/2
            let b1 = rat(wp, 2 * rep1(g * pbar - ls, q) - q, 2 * q);
            let mut z = &frac_c(g, 1, wp) - &lmu;
            z = z.scale(&rat(wp, 1, q));
            let psi = match i {
                0 => f_log1me(&z)?,
                1 => f_log1me(&one_minus(&z))?,
                2 => -f_log1me(&z)?,
                _ => -f_log1me(&one_minus(&z))?,
            };
            out += &psi.scale(&b1);
        }
    }
    Ok(out.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::knot;

    #[test]
    fn ir_small_case() {
        let s = modular_setup(0, 1, 1, 1, 20, 1).unwrap();
        let rep = verify_ir(&s, 7, &Precision::new(192).unwrap()).unwrap();
        assert!(rep.defect < 1e-20, "{rep:?}");
    }

    #[test]
    fn ir_sweep_agrees_with_single_rows() {
        let s = modular_setup(1, 2, 1, 0, 5, 3).unwrap();
        let prec = Precision::new(128).unwrap();
        let rows = ir_sweep(&s, &prec).unwrap();
        assert_eq!(rows.len() as i64, s.k - 1);
        for r in [1, 4, s.k - 1] {
            let one = verify_ir(&s, r, &prec).unwrap();
            assert!((one.defect - rows[r as usize - 1].defect).abs() < 1e-25);
        }
        assert!(rows.iter().all(|r| r.defect < 1e-15));
    }

    #[test]
    fn thp_is_exact() {
        for r in 0..7 {
            assert!(verify_thp_decomposition(5, 7, r, 128).unwrap() < 2f64.powi(-128 + 20));
        }
        let all = thp_sweep(7, 200, 128).unwrap();
        assert!(all.iter().all(|&d| d < 2f64.powi(-128 + 24)));
    }

    #[test]
    fn figure_eight_constant_at_zero() {
        let k = knot("4_1").unwrap();
        let v = closed_form_cd(k, Fraction::integer(0), 128).unwrap();
        // (i√3)^{−1/2} = 3^{−1/4} e(−1/8)
        let want = e_rat(-1, 8, 128).scale(&Float::with_val(128, 3).pow(-0.25f64));
        assert!((&v - &want).abs() < 1e-30);
    }

    #[test]
    fn congruence_sum_is_periodic() {
        let k = knot("5_2").unwrap();
        let mu = critical_point(k, 96).unwrap().mu;
        let a = congruence_sum(k, &[1, 2], 1, 3, &mu, 96).unwrap();
        let b = congruence_sum(k, &[4, -1], 1, 3, &mu, 96).unwrap();
        assert!((&a - &b).abs() < 1e-25);
    }
}
