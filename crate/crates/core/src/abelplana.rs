//! Abel–Plana boundary kernels: `H_κ(u, v)`, the reciprocity error terms
//! `ℰ_s(λ, κ)` and `ℰ*_s(λ, κ)`, and their Taylor coefficients in κ.
//!
//! All line integrals run over `(0, T]` with exp-sinh quadrature; the
//! integrands decay like `e^{−2πt}`, so the tail beyond `T` is below the
//! working precision. Integrands are evaluated at
//! [`Precision::integrand_bits`], since only `2^{−prec/2}` is asked of them.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::Float;

use crate::arith::{rep1, Fraction};
use crate::quad;
use crate::special::{
    bernoulli_tilde, e_rat, f_derivative, f_unchecked, pi, rat, PComplex, Precision,
};
use crate::{Error, Result};

/// Argument of the kernels: exact rationals when the caller has them (exact
/// angle reduction, exact edge detection), otherwise a complex point.
#[derive(Clone, Debug)]
pub enum Point {
    Rat(Fraction),
    Complex(PComplex),
}

impl Point {
    fn to_complex(&self, prec: u32) -> PComplex {
        match self {
            Point::Rat(x) => PComplex::from_real(rat(prec, x.num(), x.den())),
            Point::Complex(z) => z.with_prec(prec),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Point::Rat(x) => x.num() == 0,
            Point::Complex(z) => z.re.is_zero() && z.im.is_zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KernelParams {
    /// κ ∈ (0, 1], usually `d/k`.
    pub kappa: Fraction,
    pub u: Point,
    pub v: Fraction,
}

#[derive(Clone, Debug)]
pub struct ErrParams {
    pub s: i64,
    pub lambda: Point,
    pub kappa: Fraction,
    pub p: i64,
    pub pbar: i64,
    pub q: i64,
}

/// Integrand data for one `K(u, v) = i∫₀^∞ [𝔣(u − iκt)D − 𝔣(u + iκt)D̄] dt`,
/// `D = 1/(e(v)e^{2πt} − 1)`.
enum Term {
    /// Real `0 < u < 1`. Integrating by parts against
    /// `P_v(t) = log(1 − e(−v)e^{−2πt})/2π` (an antiderivative of `D`) gives
    /// `K = −𝔣(u)B̃₁(v) + πiκB̃₂(v)/2 − 2πκ∫Re(C̄·P_v)dt`, `C = cot π(u + iκt)`:
    /// a real integrand with no logarithms, and `P_v` is shared by every `u`.
    Parts { sc: Float, s2: Float, v: usize },
    Direct { u: PComplex, trig: Option<(Float, Float)>, ev: PComplex, v_int: bool },
}

fn sin_cos_pi(x: &Point, prec: u32) -> Option<(Float, Float)> {
    match x {
        Point::Rat(f) => {
            // sin πx, cos πx = Im, Re of e(x/2)
            let z = e_rat(f.num(), 2 * f.den(), prec);
            Some((z.im, z.re))
        }
        Point::Complex(z) if z.im.is_zero() => {
            let mut s = Float::with_val(prec, &z.re * pi(prec));
            let mut c = Float::new(prec);
            s.sin_cos_mut(&mut c);
            Some((s, c))
        }
        Point::Complex(_) => None,
    }
}

fn strictly_inside(u: &Point) -> bool {
    match u {
        Point::Rat(f) => f.num() > 0 && f.num() < f.den(),
        Point::Complex(z) => z.im.is_zero() && z.re > 0 && z.re < 1,
    }
}

type NodeTable<T> = Arc<Vec<T>>;

/// `P_v(t)` at the exp-sinh nodes of one level.
fn p_table(prec: u32, level: u32, cutoff: u32, v: Fraction) -> NodeTable<PComplex> {
    type Key = (u32, u32, u32, Fraction);
    static CACHE: OnceLock<Mutex<HashMap<Key, NodeTable<PComplex>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (prec, level, cutoff, v.fract());
    if let Some(t) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return t.clone();
    }
    let p = prec + 8;
    let two_pi = pi(p) * 2u32;
    let emv = e_rat(-v.num(), v.den(), p);
    let vals: Vec<PComplex> = quad::exp_sinh_nodes(prec, level, cutoff)
        .iter()
        .map(|(t, _)| {
            let x = Float::with_val(p, -Float::with_val(p, t * &two_pi));
            let mut z = if v.is_integer() {
                // log(1 − e^{−2πt}) without cancellation near t = 0
                PComplex::from_real(Float::with_val(p, -Float::with_val(p, x.exp_m1_ref())).ln())
            } else {
                let e = x.exp();
                PComplex::new(1u32 - Float::with_val(p, &emv.re * &e), -Float::with_val(p, &emv.im * &e)).ln()
            };
            z.re /= &two_pi;
            z.im /= &two_pi;
            z.set_prec(prec);
            z
        })
        .collect();
    let t = Arc::new(vals);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, t.clone());
    t
}

/// `(sinh²πκt, sinh πκt·cosh πκt)` at the nodes of one level.
fn kappa_table(prec: u32, level: u32, cutoff: u32, kappa: Fraction) -> NodeTable<(Float, Float)> {
    type Key = (u32, u32, u32, Fraction);
    thread_local! {
        static CACHE: RefCell<HashMap<Key, NodeTable<(Float, Float)>>> = RefCell::new(HashMap::new());
    }
    let key = (prec, level, cutoff, kappa);
    if let Some(t) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return t;
    }
    let pk = Float::with_val(prec, pi(prec) * kappa.num()) / kappa.den();
    let vals: Vec<(Float, Float)> = quad::exp_sinh_nodes(prec, level, cutoff)
        .iter()
        .map(|(t, _)| {
            let (mut sh, mut ch) = (Float::with_val(prec, t * &pk), Float::new(prec));
            sh.sinh_cosh_mut(&mut ch);
            (Float::with_val(prec, sh.square_ref()), sh * ch)
        })
        .collect();
    let t = Arc::new(vals);
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 64 {
            c.clear();
        }
        c.insert(key, t.clone());
    });
    t
}

/// `F₋·D − F₊·D̄` at one node, `F± = 𝔣(u ± iκt)`.
fn direct_integrand(u: &PComplex, trig: &Option<(Float, Float)>, ev: &PComplex, v_int: bool, kappa: &Float, t: &Float, prec: u32) -> PComplex {
    let pi = pi(prec);
    let two_pi_t = Float::with_val(prec, t * &pi) * 2u32;
    let em1 = Float::with_val(prec, two_pi_t.exp_m1_ref());
    let y = Float::with_val(prec, t * kappa);
    let (fm, fp) = match trig {
        Some((s, c)) => {
            // 2 sin π(u + iy) = 2(sin πu cosh πy + i cos πu sinh πy)
            let pi_y = Float::with_val(prec, &y * &pi);
            let (mut sh, mut ch) = (pi_y.clone(), Float::new(prec));
            sh.sinh_cosh_mut(&mut ch);
            let mut m = Float::with_val(prec, s.square_ref());
            m += Float::with_val(prec, sh.square_ref());
            m *= 4u32;
            m.ln_mut();
            m /= 2u32;
            let arg = Float::with_val(prec, Float::with_val(prec, c * &sh).atan2_ref(&Float::with_val(prec, s * &ch)));
            let mut phase = Float::with_val(prec, &u.re - 0.5f64);
            phase *= &pi;
            let fp = PComplex::new(Float::with_val(prec, &m - &pi_y), Float::with_val(prec, &arg + &phase));
            let fm = PComplex::new(Float::with_val(prec, &m + &pi_y), Float::with_val(prec, &phase - &arg));
            (fm, fp)
        }
        None => {
            let fp = f_unchecked(&PComplex::new(u.re.clone(), Float::with_val(prec, &u.im + &y)));
            let fm = f_unchecked(&PComplex::new(u.re.clone(), Float::with_val(prec, &u.im - &y)));
            (fm, fp)
        }
    };
    if v_int {
        let mut g = &fm - &fp;
        g.re /= &em1;
        g.im /= &em1;
        g
    } else {
        let big_e = Float::with_val(prec, &em1 + 1u32);
        let den = PComplex::new(Float::with_val(prec, &ev.re * &big_e) - 1u32, Float::with_val(prec, &ev.im * &big_e));
        let d = den.recip();
        &(&fm * &d) - &(&fp * &d.conj())
    }
}

/// `Σ K_κ(u, v)` over the given pairs, sharing one quadrature. `parts`
/// enables the integrated-by-parts form for real interior `u`.
fn kernel_sum(pairs: &[(Point, Fraction)], kappa: Fraction, prec: &Precision, parts: bool) -> Result<PComplex> {
    let wp = prec.integrand_bits();
    let hp = prec.bits + 16;
    let cutoff = prec.cutoff.ceil() as u32;
    let pi_h = pi(hp);
    let kappa_h = rat(hp, kappa.num(), kappa.den());
    let mut closed = PComplex::zero(hp);
    let mut vs: Vec<Fraction> = Vec::new();
    let mut terms = Vec::with_capacity(pairs.len());
    for (u, v) in pairs {
        if parts && strictly_inside(u) {
            let uh = u.to_complex(hp);
            let f = f_unchecked(&uh);
            let b1 = bernoulli_tilde(1, *v, hp);
            let b2 = bernoulli_tilde(2, *v, hp);
            closed -= &f.scale(&b1);
            closed.im += Float::with_val(hp, &pi_h * &kappa_h) * b2 / 2u32;
            let (s, c) = sin_cos_pi(u, wp).expect("real point");
            let vi = vs.iter().position(|w| *w == v.fract()).unwrap_or_else(|| {
                vs.push(v.fract());
                vs.len() - 1
            });
            terms.push(Term::Parts { sc: Float::with_val(wp, &s * &c), s2: s.square(), v: vi });
        } else {
            terms.push(Term::Direct { trig: sin_cos_pi(u, wp), u: u.to_complex(wp), ev: e_rat(v.num(), v.den(), wp), v_int: v.is_integer() });
        }
    }
    let k = rat(wp, kappa.num(), kappa.den());
    let scale = -Float::with_val(wp, &k * pi(wp)) * 2u32;
    let mut tables: Option<(u32, NodeTable<(Float, Float)>, Vec<NodeTable<PComplex>>)> = None;
    let int = quad::exp_sinh(cutoff, wp, prec.quad_bits() + 6, prec.max_level, |t, level, idx| {
        let mut acc = PComplex::zero(wp);
        if tables.as_ref().map(|x| x.0) != Some(level) {
            let ps = vs.iter().map(|v| p_table(wp, level, cutoff, *v)).collect();
            tables = Some((level, kappa_table(wp, level, cutoff, kappa), ps));
        }
        let (_, kt, ps) = tables.as_ref().expect("tables set above");
        let (sh2, shch) = &kt[idx];
        // shch·Im P_v and Re P_v per distinct v
        let per_v: Vec<(Float, &Float)> = ps.iter().map(|p| (Float::with_val(wp, shch * &p[idx].im), &p[idx].re)).collect();
        let mut real = Float::new(wp);
        for tm in &terms {
            match tm {
                Term::Parts { sc, s2, v } => {
                    // Re(C̄·P) = (sc·Re P − sh·ch·Im P)/(s² + sh²)
                    let (a, re_p) = &per_v[*v];
                    let mut num = Float::with_val(wp, sc * *re_p);
                    num -= a;
                    num /= Float::with_val(wp, s2 + sh2);
                    real += num;
                }
                Term::Direct { u, trig, ev, v_int } => {
                    acc += &direct_integrand(u, trig, ev, *v_int, &k, t, wp).mul_i();
                }
            }
        }
        acc.re += real * &scale;
        acc
    })?;
    let mut out = &closed + &int;
    out.set_prec(prec.bits);
    Ok(out)
}

fn check_kappa(kappa: Fraction) -> Result<()> {
    if kappa.num() <= 0 || kappa.num() > kappa.den() {
        return Err(Error::Domain(format!("κ = {kappa} outside (0, 1]")));
    }
    Ok(())
}

/// `H_κ(1, 0) = −log(κ)/2 − πi/4 + πiκ/12`.
pub fn h_one_zero(kappa: Fraction, bits: u32) -> PComplex {
    let p = bits + 8;
    let k = rat(p, kappa.num(), kappa.den());
    let re = -Float::with_val(p, k.ln_ref()) / 2u32;
    let pi = pi(p);
    let im = Float::with_val(p, &pi * &k) / 12u32 - Float::with_val(p, &pi / 4u32);
    let mut z = PComplex::new(re, im);
    z.set_prec(bits);
    z
}

/// `H_κ(1, 0)` without the closed form: `H_κ(1 − ε, 0)` from the line
/// integral at eight `ε/κ = 2^{−24}, …, 2^{−31}`, extrapolated to `ε = 0` in
/// the basis `1, ε log ε, ε, ε² log ε, ε², …` of its expansion.
pub fn h_one_zero_by_limit(kappa: Fraction, prec: &Precision) -> Result<PComplex> {
    check_kappa(kappa)?;
    let wp = 2 * prec.bits + 64;
    let inner = Precision::new(wp)?;
    let shift = 64 - (kappa.den() as u64 / kappa.num() as u64).leading_zeros() as i32;
    let n = 8;
    let eps: Vec<Float> = (0..n).map(|j| Float::with_val(wp, Float::u_exp(1, -(24 + shift + j as i32)))).collect();
    let basis = |e: &Float, c: usize| -> Float {
        if c == 0 {
            return Float::with_val(wp, 1);
        }
        let pow = Float::with_val(wp, e.clone().pow(((c + 1) / 2) as u32));
        if c % 2 == 1 {
            pow * Float::with_val(wp, e.ln_ref())
        } else {
            pow
        }
    };
    let mut rows: Vec<Vec<Float>> = Vec::with_capacity(n);
    let (mut re, mut im) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for e in &eps {
        let u = Float::with_val(wp, 1) - e;
        let params = KernelParams { kappa, u: Point::Complex(PComplex::from_real(u)), v: Fraction::integer(0) };
        let h = h_kernel(&params, &inner)?;
        rows.push((0..n).map(|c| basis(e, c)).collect());
        re.push(h.re);
        im.push(h.im);
    }
    let mut out = PComplex::new(solve_first(rows.clone(), re), solve_first(rows, im));
    out.set_prec(prec.bits);
    Ok(out)
}

/// First unknown of a small dense real system, by partial pivoting.
fn solve_first(mut a: Vec<Vec<Float>>, mut b: Vec<Float>) -> Float {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap()).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = Float::with_val(a[row][col].prec(), &a[row][col] / &a[col][col]);
            for c in col..n {
                let t = Float::with_val(f.prec(), &f * &a[col][c]);
                a[row][c] -= t;
            }
            let t = Float::with_val(f.prec(), &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Float::new(b[0].prec()); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc -= Float::with_val(acc.prec(), &a[row][c] * &x[c]);
        }
        x[row] = acc / &a[row][row];
    }
    x.swap_remove(0)
}

/// `H_κ(u, v)` from its line-integral forms.
pub fn h_kernel(params: &KernelParams, prec: &Precision) -> Result<PComplex> {
    check_kappa(params.kappa)?;
    let wp = prec.bits + 16;
    let u = params.u.to_complex(wp);
    if u.re < 0 || u.re > 1 {
        return Err(Error::Domain(format!("H_κ needs 0 ≤ Re u ≤ 1, got {u}")));
    }
    let pair = [(params.u.clone(), params.v)];
    if params.v.is_integer() {
        let one = matches!(&params.u, Point::Rat(x) if x.num() == x.den())
            || (u.re == 1 && u.im.is_zero());
        if one {
            return Ok(h_one_zero(params.kappa, prec.bits));
        }
        if params.u.is_zero() || (u.im.is_zero() && (u.re <= 0 || u.re >= 1)) {
            return Err(Error::Pole(format!("H_κ(u, 0) needs 0 < u < 1, got u = {u}")));
        }
        // H = −𝔣(u)/2 + K(u, 0)
        let mut f = f_unchecked(&u);
        f.re /= 2u32;
        f.im /= 2u32;
        let mut out = &kernel_sum(&pair, params.kappa, prec, true)? - &f;
        out.set_prec(prec.bits);
        Ok(out)
    } else {
        kernel_sum(&pair, params.kappa, prec, true)
    }
}

/// `∫₀^∞ Im((−it)^ℓ / (e(v)e^{2πt} − 1)) dt` by quadrature.
pub fn b_integral(l: u32, v: Fraction, prec: &Precision) -> Result<Float> {
    let wp = prec.integrand_bits();
    let v = v.fract();
    let ev = e_rat(v.num(), v.den(), wp);
    // (−i)^ℓ cycles through 1, −i, −1, i
    let rot = [(1, 0), (0, -1), (-1, 0), (0, 1)][(l % 4) as usize];
    let val = quad::exp_sinh(prec.cutoff.ceil() as u32, wp, prec.quad_bits() + 4, prec.max_level, |t, _, _| {
        let two_pi_t = Float::with_val(wp, t * pi(wp)) * 2u32;
        let den = if v.num() == 0 {
            PComplex::from_real(Float::with_val(wp, two_pi_t.exp_m1_ref()))
        } else {
            let e = Float::with_val(wp, two_pi_t.exp_ref());
            PComplex::new(Float::with_val(wp, &ev.re * &e) - 1u32, Float::with_val(wp, &ev.im * &e))
        };
        let d = den.recip();
        let tl = Float::with_val(wp, t.clone().pow(l));
        // Im((a + ib)·(x + iy)) with (a, b) = (−i)^ℓ
        let im = Float::with_val(wp, &d.im * rot.0) + Float::with_val(wp, &d.re * rot.1);
        PComplex::from_real(im * tl)
    })?;
    Ok(Float::with_val(prec.bits, &val.re))
}

/// Closed form of [`b_integral`]: `(−1)^ℓ B̃_{ℓ+1}(v) / (2(ℓ+1))`.
pub fn b_integral_closed(l: u32, v: Fraction, bits: u32) -> Float {
    let b = bernoulli_tilde(l as usize + 1, v, bits + 8);
    let sign = if l % 2 == 0 { 1 } else { -1 };
    Float::with_val(bits, b * sign / (2 * (l + 1)))
}

fn lambda_parts(lambda: &Point, wp: u32) -> Result<PComplex> {
    let z = lambda.to_complex(wp);
    if z.re < 0 || z.re >= 1 {
        return Err(Error::Domain(format!("λ = {z} needs 0 ≤ Re λ < 1")));
    }
    if z.im.is_zero() && z.re.is_zero() && !lambda.is_zero() {
        return Err(Error::Domain("λ on the excluded ray".into()));
    }
    Ok(z)
}

/// `(g − λ)/q` as a kernel point (exact for rational λ).
fn shifted(g: i64, lambda: &Point, q: i64, sign: i64, base: i64, wp: u32) -> Point {
    // sign = −1: (g − λ)/q; sign = +1: (base − g + λ)/q
    match lambda {
        Point::Rat(l) => {
            let head = Fraction::integer(if sign < 0 { g } else { base - g });
            let x = if sign < 0 { head - *l } else { head + *l };
            Point::Rat(x * Fraction::new(1, q).expect("q ≥ 1"))
        }
        Point::Complex(l) => {
            let head = Float::with_val(wp, if sign < 0 { g } else { base - g });
            let re = if sign < 0 { Float::with_val(wp, &head - &l.re) } else { Float::with_val(wp, &head + &l.re) };
            let im = if sign < 0 { -l.im.clone() } else { l.im.clone() };
            Point::Complex(PComplex::new(re / q, im / q))
        }
    }
}

fn near_pole(points: &[PComplex], allow_edge: Option<usize>, bits: u32) -> Result<()> {
    let tol = Float::with_val(bits, Float::u_exp(1, -((bits / 4) as i32)));
    for (i, z) in points.iter().enumerate() {
        if Some(i) == allow_edge {
            continue;
        }
        let d0 = z.abs();
        let d1 = (&PComplex::one(bits) - z).abs();
        if d0 < tol || d1 < tol {
            return Err(Error::Pole(format!("kernel point {z} within 2^-{} of an integer", bits / 4)));
        }
    }
    Ok(())
}

fn check_err_params(params: &ErrParams) -> Result<()> {
    check_kappa(params.kappa)?;
    if params.q < 1 || crate::arith::gcd(params.p, params.q) != 1 {
        return Err(Error::NotCoprime { a: params.p, b: params.q });
    }
    Ok(())
}

/// `ℰ_s(λ, κ) = −H_κ((⟨ps⟩ − λ)/q, 0) − Σ_{g ≢ ps} i∫[…]dt`, assembled as
/// `½𝔣(u₀) − i∫Σ_g[𝔣(u_g − iκt)D_g − 𝔣(u_g + iκt)D̄_g]dt` (the two forms agree
/// through the −𝔣(u)/2 boundary term of `H_κ(u, 0)`).
pub fn err_e(params: &ErrParams, prec: &Precision) -> Result<PComplex> {
    check_err_params(params)?;
    let wp = prec.bits + 16;
    let (q, p, pbar, s) = (params.q, params.p, params.pbar, params.s);
    let _ = lambda_parts(&params.lambda, wp)?;
    let g0 = rep1(p * s, q);
    let head_is_one = params.lambda.is_zero() && g0 == q;
    let mut pairs = Vec::with_capacity(q as usize);
    let mut points = Vec::with_capacity(q as usize);
    for g in 1..=q {
        if head_is_one && g == g0 {
            continue;
        }
        let u = shifted(g, &params.lambda, q, -1, 0, wp);
        points.push(u.to_complex(wp));
        pairs.push((u, Fraction::new(g * pbar - s, q)?));
    }
    let edge = if params.lambda.is_zero() { points.iter().position(|z| z.re == 1) } else { None };
    near_pole(&points, edge, prec.bits)?;
    let ksum = kernel_sum(&pairs, params.kappa, prec, true)?;
    let head = if head_is_one {
        -h_one_zero(params.kappa, wp)
    } else {
        let u0 = shifted(g0, &params.lambda, q, -1, 0, wp).to_complex(wp);
        let mut f = f_unchecked(&u0);
        f.re /= 2u32;
        f.im /= 2u32;
        f
    };
    let mut out = &head - &ksum;
    out.set_prec(prec.bits);
    Ok(out)
}

/// `ℰ*_r(λ, κ) = ½𝔣((q − ⟨pr⟩ + λ)/q) + Σ_g i∫[𝔣(w_g − iκt)D̄_g − 𝔣(w_g + iκt)D_g]dt`
/// with `w_g = (q − g + λ)/q`; at `λ = 0` it is `conj ℰ_r(0, κ)`.
pub fn err_estar(params: &ErrParams, prec: &Precision) -> Result<PComplex> {
    check_err_params(params)?;
    if params.lambda.is_zero() {
        return Ok(err_e(params, prec)?.conj());
    }
    let wp = prec.bits + 16;
    let (q, p, pbar, s) = (params.q, params.p, params.pbar, params.s);
    let _ = lambda_parts(&params.lambda, wp)?;
    // the mirrored integrand F₋D̄ − F₊D is K at −v
    let mut pairs = Vec::with_capacity(q as usize);
    let mut points = Vec::with_capacity(q as usize);
    for g in 1..=q {
        let w = shifted(g, &params.lambda, q, 1, q, wp);
        points.push(w.to_complex(wp));
        pairs.push((w, Fraction::new(s - g * pbar, q)?));
    }
    near_pole(&points, None, prec.bits)?;
    let ksum = kernel_sum(&pairs, params.kappa, prec, true)?;
    let g0 = rep1(p * s, q);
    let w0 = shifted(g0, &params.lambda, q, 1, q, wp).to_complex(wp);
    let mut head = f_unchecked(&w0);
    head.re /= 2u32;
    head.im /= 2u32;
    let mut out = &head + &ksum;
    out.set_prec(prec.bits);
    Ok(out)
}

/// Taylor coefficient `ℰ_{s,ℓ}(λ)` of `ℰ_s(λ, d/k)` in powers of `qd/k`
/// (`starred` selects `ℰ*_{s,ℓ}`).
///
/// `ℓ = 0`: `Σ_g 𝔣(u_g) B₁(⟨gp̄ − s⟩/q)`; `ℓ ≥ 1`:
/// `c_ℓ Σ_g 𝔣^{(ℓ)}(u_g) B̃_{ℓ+1}((gp̄ − s)/q)` with `c_ℓ = (−1)^ℓ/(q^ℓ(ℓ+1)!)`,
/// `u_g = (g − λ)/q`. The starred coefficients use `w_g = (q − g + λ)/q` and
/// `c_ℓ = 1/(q^ℓ(ℓ+1)!)`.
pub fn err_taylor(s: i64, l: u32, lambda: &PComplex, p: i64, pbar: i64, q: i64, starred: bool, bits: u32) -> Result<PComplex> {
    if lambda.re < 0.0625 || lambda.re > 0.9375 {
        return Err(Error::Domain(format!("Re λ = {} too close to 0 or 1", lambda.re)));
    }
    if crate::arith::gcd(p, q) != 1 {
        return Err(Error::NotCoprime { a: p, b: q });
    }
    let wp = bits + 16;
    let lam = Point::Complex(lambda.with_prec(wp));
    let mut acc = PComplex::zero(wp);
    for g in 1..=q {
        let x = if starred { shifted(g, &lam, q, 1, q, wp) } else { shifted(g, &lam, q, -1, 0, wp) }.to_complex(wp);
        let fd = f_derivative(l, &x)?;
        let b = if l == 0 {
            let r = rep1(g * pbar - s, q);
            Float::with_val(wp, r) / q - 0.5f64
        } else {
            bernoulli_tilde(l as usize + 1, Fraction::new(g * pbar - s, q)?, wp)
        };
        acc += &fd.scale(&b);
    }
    if l > 0 {
        let mut c = Float::with_val(wp, 1);
        for j in 1..=(l + 1) {
            c /= j;
        }
        for _ in 0..l {
            c /= q;
        }
        if !starred && l % 2 == 1 {
            c = -c;
        }
        acc = acc.scale(&c);
    }
    acc.set_prec(bits);
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(a: i64, b: i64) -> Fraction {
        Fraction::new(a, b).unwrap()
    }

    fn small(z: &PComplex, bits: i32) -> bool {
        z.abs() < Float::with_val(z.prec(), Float::u_exp(1, -bits))
    }

    #[test]
    fn h_one_zero_from_the_integral_limit() {
        // H_κ(u, 0) is continuous as u → 1⁻; compare u = 1 − 2^{-40}
        let prec = Precision::new(128).unwrap();
        let kappa = fr(1, 8);
        let near = KernelParams { kappa, u: Point::Complex(PComplex::from_real(Float::with_val(144, 1) - Float::with_val(144, Float::u_exp(1, -40)))), v: Fraction::integer(0) };
        let a = h_kernel(&near, &prec).unwrap();
        let b = h_one_zero(kappa, 128);
        assert!(small(&(&a - &b), 30), "{a} vs {b}");
    }

    #[test]
    fn h_one_zero_extrapolated() {
        let prec = Precision::new(128).unwrap();
        for den in [8, 64, 512] {
            let kappa = fr(1, den);
            let a = h_one_zero_by_limit(kappa, &prec).unwrap();
            assert!(small(&(&a - &h_one_zero(kappa, 128)), 64));
        }
    }

    #[test]
    fn b_integral_small_cases() {
        let prec = Precision::new(128).unwrap();
        assert!(b_integral(0, fr(0, 1), &prec).unwrap().abs() < 1e-19);
        let v = b_integral(1, fr(0, 1), &prec).unwrap();
        assert!((v + Float::with_val(128, 1) / 24u32).abs() < 1e-19);
        assert!(b_integral(0, fr(1, 2), &prec).unwrap().abs() < 1e-19);
    }

    #[test]
    fn q1_err_is_minus_h() {
        let prec = Precision::new(128).unwrap();
        let lambda = fr(3, 10);
        let kappa = fr(1, 20);
        let e = err_e(&ErrParams { s: 0, lambda: Point::Rat(lambda), kappa, p: 0, pbar: 1, q: 1 }, &prec).unwrap();
        let h = h_kernel(&KernelParams { kappa, u: Point::Rat(fr(7, 10)), v: Fraction::integer(0) }, &prec).unwrap();
        assert!(small(&(&e + &h), 60));
    }

    #[test]
    fn real_and_complex_paths_agree() {
        let prec = Precision::new(128).unwrap();
        let mk = |lambda: Point| ErrParams { s: 1, lambda, kappa: fr(2, 37), p: 2, pbar: 3, q: 5 };
        let a = err_e(&mk(Point::Rat(fr(5, 16))), &prec).unwrap();
        let b = err_e(&mk(Point::Complex(PComplex::from_f64(144, 0.3125, 0.0))), &prec).unwrap();
        assert!(small(&(&a - &b), 60));
    }

    #[test]
    fn reflection_and_edge_identities() {
        let prec = Precision::new(128).unwrap();
        let kappa = fr(1, 8);
        let h = |u: Fraction, v: Fraction| h_kernel(&KernelParams { kappa, u: Point::Rat(u), v }, &prec).unwrap();
        let pi = pi(160);
        for (u, v) in [(fr(1, 3), fr(2, 7)), (fr(0, 1), fr(1, 5)), (fr(9, 10), fr(4, 9))] {
            let lhs = &h(Fraction::integer(1) - u, -v) + &h(u, v);
            let b1u = rat(160, u.num(), u.den()) - 0.5f64;
            let rhs_im = Float::with_val(160, &pi * &b1u) * bernoulli_tilde(1, v, 160) * -2i32
                + Float::with_val(160, &pi * rat(160, kappa.num(), kappa.den())) * bernoulli_tilde(2, v, 160);
            assert!(small(&(&lhs - &PComplex::new(Float::new(160), rhs_im.clone())), 60), "{u} {v} {lhs} {rhs_im}");
        }
        let v = fr(2, 7);
        let d = &h(Fraction::integer(1), v) - &h(Fraction::integer(0), v);
        let f = f_unchecked(&PComplex::from_real(rat(160, 5, 7)));
        assert!(small(&(&d - &f), 60));
    }

    #[test]
    fn starred_is_conjugate_for_real_lambda() {
        let prec = Precision::new(128).unwrap();
        let mk = |lambda| ErrParams { s: 2, lambda: Point::Rat(lambda), kappa: fr(3, 41), p: 3, pbar: 2, q: 5 };
        let e = err_e(&mk(fr(3, 11)), &prec).unwrap();
        let es = err_estar(&mk(fr(3, 11)), &prec).unwrap();
        assert!(small(&(&e.conj() - &es), 60), "{e} {es}");
    }

    #[test]
    fn b_integral_matches_bernoulli() {
        let prec = Precision::new(128).unwrap();
        for l in [0, 2, 5] {
            for v in [fr(0, 1), fr(3, 7)] {
                let a = b_integral(l, v, &prec).unwrap();
                let b = b_integral_closed(l, v, 128);
                assert!((a - b).abs() < 1e-18, "{l} {v}");
            }
        }
    }

    #[test]
    fn taylor_remainder_shrinks() {
        // |ℰ − Σ_{ℓ≤1} x^ℓ ℰ_ℓ| / x² stays bounded as x = qκ → 0
        let prec = Precision::new(128).unwrap();
        let (p, pbar, q, s) = (2, 3, 5, 1);
        let lambda = fr(3, 8);
        let lz = PComplex::from_real(rat(144, 3, 8));
        let c: Vec<_> = (0..2).map(|l| err_taylor(s, l, &lz, p, pbar, q, false, 128).unwrap()).collect();
        let mut ratios = vec![];
        for k in [400i64, 1600] {
            let kappa = fr(1, k);
            let e = err_e(&ErrParams { s, lambda: Point::Rat(lambda), kappa, p, pbar, q }, &prec).unwrap();
            let x = Float::with_val(128, q) / k;
            let approx = &c[0] + &c[1].scale(&x);
            let r = (&e - &approx).abs() / Float::with_val(128, x.square_ref());
            ratios.push(r.to_f64());
        }
        assert!(ratios[1] < 2.0 * ratios[0] + 1e-3 && ratios[1] > 0.25 * ratios[0], "{ratios:?}");
    }

    #[test]
    fn parts_and_direct_forms_agree() {
        let prec = Precision::new(128).unwrap();
        let pairs = [(Point::Rat(fr(1, 97)), fr(2, 5)), (Point::Rat(fr(3, 7)), fr(0, 1)), (Point::Rat(fr(13, 14)), fr(4, 5))];
        for kappa in [fr(1, 3), fr(2, 97)] {
            let a = kernel_sum(&pairs, kappa, &prec, true).unwrap();
            let b = kernel_sum(&pairs, kappa, &prec, false).unwrap();
            assert!(small(&(&a - &b), 60), "{a} {b}");
        }
    }
}
