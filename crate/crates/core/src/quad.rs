//! Double-exponential quadrature at MPFR precision: tanh-sinh on a finite
//! interval, exp-sinh on `(0, T]` for exponentially decaying integrands.
//! Levels halve the step and reuse every earlier node.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Float;

use crate::special::{pi, PComplex};
use crate::{Error, Result};

/// One abscissa pair `±s`: distance `y` of both points from their nearest
/// endpoint, in units of the interval length, and the shared weight.
struct Node {
    y: Float,
    w: Float,
    center: bool,
}

type Level = Arc<Vec<Node>>;

fn level_nodes(prec: u32, level: u32) -> Level {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Level>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(prec, level)) {
        return v.clone();
    }
    let p = prec + 16;
    let half_pi = pi(p) / 2u32;
    let h = Float::with_val(p, Float::u_exp(1, -(level as i32)));
    let tiny = Float::with_val(p, Float::u_exp(1, -(prec as i32) - 24));
    let mut nodes = Vec::new();
    let (start, stride) = if level == 0 { (0u64, 1u64) } else { (1, 2) };
    let mut j = start;
    loop {
        let s = Float::with_val(p, &h * j);
        let (mut sh, mut ch) = (s.clone(), Float::new(p));
        sh.sinh_cosh_mut(&mut ch);
        let a = Float::with_val(p, &half_pi * &sh);
        // 1/(e^{2a} + 1): distance to the nearer endpoint of [0, 1]
        let y = Float::with_val(p, Float::with_val(p, &a * 2u32).exp() + 1u32).recip();
        let cosh_a = Float::with_val(p, a.cosh_ref());
        let w = Float::with_val(p, &half_pi * &ch) / 2u32 / cosh_a.square();
        if w < tiny && j > 0 {
            break;
        }
        nodes.push(Node { y, w, center: j == 0 });
        j += stride;
    }
    let v = Arc::new(nodes);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert((prec, level), v.clone());
    v
}

/// `∫_lo^hi f(t) dt`, refining until two successive levels agree to an
/// absolute `2^{−target_bits}`. `min_level` guards against premature
/// agreement on oscillatory integrands.
pub fn tanh_sinh<F>(lo: &Float, hi: &Float, prec: u32, target_bits: u32, max_level: u32, mut f: F) -> Result<PComplex>
where
    F: FnMut(&Float) -> PComplex,
{
    let p = prec + 16;
    let len = Float::with_val(p, hi - lo);
    let tol = Float::with_val(p, Float::u_exp(1, -(target_bits as i32)));
    let mut sum = PComplex::zero(p);
    let mut prev: Option<PComplex> = None;
    let min_level = 3;
    let mut last_delta: Option<Float> = None;
    for level in 0..=max_level {
        for node in level_nodes(prec, level).iter() {
            let d = Float::with_val(p, &len * &node.y);
            if node.center {
                let t = Float::with_val(p, lo + &d);
                let v = f(&t);
                sum += &v.scale(&node.w);
            } else {
                let left = Float::with_val(p, lo + &d);
                let right = Float::with_val(p, hi - &d);
                let mut v = f(&left);
                v += &f(&right);
                sum += &v.scale(&node.w);
            }
        }
        let step = Float::with_val(p, Float::u_exp(1, -(level as i32)));
        let est = sum.scale(&Float::with_val(p, &len * &step));
        if let Some(prev) = prev {
            let delta = (&est - &prev).abs();
            // the error roughly squares per level, so Δ_L²/Δ_{L−1} bounds
            // the error of the current estimate with room to spare
            let extrapolated = match &last_delta {
                Some(d) if !d.is_zero() => Float::with_val(p, delta.square_ref()) / d,
                _ => delta.clone(),
            };
            let accept = level >= min_level && (delta < tol || extrapolated < Float::with_val(p, &tol / 16u32));
            last_delta = Some(delta);
            if accept {
                let mut est = est;
                est.set_prec(prec);
                return Ok(est);
            }
        }
        prev = Some(est);
    }
    Err(Error::Convergence(format!("tanh-sinh did not reach 2^-{target_bits} by level {max_level}")))
}

/// Exp-sinh nodes `t = exp(π/2·sinh s)` on `(0, cutoff]` for one level,
/// paired with their weights `dt/ds`.
pub(crate) fn exp_sinh_nodes(prec: u32, level: u32, cutoff: u32) -> Arc<Vec<(Float, Float)>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<Vec<(Float, Float)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(prec, level, cutoff)) {
        return v.clone();
    }
    let p = prec + 16;
    let half_pi = pi(p) / 2u32;
    let h = Float::with_val(p, Float::u_exp(1, -(level as i32)));
    let tiny = Float::with_val(p, Float::u_exp(1, -(prec as i32) - 24));
    let mut nodes = Vec::new();
    let (start, stride) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
    for dir in [1i64, -1] {
        let mut j = if dir < 0 && level == 0 { 1 } else { start };
        loop {
            let s = Float::with_val(p, &h * (dir * j));
            let (mut sh, mut ch) = (s.clone(), Float::new(p));
            sh.sinh_cosh_mut(&mut ch);
            let t = Float::with_val(p, &half_pi * &sh).exp();
            let w = Float::with_val(p, &half_pi * &ch) * &t;
            if (dir > 0 && t > cutoff) || (dir < 0 && w < tiny) {
                break;
            }
            nodes.push((t, w));
            j += stride;
        }
    }
    let v = Arc::new(nodes);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert((prec, level, cutoff), v.clone());
    v
}

/// `∫_0^cutoff f(t) dt` for integrands that decay exponentially, by the
/// exp-sinh map; same refinement and stopping rule as [`tanh_sinh`]. Nodes
/// past `cutoff` are dropped, so the truncated tail is the caller's budget.
pub fn exp_sinh<F>(cutoff: u32, prec: u32, target_bits: u32, max_level: u32, mut f: F) -> Result<PComplex>
where
    F: FnMut(&Float, u32, usize) -> PComplex,
{
    let p = prec + 16;
    let tol = Float::with_val(p, Float::u_exp(1, -(target_bits as i32)));
    let mut sum = PComplex::zero(p);
    let mut prev: Option<PComplex> = None;
    let mut last_delta: Option<Float> = None;
    for level in 0..=max_level {
        for (i, (t, w)) in exp_sinh_nodes(prec, level, cutoff).iter().enumerate() {
            sum += &f(t, level, i).scale(w);
        }
        let est = sum.scale(&Float::with_val(p, Float::u_exp(1, -(level as i32))));
        if let Some(prev) = prev {
            let delta = (&est - &prev).abs();
            let extrapolated = match &last_delta {
                Some(d) if !d.is_zero() => Float::with_val(p, delta.square_ref()) / d,
                _ => delta.clone(),
            };
            let accept = level >= 3 && (delta < tol || extrapolated < Float::with_val(p, &tol / 16u32));
            last_delta = Some(delta);
            if accept {
                let mut est = est;
                est.set_prec(prec);
                return Ok(est);
            }
        }
        prev = Some(est);
    }
    Err(Error::Convergence(format!("exp-sinh did not reach 2^-{target_bits} by level {max_level}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_log_endpoint() {
        let p = 192;
        let zero = Float::new(p);
        let one = Float::with_val(p, 1);
        let v = tanh_sinh(&zero, &one, p, 150, 12, |t| PComplex::from_real(Float::with_val(p, t * t))).unwrap();
        assert!((v.re - Float::with_val(p, 1) / 3u32).abs() < 1e-44);
        // ∫₀¹ log t dt = −1
        let v = tanh_sinh(&zero, &one, p, 150, 12, |t| PComplex::from_real(Float::with_val(p, t.ln_ref()))).unwrap();
        assert!((v.re + 1u32).abs() < 1e-44);
    }

    #[test]
    fn exponential_tail() {
        let p = 128;
        let zero = Float::new(p);
        let t_max = Float::with_val(p, 20);
        // ∫₀^∞ t/(e^{2πt} − 1) dt = 1/24
        let v = tanh_sinh(&zero, &t_max, p, 64, 12, |t| {
            let mut e = Float::with_val(p, t * (pi(p) * 2u32));
            e.exp_m1_mut();
            PComplex::from_real(Float::with_val(p, t / e))
        })
        .unwrap();
        assert!((v.re - Float::with_val(p, 1) / 24u32).abs() < 1e-19);
    }

    #[test]
    fn exp_sinh_decaying() {
        let p = 160;
        let v = exp_sinh(26, p, 80, 12, |t, _, _| {
            let mut e = Float::with_val(p, t * (pi(p) * 2u32));
            e.exp_m1_mut();
            PComplex::from_real(Float::with_val(p, t / e))
        })
        .unwrap();
        assert!((v.re - Float::with_val(p, 1) / 24u32).abs() < 1e-24);
    }
}
