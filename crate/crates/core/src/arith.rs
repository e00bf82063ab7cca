//! Exact rationals, continued fractions, Dedekind sums and the SL₂(ℤ)
//! bookkeeping that ties `x = N/d` to `γx = h/k`.
//!
//! Integers are `i64` with `i128` intermediates; every denominator that occurs
//! in this crate is below 10⁷, so overflow is treated as a bug and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Representative of `a mod m` in `[0, m)`.
pub fn modulo(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Representative of `a mod m` in `[1, m]` (written ⟨a⟩ in the error terms).
pub fn rep1(a: i64, m: i64) -> i64 {
    let r = a.rem_euclid(m);
    if r == 0 {
        m
    } else {
        r
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).unwrap_or_else(|_| panic!("rational arithmetic overflow: {x}"))
}

/// Multiplicative inverse of `a` modulo `m`, in `[1, m)` (or 0 when m = 1).
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    if m < 1 {
        return Err(Error::Domain(format!("modulus {m} must be positive")));
    }
    let (mut r0, mut r1) = (a.rem_euclid(m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 != 1 && m != 1 {
        return Err(Error::NotCoprime { a, b: m });
    }
    Ok(narrow(s0.rem_euclid(m as i128)))
}

pub fn euler_phi(n: i64) -> i64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Reduced rational `num/den` with `den ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let g = gcd(num, den);
        let s = den.signum();
        Ok(Fraction { num: s * num / g, den: s * den / g })
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let mut g = {
            let (mut a, mut b) = (num.unsigned_abs(), den.unsigned_abs());
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a as i128
        };
        if g == 0 {
            g = 1;
        }
        let s = den.signum();
        Fraction { num: narrow(s * num / g), den: narrow(s * den / g) }
    }

    pub fn integer(n: i64) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// Fractional part `{x}` in `[0, 1)`.
    pub fn fract(&self) -> Fraction {
        Fraction { num: self.num.rem_euclid(self.den), den: self.den }
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn recip(&self) -> Result<Fraction> {
        Fraction::new(self.den, self.num)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected h/k, got {s:?}"));
        let (a, b) = match s.trim().split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = a.parse().map_err(|_| bad())?;
        let den: i64 = b.parse().map_err(|_| bad())?;
        if den <= 0 {
            return Err(bad());
        }
        Fraction::new(num, den)
    }
}

impl TryFrom<String> for Fraction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

impl Add for Fraction {
    type Output = Fraction;
    fn add(self, o: Fraction) -> Fraction {
        Fraction::from_i128(
            self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128,
            self.den as i128 * o.den as i128,
        )
    }
}

impl Sub for Fraction {
    type Output = Fraction;
    fn sub(self, o: Fraction) -> Fraction {
        self + (-o)
    }
}

impl Neg for Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction { num: -self.num, den: self.den }
    }
}

impl Mul for Fraction {
    type Output = Fraction;
    fn mul(self, o: Fraction) -> Fraction {
        Fraction::from_i128(self.num as i128 * o.num as i128, self.den as i128 * o.den as i128)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

/// `[0; b₁, …, b_r]` together with the convergents `u_s/v_s`, `s = 0..=r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuedFraction {
    pub b: Vec<i64>,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
}

impl ContinuedFraction {
    pub fn from_quotients(b: Vec<i64>) -> Result<Self> {
        if b.is_empty() || b.iter().any(|&x| x < 1) {
            return Err(Error::Domain("partial quotients must be positive".into()));
        }
        let mut b = b;
        // trailing 1 merges into the previous quotient: [..., a, 1] = [..., a+1]
        if b.len() > 1 && b[b.len() - 1] == 1 {
            b.pop();
            let last = b.len() - 1;
            b[last] += 1;
        }
        let (mut u, mut v) = (vec![0i64], vec![1i64]);
        let (mut u_prev, mut v_prev) = (1i64, 0i64);
        for &bl in &b {
            let (us, vs) = (u[u.len() - 1], v[v.len() - 1]);
            let un = narrow(bl as i128 * us as i128 + u_prev as i128);
            let vn = narrow(bl as i128 * vs as i128 + v_prev as i128);
            (u_prev, v_prev) = (us, vs);
            u.push(un);
            v.push(vn);
        }
        Ok(ContinuedFraction { b, u, v })
    }

    pub fn value(&self) -> Fraction {
        Fraction::new(self.u[self.u.len() - 1], self.v[self.v.len() - 1])
            .expect("convergent denominators are positive")
    }

    pub fn sigma(&self) -> i64 {
        self.b.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "[0;{}]", parts.join(","))
    }
}

pub fn cf_expand(alpha: Fraction) -> Result<ContinuedFraction> {
    if alpha.num <= 0 || alpha.num >= alpha.den {
        return Err(Error::Domain(format!("{alpha} is not in (0,1)")));
    }
    let (mut a, mut b) = (alpha.den, alpha.num);
    let mut q = Vec::new();
    while b != 0 {
        q.push(a / b);
        (a, b) = (b, a % b);
    }
    ContinuedFraction::from_quotients(q)
}

/// `(Σ(α), r(α))`: the sum and the number of partial quotients.
pub fn sigma_r(alpha: Fraction) -> Result<(i64, i64)> {
    let cf = cf_expand(alpha)?;
    Ok((cf.sigma(), cf.len() as i64))
}

/// Dedekind sum `s(p, q) = Σ_{n=1}^{q−1} ((n/q)) ((pn/q))`, by direct summation.
pub fn dedekind_sum(p: i64, q: i64) -> Result<Fraction> {
    if q < 1 {
        return Err(Error::Domain(format!("q = {q} must be positive")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { a: p, b: q });
    }
    let (p, q) = (p as i128, q as i128);
    let mut acc: i128 = 0;
    for n in 1..q {
        acc += (2 * n - q) * (2 * (p * n).rem_euclid(q) - q);
    }
    Ok(Fraction::from_i128(acc, 4 * q * q))
}

/// The tuple `(p, q, p̄, q̄, N, d)` with `γ = (p, −q̄; q, p̄)`, `x = N/d`,
/// `γx = h/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModularSetup {
    pub p: i64,
    pub q: i64,
    pub pbar: i64,
    pub qbar: i64,
    pub n: i64,
    pub d: i64,
    pub h: i64,
    pub k: i64,
    pub x: Fraction,
    pub gx: Fraction,
}

pub fn modular_setup(p: i64, q: i64, pbar: i64, qbar: i64, n: i64, d: i64) -> Result<ModularSetup> {
    if q < 1 || d < 1 || n < 1 {
        return Err(Error::Setup(format!("need q, N, d ≥ 1 (q={q}, N={n}, d={d})")));
    }
    if p as i128 * pbar as i128 + q as i128 * qbar as i128 != 1 {
        return Err(Error::Setup(format!("p·p̄ + q·q̄ = {} ≠ 1", p * pbar + q * qbar)));
    }
    if gcd(n, d) != 1 {
        return Err(Error::Setup(format!("gcd(N, d) = {} ≠ 1", gcd(n, d))));
    }
    let h = narrow(n as i128 * p as i128 - d as i128 * qbar as i128);
    let k = narrow(n as i128 * q as i128 + d as i128 * pbar as i128);
    if k < 1 {
        return Err(Error::Setup(format!("k = Nq + dp̄ = {k} is not positive")));
    }
    if gcd(h, k) != 1 {
        return Err(Error::Setup(format!("gcd(h, k) = {} ≠ 1", gcd(h, k))));
    }
    let setup = ModularSetup {
        p,
        q,
        pbar,
        qbar,
        n,
        d,
        h,
        k,
        x: Fraction::new(n, d)?,
        gx: Fraction::new(h, k)?,
    };
    let pq = Fraction::new(p, q)?;
    if setup.gx != pq - Fraction::new(d, k * q)? {
        return Err(Error::Setup("h/k ≠ p/q − d/(kq)".into()));
    }
    let lhs = Fraction::new(d, k * q)? + Fraction::new(k, d * q)?;
    let rhs = setup.x - setup.gx + Fraction::new(p + pbar, q)?;
    if lhs != rhs {
        return Err(Error::Setup("d/(kq) + k/(dq) ≠ N/d − h/k + (p+p̄)/q".into()));
    }
    Ok(setup)
}

/// Reduced fractions `h/k` with `1 ≤ h < k ≤ n`, ordered by `k` then `h`.
pub fn farey_interior(n: i64) -> Vec<Fraction> {
    let mut out = Vec::new();
    for k in 2..=n {
        for h in 1..k {
            if gcd(h, k) == 1 {
                out.push(Fraction { num: h, den: k });
            }
        }
    }
    out
}
