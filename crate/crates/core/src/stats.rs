//! Farey scans of `log|𝒥|`, the continued-fraction families behind the law of
//! large numbers, the stable law `S₁(6/π, 1, 0)`, and the `H`/`H*` graph data.
//!
//! Scans go through a small disk cache so `H` and `H*` reuse evaluations
//! across runs; see [`Cache`].

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{cf_expand, mod_inverse, sigma_r, Fraction};
use crate::knots::{kashaev_41_row, kashaev_eval, vol_cs, KnotPreset};
use crate::modularity::vol41_over_2pi;
use crate::{Error, Result};

/// Largest scan for knots other than 4₁, whose sums cost `O(k^{m−1})`.
pub const SCAN_CAP_GENERIC: i64 = 400;
/// Largest `N` accepted by [`figure_data`].
pub const FIGURE_CAP: i64 = 600;

// ---------------------------------------------------------------- cache

/// Append-only store of `log|𝒥_K(e(h/k))|`, one file per knot with lines
/// `h k prec hexfloat`. Later lines win, which is harmless since values are
/// deterministic.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$QKNOT_CACHE_DIR`, else `$XDG_CACHE_HOME/qknot`, else `~/.cache/qknot`.
    pub fn from_env() -> Self {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = var("QKNOT_CACHE_DIR")
            .or_else(|| var("XDG_CACHE_HOME").map(|d| d.join("qknot")))
            .or_else(|| var("HOME").map(|d| d.join(".cache").join("qknot")))
            .unwrap_or_else(|| std::env::temp_dir().join("qknot"));
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file(&self, knot: &str) -> PathBuf {
        self.dir.join(format!("{knot}.cache"))
    }

    /// Entries stored at exactly `prec` bits. Unparseable lines (e.g. a torn
    /// final write) are skipped.
    pub fn load(&self, knot: &str, prec: u32) -> Result<HashMap<(i64, i64), f64>> {
        let mut out = HashMap::new();
        let f = match fs::File::open(self.file(knot)) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for line in BufReader::new(f).lines() {
            let line = line?;
            let mut it = line.split_ascii_whitespace();
            let (Some(h), Some(k), Some(p), Some(v), None) = (it.next(), it.next(), it.next(), it.next(), it.next())
            else {
                continue;
            };
            let (Ok(h), Ok(k), Ok(p), Ok(v)) = (h.parse(), k.parse(), p.parse::<u32>(), parse_hexfloat(v)) else {
                continue;
            };
            if p == prec {
                out.insert((h, k), v);
            }
        }
        Ok(out)
    }

    pub fn append(&self, knot: &str, prec: u32, entries: &[(i64, i64, f64)]) -> Result<()> {
        if entries.is_empty() {
            return Ok(());
        }
        fs::create_dir_all(&self.dir)?;
        let mut buf = String::new();
        for (h, k, v) in entries {
            buf.push_str(&format!("{h} {k} {prec} {}\n", hexfloat(*v)));
        }
        let mut f = OpenOptions::new().create(true).append(true).open(self.file(knot))?;
        f.write_all(buf.as_bytes())?;
        Ok(())
    }
}

/// C99 `%a`-style rendering, exact for every finite `f64`.
pub fn hexfloat(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let man = bits & ((1 << 52) - 1);
    let (lead, e) = match exp {
        0 if man == 0 => return format!("{sign}0x0p+0"),
        0 => (0, -1022),
        _ => (1, exp - 1023),
    };
    let digits = format!("{man:013x}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{e:+}")
    }
}

pub fn parse_hexfloat(s: &str) -> Result<f64> {
    match s {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    hexf_parse::parse_hexf64(s, false).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

// ---------------------------------------------------------------- scans

/// `log|𝒥_K(e(h/k))|` for every reduced `h/k ∈ [0, 1)` with `k ≤ n`,
/// `0/1` included (where it is 0).
#[derive(Clone, Debug)]
pub struct LogTable {
    pub n: i64,
    rows: Vec<Vec<f64>>,
}

impl LogTable {
    /// `log|𝒥(e(h/k))|`, reducing `h` mod `k`; `None` outside the table.
    pub fn get(&self, h: i64, k: i64) -> Option<f64> {
        if k < 1 || k > self.n {
            return None;
        }
        let v = self.rows[k as usize][h.rem_euclid(k) as usize];
        (!v.is_nan()).then_some(v)
    }
}

fn check_scan(knot: &KnotPreset, n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("scan needs N ≥ 2, got {n}")));
    }
    let cap = if knot.name == "4_1" { knot.cap() } else { SCAN_CAP_GENERIC.min(knot.cap()) };
    if n > cap {
        return Err(Error::CapExceeded { knot: knot.name.to_string(), m: knot.m, k: n, cap });
    }
    Ok(())
}

fn compute_row(knot: &KnotPreset, k: i64, prec: u32) -> Result<Vec<(i64, f64)>> {
    if knot.name == "4_1" {
        return Ok(kashaev_41_row(k, prec)?.into_iter().map(|(h, v)| (h, v.ln().to_f64())).collect());
    }
    let hs: Vec<i64> = if k == 1 { vec![0] } else { (1..k).filter(|&h| crate::arith::gcd(h, k) == 1).collect() };
    hs.into_iter()
        .map(|h| Ok((h, kashaev_eval(knot, Fraction::new(h, k)?, prec)?.abs().ln().to_f64())))
        .collect()
}

pub fn log_table(knot: &KnotPreset, n: i64, prec: u32, cache: Option<&Cache>) -> Result<LogTable> {
    check_scan(knot, n)?;
    let known = match cache {
        Some(c) => c.load(knot.name, prec)?,
        None => HashMap::new(),
    };
    let mut rows: Vec<Vec<f64>> = (0..=n).map(|k| vec![f64::NAN; k.max(1) as usize]).collect();
    let mut missing = Vec::new();
    for k in 1..=n {
        let row = &mut rows[k as usize];
        let mut complete = true;
        for h in 0..k {
            if crate::arith::gcd(h, k) != 1 {
                continue;
            }
            match known.get(&(h, k)) {
                Some(&v) => row[h as usize] = v,
                None => complete = false,
            }
        }
        if !complete {
            missing.push(k);
        }
    }
    // largest rows first keeps the pool busy; results land in table order
    let fresh: Vec<(i64, Vec<(i64, f64)>)> = missing
        .par_iter()
        .rev()
        .map(|&k| Ok((k, compute_row(knot, k, prec)?)))
        .collect::<Result<_>>()?;
    let mut appended = Vec::new();
    for (k, row) in fresh.into_iter().rev() {
        for (h, v) in row {
            rows[k as usize][h as usize] = v;
            appended.push((h, k, v));
        }
    }
    if let Some(c) = cache {
        c.append(knot.name, prec, &appended)?;
    }
    Ok(LogTable { n, rows })
}

/// One reduced `h/k` of a Farey scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    #[serde(rename = "num")]
    pub h: i64,
    #[serde(rename = "den")]
    pub k: i64,
    #[serde(rename = "logJ")]
    pub log_j: f64,
    pub sigma: i64,
    pub r: i64,
    /// `log|𝒥(e(h/k))| − log|𝒥(e(k/h))|`.
    #[serde(rename = "H")]
    pub h_val: Option<f64>,
    /// `log|𝒥(e(h̄/k))| − log|𝒥(e(k̄/h))|`.
    #[serde(rename = "Hstar")]
    pub h_star: Option<f64>,
}

/// Every reduced `h/k` with `1 ≤ h < k ≤ n`, ordered by `k` then `h`, so
/// `Σ_{2≤k≤n} φ(k)` records.
pub fn scan_roots(knot: &KnotPreset, n: i64, prec: u32, cache: Option<&Cache>) -> Result<Vec<ScanRecord>> {
    let table = log_table(knot, n, prec, cache)?;
    records_from(&table)
}

fn records_from(table: &LogTable) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for k in 2..=table.n {
        for h in 1..k {
            let Some(log_j) = table.get(h, k) else { continue };
            let (sigma, r) = sigma_r(Fraction::new(h, k)?)?;
            let h_val = table.get(k, h).map(|b| log_j - b);
            let hbar = mod_inverse(h, k)?;
            let kbar = if h == 1 { 0 } else { mod_inverse(k, h)? };
            let h_star = match (table.get(hbar, k), table.get(kbar, h)) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            };
            out.push(ScanRecord { h, k, log_j, sigma, r, h_val, h_star });
        }
    }
    Ok(out)
}

pub fn write_scan_csv<W: Write>(records: &[ScanRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Parse(format!("{other:?}")),
    }
}

// ---------------------------------------------------------------- LLN

#[derive(Clone, Debug, Serialize)]
pub struct LlnRow {
    pub alpha: Fraction,
    pub sigma: i64,
    pub r: i64,
    pub log_j: f64,
    /// `log𝒥_{4₁}(e(α)) / ((Vol/2π)Σ(α))`.
    pub ratio: f64,
}

pub fn lln_check(alphas: &[Fraction], prec: u32) -> Result<Vec<LlnRow>> {
    let v = vol41_over_2pi(64).to_f64();
    alphas
        .iter()
        .map(|&alpha| {
            let (sigma, r) = sigma_r(alpha)?;
            let j = crate::knots::kashaev_41(alpha, prec)?;
            let log_j = j.re.ln().to_f64();
            Ok(LlnRow { alpha, sigma, r, log_j, ratio: log_j / (v * sigma as f64) })
        })
        .collect()
}

/// `1/N`.
pub fn inverse_family(ns: &[i64]) -> Result<Vec<Fraction>> {
    ns.iter().map(|&n| Fraction::new(1, n)).collect()
}

/// `[0; a, b]` for each `b`.
pub fn two_term_family(a: i64, bs: &[i64]) -> Result<Vec<Fraction>> {
    bs.iter()
        .map(|&b| Ok(crate::arith::ContinuedFraction::from_quotients(vec![a, b])?.value()))
        .collect()
}

/// `F_{n−1}/F_n` for `3 ≤ n ≤ n_max`, paired with `n`.
pub fn fibonacci_family(n_max: i64) -> Result<Vec<(i64, Fraction)>> {
    let (mut a, mut b) = (1i64, 1i64);
    let mut out = Vec::new();
    for n in 3..=n_max {
        (a, b) = (b, a + b);
        out.push((n, Fraction::new(a, b)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FibonacciFit {
    pub rows: Vec<(i64, LlnRow)>,
    /// Least-squares slope of `log𝒥` against `n` over the upper half of the family.
    pub slope: f64,
    pub intercept: f64,
}

pub fn fibonacci_slope(n_max: i64, prec: u32) -> Result<FibonacciFit> {
    if n_max < 8 {
        return Err(Error::Domain(format!("need n_max ≥ 8 for a slope, got {n_max}")));
    }
    let fam = fibonacci_family(n_max)?;
    let alphas: Vec<Fraction> = fam.iter().map(|p| p.1).collect();
    let rows: Vec<(i64, LlnRow)> = fam.iter().map(|p| p.0).zip(lln_check(&alphas, prec)?).collect();
    let fit: Vec<(f64, f64)> = rows.iter().filter(|(n, _)| 2 * n >= n_max).map(|(n, r)| (*n as f64, r.log_j)).collect();
    let (slope, intercept) = least_squares(&fit);
    Ok(FibonacciFit { rows, slope, intercept })
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

// ---------------------------------------------------------------- stable law

/// Index-1 stable law with characteristic function
/// `φ(t) = exp(−σ|t|(1 + iβ(2/π)sgn(t)log|t|) + iμt)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StableLawSpec {
    pub scale: f64,
    pub skew: f64,
    pub loc: f64,
}

impl StableLawSpec {
    /// `S₁(6/π, 1, 0)`.
    pub fn conjectured() -> Self {
        StableLawSpec { scale: 6.0 / PI, skew: 1.0, loc: 0.0 }
    }
}

impl Default for StableLawSpec {
    fn default() -> Self {
        Self::conjectured()
    }
}

fn gl16() -> &'static GaussLegendre {
    static Q: OnceLock<GaussLegendre> = OnceLock::new();
    Q.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(16).unwrap()))
}

/// `∫₀^∞ e^{−σt} g(t(x−μ) + βσ(2/π) t log t, t) dt`, on dyadic panels towards
/// the `t log t` branch point and panels of at most half an oscillation beyond.
fn inversion<G: Fn(f64, f64) -> f64>(x: f64, spec: &StableLawSpec, g: G) -> f64 {
    let q = gl16();
    let y = x - spec.loc;
    let c = spec.skew * spec.scale * 2.0 / PI;
    let f = |t: f64| (-spec.scale * t).exp() * g(t * y + c * t * t.ln(), t);
    // widest panel that still holds at most half an oscillation at `t`
    let width_at = |t: f64| (PI / (y.abs() + c.abs() * (t.ln().abs() + 1.0))).min(0.5);
    let mut acc = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let lo = hi / 2.0;
        let pieces = ((hi - lo) / width_at(lo)).ceil().max(1.0) as usize;
        let w = (hi - lo) / pieces as f64;
        for i in 0..pieces {
            acc += q.integrate(lo + i as f64 * w, lo + (i + 1) as f64 * w, f);
        }
        hi = lo;
    }
    let end = 40.0 / spec.scale;
    let width = width_at(end);
    let panels = ((end - 1.0) / width).ceil() as usize;
    let w = (end - 1.0) / panels as f64;
    for i in 0..panels {
        let a = 1.0 + i as f64 * w;
        acc += q.integrate(a, a + w, f);
    }
    acc
}

/// Density `(1/π)∫₀^∞ Re(e^{−itx}φ(t)) dt`. On the short side of a skewed
/// law, past two scales from the mode, the inversion integral is pure
/// cancellation noise, so [`stable_density_zolotarev`] takes over there.
pub fn stable_density(x: f64, spec: &StableLawSpec) -> f64 {
    if spec.skew != 0.0 && standardized(x, spec) * spec.skew.signum() < -2.0 {
        return stable_density_zolotarev(x, spec);
    }
    inversion(x, spec, |phase, _| phase.cos()) / PI
}

/// `(x − μ − (2/π)βσ log σ)/σ`: the index-1 law is not scale-equivariant, so
/// rescaling to `σ = 1` also shifts.
fn standardized(x: f64, spec: &StableLawSpec) -> f64 {
    (x - spec.loc - 2.0 / PI * spec.skew * spec.scale * spec.scale.ln()) / spec.scale
}

/// Density from Zolotarev's integral over `θ ∈ (−π/2, π/2)`, whose integrand
/// is non-negative; needs `β ≠ 0`. Accurate on the short tail and the bulk;
/// far out on the long tail the integrand spikes at `θ → π/2`.
pub fn stable_density_zolotarev(x: f64, spec: &StableLawSpec) -> f64 {
    let (beta, g, acc) = zolotarev(x, spec, |vt, e| vt * (-e).exp());
    g * acc / (2.0 * beta * spec.scale)
}

/// `(|β|, g, ∫ k(V(θ), g·V(θ)) dθ)` with `g = exp(−πz/2|β|)`, `z` the
/// standardized point reflected so that the skew is positive.
fn zolotarev<K: Fn(f64, f64) -> f64>(x: f64, spec: &StableLawSpec, k: K) -> (f64, f64, f64) {
    assert!(spec.skew != 0.0, "Zolotarev's form needs β ≠ 0");
    let (beta, z) = if spec.skew > 0.0 {
        (spec.skew, standardized(x, spec))
    } else {
        (-spec.skew, -standardized(x, spec))
    };
    let h = PI / 2.0;
    let v = |t: f64| {
        let a = h + beta * t;
        2.0 / PI * (a / t.cos()) * (a * t.tan() / beta).exp()
    };
    let g = (-PI * z / (2.0 * beta)).exp();
    let q = gl16();
    let panels = 1024;
    let w = PI / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = -h + i as f64 * w;
        acc += q.integrate(a, a + w, |t| {
            let vt = v(t);
            let e = g * vt;
            if e.is_finite() { k(vt, e) } else { 0.0 }
        });
    }
    (beta, g, acc)
}

/// Distribution function from Zolotarev's integral, `(1/π)∫ exp(−g V(θ)) dθ`
/// (reflected for `β < 0`). Same accuracy profile as the density version.
pub fn stable_cdf_zolotarev(x: f64, spec: &StableLawSpec) -> f64 {
    let (_, _, acc) = zolotarev(x, spec, |_, e| (-e).exp());
    if spec.skew > 0.0 { acc / PI } else { 1.0 - acc / PI }
}

/// Distribution function by Gil-Pelaez: `½ − (1/π)∫₀^∞ Im(e^{−itx}φ(t))/t dt`.
/// On the short tail the Zolotarev form takes over, as for the density.
pub fn stable_cdf(x: f64, spec: &StableLawSpec) -> f64 {
    if spec.skew != 0.0 && standardized(x, spec) * spec.skew.signum() < -2.0 {
        return stable_cdf_zolotarev(x, spec);
    }
    0.5 + inversion(x, spec, |phase, t| phase.sin() / t) / PI
}

/// `∫_lo^hi` of the density, by quadrature in `x`.
pub fn stable_mass(lo: f64, hi: f64, spec: &StableLawSpec) -> f64 {
    let q = gl16();
    let mut acc = 0.0;
    let mut a = lo;
    while a < hi {
        let w = if (a - spec.loc).abs() < 20.0 { 0.5 } else { 2.0 };
        let b = (a + w).min(hi);
        acc += q.integrate(a, b, |x| stable_density(x, spec));
        a = b;
    }
    acc
}

pub fn stable_median(spec: &StableLawSpec) -> f64 {
    let (mut lo, mut hi) = (spec.loc - 50.0, spec.loc + 50.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if stable_cdf(mid, spec) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------- histogram

/// How to centre the normalised statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Centering {
    /// Align the sample median with the law's median.
    Median,
    Fixed(f64),
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramReport {
    pub n: i64,
    pub samples: usize,
    pub d_k: f64,
    pub edges: Vec<f64>,
    /// Empirical density per bin; `Σ density·width = 1`.
    pub density: Vec<f64>,
    /// Law density at bin centres.
    pub overlay: Vec<f64>,
    pub mean: f64,
    /// `sup |F_emp − F|` over the sample.
    pub ks: f64,
}

/// `log𝒥/((Vol/2π)log N) − (12/π²)log log N` per record, before centring.
pub fn normalized_statistic(records: &[ScanRecord], vol_over_2pi: f64) -> Result<(i64, Vec<f64>)> {
    let n = records.iter().map(|r| r.k).max().ok_or_else(|| Error::Domain("empty record set".into()))?;
    if n < 3 {
        return Err(Error::Domain(format!("need N ≥ 3 for log log N, got {n}")));
    }
    let ln = (n as f64).ln();
    let shift = 12.0 / (PI * PI) * ln.ln();
    Ok((n, records.iter().map(|r| r.log_j / (vol_over_2pi * ln) - shift).collect()))
}

pub fn histogram_compare(
    records: &[ScanRecord],
    vol_over_2pi: f64,
    spec: &StableLawSpec,
    bins: usize,
    centering: Centering,
) -> Result<HistogramReport> {
    if bins == 0 {
        return Err(Error::Domain("need at least one bin".into()));
    }
    let (n, raw) = normalized_statistic(records, vol_over_2pi)?;
    let mut sorted = raw.clone();
    sorted.sort_by(f64::total_cmp);
    let d_k = match centering {
        Centering::Fixed(d) => d,
        Centering::Median => {
            let m = sorted.len();
            let med = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
            med - stable_median(spec)
        }
    };
    let z: Vec<f64> = sorted.iter().map(|v| v - d_k).collect();
    let m = z.len();
    let (lo, hi) = (z[0], z[m - 1]);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for v in &z {
        counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
    }
    let density = counts.iter().map(|&c| c as f64 / (m as f64 * width)).collect();
    let overlay = (0..bins).map(|i| stable_density(lo + (i as f64 + 0.5) * width, spec)).collect();
    let mean = z.iter().sum::<f64>() / m as f64;
    let cdf: Vec<f64> = z.par_iter().map(|v| stable_cdf(*v, spec)).collect();
    let ks = cdf
        .iter()
        .enumerate()
        .map(|(i, f)| (f - i as f64 / m as f64).abs().max(((i + 1) as f64 / m as f64 - f).abs()))
        .fold(0.0, f64::max);
    Ok(HistogramReport { n, samples: m, d_k, edges, density, overlay, mean, ks })
}

/// `Vol(K)/2π`, with the closed form for 4₁.
pub fn vol_over_2pi(knot: &KnotPreset) -> Result<f64> {
    if knot.name == "4_1" {
        return Ok(vol41_over_2pi(64).to_f64());
    }
    let (vol, _) = vol_cs(knot, 64)?;
    Ok(vol.to_f64() / (2.0 * PI))
}

// ---------------------------------------------------------------- figures

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureRow {
    pub x: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "Hstar")]
    pub h_star: f64,
}

/// `(x = h/k, H_{4₁}, H*_{4₁})` over reduced `h/k`, `k ≤ n`, optionally
/// restricted to `lo ≤ x ≤ hi`.
pub fn figure_data(n: i64, window: Option<(f64, f64)>, prec: u32, cache: Option<&Cache>) -> Result<Vec<FigureRow>> {
    if n > FIGURE_CAP {
        return Err(Error::CapExceeded { knot: "4_1".into(), m: 1, k: n, cap: FIGURE_CAP });
    }
    let records = scan_roots(crate::knots::knot("4_1")?, n, prec, cache)?;
    Ok(figure_rows(&records, window))
}

pub fn figure_rows(records: &[ScanRecord], window: Option<(f64, f64)>) -> Vec<FigureRow> {
    records
        .iter()
        .filter_map(|r| {
            let x = r.h as f64 / r.k as f64;
            if let Some((lo, hi)) = window {
                if x < lo || x > hi {
                    return None;
                }
            }
            Some(FigureRow { x, h: r.h_val?, h_star: r.h_star? })
        })
        .collect()
}

pub fn write_figure_csv<W: Write>(rows: &[FigureRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

/// The two quantities that separate the graphs of `H` and `H*`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Dichotomy {
    pub n: i64,
    /// `max |H − (Vol/2π)(k/h) − (3/2)log(k/h)|`.
    pub h_residual: f64,
    pub h_star_max: f64,
}

pub fn dichotomy(records: &[ScanRecord]) -> Dichotomy {
    let v = vol41_over_2pi(64).to_f64();
    let mut d = Dichotomy { n: records.iter().map(|r| r.k).max().unwrap_or(0), h_residual: 0.0, h_star_max: 0.0 };
    for r in records {
        let t = r.k as f64 / r.h as f64;
        if let Some(h) = r.h_val {
            d.h_residual = d.h_residual.max((h - v * t - 1.5 * t.ln()).abs());
        }
        if let Some(s) = r.h_star {
            d.h_star_max = d.h_star_max.max(s.abs());
        }
    }
    d
}

/// Continued fraction of `h/k` rendered as `[0;b₁,…]`, for reports.
pub fn cf_label(h: i64, k: i64) -> Result<String> {
    Ok(cf_expand(Fraction::new(h, k)?)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexfloat_roundtrip() {
        for x in [0.0, -0.0, 1.0, 1.5, -2.75, 1e-310, f64::MAX, 0.1, 123.456e7, f64::MIN_POSITIVE] {
            let s = hexfloat(x);
            assert_eq!(parse_hexfloat(&s).unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(hexfloat(1.0), "0x1p+0");
        assert_eq!(hexfloat(-2.75), "-0x1.6p+1");
    }

    #[test]
    fn two_records_at_three() {
        let k = crate::knots::knot("4_1").unwrap();
        let recs = scan_roots(k, 3, 64, None).unwrap();
        assert_eq!(recs.len(), 3);
        // 𝒥(e(1/2)) = 5, 𝒥(e(1/3)) = 𝒥(e(2/3)) = 13
        assert!((recs[0].log_j - 5f64.ln()).abs() < 1e-15);
        assert!((recs[1].log_j - 13f64.ln()).abs() < 1e-14);
        assert_eq!(recs[1].h_val, Some(recs[1].log_j));
        // 2/3: k/h = 3/2 ≡ 1/2
        assert!((recs[2].h_val.unwrap() - (13f64.ln() - 5f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn cdf_and_density_agree() {
        let s = StableLawSpec::conjectured();
        let (a, b) = (-3.0, 5.0);
        let by_density = stable_mass(a, b, &s);
        let by_cdf = stable_cdf(b, &s) - stable_cdf(a, &s);
        assert!((by_density - by_cdf).abs() < 1e-10, "{by_density} {by_cdf}");
    }

    #[test]
    fn long_tail_is_pareto() {
        // P(X > x) ~ x·f(x) ~ (2/π)σ/x for β = 1
        let s = StableLawSpec::conjectured();
        let want = 2.0 / PI * s.scale;
        for x in [300.0, 1000.0] {
            let f = stable_density(x, &s) * x * x;
            let t = (1.0 - stable_cdf(x, &s)) * x;
            assert!((f / want - 1.0).abs() < 0.05 && (t / want - 1.0).abs() < 0.05, "{x}: {f} {t} {want}");
        }
        assert!((stable_density(1000.0, &s) * 1e6 - stable_density(2000.0, &s) * 4e6).abs() < 0.02);
    }

    #[test]
    fn zolotarev_matches_inversion() {
        for s in [StableLawSpec::conjectured(), StableLawSpec { scale: 0.7, skew: -0.4, loc: 2.0 }] {
            for x in [-6.0, -3.0, -1.0, 0.0, 1.5, 4.0] {
                let a = inversion(x, &s, |phase, _| phase.cos()) / PI;
                let b = stable_density_zolotarev(x, &s);
                assert!((a - b).abs() < 1e-10, "{x}: {a} {b}");
                let a = 0.5 + inversion(x, &s, |phase, t| phase.sin() / t) / PI;
                let b = stable_cdf_zolotarev(x, &s);
                assert!((a - b).abs() < 1e-10, "cdf {x}: {a} {b}");
            }
        }
    }

    #[test]
    fn left_tail_vanishes_monotonically() {
        let s = StableLawSpec::conjectured();
        let mut prev = stable_density(-20.0, &s);
        let mut x = -20.0;
        while x > -60.0 {
            x -= 0.5;
            let f = stable_density(x, &s);
            assert!(f >= 0.0 && f <= prev);
            prev = f;
        }
    }

    #[test]
    fn cauchy_limit() {
        // β = 0 is the Cauchy law with scale σ
        let s = StableLawSpec { scale: 2.0, skew: 0.0, loc: 1.0 };
        for x in [-4.0, 0.0, 1.0, 2.5, 30.0] {
            let want = 2.0 / (PI * (4.0 + (x - 1.0) * (x - 1.0)));
            assert!((stable_density(x, &s) - want).abs() < 1e-12);
            let want = 0.5 + ((x - 1.0) / 2.0).atan() / PI;
            assert!((stable_cdf(x, &s) - want).abs() < 1e-12);
        }
    }
}
