//! Command-line front end. Exit codes: 0 success, 1 a verification failed or
//! a computation did not converge, 2 bad arguments, 3 a size cap was
//! exceeded, 4 an I/O error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{gcd, modular_setup, Fraction};
use crate::knots::{kashaev_eval, knot};
use crate::modularity::{ir_sweep, reciprocity_h, th4_check, thp_sweep, verify_ir, verify_thp_decomposition};
use crate::special::Precision;
use crate::stats::{
    dichotomy, fibonacci_slope, figure_rows, histogram_compare, inverse_family, lln_check, scan_roots, two_term_family,
    vol_over_2pi, write_figure_csv, write_scan_csv, Cache, Centering, StableLawSpec, FIGURE_CAP,
};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "qknot", version, about = "Kashaev invariants, q-Pochhammer reciprocity and related experiments")]
pub struct Cli {
    /// Working precision in bits (≥ 64).
    #[arg(long, global = true, default_value_t = 128)]
    pub prec: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate 𝒥_K at e(h/k) (always JSON).
    Eval {
        #[arg(long)]
        knot: String,
        #[arg(long)]
        q: Fraction,
    },
    /// Check an exact reciprocity formula or report a bound.
    Verify {
        #[command(subcommand)]
        subject: Subject,
    },
    /// Farey scan of log|𝒥| with H and H*.
    Scan {
        #[arg(long, default_value = "4_1")]
        knot: String,
        #[arg(long = "N")]
        n: i64,
    },
    /// Data for the graphs of H and H* (4₁).
    Figure {
        #[arg(long = "N")]
        n: i64,
        /// Restrict to lo ≤ h/k ≤ hi, given as `lo,hi`.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
    },
    /// Law-of-large-numbers families for 4₁.
    Lln {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 400)]
        n_max: i64,
        /// First partial quotient for the two-term family `[0; a, b]`.
        #[arg(long, default_value_t = 3)]
        a: i64,
    },
    /// Histogram of the normalised statistic against S₁(6/π, 1, 0).
    Hist {
        #[arg(long, default_value = "4_1")]
        knot: String,
        #[arg(long = "N")]
        n: i64,
        #[arg(long, default_value_t = 60)]
        bins: usize,
        /// Fixed centring D_K; fitted by median alignment when absent.
        #[arg(long)]
        dk: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Subject {
    /// First reciprocity for (e(γx))_r.
    Ir {
        #[command(flatten)]
        gamma: GammaArgs,
        #[arg(long)]
        d: i64,
        #[arg(long = "N")]
        n: i64,
        #[arg(long, default_value = "all")]
        r: RArg,
    },
    /// The exact decomposition of (e(−h̄/k))_r.
    Thp {
        #[arg(long)]
        h: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value = "all")]
        r: RArg,
    },
    /// log𝒥(e(h̄/k)) − log𝒥(e(k̄/h)) − (Vol/2π)k/h against its bound, for h ≤ k ≤ kmax.
    Th2 {
        #[arg(long)]
        h: i64,
        #[arg(long)]
        kmax: i64,
    },
    /// The c₀ < 0 reciprocity residual, for h < k ≤ kmax where c₀(k̄/h) < 0.
    Th4 {
        #[arg(long)]
        h: i64,
        #[arg(long)]
        kmax: i64,
    },
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    #[arg(long)]
    q: i64,
    #[arg(long, allow_hyphen_values = true)]
    pbar: i64,
    #[arg(long, allow_hyphen_values = true)]
    qbar: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// 1/N for N = 50, 100, 200, … ≤ n-max.
    Inv,
    /// [0; a, b] for b = 50, 100, 200, … ≤ n-max.
    Two,
    /// F_{n−1}/F_n for n ≤ n-max, with the fitted slope.
    Fib,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RArg {
    All,
    One(i64),
}

impl std::str::FromStr for RArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(RArg::All);
        }
        s.parse().map(RArg::One).map_err(|_| format!("expected `all` or an integer, got {s:?}"))
    }
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(lo <= hi) {
        return Err(format!("empty window {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Domain(_) | Error::Setup(_) | Error::NotCoprime { .. } | Error::UnknownKnot(_) => 2,
        Error::CapExceeded { .. } => 3,
        Error::Io(_) => 4,
        Error::Convergence(_) | Error::Pole(_) => 1,
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("qknot: {e}");
            exit_code(&e)
        }
    }
}

/// Runs one invocation; `Ok(false)` means a verification threshold was missed.
pub fn run(cli: &Cli) -> Result<bool> {
    if cli.prec < 64 {
        return Err(Error::Parse(format!("--prec {} < 64", cli.prec)));
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::Parse("--threads must be ≥ 1".into()));
        }
        // a second call in the same process keeps the first pool, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let mut sink = Sink::open(cli.out.as_ref())?;
    let ok = match &cli.cmd {
        Command::Eval { knot: name, q } => {
            let k = knot(name)?;
            let j = kashaev_eval(k, *q, cli.prec)?;
            #[derive(Serialize)]
            struct Out<'a> {
                knot: &'a str,
                q: String,
                #[serde(rename = "J")]
                j: &'a crate::special::PComplex,
                bits: u32,
            }
            let out = Out { knot: k.name, q: q.to_string(), j: &j, bits: cli.prec };
            sink.json(&out)?;
            true
        }
        Command::Verify { subject } => verify(cli, subject, &mut sink)?,
        Command::Scan { knot: name, n } => {
            let k = knot(name)?;
            eprintln!("scanning {} up to N = {n}", k.name);
            let recs = scan_roots(k, *n, cli.prec, Some(&Cache::from_env()))?;
            match cli.format {
                Format::Csv => write_scan_csv(&recs, &mut sink.w)?,
                Format::Json => sink.json(&recs)?,
            }
            true
        }
        Command::Figure { n, window } => {
            if *n > FIGURE_CAP {
                return Err(Error::CapExceeded { knot: "4_1".into(), m: 1, k: *n, cap: FIGURE_CAP });
            }
            eprintln!("scanning 4_1 up to N = {n}");
            let recs = scan_roots(knot("4_1")?, *n, cli.prec, Some(&Cache::from_env()))?;
            let rows = figure_rows(&recs, *window);
            let d = dichotomy(&recs);
            eprintln!("max|H − (Vol/2π)k/h − 1.5 log(k/h)| = {}, max|H*| = {}", d.h_residual, d.h_star_max);
            match cli.format {
                Format::Csv => write_figure_csv(&rows, &mut sink.w)?,
                Format::Json => sink.json(&rows)?,
            }
            true
        }
        Command::Lln { family, n_max, a } => lln(cli, *family, *n_max, *a, &mut sink)?,
        Command::Hist { knot: name, n, bins, dk } => {
            let k = knot(name)?;
            eprintln!("scanning {} up to N = {n}", k.name);
            let recs = scan_roots(k, *n, cli.prec, Some(&Cache::from_env()))?;
            let centering = dk.map_or(Centering::Median, Centering::Fixed);
            let rep = histogram_compare(&recs, vol_over_2pi(k)?, &StableLawSpec::conjectured(), *bins, centering)?;
            eprintln!("KS distance {} (D_K = {}, {} samples)", rep.ks, rep.d_k, rep.samples);
            match cli.format {
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Bin {
                        lo: f64,
                        hi: f64,
                        density: f64,
                        overlay: f64,
                    }
                    let rows: Vec<Bin> = (0..rep.density.len())
                        .map(|i| Bin { lo: rep.edges[i], hi: rep.edges[i + 1], density: rep.density[i], overlay: rep.overlay[i] })
                        .collect();
                    sink.csv(&rows)?;
                }
                Format::Json => sink.json(&rep)?,
            }
            true
        }
    };
    sink.finish()?;
    Ok(ok)
}

fn verify(cli: &Cli, subject: &Subject, sink: &mut Sink) -> Result<bool> {
    let threshold = 2f64.powf(-(cli.prec as f64) / 4.0);
    match subject {
        Subject::Ir { gamma, d, n, r } => {
            let setup = modular_setup(gamma.p, gamma.q, gamma.pbar, gamma.qbar, *n, *d)?;
            let prec = Precision::new(cli.prec)?;
            let reports = match r {
                RArg::All => ir_sweep(&setup, &prec)?,
                RArg::One(r) => vec![verify_ir(&setup, *r, &prec)?],
            };
            #[derive(Serialize)]
            struct Row {
                h: i64,
                k: i64,
                r: i64,
                #[serde(rename = "L")]
                l: i64,
                lambda: String,
                defect: f64,
            }
            let rows: Vec<Row> = reports
                .iter()
                .map(|x| Row { h: setup.h, k: setup.k, r: x.r, l: x.l, lambda: x.lambda.to_string(), defect: x.defect })
                .collect();
            let ok = rows.iter().all(|x| x.defect < threshold);
            sink.rows(cli.format, &rows)?;
            Ok(ok)
        }
        Subject::Thp { h, k, r } => {
            let defects: Vec<(i64, f64)> = match r {
                RArg::All => thp_sweep(*h, *k, cli.prec)?.into_iter().enumerate().map(|(i, d)| (i as i64, d)).collect(),
                RArg::One(r) => vec![(*r, verify_thp_decomposition(*h, *k, *r, cli.prec)?)],
            };
            #[derive(Serialize)]
            struct Row {
                h: i64,
                k: i64,
                r: i64,
                defect: f64,
            }
            let rows: Vec<Row> = defects.into_iter().map(|(r, defect)| Row { h: *h, k: *k, r, defect }).collect();
            let ok = rows.iter().all(|x| x.defect < threshold);
            sink.rows(cli.format, &rows)?;
            Ok(ok)
        }
        Subject::Th2 { h, kmax } => {
            let rows = (*h.max(&1)..=*kmax)
                .filter(|&k| gcd(*h, k) == 1 && !(*h == 1 && k == 1))
                .map(|k| reciprocity_h(*h, k, cli.prec))
                .collect::<Result<Vec<_>>>()?;
            sink.rows(cli.format, &rows)?;
            Ok(true)
        }
        Subject::Th4 { h, kmax } => {
            let mut rows = Vec::new();
            for k in h + 1..=*kmax {
                if gcd(*h, k) != 1 {
                    continue;
                }
                match th4_check(*h, k, cli.prec) {
                    Ok(r) => rows.push(r),
                    // c₀(k̄/h) ≥ 0: outside the statement, skipped
                    Err(Error::Domain(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            sink.rows(cli.format, &rows)?;
            Ok(true)
        }
    }
}

fn lln(cli: &Cli, family: Family, n_max: i64, a: i64, sink: &mut Sink) -> Result<bool> {
    let doubling = |top: i64| -> Vec<i64> { std::iter::successors(Some(50), |x| Some(x * 2)).take_while(|&x| x <= top).collect() };
    #[derive(Serialize)]
    struct Row {
        n: i64,
        alpha: String,
        sigma: i64,
        r: i64,
        #[serde(rename = "logJ")]
        log_j: f64,
        ratio: f64,
    }
    let to_row = |n: i64, r: &crate::stats::LlnRow| Row {
        n,
        alpha: r.alpha.to_string(),
        sigma: r.sigma,
        r: r.r,
        log_j: r.log_j,
        ratio: r.ratio,
    };
    match family {
        Family::Fib => {
            let fit = fibonacci_slope(n_max, cli.prec)?;
            let rows: Vec<Row> = fit.rows.iter().map(|(n, r)| to_row(*n, r)).collect();
            eprintln!("slope {:.4} (intercept {:.4})", fit.slope, fit.intercept);
            match cli.format {
                Format::Csv => sink.csv(&rows)?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        rows: Vec<Row>,
                        slope: f64,
                        intercept: f64,
                    }
                    sink.json(&Out { rows, slope: fit.slope, intercept: fit.intercept })?
                }
            }
        }
        Family::Inv | Family::Two => {
            let ns = doubling(n_max);
            if ns.is_empty() {
                return Err(Error::Domain(format!("--n-max {n_max} < 50")));
            }
            let alphas = if family == Family::Inv { inverse_family(&ns)? } else { two_term_family(a, &ns)? };
            let rows: Vec<Row> = ns.iter().zip(lln_check(&alphas, cli.prec)?.iter()).map(|(n, r)| to_row(*n, r)).collect();
            if let Some(last) = rows.last() {
                eprintln!("ratio at {} = {:.4}", last.alpha, last.ratio);
            }
            sink.rows(cli.format, &rows)?;
        }
    }
    Ok(true)
}

struct Sink {
    w: Box<dyn Write>,
}

impl Sink {
    fn open(path: Option<&PathBuf>) -> Result<Self> {
        let w: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink { w })
    }

    fn json<T: Serialize + ?Sized>(&mut self, v: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.w, v).map_err(|e| Error::Io(e.into()))?;
        writeln!(self.w)?;
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, rows: &[T]) -> Result<()> {
        let mut wr = csv::Writer::from_writer(&mut self.w);
        for r in rows {
            wr.serialize(r).map_err(|e| match e.into_kind() {
                csv::ErrorKind::Io(e) => Error::Io(e),
                other => Error::Parse(format!("{other:?}")),
            })?;
        }
        wr.flush()?;
        Ok(())
    }

    fn rows<T: Serialize>(&mut self, format: Format, rows: &[T]) -> Result<()> {
        match format {
            Format::Csv => self.csv(rows),
            Format::Json => self.json(rows),
        }
    }

    fn finish(mut self) -> Result<()> {
        self.w.flush()?;
        Ok(())
    }
}
