use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ffnets::acceptance;
use ffnets::ellcurve::Curve;
use ffnets::genmat::MatrixSet;
use ffnets::gf::{field_of_size, is_prime, make_field, prime_power, FieldSpec};
use ffnets::params::{parse_field, Backend, BackendSpec, ParamSpec};
use ffnets::pipeline;
use ffnets::seqgen::{self, OutputMode, PointRequest};

#[derive(Parser)]
#[command(name = "ffnets", version, about = "Generating matrices of digital (T,s)-sequences from function fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build generating matrices and write an FFNETS v1 file.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 8)]
        cols: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print sequence points `n x_1 ... x_s`.
    Points {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        n0: u128,
        #[arg(long, default_value_t = 16)]
        count: usize,
        /// Digits per coordinate; defaults to the number of matrix rows.
        #[arg(long)]
        precision: Option<usize>,
        /// Print `y/q^m` instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// Tabulate `m T* bound margin` and check the bound.
    Tvalue {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        mmax: usize,
    },
    /// Count points of one block in every elementary interval shape.
    Netcheck {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        offset: u128,
    },
    /// List the local expansion of an element, e.g. `1/(1-x)` at `x`.
    Expand {
        element: String,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        curve: Option<String>,
        /// `inf`, `x+1`, `poly:1,1` on F_q(x); `O`, `(x0,y0)` on a curve.
        #[arg(long, visible_alias = "at")]
        place: String,
        /// Last coefficient index to print.
        #[arg(long, default_value_t = 7)]
        precision: i64,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long)]
        quick: bool,
        /// Replace the bundled matrix file.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field size, or the characteristic when --e is given.
    #[arg(long, default_value = "2")]
    q: String,
    #[arg(long)]
    e: Option<usize>,
}

#[derive(Args)]
struct ParamArgs {
    /// Full parameter text; replaces the individual flags.
    #[arg(long, conflicts_with_all = ["s", "variant", "curve", "places", "pinf", "aux", "vandermonde"])]
    params: Option<String>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 1)]
    mu: usize,
    #[arg(long, default_value = "genus0")]
    variant: String,
    /// Weierstrass coefficients `a1,a2,a3,a4,a6` (digit indices).
    #[arg(long)]
    curve: Option<String>,
    /// Semicolon-separated `P_1;...;P_s`.
    #[arg(long)]
    places: Option<String>,
    #[arg(long)]
    pinf: Option<String>,
    #[arg(long = "D")]
    aux: Option<String>,
    #[arg(long)]
    vandermonde: bool,
}

fn field_from(args: &FieldArgs) -> Result<FieldSpec> {
    if args.q.contains('^') {
        return Ok(parse_field(&args.q, None)?);
    }
    let n: u64 = args.q.parse().with_context(|| format!("bad --q {:?}", args.q))?;
    Ok(match args.e {
        None => field_of_size(n)?,
        Some(e) if is_prime(n) => make_field(n as u32, e, None)?,
        Some(e) => match prime_power(n) {
            Some((_, d)) if d == e => field_of_size(n)?,
            _ => bail!("--q {n} is neither a prime nor a prime power of degree {e}"),
        },
    })
}

fn backend_from(field: &FieldSpec, curve: Option<&str>) -> Result<BackendSpec> {
    Ok(match curve {
        None => BackendSpec::RationalFunctionField,
        Some(c) => {
            let cv = Curve::parse(field.clone(), c)?;
            BackendSpec::Curve(cv.coefficients().map(|a| a.index()))
        }
    })
}

impl ParamArgs {
    fn spec(&self) -> Result<ParamSpec> {
        if let Some(p) = &self.params {
            return Ok(p.parse()?);
        }
        let field = field_from(&self.field)?;
        let s = self.s.context("--s is required (or pass --params)")?;
        Ok(ParamSpec {
            variant: self.variant.parse()?,
            backend: backend_from(&field, self.curve.as_deref())?,
            field,
            s,
            mu: self.mu,
            places: self.places.as_ref().map(|p| p.split(';').map(|t| t.trim().to_string()).collect()),
            pinf: self.pinf.clone(),
            aux: self.aux.clone(),
            vandermonde: self.vandermonde,
        })
    }
}

fn load(path: &Path) -> Result<MatrixSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    MatrixSet::deserialize(&text).with_context(|| format!("loading {}", path.display()))
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool> {
    let mut out = io::stdout().lock();
    match cli.cmd {
        Command::Construct { params, rows, cols, out: path } => {
            let spec = params.spec()?;
            let resolved = spec.resolved()?;
            let ms = pipeline::construct(&resolved, rows, cols)?;
            let text = ms.serialize();
            match path {
                Some(p) => {
                    fs::write(&p, &text).with_context(|| format!("writing {}", p.display()))?;
                    writeln!(out, "params {resolved}")?;
                    writeln!(out, "digest={}", ms.digest())?;
                }
                None => {
                    out.write_all(text.as_bytes())?;
                    eprintln!("digest={}", ms.digest());
                }
            }
            Ok(true)
        }
        Command::Points { input, n0, count, precision, exact } => {
            let ms = load(&input)?;
            let m = precision.unwrap_or(ms.rows());
            let mode = if exact { OutputMode::Exact } else { OutputMode::Binary64 };
            for p in seqgen::points(&ms, &PointRequest { n0, count, m, mode })? {
                writeln!(out, "{}", p.render(mode))?;
            }
            Ok(true)
        }
        Command::Tvalue { input, mmax } => {
            let ms = load(&input)?;
            let rep = pipeline::tvalue(&ms, mmax)?;
            writeln!(out, "# m T* bound margin")?;
            for r in &rep.rows {
                writeln!(out, "{} {} {} {}", r.m, r.t_star, r.bound, r.margin())?;
            }
            if !rep.ok() {
                let bad: Vec<String> = rep.violations().map(|r| r.m.to_string()).collect();
                writeln!(out, "FAIL bound exceeded at m = {}", bad.join(","))?;
            }
            Ok(rep.ok())
        }
        Command::Netcheck { input, m, t, offset } => {
            let ms = load(&input)?;
            let res = pipeline::netcheck(&ms, m, t, offset)?;
            for (shape, ok) in &res {
                let sh: Vec<String> = shape.iter().map(usize::to_string).collect();
                writeln!(out, "{} {}", sh.join(","), if *ok { "pass" } else { "fail" })?;
            }
            let failed = res.iter().filter(|(_, ok)| !ok).count();
            writeln!(out, "{} of {} shapes pass", res.len() - failed, res.len())?;
            Ok(failed == 0)
        }
        Command::Expand { element, field, curve, place, precision } => {
            let k = field_from(&field)?;
            let backend = Backend::new(&k, &backend_from(&k, curve.as_deref())?)?;
            let e = pipeline::expand(&backend, &element, &place, precision)?;
            for line in pipeline::render_expansion(&e) {
                writeln!(out, "{line}")?;
            }
            Ok(true)
        }
        Command::Selftest { quick, golden } => {
            let mut outcomes = acceptance::run(quick);
            if let Some(path) = golden {
                let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                outcomes[0] = acceptance::golden_check(&text);
            }
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            writeln!(out, "{} of {} checks passed", outcomes.len() - failed, outcomes.len())?;
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffnets::construct::Variant;

    #[test]
    fn field_flags() {
        let f = |q: &str, e| field_from(&FieldArgs { q: q.into(), e }).map(|k| k.size());
        assert_eq!(f("4", None).unwrap(), 4);
        assert_eq!(f("2", Some(3)).unwrap(), 8);
        assert_eq!(f("9", Some(2)).unwrap(), 9);
        assert_eq!(f("3^2", None).unwrap(), 9);
        assert!(f("9", Some(3)).is_err());
        assert!(f("6", None).is_err());
    }

    #[test]
    fn variant_names() {
        assert_eq!("xing".parse::<Variant>().unwrap(), Variant::XingStyle);
    }
}
