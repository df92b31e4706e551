//! The `elongated` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
//! usage, parse and I/O errors.
//!
//! Eta-quotient literals have the form `N; d^r * d^r * ...; s` (level,
//! factors, power of `q` in front). They contain spaces and `;`, so quote
//! them in the shell:
//!
//! ```text
//! elongated expand "8; 2^2 * 8^4 * 1^-4 * 4^-2; 1" --trunc 5
//! ```

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::elongated::reduce_to_x_polynomial;
use crate::error::{Error, Result};
use crate::eta::{cusp_orders, expand_eta_quotient_in, newman_modularity_check, EtaQuotientSpec};
use crate::golden::GOLDEN_DIR_ENV;
use crate::series::{CoefficientRing, TruncatedSeries};
use crate::verifier::{run_suite, FamilyScan, SuiteConfig};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "elongated", version, about = "q-series engine and verifier for d_7(n) mod 8^alpha")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand an eta quotient and print it in series text format.
    Expand {
        /// Eta-quotient literal, e.g. "8; 2^2 * 8^4 * 1^-4 * 4^-2; 1".
        spec: String,
        #[arg(long)]
        trunc: i64,
        /// Work mod 2^B instead of over the integers.
        #[arg(long, value_name = "B")]
        mod_bits: Option<u32>,
    },
    /// Write a series (series text format) as a polynomial in x.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        maxdeg: u32,
    },
    /// Newman's conditions and the order at every cusp of Gamma_0(N).
    Cusps { spec: String },
    /// Run one verification scenario, or all of them.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    L1,
    Appendix,
    Modeq,
    Lemma31,
    Theorem41,
    Vspace,
    Family,
    Main,
    All,
}

impl Target {
    fn checks(self) -> &'static [&'static str] {
        match self {
            Target::L1 => &["l1"],
            Target::Appendix => &["appendix"],
            Target::Modeq => &["modeq"],
            Target::Lemma31 => &["lemma31"],
            Target::Theorem41 => &["theorem41"],
            Target::Vspace => &["vspace"],
            Target::Family => &["family"],
            Target::Main => &["main"],
            Target::All => &[],
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    target: Target,
    /// TOML file with suite parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Golden data directory (default: the copies built into the binary).
    #[arg(long, env = GOLDEN_DIR_ENV)]
    golden_dir: Option<PathBuf>,
    #[arg(long)]
    trunc: Option<i64>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    r_max: Option<i64>,
    #[arg(long)]
    alpha: Option<u32>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    alpha_max: Option<u32>,
    #[arg(long)]
    margin_bits: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave elapsed times out of the report.
    #[arg(long)]
    no_timing: bool,
}

impl VerifyArgs {
    fn config(&self) -> Result<SuiteConfig> {
        let mut c = match &self.config {
            Some(path) => SuiteConfig::from_toml_str(&read(path)?)?,
            None => SuiteConfig::default(),
        };
        if let Some(dir) = &self.golden_dir {
            c.golden_dir = Some(dir.clone());
        }
        if let Some(v) = self.trunc {
            c.trunc = v;
        }
        if let Some(v) = self.n_max {
            c.n_max = v;
            c.vspace_degree = c.vspace_degree.min(v);
        }
        if let Some(v) = self.r_max {
            c.r_max = v;
        }
        if let Some(v) = self.alpha_max {
            c.alpha_max = v;
        }
        if let Some(v) = self.margin_bits {
            c.margin_bits = v;
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        match (self.alpha, self.count) {
            (Some(alpha), count) => c.family = vec![FamilyScan { alpha, count: count.unwrap_or(100) }],
            (None, Some(count)) => c.family.iter_mut().for_each(|s| s.count = count),
            (None, None) => {}
        }
        c.validate()?;
        Ok(c)
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Parses `args` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        msg: e.to_string(),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Expand { spec, trunc, mod_bits } => {
            let spec: EtaQuotientSpec = spec.parse()?;
            let ring = match mod_bits {
                Some(b) => CoefficientRing::mod_pow2(b)?,
                None => CoefficientRing::Exact,
            };
            let s = expand_eta_quotient_in(&spec, trunc, ring)?;
            write!(out, "{}", s.to_text()).map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Reduce { input, maxdeg } => {
            let s = TruncatedSeries::from_text(&read(&input)?)?;
            let p = reduce_to_x_polynomial(&s, maxdeg)?;
            write!(out, "{}", p.to_golden_text()).map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Cusps { spec } => {
            let spec: EtaQuotientSpec = spec.parse()?;
            let newman = newman_modularity_check(&spec);
            writeln!(out, "{newman}").map_err(io_err)?;
            if !newman.is_pass() {
                return Ok(EXIT_FAIL);
            }
            let orders = cusp_orders(&spec)?;
            for (cusp, ord) in &orders.orders {
                writeln!(out, "ord_{cusp} = {ord}").map_err(io_err)?;
            }
            writeln!(out, "total = {}", orders.total()).map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Verify(args) => {
            let config = args.config()?;
            let suite = run_suite(&config, args.target.checks())?;
            let json = suite.to_json_lines(!args.no_timing);
            match &args.output {
                Some(path) => {
                    fs::write(path, &json).map_err(|e| Error::Io {
                        path: path.display().to_string(),
                        msg: e.to_string(),
                    })?;
                    for r in &suite.reports {
                        writeln!(out, "{r}").map_err(io_err)?;
                    }
                }
                None => write!(out, "{json}").map_err(io_err)?,
            }
            Ok(if suite.is_pass() { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("elongated").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn expand_x() {
        let (code, out, _) = call(&["expand", "8; 2^2 * 8^4 * 1^-4 * 4^-2; 1", "--trunc", "5"]);
        assert_eq!(code, 0);
        let s = TruncatedSeries::from_text(&out).unwrap();
        assert_eq!(s.valuation(), 1);
        assert_eq!(s.coeff_i64(1), Some(1));
        assert_eq!(s.coeff_i64(2), Some(4));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["expand", "8; 3^1; 0", "--trunc", "5"]).0, 2);
        assert_eq!(call(&["verify", "l1", "--trunc", "7"]).0, 2);
        assert_eq!(call(&["reduce", "--input", "/nonexistent/file", "--maxdeg", "3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn cusps_of_x() {
        let (code, out, _) = call(&["cusps", "8; 2^2 * 8^4 * 1^-4 * 4^-2; 1"]);
        assert_eq!(code, 0);
        assert!(out.contains("ord_∞ = 1"), "{out}");
        assert!(out.contains("ord_0 = -1"), "{out}");
        assert_eq!(call(&["cusps", "2; 2^1 * 1^-1; 0"]).0, 1);
    }

    #[test]
    fn family_scan() {
        let (code, out, _) = call(&["verify", "family", "--alpha", "1", "--count", "20", "--no-timing"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("{\"name\":\"family_alpha1\""), "{out}");
        assert!(!out.contains("millis"));
    }
}
