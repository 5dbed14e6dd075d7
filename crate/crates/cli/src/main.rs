use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use collagram::compressors::{lz78_encode, rle_lift};
use collagram::grammar::{parse, serialize, CollageSystem, Var};
use collagram::occurrence::occurrence_classes;
use collagram::oracle::{count_qgrams, expand};
use collagram::paths::truncation_path;
use collagram::{qgram_frequencies, Error};

const DEFAULT_MAX_BYTES: u64 = 1 << 26;
const MAX_BYTES_ENV: &str = "COLLAGRAM_MAX_BYTES";

/// Exact q-gram frequencies of collage-system compressed text.
#[derive(Debug, Parser)]
#[command(name = "collagram", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every q-gram of the derived text with its count, as TSV.
    Qgrams {
        #[arg(short)]
        q: usize,
        #[arg(short, long = "input")]
        input: PathBuf,
        #[arg(short, long = "output")]
        output: Option<PathBuf>,
    },
    /// Write the derived text to stdout.
    Expand {
        #[arg(short, long = "input")]
        input: PathBuf,
        /// Refuse to expand beyond this many bytes [default: 2^26, or $COLLAGRAM_MAX_BYTES].
        #[arg(long)]
        max_bytes: Option<u64>,
    },
    /// Rule count, height, text length and class.
    Stats {
        #[arg(short, long = "input")]
        input: PathBuf,
        /// Also print the occurrence classes of every variable.
        #[arg(long)]
        occ: bool,
    },
    /// Compare the compressed-domain counts with counting on the expanded text.
    Verify {
        #[arg(short)]
        q: usize,
        #[arg(short, long = "input")]
        input: PathBuf,
        #[arg(long)]
        max_bytes: Option<u64>,
    },
    /// Build a collage system from a raw text file.
    Compress {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(short, long = "input")]
        input: PathBuf,
        #[arg(short, long = "output")]
        output: PathBuf,
        /// With `--algo rle`, read a `.cs` file instead of raw text.
        #[arg(long)]
        from_cs: bool,
    },
    /// Print the truncation path of a truncation variable.
    Paths {
        #[arg(short, long = "input")]
        input: PathBuf,
        #[arg(long)]
        var: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Algo {
    /// LZ78 factorization.
    Lz78,
    /// LZ78 followed by run-length lifting of repeated concatenations.
    Rle,
}

/// Errors that map to a specific exit code.
#[derive(Debug)]
enum Exit {
    Usage(String),
    Mismatch(String),
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exit::Usage(m) | Exit::Mismatch(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Exit>() {
        return match e {
            Exit::Usage(_) => 1,
            Exit::Mismatch(_) => 3,
        };
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidQ(_) | Error::AffixTooLong(_)) => 1,
        Some(Error::Overflow(_) | Error::BudgetExceeded { .. }) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("collagram: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn load(path: &Path) -> anyhow::Result<CollageSystem> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&bytes).with_context(|| format!("{}", path.display()))
}

fn max_bytes(flag: Option<u64>) -> anyhow::Result<u64> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(MAX_BYTES_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!(Exit::Usage(format!("{MAX_BYTES_ENV}={v:?} is not a byte count")))),
        Err(_) => Ok(DEFAULT_MAX_BYTES),
    }
}

fn parse_var(name: &str, cs: &CollageSystem) -> anyhow::Result<Var> {
    let number = name
        .strip_prefix('X')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&k| k >= 1 && k <= cs.len())
        .ok_or_else(|| Exit::Usage(format!("`{name}` is not a variable of this system (X1..X{})", cs.len())))?;
    Ok(Var::named(number))
}

fn run(command: Command) -> anyhow::Result<()> {
    let stdout = io::stdout();
    match command {
        Command::Qgrams { q, input, output } => {
            let cs = load(&input)?;
            let report = qgram_frequencies(&cs, q)?;
            match output {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
                    let mut w = io::BufWriter::new(file);
                    report.write_tsv(&mut w)?;
                    w.flush()?;
                }
                None => report.write_tsv(io::BufWriter::new(stdout.lock()))?,
            }
        }
        Command::Expand { input, max_bytes: flag } => {
            let cs = load(&input)?;
            let text = expand(&cs, max_bytes(flag)?)?;
            stdout.lock().write_all(&text)?;
        }
        Command::Stats { input, occ } => {
            let cs = load(&input)?;
            let mut out = io::BufWriter::new(stdout.lock());
            writeln!(out, "rules\t{}", cs.len())?;
            writeln!(out, "height\t{}", cs.system_height())?;
            writeln!(out, "length\t{}", cs.text_len())?;
            writeln!(out, "class\t{}", cs.class())?;
            if occ {
                let table = occurrence_classes(&cs)?;
                writeln!(out, "\nvar\tall\tcomplete\tprefix_cut\tsuffix_cut\tboth_cut\tdead")?;
                for v in cs.vars() {
                    let c = table.get(v);
                    writeln!(
                        out,
                        "{v}\t{}\t{}\t{}\t{}\t{}\t{}",
                        c.all, c.complete, c.prefix_cut, c.suffix_cut, c.both_cut, c.dead
                    )?;
                }
            }
            out.flush()?;
        }
        Command::Verify { q, input, max_bytes: flag } => {
            let cs = load(&input)?;
            let fast = qgram_frequencies(&cs, q)?;
            let text = expand(&cs, max_bytes(flag)?)?;
            let naive = count_qgrams(&text, q);
            if fast != naive {
                let differing = naive
                    .counts()
                    .keys()
                    .chain(fast.counts().keys())
                    .filter(|k| fast.get(k) != naive.get(k))
                    .count();
                bail!(Exit::Mismatch(format!("{differing} q-gram counts differ from the expanded text")));
            }
            writeln!(stdout.lock(), "ok\t{} distinct q-grams\t{} occurrences", fast.len(), fast.total())?;
        }
        Command::Compress { algo, input, output, from_cs } => {
            let cs = match (algo, from_cs) {
                (Algo::Rle, true) => rle_lift(&load(&input)?),
                (Algo::Lz78, true) => bail!(Exit::Usage("--from-cs only applies to --algo rle".into())),
                (_, false) => {
                    let text = fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
                    let cs = lz78_encode(&text)?;
                    match algo {
                        Algo::Lz78 => cs,
                        Algo::Rle => rle_lift(&cs),
                    }
                }
            };
            fs::write(&output, serialize(&cs)).with_context(|| format!("cannot write {}", output.display()))?;
        }
        Command::Paths { input, var } => {
            let cs = load(&input)?;
            let v = parse_var(&var, &cs)?;
            let (_, steps) = truncation_path(&cs, v)
                .ok_or_else(|| Exit::Usage(format!("{v} is not a truncation variable")))?;
            let mut out = io::BufWriter::new(stdout.lock());
            for s in steps {
                writeln!(out, "{s}")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}
