use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eii::anetf::{self, AnetfConfig, Arrival, Mode};
use eii::codec::{self, DecodeOutcome, Encoder};
use eii::pcheck::{self, build_parity_check};
use eii::word::{parse_positions, SymbolWord};
use eii::{code_from_capability, CapabilityTree, Code, CodeSpec, ErasureSolution, Error, Field};

#[derive(Parser)]
#[command(
    name = "eii",
    version,
    about = "Multi-layer integrated interleaved erasure codes"
)]
struct Cli {
    #[command(flatten)]
    source: SpecSource,
    /// Write the main output here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecSource {
    /// JSON code description.
    #[arg(long, global = true, conflicts_with = "capability")]
    spec: Option<PathBuf>,
    /// Capability tree such as "((1,1,2),(1,2,3),(1,2,3),(1,2,3))".
    #[arg(long, global = true)]
    capability: Option<String>,
    /// Row length used with --capability.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Field GF(2^w) used with --capability; the smallest valid field by default.
    #[arg(long, global = true)]
    w: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Print [N, k, d], layers, levels, capability and field.
    Info,
    /// Systematically encode a data file.
    Encode {
        #[arg(long)]
        data: PathBuf,
    },
    /// Fill the erasures of a word file ('?' marks an erasure).
    Decode {
        #[arg(long)]
        word: PathBuf,
        /// Extra erased positions, comma separated and zero based.
        #[arg(long)]
        erasures: Option<String>,
        #[arg(long, value_enum, default_value_t = DecodeMode::Alg)]
        mode: DecodeMode,
    },
    /// Export the parity-check matrix.
    Pcheck {
        /// Drop dependent rows.
        #[arg(long)]
        reduce: bool,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
        format: MatrixFormat,
    },
    /// Fraction of nonzero entries of the parity-check matrix.
    Density,
    /// Average number of erasures to failure.
    Anetf {
        #[arg(long, default_value_t = anetf::DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = AnetfMode::Pcheck)]
        mode: AnetfMode,
        #[arg(long, value_enum, default_value_t = ArrivalArg::Uniform)]
        arrival: ArrivalArg,
        #[arg(long)]
        threads: Option<usize>,
        /// Emit a JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Minimum distance by enumerating every codeword.
    MindistBrute,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecodeMode {
    Alg,
    Pcheck,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Alist,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnetfMode {
    #[value(alias = "capability")]
    Alg,
    #[value(alias = "parity-check")]
    Pcheck,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArrivalArg {
    Uniform,
    RowFirst,
}

/// Failure with its process exit status.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: 1,
            message: message.into(),
        }
    }

    fn decode(message: impl Into<String>) -> Self {
        Failure {
            status: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Validation(_)
            | Error::NotTotallyOrdered(_)
            | Error::DifferentChildren
            | Error::Json(_) => 2,
            Error::InconsistentWord => 3,
            _ => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &PathBuf) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_spec(src: &SpecSource) -> Outcome<CodeSpec> {
    match (&src.spec, &src.capability) {
        (Some(path), None) => Ok(CodeSpec::from_json(&read(path)?)?),
        (None, Some(cap)) => {
            let n = src
                .n
                .ok_or_else(|| Failure::usage("--capability needs --n (the row length)"))?;
            let tree: CapabilityTree = cap.parse()?;
            let code = code_from_capability(&tree, n).map_err(|e| match e {
                Error::InvalidParameter(m) | Error::Parse(m) => Failure {
                    status: 2,
                    message: m,
                },
                other => other.into(),
            })?;
            Ok(match src.w {
                Some(w) => CodeSpec::new(Field::get(w)?, code)?,
                None => CodeSpec::in_smallest_field(code)?,
            })
        }
        _ => Err(Failure::usage(
            "give the code exactly once, with --spec FILE or --capability STRING",
        )),
    }
}

fn leaf_len(code: &Code) -> usize {
    match code {
        Code::Leaf { n, .. } => *n,
        Code::Node { children, .. } => leaf_len(&children[0]),
    }
}

fn info(spec: &CodeSpec) -> String {
    let code = spec.code();
    format!(
        "{}\nfield: {}\nlayers: {}\nlevels: {}\ncapability: {}\ndigest: {}\n",
        spec.params(),
        spec.field(),
        code.layers(),
        code.levels(),
        spec.capability(),
        spec.digest()
    )
}

fn encode(spec: &CodeSpec, data: &PathBuf) -> Outcome<String> {
    let data = SymbolWord::parse(&read(data)?, spec.field())?;
    if !data.is_complete() {
        return Err(Failure::usage("data may not contain erasures"));
    }
    let word = Encoder::new(spec).encode(&data.symbols)?;
    Ok(word.format(leaf_len(spec.code())))
}

fn decode(
    spec: &CodeSpec,
    word: &PathBuf,
    erasures: Option<&str>,
    mode: DecodeMode,
) -> Outcome<String> {
    let mut word = SymbolWord::parse(&read(word)?, spec.field())?;
    if let Some(list) = erasures {
        word.erase(&parse_positions(list)?)?;
    }
    if word.len() != spec.length() {
        return Err(Failure::usage(format!(
            "word has {} symbols, the code has length {}",
            word.len(),
            spec.length()
        )));
    }
    let by_matrix = |word: &SymbolWord| -> Outcome<SymbolWord> {
        let pc = build_parity_check(spec).reduce();
        match pcheck::pc_decode(&pc, word)? {
            ErasureSolution::Unique(w) => Ok(w),
            ErasureSolution::Undetermined => Err(Failure::decode(
                "the erased columns of the parity-check matrix are dependent",
            )),
        }
    };
    let out = match mode {
        DecodeMode::Pcheck => by_matrix(&word)?,
        DecodeMode::Alg | DecodeMode::Hybrid => {
            let (out, report) = codec::decode(spec, &word)?;
            match (report.outcome, mode) {
                (DecodeOutcome::Recovered, _) => out,
                (DecodeOutcome::Uncorrectable, DecodeMode::Hybrid) => by_matrix(&word)?,
                (DecodeOutcome::Uncorrectable, _) => {
                    return Err(Failure::decode(
                        "the erasure pattern exceeds the decoder's capability",
                    ))
                }
            }
        }
    };
    Ok(out.format(leaf_len(spec.code())))
}

fn pcheck_out(spec: &CodeSpec, reduce: bool, format: MatrixFormat) -> String {
    let mut pc = build_parity_check(spec);
    if reduce {
        pc = pc.reduce();
    }
    match format {
        MatrixFormat::Csv => pc.matrix().to_csv(),
        MatrixFormat::Alist => pc.matrix().to_alist(),
    }
}

fn density(spec: &CodeSpec) -> String {
    let h = build_parity_check(spec).h;
    format!(
        "density: {:.4} ({}/{}) rows={} cols={}\n",
        h.density(),
        h.nonzero_count(),
        h.rows() * h.cols(),
        h.rows(),
        h.cols()
    )
}

/// Largest codebook the brute-force search will enumerate.
const BRUTE_LIMIT: f64 = (1u64 << 24) as f64;

fn mindist_brute(spec: &CodeSpec) -> Outcome<String> {
    let q = spec.field().q();
    let k = spec.dimension();
    if (q as f64).powi(k as i32) > BRUTE_LIMIT {
        return Err(Failure::usage(format!(
            "refusing to enumerate {q}^{k} codewords (limit 2^24)"
        )));
    }
    if k == 0 {
        return Err(Error::NoCodewords.into());
    }
    let enc = Encoder::new(spec);
    let generators: Vec<Vec<u8>> = (0..k)
        .map(|i| {
            let mut unit = vec![0; k];
            unit[i] = 1;
            enc.encode(&unit).map(|w| w.symbols)
        })
        .collect::<Result<_, _>>()?;
    let best = brute_min_weight(spec.field(), &generators, spec.length());
    Ok(format!(
        "brute-force minimum distance: {best}\nformula: {}\n",
        spec.min_distance()
    ))
}

/// Minimum weight over all nonzero combinations of the generator rows.
fn brute_min_weight(field: &Field, generators: &[Vec<u8>], n: usize) -> usize {
    fn walk(field: &Field, gens: &[Vec<u8>], acc: &mut Vec<u8>, nonzero: bool, best: &mut usize) {
        let Some((g, rest)) = gens.split_first() else {
            if nonzero {
                *best = (*best).min(acc.iter().filter(|&&x| x != 0).count());
            }
            return;
        };
        walk(field, rest, acc, nonzero, best);
        for a in 1..field.q() {
            let mut next = acc.clone();
            field.axpy(&mut next, a as u8, g);
            walk(field, rest, &mut next, true, best);
        }
    }
    let mut best = n + 1;
    walk(field, generators, &mut vec![0; n], false, &mut best);
    best
}

fn run(cli: &Cli) -> Outcome<String> {
    let spec = load_spec(&cli.source)?;
    match &cli.command {
        Command::Info => Ok(info(&spec)),
        Command::Encode { data } => encode(&spec, data),
        Command::Decode {
            word,
            erasures,
            mode,
        } => decode(&spec, word, erasures.as_deref(), *mode),
        Command::Pcheck { reduce, format } => Ok(pcheck_out(&spec, *reduce, *format)),
        Command::Density => Ok(density(&spec)),
        Command::Anetf {
            trials,
            seed,
            mode,
            arrival,
            threads,
            json,
        } => {
            let mode = match mode {
                AnetfMode::Alg => Mode::Capability,
                AnetfMode::Pcheck => Mode::ParityCheck,
                AnetfMode::Hybrid => Mode::Hybrid,
            };
            let mut config = AnetfConfig::new(spec, mode, *trials, *seed);
            config.arrival = match arrival {
                ArrivalArg::Uniform => Arrival::Uniform,
                ArrivalArg::RowFirst => Arrival::RowFirst,
            };
            config.threads = *threads;
            let report = anetf::simulate(&config)?;
            Ok(if *json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            })
        }
        Command::MindistBrute => mindist_brute(&spec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|text| match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eii: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}
