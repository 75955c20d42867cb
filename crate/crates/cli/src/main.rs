//! `optseg`: compare greedy and minimal-token BPE segmentation.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error or
//! oracle mismatch.

use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use optseg_core::{
    analyze, emit_context_fit, emit_length_frequency, emit_report, emit_wordlen_tsr, escape_bytes,
    ingest, nonzero_tsr_split, run_oracle, AnalysisOptions, ContextFitConfig, CorpusFormat,
    CorpusLimits, CorpusSource, EmitOptions, LanguageReport, MetricSet, Mode, OracleConfig,
    ReportFormat, TieBreak, Tier, Tokenizer, TokenizerConfig, TsrRecord, UnitMode,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "optseg",
    version,
    about = "Greedy vs. minimal-token byte-level BPE segmentation"
)]
struct Cli {
    /// Vocabulary tier: 50k (r50k_base), 100k (cl100k_base) or 200k (o200k_base).
    #[arg(long, global = true)]
    tier: Option<Tier>,

    /// Directory holding the *.tiktoken rank files.
    #[arg(long, global = true, env = "OPTSEG_VOCAB_DIR")]
    vocab_dir: Option<PathBuf>,

    /// Tokenizer config file (key = value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the segmentation of a text, one line per pre-token.
    Encode(EncodeArgs),
    /// Per-document token counts and TSR for a line-per-document file.
    Compare(CompareArgs),
    /// Corpus statistics: TSR summary, word-length profiles, context fit.
    Analyze(AnalyzeArgs),
    /// Check the DP segmenter against exhaustive search on random cases.
    VerifyOracle(OracleArgs),
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Optimal)]
    mode: ModeArg,
    /// Read the text from a file instead of the argument.
    #[arg(long, conflicts_with = "text")]
    input: Option<PathBuf>,
    /// Text to encode; read from stdin when neither this nor --input is given.
    text: Option<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Line-per-document text file.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Keep only documents where the optimal segmentation saves tokens.
    #[arg(long)]
    only_nonzero: bool,
    #[arg(long)]
    limit_docs: Option<u64>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Corpora as `LANG=PATH`, or `PATH` to use the file stem as the language tag.
    #[arg(required = true)]
    corpus: Vec<String>,
    /// Directory for the report files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Comma-separated subset of tsr, wordlen, frequency, context-fit.
    #[arg(long, default_value = "all")]
    metrics: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    limit_docs: Option<u64>,
    #[arg(long)]
    limit_bytes: Option<u64>,
    #[arg(long, value_enum, default_value_t = InputFormat::Plain)]
    input_format: InputFormat,
    /// JSON field holding the text, for --input-format jsonl.
    #[arg(long, default_value = "text")]
    text_field: String,
    /// Abort on a malformed record instead of skipping it.
    #[arg(long)]
    fail_fast: bool,
    /// Unit for the word-length profile.
    #[arg(long, value_enum, default_value_t = UnitArg::Word)]
    unit: UnitArg,
    #[arg(long, default_value_t = 1024)]
    context_window: u64,
    #[arg(long, default_value_t = 1000)]
    samples_per_k: usize,
    /// Largest number of examples per context-fit draw.
    #[arg(long, default_value_t = 32)]
    max_k: usize,
    /// Record wall-clock time in the summary (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = 10_000)]
    cases: usize,
    #[arg(long, default_value_t = OracleConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_chunk: usize,
    /// Break the DP tie-break on purpose, to check that mismatches are caught.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Greedy,
    Optimal,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Greedy => Mode::Greedy,
            ModeArg::Optimal => Mode::Optimal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    Plain,
    Jsonl,
    Raw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum UnitArg {
    Word,
    Pretoken,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err
        .chain()
        .find_map(|c| c.downcast_ref::<optseg_core::Error>())
    {
        Some(e) if e.is_internal() => EXIT_INTERNAL,
        _ => EXIT_DATA,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::VerifyOracle(args) => verify_oracle(args),
        Command::Encode(args) => {
            let tok = tokenizer(&cli)?;
            encode(&tok, args)
        }
        Command::Compare(args) => {
            let tok = tokenizer(&cli)?;
            compare(&tok, args)
        }
        Command::Analyze(args) => {
            let tok = tokenizer(&cli)?;
            run_analyze(&tok, args)
        }
    }
}

fn tokenizer(cli: &Cli) -> anyhow::Result<Tokenizer> {
    let config = match &cli.config {
        Some(path) => TokenizerConfig::load(path)?,
        None => TokenizerConfig::default(),
    };
    Ok(config.build(cli.tier, cli.vocab_dir.as_deref())?)
}

fn encode(tok: &Tokenizer, args: &EncodeArgs) -> anyhow::Result<ExitCode> {
    let text: Vec<u8> = match (&args.text, &args.input) {
        (Some(t), _) => t.clone().into_bytes(),
        (None, Some(path)) => {
            fs::read(path).with_context(|| format!("reading {}", path.display()))?
        }
        (None, None) => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            buf
        }
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for enc in tok.encode_chunks(&text, args.mode.into())? {
        let ids: Vec<u32> = enc.segmentation.ids().iter().map(|id| id.0).collect();
        let pieces: Vec<String> = enc
            .segmentation
            .pieces(tok.vocabulary())?
            .into_iter()
            .map(escape_bytes)
            .collect();
        writeln!(
            out,
            "{}\t{}\t{}",
            serde_json::to_string(&ids)?,
            serde_json::to_string(&pieces)?,
            ids.len()
        )?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn compare(tok: &Tokenizer, args: &CompareArgs) -> anyhow::Result<ExitCode> {
    let source =
        CorpusSource::plain_lines(args.file.display().to_string(), "").with_limits(CorpusLimits {
            max_docs: args.limit_docs,
            max_bytes: None,
        });
    let mut records = Vec::new();
    for doc in ingest(&source)? {
        let doc = doc?;
        records.push(optseg_core::document_tsr(tok, doc.id, &doc.text)?);
    }
    let (nonzero, pct) = nonzero_tsr_split(&records);
    let rows: Vec<TsrRecord> = if args.only_nonzero { nonzero } else { records };

    let mut out = BufWriter::new(io::stdout().lock());
    match args.format {
        FormatArg::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        FormatArg::Csv => {
            writeln!(out, "doc_id,tokens_greedy,tokens_optimal,tsr")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.doc_id,
                    r.tokens_greedy,
                    r.tokens_optimal,
                    r.tsr.to_f64()
                )?;
            }
        }
    }
    out.flush()?;
    log::info!("{pct:.2}% of documents have non-zero TSR");
    Ok(ExitCode::SUCCESS)
}

fn parse_corpus_arg(arg: &str) -> (String, String) {
    match arg.split_once('=') {
        Some((lang, path)) if !lang.is_empty() && !lang.contains('/') => {
            (lang.to_string(), path.to_string())
        }
        _ => {
            let stem = Path::new(arg)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| arg.to_string());
            (stem, arg.to_string())
        }
    }
}

fn run_analyze(tok: &Tokenizer, args: &AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let metrics: MetricSet = args.metrics.parse()?;
    if args.max_k == 0 {
        bail!(optseg_core::Error::Config(
            "--max-k must be at least 1".into()
        ));
    }
    let opts = AnalysisOptions {
        metrics,
        unit_mode: match args.unit {
            UnitArg::Word => UnitMode::WhitespaceWord,
            UnitArg::Pretoken => UnitMode::Pretoken,
        },
        context_fit: ContextFitConfig {
            context_window: args.context_window,
            ks: (1..=args.max_k).collect(),
            samples_per_k: args.samples_per_k,
            seed: args.seed,
        },
        threads: args.threads,
        ..AnalysisOptions::default()
    };
    let format = match args.input_format {
        InputFormat::Plain => CorpusFormat::PlainLines,
        InputFormat::Jsonl => CorpusFormat::JsonLines {
            text_field: args.text_field.clone(),
        },
        InputFormat::Raw => CorpusFormat::RawFile,
    };

    let mut reports: Vec<LanguageReport> = Vec::new();
    for arg in &args.corpus {
        let (lang, path) = parse_corpus_arg(arg);
        let source = CorpusSource {
            uri: path,
            format: format.clone(),
            language_tag: lang,
            limits: CorpusLimits {
                max_docs: args.limit_docs,
                max_bytes: args.limit_bytes,
            },
            fail_fast: args.fail_fast,
        };
        let report = analyze(&source, tok, &opts)?;
        log::info!(
            "{}: {} docs, micro TSR {:?}",
            report.language_tag,
            report.docs_processed,
            report.micro_tsr
        );
        reports.push(report);
    }

    fs::create_dir_all(&args.out_dir).map_err(|e| {
        anyhow::Error::new(e).context(format!("creating {}", args.out_dir.display()))
    })?;
    let format: ReportFormat = args.format.into();
    let ext = format.extension();
    let create = |name: &str| -> anyhow::Result<BufWriter<File>> {
        let path = args.out_dir.join(format!("{name}.{ext}"));
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        println!("{}", path.display());
        Ok(BufWriter::new(file))
    };

    let emit = EmitOptions {
        include_timing: args.timings,
    };
    emit_report(&reports, format, create("tsr_summary")?, emit)?;
    if metrics.wordlen {
        emit_wordlen_tsr(&reports, format, create("wordlen_tsr")?)?;
    }
    if metrics.frequency {
        emit_length_frequency(&reports, format, create("length_frequency")?)?;
    }
    if metrics.context_fit {
        emit_context_fit(&reports, format, create("context_fit")?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_oracle(args: &OracleArgs) -> anyhow::Result<ExitCode> {
    let cfg = OracleConfig {
        seed: args.seed,
        cases: args.cases,
        max_chunk: args.max_chunk,
        tie_break: if args.inject_fault {
            TieBreak::LongestSuffix
        } else {
            TieBreak::ShortestSuffix
        },
        ..OracleConfig::default()
    };
    if cfg.cases == 0 {
        eprintln!("warning: 0 cases requested; nothing was checked");
    }
    let summary = run_oracle(&cfg)?;
    println!(
        "oracle: {} cases, seed {:#x}, {} count mismatches, {} id mismatches: {}",
        summary.cases,
        cfg.seed,
        summary.count_mismatches,
        summary.id_mismatches,
        if summary.passed() { "PASS" } else { "FAIL" }
    );
    if let Some(cx) = &summary.first_counterexample {
        eprintln!("{cx}");
    }
    Ok(if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INTERNAL)
    })
}
