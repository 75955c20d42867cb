//! Streaming corpus analysis and report emission.
//!
//! Documents are read lazily, segmented in fixed-size batches on a worker
//! pool, and folded into the running totals strictly in document order, so
//! a report does not depend on the thread count. Memory is bounded by the
//! batch size and the context-fit reservoir, not by the corpus size.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{
    context_fit_from_counts, tsr, units, whitespace_words, ContextFitConfig, ContextFitPoint,
    LengthFrequency, TsrAggregate, TsrRecord, UnitMode, WordLenAccumulator, WordLenBucket,
};
use crate::tokenizer::Tokenizer;

/// Version of the report layout. Bumped on any field change.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One UTF-8 document per line; blank lines are skipped.
    PlainLines,
    /// One JSON object per line; the document is the named string field.
    JsonLines { text_field: String },
    /// The whole file is a single document.
    RawFile,
}

impl CorpusFormat {
    pub fn name(&self) -> &'static str {
        match self {
            CorpusFormat::PlainLines => "plain-lines",
            CorpusFormat::JsonLines { .. } => "json-lines",
            CorpusFormat::RawFile => "raw-file",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CorpusLimits {
    pub max_docs: Option<u64>,
    /// Stop before the document that would push the total past this many bytes.
    pub max_bytes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSource {
    /// Local path. Remote URLs are rejected; download them first.
    pub uri: String,
    pub format: CorpusFormat,
    pub language_tag: String,
    pub limits: CorpusLimits,
    /// Abort on the first malformed record instead of skipping it.
    pub fail_fast: bool,
}

impl CorpusSource {
    pub fn plain_lines(uri: impl Into<String>, language_tag: impl Into<String>) -> Self {
        CorpusSource {
            uri: uri.into(),
            format: CorpusFormat::PlainLines,
            language_tag: language_tag.into(),
            limits: CorpusLimits::default(),
            fail_fast: false,
        }
    }

    pub fn with_format(mut self, format: CorpusFormat) -> Self {
        self.format = format;
        self
    }

    pub fn with_limits(mut self, limits: CorpusLimits) -> Self {
        self.limits = limits;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    /// Zero-based line number in the source (0 for raw files).
    pub id: u64,
    pub text: Vec<u8>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub docs: u64,
    pub bytes: u64,
    pub warnings: u64,
}

/// Lazy document iterator returned by [`ingest`].
pub struct DocumentStream {
    reader: Box<dyn BufRead + Send>,
    source: CorpusSource,
    line_no: u64,
    stats: IngestStats,
    done: bool,
}

impl DocumentStream {
    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    fn limit_reached(&self, next_len: usize) -> bool {
        let l = self.source.limits;
        l.max_docs.is_some_and(|m| self.stats.docs >= m)
            || l.max_bytes
                .is_some_and(|m| self.stats.bytes + next_len as u64 > m)
    }

    fn accept(&mut self, id: u64, text: Vec<u8>) -> Option<Result<Document>> {
        if self.limit_reached(text.len()) {
            self.done = true;
            return None;
        }
        self.stats.docs += 1;
        self.stats.bytes += text.len() as u64;
        Some(Ok(Document { id, text }))
    }

    fn next_raw(&mut self) -> Option<Result<Document>> {
        self.done = true;
        let mut text = Vec::new();
        if let Err(e) = self.reader.read_to_end(&mut text) {
            return Some(Err(e.into()));
        }
        if text.is_empty() {
            return None;
        }
        self.accept(0, text)
    }

    fn next_line(&mut self) -> Option<Result<Document>> {
        loop {
            let mut buf = Vec::new();
            match self.reader.read_until(b'\n', &mut buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
            let id = self.line_no;
            self.line_no += 1;
            if buf.last() == Some(&b'\n') {
                buf.pop();
            }
            if buf.last() == Some(&b'\r') {
                buf.pop();
            }
            if buf.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            let text = match &self.source.format {
                CorpusFormat::JsonLines { text_field } => match extract_field(&buf, text_field) {
                    Ok(t) => t,
                    Err(message) => {
                        if self.source.fail_fast {
                            self.done = true;
                            return Some(Err(Error::Record {
                                uri: self.source.uri.clone(),
                                line: id + 1,
                                message,
                            }));
                        }
                        self.stats.warnings += 1;
                        log::warn!("{}:{}: skipping record: {message}", self.source.uri, id + 1);
                        continue;
                    }
                },
                _ => buf,
            };
            return self.accept(id, text);
        }
    }
}

impl Iterator for DocumentStream {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = match self.source.format {
            CorpusFormat::RawFile => self.next_raw(),
            _ => self.next_line(),
        };
        if item.is_none() {
            log::debug!(
                "{}: {} documents, {} bytes, {} warnings",
                self.source.uri,
                self.stats.docs,
                self.stats.bytes,
                self.stats.warnings
            );
        }
        item
    }
}

fn extract_field(line: &[u8], field: &str) -> std::result::Result<Vec<u8>, String> {
    let value: serde_json::Value =
        serde_json::from_slice(line).map_err(|e| format!("malformed JSON: {e}"))?;
    match value.get(field) {
        Some(serde_json::Value::String(s)) => Ok(s.clone().into_bytes()),
        Some(_) => Err(format!("field {field:?} is not a string")),
        None => Err(format!("missing field {field:?}")),
    }
}

/// Opens `source` for lazy reading.
pub fn ingest(source: &CorpusSource) -> Result<DocumentStream> {
    if source.uri.contains("://") {
        return Err(Error::Unsupported(format!(
            "remote corpus {}; download it and pass a local path",
            source.uri
        )));
    }
    let file = File::open(&source.uri).map_err(|e| Error::path(&source.uri, e))?;
    Ok(DocumentStream {
        reader: Box::new(BufReader::new(file)),
        source: source.clone(),
        line_no: 0,
        stats: IngestStats::default(),
        done: false,
    })
}

/// Which statistics [`analyze`] computes. Token totals are always computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricSet {
    pub tsr: bool,
    pub wordlen: bool,
    pub frequency: bool,
    pub context_fit: bool,
}

impl MetricSet {
    pub const ALL: MetricSet = MetricSet {
        tsr: true,
        wordlen: true,
        frequency: true,
        context_fit: true,
    };

    pub const NONE: MetricSet = MetricSet {
        tsr: false,
        wordlen: false,
        frequency: false,
        context_fit: false,
    };
}

impl Default for MetricSet {
    fn default() -> Self {
        MetricSet::ALL
    }
}

impl FromStr for MetricSet {
    type Err = Error;

    /// Comma-separated list of `tsr`, `wordlen`, `frequency`, `context-fit`, or `all`.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = MetricSet::NONE;
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "all" => set = MetricSet::ALL,
                "tsr" => set.tsr = true,
                "wordlen" => set.wordlen = true,
                "frequency" => set.frequency = true,
                "context-fit" => set.context_fit = true,
                other => {
                    return Err(Error::Config(format!(
                        "unknown metric {other:?} (expected tsr, wordlen, frequency, context-fit)"
                    )))
                }
            }
        }
        if set == MetricSet::NONE {
            return Err(Error::Config("no metrics selected".into()));
        }
        Ok(set)
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub metrics: MetricSet,
    pub unit_mode: UnitMode,
    /// Its `seed` also seeds the example reservoir.
    pub context_fit: ContextFitConfig,
    /// Maximum number of examples kept for context-fit sampling.
    pub context_pool: usize,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub batch_size: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            metrics: MetricSet::ALL,
            unit_mode: UnitMode::WhitespaceWord,
            context_fit: ContextFitConfig::default(),
            context_pool: 10_000,
            threads: None,
            batch_size: 1024,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextFitReport {
    pub context_window: u64,
    pub samples_per_k: usize,
    /// Examples the draws were taken from (a seeded reservoir of the corpus).
    pub pool_size: usize,
    pub greedy: Vec<ContextFitPoint>,
    pub optimal: Vec<ContextFitPoint>,
}

/// Statistics for one language. Word lengths are in Unicode scalar values;
/// token counts are byte-level BPE tokens.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LanguageReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub language_tag: String,
    pub tier: Option<String>,
    pub pattern_hash: String,
    pub seed: u64,
    pub source: String,
    pub source_format: String,
    pub docs_processed: u64,
    pub bytes_processed: u64,
    pub skipped_records: u64,
    pub total_greedy_tokens: u64,
    pub total_optimal_tokens: u64,
    pub micro_tsr: Option<f64>,
    pub macro_tsr: Option<f64>,
    pub nonzero_tsr_percentage: Option<f64>,
    pub wordlen_unit: UnitMode,
    pub wordlen_buckets: Vec<WordLenBucket>,
    pub length_frequency: Vec<LengthFrequency>,
    pub context_fit: Option<ContextFitReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_wall_time_secs: Option<f64>,
}

struct DocResult {
    record: TsrRecord,
    units: Vec<crate::metrics::Unit>,
    word_lengths: Vec<usize>,
}

fn analyze_doc(tok: &Tokenizer, doc: &Document, opts: &AnalysisOptions) -> Result<DocResult> {
    let record = crate::metrics::document_tsr(tok, doc.id, &doc.text)?;
    let units = if opts.metrics.wordlen {
        units(tok, &doc.text, opts.unit_mode)?
    } else {
        Vec::new()
    };
    let word_lengths = if opts.metrics.frequency {
        let text = String::from_utf8_lossy(&doc.text);
        whitespace_words(&text).map(|w| w.chars().count()).collect()
    } else {
        Vec::new()
    };
    Ok(DocResult {
        record,
        units,
        word_lengths,
    })
}

/// Runs both segmenters over `source` and aggregates the selected metrics.
pub fn analyze(
    source: &CorpusSource,
    tok: &Tokenizer,
    opts: &AnalysisOptions,
) -> Result<LanguageReport> {
    let started = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut stream = ingest(source)?;
    let mut totals = TsrAggregate::default();
    let mut wordlen = WordLenAccumulator::default();
    let mut frequency = std::collections::BTreeMap::<usize, u64>::new();
    let mut reservoir: Vec<(u64, u64)> = Vec::new();
    let mut reservoir_rng = ChaCha8Rng::seed_from_u64(opts.context_fit.seed);
    let mut seen = 0u64;

    let batch_size = opts.batch_size.max(1);
    loop {
        let batch = stream
            .by_ref()
            .take(batch_size)
            .collect::<Result<Vec<Document>>>()?;
        if batch.is_empty() {
            break;
        }
        let results: Vec<Result<DocResult>> = pool.install(|| {
            batch
                .par_iter()
                .map(|d| analyze_doc(tok, d, opts))
                .collect()
        });
        for result in results {
            let r = result?;
            totals.add(&r.record);
            for unit in &r.units {
                wordlen.add(unit)?;
            }
            for len in r.word_lengths {
                *frequency.entry(len).or_default() += 1;
            }
            if opts.metrics.context_fit && opts.context_pool > 0 {
                let pair = (r.record.tokens_greedy, r.record.tokens_optimal);
                if reservoir.len() < opts.context_pool {
                    reservoir.push(pair);
                } else {
                    let slot = reservoir_rng.random_range(0..=seen);
                    if (slot as usize) < opts.context_pool {
                        reservoir[slot as usize] = pair;
                    }
                }
            }
            seen += 1;
        }
    }

    if totals.optimal_total > totals.greedy_total {
        return Err(Error::Internal(format!(
            "optimal total {} exceeds greedy total {}",
            totals.optimal_total, totals.greedy_total
        )));
    }

    let context_fit = if opts.metrics.context_fit {
        let greedy: Vec<u64> = reservoir.iter().map(|p| p.0).collect();
        let optimal: Vec<u64> = reservoir.iter().map(|p| p.1).collect();
        Some(ContextFitReport {
            context_window: opts.context_fit.context_window,
            samples_per_k: opts.context_fit.samples_per_k,
            pool_size: reservoir.len(),
            greedy: context_fit_from_counts(&greedy, &opts.context_fit)?,
            optimal: context_fit_from_counts(&optimal, &opts.context_fit)?,
        })
    } else {
        None
    };

    let stats = stream.stats();
    let micro = totals.micro();
    Ok(LanguageReport {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        language_tag: source.language_tag.clone(),
        tier: tok.tier().map(|t| t.label().to_string()),
        pattern_hash: tok.pretokenizer().config().pattern_hash(),
        seed: opts.context_fit.seed,
        source: source.uri.clone(),
        source_format: source.format.name().to_string(),
        docs_processed: totals.docs,
        bytes_processed: stats.bytes,
        skipped_records: stats.warnings,
        total_greedy_tokens: totals.greedy_total,
        total_optimal_tokens: totals.optimal_total,
        micro_tsr: micro.map(|t| t.to_f64()),
        macro_tsr: if opts.metrics.tsr {
            totals.macro_mean()
        } else {
            None
        },
        nonzero_tsr_percentage: if opts.metrics.tsr {
            totals.nonzero_percentage()
        } else {
            None
        },
        wordlen_unit: opts.unit_mode,
        wordlen_buckets: wordlen.buckets(),
        length_frequency: frequency
            .into_iter()
            .map(|(length, frequency)| LengthFrequency { length, frequency })
            .collect(),
        context_fit,
        elapsed_wall_time_secs: Some(started.elapsed().as_secs_f64()),
    })
}

impl LanguageReport {
    /// Checks that `micro_tsr` agrees with the token totals.
    pub fn is_consistent(&self) -> bool {
        if self.total_optimal_tokens > self.total_greedy_tokens {
            return false;
        }
        match (
            self.micro_tsr,
            tsr(self.total_greedy_tokens, self.total_optimal_tokens),
        ) {
            (Some(m), Ok(t)) => m == t.to_f64(),
            (None, Err(_)) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    #[default]
    Csv,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown format {other:?} (expected json or csv)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EmitOptions {
    /// Keep wall-clock timings. Off by default so reports are byte-stable.
    pub include_timing: bool,
}

/// Column order of the summary CSV.
pub const SUMMARY_CSV_HEADER: [&str; 13] = [
    "language_tag",
    "tier",
    "docs_processed",
    "total_greedy_tokens",
    "total_optimal_tokens",
    "micro_tsr",
    "macro_tsr",
    "nonzero_tsr_percentage",
    "pattern_hash",
    "seed",
    "tool_version",
    "schema_version",
    "elapsed_wall_time_secs",
];

#[derive(Serialize)]
struct SummaryRow<'a> {
    language_tag: &'a str,
    tier: Option<&'a str>,
    docs_processed: u64,
    total_greedy_tokens: u64,
    total_optimal_tokens: u64,
    micro_tsr: Option<f64>,
    macro_tsr: Option<f64>,
    nonzero_tsr_percentage: Option<f64>,
    pattern_hash: &'a str,
    seed: u64,
    tool_version: &'a str,
    schema_version: u32,
    elapsed_wall_time_secs: Option<f64>,
}

/// Reports ordered by micro TSR, highest first; undefined TSR sorts last.
fn ranked(reports: &[LanguageReport], opts: EmitOptions) -> Vec<LanguageReport> {
    let mut out: Vec<LanguageReport> = reports
        .iter()
        .cloned()
        .map(|mut r| {
            if !opts.include_timing {
                r.elapsed_wall_time_secs = None;
            }
            r
        })
        .collect();
    out.sort_by(|a, b| {
        let key = |r: &LanguageReport| r.micro_tsr.unwrap_or(f64::NEG_INFINITY);
        key(b)
            .total_cmp(&key(a))
            .then_with(|| a.language_tag.cmp(&b.language_tag))
    });
    out
}

/// Writes the per-language summary: the full reports as a JSON array, or
/// one CSV row per language with [`SUMMARY_CSV_HEADER`] columns.
pub fn emit_report<W: Write>(
    reports: &[LanguageReport],
    format: ReportFormat,
    dest: W,
    opts: EmitOptions,
) -> Result<()> {
    let reports = ranked(reports, opts);
    match format {
        ReportFormat::Json => write_json(&reports, dest),
        ReportFormat::Csv => {
            let rows = reports.iter().map(|r| SummaryRow {
                language_tag: &r.language_tag,
                tier: r.tier.as_deref(),
                docs_processed: r.docs_processed,
                total_greedy_tokens: r.total_greedy_tokens,
                total_optimal_tokens: r.total_optimal_tokens,
                micro_tsr: r.micro_tsr,
                macro_tsr: r.macro_tsr,
                nonzero_tsr_percentage: r.nonzero_tsr_percentage,
                pattern_hash: &r.pattern_hash,
                seed: r.seed,
                tool_version: &r.tool_version,
                schema_version: r.schema_version,
                elapsed_wall_time_secs: r.elapsed_wall_time_secs,
            });
            write_csv(&SUMMARY_CSV_HEADER, rows, dest)
        }
    }
}

#[derive(Serialize)]
struct WordLenRow<'a> {
    language_tag: &'a str,
    unit: UnitMode,
    length: usize,
    mean_tsr: Option<f64>,
    word_count: u64,
}

/// Mean TSR by word length, one row per language and length.
pub fn emit_wordlen_tsr<W: Write>(
    reports: &[LanguageReport],
    format: ReportFormat,
    dest: W,
) -> Result<()> {
    let reports = ranked(reports, EmitOptions::default());
    let rows: Vec<WordLenRow<'_>> = reports
        .iter()
        .flat_map(|r| {
            r.wordlen_buckets.iter().map(|b| WordLenRow {
                language_tag: &r.language_tag,
                unit: r.wordlen_unit,
                length: b.length,
                mean_tsr: b.mean_tsr,
                word_count: b.word_count,
            })
        })
        .collect();
    emit_rows(
        &["language_tag", "unit", "length", "mean_tsr", "word_count"],
        rows,
        format,
        dest,
    )
}

#[derive(Serialize)]
struct FrequencyRow<'a> {
    language_tag: &'a str,
    length: usize,
    frequency: u64,
}

/// Word-length histogram, one row per language and length.
pub fn emit_length_frequency<W: Write>(
    reports: &[LanguageReport],
    format: ReportFormat,
    dest: W,
) -> Result<()> {
    let reports = ranked(reports, EmitOptions::default());
    let rows: Vec<FrequencyRow<'_>> = reports
        .iter()
        .flat_map(|r| {
            r.length_frequency.iter().map(|f| FrequencyRow {
                language_tag: &r.language_tag,
                length: f.length,
                frequency: f.frequency,
            })
        })
        .collect();
    emit_rows(&["language_tag", "length", "frequency"], rows, format, dest)
}

#[derive(Serialize)]
struct ContextFitRow<'a> {
    language_tag: &'a str,
    mode: &'static str,
    k: usize,
    fit_percentage: f64,
    context_window: u64,
}

/// Context-fit curves, one row per language, mode and `k`.
pub fn emit_context_fit<W: Write>(
    reports: &[LanguageReport],
    format: ReportFormat,
    dest: W,
) -> Result<()> {
    let reports = ranked(reports, EmitOptions::default());
    let mut rows = Vec::new();
    for r in &reports {
        let Some(cf) = &r.context_fit else { continue };
        for (mode, points) in [("greedy", &cf.greedy), ("optimal", &cf.optimal)] {
            for p in points {
                rows.push(ContextFitRow {
                    language_tag: &r.language_tag,
                    mode,
                    k: p.k,
                    fit_percentage: p.fit_percentage,
                    context_window: cf.context_window,
                });
            }
        }
    }
    emit_rows(
        &[
            "language_tag",
            "mode",
            "k",
            "fit_percentage",
            "context_window",
        ],
        rows,
        format,
        dest,
    )
}

fn emit_rows<T: Serialize, W: Write>(
    header: &[&str],
    rows: Vec<T>,
    format: ReportFormat,
    dest: W,
) -> Result<()> {
    match format {
        ReportFormat::Json => write_json(&rows, dest),
        ReportFormat::Csv => write_csv(header, rows, dest),
    }
}

fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut dest: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut dest, value).map_err(io::Error::from)?;
    dest.write_all(b"\n")?;
    dest.flush()?;
    Ok(())
}

fn write_csv<T, I, W>(header: &[&str], rows: I, dest: W) -> Result<()>
where
    T: Serialize,
    I: IntoIterator<Item = T>,
    W: Write,
{
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(dest);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Internal(format!("csv: {other:?}")),
    }
}

/// Reads reports written by [`emit_report`] in JSON format.
pub fn read_reports_json<R: Read>(reader: R) -> Result<Vec<LanguageReport>> {
    serde_json::from_reader(reader).map_err(|e| Error::Config(format!("report JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pretokenizer::PretokenizerConfig;
    use crate::vocabulary::Vocabulary;

    fn write_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        path.display().to_string()
    }

    fn docs(source: &CorpusSource) -> Vec<Document> {
        ingest(source).unwrap().collect::<Result<Vec<_>>>().unwrap()
    }

    #[test]
    fn plain_lines_and_limits() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "a.txt", "one\r\ntwo\n\nthree");
        let src = CorpusSource::plain_lines(&path, "xx");
        let got = docs(&src);
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].text, b"one");
        assert_eq!(got[2].id, 3);

        let one = src.clone().with_limits(CorpusLimits {
            max_docs: Some(1),
            max_bytes: None,
        });
        assert_eq!(docs(&one).len(), 1);

        let bytes = src.with_limits(CorpusLimits {
            max_docs: None,
            max_bytes: Some(6),
        });
        assert_eq!(docs(&bytes).len(), 2);
    }

    #[test]
    fn json_lines_skip_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::new();
        for i in 0..10 {
            if i == 4 {
                text.push_str("{\"text\": broken\n");
            } else {
                text.push_str(&format!("{{\"text\": \"doc {i}\", \"id\": {i}}}\n"));
            }
        }
        let path = write_file(&dir, "a.jsonl", &text);
        let src = CorpusSource::plain_lines(&path, "xx").with_format(CorpusFormat::JsonLines {
            text_field: "text".into(),
        });
        let mut stream = ingest(&src).unwrap();
        let got: Vec<_> = stream.by_ref().collect::<Result<Vec<_>>>().unwrap();
        assert_eq!(got.len(), 9);
        assert_eq!(stream.stats().warnings, 1);

        let strict = CorpusSource {
            fail_fast: true,
            ..src
        };
        let err = ingest(&strict)
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap_err();
        assert!(matches!(err, Error::Record { line: 5, .. }), "{err}");
    }

    #[test]
    fn raw_file_is_one_document() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "r.txt", "a\nb\n");
        let src = CorpusSource::plain_lines(&path, "xx").with_format(CorpusFormat::RawFile);
        let got = docs(&src);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].text, b"a\nb\n");
    }

    #[test]
    fn unreadable_and_remote_sources() {
        let src = CorpusSource::plain_lines("/definitely/not/here.txt", "xx");
        let err = ingest(&src).err().unwrap();
        assert!(err.to_string().contains("/definitely/not/here.txt"));
        let remote = CorpusSource::plain_lines("https://example.org/x.txt", "xx");
        assert!(matches!(ingest(&remote), Err(Error::Unsupported(_))));
    }

    fn toy_tokenizer() -> Tokenizer {
        let vocab = Vocabulary::byte_level(&["aa", "aaa"]).unwrap();
        Tokenizer::new(vocab, PretokenizerConfig::new(r" ?\S+|\s+")).unwrap()
    }

    #[test]
    fn single_doc_totals() {
        // "aaaa": greedy merges the left "aa" pair first, giving [aa][aa];
        // "aaaa" is not a token, and 2 is also the minimum ([aaa][a] or [aa][aa]).
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "a.txt", "aaaa\n");
        let report = analyze(
            &CorpusSource::plain_lines(&path, "toy"),
            &toy_tokenizer(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(report.docs_processed, 1);
        assert_eq!(report.total_greedy_tokens, 2);
        assert_eq!(report.total_optimal_tokens, 2);
        assert_eq!(report.micro_tsr, Some(0.0));
        assert!(report.is_consistent());
    }

    #[test]
    fn empty_corpus_has_null_tsr() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "e.txt", "");
        let report = analyze(
            &CorpusSource::plain_lines(&path, "none"),
            &toy_tokenizer(),
            &AnalysisOptions::default(),
        )
        .unwrap();
        assert_eq!(report.docs_processed, 0);
        assert_eq!(report.micro_tsr, None);
        assert_eq!(report.macro_tsr, None);
        assert!(report.is_consistent());
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"micro_tsr\":null"));
    }

    #[test]
    fn metric_set_parsing() {
        assert_eq!("all".parse::<MetricSet>().unwrap(), MetricSet::ALL);
        let only = "tsr".parse::<MetricSet>().unwrap();
        assert!(only.tsr && !only.wordlen && !only.frequency && !only.context_fit);
        assert!("tsr,bogus".parse::<MetricSet>().is_err());
        assert!("".parse::<MetricSet>().is_err());
    }

    #[test]
    fn empty_report_list() {
        let mut csv_out = Vec::new();
        emit_report(&[], ReportFormat::Csv, &mut csv_out, EmitOptions::default()).unwrap();
        assert_eq!(String::from_utf8(csv_out).unwrap().lines().count(), 1);
        let mut json_out = Vec::new();
        emit_report(
            &[],
            ReportFormat::Json,
            &mut json_out,
            EmitOptions::default(),
        )
        .unwrap();
        assert_eq!(String::from_utf8(json_out).unwrap().trim(), "[]");
    }
}
