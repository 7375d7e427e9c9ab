use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use morfo::analyzer::Analysis;
use morfo::clitics::{split_clitics, PronounTable};
use morfo::coes::{import_rules, ImportOptions};
use morfo::conll::{
    evaluate_features_parallel, evaluate_lemmas, parse_conll, Corpus, FeatureMapping, FilterTarget,
    MetricsReport,
};
use morfo::defaults::DefaultTable;
use morfo::derivers::{Lemmatizer, NominalFlags, Nominalizer};
use morfo::features::{cell, FeatureSet, Pos};
use morfo::lexicon::Lexicon;
use morfo::resources;
use morfo::ruleset::RuleTable;
use morfo::{Analyzer, Morphology};

#[derive(Parser)]
#[command(name = "morfo", version, about = "Spanish morphological analysis")]
struct Cli {
    /// Dictionary file (`word/FLAGS` lines)
    #[arg(long, global = true, value_name = "PATH")]
    dict: Option<PathBuf>,
    /// Rule table TSV
    #[arg(long, global = true, value_name = "PATH")]
    rules: Option<PathBuf>,
    /// Default-feature table TSV
    #[arg(long, global = true, value_name = "PATH")]
    defaults: Option<PathBuf>,
    /// Enclitic pronoun table TSV
    #[arg(long, global = true, value_name = "PATH")]
    pronouns: Option<PathBuf>,
    /// Nominalization flag manifest (defaults to nominal_flags.txt beside the rules)
    #[arg(long, global = true, value_name = "PATH")]
    nominal_flags: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Label each token (one per line, optionally `token<TAB>pos`) with features
    Analyze {
        /// Input file; standard input when absent
        input: Option<PathBuf>,
    },
    /// Print the lemma of each token
    Lemmatize {
        input: Option<PathBuf>,
        /// POS hint applied to untagged lines
        #[arg(long)]
        pos: Option<String>,
    },
    /// Print the nominal form of each verb, or `-`
    Nominalize { input: Option<PathBuf> },
    /// Split enclitic pronouns off each token
    SplitClitics {
        input: Option<PathBuf>,
        /// Only split tokens tagged as verbs (`token<TAB>pos` lines)
        #[arg(long)]
        only_verbs: bool,
    },
    /// Convert a COES affix file to a rule-table TSV
    ImportCoes {
        #[arg(long, value_name = "PATH")]
        aff: PathBuf,
        /// Label person and number cyclically within mood/tense blocks
        #[arg(long)]
        infer_person: bool,
        /// Flags whose sections are dropped (e.g. enclitic sections)
        #[arg(long, value_delimiter = ',', value_name = "FLAGS")]
        skip_flags: Vec<char>,
        /// Output file; standard output when absent
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Score features and lemmas against CoNLL-2009 files
    Evaluate {
        #[arg(long, required = true, value_name = "PATH")]
        conll: Vec<PathBuf>,
        #[arg(long, value_name = "PATH")]
        mapping: Option<PathBuf>,
        /// Apply the participle filter to the gold lemma instead of the surface form
        #[arg(long)]
        filter_lemma: bool,
        /// Worker threads for feature scoring
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot load {path}: {message}")]
    Load { path: String, message: String },
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Load { .. } => 2,
            CliError::Io(_) => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Where a resource is read from.
enum Source {
    File(PathBuf),
    Bundled(&'static str, &'static str),
}

impl Source {
    fn name(&self) -> String {
        match self {
            Source::File(p) => p.display().to_string(),
            Source::Bundled(file, _) => format!("<bundled {file}>"),
        }
    }

    fn load<T>(&self, parse: impl FnOnce(&str) -> morfo::Result<T>) -> CliResult<T> {
        let fail = |message: String| CliError::Load {
            path: self.name(),
            message,
        };
        let text = match self {
            Source::File(p) => fs::read_to_string(p).map_err(|e| fail(e.to_string()))?,
            Source::Bundled(_, text) => text.to_string(),
        };
        parse(&text).map_err(|e| fail(e.to_string()))
    }
}

/// Explicit flag, then `$MORFO_DATA/<file>`, then `data/<file>` beside the
/// executable, then the bundled copy.
fn resolve(explicit: Option<&Path>, file: &'static str, bundled: &'static str) -> Source {
    if let Some(p) = explicit {
        return Source::File(p.to_path_buf());
    }
    let mut dirs = Vec::new();
    if let Some(dir) = std::env::var_os("MORFO_DATA") {
        dirs.push(PathBuf::from(dir));
    }
    if let Some(dir) = std::env::current_exe()
        .ok()
        .and_then(|e| e.parent().map(|d| d.join("data")))
    {
        dirs.push(dir);
    }
    for dir in dirs {
        let candidate = dir.join(file);
        if candidate.is_file() {
            return Source::File(candidate);
        }
    }
    Source::Bundled(file, bundled)
}

impl Cli {
    fn morphology(&self) -> CliResult<Arc<Morphology>> {
        let lexicon = resolve(
            self.dict.as_deref(),
            resources::LEXICON_FILE,
            resources::LEXICON,
        )
        .load(Lexicon::from_text)?;
        let rules = resolve(
            self.rules.as_deref(),
            resources::RULES_FILE,
            resources::RULES,
        )
        .load(RuleTable::from_text)?;
        let defaults = resolve(
            self.defaults.as_deref(),
            resources::DEFAULTS_FILE,
            resources::DEFAULTS,
        )
        .load(DefaultTable::from_text)?;
        Ok(Arc::new(Morphology::new(lexicon, rules, defaults)))
    }

    fn pronouns(&self) -> CliResult<PronounTable> {
        resolve(
            self.pronouns.as_deref(),
            resources::PRONOUNS_FILE,
            resources::PRONOUNS,
        )
        .load(PronounTable::from_text)
    }

    fn nominal_flags(&self) -> CliResult<NominalFlags> {
        let beside_rules = self
            .rules
            .as_deref()
            .and_then(Path::parent)
            .map(|d| d.join(resources::NOMINAL_FLAGS_FILE))
            .filter(|p| p.is_file());
        let explicit = self.nominal_flags.clone().or(beside_rules);
        resolve(
            explicit.as_deref(),
            resources::NOMINAL_FLAGS_FILE,
            resources::NOMINAL_FLAGS,
        )
        .load(NominalFlags::from_text)
    }
}

fn open_input(path: Option<&Path>) -> CliResult<Box<dyn BufRead>> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(fs::File::open(p).map_err(|e| {
            CliError::Load {
                path: p.display().to_string(),
                message: e.to_string(),
            }
        })?)),
        None => Box::new(BufReader::new(io::stdin())),
    })
}

/// A `token` or `token<TAB>pos` input line.
struct Line<'a> {
    token: &'a str,
    tag: Option<&'a str>,
}

fn split_line(line: &str) -> Line<'_> {
    let line = line.trim_end_matches('\r');
    match line.split_once('\t') {
        Some((token, tag)) => Line {
            token: token.trim(),
            tag: Some(tag.trim()).filter(|t| !t.is_empty()),
        },
        None => Line {
            token: line.trim(),
            tag: None,
        },
    }
}

fn parse_pos(tag: Option<&str>, line_no: usize) -> Option<Pos> {
    let tag = tag?;
    let pos = Pos::parse_loose(tag);
    if pos.is_none() {
        log::warn!("line {line_no}: unknown POS tag {tag:?} ignored");
    }
    pos
}

/// Apply `f` to every input line, writing one output line each. Blank input
/// lines stay blank.
fn each_line(
    input: Option<&Path>,
    mut f: impl FnMut(Line<'_>, usize, &mut dyn Write) -> CliResult<()>,
) -> CliResult<()> {
    let reader = open_input(input)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let parsed = split_line(&line);
        if parsed.token.is_empty() {
            writeln!(out)?;
            continue;
        }
        f(parsed, i + 1, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn feature_json(f: &FeatureSet) -> Value {
    let s = |v: Option<&'static str>| v.map_or(Value::Null, |x| Value::String(x.into()));
    json!({
        "pos": s(f.pos.map(|p| p.as_str())),
        "gender": s(f.gender.map(|p| p.as_str())),
        "number": s(f.number.map(|p| p.as_str())),
        "person": s(f.person.map(|p| p.as_str())),
        "mood": s(f.mood.map(|p| p.as_str())),
        "tense": s(f.tense.map(|p| p.as_str())),
    })
}

fn write_analysis(
    out: &mut dyn Write,
    format: Format,
    surface: &str,
    a: &Analysis,
) -> io::Result<()> {
    let f = &a.features;
    match format {
        Format::Tsv => writeln!(
            out,
            "{surface}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            a.lemma,
            cell(f.pos),
            cell(f.gender),
            cell(f.number),
            cell(f.person),
            cell(f.mood),
            cell(f.tense),
            a.provenance
        ),
        Format::Jsonl => {
            let mut v = feature_json(f);
            v["surface"] = surface.into();
            v["lemma"] = a.lemma.clone().into();
            v["provenance"] = a.provenance.as_str().into();
            writeln!(out, "{v}")
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let format = cli.format;
    match &cli.command {
        Command::Analyze { input } => {
            let mut analyzer = Analyzer::new(cli.morphology()?);
            each_line(input.as_deref(), |line, n, out| {
                let pos = parse_pos(line.tag, n);
                let a = analyzer.preferred_analysis(line.token, pos);
                Ok(write_analysis(out, format, line.token, &a)?)
            })
        }
        Command::Lemmatize { input, pos } => {
            let default_pos = match pos {
                Some(p) => Some(
                    Pos::parse_loose(p)
                        .ok_or_else(|| CliError::Usage(format!("unknown POS {p:?}")))?,
                ),
                None => None,
            };
            let mut lemmatizer = Lemmatizer::new(Analyzer::new(cli.morphology()?));
            each_line(input.as_deref(), |line, n, out| {
                let pos = parse_pos(line.tag, n).or(default_pos);
                let lemma = lemmatizer.lemmatize(line.token, pos);
                match format {
                    Format::Tsv => writeln!(out, "{lemma}")?,
                    Format::Jsonl => {
                        writeln!(out, "{}", json!({"surface": line.token, "lemma": lemma}))?
                    }
                }
                Ok(())
            })
        }
        Command::Nominalize { input } => {
            let lemmatizer = Lemmatizer::new(Analyzer::new(cli.morphology()?));
            let mut nominalizer = Nominalizer::new(lemmatizer, cli.nominal_flags()?);
            each_line(input.as_deref(), |line, _, out| {
                let nominal = nominalizer.nominalize(line.token);
                match format {
                    Format::Tsv => writeln!(out, "{}", nominal.as_deref().unwrap_or("-"))?,
                    Format::Jsonl => {
                        writeln!(out, "{}", json!({"verb": line.token, "nominal": nominal}))?
                    }
                }
                Ok(())
            })
        }
        Command::SplitClitics { input, only_verbs } => {
            let mut analyzer = Analyzer::new(cli.morphology()?);
            let pronouns = cli.pronouns()?;
            each_line(input.as_deref(), |line, n, out| {
                let eligible = !only_verbs || parse_pos(line.tag, n) == Some(Pos::Verb);
                let split = eligible
                    .then(|| split_clitics(line.token, &mut analyzer, &pronouns))
                    .filter(|s| s.is_split());
                let (verb_part, clitics, features) = match split {
                    Some(s) => (s.verb_part, s.clitics, s.pronoun_features),
                    None => (line.token.to_string(), Vec::new(), Vec::new()),
                };
                match format {
                    Format::Tsv => {
                        let mut fields = vec![verb_part];
                        fields.extend(clitics);
                        writeln!(out, "{}", fields.join("\t"))?
                    }
                    Format::Jsonl => {
                        let features: Vec<Value> = features.iter().map(feature_json).collect();
                        let v = json!({
                            "token": line.token,
                            "verb_part": verb_part,
                            "clitics": clitics,
                            "pronoun_features": features,
                        });
                        writeln!(out, "{v}")?
                    }
                }
                Ok(())
            })
        }
        Command::ImportCoes {
            aff,
            infer_person,
            skip_flags,
            output,
        } => {
            let text = fs::read(aff).map_err(|e| CliError::Load {
                path: aff.display().to_string(),
                message: e.to_string(),
            })?;
            // COES files predate UTF-8; accept Latin-1 bytes as well
            let text = match String::from_utf8(text) {
                Ok(s) => s,
                Err(e) => e.into_bytes().iter().map(|&b| b as char).collect(),
            };
            let options = ImportOptions {
                infer_person: *infer_person,
                skip_flags: skip_flags.iter().copied().collect(),
            };
            let report = import_rules(text.as_bytes(), &options).map_err(|e| CliError::Load {
                path: aff.display().to_string(),
                message: e.to_string(),
            })?;
            let tsv = report.to_tsv();
            match output {
                Some(p) => fs::write(p, tsv)?,
                None => io::stdout().lock().write_all(tsv.as_bytes())?,
            }
            eprintln!(
                "imported {} rule(s), skipped {}, {} warning(s), {}/{} example(s) reproduced",
                report.rules.len(),
                report.skipped_rules,
                report.warnings.len(),
                report.checked_examples() - report.failed_examples().len(),
                report.checked_examples()
            );
            Ok(())
        }
        Command::Evaluate {
            conll,
            mapping,
            filter_lemma,
            threads,
        } => {
            let mapping = resolve(
                mapping.as_deref(),
                resources::MAPPING_FILE,
                resources::ANCORA_MAPPING,
            )
            .load(FeatureMapping::from_text)?;
            let mut corpus = Corpus::default();
            for path in conll {
                let fail = |message: String| CliError::Load {
                    path: path.display().to_string(),
                    message,
                };
                let file = fs::File::open(path).map_err(|e| fail(e.to_string()))?;
                let part =
                    parse_conll(BufReader::new(file), &mapping).map_err(|e| fail(e.to_string()))?;
                corpus.extend(part);
            }
            let analyzer = Analyzer::new(cli.morphology()?);
            let features = evaluate_features_parallel(&corpus.records, &analyzer, *threads);
            let mut lemmatizer = Lemmatizer::new(analyzer.fork());
            let target = if *filter_lemma {
                FilterTarget::GoldLemma
            } else {
                FilterTarget::Surface
            };
            let lemmas = evaluate_lemmas(&corpus.records, &mut lemmatizer, target);
            let report = MetricsReport {
                features,
                lemmas: Some(lemmas),
                tokens: corpus.records.len(),
                unmapped_values: corpus.unmapped_values.values().sum(),
            };
            let mut out = io::stdout().lock();
            match format {
                Format::Tsv => write!(out, "{}\n{}", report.render_table(), report.render_kv())?,
                Format::Jsonl => {
                    let mut map = serde_json::Map::new();
                    for line in report.render_kv().lines() {
                        let (k, v) = line.split_once('=').expect("key=value line");
                        let value = v
                            .parse::<f64>()
                            .map_or(Value::String(v.into()), |x| json!(x));
                        map.insert(k.to_string(), value);
                    }
                    writeln!(out, "{}", Value::Object(map))?
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morfo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
