use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use jargon_cli::{formats, manifest, pipeline, Command, PipelineConfig};

/// Scholarly jargon metrics: type and sense NPMI, word sense induction,
/// dictionary validation and interdisciplinary impact.
///
/// Settings resolve as defaults, then the --config file, then flags
/// (including --set KEY=VALUE, applied last).
#[derive(Debug, Parser)]
#[command(name = "jargon", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// key=value configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override a configuration key; repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Directory artifacts are read from and written to
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for sampling and permutation tests
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores); outputs do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a provenance record of the run to PATH
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    /// Foreground corpus (JSON lines)
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,
    /// Background corpus (JSON lines); counted only in the totals
    #[arg(long, global = true, value_name = "PATH")]
    background: Option<PathBuf>,
    /// Substitutes TSV: doc_id, position, target_lemma, sub1..subN
    #[arg(long, global = true, value_name = "PATH")]
    substitutes: Option<PathBuf>,
    /// word<TAB>lemma table
    #[arg(long, global = true, value_name = "PATH")]
    lemmas: Option<PathBuf>,
    /// One word per line, left out of the vocabulary
    #[arg(long, global = true, value_name = "PATH")]
    stopwords: Option<PathBuf>,
    /// Words the substitute generator cannot score, one per line
    #[arg(long, global = true, value_name = "PATH")]
    excluded_words: Option<PathBuf>,
    /// lemma<TAB>subfield dictionary pairs
    #[arg(long, global = true, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// General-purpose venue names, one per line
    #[arg(long, global = true, value_name = "PATH")]
    general_venues: Option<PathBuf>,
    /// subfield<TAB>field table
    #[arg(long, global = true, value_name = "PATH")]
    hierarchy: Option<PathBuf>,

    /// More log output on stderr (-v info, -vv debug)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Sub {
    /// Count tokens per word, label and venue -> counts.tsv
    Count,
    /// Select the target vocabulary from counts -> vocab.tsv
    Vocab,
    /// Induce senses from substitutes -> sense_models.txt
    WsiInduce,
    /// Assign every substitute record a sense -> assignments.tsv
    WsiAssign,
    /// Type NPMI per label and lemma -> type_scores.tsv
    ScoreTypes,
    /// Sense NPMI and word-level sense scores -> sense_scores.tsv, sense_word_scores.tsv
    ScoreSenses,
    /// Document jargon, venue classes, audience table and prefix-max curve
    Jargon,
    /// Dictionary recall, AUC and paired comparison -> eval.tsv
    Validate,
    /// Citation matrix and DIV -> citation_matrix.tsv, div.tsv
    Impact,
    /// Regression design matrix -> design.tsv
    ExportDesign,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Count => Command::Count,
            Sub::Vocab => Command::Vocab,
            Sub::WsiInduce => Command::WsiInduce,
            Sub::WsiAssign => Command::WsiAssign,
            Sub::ScoreTypes => Command::ScoreTypes,
            Sub::ScoreSenses => Command::ScoreSenses,
            Sub::Jargon => Command::Jargon,
            Sub::Validate => Command::Validate,
            Sub::Impact => Command::Impact,
            Sub::ExportDesign => Command::ExportDesign,
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    let paths = [
        ("out_dir", &cli.out),
        ("corpus", &cli.corpus),
        ("background", &cli.background),
        ("substitutes", &cli.substitutes),
        ("lemmas", &cli.lemmas),
        ("stopwords", &cli.stopwords),
        ("excluded_words", &cli.excluded_words),
        ("lexicon", &cli.lexicon),
        ("general_venues", &cli.general_venues),
        ("hierarchy", &cli.hierarchy),
    ];
    for (key, value) in paths {
        if let Some(p) = value {
            cfg.set(key, &p.display().to_string(), &format!("--{}", key.replace('_', "-")))?;
        }
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    for assignment in &cli.set {
        cfg.apply_assignment(assignment)?;
    }
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<()> {
    let cfg = resolve_config(&cli)?;
    let command = Command::from(cli.command);
    if cli.threads == Some(0) {
        anyhow::bail!("--threads must be at least 1");
    }
    let report = pipeline::run_with_threads(command, &cfg, cli.threads)?;
    if let Some(path) = &cli.manifest {
        let text = manifest::manifest_string(command, &cfg, &report).context("hashing run files")?;
        formats::write_text(path, &text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
