mod import;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semrel::pathfinder::IcTable;
use semrel::store::{verify_cache, Seeds};
use semrel::tasks::{self, datasets, EvalReport, Objective, SatMode, TextScorer};
use semrel::termrel::same_pos_options;
use semrel::textrel::{self, default_stopwords, load_stopwords, CorpusStats, Memoized};
use semrel::{
    Measure, PairCache, PairCacheFile, PairLookup, PathFinder, SearchOptions, TermOptions, TermRelatedness,
    ThesaurusGraph, WeightConfig,
};

#[derive(Parser)]
#[command(name = "semrel", version, about = "Semantic relatedness over a weighted thesaurus graph")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Lexicon TSV (lemma, pos, sense key). Defaults to $SEMREL_DATA/lexicon.tsv.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// Edge TSV (source, relation, target). Defaults to $SEMREL_DATA/edges.tsv.
    #[arg(long, global = true)]
    edges: Option<PathBuf>,
    /// Default data directory.
    #[arg(long, global = true, env = "SEMREL_DATA", hide_env_values = true)]
    data_dir: Option<PathBuf>,
    /// Relation weight overrides (relation, weight).
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Depth overrides (sense key, depth).
    #[arg(long, global = true)]
    depths: Option<PathBuf>,
    /// Stopword list, one word per line.
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,
    /// Document frequency table with a `#N<TAB>count` header.
    #[arg(long, global = true)]
    df_table: Option<PathBuf>,
    /// Precomputed pair cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Sense probability table for the information-content measures.
    #[arg(long, global = true)]
    ic: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Sr)]
    mode: Mode,
    /// Ignore relations that connect different parts of speech.
    #[arg(long, global = true)]
    simple: bool,
    /// Score identical in-vocabulary terms as 1.
    #[arg(long, global = true)]
    identical_term_unity: bool,
    /// Longest path considered, in edges.
    #[arg(long, global = true)]
    max_hops: Option<usize>,
    /// Paraphrase decision threshold.
    #[arg(long, global = true, default_value_t = tasks::DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sr,
    Pr,
    Nwpl,
    Leacock,
    Resnik,
    Jc,
    Lin,
}

impl From<Mode> for Measure {
    fn from(m: Mode) -> Measure {
        match m {
            Mode::Sr => Measure::Sr,
            Mode::Pr => Measure::Pr,
            Mode::Nwpl => Measure::Nwpl,
            Mode::Leacock => Measure::Leacock,
            Mode::Resnik => Measure::Resnik,
            Mode::Jc => Measure::JiangConrath,
            Mode::Lin => Measure::Lin,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a WordNet dict directory into lexicon.tsv and edges.tsv.
    Import { wordnet_dir: PathBuf, out_dir: PathBuf },
    /// Relatedness of two words.
    Sr { word1: String, word2: String },
    /// Relatedness of two senses, by key.
    SrSense { key1: String, key2: String },
    /// Relatedness of two texts, given as files or with --text.
    Relate {
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "files")]
        text: Option<Vec<String>>,
        files: Vec<PathBuf>,
    },
    /// Precompute pair values into a cache file.
    Precompute {
        #[arg(long)]
        out: PathBuf,
        /// File of sense keys, one per line; all senses when omitted.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Maximum number of pairs stored.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Recompute a sample of cached pairs and compare.
    VerifyCache {
        #[arg(long, default_value_t = 10_000)]
        sample: usize,
    },
    /// Run an evaluation protocol over a dataset.
    Eval {
        #[command(subcommand)]
        task: EvalTask,
    },
    /// Print the active relation weights.
    Weights,
}

#[derive(Subcommand)]
enum EvalTask {
    Wordsim {
        dataset: PathBuf,
    },
    Synonym {
        dataset: PathBuf,
    },
    Sat {
        dataset: PathBuf,
        #[arg(long, value_enum, default_value_t = SatArg::S)]
        score: SatArg,
    },
    Sentence {
        dataset: PathBuf,
    },
    Paraphrase {
        dataset: PathBuf,
        /// Tune the threshold on this labeled set instead of using --threshold.
        #[arg(long)]
        train: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Accuracy)]
        objective: ObjectiveArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SatArg {
    S,
    S1,
    S2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Accuracy,
    F1,
}

/// Bad invocation detected after argument parsing.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = &cli.config;
    if !(0.0..=1.0).contains(&cfg.threshold) {
        return Err(usage(format!("--threshold must lie in [0,1], got {}", cfg.threshold)));
    }
    match &cli.command {
        Command::Import { wordnet_dir, out_dir } => {
            let s = import::import(wordnet_dir, out_dir)?;
            eprintln!(
                "imported {} senses, {} lemmas, {} edges ({} pointers skipped)",
                s.senses, s.lemmas, s.edges, s.skipped_pointers
            );
            Ok(())
        }
        Command::Weights => {
            let weights = match &cfg.weights {
                Some(p) => WeightConfig::from_overrides(p)?,
                None => WeightConfig::default(),
            };
            print!("{}", weights.dump());
            Ok(())
        }
        Command::Sr { word1, word2 } => {
            let graph = load_graph(cfg)?;
            let ctx = Session::new(cfg, &graph)?;
            let terms = ctx.terms()?;
            let score = terms.score(word1, word2)?;
            let keys = score
                .best_pair
                .map(|(a, b)| (graph.sense(a).key.clone(), graph.sense(b).key.clone()));
            match cfg.format {
                Format::Tsv => match &keys {
                    Some((a, b)) => println!("{:.6}\t{a}\t{b}", score.value),
                    None => println!("{:.6}", score.value),
                },
                Format::Structured => println!(
                    "{{\"word1\":{},\"word2\":{},\"value\":{:.6},\"best_pair\":{},\"in_vocab\":[{},{}]}}",
                    json(word1),
                    json(word2),
                    score.value,
                    keys.map(|(a, b)| format!("[{},{}]", json(&a), json(&b)))
                        .unwrap_or_else(|| "null".into()),
                    score.in_vocab.0,
                    score.in_vocab.1
                ),
            }
            Ok(())
        }
        Command::SrSense { key1, key2 } => {
            let graph = load_graph(cfg)?;
            let ctx = Session::new(cfg, &graph)?;
            let (s1, s2) = (graph.require(key1)?, graph.require(key2)?);
            let measure = Measure::from(cfg.mode);
            let (value, path) = if measure.is_path_measure() {
                let rel = PathFinder::with_options(&graph, ctx.search).max_relatedness(s1, s2, measure)?;
                (rel.value, rel.witness.map(|w| w.render(&graph)))
            } else {
                (ctx.terms()?.sense_value(s1, s2)?, None)
            };
            match cfg.format {
                Format::Tsv => match &path {
                    Some(p) => println!("{value:.6}\t{p}"),
                    None => println!("{value:.6}"),
                },
                Format::Structured => println!(
                    "{{\"sense1\":{},\"sense2\":{},\"measure\":{},\"value\":{value:.6},\"path\":{}}}",
                    json(key1),
                    json(key2),
                    json(measure.name()),
                    path.as_deref().map(json).unwrap_or_else(|| "null".into())
                ),
            }
            Ok(())
        }
        Command::Relate { text, files } => {
            let (a, b) = match (text, files.as_slice()) {
                (Some(t), _) => (t[0].clone(), t[1].clone()),
                (None, [fa, fb]) => (read(fa)?, read(fb)?),
                _ => return Err(usage("relate needs two files or --text A B")),
            };
            let graph = load_graph(cfg)?;
            let ctx = Session::new(cfg, &graph)?;
            let terms = ctx.terms()?;
            let stopwords = ctx.stopwords()?;
            for (name, raw) in [("A", &a), ("B", &b)] {
                if textrel::preprocess(raw, &stopwords, name).is_empty() {
                    eprintln!("warning: text {name} is empty after preprocessing");
                }
            }
            let corpus = ctx.corpus()?;
            let score = textrel::omiotis(&a, &b, &terms, &stopwords, corpus.as_ref())?;
            match cfg.format {
                Format::Tsv => println!("{:.6}", score.omiotis),
                Format::Structured => {
                    let matches = |ms: &[textrel::BestMatch]| {
                        ms.iter()
                            .map(|m| {
                                format!(
                                    "{{\"term\":{},\"partner\":{},\"lambda\":{:.6},\"sr\":{:.6},\"product\":{:.6}}}",
                                    json(&m.term),
                                    json(&m.partner),
                                    m.lambda,
                                    m.sr,
                                    m.product
                                )
                            })
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    println!(
                        "{{\"omiotis\":{:.6},\"zeta_ab\":{:.6},\"zeta_ba\":{:.6},\"matches_ab\":[{}],\"matches_ba\":[{}]}}",
                        score.omiotis,
                        score.zeta_ab,
                        score.zeta_ba,
                        matches(&score.matches_ab),
                        matches(&score.matches_ba)
                    );
                }
            }
            Ok(())
        }
        Command::Precompute { out, seeds, budget } => {
            if *budget == 0 {
                return Err(usage("--budget must be at least 1"));
            }
            let graph = load_graph(cfg)?;
            let seeds = match seeds {
                None => Seeds::All,
                Some(p) => Seeds::Subset(
                    read(p)?
                        .lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty() && !l.starts_with('#'))
                        .map(|k| graph.require(k))
                        .collect::<semrel::Result<Vec<_>>>()?,
                ),
            };
            let cache = PairCache::precompute(&graph, &seeds, *budget)?;
            cache.write(out)?;
            let h = cache.header();
            println!("records\t{}", h.record_count);
            println!("seeds\t{}", h.seed_count);
            println!("complete\t{}", h.complete as u8);
            Ok(())
        }
        Command::VerifyCache { sample } => {
            let path = cfg.cache.as_ref().ok_or_else(|| usage("verify-cache needs --cache"))?;
            let graph = load_graph(cfg)?;
            let cache = PairCacheFile::open(path)?;
            let report = verify_cache(&cache, &graph, *sample)?;
            println!("sampled\t{}", report.sampled);
            println!("mismatches\t{}", report.mismatches);
            println!("max_abs_deviation\t{:.6}", report.max_abs_deviation);
            if report.mismatches > 0 {
                anyhow::bail!("{} cached values differ from live computation", report.mismatches);
            }
            Ok(())
        }
        Command::Eval { task } => {
            let graph = load_graph(cfg)?;
            let ctx = Session::new(cfg, &graph)?;
            let sim = Memoized::new(ctx.terms()?);
            let report = eval(&ctx, task, &sim)?;
            match cfg.format {
                Format::Tsv => print!("{}", report.to_tsv()),
                Format::Structured => print!("{}", report.to_json_lines()),
            }
            Ok(())
        }
    }
}

fn eval(ctx: &Session<'_>, task: &EvalTask, sim: &Memoized<TermRelatedness<'_>>) -> Result<EvalReport> {
    Ok(match task {
        EvalTask::Wordsim { dataset } => tasks::evaluate_wordsim(&datasets::load_word_pairs(dataset)?, sim)?,
        EvalTask::Synonym { dataset } => tasks::evaluate_synonym(&datasets::load_synonym_questions(dataset)?, sim)?,
        EvalTask::Sat { dataset, score } => {
            let mode = match score {
                SatArg::S => SatMode::S,
                SatArg::S1 => SatMode::S1,
                SatArg::S2 => SatMode::S2,
            };
            tasks::evaluate_sat(&datasets::load_sat_questions(dataset)?, sim, mode)?
        }
        EvalTask::Sentence { dataset } => {
            let stopwords = ctx.stopwords()?;
            let corpus = ctx.corpus()?;
            let scorer = TextScorer {
                sim,
                stopwords: &stopwords,
                corpus: corpus.as_ref(),
            };
            tasks::evaluate_sentence(&datasets::load_text_pairs(dataset)?, &scorer)?
        }
        EvalTask::Paraphrase {
            dataset,
            train,
            objective,
        } => {
            let stopwords = ctx.stopwords()?;
            let corpus = ctx.corpus()?;
            let scorer = TextScorer {
                sim,
                stopwords: &stopwords,
                corpus: corpus.as_ref(),
            };
            let threshold = match train {
                None => ctx.cfg.threshold,
                Some(path) => {
                    let objective = match objective {
                        ObjectiveArg::Accuracy => Objective::Accuracy,
                        ObjectiveArg::F1 => Objective::F1,
                    };
                    tasks::tune_on(&datasets::load_text_pairs(path)?, &scorer, objective)?.0
                }
            };
            tasks::evaluate_paraphrase(&datasets::load_text_pairs(dataset)?, &scorer, threshold)?
        }
    })
}

/// Resources derived from the run configuration for one loaded graph.
struct Session<'g> {
    cfg: &'g RunConfig,
    graph: &'g ThesaurusGraph,
    search: SearchOptions,
    cache: Option<PairCacheFile>,
    ic: Option<IcTable>,
}

impl<'g> Session<'g> {
    fn new(cfg: &'g RunConfig, graph: &'g ThesaurusGraph) -> Result<Self> {
        let mut search = if cfg.simple {
            same_pos_options(graph)
        } else {
            SearchOptions::default()
        };
        search.max_hops = cfg.max_hops;
        let cache = match &cfg.cache {
            Some(p) => {
                let c = PairCacheFile::open(p)?;
                c.check(graph).with_context(|| p.display().to_string())?;
                Some(c)
            }
            None => None,
        };
        let ic = match &cfg.ic {
            Some(p) => Some(IcTable::load(p, graph)?),
            None => None,
        };
        Ok(Session {
            cfg,
            graph,
            search,
            cache,
            ic,
        })
    }

    fn terms(&self) -> Result<TermRelatedness<'_>> {
        let mut terms = TermRelatedness::new(self.graph)
            .with_search_options(self.search)
            .with_measure(self.cfg.mode.into())
            .with_options(TermOptions {
                identical_term_unity: self.cfg.identical_term_unity,
                pos_filter: None,
            });
        if let Some(ic) = &self.ic {
            terms = terms.with_ic(ic);
        }
        if let Some(cache) = &self.cache {
            terms = terms.with_cache(cache)?;
        }
        Ok(terms)
    }

    fn stopwords(&self) -> Result<HashSet<String>> {
        Ok(match &self.cfg.stopwords {
            Some(p) => load_stopwords(p)?,
            None => default_stopwords(),
        })
    }

    fn corpus(&self) -> Result<Option<CorpusStats>> {
        Ok(match &self.cfg.df_table {
            Some(p) => Some(CorpusStats::load(p)?),
            None => None,
        })
    }
}

fn load_graph(cfg: &RunConfig) -> Result<ThesaurusGraph> {
    let resolve = |explicit: &Option<PathBuf>, name: &str| -> Result<PathBuf> {
        match (explicit, &cfg.data_dir) {
            (Some(p), _) => Ok(p.clone()),
            (None, Some(dir)) => Ok(dir.join(name)),
            (None, None) => Err(usage(format!(
                "no thesaurus: pass --lexicon and --edges or set SEMREL_DATA (missing {name})"
            ))),
        }
    };
    let lexicon = resolve(&cfg.lexicon, "lexicon.tsv")?;
    let edges = resolve(&cfg.edges, "edges.tsv")?;
    Ok(ThesaurusGraph::load(
        &lexicon,
        &edges,
        cfg.weights.as_deref(),
        cfg.depths.as_deref(),
    )?)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn json(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}
