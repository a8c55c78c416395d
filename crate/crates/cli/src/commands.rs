use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cognate_core::pipeline::{
    cluster_meaning, evaluate_wordlist, meaning_matrix, partitions_for_wordlist, read_partitions,
    write_partitions, ClusterSettings, MeaningClusters, Method,
};
use cognate_core::{
    estimate_pmi, load_pmi, parse_aligned_pairs, parse_wordlist, save_pmi, Alphabet, CrpConfig,
    GapParams, IndexMap, Linkage, ModifierPolicy, NumberStyle, ParseConfig, Partition, ScanOrder,
    Scorer, SimilarityMatrix, WordList,
};
use rayon::prelude::*;

use crate::error::{CliError, WithPath};
use crate::{
    AlignArgs, ClusterArgs, ClusteringArgs, EvaluateArgs, InputArgs, LinkageArg, PmiEstimateArgs,
    ReportFormat, ScorerKind, ScoringArgs,
};

fn read_wordlist(path: &Path, args: &InputArgs) -> Result<WordList, CliError> {
    let config = ParseConfig {
        modifiers: if args.strict_modifiers {
            ModifierPolicy::Strict
        } else {
            ModifierPolicy::Strip
        },
        ..Default::default()
    };
    let file = File::open(path).in_file(path)?;
    let wl = parse_wordlist(file, &config).in_file(path)?;
    if wl.duplicates_collapsed() > 0 {
        eprintln!(
            "warning: {}: collapsed {} duplicate rows",
            path.display(),
            wl.duplicates_collapsed()
        );
    }
    Ok(wl)
}

fn scorer(args: &ScoringArgs, alphabet: &Alphabet) -> Result<Scorer, CliError> {
    let gaps = GapParams::new(args.gap_open, args.gap_extend)?;
    match (args.scorer, &args.pmi_matrix) {
        (ScorerKind::Vanilla, None) => Ok(Scorer::vanilla(1.0, -1.0, gaps)?),
        (ScorerKind::Vanilla, Some(_)) => Err(CliError::Config(
            "--pmi-matrix is only valid with --scorer pmi".into(),
        )),
        (ScorerKind::Pmi, None) => Err(CliError::Config(
            "--scorer pmi requires --pmi-matrix".into(),
        )),
        (ScorerKind::Pmi, Some(path)) => {
            let file = File::open(path).in_file(path)?;
            let matrix = load_pmi(file).in_file(path)?;
            let scorer = Scorer::pmi(matrix, gaps);
            scorer.check_covers(alphabet).in_file(path)?;
            Ok(scorer)
        }
    }
}

fn method(args: &ClusteringArgs) -> Result<Method, CliError> {
    if let Some(t) = args.threshold {
        return Ok(Method::Threshold(t));
    }
    let linkage = match args.linkage {
        LinkageArg::Average => Linkage::Average,
        LinkageArg::Single => Linkage::Single,
    };
    let mut cfg = CrpConfig::new(args.alpha, args.max_scans, linkage)?;
    if let Some(seed) = args.shuffle_seed {
        cfg = cfg.with_order(ScanOrder::Shuffled(seed));
    }
    Ok(Method::Crp(cfg))
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).in_file(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_with<F>(path: Option<&Path>, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let mut sink = output(path)?;
    let res = f(&mut sink).and_then(|_| sink.flush());
    match path {
        Some(p) => res.in_file(p),
        None => res.map_err(CliError::from),
    }
}

/// Clusters every meaning on the pool; results keep word-list order.
fn cluster_all(
    wl: &WordList,
    settings: &ClusterSettings,
    jobs: Option<usize>,
) -> Result<Vec<MeaningClusters>, CliError> {
    let meanings: Vec<&str> = wl.meanings().collect();
    let clusters = pool(jobs)?.install(|| {
        meanings
            .par_iter()
            .map(|m| cluster_meaning(wl, m, settings))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(clusters)
}

fn settings(args: &ClusterArgs) -> Result<ClusterSettings, CliError> {
    Ok(ClusterSettings {
        scorer: scorer(&args.scoring, &Alphabet::asjp())?,
        normalize: args.scoring.normalize,
        method: method(&args.clustering)?,
    })
}

fn file_stem(meaning: &str) -> String {
    let s: String = meaning
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

pub fn align(args: AlignArgs) -> Result<(), CliError> {
    let wl = read_wordlist(&args.input.input, &args.input)?;
    let settings = ClusterSettings {
        scorer: scorer(&args.scoring, &Alphabet::asjp())?,
        normalize: args.scoring.normalize,
        method: Method::default(),
    };
    let meanings: Vec<&str> = wl.meanings().collect();
    let matrices: Vec<SimilarityMatrix> = pool(args.input.jobs)?.install(|| {
        meanings
            .par_iter()
            .map(|m| meaning_matrix(&wl, m, &settings))
            .collect::<Result<Vec<_>, _>>()
    })?;

    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).in_file(dir)?;
            let mut used = HashSet::new();
            for (m, sm) in meanings.iter().zip(&matrices) {
                let stem = file_stem(m);
                let mut name = format!("{stem}.tsv");
                let mut n = 1;
                while !used.insert(name.clone()) {
                    name = format!("{stem}_{n}.tsv");
                    n += 1;
                }
                let path = dir.join(name);
                write_with(Some(&path), |w| sm.write_tsv(w))?;
            }
            Ok(())
        }
        None => write_with(None, |w| {
            for (m, sm) in meanings.iter().zip(&matrices) {
                writeln!(w, "# {m}")?;
                sm.write_tsv(&mut *w)?;
                writeln!(w)?;
            }
            Ok(())
        }),
    }
}

pub fn cluster(args: ClusterArgs) -> Result<(), CliError> {
    let wl = read_wordlist(&args.input.input, &args.input)?;
    let clusters = cluster_all(&wl, &settings(&args)?, args.input.jobs)?;
    write_with(args.out.as_deref(), |w| write_partitions(&clusters, w))
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let c = &args.cluster;
    let mut wl = read_wordlist(&c.input.input, &c.input)?;
    if let Some(gold_path) = &args.gold {
        let gold = read_wordlist(gold_path, &c.input)?;
        wl = wl.with_gold(&gold).in_file(gold_path)?;
    }

    let predictions: IndexMap<String, Partition> = match &args.predictions {
        Some(path) => {
            let file = File::open(path).in_file(path)?;
            let rows = read_partitions(file).in_file(path)?;
            partitions_for_wordlist(&wl, &rows).in_file(path)?
        }
        None => {
            let clusters = cluster_all(&wl, &settings(c)?, c.input.jobs)?;
            if let Some(out) = &c.out {
                write_with(Some(out), |w| write_partitions(&clusters, w))?;
            }
            clusters
                .into_iter()
                .map(|mc| (mc.meaning, mc.partition))
                .collect()
        }
    };

    let report = evaluate_wordlist(&wl, &predictions)?;
    if !report.excluded_meanings.is_empty() {
        eprintln!(
            "note: {} meanings without gold classes were not evaluated",
            report.excluded_meanings.len()
        );
    }
    let style = if args.percent {
        NumberStyle::Percent
    } else {
        NumberStyle::Fraction
    };
    write_with(args.report.as_deref(), |w| match args.format {
        ReportFormat::Text => report.write_text(w, style),
        ReportFormat::Kv => report.write_kv(w, style),
    })
}

pub fn pmi_estimate(args: PmiEstimateArgs) -> Result<(), CliError> {
    let alphabet = Alphabet::asjp();
    let file = File::open(&args.input).in_file(&args.input)?;
    let pairs = parse_aligned_pairs(file, &alphabet).in_file(&args.input)?;
    let estimate = estimate_pmi(&pairs, args.smoothing, &alphabet).in_file(&args.input)?;
    if !estimate.unobserved.is_empty() {
        eprintln!(
            "warning: {} segment pairs were never observed and score -inf",
            estimate.unobserved.len()
        );
    }
    write_with(args.out.as_deref(), |w| save_pmi(&estimate.matrix, w))
}
