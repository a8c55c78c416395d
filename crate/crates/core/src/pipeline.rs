//! Per-meaning clustering of whole word lists and the partition TSV format
//! (`meaning<TAB>language<TAB>transcription<TAB>cluster_id`).

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use indexmap::IndexMap;

use crate::align::{similarity_matrix_with, Scorer, SimilarityMatrix};
use crate::crp::{crp_cluster, flat_cluster_threshold, CrpConfig, Partition};
use crate::error::{Error, Result};
use crate::eval::{evaluate_dataset, EvalReport};
use crate::wordlist::{WordForm, WordList};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Crp(CrpConfig),
    /// Average-linkage agglomeration stopped at this similarity.
    Threshold(f64),
}

impl Default for Method {
    fn default() -> Self {
        Method::Crp(CrpConfig::default())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusterSettings {
    pub scorer: Scorer,
    pub normalize: bool,
    pub method: Method,
}

/// A clustered meaning: its forms, in word-list order, and their partition.
#[derive(Debug, Clone, PartialEq)]
pub struct MeaningClusters {
    pub meaning: String,
    pub languages: Vec<String>,
    pub transcriptions: Vec<String>,
    pub partition: Partition,
}

pub fn meaning_matrix(
    wl: &WordList,
    meaning: &str,
    settings: &ClusterSettings,
) -> Result<SimilarityMatrix> {
    let forms = wl.forms_for_meaning(meaning)?;
    similarity_matrix_with(&forms, &settings.scorer, settings.normalize)
}

pub fn cluster_meaning(
    wl: &WordList,
    meaning: &str,
    settings: &ClusterSettings,
) -> Result<MeaningClusters> {
    let forms = wl.forms_for_meaning(meaning)?;
    let s = similarity_matrix_with(&forms, &settings.scorer, settings.normalize)?;
    let partition = match settings.method {
        Method::Crp(cfg) => crp_cluster(&s, &cfg),
        Method::Threshold(t) => flat_cluster_threshold(&s, t),
    };
    Ok(MeaningClusters {
        meaning: meaning.to_string(),
        languages: forms.iter().map(|f| f.language.clone()).collect(),
        transcriptions: forms.iter().map(|f| f.transcription()).collect(),
        partition,
    })
}

/// Clusters every meaning sequentially, in word-list order.
pub fn cluster_wordlist(wl: &WordList, settings: &ClusterSettings) -> Result<Vec<MeaningClusters>> {
    wl.meanings()
        .map(|m| cluster_meaning(wl, m, settings))
        .collect()
}

pub fn write_partitions<W: Write>(
    clusters: &[MeaningClusters],
    mut sink: W,
) -> std::io::Result<()> {
    writeln!(sink, "meaning\tlanguage\ttranscription\tcluster_id")?;
    for mc in clusters {
        for (i, label) in mc.partition.labels().iter().enumerate() {
            writeln!(
                sink,
                "{}\t{}\t{}\t{}",
                mc.meaning, mc.languages[i], mc.transcriptions[i], label
            )?;
        }
    }
    Ok(())
}

/// One row of a partition file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionRow {
    pub language: String,
    pub transcription: String,
    pub cluster: String,
}

/// Reads a partition file into rows grouped by meaning.
pub fn read_partitions<R: Read>(source: R) -> Result<IndexMap<String, Vec<PartitionRow>>> {
    let mut out: IndexMap<String, Vec<PartitionRow>> = IndexMap::new();
    let mut header_seen = false;
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::MalformedRow {
                line: lineno,
                expected: 4,
                found: fields.len(),
            });
        }
        if !header_seen {
            header_seen = true;
            if fields == ["meaning", "language", "transcription", "cluster_id"] {
                continue;
            }
            return Err(Error::Syntax {
                line: lineno,
                message: "expected header `meaning language transcription cluster_id`".into(),
            });
        }
        out.entry(fields[0].to_string())
            .or_default()
            .push(PartitionRow {
                language: fields[1].to_string(),
                transcription: fields[2].to_string(),
                cluster: fields[3].to_string(),
            });
    }
    Ok(out)
}

fn partition_over_forms(
    meaning: &str,
    forms: &[&WordForm],
    rows: &[PartitionRow],
) -> Result<Partition> {
    let lookup: HashMap<(&str, &str), &str> = rows
        .iter()
        .map(|r| {
            (
                (r.language.as_str(), r.transcription.as_str()),
                r.cluster.as_str(),
            )
        })
        .collect();
    if lookup.len() != forms.len() || rows.len() != forms.len() {
        return Err(Error::ItemMismatch(format!(
            "meaning {meaning:?}: {} forms in the word list, {} rows in the partition",
            forms.len(),
            rows.len()
        )));
    }
    let keys = forms
        .iter()
        .map(|f| {
            let t = f.transcription();
            lookup
                .get(&(f.language.as_str(), t.as_str()))
                .copied()
                .ok_or_else(|| {
                    Error::ItemMismatch(format!(
                        "meaning {meaning:?}: no partition row for {} {t:?}",
                        f.language
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_keys(&keys))
}

/// Matches partition rows against the word list, yielding item orders that
/// agree with [`WordList::forms_for_meaning`].
pub fn partitions_for_wordlist(
    wl: &WordList,
    rows: &IndexMap<String, Vec<PartitionRow>>,
) -> Result<IndexMap<String, Partition>> {
    if let Some(m) = rows.keys().find(|m| wl.forms_for_meaning(m).is_err()) {
        return Err(Error::UnknownMeaning(m.clone()));
    }
    wl.meanings()
        .filter(|m| rows.contains_key(*m))
        .map(|m| {
            let forms = wl.forms_for_meaning(m)?;
            Ok((m.to_string(), partition_over_forms(m, &forms, &rows[m])?))
        })
        .collect()
}

/// Gold partitions of the evaluable meanings, and the names of the others.
pub fn gold_partitions(wl: &WordList) -> (IndexMap<String, Partition>, Vec<String>) {
    let mut gold = IndexMap::new();
    let mut excluded = Vec::new();
    for m in wl.meanings() {
        if !wl.is_evaluable(m) {
            excluded.push(m.to_string());
            continue;
        }
        let forms = wl.forms_for_meaning(m).expect("listed meaning");
        let keys: Vec<&str> = forms
            .iter()
            .map(|f| f.gold_class.as_deref().expect("evaluable"))
            .collect();
        gold.insert(m.to_string(), Partition::from_keys(&keys));
    }
    (gold, excluded)
}

/// Evaluates predictions for the meanings that carry gold classes.
pub fn evaluate_wordlist(
    wl: &WordList,
    predictions: &IndexMap<String, Partition>,
) -> Result<EvalReport> {
    let (gold, excluded) = gold_partitions(wl);
    let mut preds = IndexMap::new();
    for m in gold.keys() {
        let p = predictions
            .get(m)
            .ok_or_else(|| Error::ItemMismatch(format!("meaning {m:?} has no prediction")))?;
        preds.insert(m.clone(), p.clone());
    }
    let mut report = evaluate_dataset(&preds, &gold)?;
    report.excluded_meanings = excluded;
    report.synonym_slots = wl.synonym_slots();
    Ok(report)
}
