//! B-cubed scores against gold cognate classes, and the correlation between
//! predicted and true cluster counts across meanings.

use std::collections::BTreeMap;
use std::io::Write;

use indexmap::IndexMap;

use crate::crp::Partition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcubedScore {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

impl BcubedScore {
    /// Combines precision and recall with their harmonic mean (0 when both are 0).
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f_score = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            precision,
            recall,
            f_score,
        }
    }
}

/// B-cubed precision, recall and F-score of `predicted` against `gold`.
///
/// Every item counts itself as a cognate of itself. Precision and recall are
/// means over items; the F-score is the harmonic mean of those two means.
pub fn bcubed(predicted: &Partition, gold: &Partition) -> Result<BcubedScore> {
    if predicted.len() != gold.len() {
        return Err(Error::ItemMismatch(format!(
            "predicted partition has {} items, gold has {}",
            predicted.len(),
            gold.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::DegenerateInput("b-cubed over zero items".into()));
    }
    let mut overlap: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&c, &l) in predicted.labels().iter().zip(gold.labels()) {
        *overlap.entry((c, l)).or_default() += 1;
    }
    let pred_sizes = predicted.cluster_sizes();
    let gold_sizes = gold.cluster_sizes();

    // every item in cell (c, l) has the same precision and recall
    let (mut p, mut r) = (0.0, 0.0);
    for (&(c, l), &count) in &overlap {
        let k = count as f64;
        p += k * k / pred_sizes[c] as f64;
        r += k * k / gold_sizes[l] as f64;
    }
    let n = predicted.len() as f64;
    Ok(BcubedScore::from_pr(p / n, r / n))
}

/// Sample Pearson correlation, or `None` when it is undefined (fewer than two
/// points, unequal lengths, or a constant vector).
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeaningScore {
    pub meaning: String,
    pub score: BcubedScore,
    pub predicted_k: usize,
    pub true_k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_meaning: Vec<MeaningScore>,
    /// Arithmetic means of the per-meaning precision, recall and F-score.
    /// The aggregate F-score is therefore not the harmonic mean of the
    /// aggregate precision and recall.
    pub aggregate: BcubedScore,
    /// Pearson r between predicted and true cluster counts; `None` if undefined.
    pub cluster_count_correlation: Option<f64>,
    /// Meanings left out for lack of gold classes.
    pub excluded_meanings: Vec<String>,
    /// (language, meaning) cells with more than one form. All forms are kept
    /// and scored as separate items.
    pub synonym_slots: usize,
}

/// Scores every meaning and aggregates, in the order of `predictions`.
pub fn evaluate_dataset(
    predictions: &IndexMap<String, Partition>,
    gold: &IndexMap<String, Partition>,
) -> Result<EvalReport> {
    if let Some(m) = predictions.keys().find(|m| !gold.contains_key(*m)) {
        return Err(Error::ItemMismatch(format!(
            "meaning {m:?} has no gold partition"
        )));
    }
    if let Some(m) = gold.keys().find(|m| !predictions.contains_key(*m)) {
        return Err(Error::ItemMismatch(format!(
            "meaning {m:?} has no prediction"
        )));
    }
    if predictions.is_empty() {
        return Err(Error::DegenerateInput("no meanings to evaluate".into()));
    }

    let per_meaning = predictions
        .iter()
        .map(|(meaning, pred)| {
            let g = &gold[meaning];
            let score = bcubed(pred, g).map_err(|e| match e {
                Error::ItemMismatch(msg) => {
                    Error::ItemMismatch(format!("meaning {meaning:?}: {msg}"))
                }
                other => other,
            })?;
            Ok(MeaningScore {
                meaning: meaning.clone(),
                score,
                predicted_k: pred.k(),
                true_k: g.k(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = per_meaning.len() as f64;
    let mean =
        |f: fn(&BcubedScore) -> f64| per_meaning.iter().map(|m| f(&m.score)).sum::<f64>() / n;
    let aggregate = BcubedScore {
        precision: mean(|s| s.precision),
        recall: mean(|s| s.recall),
        f_score: mean(|s| s.f_score),
    };
    let predicted_k: Vec<f64> = per_meaning.iter().map(|m| m.predicted_k as f64).collect();
    let true_k: Vec<f64> = per_meaning.iter().map(|m| m.true_k as f64).collect();

    Ok(EvalReport {
        cluster_count_correlation: pearson(&predicted_k, &true_k),
        per_meaning,
        aggregate,
        excluded_meanings: Vec::new(),
        synonym_slots: 0,
    })
}

/// How report numbers are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberStyle {
    /// Fractions with four decimals, e.g. `0.8122`.
    #[default]
    Fraction,
    /// Percentages with two decimals, e.g. `81.22`.
    Percent,
}

impl NumberStyle {
    pub fn format(self, x: f64) -> String {
        match self {
            NumberStyle::Fraction => format!("{x:.4}"),
            NumberStyle::Percent => format!("{:.2}", 100.0 * x),
        }
    }

    fn format_opt(self, x: Option<f64>) -> String {
        x.map_or_else(|| "undefined".to_string(), |v| self.format(v))
    }
}

impl EvalReport {
    /// Human-readable table: one row per meaning, then summary lines.
    pub fn write_text<W: Write>(&self, mut w: W, style: NumberStyle) -> std::io::Result<()> {
        writeln!(
            w,
            "meaning\tprecision\trecall\tf_score\tpredicted_k\ttrue_k"
        )?;
        for m in &self.per_meaning {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                m.meaning,
                style.format(m.score.precision),
                style.format(m.score.recall),
                style.format(m.score.f_score),
                m.predicted_k,
                m.true_k
            )?;
        }
        writeln!(w)?;
        writeln!(
            w,
            "aggregate\tprecision {}\trecall {}\tf_score {}",
            style.format(self.aggregate.precision),
            style.format(self.aggregate.recall),
            style.format(self.aggregate.f_score)
        )?;
        writeln!(
            w,
            "cluster count correlation\t{}",
            style.format_opt(self.cluster_count_correlation)
        )?;
        writeln!(w, "meanings evaluated\t{}", self.per_meaning.len())?;
        writeln!(
            w,
            "meanings excluded (no gold)\t{}",
            self.excluded_meanings.len()
        )?;
        writeln!(w, "synonym slots (all forms kept)\t{}", self.synonym_slots)?;
        Ok(())
    }

    /// One `key=value` pair per line.
    pub fn write_kv<W: Write>(&self, mut w: W, style: NumberStyle) -> std::io::Result<()> {
        writeln!(
            w,
            "aggregate.precision={}",
            style.format(self.aggregate.precision)
        )?;
        writeln!(
            w,
            "aggregate.recall={}",
            style.format(self.aggregate.recall)
        )?;
        writeln!(
            w,
            "aggregate.f_score={}",
            style.format(self.aggregate.f_score)
        )?;
        writeln!(
            w,
            "cluster_count_correlation={}",
            style.format_opt(self.cluster_count_correlation)
        )?;
        writeln!(w, "meanings_evaluated={}", self.per_meaning.len())?;
        writeln!(w, "meanings_excluded={}", self.excluded_meanings.len())?;
        writeln!(w, "synonym_slots={}", self.synonym_slots)?;
        for m in &self.per_meaning {
            let key = format!("meaning.{}", m.meaning);
            writeln!(w, "{key}.precision={}", style.format(m.score.precision))?;
            writeln!(w, "{key}.recall={}", style.format(m.score.recall))?;
            writeln!(w, "{key}.f_score={}", style.format(m.score.f_score))?;
            writeln!(w, "{key}.predicted_k={}", m.predicted_k)?;
            writeln!(w, "{key}.true_k={}", m.true_k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(labels: &[usize]) -> Partition {
        Partition::from_labels(labels)
    }

    #[test]
    fn identical_partitions_score_one() {
        let s = bcubed(&p(&[0, 0, 1, 2, 1]), &p(&[5, 5, 3, 4, 3])).unwrap();
        assert_eq!((s.precision, s.recall, s.f_score), (1.0, 1.0, 1.0));
    }

    #[test]
    fn all_singletons_against_pair() {
        // gold {a,b},{c}
        let s = bcubed(&Partition::singletons(3), &p(&[0, 0, 1])).unwrap();
        assert_eq!(s.precision, 1.0);
        assert!((s.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((s.f_score - 0.8).abs() < 1e-15);
    }

    #[test]
    fn one_cluster_against_pair() {
        let s = bcubed(&p(&[0, 0, 0]), &p(&[0, 0, 1])).unwrap();
        assert!((s.precision - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(s.recall, 1.0);
        assert!((s.f_score - 10.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(
            bcubed(&p(&[0, 0]), &p(&[0])),
            Err(Error::ItemMismatch(_))
        ));
    }

    #[test]
    fn harmonic_mean_of_zeros() {
        assert_eq!(BcubedScore::from_pr(0.0, 0.0).f_score, 0.0);
    }

    #[test]
    fn pearson_cases() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Some(1.0));
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[-1.0, -2.0, -3.0]), Some(-1.0));
        let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
        assert!((r - 0.6).abs() < 1e-15);
        assert_eq!(pearson(&[1.0], &[1.0]), None);
        assert_eq!(pearson(&[1.0, 1.0], &[1.0, 2.0]), None);
        assert_eq!(pearson(&[1.0, 2.0], &[1.0]), None);
    }

    fn map(entries: Vec<(&str, Partition)>) -> IndexMap<String, Partition> {
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }

    #[test]
    fn dataset_perfect() {
        let gold = map(vec![("A", p(&[0, 0, 1])), ("B", p(&[0, 1, 2, 2]))]);
        let r = evaluate_dataset(&gold, &gold).unwrap();
        assert_eq!(r.aggregate.f_score, 1.0);
        assert_eq!(r.cluster_count_correlation, Some(1.0));
    }

    #[test]
    fn dataset_mean_of_f_scores() {
        let gold = map(vec![("A", p(&[0, 0, 1])), ("B", p(&[0, 0, 1]))]);
        let pred = map(vec![("A", Partition::singletons(3)), ("B", p(&[0, 0, 0]))]);
        let r = evaluate_dataset(&pred, &gold).unwrap();
        let expected = (0.8 + 10.0 / 14.0) / 2.0;
        assert!((r.aggregate.f_score - expected).abs() < 1e-15);
        assert!((r.aggregate.f_score - 0.757142857).abs() < 1e-9);
        // true K constant: correlation undefined
        assert_eq!(r.cluster_count_correlation, None);
    }

    #[test]
    fn dataset_constant_prediction_is_undefined() {
        let gold = map(vec![("A", p(&[0, 0, 1])), ("B", p(&[0, 1, 2]))]);
        let pred = map(vec![("A", p(&[0, 0, 0])), ("B", p(&[0, 0, 0]))]);
        let r = evaluate_dataset(&pred, &gold).unwrap();
        assert_eq!(r.cluster_count_correlation, None);
    }

    #[test]
    fn dataset_key_mismatch() {
        let gold = map(vec![("A", p(&[0]))]);
        let pred = map(vec![("B", p(&[0]))]);
        assert!(matches!(
            evaluate_dataset(&pred, &gold),
            Err(Error::ItemMismatch(_))
        ));
    }

    #[test]
    fn report_formats() {
        let gold = map(vec![("A", p(&[0, 0, 1]))]);
        let pred = map(vec![("A", Partition::singletons(3))]);
        let r = evaluate_dataset(&pred, &gold).unwrap();
        let mut text = Vec::new();
        r.write_text(&mut text, NumberStyle::Fraction).unwrap();
        let text = String::from_utf8(text).unwrap();
        assert!(text.contains("A\t1.0000\t0.6667\t0.8000\t3\t2"), "{text}");
        let mut kv = Vec::new();
        r.write_kv(&mut kv, NumberStyle::Percent).unwrap();
        let kv = String::from_utf8(kv).unwrap();
        assert!(kv.contains("aggregate.f_score=80.00"), "{kv}");
        assert!(kv.contains("cluster_count_correlation=undefined"));
    }
}
