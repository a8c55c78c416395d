//! Global alignment scores with affine gaps, and per-meaning similarity matrices.

use std::io::Write;

use crate::alphabet::{Alphabet, Segment};
use crate::error::{Error, Result};
use crate::pmi::PmiMatrix;
use crate::wordlist::WordForm;

/// Affine gap scores. A gap run of length `L` scores `open + (L - 1) * extend`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapParams {
    open: f64,
    extend: f64,
}

impl GapParams {
    pub fn new(open: f64, extend: f64) -> Result<Self> {
        if !open.is_finite() || !extend.is_finite() || open > 0.0 || extend > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gap scores must be finite and <= 0 (open {open}, extend {extend})"
            )));
        }
        if extend.abs() > open.abs() {
            return Err(Error::InvalidParameter(format!(
                "gap extension ({extend}) must not cost more than gap opening ({open})"
            )));
        }
        Ok(Self { open, extend })
    }

    pub fn open(&self) -> f64 {
        self.open
    }

    pub fn extend(&self) -> f64 {
        self.extend
    }
}

impl Default for GapParams {
    fn default() -> Self {
        Self {
            open: -1.0,
            extend: -0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Substitution {
    /// Fixed scores for identical and differing segments.
    Vanilla { matched: f64, mismatched: f64 },
    /// Segment-pair scores looked up in a PMI matrix.
    Pmi(PmiMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scorer {
    substitution: Substitution,
    gaps: GapParams,
}

impl Scorer {
    pub fn vanilla(matched: f64, mismatched: f64, gaps: GapParams) -> Result<Self> {
        if !(matched.is_finite() && mismatched.is_finite() && matched > mismatched) {
            return Err(Error::InvalidParameter(format!(
                "match score ({matched}) must exceed mismatch score ({mismatched})"
            )));
        }
        Ok(Self {
            substitution: Substitution::Vanilla {
                matched,
                mismatched,
            },
            gaps,
        })
    }

    pub fn pmi(matrix: PmiMatrix, gaps: GapParams) -> Self {
        Self {
            substitution: Substitution::Pmi(matrix),
            gaps,
        }
    }

    pub fn substitution(&self) -> &Substitution {
        &self.substitution
    }

    pub fn gaps(&self) -> GapParams {
        self.gaps
    }

    /// Fails unless every symbol of `alphabet` can be scored.
    pub fn check_covers(&self, alphabet: &Alphabet) -> Result<()> {
        if let Substitution::Pmi(m) = &self.substitution {
            if let Some(&c) = alphabet
                .symbols()
                .iter()
                .find(|&&c| !m.alphabet().contains(c))
            {
                return Err(Error::InvalidSymbol {
                    symbol: c,
                    line: None,
                });
            }
        }
        Ok(())
    }

    // Maps segments to the codes used by `substitute`.
    fn encode(&self, segs: &[Segment]) -> Result<Vec<u32>> {
        match &self.substitution {
            Substitution::Vanilla { .. } => Ok(segs.iter().map(|s| s.symbol() as u32).collect()),
            Substitution::Pmi(m) => segs
                .iter()
                .map(|s| {
                    m.alphabet().index_of(s.symbol()).map(|i| i as u32).ok_or(
                        Error::InvalidSymbol {
                            symbol: s.symbol(),
                            line: None,
                        },
                    )
                })
                .collect(),
        }
    }

    #[inline]
    fn substitute(&self, a: u32, b: u32) -> f64 {
        match &self.substitution {
            Substitution::Vanilla {
                matched,
                mismatched,
            } => {
                if a == b {
                    *matched
                } else {
                    *mismatched
                }
            }
            Substitution::Pmi(m) => m.score_at(a as usize, b as usize),
        }
    }

    fn score_encoded(&self, a: &[u32], b: &[u32]) -> f64 {
        gotoh(a.len(), b.len(), self.gaps, |i, j| {
            self.substitute(a[i], b[j])
        })
    }
}

impl Default for Scorer {
    /// Match +1, mismatch -1, gap open -1, gap extend -0.5.
    fn default() -> Self {
        Self::vanilla(1.0, -1.0, GapParams::default()).expect("valid defaults")
    }
}

/// Best global alignment score under a three-state affine gap recurrence.
///
/// `m` ends in a substitution column, `x` in a column that consumes the first
/// sequence against a gap, `y` in one that consumes the second. Moving
/// between `x` and `y` starts a new run and pays `open`.
fn gotoh(n: usize, m: usize, gaps: GapParams, sub: impl Fn(usize, usize) -> f64) -> f64 {
    const NEG: f64 = f64::NEG_INFINITY;
    let (open, ext) = (gaps.open, gaps.extend);

    let mut pm = vec![NEG; m + 1];
    let mut px = vec![NEG; m + 1];
    let mut py = vec![NEG; m + 1];
    pm[0] = 0.0;
    for j in 1..=m {
        py[j] = (pm[j - 1] + open)
            .max(py[j - 1] + ext)
            .max(px[j - 1] + open);
    }

    let mut cm = vec![NEG; m + 1];
    let mut cx = vec![NEG; m + 1];
    let mut cy = vec![NEG; m + 1];
    for i in 1..=n {
        cm[0] = NEG;
        cy[0] = NEG;
        cx[0] = (pm[0] + open).max(px[0] + ext).max(py[0] + open);
        for j in 1..=m {
            let diag = pm[j - 1].max(px[j - 1]).max(py[j - 1]);
            cm[j] = diag + sub(i - 1, j - 1);
            cx[j] = (pm[j] + open).max(px[j] + ext).max(py[j] + open);
            cy[j] = (cm[j - 1] + open)
                .max(cy[j - 1] + ext)
                .max(cx[j - 1] + open);
        }
        std::mem::swap(&mut pm, &mut cm);
        std::mem::swap(&mut px, &mut cx);
        std::mem::swap(&mut py, &mut cy);
    }
    pm[m].max(px[m]).max(py[m])
}

/// Maximum global alignment score of `a` and `b`.
///
/// Empty sequences are accepted: aligning against nothing is a single gap run.
pub fn nw_score(a: &[Segment], b: &[Segment], scorer: &Scorer) -> Result<f64> {
    let ea = scorer.encode(a)?;
    let eb = scorer.encode(b)?;
    Ok(scorer.score_encoded(&ea, &eb))
}

/// Dense, symmetric, non-negative word similarities for one meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
    labels: Vec<String>,
}

impl SimilarityMatrix {
    /// Wraps row-major values. Rejects asymmetric, negative or non-finite entries.
    pub fn new(values: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        let n = values.len();
        if labels.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {n} rows",
                labels.len()
            )));
        }
        if let Some(r) = values.iter().position(|row| row.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "row {r} has {} entries, expected {n}",
                values[r].len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i}, {j}) = {v} is not a finite non-negative number"
                    )));
                }
                if v != values[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            values: values.into_iter().flatten().collect(),
            labels,
        })
    }

    /// Like [`SimilarityMatrix::new`], labelling rows `w0`, `w1`, ...
    pub fn from_rows(values: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..values.len()).map(|i| format!("w{i}")).collect();
        Self::new(values, labels)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Returns a copy with every entry multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        })
    }

    /// TSV with the transcriptions as row and column headers.
    pub fn write_tsv<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        for l in &self.labels {
            write!(sink, "\t{l}")?;
        }
        writeln!(sink)?;
        for i in 0..self.n {
            write!(sink, "{}", self.labels[i])?;
            for j in 0..self.n {
                write!(sink, "\t{:?}", self.get(i, j))?;
            }
            writeln!(sink)?;
        }
        Ok(())
    }
}

fn relu(x: f64) -> f64 {
    x.max(0.0)
}

/// ReLU-clamped pairwise alignment scores of `forms`.
pub fn similarity_matrix(forms: &[&WordForm], scorer: &Scorer) -> Result<SimilarityMatrix> {
    similarity_matrix_with(forms, scorer, false)
}

/// As [`similarity_matrix`]; with `normalize`, each raw score is first divided
/// by the mean of the two words' self-alignment scores. Pairs whose mean
/// self-score is not positive get similarity 0.
pub fn similarity_matrix_with(
    forms: &[&WordForm],
    scorer: &Scorer,
    normalize: bool,
) -> Result<SimilarityMatrix> {
    if forms.is_empty() {
        return Err(Error::DegenerateInput(
            "similarity matrix over zero forms".into(),
        ));
    }
    let n = forms.len();
    let encoded = forms
        .iter()
        .map(|f| scorer.encode(f.segments()))
        .collect::<Result<Vec<_>>>()?;
    let selfs: Vec<f64> = encoded.iter().map(|e| scorer.score_encoded(e, e)).collect();

    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = if normalize {
            if selfs[i] > 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            relu(selfs[i])
        };
        for j in i + 1..n {
            let raw = scorer.score_encoded(&encoded[i], &encoded[j]);
            let v = if normalize {
                let denom = 0.5 * (selfs[i] + selfs[j]);
                if denom > 0.0 {
                    relu(raw / denom)
                } else {
                    0.0
                }
            } else {
                relu(raw)
            };
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(SimilarityMatrix {
        n,
        values,
        labels: forms.iter().map(|f| f.transcription()).collect(),
    })
}
