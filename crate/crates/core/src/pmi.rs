//! Pointwise mutual information scores between sound segments.
//!
//! A [`PmiMatrix`] is dense and symmetric over its alphabet. Matrices are read
//! from and written to a small text format:
//!
//! ```text
//! alphabet<TAB>a b c
//! a<TAB>a<TAB>2.0
//! a<TAB>b<TAB>-1.0
//! ...
//! ```
//!
//! with one line per unordered pair. Gap scores are not part of the matrix;
//! they belong to the aligner.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use crate::alphabet::{Alphabet, Segment, GAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PmiMatrix {
    alphabet: Alphabet,
    // row-major, len = n * n
    scores: Vec<f64>,
}

impl PmiMatrix {
    /// Builds a matrix from a score function evaluated on every ordered pair.
    /// Fails if the function is not symmetric.
    pub fn from_fn(alphabet: Alphabet, mut f: impl FnMut(Segment, Segment) -> f64) -> Result<Self> {
        let n = alphabet.len();
        let segs: Vec<Segment> = alphabet.iter().collect();
        let mut scores = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                scores[i * n + j] = f(segs[i], segs[j]);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (scores[i * n + j], scores[j * n + i]);
                if x.to_bits() != y.to_bits() {
                    return Err(Error::AsymmetricPair {
                        a: segs[i].symbol(),
                        b: segs[j].symbol(),
                        first: x,
                        second: y,
                    });
                }
            }
        }
        Ok(Self { alphabet, scores })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn score(&self, a: Segment, b: Segment) -> Option<f64> {
        let i = self.alphabet.index_of(a.symbol())?;
        let j = self.alphabet.index_of(b.symbol())?;
        Some(self.score_at(i, j))
    }

    /// Score by alphabet positions. Panics when out of range.
    #[inline]
    pub fn score_at(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.alphabet.len() + j]
    }

    /// Whether every symbol of `alphabet` has scores here.
    pub fn covers(&self, alphabet: &Alphabet) -> bool {
        alphabet
            .symbols()
            .iter()
            .all(|&c| self.alphabet.contains(c))
    }
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::PmiFormat {
        line: Some(line),
        message: message.into(),
    }
}

fn single_char(token: &str, line: usize) -> Result<char> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(format_err(
            line,
            format!("expected a single symbol, found {token:?}"),
        )),
    }
}

/// Reads a matrix file.
pub fn load_pmi<R: Read>(source: R) -> Result<PmiMatrix> {
    let mut lines = BufReader::new(source).lines().enumerate();

    let alphabet = loop {
        let Some((i, line)) = lines.next() else {
            return Err(Error::PmiFormat {
                line: None,
                message: "empty matrix file".into(),
            });
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 1;
        let rest = line
            .strip_prefix("alphabet\t")
            .ok_or_else(|| format_err(lineno, "first line must be `alphabet<TAB>symbols`"))?;
        let symbols = rest
            .split_whitespace()
            .map(|t| single_char(t, lineno))
            .collect::<Result<Vec<_>>>()?;
        if symbols.contains(&GAP) {
            return Err(format_err(
                lineno,
                "gap scores are aligner parameters and cannot appear in the matrix",
            ));
        }
        if symbols.is_empty() {
            return Err(format_err(lineno, "empty alphabet"));
        }
        break Alphabet::new(symbols).map_err(|e| format_err(lineno, e.to_string()))?;
    };

    let n = alphabet.len();
    let mut seen: HashMap<(usize, usize), f64> = HashMap::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(format_err(
                lineno,
                format!("expected 3 fields, found {}", fields.len()),
            ));
        }
        let a = single_char(fields[0], lineno)?;
        let b = single_char(fields[1], lineno)?;
        let (ia, ib) = match (alphabet.index_of(a), alphabet.index_of(b)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                let bad = if alphabet.contains(a) { b } else { a };
                return Err(format_err(
                    lineno,
                    format!("symbol {bad:?} is not in the declared alphabet"),
                ));
            }
        };
        let score: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| format_err(lineno, format!("bad score {:?}", fields[2])))?;
        if score.is_nan() {
            return Err(format_err(lineno, "score is NaN"));
        }
        let key = (ia.min(ib), ia.max(ib));
        if let Some(&prev) = seen.get(&key) {
            if prev.to_bits() != score.to_bits() {
                return Err(Error::AsymmetricPair {
                    a: alphabet.symbols()[key.0],
                    b: alphabet.symbols()[key.1],
                    first: prev,
                    second: score,
                });
            }
        }
        seen.insert(key, score);
    }

    let mut scores = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let s = *seen
                .get(&(i, j))
                .ok_or_else(|| Error::MissingPair(alphabet.symbols()[i], alphabet.symbols()[j]))?;
            scores[i * n + j] = s;
            scores[j * n + i] = s;
        }
    }
    Ok(PmiMatrix { alphabet, scores })
}

/// Writes a matrix in the format read by [`load_pmi`]. Scores use the
/// shortest representation that parses back to the same `f64`.
pub fn save_pmi<W: Write>(m: &PmiMatrix, mut sink: W) -> std::io::Result<()> {
    let symbols = m.alphabet.symbols();
    let header: Vec<String> = symbols.iter().map(char::to_string).collect();
    writeln!(sink, "alphabet\t{}", header.join(" "))?;
    for i in 0..symbols.len() {
        for j in i..symbols.len() {
            writeln!(
                sink,
                "{}\t{}\t{:?}",
                symbols[i],
                symbols[j],
                m.score_at(i, j)
            )?;
        }
    }
    Ok(())
}

/// Two equal-length aligned sequences; `None` marks a gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedPair {
    top: Vec<Option<Segment>>,
    bottom: Vec<Option<Segment>>,
}

impl AlignedPair {
    pub fn new(top: Vec<Option<Segment>>, bottom: Vec<Option<Segment>>) -> Result<Self> {
        if top.len() != bottom.len() {
            return Err(Error::InvalidParameter(format!(
                "aligned sequences differ in length ({} vs {})",
                top.len(),
                bottom.len()
            )));
        }
        Ok(Self { top, bottom })
    }

    /// Parses two strings using `-` for gaps.
    pub fn parse(top: &str, bottom: &str, alphabet: &Alphabet) -> Result<Self> {
        let conv = |s: &str| -> Result<Vec<Option<Segment>>> {
            s.chars()
                .map(|c| {
                    if c == GAP {
                        Ok(None)
                    } else {
                        alphabet.segment(c).map(Some)
                    }
                })
                .collect()
        };
        Self::new(conv(top)?, conv(bottom)?)
    }

    pub fn columns(&self) -> impl Iterator<Item = (Option<Segment>, Option<Segment>)> + '_ {
        self.top.iter().copied().zip(self.bottom.iter().copied())
    }
}

/// Reads aligned pairs, one per line as `top<TAB>bottom`.
pub fn parse_aligned_pairs<R: Read>(source: R, alphabet: &Alphabet) -> Result<Vec<AlignedPair>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::MalformedRow {
                line: lineno,
                expected: 2,
                found: fields.len(),
            });
        }
        let pair = AlignedPair::parse(fields[0].trim(), fields[1].trim(), alphabet).map_err(
            |e| match e {
                Error::InvalidParameter(message) => Error::Syntax {
                    line: lineno,
                    message,
                },
                other => other.at_line(lineno),
            },
        )?;
        out.push(pair);
    }
    Ok(out)
}

/// Result of [`estimate_pmi`].
#[derive(Debug, Clone, PartialEq)]
pub struct PmiEstimate {
    pub matrix: PmiMatrix,
    /// Unordered pairs whose score is negative infinity because they (or one
    /// of their segments) were never observed and no smoothing was applied.
    pub unobserved: Vec<(Segment, Segment)>,
}

/// Estimates PMI scores from already aligned word pairs in a single pass.
///
/// Only columns where both sides are segments contribute to the joint
/// distribution. Each such column adds half a count to `(i, j)` and half to
/// `(j, i)`, so the joint table is symmetric and sums to the number of
/// columns. Segment frequencies count every non-gap position of both rows.
///
/// `smoothing` is added to every joint cell. Segment counts receive the
/// matching pseudo-count `2 * smoothing * |alphabet|`, which is what the
/// smoothed joint table contributes to each segment's marginal.
pub fn estimate_pmi(
    aligned_pairs: &[AlignedPair],
    smoothing: f64,
    alphabet: &Alphabet,
) -> Result<PmiEstimate> {
    if !(smoothing >= 0.0 && smoothing.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "smoothing must be a finite value >= 0, got {smoothing}"
        )));
    }
    let n = alphabet.len();
    let idx = |s: Segment| {
        alphabet.index_of(s.symbol()).ok_or(Error::InvalidSymbol {
            symbol: s.symbol(),
            line: None,
        })
    };

    let mut joint = vec![0.0f64; n * n];
    let mut columns = 0usize;
    let mut unigram = vec![0usize; n];
    let mut positions = 0usize;
    for pair in aligned_pairs {
        for (a, b) in pair.columns() {
            let ia = a.map(idx).transpose()?;
            let ib = b.map(idx).transpose()?;
            for x in [ia, ib].into_iter().flatten() {
                unigram[x] += 1;
                positions += 1;
            }
            if let (Some(x), Some(y)) = (ia, ib) {
                joint[x * n + y] += 0.5;
                joint[y * n + x] += 0.5;
                columns += 1;
            }
        }
    }
    if columns == 0 {
        return Err(Error::DegenerateInput(
            "no aligned segment pairs (every column contains a gap)".into(),
        ));
    }

    let nf = n as f64;
    let joint_total = columns as f64 + smoothing * nf * nf;
    let uni_pseudo = 2.0 * smoothing * nf;
    let uni_total = positions as f64 + uni_pseudo * nf;
    let q: Vec<f64> = unigram
        .iter()
        .map(|&c| (c as f64 + uni_pseudo) / uni_total)
        .collect();

    let mut scores = vec![0.0; n * n];
    let mut unobserved = Vec::new();
    let segs: Vec<Segment> = alphabet.iter().collect();
    for i in 0..n {
        for j in i..n {
            let p = (joint[i * n + j] + smoothing) / joint_total;
            let s = if p > 0.0 && q[i] > 0.0 && q[j] > 0.0 {
                (p / (q[i] * q[j])).ln()
            } else {
                unobserved.push((segs[i], segs[j]));
                f64::NEG_INFINITY
            };
            scores[i * n + j] = s;
            scores[j * n + i] = s;
        }
    }
    Ok(PmiEstimate {
        matrix: PmiMatrix {
            alphabet: alphabet.clone(),
            scores,
        },
        unobserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    #[test]
    fn load_completes_symmetry() {
        let m = load_pmi("alphabet\ta b\na\ta\t2.0\na\tb\t-1.0\nb\tb\t1.0\n".as_bytes()).unwrap();
        let a = ab();
        let (sa, sb) = (a.segment('a').unwrap(), a.segment('b').unwrap());
        assert_eq!(m.score(sb, sa), Some(-1.0));
        assert_eq!(m.score(sa, sb), Some(-1.0));
        assert_eq!(m.score(sa, sa), Some(2.0));
    }

    #[test]
    fn load_missing_pair() {
        let err = load_pmi("alphabet\ta b\na\ta\t2.0\na\tb\t-1.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MissingPair('b', 'b')));
    }

    #[test]
    fn load_asymmetric_pair() {
        let err =
            load_pmi("alphabet\ta b\na\ta\t2.0\na\tb\t-1.0\nb\ta\t-0.5\nb\tb\t1.0\n".as_bytes())
                .unwrap_err();
        assert!(matches!(err, Error::AsymmetricPair { .. }));
        // consistent duplicates are fine
        load_pmi("alphabet\ta b\na\ta\t2\na\tb\t-1\nb\ta\t-1\nb\tb\t1\n".as_bytes()).unwrap();
    }

    #[test]
    fn load_rejects_gap_rows_and_unknown_symbols() {
        let err = load_pmi("alphabet\ta -\na\ta\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::PmiFormat { line: Some(1), .. }));
        let err = load_pmi("alphabet\ta\na\tz\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::PmiFormat { line: Some(2), .. }));
        let err = load_pmi("a\ta\t1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::PmiFormat { line: Some(1), .. }));
    }

    #[test]
    fn save_load_round_trip() {
        let m = load_pmi("alphabet\ta b\na\ta\t2.0\na\tb\t-1.0\nb\tb\t1.0\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        save_pmi(&m, &mut buf).unwrap();
        assert_eq!(load_pmi(buf.as_slice()).unwrap(), m);

        let zero = PmiMatrix::from_fn(Alphabet::asjp(), |_, _| 0.0).unwrap();
        let mut buf = Vec::new();
        save_pmi(&zero, &mut buf).unwrap();
        let back = load_pmi(buf.as_slice()).unwrap();
        assert_eq!(back, zero);
        assert!(back.scores.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn single_identity_column_scores_zero() {
        let a = Alphabet::new(['a']).unwrap();
        let pairs = [AlignedPair::parse("a", "a", &a).unwrap()];
        let est = estimate_pmi(&pairs, 0.0, &a).unwrap();
        let sa = a.segment('a').unwrap();
        assert_eq!(est.matrix.score(sa, sa), Some(0.0));
        assert!(est.unobserved.is_empty());
    }

    #[test]
    fn unobserved_pairs_are_flagged() {
        let a = ab();
        let pairs = [AlignedPair::parse("a", "a", &a).unwrap()];
        let est = estimate_pmi(&pairs, 0.0, &a).unwrap();
        let (sa, sb) = (a.segment('a').unwrap(), a.segment('b').unwrap());
        assert_eq!(est.matrix.score(sa, sb), Some(f64::NEG_INFINITY));
        assert_eq!(est.unobserved, vec![(sa, sb), (sb, sb)]);

        let smoothed = estimate_pmi(&pairs, 0.1, &a).unwrap();
        assert!(smoothed.unobserved.is_empty());
        assert!(smoothed.matrix.score(sa, sb).unwrap().is_finite());
    }

    #[test]
    fn all_gap_columns_are_degenerate() {
        let a = ab();
        let pairs = [AlignedPair::parse("a-", "-b", &a).unwrap()];
        assert!(matches!(
            estimate_pmi(&pairs, 0.0, &a),
            Err(Error::DegenerateInput(_))
        ));
        assert!(estimate_pmi(&pairs, -1.0, &a).is_err());
    }

    #[test]
    fn unequal_lengths_rejected() {
        assert!(AlignedPair::parse("ab", "a", &ab()).is_err());
        let err = parse_aligned_pairs("ab\tb-\nab\ta\n".as_bytes(), &ab()).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
    }
}
