//! Brute-force reference implementations used to check the library.
//! Deliberately naive and independent of the library's code paths.

#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use std::collections::HashSet;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Col {
    Start,
    Sub,
    GapInB,
    GapInA,
}

/// Maximum over every global alignment of `a` and `b`, enumerated column by
/// column. A gap column opens a run unless the previous column was a gap in
/// the same sequence. Scores accumulate left to right.
pub fn nw_exhaustive(
    a: &[char],
    b: &[char],
    sub: &dyn Fn(char, char) -> f64,
    open: f64,
    extend: f64,
) -> f64 {
    fn go(
        a: &[char],
        b: &[char],
        i: usize,
        j: usize,
        prev: Col,
        acc: f64,
        sub: &dyn Fn(char, char) -> f64,
        open: f64,
        extend: f64,
    ) -> f64 {
        if i == a.len() && j == b.len() {
            return acc;
        }
        let mut best = f64::NEG_INFINITY;
        if i < a.len() && j < b.len() {
            best = best.max(go(
                a,
                b,
                i + 1,
                j + 1,
                Col::Sub,
                acc + sub(a[i], b[j]),
                sub,
                open,
                extend,
            ));
        }
        if i < a.len() {
            let cost = if prev == Col::GapInB { extend } else { open };
            best = best.max(go(
                a,
                b,
                i + 1,
                j,
                Col::GapInB,
                acc + cost,
                sub,
                open,
                extend,
            ));
        }
        if j < b.len() {
            let cost = if prev == Col::GapInA { extend } else { open };
            best = best.max(go(
                a,
                b,
                i,
                j + 1,
                Col::GapInA,
                acc + cost,
                sub,
                open,
                extend,
            ));
        }
        best
    }
    go(a, b, 0, 0, Col::Start, 0.0, sub, open, extend)
}

/// B-cubed by looping over items and scanning all others.
pub fn bcubed_brute(pred: &[usize], gold: &[usize]) -> (f64, f64, f64) {
    let n = pred.len();
    let (mut p, mut r) = (0.0, 0.0);
    for i in 0..n {
        let same_pred = (0..n).filter(|&j| pred[j] == pred[i]).count();
        let same_gold = (0..n).filter(|&j| gold[j] == gold[i]).count();
        let both = (0..n)
            .filter(|&j| pred[j] == pred[i] && gold[j] == gold[i])
            .count();
        p += both as f64 / same_pred as f64;
        r += both as f64 / same_gold as f64;
    }
    p /= n as f64;
    r /= n as f64;
    let f = if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    };
    (p, r, f)
}

/// Result of the reference CRP loop.
pub struct CrpTrace {
    /// Cluster of each word, as a list of member sets.
    pub clusters: Vec<Vec<usize>>,
    /// Number of words whose co-members changed, per scan.
    pub changes: Vec<usize>,
}

/// Plain transcription of the CRP scan: clusters kept as member lists in
/// creation order; ties go to the first list; a word's move is detected by
/// comparing the set of words it shares a cluster with.
pub fn crp_reference(
    s: &[Vec<f64>],
    alpha: f64,
    scans: usize,
    single: bool,
    stop_early: bool,
) -> CrpTrace {
    let n = s.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut changes = Vec::new();
    for _ in 0..scans {
        let mut changed = 0;
        for w in 0..n {
            let ci = clusters.iter().position(|c| c.contains(&w)).unwrap();
            let before: HashSet<usize> = clusters[ci].iter().copied().filter(|&x| x != w).collect();
            clusters[ci].retain(|&x| x != w);
            if clusters[ci].is_empty() {
                clusters.remove(ci);
            }
            let mut best_k = None;
            let mut best_s = f64::NEG_INFINITY;
            for (k, c) in clusters.iter().enumerate() {
                let sc = if single {
                    c.iter().map(|&m| s[w][m]).fold(f64::NEG_INFINITY, f64::max)
                } else {
                    c.iter().map(|&m| s[w][m]).sum::<f64>() / c.len() as f64
                };
                if sc > best_s {
                    best_s = sc;
                    best_k = Some(k);
                }
            }
            let after: HashSet<usize> = match best_k {
                Some(k) if best_s >= alpha => {
                    let prev = clusters[k].iter().copied().collect();
                    clusters[k].push(w);
                    prev
                }
                _ => {
                    clusters.push(vec![w]);
                    HashSet::new()
                }
            };
            if before != after {
                changed += 1;
            }
        }
        changes.push(changed);
        if stop_early && changed == 0 {
            break;
        }
    }
    CrpTrace { clusters, changes }
}

/// Turns member lists into a label per item, numbered by first appearance.
pub fn labels_of(clusters: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut raw = vec![usize::MAX; n];
    for (k, c) in clusters.iter().enumerate() {
        for &m in c {
            raw[m] = k;
        }
    }
    let mut map = std::collections::HashMap::new();
    raw.iter()
        .map(|k| {
            let next = map.len();
            *map.entry(*k).or_insert(next)
        })
        .collect()
}

/// PMI by literal counting over aligned string pairs (`-` = gap).
///
/// Joint frequencies are symmetrised: a column (x, y) with x != y counts half
/// towards (x, y) and half towards (y, x). Unigram frequencies count every
/// non-gap character. `smoothing` is added to each joint cell and
/// `2 * smoothing * |alphabet|` to each unigram count.
pub fn pmi_counting(
    pairs: &[(&str, &str)],
    alphabet: &[char],
    smoothing: f64,
    x: char,
    y: char,
) -> f64 {
    let mut columns: Vec<(char, char)> = Vec::new();
    let mut chars: Vec<char> = Vec::new();
    for (top, bottom) in pairs {
        for (a, b) in top.chars().zip(bottom.chars()) {
            if a != '-' {
                chars.push(a);
            }
            if b != '-' {
                chars.push(b);
            }
            if a != '-' && b != '-' {
                columns.push((a, b));
            }
        }
    }
    let size = alphabet.len() as f64;
    let forward = columns.iter().filter(|&&c| c == (x, y)).count() as f64;
    let backward = columns.iter().filter(|&&c| c == (y, x)).count() as f64;
    let joint = if x == y {
        forward
    } else {
        (forward + backward) / 2.0
    };
    if joint + smoothing == 0.0 {
        // a pair never seen scores log 0, whatever its marginals
        return f64::NEG_INFINITY;
    }
    let p = (joint + smoothing) / (columns.len() as f64 + smoothing * size * size);
    let unigram = |c: char| {
        (chars.iter().filter(|&&d| d == c).count() as f64 + 2.0 * smoothing * size)
            / (chars.len() as f64 + 2.0 * smoothing * size * size)
    };
    (p / (unigram(x) * unigram(y))).ln()
}
