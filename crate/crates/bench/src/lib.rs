//! Synthetic inputs for the benchmarks.

use cognate_core::{Alphabet, PmiMatrix, Segment, WordForm, WordList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random word of length `3..=8` over the ASJP alphabet.
pub fn random_word(rng: &mut impl Rng, alphabet: &Alphabet) -> Vec<Segment> {
    let len = rng.random_range(3..=8);
    (0..len)
        .map(|_| {
            let c = alphabet.symbols()[rng.random_range(0..alphabet.len())];
            alphabet.segment(c).expect("symbol from alphabet")
        })
        .collect()
}

/// One form per language per meaning, with words of length 3 to 8.
pub fn synthetic_wordlist(languages: usize, meanings: usize, seed: u64) -> WordList {
    let alphabet = Alphabet::asjp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms = Vec::with_capacity(languages * meanings);
    for m in 0..meanings {
        for l in 0..languages {
            let word = random_word(&mut rng, &alphabet);
            forms.push(WordForm::new(format!("L{l}"), format!("M{m}"), word, None).unwrap());
        }
    }
    WordList::from_forms(forms).unwrap()
}

/// Symmetric ASJP matrix with positive diagonal and scores in `[-2, 1)` elsewhere.
pub fn synthetic_pmi(seed: u64) -> PmiMatrix {
    let alphabet = Alphabet::asjp();
    let n = alphabet.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = vec![0.0; n * n];
    for i in 0..n {
        table[i * n + i] = rng.random_range(1.0..3.0);
        for j in i + 1..n {
            let v = rng.random_range(-2.0..1.0);
            table[i * n + j] = v;
            table[j * n + i] = v;
        }
    }
    let idx = |s: Segment| alphabet.index_of(s.symbol()).unwrap();
    PmiMatrix::from_fn(alphabet.clone(), |a, b| table[idx(a) * n + idx(b)]).unwrap()
}
