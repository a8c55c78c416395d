//! Multilingual word lists: a languages-by-meanings table of transcribed forms
//! with optional gold cognate classes.
//!
//! The on-disk format is tab-separated UTF-8 with a header row
//! `language<TAB>concept<TAB>transcription<TAB>cognate_class`. The class
//! column may be empty or absent.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};

use indexmap::{IndexMap, IndexSet};

use crate::alphabet::{transcription, Alphabet, Segment};
use crate::error::{Error, Result};

/// Characters that ASJP uses to mark modifications of the preceding segment(s).
pub const ASJP_MODIFIERS: [char; 4] = ['~', '$', '"', '*'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModifierPolicy {
    /// Drop modifier characters.
    #[default]
    Strip,
    /// Reject them like any other out-of-alphabet symbol.
    Strict,
}

/// Header names of the columns to read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub language: String,
    pub concept: String,
    pub transcription: String,
    pub cognate_class: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            language: "language".into(),
            concept: "concept".into(),
            transcription: "transcription".into(),
            cognate_class: "cognate_class".into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParseConfig {
    pub alphabet: Alphabet,
    pub modifiers: ModifierPolicy,
    pub columns: ColumnMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordForm {
    pub language: String,
    pub meaning: String,
    segments: Vec<Segment>,
    pub gold_class: Option<String>,
}

impl WordForm {
    pub fn new(
        language: impl Into<String>,
        meaning: impl Into<String>,
        segments: Vec<Segment>,
        gold_class: Option<String>,
    ) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::DegenerateInput("word form without segments".into()));
        }
        Ok(Self {
            language: language.into(),
            meaning: meaning.into(),
            segments,
            gold_class,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn transcription(&self) -> String {
        transcription(&self.segments)
    }

    fn key(&self) -> FormKey {
        (
            self.language.clone(),
            self.meaning.clone(),
            self.segments.clone(),
        )
    }
}

type FormKey = (String, String, Vec<Segment>);

/// An immutable, validated word list.
///
/// Forms keep file order of first appearance; `meanings` and `languages` are
/// ordered by first appearance too.
#[derive(Debug, Clone, Default)]
pub struct WordList {
    forms: Vec<WordForm>,
    meanings: IndexMap<String, Vec<usize>>,
    languages: IndexSet<String>,
    duplicates_collapsed: usize,
}

impl PartialEq for WordList {
    fn eq(&self, other: &Self) -> bool {
        // the index sets are derived from `forms`
        self.forms == other.forms
    }
}

impl WordList {
    /// Builds a word list, collapsing repeated (language, meaning, segments) triples.
    pub fn from_forms(forms: impl IntoIterator<Item = WordForm>) -> Result<Self> {
        let mut wl = WordList::default();
        let mut seen = HashSet::new();
        for form in forms {
            if !seen.insert(form.key()) {
                wl.duplicates_collapsed += 1;
                continue;
            }
            wl.push(form);
        }
        wl.check_gold()?;
        Ok(wl)
    }

    fn push(&mut self, form: WordForm) {
        let idx = self.forms.len();
        self.languages.insert(form.language.clone());
        self.meanings
            .entry(form.meaning.clone())
            .or_default()
            .push(idx);
        self.forms.push(form);
    }

    fn check_gold(&self) -> Result<()> {
        for (meaning, idxs) in &self.meanings {
            let labelled = idxs
                .iter()
                .filter(|&&i| self.forms[i].gold_class.is_some())
                .count();
            if labelled != 0 && labelled != idxs.len() {
                return Err(Error::MixedGold {
                    meaning: meaning.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn forms(&self) -> &[WordForm] {
        &self.forms
    }

    pub fn meanings(&self) -> impl ExactSizeIterator<Item = &str> {
        self.meanings.keys().map(String::as_str)
    }

    pub fn languages(&self) -> impl ExactSizeIterator<Item = &str> {
        self.languages.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Number of repeated rows dropped while building the list.
    pub fn duplicates_collapsed(&self) -> usize {
        self.duplicates_collapsed
    }

    /// All forms of `meaning`, in file order.
    pub fn forms_for_meaning(&self, meaning: &str) -> Result<Vec<&WordForm>> {
        self.meanings
            .get(meaning)
            .map(|idxs| idxs.iter().map(|&i| &self.forms[i]).collect())
            .ok_or_else(|| Error::UnknownMeaning(meaning.to_string()))
    }

    /// True when the meaning's forms carry gold classes.
    pub fn is_evaluable(&self, meaning: &str) -> bool {
        self.meanings
            .get(meaning)
            .and_then(|idxs| idxs.first())
            .is_some_and(|&i| self.forms[i].gold_class.is_some())
    }

    /// Number of (language, meaning) cells holding more than one form.
    pub fn synonym_slots(&self) -> usize {
        let mut cells: HashMap<(&str, &str), usize> = HashMap::new();
        for f in &self.forms {
            *cells.entry((&f.language, &f.meaning)).or_default() += 1;
        }
        cells.values().filter(|&&n| n > 1).count()
    }

    /// Replaces gold classes with those of the matching forms in `gold`.
    /// Forms absent from `gold` lose their class.
    pub fn with_gold(&self, gold: &WordList) -> Result<WordList> {
        let classes: HashMap<FormKey, &Option<String>> = gold
            .forms
            .iter()
            .map(|f| (f.key(), &f.gold_class))
            .collect();
        let forms = self.forms.iter().map(|f| WordForm {
            gold_class: classes.get(&f.key()).and_then(|c| (*c).clone()),
            ..f.clone()
        });
        let mut wl = WordList::from_forms(forms)?;
        wl.duplicates_collapsed = self.duplicates_collapsed;
        Ok(wl)
    }
}

struct Header {
    width: usize,
    language: usize,
    concept: usize,
    transcription: usize,
    cognate_class: Option<usize>,
}

impl Header {
    fn parse(line: &str, columns: &ColumnMap, lineno: usize) -> Result<Self> {
        let names: Vec<&str> = line.split('\t').map(str::trim).collect();
        let find = |name: &str| names.iter().position(|n| *n == name);
        let require = |name: &str| {
            find(name).ok_or_else(|| Error::Syntax {
                line: lineno,
                message: format!("header lacks column {name:?}"),
            })
        };
        Ok(Self {
            width: names.len(),
            language: require(&columns.language)?,
            concept: require(&columns.concept)?,
            transcription: require(&columns.transcription)?,
            cognate_class: find(&columns.cognate_class),
        })
    }
}

fn segments_of(raw: &str, config: &ParseConfig, line: usize) -> Result<Vec<Segment>> {
    let mut out = Vec::with_capacity(raw.len());
    for c in raw.chars() {
        if config.alphabet.contains(c) {
            out.push(config.alphabet.segment(c)?);
        } else if config.modifiers == ModifierPolicy::Strip && ASJP_MODIFIERS.contains(&c) {
            continue;
        } else {
            return Err(Error::InvalidSymbol {
                symbol: c,
                line: Some(line),
            });
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyTranscription { line });
    }
    Ok(out)
}

/// Reads a TSV word list.
pub fn parse_wordlist<R: Read>(source: R, config: &ParseConfig) -> Result<WordList> {
    let reader = BufReader::new(source);
    let mut header: Option<Header> = None;
    let mut forms = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Syntax {
                line: lineno,
                message: "input is not valid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let Some(h) = &header else {
            header = Some(Header::parse(line, &config.columns, lineno)?);
            continue;
        };

        let fields: Vec<&str> = line.split('\t').collect();
        let class_is_last = h.cognate_class == Some(h.width - 1);
        let omitted_class = class_is_last && fields.len() + 1 == h.width;
        if fields.len() != h.width && !omitted_class {
            return Err(Error::MalformedRow {
                line: lineno,
                expected: h.width,
                found: fields.len(),
            });
        }

        let raw = fields[h.transcription].trim();
        let segments = segments_of(raw, config, lineno)?;
        let gold_class = h
            .cognate_class
            .and_then(|c| fields.get(c))
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        forms.push(WordForm {
            language: fields[h.language].trim().to_string(),
            meaning: fields[h.concept].trim().to_string(),
            segments,
            gold_class,
        });
    }

    WordList::from_forms(forms)
}

/// Writes `wl` in the format read by [`parse_wordlist`] with default columns.
pub fn write_wordlist<W: Write>(wl: &WordList, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "language\tconcept\ttranscription\tcognate_class")?;
    for f in &wl.forms {
        writeln!(
            sink,
            "{}\t{}\t{}\t{}",
            f.language,
            f.meaning,
            f.transcription(),
            f.gold_class.as_deref().unwrap_or("")
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE_WORDS: &str = "language\tconcept\ttranscription\tcognate_class\n\
        English\tALL\tol\t1\n\
        German\tALL\tal3\t1\n\
        French\tALL\ttu\t2\n\
        Spanish\tALL\tto8o\t2\n\
        Swedish\tALL\tala\t1\n\
        English\tAND\tEnd\t\n\
        German\tAND\tunt\t\n";

    fn parse(s: &str) -> Result<WordList> {
        parse_wordlist(s.as_bytes(), &ParseConfig::default())
    }

    #[test]
    fn two_rows_one_meaning() {
        let wl = parse(
            "language\tconcept\ttranscription\tcognate_class\n\
             English\tALL\tol\tc1\nGerman\tALL\tal3\tc1\n",
        )
        .unwrap();
        assert_eq!(wl.len(), 2);
        assert_eq!(wl.meanings().len(), 1);
        assert_eq!(wl.languages().len(), 2);
    }

    #[test]
    fn header_only_is_empty() {
        let wl = parse("language\tconcept\ttranscription\tcognate_class\n").unwrap();
        assert!(wl.is_empty());
        assert_eq!(wl.meanings().len(), 0);
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn out_of_alphabet_symbol() {
        let err = parse("language\tconcept\ttranscription\nA\tX\tta9\n").unwrap_err();
        match err {
            Error::InvalidSymbol {
                symbol: '9',
                line: Some(2),
            } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_column_count() {
        let err = parse("language\tconcept\ttranscription\tcognate_class\nA\tX\n").unwrap_err();
        assert!(matches!(
            err,
            Error::MalformedRow {
                line: 2,
                expected: 4,
                found: 2
            }
        ));
        // a missing trailing class column is tolerated
        let wl = parse("language\tconcept\ttranscription\tcognate_class\nA\tX\tta\n").unwrap();
        assert_eq!(wl.forms()[0].gold_class, None);
    }

    #[test]
    fn empty_transcription() {
        let err = parse("language\tconcept\ttranscription\nA\tX\t\n").unwrap_err();
        assert!(matches!(err, Error::EmptyTranscription { line: 2 }));
        // nothing left after stripping modifiers
        let err = parse("language\tconcept\ttranscription\nA\tX\t~$\n").unwrap_err();
        assert!(matches!(err, Error::EmptyTranscription { line: 2 }));
    }

    #[test]
    fn modifiers_strip_or_reject() {
        let src = "language\tconcept\ttranscription\nA\tX\tt\"ak~\n";
        let wl = parse(src).unwrap();
        assert_eq!(wl.forms()[0].transcription(), "tak");
        let strict = ParseConfig {
            modifiers: ModifierPolicy::Strict,
            ..Default::default()
        };
        let err = parse_wordlist(src.as_bytes(), &strict).unwrap_err();
        assert!(matches!(err, Error::InvalidSymbol { symbol: '"', .. }));
    }

    #[test]
    fn missing_header_column() {
        let err = parse("language\tmeaning\ttranscription\nA\tX\tta\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn custom_columns() {
        let config = ParseConfig {
            columns: ColumnMap {
                language: "doculect".into(),
                concept: "gloss".into(),
                transcription: "asjp".into(),
                cognate_class: "cogid".into(),
            },
            ..Default::default()
        };
        let wl = parse_wordlist(
            "gloss\tasjp\tdoculect\nALL\tol\tEnglish\n".as_bytes(),
            &config,
        )
        .unwrap();
        assert_eq!(wl.forms()[0].language, "English");
        assert_eq!(wl.forms()[0].transcription(), "ol");
    }

    #[test]
    fn meaning_all_in_row_order() {
        let wl = parse(FIVE_WORDS).unwrap();
        let words: Vec<String> = wl
            .forms_for_meaning("ALL")
            .unwrap()
            .iter()
            .map(|f| f.transcription())
            .collect();
        assert_eq!(words, ["ol", "al3", "tu", "to8o", "ala"]);
        assert!(wl.is_evaluable("ALL"));
        assert!(!wl.is_evaluable("AND"));
    }

    #[test]
    fn single_form_meaning_and_unknown_meaning() {
        let wl = parse("language\tconcept\ttranscription\nA\tX\tta\n").unwrap();
        assert_eq!(wl.forms_for_meaning("X").unwrap().len(), 1);
        assert!(matches!(
            wl.forms_for_meaning("XYZ"),
            Err(Error::UnknownMeaning(m)) if m == "XYZ"
        ));
    }

    #[test]
    fn duplicates_collapse_synonyms_kept() {
        let wl = parse(
            "language\tconcept\ttranscription\n\
             A\tX\tta\nA\tX\tta\nA\tX\tto\n",
        )
        .unwrap();
        assert_eq!(wl.len(), 2);
        assert_eq!(wl.duplicates_collapsed(), 1);
        assert_eq!(wl.synonym_slots(), 1);
    }

    #[test]
    fn mixed_gold_rejected() {
        let err = parse(
            "language\tconcept\ttranscription\tcognate_class\n\
             A\tX\tta\t1\nB\tX\tto\t\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::MixedGold { meaning } if meaning == "X"));
    }

    #[test]
    fn gold_from_separate_list() {
        let plain = parse("language\tconcept\ttranscription\nA\tX\tta\nB\tX\tto\n").unwrap();
        let gold = parse(
            "language\tconcept\ttranscription\tcognate_class\n\
             B\tX\tto\tk\nA\tX\tta\tk\n",
        )
        .unwrap();
        let wl = plain.with_gold(&gold).unwrap();
        assert!(wl.is_evaluable("X"));
        assert_eq!(wl.forms()[1].gold_class.as_deref(), Some("k"));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let wl = parse(FIVE_WORDS).unwrap();
        let mut buf = Vec::new();
        write_wordlist(&wl, &mut buf).unwrap();
        assert_eq!(parse(std::str::from_utf8(&buf).unwrap()).unwrap(), wl);
    }
}
