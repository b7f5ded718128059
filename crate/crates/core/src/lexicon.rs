//! Verb lexicon mapping lemmas to event classes, and a small rule-based
//! lemmatizer for headline verbs.
//!
//! The file format is UTF-8, one entry per line:
//!
//! ```text
//! lemma<TAB>class[<TAB>subgroup][<TAB>flags]
//! ```
//!
//! Lines starting with `#` are comments; a `# version: <v>` comment sets the
//! lexicon version. The only flag is `noun_ok`, which lets `-ing`/noun forms of
//! the lemma signal an event when no finite verb does.

use std::collections::BTreeMap;
use std::io::Read;

use crate::model::{Classification, FrameRegistry, ModelError};

/// The shipped default lexicon.
pub const DEFAULT_LEXICON: &str = include_str!("../data/cevo_min.tsv");

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: lemma `{lemma}` already maps to {existing}, cannot also map to {new}")]
    Conflict { line: usize, lemma: String, existing: String, new: String },
    #[error("cannot read lexicon: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub classification: Classification,
    pub noun_ok: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
    version: String,
}

impl Lexicon {
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON, &FrameRegistry::default()).expect("shipped lexicon is valid")
    }

    pub fn parse(text: &str, registry: &FrameRegistry) -> Result<Self, LexiconError> {
        let mut lex = Lexicon { entries: BTreeMap::new(), version: "unversioned".to_string() };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(v) = comment.trim().strip_prefix("version:") {
                    lex.version = v.trim().to_string();
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            if !(2..=4).contains(&fields.len()) {
                return Err(LexiconError::Malformed {
                    line,
                    message: format!("expected 2 to 4 tab-separated fields, found {}", fields.len()),
                });
            }
            let lemma = fields[0].to_lowercase();
            if lemma.is_empty() || lemma.contains(char::is_whitespace) {
                return Err(LexiconError::Malformed { line, message: format!("bad lemma `{}`", fields[0]) });
            }
            let class = registry.class_named(fields[1]).ok_or_else(|| LexiconError::Malformed {
                line,
                message: format!("unknown event class `{}`", fields[1]),
            })?;
            let subgroup = fields.get(2).filter(|s| !s.is_empty()).map(|s| s.to_string());
            let classification = Classification::new(class, subgroup)
                .map_err(|e: ModelError| LexiconError::Malformed { line, message: e.to_string() })?;
            let noun_ok = match fields.get(3).copied() {
                None | Some("") => false,
                Some("noun_ok") => true,
                Some(other) => {
                    return Err(LexiconError::Malformed { line, message: format!("unknown flag `{other}`") })
                }
            };
            lex.insert_at(line, lemma, LexEntry { classification, noun_ok })?;
        }
        Ok(lex)
    }

    fn insert_at(&mut self, line: usize, lemma: String, entry: LexEntry) -> Result<(), LexiconError> {
        if let Some(existing) = self.entries.get(&lemma) {
            if existing.classification != entry.classification {
                return Err(LexiconError::Conflict {
                    line,
                    lemma,
                    existing: existing.classification.to_string(),
                    new: entry.classification.to_string(),
                });
            }
            // same class repeated: keep the most permissive flag
            let noun_ok = existing.noun_ok || entry.noun_ok;
            self.entries.get_mut(&lemma).expect("present").noun_ok = noun_ok;
            return Ok(());
        }
        self.entries.insert(lemma, entry);
        Ok(())
    }

    pub fn get(&self, lemma: &str) -> Option<&LexEntry> {
        self.entries.get(lemma)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Reads a lexicon from any byte source, resolving class names against the
/// built-in frames.
pub fn load_lexicon(mut source: impl Read) -> Result<Lexicon, LexiconError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    Lexicon::parse(&text, &FrameRegistry::default())
}

pub fn classify_verb(lemma: &str, lex: &Lexicon) -> Option<Classification> {
    lex.get(lemma).map(|e| e.classification.clone())
}

const IRREGULAR: &[(&str, &str)] = &[
    ("met", "meet"),
    ("said", "say"),
    ("told", "tell"),
    ("killed", "kill"),
    ("fought", "fight"),
    ("taught", "teach"),
    ("wrote", "write"),
    ("written", "write"),
    ("shown", "show"),
    ("slew", "slay"),
    ("slain", "slay"),
    ("cited", "cite"),
    ("cites", "cite"),
    ("citing", "cite"),
    ("agreed", "agree"),
    ("was", "be"),
    ("were", "be"),
    ("is", "be"),
    ("are", "be"),
    ("been", "be"),
    ("has", "have"),
    ("had", "have"),
    ("did", "do"),
    ("does", "do"),
    ("done", "do"),
    ("made", "make"),
    ("went", "go"),
    ("gone", "go"),
    ("saw", "see"),
    ("seen", "see"),
    ("ran", "run"),
    ("came", "come"),
    ("took", "take"),
    ("taken", "take"),
    ("gave", "give"),
    ("given", "give"),
    ("spoke", "speak"),
    ("spoken", "speak"),
    ("led", "lead"),
    ("left", "leave"),
    ("held", "hold"),
    ("won", "win"),
    ("lost", "lose"),
    ("brought", "bring"),
    ("thought", "think"),
    ("sought", "seek"),
];

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Whether the consonant ending `stem` is preceded by exactly one vowel
/// (treating the `u` of `qu` as a consonant).
fn single_vowel_before_last(stem: &[u8]) -> bool {
    let n = stem.len();
    if n < 2 || !is_vowel(stem[n - 2]) {
        return false;
    }
    if n >= 3 && is_vowel(stem[n - 3]) {
        return n >= 4 && stem[n - 3] == b'u' && stem[n - 4] == b'q';
    }
    true
}

/// Heuristic for restoring a silent `e` after stripping `-ed`/`-ing`.
fn needs_final_e(stem: &[u8]) -> bool {
    let n = stem.len();
    if n < 2 {
        return false;
    }
    let last = stem[n - 1];
    let prev = stem[n - 2];
    match last {
        b'c' | b'v' | b'z' => true,
        b's' => prev != b's' && prev != b'u',
        b'g' => prev != b'n' && prev != b'g',
        b'r' => prev != b'e' && (prev != b'r') && (!is_vowel(prev) || single_vowel_before_last(stem)),
        b't' => matches!(prev, b'a' | b'o' | b'u') && single_vowel_before_last(stem),
        b'k' | b'b' | b'm' | b'd' => prev != b'e' && single_vowel_before_last(stem),
        b'n' => prev == b'i' && single_vowel_before_last(stem),
        b'l' => prev != b'e' && prev != b'l' && (!is_vowel(prev) || single_vowel_before_last(stem)),
        _ => false,
    }
}

fn undouble(stem: &str) -> Option<&str> {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && matches!(b[n - 1], b'b' | b'g' | b'm' | b'n' | b'p' | b'r' | b't') {
        Some(&stem[..n - 1])
    } else {
        None
    }
}

fn restore(stem: &str) -> String {
    if let Some(s) = undouble(stem) {
        return s.to_string();
    }
    if needs_final_e(stem.as_bytes()) {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

fn lemmatize_once(word: &str) -> String {
    if let Some((_, lemma)) = IRREGULAR.iter().find(|(form, _)| *form == word) {
        return lemma.to_string();
    }
    if !word.is_ascii() {
        return word.to_string();
    }
    let n = word.len();
    if n > 4 && word.ends_with("ies") {
        return format!("{}y", &word[..n - 3]);
    }
    if n > 4 && word.ends_with("ied") {
        return format!("{}y", &word[..n - 3]);
    }
    if n > 3 && word.ends_with("es") {
        let stem = &word[..n - 2];
        if ["s", "x", "z", "ch", "sh"].iter().any(|s| stem.ends_with(s)) {
            return stem.to_string();
        }
    }
    if n > 3 && word.ends_with('s') && !["ss", "us", "is", "'s"].iter().any(|s| word.ends_with(s)) {
        return word[..n - 1].to_string();
    }
    if n > 4 && word.ends_with("ed") && !word.ends_with("eed") {
        return restore(&word[..n - 2]);
    }
    if n > 5 && word.ends_with("ing") {
        let stem = &word[..n - 3];
        if stem.len() >= 3 && stem.bytes().any(|c| is_vowel(c) || c == b'y') {
            return restore(stem);
        }
    }
    word.to_string()
}

/// Lowercase lemma of a headline token.
///
/// Rules are applied until a fixed point is reached, so the result is always
/// stable under a second application.
pub fn lemmatize(token: &str) -> String {
    let mut current: String = token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
        .replace('’', "'");
    if current.is_empty() {
        return token.to_lowercase();
    }
    // every suffix rule shortens the word, so this terminates
    loop {
        let next = lemmatize_once(&current);
        if next == current {
            return current;
        }
        if IRREGULAR.iter().any(|(form, _)| *form == current) {
            return next;
        }
        current = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::EventClass;

    #[test]
    fn table_inflections() {
        for (form, lemma) in [
            ("meets", "meet"),
            ("tells", "tell"),
            ("said", "say"),
            ("says", "say"),
            ("kills", "kill"),
            ("killed", "kill"),
            ("visits", "visit"),
            ("announce", "announce"),
            ("met", "meet"),
            ("told", "tell"),
        ] {
            assert_eq!(lemmatize(form), lemma, "{form}");
        }
    }

    #[test]
    fn suffix_rules() {
        for (form, lemma) in [
            ("announced", "announce"),
            ("announcing", "announce"),
            ("debated", "debate"),
            ("debates", "debate"),
            ("stated", "state"),
            ("quoted", "quote"),
            ("executed", "execute"),
            ("massacred", "massacre"),
            ("murdered", "murder"),
            ("visited", "visit"),
            ("reported", "report"),
            ("admitted", "admit"),
            ("alleged", "allege"),
            ("proposed", "propose"),
            ("declared", "declare"),
            ("teaches", "teach"),
            ("boxes", "box"),
            ("played", "play"),
            ("meeting", "meet"),
            ("killing", "kill"),
            ("explained", "explain"),
            ("liquidated", "liquidate"),
            ("dispatched", "dispatch"),
            ("running", "run"),
            ("cries", "cry"),
            ("discuss", "discuss"),
            ("Storms", "storm"),
        ] {
            assert_eq!(lemmatize(form), lemma, "{form}");
        }
    }

    #[test]
    fn irregular_targets_are_fixed_points() {
        for (_, lemma) in IRREGULAR {
            assert_eq!(lemmatize(lemma), *lemma);
        }
    }

    #[test]
    fn loads_rows_and_flags() {
        let lex = load_lexicon("meet\tMeet\nsay\tCommunication\tSayVerbs\nmeeting\tMeet\t\tnoun_ok\n".as_bytes()).unwrap();
        assert_eq!(lex.len(), 3);
        assert_eq!(classify_verb("meet", &lex), Some(Classification::of(EventClass::Meet)));
        assert!(lex.get("meeting").unwrap().noun_ok);
        assert!(!lex.get("meet").unwrap().noun_ok);
    }

    #[test]
    fn conflicting_rows_are_rejected() {
        let err = load_lexicon("say\tCommunication\tSayVerbs\nsay\tMurder\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Conflict { line: 2, .. }), "{err}");
    }

    #[test]
    fn repeated_identical_row_is_fine() {
        let lex = load_lexicon("teach\tCommunication\tTellVerbs\nteach\tCommunication\tTellVerbs\n".as_bytes()).unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn empty_source_is_empty_lexicon() {
        let lex = load_lexicon("".as_bytes()).unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn malformed_rows_report_line() {
        let err = load_lexicon("# c\nmeet\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 2, .. }));
        let err = load_lexicon("dance\tDance\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("unknown event class"));
        let err = load_lexicon("kill\tMurder\tSayVerbs\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::Malformed { line: 1, .. }));
    }

    #[test]
    fn lemmas_are_lowercased() {
        let lex = load_lexicon("Kill\tMurder\n".as_bytes()).unwrap();
        assert!(lex.get("kill").is_some());
    }

    #[test]
    fn version_comment() {
        assert_eq!(Lexicon::builtin().version(), "cevo-min-1");
    }

    #[test]
    fn classify_examples() {
        let lex = Lexicon::builtin();
        assert_eq!(classify_verb("kill", &lex), Some(Classification::of(EventClass::Murder)));
        let announce = classify_verb("announce", &lex).unwrap();
        assert_eq!(announce.class(), &EventClass::Communication);
        assert_eq!(announce.subgroup(), Some("SayVerbs"));
        assert_eq!(classify_verb("jump", &lex), None);
    }
}
