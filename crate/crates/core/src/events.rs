//! Event recognition (does the headline carry an event verb?) and event
//! classification (which class does it belong to?).

use crate::ingest::{TokenKind, TokenSequence};
use crate::lexicon::{lemmatize, Lexicon};
use crate::model::Classification;

/// Lemmas that are as often nouns as verbs in headlines.
const HOMOGRAPHS: &[&str] = &[
    "report", "show", "play", "box", "fight", "debate", "battle", "dispatch", "quote", "state", "murder",
    "slaughter", "massacre", "execute", "read", "visit", "meet",
];

const DETERMINERS: &[&str] = &[
    "the", "a", "an", "this", "that", "these", "those", "his", "her", "its", "their", "our", "my", "your",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerbForm {
    Finite,
    /// Directly preceded by `to`.
    Infinitive,
    /// `-ing` or noun use, only admitted for `noun_ok` lemmas.
    Nominal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub token: usize,
    pub surface: String,
    pub lemma: String,
    pub classification: Classification,
    pub form: VerbForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventMention {
    pub head: usize,
    pub surface: String,
    pub lemma: String,
    /// Every lexicon hit in token order, including the head.
    pub candidates: Vec<Candidate>,
}

impl EventMention {
    pub fn head_candidate(&self) -> &Candidate {
        self.candidates.iter().find(|c| c.token == self.head).expect("head is a candidate")
    }

    pub fn head_form(&self) -> VerbForm {
        self.head_candidate().form
    }

    pub fn alternates(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(move |c| c.token != self.head)
    }
}

fn previous_word(tok: &TokenSequence, idx: usize) -> Option<&crate::ingest::Token> {
    tok.tokens[..idx].iter().rev().find(|t| t.kind != TokenKind::Punct || t.quote.is_some())
}

/// A homograph reads as a noun when a determiner precedes it (possibly with a
/// capitalized modifier in between), or when it is itself capitalized.
fn reads_as_noun(tok: &TokenSequence, idx: usize) -> bool {
    let token = &tok.tokens[idx];
    if token.is_capitalized() {
        return true;
    }
    let Some(prev) = idx.checked_sub(1).map(|i| &tok.tokens[i]) else {
        return false;
    };
    if DETERMINERS.contains(&prev.lower().as_str()) {
        return true;
    }
    prev.is_capitalized()
        && idx >= 2
        && DETERMINERS.contains(&tok.tokens[idx - 2].lower().as_str())
}

/// Finds the event verb heading the headline.
///
/// Word tokens outside quoted spans are lemmatized and looked up. The head is
/// the leftmost finite hit; verbs right after `to` only head the event when no
/// finite hit exists (`"Pope to meet ..."`), and `noun_ok` nominal forms come
/// last.
pub fn recognize_event(tok: &TokenSequence, lex: &Lexicon) -> Option<EventMention> {
    let mut candidates = Vec::new();
    for (idx, token) in tok.tokens.iter().enumerate() {
        if token.kind != TokenKind::Word || token.quote.is_some() {
            continue;
        }
        let lemma = lemmatize(&token.surface);
        let Some(entry) = lex.get(&lemma) else { continue };
        let lower = token.lower();
        let after_to = previous_word(tok, idx).is_some_and(|p| p.lower() == "to");
        let form = if lower.ends_with("ing") && lower != lemma {
            if !entry.noun_ok {
                continue;
            }
            VerbForm::Nominal
        } else if after_to {
            VerbForm::Infinitive
        } else if HOMOGRAPHS.contains(&lemma.as_str()) && reads_as_noun(tok, idx) {
            if !entry.noun_ok {
                continue;
            }
            VerbForm::Nominal
        } else {
            VerbForm::Finite
        };
        candidates.push(Candidate {
            token: idx,
            surface: token.surface.clone(),
            lemma,
            classification: entry.classification.clone(),
            form,
        });
    }
    let head = [VerbForm::Finite, VerbForm::Infinitive, VerbForm::Nominal]
        .iter()
        .find_map(|form| candidates.iter().find(|c| c.form == *form))?
        .clone();
    Some(EventMention { head: head.token, surface: head.surface, lemma: head.lemma, candidates })
}

/// Pluggable classification stage; the default reads the head verb's class.
pub trait EventClassifier: Send + Sync {
    fn classify(&self, mention: &EventMention) -> Classification;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HeadVerbClassifier;

impl EventClassifier for HeadVerbClassifier {
    fn classify(&self, mention: &EventMention) -> Classification {
        mention.head_candidate().classification.clone()
    }
}

pub fn classify_event(mention: &EventMention) -> Classification {
    HeadVerbClassifier.classify(mention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::normalize;
    use crate::model::EventClass;

    fn recognize(text: &str) -> Option<EventMention> {
        recognize_event(&normalize(text), &Lexicon::builtin())
    }

    #[test]
    fn running_example_head_is_meets() {
        let m = recognize("Instagram CEO meets with @Pontifex to discuss \"the power of images to unite people\"").unwrap();
        assert_eq!(m.surface, "meets");
        assert_eq!(m.lemma, "meet");
        assert_eq!(classify_event(&m).class(), &EventClass::Meet);
        // "discuss" is not in the lexicon and the quote is opaque
        assert_eq!(m.candidates.len(), 1);
    }

    #[test]
    fn infinitive_never_outranks_finite() {
        let m = recognize("Obama and Justin Trudeau announce efforts to fight climate change").unwrap();
        assert_eq!(m.surface, "announce");
        assert_eq!(m.candidates.len(), 2);
        assert_eq!(m.candidates[1].lemma, "fight");
        assert_eq!(m.candidates[1].form, VerbForm::Infinitive);
        assert_eq!(classify_event(&m).class(), &EventClass::Communication);
    }

    #[test]
    fn infinitive_heads_when_alone() {
        let m = recognize("Pope to meet leader of Russian Orthodox Church for first time in nearly").unwrap();
        assert_eq!(m.surface, "meet");
        assert_eq!(m.head_form(), VerbForm::Infinitive);
    }

    #[test]
    fn visits_is_meet() {
        let m = recognize("Pope Francis visits Cuba and Mexico").unwrap();
        assert_eq!(m.surface, "visits");
        assert_eq!(classify_event(&m).class(), &EventClass::Meet);
    }

    #[test]
    fn no_lexicon_verb() {
        assert!(recognize("Rainbow over Berlin this morning").is_none());
    }

    #[test]
    fn quoted_verbs_are_opaque() {
        assert!(recognize("Senator: \"we will fight\"").is_none());
    }

    #[test]
    fn capitalized_homograph_is_a_noun() {
        let m = recognize("State elections were \"difficult day,\" German Chancellor Angela Merkel says").unwrap();
        assert_eq!(m.surface, "says");
        assert_eq!(classify_event(&m).subgroup(), Some("SayVerbs"));
    }

    #[test]
    fn determiner_blocks_homograph() {
        assert!(recognize("The report on Syria").is_none());
        assert!(recognize("a BBC report on Syria").is_none());
        let m = recognize("Officials report fighting in Aleppo").unwrap();
        assert_eq!(m.lemma, "report");
    }

    #[test]
    fn nominal_forms_need_noun_ok() {
        assert!(recognize("G8 meeting in Berlin").is_none());
        let lex = crate::lexicon::load_lexicon("meet\tMeet\t\tnoun_ok\n".as_bytes()).unwrap();
        let m = recognize_event(&normalize("G8 meeting in Berlin"), &lex).unwrap();
        assert_eq!(m.head_form(), VerbForm::Nominal);
    }

    #[test]
    fn passive_head() {
        let m = recognize("2 air force pilots from United Arab Emirates  killed when warplane crashed over Yemen").unwrap();
        assert_eq!(m.surface, "killed");
        assert_eq!(classify_event(&m).class(), &EventClass::Murder);
    }
}
