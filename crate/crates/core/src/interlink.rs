//! Links events across headlines: `owl:sameAs` for reports of one event by
//! different publishers, `skos:related` for events sharing participants over
//! a longer horizon.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::Deserialize;

use crate::model::{roles, vocab, Iri, Term, Triple, TripleSet};
use crate::triplify::IriPolicy;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    pub same_window_hours: f64,
    pub same_jaccard: f64,
    pub related_horizon_days: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig { same_window_hours: 48.0, same_jaccard: 0.5, related_horizon_days: 7.0 }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterlinkError {
    #[error("event {0} has no source")]
    MissingSource(String),
    #[error("event {0} has no extraction date")]
    MissingDate(String),
    #[error("event {iri}: bad date literal `{value}`")]
    BadDate { iri: String, value: String },
    #[error("invalid link configuration: {0}")]
    Config(String),
}

impl LinkConfig {
    pub fn validate(&self) -> Result<(), InterlinkError> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(self.same_window_hours) || !ok(self.related_horizon_days) {
            return Err(InterlinkError::Config("windows must be finite and non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.same_jaccard) {
            return Err(InterlinkError::Config("jaccard threshold must be within [0, 1]".into()));
        }
        Ok(())
    }

    fn window_secs(&self) -> f64 {
        self.same_window_hours * 3600.0
    }

    fn horizon_secs(&self) -> f64 {
        self.related_horizon_days * 86_400.0
    }
}

/// What interlinking needs to know about one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventIndexEntry {
    pub iri: Iri,
    pub class: Iri,
    pub publisher: Iri,
    pub at: DateTime<Utc>,
    pub participants: BTreeSet<Iri>,
}

pub fn jaccard(a: &BTreeSet<Iri>, b: &BTreeSet<Iri>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

fn delta_secs(a: &EventIndexEntry, b: &EventIndexEntry) -> f64 {
    (b.at - a.at).num_seconds() as f64
}

pub fn is_same_event(a: &EventIndexEntry, b: &EventIndexEntry, config: &LinkConfig) -> bool {
    a.iri != b.iri
        && a.class == b.class
        && a.publisher != b.publisher
        && delta_secs(a, b).abs() <= config.window_secs()
        && jaccard(&a.participants, &b.participants) >= config.same_jaccard
}

pub fn is_related_event(a: &EventIndexEntry, b: &EventIndexEntry, config: &LinkConfig) -> bool {
    let dt = delta_secs(a, b).abs();
    a.iri != b.iri
        && dt > 0.0
        && dt <= config.horizon_secs()
        && !a.participants.is_disjoint(&b.participants)
        && !is_same_event(a, b, config)
}

fn parse_instant(iri: &Iri, lit: &crate::model::Literal) -> Result<DateTime<Utc>, InterlinkError> {
    let bad = || InterlinkError::BadDate { iri: iri.to_string(), value: lit.lexical.clone() };
    let v = lit.lexical.as_str();
    if let Ok(d) = NaiveDate::parse_from_str(v, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight").and_utc());
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(v) {
        return Ok(dt.with_timezone(&Utc));
    }
    NaiveDateTime::parse_from_str(v, "%Y-%m-%dT%H:%M:%S").map(|dt| dt.and_utc()).map_err(|_| bad())
}

/// Reads one entry per singleton property from an event graph.
///
/// The time is `atTime` when present, otherwise midnight of `extractedOn`.
/// Participants are the ends of the main singleton-property triple plus the
/// entity objects of the role properties, leaving out place, time, source and
/// literal nodes.
pub fn build_index(graph: &TripleSet, policy: &IriPolicy) -> Result<Vec<EventIndexEntry>, InterlinkError> {
    let sp_of = policy.singleton_property_of();
    let has_source = policy.has_source();
    let extracted_on = policy.extracted_on();
    let at_time = policy.role_property(roles::TIME);
    let at_place = policy.role_property(roles::LOCATION);
    let body = policy.body();
    let literal_nodes: BTreeSet<&Iri> = graph.with_predicate(body.as_str()).map(|t| &t.subject).collect();

    let mut events: BTreeMap<&Iri, &Iri> = BTreeMap::new();
    for t in graph.with_predicate(sp_of.as_str()) {
        if let Term::Iri(class) = &t.object {
            events.insert(&t.subject, class);
        }
    }
    let mut by_subject: HashMap<&Iri, Vec<&Triple>> = HashMap::new();
    let mut by_predicate: HashMap<&Iri, Vec<&Triple>> = HashMap::new();
    for t in graph.iter() {
        if events.contains_key(&t.subject) {
            by_subject.entry(&t.subject).or_default().push(t);
        }
        if events.contains_key(&t.predicate) {
            by_predicate.entry(&t.predicate).or_default().push(t);
        }
    }

    let mut out = Vec::with_capacity(events.len());
    for (&iri, &class) in &events {
        let props = by_subject.get(iri).map(Vec::as_slice).unwrap_or_default();
        let mut publisher = None;
        let mut date = None;
        let mut time = None;
        let mut participants = BTreeSet::new();
        for t in props {
            let p = &t.predicate;
            match &t.object {
                Term::Iri(o) if *p == has_source => publisher = Some(o.clone()),
                Term::Literal(l) if *p == extracted_on => date = Some(parse_instant(iri, l)?),
                Term::Literal(l) if *p == at_time => time = Some(parse_instant(iri, l)?),
                Term::Iri(o) if *p != sp_of && *p != at_place && *p != at_time && !literal_nodes.contains(o) => {
                    participants.insert(o.clone());
                }
                _ => {}
            }
        }
        for t in by_predicate.get(iri).map(Vec::as_slice).unwrap_or_default() {
            if !literal_nodes.contains(&t.subject) {
                participants.insert(t.subject.clone());
            }
            if let Term::Iri(o) = &t.object {
                if !literal_nodes.contains(o) {
                    participants.insert(o.clone());
                }
            }
        }
        out.push(EventIndexEntry {
            iri: iri.clone(),
            class: class.clone(),
            publisher: publisher.ok_or_else(|| InterlinkError::MissingSource(iri.to_string()))?,
            at: time.or(date).ok_or_else(|| InterlinkError::MissingDate(iri.to_string()))?,
            participants,
        });
    }
    Ok(out)
}

const WEEK_SECS: i64 = 7 * 86_400;

fn ordered(a: &Iri, b: &Iri) -> (Iri, Iri) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Same-event pairs, each as `(smaller IRI, larger IRI)`, sorted.
///
/// Events are bucketed by (class, week); a pair within the window can only
/// sit `ceil(window / week)` buckets apart, so only those are compared.
pub fn find_same_events(entries: &[EventIndexEntry], config: &LinkConfig) -> Vec<(Iri, Iri)> {
    let mut buckets: BTreeMap<(&Iri, i64), Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        buckets.entry((&e.class, e.at.timestamp().div_euclid(WEEK_SECS))).or_default().push(i);
    }
    let reach = (config.window_secs() / WEEK_SECS as f64).ceil() as i64;
    let mut out = BTreeSet::new();
    for (&(class, week), members) in &buckets {
        for w in week..=week.saturating_add(reach) {
            let Some(others) = buckets.get(&(class, w)) else { continue };
            for &i in members {
                for &j in others {
                    if (w != week || i < j) && is_same_event(&entries[i], &entries[j], config) {
                        out.insert(ordered(&entries[i].iri, &entries[j].iri));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Related pairs, each as `(earlier, later)`, sorted. Candidates come from a
/// participant index, scanned in time order up to the horizon.
pub fn find_related_events(entries: &[EventIndexEntry], config: &LinkConfig) -> Vec<(Iri, Iri)> {
    let mut postings: BTreeMap<&Iri, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        for p in &e.participants {
            postings.entry(p).or_default().push(i);
        }
    }
    let horizon = config.horizon_secs();
    let mut out = BTreeSet::new();
    for list in postings.values_mut() {
        list.sort_by_key(|&i| (entries[i].at, i));
        for (x, &i) in list.iter().enumerate() {
            for &j in &list[x + 1..] {
                if delta_secs(&entries[i], &entries[j]) > horizon {
                    break;
                }
                if is_related_event(&entries[i], &entries[j], config) {
                    let (a, b) = (&entries[i], &entries[j]);
                    let pair = if a.at <= b.at { (a.iri.clone(), b.iri.clone()) } else { (b.iri.clone(), a.iri.clone()) };
                    out.insert(pair);
                }
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Links {
    pub same: Vec<(Iri, Iri)>,
    pub related: Vec<(Iri, Iri)>,
}

impl Links {
    pub fn triples(&self) -> TripleSet {
        let same_as = Iri::new(vocab::OWL_SAME_AS).expect("constant");
        let related = Iri::new(vocab::SKOS_RELATED).expect("constant");
        let mut out = TripleSet::new();
        for (a, b) in &self.same {
            out.insert(Triple::new(a.clone(), same_as.clone(), b.clone()));
        }
        for (a, b) in &self.related {
            out.insert(Triple::new(a.clone(), related.clone(), b.clone()));
        }
        out
    }
}

pub fn interlink(entries: &[EventIndexEntry], config: &LinkConfig) -> Links {
    Links { same: find_same_events(entries, config), related: find_related_events(entries, config) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://x/{s}")).unwrap()
    }

    fn entry(id: &str, class: &str, publisher: &str, hours: i64, people: &[&str]) -> EventIndexEntry {
        EventIndexEntry {
            iri: iri(id),
            class: iri(class),
            publisher: iri(publisher),
            at: Utc.with_ymd_and_hms(2016, 3, 10, 0, 0, 0).unwrap() + chrono::Duration::hours(hours),
            participants: people.iter().map(|p| iri(p)).collect(),
        }
    }

    #[test]
    fn jaccard_of_empty_sets_is_zero() {
        assert_eq!(jaccard(&BTreeSet::new(), &BTreeSet::new()), 0.0);
    }

    #[test]
    fn same_event_needs_distinct_publishers() {
        let c = LinkConfig::default();
        let a = entry("a", "Meet", "BBC", 0, &["pope"]);
        let b = entry("b", "Meet", "NYT", 30, &["pope", "kirill"]);
        let c2 = entry("c", "Meet", "BBC", 1, &["pope"]);
        assert!(is_same_event(&a, &b, &c));
        assert!(!is_same_event(&a, &c2, &c));
        let links = interlink(&[a, b, c2], &c);
        assert_eq!(links.same, vec![(iri("a"), iri("b")), (iri("b"), iri("c"))]);
        assert_eq!(links.related, vec![(iri("a"), iri("c"))]);
    }

    #[test]
    fn related_respects_horizon_and_order() {
        let c = LinkConfig::default();
        let a = entry("z", "Meet", "BBC", 24 * 6, &["pope"]);
        let b = entry("y", "Murder", "BBC", 0, &["pope"]);
        let far = entry("x", "Meet", "BBC", 24 * 30, &["pope"]);
        let links = interlink(&[a, b, far], &c);
        assert_eq!(links.related, vec![(iri("y"), iri("z"))]);
        assert!(links.same.is_empty());
    }

    #[test]
    fn simultaneous_events_are_not_related() {
        let c = LinkConfig::default();
        let a = entry("a", "Meet", "BBC", 0, &["pope"]);
        let b = entry("b", "Murder", "BBC", 0, &["pope"]);
        assert!(interlink(&[a, b], &c).related.is_empty());
    }

    #[test]
    fn buckets_cover_long_windows() {
        let c = LinkConfig { same_window_hours: 24.0 * 20.0, ..LinkConfig::default() };
        let a = entry("a", "Meet", "BBC", 0, &["pope"]);
        let b = entry("b", "Meet", "NYT", 24 * 19, &["pope"]);
        assert_eq!(find_same_events(&[a, b], &c).len(), 1);
    }

    #[test]
    fn config_validation() {
        assert!(LinkConfig::default().validate().is_ok());
        assert!(LinkConfig { same_jaccard: 1.5, ..LinkConfig::default() }.validate().is_err());
        assert!(LinkConfig { same_window_hours: f64::NAN, ..LinkConfig::default() }.validate().is_err());
    }
}
