//! Flag-style filtering over an event graph.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::interlink::{build_index, InterlinkError};
use crate::model::{roles, Iri, Term, TripleSet};
use crate::triplify::IriPolicy;

/// Conjunctive filter; empty fields match everything. Publishers match any of
/// the given names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryFilter {
    pub publishers: Vec<String>,
    pub class: Option<String>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub location: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventRow {
    pub iri: Iri,
    pub class: Iri,
    pub publisher: Iri,
    pub date: NaiveDate,
    pub participants: Vec<Iri>,
    /// Location names: place local names (`_` read as space) or literal bodies.
    pub locations: Vec<String>,
}

impl EventRow {
    pub fn to_tsv(&self) -> String {
        let participants: Vec<&str> = self.participants.iter().map(Iri::as_str).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.iri,
            self.class.local_name(),
            self.publisher.local_name(),
            self.date.format("%Y-%m-%d"),
            participants.join(",")
        )
    }
}

fn norm(s: &str) -> String {
    s.replace('_', " ").split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn name_matches(iri: &Iri, wanted: &str) -> bool {
    iri.as_str() == wanted || norm(iri.local_name()) == norm(wanted)
}

impl QueryFilter {
    pub fn matches(&self, row: &EventRow) -> bool {
        (self.publishers.is_empty() || self.publishers.iter().any(|p| name_matches(&row.publisher, p)))
            && self.class.as_ref().is_none_or(|c| name_matches(&row.class, c))
            && self.from.is_none_or(|d| row.date >= d)
            && self.to.is_none_or(|d| row.date <= d)
            && self.location.as_ref().is_none_or(|l| row.locations.iter().any(|x| norm(x) == norm(l)))
    }
}

/// Every event in the graph as a row, sorted by IRI.
pub fn event_rows(graph: &TripleSet, policy: &IriPolicy) -> Result<Vec<EventRow>, InterlinkError> {
    let at_place = policy.role_property(roles::LOCATION);
    let body = policy.body();
    let bodies: BTreeMap<&Iri, &str> = graph
        .with_predicate(body.as_str())
        .filter_map(|t| t.object.as_literal().map(|l| (&t.subject, l.lexical.as_str())))
        .collect();
    let mut places: BTreeMap<&Iri, Vec<String>> = BTreeMap::new();
    for t in graph.with_predicate(at_place.as_str()) {
        let name = match &t.object {
            Term::Iri(o) => match bodies.get(o) {
                Some(b) => b.to_string(),
                None => o.local_name().replace('_', " "),
            },
            Term::Literal(l) => l.lexical.clone(),
        };
        places.entry(&t.subject).or_default().push(name);
    }
    let mut rows: Vec<EventRow> = build_index(graph, policy)?
        .into_iter()
        .map(|e| {
            let mut locations = places.get(&e.iri).cloned().unwrap_or_default();
            locations.sort();
            EventRow {
                date: e.at.date_naive(),
                participants: e.participants.into_iter().collect(),
                locations,
                iri: e.iri,
                class: e.class,
                publisher: e.publisher,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.iri.cmp(&b.iri));
    Ok(rows)
}

pub fn run_query(graph: &TripleSet, policy: &IriPolicy, filter: &QueryFilter) -> Result<Vec<EventRow>, InterlinkError> {
    Ok(event_rows(graph, policy)?.into_iter().filter(|r| filter.matches(r)).collect())
}
