use std::collections::BTreeMap;

use super::ntriples::render_term;
use super::IriPolicy;
use crate::model::{vocab, Iri, Term, TripleSet};

const PREFIXES: &[(&str, &str)] = &[
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("dbr", "http://dbpedia.org/resource/"),
];

fn simple_local(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
}

struct Prefixer {
    prefixes: Vec<(String, String)>,
}

impl Prefixer {
    fn iri(&self, iri: &Iri) -> String {
        if iri.as_str() == vocab::RDF_TYPE {
            return "a".to_string();
        }
        self.name(iri)
    }

    fn name(&self, iri: &Iri) -> String {
        for (p, ns) in &self.prefixes {
            if let Some(local) = iri.as_str().strip_prefix(ns.as_str()) {
                if simple_local(local) {
                    return format!("{p}:{local}");
                }
            }
        }
        format!("<{iri}>")
    }

    fn term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.name(iri),
            Term::Literal(lit) => match &lit.datatype {
                Some(dt) if lit.lang.is_none() => {
                    let plain = render_term(&Term::Literal(crate::model::Literal::plain(lit.lexical.clone())));
                    format!("{plain}^^{}", self.name(dt))
                }
                _ => render_term(term),
            },
        }
    }
}

/// Human-oriented view: prefixed names, one block per subject. Subjects and
/// predicates appear in sorted order, so output is deterministic.
pub fn serialize_turtle(graph: &TripleSet, policy: &IriPolicy) -> String {
    let mut prefixes = vec![(String::new(), policy.base.clone())];
    prefixes.extend(PREFIXES.iter().map(|(p, ns)| (p.to_string(), ns.to_string())));
    let px = Prefixer { prefixes };

    let mut by_subject: BTreeMap<&Iri, BTreeMap<&Iri, Vec<&Term>>> = BTreeMap::new();
    for t in graph.iter() {
        by_subject.entry(&t.subject).or_default().entry(&t.predicate).or_default().push(&t.object);
    }
    let mut out = String::new();
    for (p, ns) in &px.prefixes {
        out.push_str(&format!("@prefix {p}: <{ns}> .\n"));
    }
    for (subject, preds) in by_subject {
        out.push('\n');
        out.push_str(&px.name(subject));
        let n = preds.len();
        for (i, (pred, mut objects)) in preds.into_iter().enumerate() {
            objects.sort();
            let objs: Vec<String> = objects.iter().map(|o| px.term(o)).collect();
            out.push_str(&format!("\n    {} {}", px.iri(pred), objs.join(", ")));
            out.push_str(if i + 1 == n { " .\n" } else { " ;" });
        }
    }
    out
}
