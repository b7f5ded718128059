//! Event instances to singleton-property triples, and the N-Triples and
//! Turtle serializations of the result.

mod ntriples;
mod policy;
mod turtle;

pub use ntriples::{parse_ntriples, render_term, render_triple, serialize_ntriples, NtError};
pub use policy::{entity_slug, id_slug, IriPolicy};
pub use turtle::serialize_turtle;

use crate::model::{roles, vocab, EventClass, EventInstance, Filler, Iri, Literal, RoleFrame, Triple, TripleSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EmitError {
    #[error("record {0}: event has no role fillers")]
    NoRoles(String),
    #[error("record {record}: role `{role}` is not part of the {class} frame")]
    UnknownRole { record: String, role: String, class: String },
}

/// Roles read as the subject and object of the singleton property, in
/// preference order.
fn main_pair_roles(class: &EventClass) -> (&'static [&'static str], &'static [&'static str]) {
    match class {
        EventClass::Meet => (&[roles::PARTICIPANT], &[roles::PARTICIPANT]),
        EventClass::Communication => (&[roles::GIVER], &[roles::RECIPIENT, roles::MESSAGE]),
        EventClass::Murder => (&[roles::PERPETRATOR, roles::CAUSE], &[roles::VICTIM, roles::COUNT]),
        EventClass::Other(_) => (&[], &[]),
    }
}

/// Literal node body: quotes stripped, whitespace collapsed, trailing
/// separators dropped.
pub fn clean_body(text: &str) -> String {
    crate::entities::literal_text(text)
}

struct Emitter<'a> {
    instance: &'a EventInstance,
    frame: &'a RoleFrame,
    policy: &'a IriPolicy,
    out: TripleSet,
    nodes: usize,
}

impl Emitter<'_> {
    fn node_for(&mut self, role: &str, filler: &Filler) -> Iri {
        match filler {
            Filler::Entity(e) => e.iri.clone(),
            Filler::Literal(text) => {
                self.nodes += 1;
                let class = self.instance.class();
                let node = self.policy.node_iri(class, &self.instance.record_id, self.nodes);
                let ty = self.frame.role(role).map_or("Thing", |r| r.expected_type.as_str());
                self.out.insert(Triple::new(node.clone(), self.policy.rdf_type(), self.policy.type_iri(ty)));
                self.out.insert(Triple::new(node.clone(), self.policy.body(), Literal::plain(clean_body(text))));
                node
            }
        }
    }
}

/// Emits the triples for one event.
///
/// The singleton property `<Class>_<id>` is declared a singleton of the class
/// IRI and, when the frame yields both ends, links the main subject and
/// object directly. Every other filler hangs off the singleton property via
/// its role property, along with source and extraction date. Literal fillers
/// become typed nodes carrying a `body`.
pub fn emit_event_triples(
    instance: &EventInstance,
    frame: &RoleFrame,
    policy: &IriPolicy,
) -> Result<TripleSet, EmitError> {
    if instance.roles.is_empty() {
        return Err(EmitError::NoRoles(instance.record_id.clone()));
    }
    if let Some(bad) = instance.roles.iter().find(|r| !frame.has_role(&r.role)) {
        return Err(EmitError::UnknownRole {
            record: instance.record_id.clone(),
            role: bad.role.clone(),
            class: frame.class.name().to_string(),
        });
    }
    let sp = instance.instance_id.clone();
    let mut em = Emitter { instance, frame, policy, out: TripleSet::new(), nodes: 0 };
    em.out.insert(Triple::new(sp.clone(), policy.singleton_property_of(), policy.class_iri(instance.class())));

    let (subject_roles, object_roles) = main_pair_roles(instance.class());
    let pick = |roles: &[&str], skip: Option<usize>| {
        roles.iter().find_map(|role| {
            instance.roles.iter().enumerate().find(|(i, r)| r.role == *role && Some(*i) != skip).map(|(i, _)| i)
        })
    };
    let subject = pick(subject_roles, None);
    let object = pick(object_roles, subject);
    let mut used = Vec::new();
    if let (Some(s), Some(o)) = (subject, object) {
        let s_node = em.node_for(&instance.roles[s].role, &instance.roles[s].filler);
        let o_node = em.node_for(&instance.roles[o].role, &instance.roles[o].filler);
        em.out.insert(Triple::new(s_node, sp.clone(), o_node));
        used.extend([s, o]);
    }
    for (i, r) in instance.roles.iter().enumerate() {
        if used.contains(&i) {
            continue;
        }
        let node = em.node_for(&r.role, &r.filler);
        em.out.insert(Triple::new(sp.clone(), policy.role_property(&r.role), node));
    }

    let date = instance.provenance.extracted_on.format("%Y-%m-%d").to_string();
    em.out.insert(Triple::new(sp.clone(), policy.has_source(), policy.publisher_iri(&instance.provenance.publisher)));
    em.out.insert(Triple::new(
        sp.clone(),
        policy.extracted_on(),
        Literal::typed(date, Iri::new(vocab::XSD_DATE).expect("constant")),
    ));
    if let Some(time) = instance.time {
        em.out.insert(Triple::new(
            sp,
            policy.role_property(roles::TIME),
            Literal::typed(time.format("%Y-%m-%dT%H:%M:%SZ").to_string(), Iri::new(vocab::XSD_DATETIME).expect("constant")),
        ));
    }
    Ok(em.out)
}

/// Set union of per-event graphs.
pub fn deduplicate<'a>(graphs: impl IntoIterator<Item = &'a TripleSet>) -> TripleSet {
    let mut out = TripleSet::new();
    for g in graphs {
        out.extend(g.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{frame_for, Classification, EntityRef, Provenance, RoleFiller, Term, VerbMention};
    use chrono::NaiveDate;

    fn entity(iri: &str) -> Filler {
        Filler::Entity(EntityRef { iri: Iri::new(iri).unwrap(), label: "x".into(), entity_type: "Person".into() })
    }

    fn meet_instance() -> EventInstance {
        let policy = IriPolicy::default();
        EventInstance {
            instance_id: policy.instance_iri(&EventClass::Meet, "no2"),
            record_id: "no2".into(),
            classification: Classification::of(EventClass::Meet),
            mention: VerbMention { surface: "meets".into(), token: 2, span: 14..19 },
            time: None,
            roles: vec![
                RoleFiller { role: roles::PARTICIPANT.into(), filler: entity("http://x/Kevin_Systrom") },
                RoleFiller { role: roles::PARTICIPANT.into(), filler: entity("http://x/Pontifex") },
                RoleFiller { role: roles::TOPIC.into(), filler: Filler::Literal("to discuss \"the power\"".into()) },
            ],
            provenance: Provenance { publisher: "CNN".into(), extracted_on: NaiveDate::from_ymd_opt(2016, 2, 26).unwrap() },
            alternates: vec![],
            warnings: vec![],
        }
    }

    #[test]
    fn running_example_shape() {
        let policy = IriPolicy::default();
        let frame = frame_for(&EventClass::Meet).unwrap();
        let g = emit_event_triples(&meet_instance(), &frame, &policy).unwrap();
        assert_eq!(g.len(), 7);
        let sp = policy.instance_iri(&EventClass::Meet, "no2");
        assert!(g.contains(&Triple::new(
            Iri::new("http://x/Kevin_Systrom").unwrap(),
            sp.clone(),
            Iri::new("http://x/Pontifex").unwrap()
        )));
        let body_iri = policy.body();
        let body: Vec<&Triple> = g.with_predicate(body_iri.as_str()).collect();
        assert_eq!(body[0].object, Term::Literal(Literal::plain("to discuss the power")));
    }

    #[test]
    fn empty_event_is_an_error() {
        let mut inst = meet_instance();
        inst.roles.clear();
        let frame = frame_for(&EventClass::Meet).unwrap();
        assert_eq!(
            emit_event_triples(&inst, &frame, &IriPolicy::default()),
            Err(EmitError::NoRoles("no2".into()))
        );
    }

    #[test]
    fn single_participant_has_no_main_pair() {
        let mut inst = meet_instance();
        inst.roles.remove(1);
        inst.roles.remove(1);
        let policy = IriPolicy::default();
        let g = emit_event_triples(&inst, &frame_for(&EventClass::Meet).unwrap(), &policy).unwrap();
        let participant = policy.role_property(roles::PARTICIPANT);
        assert_eq!(g.with_predicate(participant.as_str()).count(), 1);
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn deduplicate_is_set_union() {
        let policy = IriPolicy::default();
        let frame = frame_for(&EventClass::Meet).unwrap();
        let g = emit_event_triples(&meet_instance(), &frame, &policy).unwrap();
        assert_eq!(deduplicate([&g, &g]), g);
    }
}
