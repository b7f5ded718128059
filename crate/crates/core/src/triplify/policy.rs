use std::collections::BTreeMap;

use serde::Deserialize;

use crate::model::{roles, vocab, EventClass, Iri, ModelError};

/// How IRIs are minted and which properties carry each role.
///
/// Property and role values are local names resolved against `base`, or
/// absolute IRIs used as-is.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IriPolicy {
    pub base: String,
    pub singleton_property_of: String,
    pub has_source: String,
    pub extracted_on: String,
    pub body: String,
    pub roles: BTreeMap<String, String>,
}

impl Default for IriPolicy {
    fn default() -> Self {
        let roles = [
            (roles::PARTICIPANT, "participant"),
            (roles::TOPIC, "about"),
            (roles::GIVER, "giver"),
            (roles::RECIPIENT, "recipient"),
            (roles::MESSAGE, "message"),
            (roles::VICTIM, "victim"),
            (roles::PERPETRATOR, "perpetrator"),
            (roles::CAUSE, "cause"),
            (roles::COUNT, "count"),
            (roles::TIME, "atTime"),
            (roles::LOCATION, "atPlace"),
            (roles::INVOLVED, "involved"),
        ]
        .into_iter()
        .map(|(r, p)| (r.to_string(), p.to_string()))
        .collect();
        IriPolicy {
            base: "http://example.org/eventgraph/".to_string(),
            singleton_property_of: vocab::RDF_SINGLETON_PROPERTY_OF.to_string(),
            has_source: "hasSource".to_string(),
            extracted_on: "extractedOn".to_string(),
            body: "body".to_string(),
            roles,
        }
    }
}

/// Keeps ASCII letters, digits, `_` and `-`; anything else becomes `_`.
pub fn id_slug(raw: &str) -> String {
    let s: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect();
    if s.is_empty() {
        "_".to_string()
    } else {
        s
    }
}

/// Lowercase slug of a surface form: `Justin Trudeau` → `justin_trudeau`.
pub fn entity_slug(surface: &str) -> String {
    let mut out = String::new();
    for c in surface.trim_start_matches(['@', '#']).chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    // non-ASCII letters are percent-encoded to stay a plain IRI path segment
    let mut encoded = String::new();
    for c in out.chars() {
        if c.is_ascii() {
            encoded.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                encoded.push_str(&format!("%{b:02X}"));
            }
        }
    }
    if encoded.is_empty() {
        "_".to_string()
    } else {
        encoded
    }
}

impl IriPolicy {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.base.ends_with('/') || self.base.ends_with('#')) {
            return Err(ModelError::InvalidIri(format!("base must end with '/' or '#': {}", self.base)));
        }
        Iri::new(self.base.clone())?;
        for name in [&self.singleton_property_of, &self.has_source, &self.extracted_on, &self.body] {
            self.resolve(name)?;
        }
        for name in self.roles.values() {
            self.resolve(name)?;
        }
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<Iri, ModelError> {
        if name.contains("://") || name.starts_with("urn:") {
            Iri::new(name)
        } else {
            Iri::new(format!("{}{}", self.base, name))
        }
    }

    fn must(&self, name: &str) -> Iri {
        self.resolve(name).expect("policy validated")
    }

    pub fn singleton_property_of(&self) -> Iri {
        self.must(&self.singleton_property_of)
    }

    pub fn has_source(&self) -> Iri {
        self.must(&self.has_source)
    }

    pub fn extracted_on(&self) -> Iri {
        self.must(&self.extracted_on)
    }

    pub fn body(&self) -> Iri {
        self.must(&self.body)
    }

    pub fn rdf_type(&self) -> Iri {
        Iri::new(vocab::RDF_TYPE).expect("constant")
    }

    pub fn role_property(&self, role: &str) -> Iri {
        match self.roles.get(role) {
            Some(p) => self.must(p),
            None => self.must(&entity_slug(role)),
        }
    }

    /// Reverse lookup from a property IRI to the role it carries.
    pub fn role_of_property(&self, property: &Iri) -> Option<&str> {
        self.roles
            .iter()
            .find(|(_, p)| self.resolve(p).is_ok_and(|iri| &iri == property))
            .map(|(r, _)| r.as_str())
    }

    pub fn class_iri(&self, class: &EventClass) -> Iri {
        self.must(&id_slug(class.name()))
    }

    pub fn type_iri(&self, type_name: &str) -> Iri {
        self.must(&id_slug(type_name))
    }

    /// Singleton property for one event: `<base><Class>_<record id>`.
    pub fn instance_iri(&self, class: &EventClass, record_id: &str) -> Iri {
        self.must(&format!("{}_{}", id_slug(class.name()), id_slug(record_id)))
    }

    pub fn node_iri(&self, class: &EventClass, record_id: &str, n: usize) -> Iri {
        self.must(&format!("node/{}_{}_{n}", id_slug(class.name()), id_slug(record_id)))
    }

    pub fn publisher_iri(&self, publisher: &str) -> Iri {
        self.must(&format!("source/{}", id_slug(publisher.trim())))
    }

    pub fn entity_iri(&self, surface: &str) -> Iri {
        self.must(&format!("entity/{}", entity_slug(surface)))
    }
}
