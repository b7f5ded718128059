//! Checks an event data model against the four representation requirements:
//! generic event, provenance, entity typing and entity-event properties.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Coarse,
    Fine,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct EntityTypeDecl {
    pub name: String,
    pub granularity: Granularity,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PropertyDecl {
    pub name: String,
    pub domain: String,
    pub range: String,
}

/// What an event ontology declares, as far as the requirements care.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataModelDescriptor {
    pub name: String,
    #[serde(default)]
    pub has_generic_event: bool,
    #[serde(default)]
    pub has_specific_event_types: bool,
    #[serde(default)]
    pub provenance_properties: Vec<String>,
    #[serde(default)]
    pub entity_types: Vec<EntityTypeDecl>,
    #[serde(default)]
    pub event_entity_properties: Vec<PropertyDecl>,
}

impl DataModelDescriptor {
    pub fn from_toml(text: &str) -> Result<Self, ModelError> {
        let d: DataModelDescriptor =
            toml::from_str(text).map_err(|e| ModelError::Descriptor(e.to_string()))?;
        if d.name.trim().is_empty() {
            return Err(ModelError::Descriptor("descriptor name is empty".into()));
        }
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ModelError::Descriptor(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    PassLoosely,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::PassLoosely => "pass_loosely",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequirementReport {
    pub model: String,
    /// Verdicts for R1 (generic event), R2 (provenance), R3 (entity types) and
    /// R4 (entity-event properties), in that order.
    pub verdicts: [Verdict; 4],
}

impl RequirementReport {
    pub fn statuses(&self) -> [Status; 4] {
        [0, 1, 2, 3].map(|i| self.verdicts[i].status)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Status::Pass)
    }
}

impl fmt::Display for RequirementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model\t{}", self.model)?;
        for (i, v) in self.verdicts.iter().enumerate() {
            writeln!(f, "R{}\t{}\t{}", i + 1, v.status, v.note)?;
        }
        Ok(())
    }
}

fn verdict(status: Status, note: impl Into<String>) -> Verdict {
    Verdict { status, note: note.into() }
}

fn is_publisher_property(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    let local = lower.rsplit([':', '/', '#']).next().unwrap_or(&lower);
    local.contains("publisher") || local.ends_with("source")
}

pub fn validate_data_model(d: &DataModelDescriptor) -> RequirementReport {
    let r1 = if d.has_generic_event {
        verdict(Status::Pass, "declares a generic event class")
    } else {
        verdict(Status::Fail, "no generic event class")
    };

    let r2 = match d.provenance_properties.iter().find(|p| is_publisher_property(p)) {
        Some(p) => verdict(Status::Pass, format!("publisher recorded via {p}")),
        None if d.provenance_properties.is_empty() => {
            verdict(Status::Fail, "no provenance properties")
        }
        None => verdict(Status::Fail, "provenance does not include the publisher"),
    };

    let r3 = if d.entity_types.is_empty() {
        verdict(Status::Fail, "no entity types")
    } else if d.entity_types.iter().all(|t| t.granularity == Granularity::Coarse) {
        verdict(Status::PassLoosely, "only coarse-grained entity types")
    } else {
        verdict(Status::Pass, format!("{} entity types", d.entity_types.len()))
    };

    let uncovered: Vec<&str> = d
        .entity_types
        .iter()
        .filter(|t| {
            !d.event_entity_properties
                .iter()
                .any(|p| p.domain == t.name || p.range == t.name)
        })
        .map(|t| t.name.as_str())
        .collect();
    let r4 = if d.entity_types.is_empty() || d.event_entity_properties.is_empty() {
        verdict(Status::Fail, "no entity-event properties")
    } else if uncovered.is_empty() {
        verdict(Status::Pass, "every entity type is linked to the event")
    } else {
        verdict(Status::Fail, format!("unlinked entity types: {}", uncovered.join(", ")))
    };

    RequirementReport { model: d.name.clone(), verdicts: [r1, r2, r3, r4] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Status::*;

    fn empty(name: &str) -> DataModelDescriptor {
        DataModelDescriptor {
            name: name.into(),
            has_generic_event: false,
            has_specific_event_types: false,
            provenance_properties: vec![],
            entity_types: vec![],
            event_entity_properties: vec![],
        }
    }

    fn ty(name: &str, granularity: Granularity) -> EntityTypeDecl {
        EntityTypeDecl { name: name.into(), granularity }
    }

    fn prop(name: &str, domain: &str, range: &str) -> PropertyDecl {
        PropertyDecl { name: name.into(), domain: domain.into(), range: range.into() }
    }

    #[test]
    fn empty_descriptor_fails_everything() {
        let report = validate_data_model(&empty("nothing"));
        assert_eq!(report.statuses(), [Fail, Fail, Fail, Fail]);
    }

    #[test]
    fn coarse_types_pass_loosely() {
        let mut d = empty("lode-like");
        d.has_generic_event = true;
        d.entity_types = vec![ty("Agent", Granularity::Coarse), ty("SpatialThing", Granularity::Coarse)];
        d.event_entity_properties =
            vec![prop("involvedAgent", "Event", "Agent"), prop("atPlace", "Event", "SpatialThing")];
        assert_eq!(validate_data_model(&d).statuses(), [Pass, Fail, PassLoosely, Pass]);
    }

    #[test]
    fn non_publisher_provenance_still_fails_r2() {
        let mut d = empty("x");
        d.provenance_properties = vec!["accordingTo".into(), "extractedOn".into()];
        assert_eq!(validate_data_model(&d).verdicts[1].status, Fail);
        d.provenance_properties.push("dc:publisher".into());
        assert_eq!(validate_data_model(&d).verdicts[1].status, Pass);
    }

    #[test]
    fn uncovered_type_fails_r4() {
        let mut d = empty("x");
        d.entity_types = vec![ty("Actor", Granularity::Fine), ty("Place", Granularity::Fine)];
        d.event_entity_properties = vec![prop("hasActor", "Event", "Actor")];
        let report = validate_data_model(&d);
        assert_eq!(report.verdicts[3].status, Fail);
        assert!(report.verdicts[3].note.contains("Place"));
    }

    #[test]
    fn descriptor_parses_from_toml() {
        let d = DataModelDescriptor::from_toml(
            r#"
name = "tiny"
has_generic_event = true
provenance_properties = ["hasSource"]
[[entity_types]]
name = "Person"
granularity = "fine"
[[event_entity_properties]]
name = "agent"
domain = "Event"
range = "Person"
"#,
        )
        .unwrap();
        assert!(validate_data_model(&d).all_pass());
    }

    #[test]
    fn malformed_descriptor_is_rejected() {
        assert!(DataModelDescriptor::from_toml("name = 3").is_err());
        assert!(DataModelDescriptor::from_toml("name = \"\"").is_err());
        assert!(DataModelDescriptor::from_toml("name = \"a\"\nbogus = 1").is_err());
    }
}
