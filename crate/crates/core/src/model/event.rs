//! Event classes, role frames and concrete event instances.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use chrono::{NaiveDate, NaiveDateTime};

use super::rdf::Iri;
use super::ModelError;

/// Role names shared by the built-in frames.
pub mod roles {
    pub const PARTICIPANT: &str = "Participant";
    pub const TOPIC: &str = "Topic";
    pub const GIVER: &str = "Giver";
    pub const RECIPIENT: &str = "Recipient";
    pub const MESSAGE: &str = "Message";
    pub const VICTIM: &str = "Victim";
    pub const PERPETRATOR: &str = "Perpetrator";
    pub const CAUSE: &str = "Cause";
    pub const COUNT: &str = "Count";
    pub const TIME: &str = "time";
    pub const LOCATION: &str = "location";
    pub const INVOLVED: &str = "involved";

    /// Roles every frame carries as optional slots.
    pub const GENERIC: [&str; 3] = [TIME, LOCATION, INVOLVED];
}

/// A specific event type, i.e. a subclass of the generic event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventClass {
    Communication,
    Meet,
    Murder,
    Other(String),
}

impl EventClass {
    pub const BUILTIN: [EventClass; 3] = [EventClass::Communication, EventClass::Meet, EventClass::Murder];

    pub fn name(&self) -> &str {
        match self {
            EventClass::Communication => "Communication",
            EventClass::Meet => "Meet",
            EventClass::Murder => "Murder",
            EventClass::Other(label) => label,
        }
    }

    /// Maps a name to a built-in class, or to `Other` for anything else.
    pub fn from_name(name: &str) -> EventClass {
        match name {
            "Communication" => EventClass::Communication,
            "Meet" => EventClass::Meet,
            "Murder" => EventClass::Murder,
            other => EventClass::Other(other.to_string()),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, EventClass::Other(_))
    }
}

impl fmt::Display for EventClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An event class together with its optional verb subgroup (e.g. `SayVerbs`).
///
/// Only `Communication` accepts a subgroup.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Classification {
    class: EventClass,
    subgroup: Option<String>,
}

impl Classification {
    pub fn new(class: EventClass, subgroup: Option<String>) -> Result<Self, ModelError> {
        if subgroup.is_some() && class != EventClass::Communication {
            return Err(ModelError::SubgroupNotAllowed(class.name().to_string()));
        }
        Ok(Classification { class, subgroup })
    }

    pub fn of(class: EventClass) -> Self {
        Classification { class, subgroup: None }
    }

    pub fn class(&self) -> &EventClass {
        &self.class
    }

    pub fn subgroup(&self) -> Option<&str> {
        self.subgroup.as_deref()
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.subgroup {
            Some(group) => write!(f, "{}/{}", self.class, group),
            None => write!(f, "{}", self.class),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleSpec {
    pub name: String,
    pub expected_type: String,
    pub required: bool,
    /// Whether the role may be filled more than once.
    pub repeatable: bool,
}

impl RoleSpec {
    pub fn new(name: &str, expected_type: &str, required: bool, repeatable: bool) -> Self {
        RoleSpec {
            name: name.to_string(),
            expected_type: expected_type.to_string(),
            required,
            repeatable,
        }
    }
}

/// The semantic roles an event class expects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleFrame {
    pub class: EventClass,
    pub roles: Vec<RoleSpec>,
}

impl RoleFrame {
    /// Builds a frame from class-specific roles; the generic `time`,
    /// `location` and `involved` slots are appended.
    pub fn new(class: EventClass, specific: Vec<RoleSpec>) -> Self {
        let mut roles = specific;
        for generic in roles::GENERIC {
            if roles.iter().all(|r| r.name != generic) {
                let ty = match generic {
                    roles::TIME => "Time",
                    roles::LOCATION => "Place",
                    _ => "Thing",
                };
                roles.push(RoleSpec::new(generic, ty, false, true));
            }
        }
        RoleFrame { class, roles }
    }

    pub fn role(&self, name: &str) -> Option<&RoleSpec> {
        self.roles.iter().find(|r| r.name == name)
    }

    pub fn has_role(&self, name: &str) -> bool {
        self.role(name).is_some()
    }

    pub fn required(&self) -> impl Iterator<Item = &RoleSpec> {
        self.roles.iter().filter(|r| r.required)
    }

    fn meet() -> Self {
        RoleFrame::new(
            EventClass::Meet,
            vec![
                RoleSpec::new(roles::PARTICIPANT, "Participant", true, true),
                RoleSpec::new(roles::TOPIC, "Topic", false, false),
            ],
        )
    }

    fn communication() -> Self {
        RoleFrame::new(
            EventClass::Communication,
            vec![
                RoleSpec::new(roles::GIVER, "Giver", true, true),
                RoleSpec::new(roles::RECIPIENT, "Recipient", false, true),
                RoleSpec::new(roles::MESSAGE, "Message", true, false),
            ],
        )
    }

    fn murder() -> Self {
        RoleFrame::new(
            EventClass::Murder,
            vec![
                RoleSpec::new(roles::VICTIM, "Victim", false, true),
                RoleSpec::new(roles::PERPETRATOR, "Perpetrator", false, true),
                RoleSpec::new(roles::CAUSE, "Cause", false, true),
                RoleSpec::new(roles::COUNT, "Count", false, false),
            ],
        )
    }
}

/// Frames for the built-in classes plus any registered extras.
#[derive(Debug, Clone)]
pub struct FrameRegistry {
    frames: BTreeMap<EventClass, RoleFrame>,
}

impl Default for FrameRegistry {
    fn default() -> Self {
        let mut frames = BTreeMap::new();
        for frame in [RoleFrame::communication(), RoleFrame::meet(), RoleFrame::murder()] {
            frames.insert(frame.class.clone(), frame);
        }
        FrameRegistry { frames }
    }
}

impl FrameRegistry {
    pub fn register(&mut self, frame: RoleFrame) {
        self.frames.insert(frame.class.clone(), frame);
    }

    pub fn frame_for(&self, class: &EventClass) -> Result<&RoleFrame, ModelError> {
        self.frames
            .get(class)
            .ok_or_else(|| ModelError::UnknownClass(class.name().to_string()))
    }

    /// Resolves a class name against the registered classes.
    pub fn class_named(&self, name: &str) -> Option<EventClass> {
        let class = EventClass::from_name(name);
        self.frames.contains_key(&class).then_some(class)
    }

    pub fn classes(&self) -> impl Iterator<Item = &EventClass> {
        self.frames.keys()
    }
}

/// Frame lookup against the default registry.
pub fn frame_for(class: &EventClass) -> Result<RoleFrame, ModelError> {
    FrameRegistry::default().frame_for(class).cloned()
}

/// A reference to a catalog or minted entity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityRef {
    pub iri: Iri,
    pub label: String,
    pub entity_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Filler {
    Entity(EntityRef),
    /// Text-valued argument such as a topic, message or casualty count.
    Literal(String),
}

impl Filler {
    pub fn as_entity(&self) -> Option<&EntityRef> {
        match self {
            Filler::Entity(e) => Some(e),
            Filler::Literal(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleFiller {
    pub role: String,
    pub filler: Filler,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub publisher: String,
    pub extracted_on: NaiveDate,
}

/// The verb that signals the event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbMention {
    pub surface: String,
    pub token: usize,
    pub span: Range<usize>,
}

/// One concrete occurrence of an event extracted from a headline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventInstance {
    pub instance_id: Iri,
    pub record_id: String,
    pub classification: Classification,
    pub mention: VerbMention,
    pub time: Option<NaiveDateTime>,
    pub roles: Vec<RoleFiller>,
    pub provenance: Provenance,
    /// Other lexicon hits in the headline, kept for audit.
    pub alternates: Vec<Classification>,
    pub warnings: Vec<String>,
}

impl EventInstance {
    pub fn class(&self) -> &EventClass {
        self.classification.class()
    }

    pub fn fillers<'a>(&'a self, role: &'a str) -> impl Iterator<Item = &'a Filler> + 'a {
        self.roles.iter().filter(move |r| r.role == role).map(|r| &r.filler)
    }

    pub fn location(&self) -> Option<&EntityRef> {
        self.fillers(roles::LOCATION).find_map(Filler::as_entity)
    }

    /// Checks that every role is declared by the class frame.
    pub fn check_roles(&self, frame: &RoleFrame) -> Result<(), ModelError> {
        match self.roles.iter().find(|r| !frame.has_role(&r.role)) {
            Some(bad) => Err(ModelError::RoleNotInFrame {
                role: bad.role.clone(),
                class: frame.class.name().to_string(),
            }),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_frames_carry_named_roles() {
        let meet = frame_for(&EventClass::Meet).unwrap();
        assert!(meet.has_role(roles::PARTICIPANT));
        assert!(meet.has_role(roles::TOPIC));
        assert!(meet.role(roles::PARTICIPANT).unwrap().repeatable);

        let comm = frame_for(&EventClass::Communication).unwrap();
        assert!(comm.has_role(roles::GIVER));

        let murder = frame_for(&EventClass::Murder).unwrap();
        for r in [roles::VICTIM, roles::PERPETRATOR, roles::COUNT] {
            assert!(murder.has_role(r), "{r}");
        }
    }

    #[test]
    fn every_frame_has_optional_time_and_location() {
        let registry = FrameRegistry::default();
        for class in registry.classes() {
            let frame = registry.frame_for(class).unwrap();
            for generic in [roles::TIME, roles::LOCATION] {
                let spec = frame.role(generic).expect(generic);
                assert!(!spec.required);
            }
        }
    }

    #[test]
    fn unregistered_other_class_is_unknown() {
        let err = frame_for(&EventClass::Other("Dance".into())).unwrap_err();
        assert!(matches!(err, ModelError::UnknownClass(ref c) if c == "Dance"));
    }

    #[test]
    fn registered_other_class_resolves() {
        let mut registry = FrameRegistry::default();
        registry.register(RoleFrame::new(EventClass::Other("Dance".into()), vec![]));
        let frame = registry.frame_for(&EventClass::Other("Dance".into())).unwrap();
        assert!(frame.has_role(roles::LOCATION));
        assert_eq!(registry.class_named("Dance"), Some(EventClass::Other("Dance".into())));
        assert_eq!(registry.class_named("Sing"), None);
    }

    #[test]
    fn subgroup_only_on_communication() {
        assert!(Classification::new(EventClass::Communication, Some("SayVerbs".into())).is_ok());
        assert!(Classification::new(EventClass::Murder, Some("SayVerbs".into())).is_err());
    }
}
