//! Local entity catalog: labels, aliases, types, dated roles and
//! disambiguation keywords.
//!
//! Stored as TOML:
//!
//! ```toml
//! [[entity]]
//! iri = "http://dbpedia.org/resource/Kevin_Systrom"
//! label = "Kevin Systrom"
//! type = "Person"
//! aliases = ["Kevin Systrom", "Systrom"]
//! keywords = ["instagram", "photo"]
//!
//! [[entity.role]]
//! title = "CEO of Instagram"
//! from = "2010-10-06"
//! # `to` omitted: still holds the role
//! ```
//!
//! A role title reads `<title> of <organization>`; the organization part is
//! resolved against the catalog's own aliases when possible.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::NaiveDate;
use serde::Deserialize;

use crate::model::Iri;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("cannot read catalog {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed catalog: {0}")]
    Parse(String),
    #[error("duplicate entity IRI {0}")]
    DuplicateIri(String),
    #[error("entity {iri}: role `{title}` ends before it starts")]
    RoleInterval { iri: String, title: String },
    #[error("entity {0}: not an absolute IRI")]
    BadIri(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[serde(default)]
    entity: Vec<RawEntity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntity {
    iri: String,
    label: String,
    #[serde(rename = "type")]
    entity_type: String,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default)]
    keywords: Vec<String>,
    #[serde(default)]
    role: Vec<RawRole>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRole {
    title: String,
    from: NaiveDate,
    to: Option<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleRecord {
    /// Full title as written, e.g. `CEO of Instagram`.
    pub title: String,
    /// Lowercased title part before ` of `.
    pub position: String,
    /// Lowercased organization part after ` of `.
    pub organization: String,
    pub organization_iri: Option<Iri>,
    pub valid_from: NaiveDate,
    pub valid_to: Option<NaiveDate>,
}

impl RoleRecord {
    pub fn holds_at(&self, at: NaiveDate) -> bool {
        self.valid_from <= at && self.valid_to.is_none_or(|to| at <= to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntity {
    pub iri: Iri,
    pub label: String,
    pub entity_type: String,
    pub aliases: Vec<String>,
    pub keywords: Vec<String>,
    pub roles: Vec<RoleRecord>,
}

/// Normalized lookup key for aliases and surfaces: lowercase, `#` stripped,
/// whitespace collapsed.
pub fn alias_key(text: &str) -> String {
    text.split_whitespace()
        .map(|w| w.trim_start_matches('#').to_lowercase())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Default)]
pub struct EntityCatalog {
    entities: Vec<CatalogEntity>,
    by_iri: BTreeMap<Iri, usize>,
    aliases: BTreeMap<String, BTreeSet<Iri>>,
    positions: BTreeSet<String>,
    longest_alias: usize,
}

/// The catalog covering the sample headlines.
pub const DEFAULT_CATALOG: &str = include_str!("../../data/catalog.toml");

impl EntityCatalog {
    pub fn builtin() -> Self {
        Self::from_toml(DEFAULT_CATALOG).expect("shipped catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        let mut catalog = EntityCatalog::default();
        let mut pending_roles = Vec::new();
        for e in raw.entity {
            let iri = Iri::new(e.iri.clone()).map_err(|_| CatalogError::BadIri(e.iri.clone()))?;
            if catalog.by_iri.contains_key(&iri) {
                return Err(CatalogError::DuplicateIri(e.iri));
            }
            for r in &e.role {
                if r.to.is_some_and(|to| to < r.from) {
                    return Err(CatalogError::RoleInterval { iri: e.iri.clone(), title: r.title.clone() });
                }
            }
            let mut aliases = e.aliases;
            if !aliases.iter().any(|a| alias_key(a) == alias_key(&e.label)) {
                aliases.insert(0, e.label.clone());
            }
            for alias in &aliases {
                let key = alias_key(alias);
                catalog.longest_alias = catalog.longest_alias.max(key.split(' ').count());
                catalog.aliases.entry(key).or_default().insert(iri.clone());
            }
            pending_roles.push(e.role);
            catalog.by_iri.insert(iri.clone(), catalog.entities.len());
            catalog.entities.push(CatalogEntity {
                iri,
                label: e.label,
                entity_type: e.entity_type,
                aliases,
                keywords: e.keywords.iter().map(|k| alias_key(k)).collect(),
                roles: Vec::new(),
            });
        }
        // roles are resolved once every alias is indexed
        for (idx, raw_roles) in pending_roles.into_iter().enumerate() {
            let roles = raw_roles
                .into_iter()
                .map(|r| {
                    let (position, organization) = match r.title.to_lowercase().split_once(" of ") {
                        Some((p, o)) => (alias_key(p), alias_key(o)),
                        None => (alias_key(&r.title), String::new()),
                    };
                    let organization_iri = catalog
                        .aliases
                        .get(&organization)
                        .filter(|set| set.len() == 1)
                        .and_then(|set| set.iter().next().cloned());
                    catalog.positions.insert(position.clone());
                    RoleRecord {
                        title: r.title,
                        position,
                        organization,
                        organization_iri,
                        valid_from: r.from,
                        valid_to: r.to,
                    }
                })
                .collect();
            catalog.entities[idx].roles = roles;
        }
        Ok(catalog)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> &[CatalogEntity] {
        &self.entities
    }

    pub fn get(&self, iri: &Iri) -> Option<&CatalogEntity> {
        self.by_iri.get(iri).map(|&i| &self.entities[i])
    }

    pub fn contains(&self, iri: &str) -> bool {
        self.entities.iter().any(|e| e.iri.as_str() == iri)
    }

    /// Candidate IRIs for a surface form, in IRI order.
    pub fn candidates(&self, surface: &str) -> Vec<&CatalogEntity> {
        self.aliases
            .get(&alias_key(surface))
            .map(|set| set.iter().filter_map(|iri| self.get(iri)).collect())
            .unwrap_or_default()
    }

    pub fn has_alias(&self, key: &str) -> bool {
        self.aliases.contains_key(key)
    }

    /// Word count of the longest alias.
    pub fn longest_alias(&self) -> usize {
        self.longest_alias
    }

    /// Whether `key` is the position part of some role title (`ceo`, `leader`).
    pub fn is_position(&self, key: &str) -> bool {
        self.positions.contains(key)
    }

    /// Entities holding `position` at `organization` on `at`, in IRI order.
    pub fn role_holders(&self, position: &str, organization: &str, at: NaiveDate) -> Vec<&CatalogEntity> {
        let org_iris = self.aliases.get(organization);
        let mut out: Vec<&CatalogEntity> = self
            .entities
            .iter()
            .filter(|e| {
                e.roles.iter().any(|r| {
                    r.position == position
                        && r.holds_at(at)
                        && (r.organization == organization
                            || r.organization_iri.as_ref().is_some_and(|iri| org_iris.is_some_and(|s| s.contains(iri))))
                })
            })
            .collect();
        out.sort_by(|a, b| a.iri.cmp(&b.iri));
        out
    }
}
