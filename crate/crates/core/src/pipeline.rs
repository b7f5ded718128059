//! Batch extraction: records in, one canonical event graph out, plus a skip
//! log and an audit log.

use std::collections::HashSet;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::entities::{annotate_entities, AnnotationContext, ChunkConfig, EntityCatalog};
use crate::events::{recognize_event, EventClassifier, HeadVerbClassifier};
use crate::ingest::{is_record_line, normalize, parse_record, HeadlineRecord};
use crate::interlink::LinkConfig;
use crate::lexicon::Lexicon;
use crate::model::{EventInstance, FrameRegistry, TripleSet};
use crate::triplify::{deduplicate, emit_event_triples, IriPolicy};

/// Config file layout; every section is optional.
///
/// ```toml
/// [iri]
/// base = "http://example.org/eventgraph/"
/// [iri.roles]
/// Participant = "participant"
///
/// [chunking]
/// prepositions = ["with", "in", "at"]
///
/// [interlink]
/// same_window_hours = 48
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub iri: IriPolicy,
    pub chunking: ChunkConfig,
    pub interlink: LinkConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: PipelineConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.iri.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        config.interlink.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }
}

/// Loaded resources shared by every record.
pub struct Extractor {
    pub lexicon: Lexicon,
    pub catalog: EntityCatalog,
    pub frames: FrameRegistry,
    pub config: PipelineConfig,
    pub classifier: Box<dyn EventClassifier>,
}

impl Extractor {
    pub fn new(lexicon: Lexicon, catalog: EntityCatalog, config: PipelineConfig) -> Self {
        Extractor { lexicon, catalog, frames: FrameRegistry::default(), config, classifier: Box::new(HeadVerbClassifier) }
    }

    pub fn builtin() -> Self {
        Self::new(Lexicon::builtin(), EntityCatalog::builtin(), PipelineConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skip {
    /// Record id, or `line:<n>` when the line had no usable id.
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExtractOutput {
    pub records: usize,
    pub instances: Vec<EventInstance>,
    pub graph: TripleSet,
    pub skipped: Vec<Skip>,
    pub audit: Vec<String>,
}

impl ExtractOutput {
    pub fn summary(&self) -> String {
        format!("records={} events={} skipped={}", self.records, self.instances.len(), self.skipped.len())
    }

    pub fn skip_log(&self) -> String {
        self.skipped.iter().map(|s| format!("{}\t{}\n", s.id, s.reason.replace(['\t', '\n'], " "))).collect()
    }

    pub fn audit_log(&self) -> String {
        self.audit.iter().map(|l| format!("{l}\n")).collect()
    }
}

enum Outcome {
    Event { instance: Box<EventInstance>, graph: TripleSet, audit: Vec<String> },
    Skipped(Skip),
}

fn process(ex: &Extractor, record: &HeadlineRecord) -> Outcome {
    let skip = |reason: String| Outcome::Skipped(Skip { id: record.id.clone(), reason });
    let tok = normalize(&record.text);
    let Some(event) = recognize_event(&tok, &ex.lexicon) else {
        return skip("no event verb".to_string());
    };
    let classification = ex.classifier.classify(&event);
    let ctx = AnnotationContext {
        catalog: &ex.catalog,
        policy: &ex.config.iri,
        chunking: &ex.config.chunking,
        frames: &ex.frames,
    };
    let annotation = match annotate_entities(record, &tok, &event, classification, ctx) {
        Ok(a) => a,
        Err(e) => return skip(e.to_string()),
    };
    let frame = ex.frames.frame_for(annotation.instance.class()).expect("frame checked during annotation");
    let graph = match emit_event_triples(&annotation.instance, frame, &ex.config.iri) {
        Ok(g) => g,
        Err(e) => return skip(e.to_string()),
    };

    let inst = &annotation.instance;
    let alternates: Vec<String> = inst.alternates.iter().map(ToString::to_string).collect();
    let mut audit = vec![format!(
        "{}\tclass\t{}\thead={}\talternates={}",
        record.id,
        inst.classification,
        inst.mention.surface,
        alternates.join(",")
    )];
    for d in &annotation.disambiguations {
        let runner = d.runner_up.as_ref().map_or("-".to_string(), |(iri, s)| format!("{iri}:{s:.3}"));
        audit.push(format!("{}\tlink\t{}\t{}:{:.3}\trunner_up={}", record.id, d.mention, d.selected, d.score, runner));
    }
    for w in &inst.warnings {
        audit.push(format!("{}\twarning\t{}", record.id, w));
    }
    Outcome::Event { instance: Box::new(annotation.instance), graph, audit }
}

/// Runs the pipeline over newline-delimited records. Records are processed in
/// parallel and results are kept in input order; malformed lines, duplicate
/// ids and headlines without an event are skipped, never fatal.
pub fn extract(ex: &Extractor, input: &str) -> ExtractOutput {
    let mut out = ExtractOutput::default();
    let mut seen = HashSet::new();
    let mut slots: Vec<Result<HeadlineRecord, Skip>> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if !is_record_line(line) {
            continue;
        }
        out.records += 1;
        let slot = match parse_record(line, idx + 1) {
            Ok(record) if !seen.insert(record.id.clone()) => {
                Err(Skip { id: record.id, reason: "duplicate id".to_string() })
            }
            Ok(record) => Ok(record),
            Err(e) => {
                let id = line.split('\t').next().map(str::trim).filter(|s| !s.is_empty());
                Err(Skip { id: id.map_or_else(|| format!("line:{}", idx + 1), str::to_string), reason: e.to_string() })
            }
        };
        slots.push(slot);
    }

    let outcomes: Vec<Outcome> = slots
        .into_par_iter()
        .map(|slot| match slot {
            Ok(record) => process(ex, &record),
            Err(skip) => Outcome::Skipped(skip),
        })
        .collect();

    let mut graphs = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Event { instance, graph, audit } => {
                out.instances.push(*instance);
                graphs.push(graph);
                out.audit.extend(audit);
            }
            Outcome::Skipped(s) => out.skipped.push(s),
        }
    }
    out.graph = deduplicate(&graphs);
    out
}
