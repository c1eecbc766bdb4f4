//! Conditional handover procedures as dependency DAGs, and their timeline
//! evaluation over a deployment topology.
//!
//! Every step either transmits a message between two logical functions, holds
//! for a fixed local delay (SSB acquisition, core-network API calls), or is
//! the handover trigger that separates setup from buffer. A step starts once
//! all its dependencies have arrived; the schedule is the earliest-start
//! (longest-path) solution of the DAG.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LinkClass;
use crate::topology::{ProcedureVariant, RanFunction, Topology};

/// Name of the step whose arrival at the UE closes the buffer phase.
pub const BUFFER_END_STEP: &str = "MSG4";
pub const TRIGGER_STEP: &str = "CHO_TRIGGER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Setup,
    Buffer,
    Execution,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Setup, Phase::Buffer, Phase::Execution];
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Setup => "setup",
            Phase::Buffer => "buffer",
            Phase::Execution => "execution",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalDelay {
    SsbAcquisition,
    CnApi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    Transmit { from: RanFunction, to: RanFunction },
    Local { delay: LocalDelay },
    Trigger,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageSpec {
    pub name: String,
    pub phase: Phase,
    #[serde(flatten)]
    pub kind: StepKind,
    pub deps: Vec<String>,
}

impl MessageSpec {
    fn transmit(name: &str, phase: Phase, from: RanFunction, to: RanFunction, deps: &[&str]) -> Self {
        Self {
            name: name.to_owned(),
            phase,
            kind: StepKind::Transmit { from, to },
            deps: deps.iter().map(|d| (*d).to_owned()).collect(),
        }
    }

    fn local(name: &str, phase: Phase, delay: LocalDelay, deps: &[&str]) -> Self {
        Self {
            name: name.to_owned(),
            phase,
            kind: StepKind::Local { delay },
            deps: deps.iter().map(|d| (*d).to_owned()).collect(),
        }
    }

    pub fn is_transmitted(&self) -> bool {
        matches!(self.kind, StepKind::Transmit { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingConfig {
    pub per_message_processing_ms: f64,
    pub ssb_acquisition_ms: f64,
    pub cn_api_total_ms: f64,
    /// Gap between the end of setup and the trigger condition firing.
    pub trigger_offset_ms: f64,
    /// Also charge processing at every intermediate node of a path.
    pub processing_at_relays: bool,
}

impl Default for TimingConfig {
    fn default() -> Self {
        Self {
            per_message_processing_ms: 1.0,
            ssb_acquisition_ms: 20.0,
            cn_api_total_ms: 50.0,
            trigger_offset_ms: 0.0,
            processing_at_relays: false,
        }
    }
}

impl TimingConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("per_message_processing_ms", self.per_message_processing_ms),
            ("ssb_acquisition_ms", self.ssb_acquisition_ms),
            ("cn_api_total_ms", self.cn_api_total_ms),
            ("trigger_offset_ms", self.trigger_offset_ms),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    fn local_delay(&self, delay: LocalDelay) -> f64 {
        match delay {
            LocalDelay::SsbAcquisition => self.ssb_acquisition_ms,
            LocalDelay::CnApi => self.cn_api_total_ms,
        }
    }
}

/// Which function answers the UE with the contention-resolution message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Msg4Anchor {
    #[default]
    Cu,
    Du,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogOptions {
    /// Number of candidate target DUs / gNBs asked during setup.
    pub candidate_count: u32,
    pub msg4_anchor: Msg4Anchor,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        Self { candidate_count: 1, msg4_anchor: Msg4Anchor::Cu }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcedureCatalog {
    pub variant: ProcedureVariant,
    pub messages: Vec<MessageSpec>,
}

impl ProcedureCatalog {
    pub fn empty(variant: ProcedureVariant) -> Self {
        Self { variant, messages: Vec::new() }
    }

    pub fn get(&self, name: &str) -> Option<&MessageSpec> {
        self.messages.iter().find(|m| m.name == name)
    }

    pub fn transmitted_count(&self) -> usize {
        self.messages.iter().filter(|m| m.is_transmitted()).count()
    }

    pub fn local_delay_count(&self) -> usize {
        self.messages
            .iter()
            .filter(|m| matches!(m.kind, StepKind::Local { .. }))
            .count()
    }

    /// Checks name uniqueness, dependency resolution, acyclicity and phase
    /// ordering, returning step indices in a dependency-respecting order.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut index = HashMap::with_capacity(self.messages.len());
        for (i, m) in self.messages.iter().enumerate() {
            if index.insert(m.name.as_str(), i).is_some() {
                return Err(Error::InvalidCatalog(format!("duplicate step {}", m.name)));
            }
        }
        let mut indegree = vec![0usize; self.messages.len()];
        let mut dependents = vec![Vec::new(); self.messages.len()];
        for (i, m) in self.messages.iter().enumerate() {
            for d in &m.deps {
                let &j = index.get(d.as_str()).ok_or_else(|| {
                    Error::InvalidCatalog(format!("{} depends on unknown step {d}", m.name))
                })?;
                if self.messages[j].phase > m.phase {
                    return Err(Error::InvalidCatalog(format!(
                        "{} ({}) depends on later-phase step {d} ({})",
                        m.name, m.phase, self.messages[j].phase
                    )));
                }
                indegree[i] += 1;
                dependents[j].push(i);
            }
        }
        // Kahn's algorithm, always releasing the lowest catalog index first.
        let mut ready: std::collections::BTreeSet<usize> =
            (0..self.messages.len()).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.messages.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &k in &dependents[i] {
                indegree[k] -= 1;
                if indegree[k] == 0 {
                    ready.insert(k);
                }
            }
        }
        if order.len() != self.messages.len() {
            let stuck = (0..self.messages.len())
                .find(|&i| indegree[i] > 0)
                .map(|i| self.messages[i].name.clone())
                .unwrap_or_default();
            return Err(Error::CyclicDependencies(stuck));
        }
        Ok(order)
    }
}

fn candidate_names(base: &str, count: u32) -> Vec<String> {
    if count <= 1 {
        vec![base.to_owned()]
    } else {
        (1..=count).map(|k| format!("{base}#{k}")).collect()
    }
}

/// Setup-phase request/response pairs towards each candidate, then the
/// RRC configuration over the source chain.
fn setup_messages(
    out: &mut Vec<MessageSpec>,
    request: Option<(&str, &str, RanFunction, RanFunction)>,
    count: u32,
) {
    use RanFunction::*;
    let mut config_deps = Vec::new();
    if let Some((req, resp, asker, candidate)) = request {
        for (rq, rs) in candidate_names(req, count).into_iter().zip(candidate_names(resp, count)) {
            out.push(MessageSpec::transmit(&rq, Phase::Setup, asker, candidate, &[]));
            out.push(MessageSpec::transmit(&rs, Phase::Setup, candidate, asker, &[rq.as_str()]));
            config_deps.push(rs);
        }
    }
    let deps: Vec<&str> = config_deps.iter().map(String::as_str).collect();
    out.push(MessageSpec::transmit("CHO_CONFIG", Phase::Setup, SourceCu, Ue, &deps));
    out.push(MessageSpec::transmit("CHO_CONFIG_COMPLETE", Phase::Setup, Ue, SourceCu, &["CHO_CONFIG"]));
}

/// Trigger, SSB acquisition and the four-step random access on the target chain.
fn random_access(out: &mut Vec<MessageSpec>, opts: &CatalogOptions) {
    use RanFunction::*;
    let setup: Vec<String> = out
        .iter()
        .filter(|m| m.phase == Phase::Setup)
        .map(|m| m.name.clone())
        .collect();
    out.push(MessageSpec {
        name: TRIGGER_STEP.to_owned(),
        phase: Phase::Buffer,
        kind: StepKind::Trigger,
        deps: setup,
    });
    out.push(MessageSpec::local("SSB_ACQ", Phase::Buffer, LocalDelay::SsbAcquisition, &[TRIGGER_STEP]));
    out.push(MessageSpec::transmit("MSG1", Phase::Buffer, Ue, TargetDu, &["SSB_ACQ"]));
    out.push(MessageSpec::transmit("MSG2", Phase::Buffer, TargetDu, Ue, &["MSG1"]));
    out.push(MessageSpec::transmit("MSG3", Phase::Buffer, Ue, TargetCu, &["MSG2"]));
    let msg4_from = match opts.msg4_anchor {
        Msg4Anchor::Cu => TargetCu,
        Msg4Anchor::Du => TargetDu,
    };
    out.push(MessageSpec::transmit(BUFFER_END_STEP, Phase::Buffer, msg4_from, Ue, &["MSG3"]));
}

pub fn procedure_catalog(variant: ProcedureVariant) -> ProcedureCatalog {
    procedure_catalog_with(variant, &CatalogOptions::default())
}

pub fn procedure_catalog_with(variant: ProcedureVariant, opts: &CatalogOptions) -> ProcedureCatalog {
    use Phase::*;
    use RanFunction::*;
    let count = opts.candidate_count.max(1);
    let mut m = Vec::new();
    match variant {
        ProcedureVariant::IntraDu => {
            setup_messages(&mut m, None, count);
            random_access(&mut m, opts);
        }
        ProcedureVariant::InterDu => {
            // the common CU is the source-chain CU
            setup_messages(
                &mut m,
                Some(("UE_CTX_SETUP_REQ", "UE_CTX_SETUP_RESP", SourceCu, TargetDu)),
                count,
            );
            random_access(&mut m, opts);
            m.push(MessageSpec::transmit("ACCESS_SUCCESS", Buffer, TargetDu, SourceCu, &["MSG3"]));
            m.push(MessageSpec::transmit("STOP_DATA", Buffer, SourceCu, SourceDu, &["ACCESS_SUCCESS"]));
            m.push(MessageSpec::transmit(
                "UE_CTX_RELEASE",
                Execution,
                SourceCu,
                SourceDu,
                &[BUFFER_END_STEP, "STOP_DATA"],
            ));
        }
        ProcedureVariant::InterGnbIntraAmf => {
            setup_messages(&mut m, Some(("HO_REQUEST", "HO_REQUEST_ACK", SourceCu, TargetCu)), count);
            random_access(&mut m, opts);
            m.push(MessageSpec::transmit("HO_SUCCESS", Buffer, TargetCu, SourceCu, &[BUFFER_END_STEP]));
            m.push(MessageSpec::transmit("PATH_SWITCH_REQ", Execution, TargetCu, AmfUpf, &[BUFFER_END_STEP]));
            m.push(MessageSpec::local("CN_API", Execution, LocalDelay::CnApi, &["PATH_SWITCH_REQ"]));
            m.push(MessageSpec::transmit("END_MARKER", Execution, AmfUpf, SourceCu, &["CN_API"]));
            m.push(MessageSpec::transmit("END_MARKER_FWD", Execution, SourceCu, TargetCu, &["END_MARKER"]));
            m.push(MessageSpec::transmit("PATH_SWITCH_ACK", Execution, AmfUpf, TargetCu, &["CN_API"]));
            m.push(MessageSpec::transmit("UE_CTX_RELEASE", Execution, TargetCu, SourceCu, &["PATH_SWITCH_ACK"]));
        }
    }
    ProcedureCatalog { variant, messages: m }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub name: String,
    pub phase: Phase,
    pub start_ms: f64,
    pub arrival_ms: f64,
    pub links: Vec<LinkClass>,
    /// Present for transmitted messages only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub from: Option<RanFunction>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub to: Option<RanFunction>,
    /// Both endpoints share a node: no time, not counted.
    #[serde(default)]
    pub elided: bool,
}

impl TraceEvent {
    pub fn counts_as_message(&self) -> bool {
        self.from.is_some() && !self.elided
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineTrace {
    pub variant: ProcedureVariant,
    /// Events in catalog order.
    pub events: Vec<TraceEvent>,
    pub setup_end_ms: f64,
    pub trigger_time_ms: f64,
    pub buffer_end_ms: f64,
    pub completion_ms: f64,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl TimelineTrace {
    pub fn event(&self, name: &str) -> Option<&TraceEvent> {
        self.events.iter().find(|e| e.name == name)
    }

    /// Events ordered by start time, ties kept in catalog order.
    pub fn chronological(&self) -> Vec<&TraceEvent> {
        let mut out: Vec<&TraceEvent> = self.events.iter().collect();
        out.sort_by(|a, b| a.start_ms.total_cmp(&b.start_ms));
        out
    }
}

pub fn evaluate_timeline(
    catalog: &ProcedureCatalog,
    topo: &Topology,
    timing: &TimingConfig,
) -> Result<TimelineTrace> {
    timing.validate()?;
    let order = catalog.topological_order()?;
    let index: HashMap<&str, usize> = catalog
        .messages
        .iter()
        .enumerate()
        .map(|(i, m)| (m.name.as_str(), i))
        .collect();

    let mut events: Vec<Option<TraceEvent>> = vec![None; catalog.messages.len()];
    for i in order {
        let spec = &catalog.messages[i];
        let start_ms = spec
            .deps
            .iter()
            .map(|d| events[index[d.as_str()]].as_ref().expect("deps evaluated first").arrival_ms)
            .fold(0.0_f64, f64::max);
        let mut event = TraceEvent {
            name: spec.name.clone(),
            phase: spec.phase,
            start_ms,
            arrival_ms: start_ms,
            links: Vec::new(),
            from: None,
            to: None,
            elided: false,
        };
        match spec.kind {
            StepKind::Transmit { from, to } => {
                let path = topo.resolve_path(from, to)?;
                event.from = Some(from);
                event.to = Some(to);
                if path.is_empty() {
                    event.elided = true;
                } else {
                    let mut processing = timing.per_message_processing_ms;
                    if timing.processing_at_relays {
                        processing += timing.per_message_processing_ms * path.relay_count() as f64;
                    }
                    event.arrival_ms = start_ms + path.delay_ms + processing;
                    event.links = path.classes();
                }
            }
            StepKind::Local { delay } => event.arrival_ms = start_ms + timing.local_delay(delay),
            StepKind::Trigger => event.arrival_ms = start_ms + timing.trigger_offset_ms,
        }
        events[i] = Some(event);
    }
    let events: Vec<TraceEvent> = events.into_iter().map(|e| e.expect("all steps evaluated")).collect();

    let setup_end_ms = events
        .iter()
        .filter(|e| e.phase == Phase::Setup)
        .map(|e| e.arrival_ms)
        .fold(0.0, f64::max);
    let trigger_time_ms = events
        .iter()
        .find(|e| e.name == TRIGGER_STEP)
        .map_or(setup_end_ms, |e| e.arrival_ms);
    let completion_ms = events.iter().map(|e| e.arrival_ms).fold(0.0, f64::max);
    let buffer_end_ms = events
        .iter()
        .find(|e| e.name == BUFFER_END_STEP)
        .map_or(trigger_time_ms, |e| e.arrival_ms);

    let mut notes = Vec::new();
    if catalog.variant == ProcedureVariant::InterGnbIntraAmf {
        notes.push(
            "downlink data reaches the target via the source gNB until the path switch completes"
                .to_owned(),
        );
    }
    Ok(TimelineTrace {
        variant: catalog.variant,
        events,
        setup_end_ms,
        trigger_time_ms,
        buffer_end_ms,
        completion_ms,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseDurations {
    pub setup_ms: f64,
    pub buffer_ms: f64,
    pub execution_ms: f64,
    pub total_ms: f64,
}

pub fn phase_durations(trace: &TimelineTrace) -> PhaseDurations {
    PhaseDurations {
        setup_ms: trace.setup_end_ms,
        buffer_ms: trace.buffer_end_ms - trace.trigger_time_ms,
        execution_ms: trace.completion_ms - trace.buffer_end_ms,
        total_ms: trace.completion_ms,
    }
}

/// Number of transmitted messages crossing each link class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkCounts {
    pub sl: u32,
    pub fl: u32,
    pub isl: u32,
    pub igsl: u32,
}

impl LinkCounts {
    pub fn get(&self, class: LinkClass) -> u32 {
        match class {
            LinkClass::Service => self.sl,
            LinkClass::Feeder => self.fl,
            LinkClass::InterSatellite => self.isl,
            LinkClass::InterGroundStation => self.igsl,
        }
    }

    fn bump(&mut self, class: LinkClass) {
        match class {
            LinkClass::Service => self.sl += 1,
            LinkClass::Feeder => self.fl += 1,
            LinkClass::InterSatellite => self.isl += 1,
            LinkClass::InterGroundStation => self.igsl += 1,
        }
    }

    /// Total link crossings over all classes.
    pub fn crossings(&self) -> u32 {
        self.sl + self.fl + self.isl + self.igsl
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MessageCounts {
    pub total: LinkCounts,
    pub by_phase: BTreeMap<Phase, LinkCounts>,
    /// Transmitted, non-elided messages.
    pub messages: u32,
}

pub fn message_counts(trace: &TimelineTrace) -> MessageCounts {
    let mut counts = MessageCounts {
        by_phase: Phase::ALL.iter().map(|p| (*p, LinkCounts::default())).collect(),
        ..MessageCounts::default()
    };
    for e in trace.events.iter().filter(|e| e.counts_as_message()) {
        counts.messages += 1;
        // a message crossing the same class twice counts once per crossing
        for &class in &e.links {
            counts.total.bump(class);
            counts.by_phase.get_mut(&e.phase).expect("all phases present").bump(class);
        }
    }
    counts
}
