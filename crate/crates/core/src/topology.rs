//! Physical nodes, links and logical function placement for each reference
//! scenario and split deployment.
//!
//! Scenario A has one satellite serving both cells. B has two satellites and
//! a single ground station; B1 attaches the feeder link to the source
//! satellite, B2 to the target satellite, and the other satellite reaches
//! ground over the ISL. C has two satellites, each with its own ground
//! station, joined by an ISL and an inter-GS link; the core network sits at
//! one of the two ground stations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LinkClass, LinkDelays};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scenario {
    A,
    B1,
    B2,
    C,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::A, Scenario::B1, Scenario::B2, Scenario::C];

    /// Scenario family without the B variant suffix.
    pub fn family(self) -> &'static str {
        match self {
            Scenario::A => "A",
            Scenario::B1 | Scenario::B2 => "B",
            Scenario::C => "C",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scenario::A => "A",
            Scenario::B1 => "B1",
            Scenario::B2 => "B2",
            Scenario::C => "C",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplitOption {
    #[serde(rename = "lls")]
    Lls,
    #[serde(rename = "cu-du")]
    CuDu,
    #[serde(rename = "gnb")]
    GnbOnboard,
}

impl SplitOption {
    pub const ALL: [SplitOption; 3] = [SplitOption::Lls, SplitOption::CuDu, SplitOption::GnbOnboard];

    pub fn label(self) -> &'static str {
        match self {
            SplitOption::Lls => "lls",
            SplitOption::CuDu => "cu-du",
            SplitOption::GnbOnboard => "gnb",
        }
    }
}

impl fmt::Display for SplitOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SplitOption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lls" => Ok(SplitOption::Lls),
            "cu-du" | "cu_du" | "cudu" => Ok(SplitOption::CuDu),
            "gnb" | "gnb-onboard" | "gnb_onboard" => Ok(SplitOption::GnbOnboard),
            other => Err(Error::InvalidArgument(format!("unknown split {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmfSite {
    #[default]
    SourceGs,
    TargetGs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Deployment {
    pub scenario: Scenario,
    pub split: SplitOption,
    /// Only meaningful in scenario C; elsewhere the core sits at GS1.
    #[serde(default)]
    pub amf_site: AmfSite,
}

impl Deployment {
    pub fn new(scenario: Scenario, split: SplitOption) -> Self {
        Self { scenario, split, amf_site: AmfSite::SourceGs }
    }
}

impl fmt::Display for Deployment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.scenario, self.split)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeId {
    #[serde(rename = "UE")]
    Ue,
    #[serde(rename = "SAT1")]
    Sat1,
    #[serde(rename = "SAT2")]
    Sat2,
    #[serde(rename = "GS1")]
    Gs1,
    #[serde(rename = "GS2")]
    Gs2,
}

impl NodeId {
    pub fn is_satellite(self) -> bool {
        matches!(self, NodeId::Sat1 | NodeId::Sat2)
    }

    pub fn is_ground_station(self) -> bool {
        matches!(self, NodeId::Gs1 | NodeId::Gs2)
    }

    pub fn label(self) -> &'static str {
        match self {
            NodeId::Ue => "UE",
            NodeId::Sat1 => "SAT1",
            NodeId::Sat2 => "SAT2",
            NodeId::Gs1 => "GS1",
            NodeId::Gs2 => "GS2",
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Logical functions of the source chain, target chain and core network.
/// A "common" DU or CU is the source and target function placed on one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RanFunction {
    #[serde(rename = "UE")]
    Ue,
    #[serde(rename = "sRU")]
    SourceRu,
    #[serde(rename = "tRU")]
    TargetRu,
    #[serde(rename = "sDU")]
    SourceDu,
    #[serde(rename = "tDU")]
    TargetDu,
    #[serde(rename = "sCU")]
    SourceCu,
    #[serde(rename = "tCU")]
    TargetCu,
    #[serde(rename = "AMF_UPF")]
    AmfUpf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chain {
    Source,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Layer {
    Ru,
    Du,
    Cu,
}

impl RanFunction {
    pub const ALL: [RanFunction; 8] = [
        RanFunction::Ue,
        RanFunction::SourceRu,
        RanFunction::TargetRu,
        RanFunction::SourceDu,
        RanFunction::TargetDu,
        RanFunction::SourceCu,
        RanFunction::TargetCu,
        RanFunction::AmfUpf,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RanFunction::Ue => "UE",
            RanFunction::SourceRu => "sRU",
            RanFunction::TargetRu => "tRU",
            RanFunction::SourceDu => "sDU",
            RanFunction::TargetDu => "tDU",
            RanFunction::SourceCu => "sCU",
            RanFunction::TargetCu => "tCU",
            RanFunction::AmfUpf => "AMF_UPF",
        }
    }

    fn chain_layer(self) -> Option<(Chain, Layer)> {
        use RanFunction::*;
        Some(match self {
            SourceRu => (Chain::Source, Layer::Ru),
            SourceDu => (Chain::Source, Layer::Du),
            SourceCu => (Chain::Source, Layer::Cu),
            TargetRu => (Chain::Target, Layer::Ru),
            TargetDu => (Chain::Target, Layer::Du),
            TargetCu => (Chain::Target, Layer::Cu),
            Ue | AmfUpf => return None,
        })
    }
}

fn chain_function(chain: Chain, layer: Layer) -> RanFunction {
    match (chain, layer) {
        (Chain::Source, Layer::Ru) => RanFunction::SourceRu,
        (Chain::Source, Layer::Du) => RanFunction::SourceDu,
        (Chain::Source, Layer::Cu) => RanFunction::SourceCu,
        (Chain::Target, Layer::Ru) => RanFunction::TargetRu,
        (Chain::Target, Layer::Du) => RanFunction::TargetDu,
        (Chain::Target, Layer::Cu) => RanFunction::TargetCu,
    }
}

impl fmt::Display for RanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub hosted_functions: Vec<RanFunction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeId,
    pub b: NodeId,
    pub class: LinkClass,
    pub delay_ms: f64,
}

impl Link {
    fn connects(&self, x: NodeId, y: NodeId) -> bool {
        (self.a == x && self.b == y) || (self.a == y && self.b == x)
    }

    fn other(&self, x: NodeId) -> Option<NodeId> {
        if self.a == x {
            Some(self.b)
        } else if self.b == x {
            Some(self.a)
        } else {
            None
        }
    }
}

/// A directed traversal of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hop {
    pub from: NodeId,
    pub to: NodeId,
    pub class: LinkClass,
    pub delay_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub from: NodeId,
    pub to: NodeId,
    pub hops: Vec<Hop>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResolvedPath {
    pub hops: Vec<Hop>,
    pub delay_ms: f64,
}

impl ResolvedPath {
    fn from_hops(hops: Vec<Hop>) -> Self {
        let delay_ms = hops.iter().map(|h| h.delay_ms).sum();
        Self { hops, delay_ms }
    }

    pub fn classes(&self) -> Vec<LinkClass> {
        self.hops.iter().map(|h| h.class).collect()
    }

    /// Nodes strictly between the two endpoints.
    pub fn relay_count(&self) -> usize {
        self.hops.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self.hops.first().map(|h| h.from).into_iter().collect();
        out.extend(self.hops.iter().map(|h| h.to));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub deployment: Deployment,
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
    pub placement: BTreeMap<RanFunction, NodeId>,
    /// Routes between every ordered pair of distinct network nodes (UE
    /// excluded; UE traffic follows the serving chain).
    pub routes: Vec<Route>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ProcedureVariant {
    #[serde(rename = "intra-du")]
    IntraDu,
    #[serde(rename = "inter-du")]
    InterDu,
    #[serde(rename = "inter-gnb-intra-amf")]
    InterGnbIntraAmf,
}

impl ProcedureVariant {
    pub const ALL: [ProcedureVariant; 3] = [
        ProcedureVariant::IntraDu,
        ProcedureVariant::InterDu,
        ProcedureVariant::InterGnbIntraAmf,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProcedureVariant::IntraDu => "intra-du",
            ProcedureVariant::InterDu => "inter-du",
            ProcedureVariant::InterGnbIntraAmf => "inter-gnb-intra-amf",
        }
    }
}

impl fmt::Display for ProcedureVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn select_procedure(dep: &Deployment) -> ProcedureVariant {
    use SplitOption::*;
    match (dep.scenario, dep.split) {
        (Scenario::A, _) => ProcedureVariant::IntraDu,
        (Scenario::B1 | Scenario::B2, Lls) => ProcedureVariant::IntraDu,
        (Scenario::B1 | Scenario::B2, CuDu) => ProcedureVariant::InterDu,
        (Scenario::B1 | Scenario::B2, GnbOnboard) => ProcedureVariant::InterGnbIntraAmf,
        (Scenario::C, _) => ProcedureVariant::InterGnbIntraAmf,
    }
}

pub fn build_topology(dep: Deployment, delays: &LinkDelays) -> Topology {
    use NodeId::*;

    let link = |a, b, class| Link { a, b, class, delay_ms: delays.delay_ms(class) };
    let (sl, fl, isl, igsl) = (
        LinkClass::Service,
        LinkClass::Feeder,
        LinkClass::InterSatellite,
        LinkClass::InterGroundStation,
    );

    let links = match dep.scenario {
        Scenario::A => vec![link(Ue, Sat1, sl), link(Sat1, Gs1, fl)],
        Scenario::B1 => vec![
            link(Ue, Sat1, sl),
            link(Ue, Sat2, sl),
            link(Sat1, Gs1, fl),
            link(Sat1, Sat2, isl),
        ],
        Scenario::B2 => vec![
            link(Ue, Sat1, sl),
            link(Ue, Sat2, sl),
            link(Sat2, Gs1, fl),
            link(Sat2, Sat1, isl),
        ],
        Scenario::C => vec![
            link(Ue, Sat1, sl),
            link(Ue, Sat2, sl),
            link(Sat1, Gs1, fl),
            link(Sat2, Gs2, fl),
            link(Sat1, Sat2, isl),
            link(Gs1, Gs2, igsl),
        ],
    };

    // (source sat, target sat, source ground, target ground)
    let (s_sat, t_sat, s_gs, t_gs) = match dep.scenario {
        Scenario::A => (Sat1, Sat1, Gs1, Gs1),
        Scenario::B1 | Scenario::B2 => (Sat1, Sat2, Gs1, Gs1),
        Scenario::C => (Sat1, Sat2, Gs1, Gs2),
    };
    let (s_du, t_du, s_cu, t_cu) = match dep.split {
        SplitOption::Lls => (s_gs, t_gs, s_gs, t_gs),
        SplitOption::CuDu => (s_sat, t_sat, s_gs, t_gs),
        SplitOption::GnbOnboard => (s_sat, t_sat, s_sat, t_sat),
    };
    let amf = match (dep.scenario, dep.amf_site) {
        (Scenario::C, AmfSite::TargetGs) => Gs2,
        _ => Gs1,
    };

    let placement: BTreeMap<RanFunction, NodeId> = [
        (RanFunction::Ue, Ue),
        (RanFunction::SourceRu, s_sat),
        (RanFunction::TargetRu, t_sat),
        (RanFunction::SourceDu, s_du),
        (RanFunction::TargetDu, t_du),
        (RanFunction::SourceCu, s_cu),
        (RanFunction::TargetCu, t_cu),
        (RanFunction::AmfUpf, amf),
    ]
    .into_iter()
    .collect();

    let mut node_ids: Vec<NodeId> = links.iter().flat_map(|l| [l.a, l.b]).collect();
    node_ids.sort();
    node_ids.dedup();
    let nodes = node_ids
        .iter()
        .map(|&id| Node {
            id,
            hosted_functions: placement
                .iter()
                .filter(|(_, &n)| n == id)
                .map(|(&f, _)| f)
                .collect(),
        })
        .collect();

    let mut topo = Topology {
        deployment: dep,
        nodes,
        links,
        placement,
        routes: Vec::new(),
    };
    let network: Vec<NodeId> = node_ids.into_iter().filter(|n| *n != Ue).collect();
    for &a in &network {
        for &b in &network {
            if a != b {
                let hops = topo
                    .route_hops(a, b)
                    .expect("reference topologies are connected");
                topo.routes.push(Route { from: a, to: b, hops });
            }
        }
    }
    topo
}

impl Topology {
    pub fn node_of(&self, f: RanFunction) -> Result<NodeId> {
        self.placement.get(&f).copied().ok_or(Error::UnplacedFunction(f))
    }

    pub fn link_between(&self, a: NodeId, b: NodeId) -> Option<&Link> {
        self.links.iter().find(|l| l.connects(a, b))
    }

    fn hop(&self, from: NodeId, to: NodeId) -> Option<Hop> {
        self.link_between(from, to).map(|l| Hop {
            from,
            to,
            class: l.class,
            delay_ms: l.delay_ms,
        })
    }

    fn feeder_gs(&self, sat: NodeId) -> Option<NodeId> {
        self.links
            .iter()
            .filter(|l| l.class == LinkClass::Feeder)
            .find_map(|l| l.other(sat))
    }

    fn isl_peer(&self, sat: NodeId) -> Option<NodeId> {
        self.links
            .iter()
            .filter(|l| l.class == LinkClass::InterSatellite)
            .find_map(|l| l.other(sat))
    }

    /// Satellite-to-ground routing: the satellite's own feeder link first,
    /// then the inter-GS link if the destination is the other station. A
    /// satellite without a feeder link descends through its ISL peer.
    fn sat_to_ground(&self, sat: NodeId, gs: NodeId) -> Option<Vec<Hop>> {
        if let Some(own_gs) = self.feeder_gs(sat) {
            let mut hops = vec![self.hop(sat, own_gs)?];
            if own_gs != gs {
                hops.push(self.hop(own_gs, gs)?);
            }
            return Some(hops);
        }
        let peer = self.isl_peer(sat)?;
        let peer_gs = self.feeder_gs(peer)?;
        let mut hops = vec![self.hop(sat, peer)?, self.hop(peer, peer_gs)?];
        if peer_gs != gs {
            hops.push(self.hop(peer_gs, gs)?);
        }
        Some(hops)
    }

    fn route_hops(&self, from: NodeId, to: NodeId) -> Result<Vec<Hop>> {
        let unroutable = || Error::Unroutable {
            from: from.to_string(),
            to: to.to_string(),
        };
        if from == to {
            return Ok(Vec::new());
        }
        if from == NodeId::Ue || to == NodeId::Ue {
            return Err(unroutable());
        }
        let hops = match (from.is_satellite(), to.is_satellite()) {
            // sat-sat over ISL, gs-gs over IGSL
            (true, true) | (false, false) => self.hop(from, to).map(|h| vec![h]),
            (true, false) => self.sat_to_ground(from, to),
            (false, true) => self.sat_to_ground(to, from).map(reverse_hops),
        };
        hops.ok_or_else(unroutable)
    }

    pub fn route(&self, from: NodeId, to: NodeId) -> Result<Vec<Hop>> {
        if from == to {
            return Ok(Vec::new());
        }
        self.routes
            .iter()
            .find(|r| r.from == from && r.to == to)
            .map(|r| r.hops.clone())
            .ok_or(Error::Unroutable {
                from: from.to_string(),
                to: to.to_string(),
            })
    }

    /// UE to a chain function: serving SL to the chain's RU host, then up
    /// the chain RU -> DU -> CU across whatever separates those hosts.
    fn uu_hops(&self, target: RanFunction) -> Result<Vec<Hop>> {
        let Some((chain, layer)) = target.chain_layer() else {
            return Err(Error::Unroutable {
                from: "UE".into(),
                to: target.to_string(),
            });
        };
        let ue = self.node_of(RanFunction::Ue)?;
        let ru_node = self.node_of(chain_function(chain, Layer::Ru))?;
        let mut hops = vec![self.hop(ue, ru_node).ok_or(Error::Unroutable {
            from: "UE".into(),
            to: ru_node.to_string(),
        })?];
        let mut at = ru_node;
        for next in [Layer::Du, Layer::Cu] {
            if next > layer {
                break;
            }
            let node = self.node_of(chain_function(chain, next))?;
            hops.extend(self.route(at, node)?);
            at = node;
        }
        Ok(hops)
    }

    pub fn resolve_path(&self, from: RanFunction, to: RanFunction) -> Result<ResolvedPath> {
        let a = self.node_of(from)?;
        let b = self.node_of(to)?;
        let hops = if from == RanFunction::Ue && to == RanFunction::Ue {
            Vec::new()
        } else if from == RanFunction::Ue {
            self.uu_hops(to)?
        } else if to == RanFunction::Ue {
            reverse_hops(self.uu_hops(from)?)
        } else {
            self.route(a, b)?
        };
        Ok(ResolvedPath::from_hops(hops))
    }
}

fn reverse_hops(hops: Vec<Hop>) -> Vec<Hop> {
    hops.into_iter()
        .rev()
        .map(|h| Hop { from: h.to, to: h.from, ..h })
        .collect()
}

pub fn resolve_path(topo: &Topology, from: RanFunction, to: RanFunction) -> Result<ResolvedPath> {
    topo.resolve_path(from, to)
}
