//! Function-split catalog and fronthaul feasibility rules.
//!
//! The catalog holds, for each of the ten Small Cell Forum split options,
//! the one-way fronthaul latency class(es), the resulting maximum fronthaul
//! distance, the required fronthaul bandwidth for 2 and 64 antennas and the
//! baseband compute at the ground station and on the satellite. Values are
//! embedded verbatim; nothing here re-derives them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ROUNDED_LIGHT_SPEED_KM_PER_MS;

pub const CATALOG_VERSION: &str = "fs-catalog/1";
pub const CATALOG_SOURCE: &str =
    "SCF one-way fronthaul latency and bandwidth figures; single-user baseband GOPS split model";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatencyClass {
    NonIdeal,
    SubIdeal,
    NearIdeal,
    Ideal,
}

impl LatencyClass {
    pub fn label(self) -> &'static str {
        match self {
            LatencyClass::NonIdeal => "non-ideal",
            LatencyClass::SubIdeal => "sub-ideal",
            LatencyClass::NearIdeal => "near-ideal",
            LatencyClass::Ideal => "ideal",
        }
    }
}

impl fmt::Display for LatencyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LatencyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "non-ideal" => Ok(LatencyClass::NonIdeal),
            "sub-ideal" => Ok(LatencyClass::SubIdeal),
            "near-ideal" => Ok(LatencyClass::NearIdeal),
            "ideal" => Ok(LatencyClass::Ideal),
            other => Err(Error::InvalidArgument(format!("unknown latency class {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Dl,
    Ul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub enum AntennaCount {
    Two,
    SixtyFour,
}

impl TryFrom<u32> for AntennaCount {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        match n {
            2 => Ok(AntennaCount::Two),
            64 => Ok(AntennaCount::SixtyFour),
            other => Err(Error::InvalidArgument(format!(
                "antenna count must be 2 or 64, got {other}"
            ))),
        }
    }
}

impl From<AntennaCount> for u32 {
    fn from(n: AntennaCount) -> u32 {
        match n {
            AntennaCount::Two => 2,
            AntennaCount::SixtyFour => 64,
        }
    }
}

// serde's try_from needs a Display error
impl fmt::Display for AntennaCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u32::from(*self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    Exact,
    LessThan,
    GreaterThan,
}

/// A compute figure in GOPS that may be published as a bound ("< 8").
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gops {
    pub value: f64,
    pub qualifier: Qualifier,
}

impl Gops {
    pub const fn exact(value: f64) -> Self {
        Self { value, qualifier: Qualifier::Exact }
    }

    pub const fn less_than(value: f64) -> Self {
        Self { value, qualifier: Qualifier::LessThan }
    }

    pub const fn greater_than(value: f64) -> Self {
        Self { value, qualifier: Qualifier::GreaterThan }
    }

    /// Whether a platform with `capacity` GOPS can host this requirement.
    /// A "> x" requirement needs strictly more than x.
    pub fn fits_within(&self, capacity: f64) -> bool {
        match self.qualifier {
            Qualifier::Exact | Qualifier::LessThan => self.value <= capacity,
            Qualifier::GreaterThan => capacity > self.value,
        }
    }
}

impl fmt::Display for Gops {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qualifier {
            Qualifier::Exact => write!(f, "{}", self.value),
            Qualifier::LessThan => write!(f, "<{}", self.value),
            Qualifier::GreaterThan => write!(f, ">{}", self.value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatencyRequirement {
    pub class: LatencyClass,
    pub budget_ms: f64,
    pub max_fh_distance_km: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionalBandwidth {
    pub dl: f64,
    pub ul: f64,
}

/// Fronthaul bandwidth in Mbps keyed by antenna count, then direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FronthaulBandwidth {
    pub n_ant_2: DirectionalBandwidth,
    pub n_ant_64: DirectionalBandwidth,
}

impl FronthaulBandwidth {
    pub fn get(&self, antennas: AntennaCount, direction: Direction) -> f64 {
        let row = match antennas {
            AntennaCount::Two => &self.n_ant_2,
            AntennaCount::SixtyFour => &self.n_ant_64,
        };
        match direction {
            Direction::Dl => row.dl,
            Direction::Ul => row.ul,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSplitSpec {
    pub id: u8,
    pub name: String,
    /// One entry, or two for the lower PHY splits that publish both a
    /// near-ideal and an ideal requirement.
    pub latency: Vec<LatencyRequirement>,
    pub fh_bw_mbps: FronthaulBandwidth,
    pub gops_gs: Gops,
    pub gops_satellite: Gops,
}

impl FunctionSplitSpec {
    pub fn requirement(&self, class: LatencyClass) -> Option<&LatencyRequirement> {
        self.latency.iter().find(|r| r.class == class)
    }

    /// Published class with the largest latency budget.
    pub fn loosest(&self) -> &LatencyRequirement {
        self.latency
            .iter()
            .max_by(|a, b| a.budget_ms.total_cmp(&b.budget_ms))
            .expect("every split publishes at least one latency class")
    }

    pub fn bandwidth(&self, antennas: AntennaCount, direction: Direction) -> f64 {
        self.fh_bw_mbps.get(antennas, direction)
    }
}

/// Versioned export document for the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogDocument {
    pub version: String,
    pub source: String,
    pub splits: Vec<FunctionSplitSpec>,
}

fn req(class: LatencyClass, budget_ms: f64, max_fh_distance_km: f64) -> LatencyRequirement {
    LatencyRequirement { class, budget_ms, max_fh_distance_km }
}

fn bw(dl2: f64, ul2: f64, dl64: f64, ul64: f64) -> FronthaulBandwidth {
    FronthaulBandwidth {
        n_ant_2: DirectionalBandwidth { dl: dl2, ul: ul2 },
        n_ant_64: DirectionalBandwidth { dl: dl64, ul: ul64 },
    }
}

static CATALOG: LazyLock<Vec<FunctionSplitSpec>> = LazyLock::new(|| {
    use LatencyClass::*;
    let row = |id: u8, name: &str, latency: Vec<LatencyRequirement>, fh, gs, sat| FunctionSplitSpec {
        id,
        name: name.to_owned(),
        latency,
        fh_bw_mbps: fh,
        gops_gs: gs,
        gops_satellite: sat,
    };
    let non_ideal = || vec![req(NonIdeal, 30.0, 9000.0)];
    let sub_ideal = || vec![req(SubIdeal, 6.0, 1800.0)];
    let dual = || vec![req(NearIdeal, 2.0, 600.0), req(Ideal, 0.25, 75.0)];
    let (gs_hi, sat_hi) = (Gops::less_than(8.0), Gops::greater_than(36.5));
    vec![
        row(1, "RRC - PDCP", non_ideal(), bw(149.9, 48.6, 149.9, 48.6), gs_hi, sat_hi),
        row(2, "PDCP - RLC", non_ideal(), bw(150.0, 48.7, 150.0, 48.7), gs_hi, sat_hi),
        row(3, "RLC - MAC", non_ideal(), bw(150.6, 48.9, 150.6, 48.9), gs_hi, sat_hi),
        row(4, "hMAC - lMAC", sub_ideal(), bw(151.3, 49.4, 151.3, 49.4), gs_hi, sat_hi),
        row(5, "MAC - PHY", sub_ideal(), bw(152.3, 49.9, 152.3, 49.9), gs_hi, sat_hi),
        row(
            6,
            "PHY Split I",
            vec![req(NearIdeal, 2.0, 600.0)],
            bw(173.1, 451.6, 173.1, 451.6),
            Gops::exact(8.0),
            Gops::exact(36.5),
        ),
        row(7, "PHY Split II", dual(), bw(932.6, 903.2, 29843.0, 28901.0), Gops::exact(15.9), Gops::exact(28.6)),
        row(8, "PHY Split III", dual(), bw(1075.2, 921.6, 34406.0, 29491.0), Gops::exact(18.5), Gops::exact(26.0)),
        row(9, "PHY Split IIIb", dual(), bw(1966.1, 1966.1, 62915.0, 62915.0), Gops::exact(19.8), Gops::exact(24.7)),
        row(
            10,
            "PHY Split IV / PHY - RF",
            vec![req(Ideal, 0.25, 75.0)],
            bw(2457.6, 2457.6, 78643.0, 78643.0),
            Gops::exact(23.8),
            Gops::exact(20.7),
        ),
    ]
});

pub fn catalog() -> &'static [FunctionSplitSpec] {
    &CATALOG
}

pub fn catalog_document() -> CatalogDocument {
    CatalogDocument {
        version: CATALOG_VERSION.to_owned(),
        source: CATALOG_SOURCE.to_owned(),
        splits: catalog().to_vec(),
    }
}

pub fn get_split(id: u8) -> Result<&'static FunctionSplitSpec> {
    catalog().iter().find(|s| s.id == id).ok_or(Error::UnknownSplit(id))
}

/// Free-space distance covered within a one-way latency budget, using the
/// rounded 300 km/ms light speed.
pub fn max_fh_distance(latency_ms: f64) -> f64 {
    max_fh_distance_with(latency_ms, ROUNDED_LIGHT_SPEED_KM_PER_MS)
}

pub fn max_fh_distance_with(latency_ms: f64, light_speed_km_per_ms: f64) -> f64 {
    latency_ms * light_speed_km_per_ms
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityQuery {
    pub split_id: u8,
    pub use_case: LatencyClass,
    /// Total fronthaul path length; several hops may share one budget.
    pub total_path_km: f64,
    pub antennas: AntennaCount,
    pub beams: u32,
    pub satellite_gops_capacity: Option<f64>,
    /// Allow judging a split at a class it does not publish.
    pub relax: bool,
}

impl FeasibilityQuery {
    pub fn new(split_id: u8, use_case: LatencyClass, total_path_km: f64) -> Self {
        Self {
            split_id,
            use_case,
            total_path_km,
            antennas: AntennaCount::Two,
            beams: 1,
            satellite_gops_capacity: None,
            relax: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub split_id: u8,
    pub split_name: String,
    pub use_case: LatencyClass,
    pub separation_km: f64,
    pub budget_ms: f64,
    pub budget_km: f64,
    pub feasible: bool,
    pub margin_km: f64,
    pub antennas: AntennaCount,
    pub beams: u32,
    pub bw_required_mbps: DirectionalBandwidth,
    pub satellite_gops_required: Gops,
    pub compute_feasible: Option<bool>,
    pub notes: Vec<String>,
}

pub fn check_feasibility(query: &FeasibilityQuery) -> Result<FeasibilityVerdict> {
    let spec = get_split(query.split_id)?;
    if !(query.total_path_km.is_finite() && query.total_path_km >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "path length must be non-negative, got {}",
            query.total_path_km
        )));
    }
    if query.beams == 0 {
        return Err(Error::InvalidArgument("beam count must be positive".into()));
    }
    let mut notes = Vec::new();
    let requirement = match spec.requirement(query.use_case) {
        Some(r) => *r,
        None if query.relax => {
            let fallback = *spec.loosest();
            notes.push(format!(
                "{} not published for split {}; judged at {}",
                query.use_case, spec.id, fallback.class
            ));
            fallback
        }
        None => {
            return Err(Error::UseCaseUndefined {
                split: spec.id,
                use_case: query.use_case,
            })
        }
    };
    if query.relax && spec.latency.len() > 1 && requirement.class == LatencyClass::NearIdeal {
        notes.push("HARQ/CSI timing relaxed for NTN; near-ideal budget applied".into());
    }
    let beams = f64::from(query.beams);
    let bw_required_mbps = DirectionalBandwidth {
        dl: spec.bandwidth(query.antennas, Direction::Dl) * beams,
        ul: spec.bandwidth(query.antennas, Direction::Ul) * beams,
    };
    let compute_feasible = query
        .satellite_gops_capacity
        .map(|cap| spec.gops_satellite.fits_within(cap));
    Ok(FeasibilityVerdict {
        split_id: spec.id,
        split_name: spec.name.clone(),
        use_case: requirement.class,
        separation_km: query.total_path_km,
        budget_ms: requirement.budget_ms,
        budget_km: requirement.max_fh_distance_km,
        feasible: query.total_path_km <= requirement.max_fh_distance_km,
        margin_km: requirement.max_fh_distance_km - query.total_path_km,
        antennas: query.antennas,
        beams: query.beams,
        bw_required_mbps,
        satellite_gops_required: spec.gops_satellite,
        compute_feasible,
        notes,
    })
}

/// The class a split is judged at when sweeping the whole catalog: lower PHY
/// splits with two classes use near-ideal only under NTN relaxation.
pub fn sweep_class(spec: &FunctionSplitSpec, relax_ntn: bool) -> LatencyClass {
    if spec.latency.len() > 1 {
        if relax_ntn {
            LatencyClass::NearIdeal
        } else {
            LatencyClass::Ideal
        }
    } else {
        spec.latency[0].class
    }
}

pub fn feasible_set(separation_km: f64, relax_ntn: bool) -> Result<BTreeSet<u8>> {
    if !(separation_km.is_finite() && separation_km > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "separation must be positive, got {separation_km}"
        )));
    }
    let mut out = BTreeSet::new();
    for spec in catalog() {
        let query = FeasibilityQuery::new(spec.id, sweep_class(spec, relax_ntn), separation_km);
        if check_feasibility(&query)?.feasible {
            out.insert(spec.id);
        }
    }
    Ok(out)
}

pub fn bw_ratio(from: u8, to: u8, antennas: AntennaCount, direction: Direction) -> Result<f64> {
    let a = get_split(from)?.bandwidth(antennas, direction);
    let b = get_split(to)?.bandwidth(antennas, direction);
    Ok(b / a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_one() {
        let s = get_split(1).unwrap();
        assert_eq!(s.latency, vec![req(LatencyClass::NonIdeal, 30.0, 9000.0)]);
        assert_eq!(s.bandwidth(AntennaCount::Two, Direction::Dl), 149.9);
        assert_eq!(s.bandwidth(AntennaCount::Two, Direction::Ul), 48.6);
        assert_eq!(s.gops_gs, Gops::less_than(8.0));
        assert_eq!(s.gops_satellite, Gops::greater_than(36.5));
    }

    #[test]
    fn row_seven_has_two_classes() {
        let s = get_split(7).unwrap();
        assert_eq!(s.requirement(LatencyClass::NearIdeal).unwrap().max_fh_distance_km, 600.0);
        assert_eq!(s.requirement(LatencyClass::Ideal).unwrap().max_fh_distance_km, 75.0);
        assert_eq!(s.bandwidth(AntennaCount::SixtyFour, Direction::Dl), 29843.0);
    }

    #[test]
    fn row_ten_symmetric() {
        let s = get_split(10).unwrap();
        for n in [AntennaCount::Two, AntennaCount::SixtyFour] {
            assert_eq!(s.bandwidth(n, Direction::Dl), s.bandwidth(n, Direction::Ul));
        }
        assert_eq!(s.bandwidth(AntennaCount::Two, Direction::Dl), 2457.6);
        assert_eq!(s.bandwidth(AntennaCount::SixtyFour, Direction::Dl), 78643.0);
    }

    #[test]
    fn unknown_split() {
        assert!(matches!(get_split(0), Err(Error::UnknownSplit(0))));
        assert!(matches!(get_split(11), Err(Error::UnknownSplit(11))));
    }

    #[test]
    fn max_distance_examples() {
        assert_eq!(max_fh_distance(30.0), 9000.0);
        assert_eq!(max_fh_distance(0.25), 75.0);
        assert_eq!(max_fh_distance(0.0), 0.0);
        for spec in catalog() {
            for r in &spec.latency {
                assert_eq!(max_fh_distance(r.budget_ms), r.max_fh_distance_km);
            }
        }
    }

    #[test]
    fn feasibility_examples() {
        let v = check_feasibility(&FeasibilityQuery::new(3, LatencyClass::NonIdeal, 1935.0)).unwrap();
        assert!(v.feasible);
        assert_eq!(v.margin_km, 7065.0);

        let v = check_feasibility(&FeasibilityQuery::new(7, LatencyClass::NearIdeal, 600.0)).unwrap();
        assert!(v.feasible);
        assert_eq!(v.margin_km, 0.0);

        let v = check_feasibility(&FeasibilityQuery::new(10, LatencyClass::Ideal, 600.0)).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.margin_km, -525.0);

        let mut q = FeasibilityQuery::new(8, LatencyClass::NearIdeal, 600.0);
        q.beams = 10;
        q.antennas = AntennaCount::SixtyFour;
        let v = check_feasibility(&q).unwrap();
        assert_eq!(v.bw_required_mbps.dl, 344060.0);
    }

    #[test]
    fn undefined_use_case() {
        let q = FeasibilityQuery::new(10, LatencyClass::NearIdeal, 50.0);
        assert!(matches!(
            check_feasibility(&q),
            Err(Error::UseCaseUndefined { split: 10, use_case: LatencyClass::NearIdeal })
        ));
        let relaxed = FeasibilityQuery { relax: true, ..q };
        let v = check_feasibility(&relaxed).unwrap();
        assert_eq!(v.use_case, LatencyClass::Ideal);
        assert!(v.feasible);
        assert_eq!(v.notes.len(), 1);
    }

    #[test]
    fn compute_capacity() {
        let mut q = FeasibilityQuery::new(1, LatencyClass::NonIdeal, 100.0);
        q.satellite_gops_capacity = Some(36.5);
        assert_eq!(check_feasibility(&q).unwrap().compute_feasible, Some(false));
        q.satellite_gops_capacity = Some(36.6);
        assert_eq!(check_feasibility(&q).unwrap().compute_feasible, Some(true));
        let mut q = FeasibilityQuery::new(8, LatencyClass::NearIdeal, 100.0);
        q.satellite_gops_capacity = Some(26.0);
        assert_eq!(check_feasibility(&q).unwrap().compute_feasible, Some(true));
        q.satellite_gops_capacity = None;
        assert_eq!(check_feasibility(&q).unwrap().compute_feasible, None);
    }

    #[test]
    fn feasible_sets() {
        let ids = |v: &[u8]| v.iter().copied().collect::<BTreeSet<_>>();
        assert_eq!(feasible_set(1935.0, true).unwrap(), ids(&[1, 2, 3]));
        assert_eq!(feasible_set(1935.0, false).unwrap(), ids(&[1, 2, 3]));
        assert_eq!(feasible_set(600.0, true).unwrap(), ids(&[1, 2, 3, 4, 5, 6, 7, 8, 9]));
        assert_eq!(feasible_set(600.0, false).unwrap(), ids(&[1, 2, 3, 4, 5, 6]));
        assert!(feasible_set(0.0, true).is_err());
    }

    #[test]
    fn bandwidth_ratios() {
        let r = bw_ratio(6, 7, AntennaCount::Two, Direction::Dl).unwrap();
        assert!((r - 5.39).abs() < 0.01, "{r}");
        let r = bw_ratio(6, 7, AntennaCount::SixtyFour, Direction::Dl).unwrap();
        assert!((r - 172.4).abs() < 0.1, "{r}");
        assert_eq!(bw_ratio(4, 4, AntennaCount::SixtyFour, Direction::Ul).unwrap(), 1.0);
        assert!(bw_ratio(0, 4, AntennaCount::Two, Direction::Ul).is_err());
    }

    #[test]
    fn catalog_shape_invariants() {
        let cat = catalog();
        assert_eq!(cat.len(), 10);
        for (i, s) in cat.iter().enumerate() {
            assert_eq!(usize::from(s.id), i + 1);
        }
        for n in [AntennaCount::Two, AntennaCount::SixtyFour] {
            for d in [Direction::Dl, Direction::Ul] {
                for w in cat.windows(2) {
                    assert!(w[0].bandwidth(n, d) <= w[1].bandwidth(n, d), "split {} {n} {d:?}", w[1].id);
                }
            }
        }
        for s in &cat[..5] {
            assert_eq!(s.fh_bw_mbps.n_ant_2, s.fh_bw_mbps.n_ant_64);
        }
        for w in cat[5..].windows(2) {
            assert!(w[1].gops_satellite.value <= w[0].gops_satellite.value);
            assert!(w[1].gops_gs.value >= w[0].gops_gs.value);
        }
        for s in &cat[5..] {
            assert!((s.gops_gs.value + s.gops_satellite.value - 44.5).abs() <= 0.1);
        }
    }

    #[test]
    fn antenna_count_parsing() {
        assert_eq!(AntennaCount::try_from(2).unwrap(), AntennaCount::Two);
        assert!(AntennaCount::try_from(4).is_err());
        let parsed: AntennaCount = serde_json::from_str("64").unwrap();
        assert_eq!(parsed, AntennaCount::SixtyFour);
        assert!(serde_json::from_str::<AntennaCount>("8").is_err());
    }
}
