//! Command-line surface: argument definitions, JSON config ingestion and the
//! subcommand implementations. The binary only parses and prints.
//!
//! Precedence is flags > config file > built-in defaults. Exit codes: 0 on
//! success, 1 for usage or configuration errors, 2 when a grid ordering
//! check does not pass.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cho::{message_counts, CatalogOptions, MessageCounts, Msg4Anchor, PhaseDurations, TimelineTrace, TimingConfig};
use crate::error::{Error, Result};
use crate::geometry::{link_delays, slant_range, GeometryConfig, LinkDelays};
use crate::metrics::{
    check_available_trends, evaluate_cell, run_grid_with_delays, serialize, to_canonical_json, CheckOutcome,
    Format, MetricsReport, OrderingCheck,
};
use crate::split_catalog::{
    catalog, catalog_document, check_feasibility, sweep_class, AntennaCount, FeasibilityQuery, FeasibilityVerdict,
};
use crate::topology::{build_topology, AmfSite, Deployment, ProcedureVariant, Scenario, SplitOption};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_TREND_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ntnsplit", version, about = "LEO RAN function-split feasibility and CHO timeline analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Judge every function split against the feeder-link separation.
    Feasibility(CommonArgs),
    /// Evaluate one scenario/split cell and print its timeline.
    Cho(CommonArgs),
    /// Evaluate the full scenario x split grid and check the expected orderings.
    Grid(CommonArgs),
    /// Export the function-split catalog as JSON.
    Catalog(CommonArgs),
    /// Export the topology of one scenario/split cell as JSON.
    Topology(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "KM")]
    pub altitude: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub sl_elevation: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub fl_elevation: Option<f64>,
    #[arg(long, value_name = "N")]
    pub sats_per_plane: Option<u32>,
    /// Judge splits 7-9 at their near-ideal budget (default).
    #[arg(long, conflicts_with = "no_relax")]
    pub relax_ntn: bool,
    /// Judge splits 7-9 at their ideal budget.
    #[arg(long)]
    pub no_relax: bool,
    #[arg(long, value_name = "2|64")]
    pub antennas: Option<u32>,
    #[arg(long, value_name = "N")]
    pub beams: Option<u32>,
    /// Satellite compute capacity in GOPS for the compute check.
    #[arg(long, value_name = "GOPS")]
    pub sat_gops: Option<f64>,
    #[arg(long, value_name = "A|B|B1|B2|C")]
    pub scenario: Option<String>,
    #[arg(long, value_name = "lls|cu-du|gnb")]
    pub split: Option<String>,
    #[arg(long, value_name = "source|target")]
    pub amf_site: Option<String>,
    #[arg(long, value_name = "MS")]
    pub trigger_offset: Option<f64>,
    /// Use the published rounded delay set instead of deriving delays from geometry.
    #[arg(long)]
    pub reference_delays: bool,
    #[arg(long, value_name = "json|csv|plot-csv")]
    pub format: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryOverrides {
    pub earth_radius_km: Option<f64>,
    pub altitude_km: Option<f64>,
    pub sl_elevation_deg: Option<f64>,
    pub fl_elevation_deg: Option<f64>,
    pub sats_per_plane: Option<u32>,
    pub igsl_inflation: Option<f64>,
    pub light_speed_km_per_ms: Option<f64>,
    pub max_distance_light_speed_km_per_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingOverrides {
    pub per_message_processing_ms: Option<f64>,
    pub ssb_acquisition_ms: Option<f64>,
    pub cn_api_total_ms: Option<f64>,
    pub trigger_offset_ms: Option<f64>,
    pub processing_at_relays: Option<bool>,
}

/// Configuration document. Every field is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub geometry: GeometryOverrides,
    #[serde(default)]
    pub timing: TimingOverrides,
    pub relax_ntn: Option<bool>,
    pub antennas: Option<u32>,
    pub beams: Option<u32>,
    pub satellite_gops_capacity: Option<f64>,
    pub scenario: Option<String>,
    pub split: Option<String>,
    pub amf_site: Option<String>,
    pub reference_delays: Option<bool>,
    pub candidate_count: Option<u32>,
    pub msg4_anchor: Option<Msg4Anchor>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr; $($field:ident),* $(,)?) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Values set in `top` win over values in `self`.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay!(self.geometry, top.geometry;
            earth_radius_km, altitude_km, sl_elevation_deg, fl_elevation_deg, sats_per_plane,
            igsl_inflation, light_speed_km_per_ms, max_distance_light_speed_km_per_ms);
        overlay!(self.timing, top.timing;
            per_message_processing_ms, ssb_acquisition_ms, cn_api_total_ms, trigger_offset_ms,
            processing_at_relays);
        overlay!(self, top;
            relax_ntn, antennas, beams, satellite_gops_capacity, scenario, split, amf_site,
            reference_delays, candidate_count, msg4_anchor, format, out);
        self
    }

    pub fn from_args(args: &CommonArgs) -> Self {
        let relax_ntn = if args.no_relax {
            Some(false)
        } else if args.relax_ntn {
            Some(true)
        } else {
            None
        };
        RunConfig {
            geometry: GeometryOverrides {
                altitude_km: args.altitude,
                sl_elevation_deg: args.sl_elevation,
                fl_elevation_deg: args.fl_elevation,
                sats_per_plane: args.sats_per_plane,
                ..Default::default()
            },
            timing: TimingOverrides {
                trigger_offset_ms: args.trigger_offset,
                ..Default::default()
            },
            relax_ntn,
            antennas: args.antennas,
            beams: args.beams,
            satellite_gops_capacity: args.sat_gops,
            scenario: args.scenario.clone(),
            split: args.split.clone(),
            amf_site: args.amf_site.clone(),
            reference_delays: args.reference_delays.then_some(true),
            format: args.format.clone(),
            out: args.out.clone(),
            ..Default::default()
        }
    }

    /// Defaults, then the config file named by `--config`, then flags.
    pub fn from_args_and_file(args: &CommonArgs) -> Result<Self> {
        let base = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(base.overlay(&RunConfig::from_args(args)))
    }

    pub fn resolve(&self) -> Result<Settings> {
        let d = GeometryConfig::default();
        let g = &self.geometry;
        let geometry = GeometryConfig {
            earth_radius_km: g.earth_radius_km.unwrap_or(d.earth_radius_km),
            altitude_km: g.altitude_km.unwrap_or(d.altitude_km),
            sl_elevation_deg: g.sl_elevation_deg.unwrap_or(d.sl_elevation_deg),
            fl_elevation_deg: g.fl_elevation_deg.unwrap_or(d.fl_elevation_deg),
            sats_per_plane: g.sats_per_plane.unwrap_or(d.sats_per_plane),
            igsl_inflation: g.igsl_inflation.unwrap_or(d.igsl_inflation),
            light_speed_km_per_ms: g.light_speed_km_per_ms.unwrap_or(d.light_speed_km_per_ms),
            max_distance_light_speed_km_per_ms: g
                .max_distance_light_speed_km_per_ms
                .unwrap_or(d.max_distance_light_speed_km_per_ms),
        };
        geometry.validate()?;
        let dt = TimingConfig::default();
        let t = &self.timing;
        let timing = TimingConfig {
            per_message_processing_ms: t.per_message_processing_ms.unwrap_or(dt.per_message_processing_ms),
            ssb_acquisition_ms: t.ssb_acquisition_ms.unwrap_or(dt.ssb_acquisition_ms),
            cn_api_total_ms: t.cn_api_total_ms.unwrap_or(dt.cn_api_total_ms),
            trigger_offset_ms: t.trigger_offset_ms.unwrap_or(dt.trigger_offset_ms),
            processing_at_relays: t.processing_at_relays.unwrap_or(dt.processing_at_relays),
        };
        timing.validate()?;
        let antennas = AntennaCount::try_from(self.antennas.unwrap_or(2))?;
        let beams = self.beams.unwrap_or(1);
        if beams == 0 {
            return Err(Error::InvalidArgument("beam count must be positive".into()));
        }
        let scenario = self.scenario.as_deref().map(ScenarioSelection::from_str).transpose()?;
        let split = self.split.as_deref().map(SplitOption::from_str).transpose()?;
        let amf_site = match self.amf_site.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("source") | Some("source-gs") => AmfSite::SourceGs,
            Some("target") | Some("target-gs") => AmfSite::TargetGs,
            Some(other) => return Err(Error::InvalidArgument(format!("unknown AMF site {other:?}"))),
        };
        let candidate_count = self.candidate_count.unwrap_or(1);
        if candidate_count == 0 {
            return Err(Error::InvalidArgument("candidate count must be positive".into()));
        }
        let format = self.format.as_deref().unwrap_or("json").parse()?;
        Ok(Settings {
            geometry,
            timing,
            relax_ntn: self.relax_ntn.unwrap_or(true),
            antennas,
            beams,
            satellite_gops_capacity: self.satellite_gops_capacity,
            scenario,
            split,
            amf_site,
            reference_delays: self.reference_delays.unwrap_or(false),
            catalog: CatalogOptions {
                candidate_count,
                msg4_anchor: self.msg4_anchor.unwrap_or_default(),
            },
            format,
            out: self.out.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioSelection {
    One(Scenario),
    /// Both B variants.
    B,
}

impl ScenarioSelection {
    pub fn scenarios(self) -> Vec<Scenario> {
        match self {
            ScenarioSelection::One(s) => vec![s],
            ScenarioSelection::B => vec![Scenario::B1, Scenario::B2],
        }
    }
}

impl FromStr for ScenarioSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" => ScenarioSelection::One(Scenario::A),
            "B" => ScenarioSelection::B,
            "B1" => ScenarioSelection::One(Scenario::B1),
            "B2" => ScenarioSelection::One(Scenario::B2),
            "C" => ScenarioSelection::One(Scenario::C),
            other => return Err(Error::InvalidArgument(format!("unknown scenario {other:?}"))),
        })
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub geometry: GeometryConfig,
    pub timing: TimingConfig,
    pub relax_ntn: bool,
    pub antennas: AntennaCount,
    pub beams: u32,
    pub satellite_gops_capacity: Option<f64>,
    pub scenario: Option<ScenarioSelection>,
    pub split: Option<SplitOption>,
    pub amf_site: AmfSite,
    pub reference_delays: bool,
    pub catalog: CatalogOptions,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Settings {
    pub fn delays(&self) -> Result<LinkDelays> {
        if self.reference_delays {
            Ok(LinkDelays::reference_leo600())
        } else {
            link_delays(&self.geometry)
        }
    }

    fn single_deployment(&self) -> Result<Deployment> {
        let scenario = match self.scenario {
            Some(ScenarioSelection::One(s)) => s,
            Some(ScenarioSelection::B) => {
                return Err(Error::InvalidArgument(
                    "scenario B has two variants; pass --scenario B1 or B2".into(),
                ))
            }
            None => return Err(Error::InvalidArgument("--scenario is required".into())),
        };
        let split = self
            .split
            .ok_or_else(|| Error::InvalidArgument("--split is required".into()))?;
        Ok(Deployment { scenario, split, amf_site: self.amf_site })
    }

    fn grid_deployments(&self) -> Vec<Deployment> {
        let scenarios = self.scenario.map_or_else(|| Scenario::ALL.to_vec(), ScenarioSelection::scenarios);
        let splits = self.split.map_or_else(|| SplitOption::ALL.to_vec(), |s| vec![s]);
        scenarios
            .iter()
            .flat_map(|&scenario| {
                splits.iter().map(move |&split| Deployment { scenario, split, amf_site: self.amf_site })
            })
            .collect()
    }
}

/// What a command produced: the primary document and a human summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: Vec<u8>,
    pub summary: String,
    pub exit_code: i32,
    pub out: Option<PathBuf>,
}

impl CommandOutput {
    fn ok(body: Vec<u8>, settings: &Settings) -> Self {
        Self { body, summary: String::new(), exit_code: EXIT_OK, out: settings.out.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub altitude_km: f64,
    pub fl_elevation_deg: f64,
    pub separation_km: f64,
    pub relax_ntn: bool,
    pub antennas: AntennaCount,
    pub beams: u32,
    pub feasible_set: Vec<u8>,
    pub verdicts: Vec<FeasibilityVerdict>,
}

#[derive(Debug, Serialize)]
struct FeasibilityCsvRow<'a> {
    split_id: u8,
    split_name: &'a str,
    use_case: &'a str,
    separation_km: f64,
    budget_km: f64,
    feasible: bool,
    margin_km: f64,
    bw_dl_mbps: f64,
    bw_ul_mbps: f64,
    satellite_gops: String,
    compute_feasible: Option<bool>,
}

pub fn feasibility_report(settings: &Settings) -> Result<FeasibilityReport> {
    let separation_km = slant_range(&settings.geometry, settings.geometry.fl_elevation_deg)?;
    let verdicts = catalog()
        .iter()
        .map(|spec| {
            check_feasibility(&FeasibilityQuery {
                split_id: spec.id,
                use_case: sweep_class(spec, settings.relax_ntn),
                total_path_km: separation_km,
                antennas: settings.antennas,
                beams: settings.beams,
                satellite_gops_capacity: settings.satellite_gops_capacity,
                relax: settings.relax_ntn,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeasibilityReport {
        altitude_km: settings.geometry.altitude_km,
        fl_elevation_deg: settings.geometry.fl_elevation_deg,
        separation_km,
        relax_ntn: settings.relax_ntn,
        antennas: settings.antennas,
        beams: settings.beams,
        feasible_set: verdicts.iter().filter(|v| v.feasible).map(|v| v.split_id).collect(),
        verdicts,
    })
}

pub fn cmd_feasibility(settings: &Settings) -> Result<CommandOutput> {
    let report = feasibility_report(settings)?;
    let body = match settings.format {
        Format::Json => to_canonical_json(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for v in &report.verdicts {
                w.serialize(FeasibilityCsvRow {
                    split_id: v.split_id,
                    split_name: &v.split_name,
                    use_case: v.use_case.label(),
                    separation_km: v.separation_km,
                    budget_km: v.budget_km,
                    feasible: v.feasible,
                    margin_km: v.margin_km,
                    bw_dl_mbps: v.bw_required_mbps.dl,
                    bw_ul_mbps: v.bw_required_mbps.ul,
                    satellite_gops: v.satellite_gops_required.to_string(),
                    compute_feasible: v.compute_feasible,
                })?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))?
        }
        Format::PlotCsv => return Err(Error::UnsupportedFormat("plot-csv".into())),
    };
    let mut out = CommandOutput::ok(body, settings);
    out.summary = format!(
        "separation {:.1} km at {} deg FL; feasible splits {:?}",
        report.separation_km, report.fl_elevation_deg, report.feasible_set
    );
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoReport {
    pub deployment: Deployment,
    pub procedure: ProcedureVariant,
    pub link_delays: LinkDelays,
    pub phases: PhaseDurations,
    pub counts: MessageCounts,
    pub trace: TimelineTrace,
}

pub fn cho_report(settings: &Settings) -> Result<ChoReport> {
    let dep = settings.single_deployment()?;
    let delays = settings.delays()?;
    let (cell, trace) = evaluate_cell(dep, &delays, &settings.timing, &settings.catalog)?;
    Ok(ChoReport {
        deployment: dep,
        procedure: cell.procedure,
        link_delays: delays,
        phases: PhaseDurations {
            setup_ms: cell.setup_ms,
            buffer_ms: cell.buffer_ms,
            execution_ms: cell.execution_ms,
            total_ms: cell.total_ms,
        },
        counts: message_counts(&trace),
        trace,
    })
}

pub fn cmd_cho(settings: &Settings) -> Result<CommandOutput> {
    let report = cho_report(settings)?;
    let body = match settings.format {
        Format::Json => to_canonical_json(&report)?,
        fmt => {
            let delays = settings.delays()?;
            let grid = run_grid_with_delays(&delays, &settings.timing, &settings.catalog, Some(&[report.deployment]))?;
            serialize(&grid, fmt)?
        }
    };
    let mut out = CommandOutput::ok(body, settings);
    out.summary = format!(
        "{} {}: setup {:.2} ms, buffer {:.2} ms, execution {:.2} ms, total {:.2} ms",
        report.deployment,
        report.procedure,
        report.phases.setup_ms,
        report.phases.buffer_ms,
        report.phases.execution_ms,
        report.phases.total_ms
    );
    Ok(out)
}

pub fn grid_report(settings: &Settings) -> Result<(MetricsReport, Vec<OrderingCheck>)> {
    let delays = settings.delays()?;
    let mut report = run_grid_with_delays(
        &delays,
        &settings.timing,
        &settings.catalog,
        Some(&settings.grid_deployments()),
    )?;
    if !settings.reference_delays {
        report.geometry = Some(settings.geometry);
    }
    let checks = check_available_trends(&report);
    Ok((report, checks))
}

pub fn cmd_grid(settings: &Settings) -> Result<CommandOutput> {
    let (report, checks) = grid_report(settings)?;
    let body = serialize(&report, settings.format)?;
    let mut out = CommandOutput::ok(body, settings);
    let mut lines: Vec<String> = checks
        .iter()
        .map(|c| format!("[{}] {}: {} ({})", c.outcome, c.id, c.description, c.detail))
        .collect();
    lines.push(format!(
        "{} cells, {}/{} ordering checks passed",
        report.cells.len(),
        checks.iter().filter(|c| c.passed()).count(),
        checks.len()
    ));
    out.summary = lines.join("\n");
    if checks.iter().any(|c| c.outcome != CheckOutcome::Pass) {
        out.exit_code = EXIT_TREND_FAILURE;
    }
    Ok(out)
}

pub fn cmd_catalog(settings: &Settings) -> Result<CommandOutput> {
    match settings.format {
        Format::Json => Ok(CommandOutput::ok(to_canonical_json(&catalog_document())?, settings)),
        other => Err(Error::UnsupportedFormat(format!("{other:?} for catalog export"))),
    }
}

pub fn cmd_topology(settings: &Settings) -> Result<CommandOutput> {
    let dep = settings.single_deployment()?;
    let topo = build_topology(dep, &settings.delays()?);
    match settings.format {
        Format::Json => Ok(CommandOutput::ok(to_canonical_json(&topo)?, settings)),
        other => Err(Error::UnsupportedFormat(format!("{other:?} for topology export"))),
    }
}

pub fn run(cli: &Cli) -> Result<CommandOutput> {
    let (args, cmd): (&CommonArgs, fn(&Settings) -> Result<CommandOutput>) = match &cli.command {
        Command::Feasibility(a) => (a, cmd_feasibility),
        Command::Cho(a) => (a, cmd_cho),
        Command::Grid(a) => (a, cmd_grid),
        Command::Catalog(a) => (a, cmd_catalog),
        Command::Topology(a) => (a, cmd_topology),
    };
    let settings = RunConfig::from_args_and_file(args)?.resolve()?;
    cmd(&settings)
}
