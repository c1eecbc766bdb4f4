//! Grid runs over the scenario x split matrix, ordering checks over the
//! resulting cells, and report serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cho::{
    evaluate_timeline, message_counts, phase_durations, procedure_catalog_with, CatalogOptions,
    LinkCounts, Phase, TimelineTrace, TimingConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{link_delays, GeometryConfig, LinkDelays};
use crate::topology::{
    build_topology, select_procedure, AmfSite, Deployment, ProcedureVariant, Scenario, SplitOption,
};

pub const PROCEDURE_CATALOG_VERSION: &str = "cho-catalog/1";

pub const CSV_COLUMNS: [&str; 12] = [
    "scenario",
    "variant",
    "split",
    "procedure",
    "setup_ms",
    "buffer_ms",
    "execution_ms",
    "total_ms",
    "sl_count",
    "fl_count",
    "isl_count",
    "igsl_count",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellReport {
    pub scenario: String,
    pub variant: Scenario,
    pub split: SplitOption,
    pub amf_site: AmfSite,
    pub procedure: ProcedureVariant,
    pub setup_ms: f64,
    pub buffer_ms: f64,
    pub execution_ms: f64,
    pub total_ms: f64,
    pub trigger_offset_ms: f64,
    pub messages: u32,
    pub counts: LinkCounts,
    pub counts_by_phase: BTreeMap<Phase, LinkCounts>,
}

impl CellReport {
    pub fn deployment(&self) -> Deployment {
        Deployment { scenario: self.variant, split: self.split, amf_site: self.amf_site }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsReport {
    pub catalog_version: String,
    /// Absent when the grid ran on explicit link delays.
    pub geometry: Option<GeometryConfig>,
    pub link_delays: LinkDelays,
    pub timing: TimingConfig,
    pub catalog_options: CatalogOptions,
    pub cells: Vec<CellReport>,
}

impl MetricsReport {
    pub fn cell(&self, scenario: Scenario, split: SplitOption) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.variant == scenario && c.split == split)
    }

    fn require(&self, scenario: Scenario, split: SplitOption) -> Result<&CellReport> {
        self.cell(scenario, split)
            .ok_or_else(|| Error::MissingCell(format!("{scenario}/{split}")))
    }
}

/// A, B1, B2 and C, each with LLS, CU-DU and gNB-onboard, in that order.
pub fn default_deployments() -> Vec<Deployment> {
    Scenario::ALL
        .iter()
        .flat_map(|&s| SplitOption::ALL.iter().map(move |&p| Deployment::new(s, p)))
        .collect()
}

/// One cell: topology, procedure selection, timeline and its aggregates.
pub fn evaluate_cell(
    dep: Deployment,
    delays: &LinkDelays,
    timing: &TimingConfig,
    opts: &CatalogOptions,
) -> Result<(CellReport, TimelineTrace)> {
    let topo = build_topology(dep, delays);
    let procedure = select_procedure(&dep);
    let catalog = procedure_catalog_with(procedure, opts);
    let trace = evaluate_timeline(&catalog, &topo, timing)?;
    let phases = phase_durations(&trace);
    let counts = message_counts(&trace);
    let cell = CellReport {
        scenario: dep.scenario.family().to_owned(),
        variant: dep.scenario,
        split: dep.split,
        amf_site: dep.amf_site,
        procedure,
        setup_ms: phases.setup_ms,
        buffer_ms: phases.buffer_ms,
        execution_ms: phases.execution_ms,
        total_ms: phases.total_ms,
        trigger_offset_ms: timing.trigger_offset_ms,
        messages: counts.messages,
        counts: counts.total,
        counts_by_phase: counts.by_phase,
    };
    Ok((cell, trace))
}

pub fn run_grid(
    geometry: &GeometryConfig,
    timing: &TimingConfig,
    deployments: Option<&[Deployment]>,
) -> Result<MetricsReport> {
    let delays = link_delays(geometry)?;
    let mut report = run_grid_with_delays(&delays, timing, &CatalogOptions::default(), deployments)?;
    report.geometry = Some(*geometry);
    Ok(report)
}

pub fn run_grid_with_delays(
    delays: &LinkDelays,
    timing: &TimingConfig,
    opts: &CatalogOptions,
    deployments: Option<&[Deployment]>,
) -> Result<MetricsReport> {
    let owned;
    let deployments = match deployments {
        Some(d) => d,
        None => {
            owned = default_deployments();
            &owned
        }
    };
    let cells = deployments
        .iter()
        .map(|&dep| evaluate_cell(dep, delays, timing, opts).map(|(cell, _)| cell))
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricsReport {
        catalog_version: PROCEDURE_CATALOG_VERSION.to_owned(),
        geometry: None,
        link_delays: *delays,
        timing: *timing,
        catalog_options: *opts,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckOutcome {
    Pass,
    /// The ordering holds only with equality somewhere.
    Tie,
    Fail,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckOutcome::Pass => "pass",
            CheckOutcome::Tie => "tie",
            CheckOutcome::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub id: String,
    pub description: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

impl OrderingCheck {
    pub fn passed(&self) -> bool {
        self.outcome == CheckOutcome::Pass
    }
}

/// Strictly decreasing sequence.
fn decreasing(values: &[f64]) -> CheckOutcome {
    values
        .windows(2)
        .map(|w| {
            if w[0] > w[1] {
                CheckOutcome::Pass
            } else if w[0] == w[1] {
                CheckOutcome::Tie
            } else {
                CheckOutcome::Fail
            }
        })
        .max()
        .unwrap_or(CheckOutcome::Pass)
}

fn increasing(values: &[f64]) -> CheckOutcome {
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    decreasing(&neg)
}

/// `values[pick]` strictly above every other entry.
fn strict_max(values: &[f64], pick: usize) -> CheckOutcome {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pick)
        .map(|(_, &v)| {
            if values[pick] > v {
                CheckOutcome::Pass
            } else if values[pick] == v {
                CheckOutcome::Tie
            } else {
                CheckOutcome::Fail
            }
        })
        .max()
        .unwrap_or(CheckOutcome::Pass)
}

fn strict_min(values: &[f64], pick: usize) -> CheckOutcome {
    let neg: Vec<f64> = values.iter().map(|v| -v).collect();
    strict_max(&neg, pick)
}

fn fmt_values(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.2}"))
        .collect::<Vec<_>>()
        .join(" / ")
}

/// Per-split series (LLS, CU-DU, gNB) of one metric for a scenario.
fn series(report: &MetricsReport, scenario: Scenario, metric: impl Fn(&CellReport) -> f64) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, split) in out.iter_mut().zip(SplitOption::ALL) {
        *slot = metric(report.require(scenario, split)?);
    }
    Ok(out)
}

const TREND_IDS: [(&str, &str); 7] = [
    ("A-fl-count", "A: feeder-link messages strictly decrease LLS > CU-DU > gNB-onboard"),
    ("A-duration", "A: total and buffer durations strictly decrease LLS > CU-DU > gNB-onboard"),
    ("B-total-increases", "B1, B2: total duration strictly increases LLS < CU-DU < gNB-onboard"),
    ("B-buffer-min-gnb", "B1, B2: buffer duration is strictly smallest with gNB-onboard"),
    ("B-cudu-max-traffic", "B1, B2: CU-DU has the strict maximum feeder-link and overall link crossings"),
    ("C-lls-max-fl", "C: LLS has the strict maximum feeder-link messages"),
    ("C-duration", "C: total and buffer durations strictly decrease LLS > CU-DU > gNB-onboard"),
];

fn scenarios_for(id: &str) -> &'static [Scenario] {
    match id.as_bytes()[0] {
        b'A' => &[Scenario::A],
        b'B' => &[Scenario::B1, Scenario::B2],
        _ => &[Scenario::C],
    }
}

fn evaluate_trend(report: &MetricsReport, id: &str) -> Result<(CheckOutcome, String)> {
    let fl = |c: &CellReport| f64::from(c.counts.fl);
    let crossings = |c: &CellReport| f64::from(c.counts.crossings());
    let total = |c: &CellReport| c.total_ms;
    let buffer = |c: &CellReport| c.buffer_ms;
    let mut outcome = CheckOutcome::Pass;
    let mut details = Vec::new();
    for &s in scenarios_for(id) {
        let (o, d) = match id {
            "A-fl-count" | "C-lls-max-fl" => {
                let v = series(report, s, fl)?;
                let o = if id == "A-fl-count" { decreasing(&v) } else { strict_max(&v, 0) };
                (o, format!("{s} FL {}", fmt_values(&v)))
            }
            "A-duration" | "C-duration" => {
                let t = series(report, s, total)?;
                let b = series(report, s, buffer)?;
                (
                    decreasing(&t).max(decreasing(&b)),
                    format!("{s} total {} buffer {}", fmt_values(&t), fmt_values(&b)),
                )
            }
            "B-total-increases" => {
                let t = series(report, s, total)?;
                (increasing(&t), format!("{s} total {}", fmt_values(&t)))
            }
            "B-buffer-min-gnb" => {
                let b = series(report, s, buffer)?;
                (strict_min(&b, 2), format!("{s} buffer {}", fmt_values(&b)))
            }
            "B-cudu-max-traffic" => {
                let f = series(report, s, fl)?;
                let x = series(report, s, crossings)?;
                (
                    strict_max(&f, 1).max(strict_max(&x, 1)),
                    format!("{s} FL {} crossings {}", fmt_values(&f), fmt_values(&x)),
                )
            }
            other => unreachable!("unknown trend {other}"),
        };
        outcome = outcome.max(o);
        details.push(d);
    }
    Ok((outcome, details.join("; ")))
}

/// The seven qualitative orderings; every referenced cell must be present.
pub fn check_trends(report: &MetricsReport) -> Result<Vec<OrderingCheck>> {
    TREND_IDS
        .iter()
        .map(|(id, description)| {
            let (outcome, detail) = evaluate_trend(report, id)?;
            Ok(OrderingCheck {
                id: (*id).to_owned(),
                description: (*description).to_owned(),
                outcome,
                detail,
            })
        })
        .collect()
}

/// Like [`check_trends`] but skips checks whose scenario cells are
/// absent, for partial grids.
pub fn check_available_trends(report: &MetricsReport) -> Vec<OrderingCheck> {
    TREND_IDS
        .iter()
        .filter_map(|(id, description)| {
            let (outcome, detail) = evaluate_trend(report, id).ok()?;
            Some(OrderingCheck {
                id: (*id).to_owned(),
                description: (*description).to_owned(),
                outcome,
                detail,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    /// Long-form CSV grouped per figure panel for plotting tools.
    PlotCsv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "plot-csv" | "plot" => Ok(Format::PlotCsv),
            other => Err(Error::UnsupportedFormat(other.to_owned())),
        }
    }
}

/// One data row of the fixed-column CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scenario: String,
    pub variant: Scenario,
    pub split: SplitOption,
    pub procedure: ProcedureVariant,
    pub setup_ms: f64,
    pub buffer_ms: f64,
    pub execution_ms: f64,
    pub total_ms: f64,
    pub sl_count: u32,
    pub fl_count: u32,
    pub isl_count: u32,
    pub igsl_count: u32,
}

impl From<&CellReport> for CsvRow {
    fn from(c: &CellReport) -> Self {
        Self {
            scenario: c.scenario.clone(),
            variant: c.variant,
            split: c.split,
            procedure: c.procedure,
            setup_ms: c.setup_ms,
            buffer_ms: c.buffer_ms,
            execution_ms: c.execution_ms,
            total_ms: c.total_ms,
            sl_count: c.counts.sl,
            fl_count: c.counts.fl,
            isl_count: c.counts.isl,
            igsl_count: c.counts.igsl,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub figure: String,
    pub panel: String,
    pub variant: Scenario,
    pub split: SplitOption,
    pub series: String,
    pub value: f64,
}

fn plot_rows(report: &MetricsReport) -> Vec<PlotRow> {
    let mut rows = Vec::new();
    for c in &report.cells {
        let row = |panel: &str, series: &str, value: f64| PlotRow {
            figure: c.scenario.clone(),
            panel: panel.to_owned(),
            variant: c.variant,
            split: c.split,
            series: series.to_owned(),
            value,
        };
        rows.push(row("messages", "SL", f64::from(c.counts.sl)));
        rows.push(row("messages", "FL", f64::from(c.counts.fl)));
        rows.push(row("messages", "ISL", f64::from(c.counts.isl)));
        rows.push(row("messages", "IGSL", f64::from(c.counts.igsl)));
        rows.push(row("duration", "setup", c.setup_ms));
        rows.push(row("duration", "buffer", c.buffer_ms));
        rows.push(row("duration", "execution", c.execution_ms));
    }
    // group per figure panel, cells keep grid order inside a panel
    rows.sort_by(|a, b| (a.figure.as_str(), a.panel.as_str()).cmp(&(b.figure.as_str(), b.panel.as_str())));
    rows
}

/// Canonical JSON: object keys sorted, two-space indentation, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let value = serde_json::to_value(value)?;
    let mut out = serde_json::to_vec_pretty(&value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn serialize(report: &MetricsReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => to_canonical_json(report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &report.cells {
                w.serialize(CsvRow::from(c))?;
            }
            if report.cells.is_empty() {
                w.write_record(CSV_COLUMNS)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        Format::PlotCsv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in plot_rows(report) {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
    }
}

pub fn serialize_as(report: &MetricsReport, format: &str) -> Result<Vec<u8>> {
    serialize(report, format.parse()?)
}

pub fn parse_json(bytes: &[u8]) -> Result<MetricsReport> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_report() -> MetricsReport {
        run_grid_with_delays(
            &LinkDelays::reference_leo600(),
            &TimingConfig::default(),
            &CatalogOptions::default(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn default_grid_has_twelve_cells() {
        let r = run_grid(&GeometryConfig::default(), &TimingConfig::default(), None).unwrap();
        assert_eq!(r.cells.len(), 12);
        assert!(r.geometry.is_some());
    }

    #[test]
    fn a_gnb_cell() {
        let r = reference_report();
        let c = r.cell(Scenario::A, SplitOption::GnbOnboard).unwrap();
        assert!((c.total_ms - 47.54).abs() < 1e-9);
        assert_eq!(c.counts.fl, 0);
        let b2 = r.cell(Scenario::B2, SplitOption::CuDu).unwrap();
        assert_eq!(b2.procedure, ProcedureVariant::InterDu);
    }

    #[test]
    fn totals_equal_phase_sum_plus_offset() {
        let timing = TimingConfig { trigger_offset_ms: 12.0, ..Default::default() };
        let r = run_grid_with_delays(&LinkDelays::reference_leo600(), &timing, &CatalogOptions::default(), None)
            .unwrap();
        for c in &r.cells {
            let sum = c.setup_ms + c.buffer_ms + c.execution_ms + c.trigger_offset_ms;
            assert!((c.total_ms - sum).abs() < 1e-9, "{}", c.deployment());
        }
    }

    #[test]
    fn trends_pass_on_reference_delays() {
        let checks = check_trends(&reference_report()).unwrap();
        assert_eq!(checks.len(), 7);
        for c in &checks {
            assert!(c.passed(), "{} {}", c.id, c.detail);
        }
    }

    #[test]
    fn zero_delays_tie() {
        let zero = LinkDelays::from_delays_ms(0.0, 0.0, 0.0, 0.0);
        let r = run_grid_with_delays(&zero, &TimingConfig::default(), &CatalogOptions::default(), None).unwrap();
        let a_gnb = r.cell(Scenario::A, SplitOption::GnbOnboard).unwrap();
        let a_lls = r.cell(Scenario::A, SplitOption::Lls).unwrap();
        assert_eq!(a_gnb.buffer_ms, 24.0);
        assert_eq!(a_lls.buffer_ms, 24.0);
        let checks = check_trends(&r).unwrap();
        let a_dur = checks.iter().find(|c| c.id == "A-duration").unwrap();
        assert_eq!(a_dur.outcome, CheckOutcome::Tie);
        let c_dur = checks.iter().find(|c| c.id == "C-duration").unwrap();
        assert_ne!(c_dur.outcome, CheckOutcome::Pass);
    }

    #[test]
    fn missing_cells_error() {
        let subset = [Deployment::new(Scenario::A, SplitOption::Lls)];
        let r = run_grid_with_delays(
            &LinkDelays::reference_leo600(),
            &TimingConfig::default(),
            &CatalogOptions::default(),
            Some(&subset),
        )
        .unwrap();
        assert!(matches!(check_trends(&r), Err(Error::MissingCell(_))));
        assert!(check_available_trends(&r).is_empty());
    }

    #[test]
    fn ordering_helpers() {
        assert_eq!(decreasing(&[3.0, 2.0, 1.0]), CheckOutcome::Pass);
        assert_eq!(decreasing(&[3.0, 3.0, 1.0]), CheckOutcome::Tie);
        assert_eq!(decreasing(&[3.0, 4.0, 1.0]), CheckOutcome::Fail);
        assert_eq!(increasing(&[1.0, 2.0, 3.0]), CheckOutcome::Pass);
        assert_eq!(strict_max(&[1.0, 5.0, 3.0], 1), CheckOutcome::Pass);
        assert_eq!(strict_max(&[5.0, 5.0, 3.0], 1), CheckOutcome::Tie);
        assert_eq!(strict_min(&[4.0, 5.0, 3.0], 2), CheckOutcome::Pass);
        assert_eq!(strict_min(&[2.0, 5.0, 3.0], 2), CheckOutcome::Fail);
    }

    #[test]
    fn csv_shape() {
        let r = reference_report();
        let bytes = serialize(&r, Format::Csv).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        let rows = parse_csv(&bytes).unwrap();
        let a_gnb = rows
            .iter()
            .find(|r| r.variant == Scenario::A && r.split == SplitOption::GnbOnboard)
            .unwrap();
        assert!((a_gnb.buffer_ms - 38.36).abs() < 1e-9);
        let expected: Vec<CsvRow> = r.cells.iter().map(CsvRow::from).collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn json_canonical_roundtrip() {
        let r = reference_report();
        let bytes = serialize(&r, Format::Json).unwrap();
        let parsed = parse_json(&bytes).unwrap();
        assert_eq!(parsed, r);
        assert_eq!(serialize(&parsed, Format::Json).unwrap(), bytes);
        let value: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(to_canonical_json(&value).unwrap(), bytes);
    }

    #[test]
    fn plot_csv_grouped() {
        let bytes = serialize(&reference_report(), Format::PlotCsv).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 1 + 12 * 7);
        assert!(text.starts_with("figure,panel,variant,split,series,value"));
    }

    #[test]
    fn unsupported_format() {
        assert!(matches!(serialize_as(&reference_report(), "xml"), Err(Error::UnsupportedFormat(_))));
    }
}
