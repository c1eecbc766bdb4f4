//! Distances and one-way propagation delays between the nodes of a LEO
//! deployment.
//!
//! The model is a spherical Earth with satellites on circular orbits and
//! vacuum propagation. Four link classes are derived:
//!
//! - service link (UE to satellite) and feeder link (satellite to ground
//!   station), both as slant ranges at their configured elevation angle;
//! - inter-satellite link, the chord between two adjacent satellites of the
//!   same orbital plane;
//! - inter-ground-station link, the great-circle distance between two ground
//!   stations separated by the same central angle as the satellites, inflated
//!   to account for terrestrial routing and non-vacuum propagation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, km per millisecond.
pub const LIGHT_SPEED_KM_PER_MS: f64 = 299.792_458;

/// Rounded speed of light used when converting fronthaul latency budgets
/// into maximum fronthaul distances.
pub const ROUNDED_LIGHT_SPEED_KM_PER_MS: f64 = 300.0;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub earth_radius_km: f64,
    pub altitude_km: f64,
    pub sl_elevation_deg: f64,
    pub fl_elevation_deg: f64,
    pub sats_per_plane: u32,
    pub igsl_inflation: f64,
    pub light_speed_km_per_ms: f64,
    /// Only used to turn latency budgets into maximum fronthaul distances.
    pub max_distance_light_speed_km_per_ms: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            earth_radius_km: EARTH_RADIUS_KM,
            altitude_km: 600.0,
            sl_elevation_deg: 30.0,
            fl_elevation_deg: 10.0,
            sats_per_plane: 20,
            igsl_inflation: 1.2,
            light_speed_km_per_ms: LIGHT_SPEED_KM_PER_MS,
            max_distance_light_speed_km_per_ms: ROUNDED_LIGHT_SPEED_KM_PER_MS,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.earth_radius_km) {
            return Err(Error::Domain(format!(
                "earth radius must be positive, got {}",
                self.earth_radius_km
            )));
        }
        if !positive(self.altitude_km) {
            return Err(Error::Domain(format!(
                "altitude must be positive, got {}",
                self.altitude_km
            )));
        }
        check_elevation(self.sl_elevation_deg)?;
        check_elevation(self.fl_elevation_deg)?;
        if self.sats_per_plane < 2 {
            return Err(Error::Domain(format!(
                "at least 2 satellites per plane required, got {}",
                self.sats_per_plane
            )));
        }
        if !(self.igsl_inflation.is_finite() && self.igsl_inflation >= 1.0) {
            return Err(Error::Domain(format!(
                "inter-GS inflation must be >= 1, got {}",
                self.igsl_inflation
            )));
        }
        if !positive(self.light_speed_km_per_ms) || !positive(self.max_distance_light_speed_km_per_ms)
        {
            return Err(Error::Domain("light speed must be positive".into()));
        }
        Ok(())
    }

    pub fn orbit_radius_km(&self) -> f64 {
        self.earth_radius_km + self.altitude_km
    }
}

fn check_elevation(elevation_deg: f64) -> Result<()> {
    if elevation_deg.is_finite() && elevation_deg > 0.0 && elevation_deg <= 90.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "elevation must lie in (0, 90] degrees, got {elevation_deg}"
        )))
    }
}

/// Line-of-sight distance from a ground point to a satellite seen at
/// `elevation_deg` above the local horizon.
pub fn slant_range(cfg: &GeometryConfig, elevation_deg: f64) -> Result<f64> {
    check_elevation(elevation_deg)?;
    if !(cfg.altitude_km.is_finite() && cfg.altitude_km > 0.0) {
        return Err(Error::Domain(format!(
            "altitude must be positive, got {}",
            cfg.altitude_km
        )));
    }
    if elevation_deg == 90.0 {
        return Ok(cfg.altitude_km);
    }
    let re = cfg.earth_radius_km;
    let r = cfg.orbit_radius_km();
    let (sin_e, cos_e) = elevation_deg.to_radians().sin_cos();
    Ok((r * r - (re * cos_e).powi(2)).sqrt() - re * sin_e)
}

pub fn propagation_delay(distance_km: f64, cfg: &GeometryConfig) -> f64 {
    distance_km / cfg.light_speed_km_per_ms
}

/// Chord between two neighbouring satellites evenly spaced on one plane.
pub fn isl_distance(cfg: &GeometryConfig) -> Result<f64> {
    check_plane(cfg)?;
    let half_angle = std::f64::consts::PI / f64::from(cfg.sats_per_plane);
    Ok(2.0 * cfg.orbit_radius_km() * half_angle.sin())
}

/// Inflated great-circle distance between two ground stations separated by
/// the inter-satellite central angle.
pub fn igsl_distance(cfg: &GeometryConfig) -> Result<f64> {
    check_plane(cfg)?;
    let central_angle = 2.0 * std::f64::consts::PI / f64::from(cfg.sats_per_plane);
    Ok(cfg.earth_radius_km * central_angle * cfg.igsl_inflation)
}

fn check_plane(cfg: &GeometryConfig) -> Result<()> {
    if cfg.sats_per_plane < 2 {
        return Err(Error::Domain(format!(
            "at least 2 satellites per plane required, got {}",
            cfg.sats_per_plane
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkClass {
    #[serde(rename = "SL")]
    Service,
    #[serde(rename = "FL")]
    Feeder,
    #[serde(rename = "ISL")]
    InterSatellite,
    #[serde(rename = "IGSL")]
    InterGroundStation,
}

impl LinkClass {
    pub const ALL: [LinkClass; 4] = [
        LinkClass::Service,
        LinkClass::Feeder,
        LinkClass::InterSatellite,
        LinkClass::InterGroundStation,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LinkClass::Service => "SL",
            LinkClass::Feeder => "FL",
            LinkClass::InterSatellite => "ISL",
            LinkClass::InterGroundStation => "IGSL",
        }
    }
}

impl fmt::Display for LinkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One-way delays (ms) and distances (km) for the four link classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDelays {
    pub sl_ms: f64,
    pub fl_ms: f64,
    pub isl_ms: f64,
    pub igsl_ms: f64,
    pub sl_km: f64,
    pub fl_km: f64,
    pub isl_km: f64,
    pub igsl_km: f64,
}

impl LinkDelays {
    /// Published delay set for a 600 km LEO shell with a 30 degree service
    /// link and a 10 degree feeder link, rounded to 10 microseconds.
    /// Distances are back-computed with the exact light speed.
    pub fn reference_leo600() -> Self {
        Self::from_delays_ms(3.59, 6.45, 7.28, 7.99)
    }

    /// Builds a delay set from delays alone; distances follow from the
    /// vacuum light speed.
    pub fn from_delays_ms(sl_ms: f64, fl_ms: f64, isl_ms: f64, igsl_ms: f64) -> Self {
        let c = LIGHT_SPEED_KM_PER_MS;
        Self {
            sl_ms,
            fl_ms,
            isl_ms,
            igsl_ms,
            sl_km: sl_ms * c,
            fl_km: fl_ms * c,
            isl_km: isl_ms * c,
            igsl_km: igsl_ms * c,
        }
    }

    pub fn delay_ms(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::Service => self.sl_ms,
            LinkClass::Feeder => self.fl_ms,
            LinkClass::InterSatellite => self.isl_ms,
            LinkClass::InterGroundStation => self.igsl_ms,
        }
    }

    pub fn distance_km(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::Service => self.sl_km,
            LinkClass::Feeder => self.fl_km,
            LinkClass::InterSatellite => self.isl_km,
            LinkClass::InterGroundStation => self.igsl_km,
        }
    }

    pub fn with_delay(mut self, class: LinkClass, delay_ms: f64) -> Self {
        let km = delay_ms * LIGHT_SPEED_KM_PER_MS;
        match class {
            LinkClass::Service => (self.sl_ms, self.sl_km) = (delay_ms, km),
            LinkClass::Feeder => (self.fl_ms, self.fl_km) = (delay_ms, km),
            LinkClass::InterSatellite => (self.isl_ms, self.isl_km) = (delay_ms, km),
            LinkClass::InterGroundStation => (self.igsl_ms, self.igsl_km) = (delay_ms, km),
        }
        self
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            sl_ms: self.sl_ms * factor,
            fl_ms: self.fl_ms * factor,
            isl_ms: self.isl_ms * factor,
            igsl_ms: self.igsl_ms * factor,
            sl_km: self.sl_km * factor,
            fl_km: self.fl_km * factor,
            isl_km: self.isl_km * factor,
            igsl_km: self.igsl_km * factor,
        }
    }
}

pub fn link_delays(cfg: &GeometryConfig) -> Result<LinkDelays> {
    cfg.validate()?;
    let sl_km = slant_range(cfg, cfg.sl_elevation_deg)?;
    let fl_km = slant_range(cfg, cfg.fl_elevation_deg)?;
    let isl_km = isl_distance(cfg)?;
    let igsl_km = igsl_distance(cfg)?;
    Ok(LinkDelays {
        sl_ms: propagation_delay(sl_km, cfg),
        fl_ms: propagation_delay(fl_km, cfg),
        isl_ms: propagation_delay(isl_km, cfg),
        igsl_ms: propagation_delay(igsl_km, cfg),
        sl_km,
        fl_km,
        isl_km,
        igsl_km,
    })
}
