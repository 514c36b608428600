//! Scene geometry and RF constants.
//!
//! Everything lives in a 2-D plane: a single-antenna BS, a uniform linear RIS
//! and a single-antenna UE. The RIS elements are laid out along
//! `ris_orientation`, centered on `ris_center`, with element index increasing
//! in the direction of the orientation vector.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Table 1 constants.
pub mod defaults {
    pub const CARRIER_FREQUENCY_HZ: f64 = 5e9;
    pub const BANDWIDTH_HZ: f64 = 15e3;
    pub const NOISE_DENSITY_DBM_HZ: f64 = -174.0;
    pub const TX_POWER_DBM: f64 = 30.0;
    pub const NUM_ELEMENTS: usize = 1000;
    pub const BS_POSITION: (f64, f64) = (0.0, 0.0);
    pub const RIS_CENTER: (f64, f64) = (25.0, 25.0);
    pub const RIS_ORIENTATION: (f64, f64) = (0.0, 1.0);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Thermal noise power over `bandwidth_hz` for a density given in dBm/Hz.
pub fn noise_power_dbm(density_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    density_dbm_hz + 10.0 * bandwidth_hz.log10()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub bs_position: Point,
    pub ris_center: Point,
    /// Unit vector along the array axis.
    pub ris_orientation: Point,
    pub ue_position: Point,
    pub num_elements: usize,
    /// Meters.
    pub element_spacing: f64,
    /// Hz.
    pub carrier_frequency: f64,
    /// Watts.
    pub tx_power: f64,
    /// Watts.
    pub noise_power: f64,
}

impl Scene {
    /// Table 1 scenario with the UE at `ue`: 5 GHz, 1000 elements at half
    /// wavelength spacing, 30 dBm transmit power and -174 dBm/Hz noise over
    /// 15 kHz.
    pub fn table1(ue: Point) -> Self {
        let (bx, by) = defaults::BS_POSITION;
        let (rx, ry) = defaults::RIS_CENTER;
        let (ox, oy) = defaults::RIS_ORIENTATION;
        let wavelength = SPEED_OF_LIGHT / defaults::CARRIER_FREQUENCY_HZ;
        Scene {
            bs_position: Point::new(bx, by),
            ris_center: Point::new(rx, ry),
            ris_orientation: Point::new(ox, oy),
            ue_position: ue,
            num_elements: defaults::NUM_ELEMENTS,
            element_spacing: wavelength / 2.0,
            carrier_frequency: defaults::CARRIER_FREQUENCY_HZ,
            tx_power: dbm_to_watts(defaults::TX_POWER_DBM),
            noise_power: dbm_to_watts(noise_power_dbm(
                defaults::NOISE_DENSITY_DBM_HZ,
                defaults::BANDWIDTH_HZ,
            )),
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Variance of the noise on the normalized channel estimate `y / x`.
    pub fn noise_variance(&self) -> f64 {
        self.noise_power / self.tx_power
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidScene(msg.to_string()));
        if self.num_elements == 0 {
            return bad("number of RIS elements must be at least 1");
        }
        if !(self.element_spacing > 0.0 && self.element_spacing.is_finite()) {
            return bad("element spacing must be positive");
        }
        if !(self.carrier_frequency > 0.0 && self.carrier_frequency.is_finite()) {
            return bad("carrier frequency must be positive");
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return bad("transmit power must be positive");
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return bad("noise power must be positive");
        }
        for p in [self.bs_position, self.ris_center, self.ue_position, self.ris_orientation] {
            if !p.is_finite() {
                return bad("coordinates must be finite");
            }
        }
        if (self.ris_orientation.norm() - 1.0).abs() > 1e-9 {
            return bad("RIS orientation must be a unit vector");
        }
        if self.bs_position == self.ris_center
            || self.bs_position == self.ue_position
            || self.ris_center == self.ue_position
        {
            return bad("BS, RIS center and UE must be pairwise distinct");
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scene> {
        let text = std::fs::read_to_string(path)?;
        Scene::from_config_str(&text)
    }

    /// Parses the `key = value` scene format. Blank lines and lines starting
    /// with `#` are ignored. The orientation is normalized to unit length.
    pub fn from_config_str(text: &str) -> Result<Scene> {
        const KEYS: [&str; 14] = [
            "bs_x",
            "bs_y",
            "ris_x",
            "ris_y",
            "orient_x",
            "orient_y",
            "ue_x",
            "ue_y",
            "q",
            "spacing_m",
            "spacing_half_wavelength",
            "freq_hz",
            "tx_dbm",
            "noise_dbm",
        ];
        let mut values: [Option<(usize, f64)>; 14] = [None; 14];

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `key = value`, found `{trimmed}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| Error::Config {
                line,
                msg: format!("unknown key `{key}`"),
            })?;
            if values[slot].is_some() {
                return Err(Error::Config { line, msg: format!("duplicate key `{key}`") });
            }
            let parsed: f64 = value.parse().map_err(|_| Error::Config {
                line,
                msg: format!("value `{value}` for `{key}` is not a number"),
            })?;
            if !parsed.is_finite() {
                return Err(Error::Config { line, msg: format!("value for `{key}` must be finite") });
            }
            values[slot] = Some((line, parsed));
        }

        let get = |name: &'static str| -> Result<f64> {
            let slot = KEYS.iter().position(|k| *k == name).unwrap();
            values[slot].map(|(_, v)| v).ok_or(Error::MissingKey(name))
        };
        let line_of = |name: &str| {
            let slot = KEYS.iter().position(|k| *k == name).unwrap();
            values[slot].map(|(l, _)| l)
        };

        let q_raw = get("q")?;
        let q_line = line_of("q").unwrap_or(0);
        if q_raw < 1.0 || q_raw.fract() != 0.0 {
            return Err(Error::Config { line: q_line, msg: "`q` must be a positive integer".into() });
        }

        let freq = get("freq_hz")?;
        if freq <= 0.0 {
            return Err(Error::Config {
                line: line_of("freq_hz").unwrap_or(0),
                msg: "`freq_hz` must be positive".into(),
            });
        }
        let wavelength = SPEED_OF_LIGHT / freq;

        let spacing = match (line_of("spacing_m"), line_of("spacing_half_wavelength")) {
            (Some(a), Some(b)) => {
                return Err(Error::Config {
                    line: a.max(b),
                    msg: "give either `spacing_m` or `spacing_half_wavelength`, not both".into(),
                })
            }
            (Some(_), None) => get("spacing_m")?,
            (None, Some(_)) => get("spacing_half_wavelength")? * wavelength / 2.0,
            (None, None) => return Err(Error::MissingKey("spacing_m")),
        };

        let orient = Point::new(get("orient_x")?, get("orient_y")?);
        let orient_norm = orient.norm();
        if orient_norm == 0.0 {
            return Err(Error::Config {
                line: line_of("orient_x").unwrap_or(0),
                msg: "RIS orientation must be nonzero".into(),
            });
        }

        let scene = Scene {
            bs_position: Point::new(get("bs_x")?, get("bs_y")?),
            ris_center: Point::new(get("ris_x")?, get("ris_y")?),
            ris_orientation: Point::new(orient.x / orient_norm, orient.y / orient_norm),
            ue_position: Point::new(get("ue_x")?, get("ue_y")?),
            num_elements: q_raw as usize,
            element_spacing: spacing,
            carrier_frequency: freq,
            tx_power: dbm_to_watts(get("tx_dbm")?),
            noise_power: dbm_to_watts(get("noise_dbm")?),
        };
        scene.validate()?;
        Ok(scene)
    }

    /// Renders the scene in the config format, spacing given in meters.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: f64| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("bs_x", self.bs_position.x);
        kv("bs_y", self.bs_position.y);
        kv("ris_x", self.ris_center.x);
        kv("ris_y", self.ris_center.y);
        kv("orient_x", self.ris_orientation.x);
        kv("orient_y", self.ris_orientation.y);
        kv("ue_x", self.ue_position.x);
        kv("ue_y", self.ue_position.y);
        kv("q", self.num_elements as f64);
        kv("spacing_m", self.element_spacing);
        kv("freq_hz", self.carrier_frequency);
        kv("tx_dbm", watts_to_dbm(self.tx_power));
        kv("noise_dbm", watts_to_dbm(self.noise_power));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementLayout {
    positions: Vec<Point>,
}

impl ElementLayout {
    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Distance from every element to `point`, in element order.
    pub fn distances(&self, point: Point) -> Vec<f64> {
        self.positions.iter().map(|p| p.distance(point)).collect()
    }
}

/// Places the elements evenly along the array axis, centered on the RIS center.
pub fn build_layout(scene: &Scene) -> Result<ElementLayout> {
    scene.validate()?;
    let q = scene.num_elements;
    let half = (q as f64 - 1.0) / 2.0;
    let o = scene.ris_orientation;
    let c = scene.ris_center;
    let positions = (0..q)
        .map(|i| {
            let offset = (i as f64 - half) * scene.element_spacing;
            Point::new(c.x + o.x * offset, c.y + o.y * offset)
        })
        .collect();
    Ok(ElementLayout { positions })
}
