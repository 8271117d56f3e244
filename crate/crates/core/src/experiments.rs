//! Named experiment presets and distance scans producing marker curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markers::{marker_values, MarkerValues};
use crate::oscillation::{
    characteristic_lengths, survival_probability_pw, survival_probability_wp, Lengths,
    OscillationParams, WavePacketParams,
};

/// A central value with asymmetric one-sigma uncertainties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertainParam {
    pub value: f64,
    pub plus: f64,
    pub minus: f64,
}

impl UncertainParam {
    fn new(value: f64, plus: f64, minus: f64) -> Self {
        assert!(plus >= 0.0 && minus >= 0.0, "uncertainties are non-negative");
        Self { value, plus, minus }
    }

    fn corners(&self) -> [f64; 3] {
        [self.value, self.value + self.plus, self.value - self.minus]
    }
}

/// Probability model selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    PlaneWave,
    WavePacket,
}

impl Model {
    pub fn label(self) -> &'static str {
        match self {
            Model::PlaneWave => "plane-wave",
            Model::WavePacket => "wave-packet",
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane-wave" => Ok(Model::PlaneWave),
            "wave-packet" => Ok(Model::WavePacket),
            other => Err(Error::Domain(format!(
                "unknown model {other:?}; expected plane-wave or wave-packet"
            ))),
        }
    }
}

/// Grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Log,
    Linear,
}

/// A distance grid in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, spacing: Spacing) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidArgument("grid bounds must be finite".into()));
        }
        if n_points < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        if x_min >= x_max {
            return Err(Error::Domain(format!(
                "grid requires x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if spacing == Spacing::Log && x_min <= 0.0 {
            return Err(Error::Domain(format!(
                "log-spaced grid requires x_min > 0, got {x_min}"
            )));
        }
        if x_min < 0.0 {
            return Err(Error::Domain(format!(
                "distances must be non-negative, got x_min = {x_min}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            spacing,
        })
    }

    /// Grid points, strictly increasing, endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.x_min;
                }
                if i == n - 1 {
                    return self.x_max;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.x_min + f * (self.x_max - self.x_min),
                    Spacing::Log => {
                        (self.x_min.ln() + f * (self.x_max.ln() - self.x_min.ln())).exp()
                    }
                }
            })
            .collect()
    }
}

/// A named parameter bundle with published central values and
/// uncertainties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub sin2_2theta: UncertainParam,
    /// eV^2.
    pub delta_m2: UncertainParam,
    /// eV.
    pub energy: f64,
    /// Published alternate beam energy, if any (eV).
    pub alt_energy: Option<f64>,
    pub wp: WavePacketParams,
    /// Published alternate packet width, if any (m).
    pub alt_sigma_x: Option<f64>,
    /// Default log-spaced scan range in meters.
    pub default_x_range: (f64, f64),
    /// Where the numbers come from.
    pub provenance: &'static str,
}

impl ExperimentPreset {
    pub fn oscillation_params(&self) -> OscillationParams {
        OscillationParams {
            sin2_2theta: self.sin2_2theta.value,
            delta_m2: self.delta_m2.value,
        }
    }

    pub fn lengths(&self) -> Lengths {
        characteristic_lengths(&self.oscillation_params(), self.energy, &self.wp)
            .expect("preset parameters are valid")
    }

    /// Default grid: the preset range, 2000 log-spaced points.
    pub fn default_grid(&self) -> Grid {
        Grid::new(
            self.default_x_range.0,
            self.default_x_range.1,
            2000,
            Spacing::Log,
        )
        .expect("preset ranges are valid")
    }
}

pub const PRESET_NAMES: [&str; 2] = ["dayabay", "minos"];

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ExperimentPreset> {
    match name {
        "dayabay" => Ok(ExperimentPreset {
            name: "dayabay",
            sin2_2theta: UncertainParam::new(0.084, 0.005, 0.005),
            delta_m2: UncertainParam::new(2.42e-3, 0.10e-3, 0.11e-3),
            energy: 2e6,
            alt_energy: Some(4e6),
            wp: WavePacketParams {
                sigma_x: 1.25e-6,
                xi: 0.0,
            },
            alt_sigma_x: Some(3.3e-6),
            default_x_range: (1e2, 1e12),
            provenance: "Daya Bay reactor antineutrino data: sin^2(2 theta_13) = 0.084 +0.005/-0.005, \
                 dm^2_ee = 2.42 +0.10/-0.11 x 10^-3 eV^2; E = 2 MeV (published alternate 4 MeV); \
                 sigma_x = 1.25e-6 m (published alternate 3.3e-6 m); xi = 0",
        }),
        "minos" => Ok(ExperimentPreset {
            name: "minos",
            sin2_2theta: UncertainParam::new(0.95, 0.035, 0.036),
            delta_m2: UncertainParam::new(2.32e-3, 0.12e-3, 0.08e-3),
            energy: 5e8,
            alt_energy: None,
            wp: WavePacketParams {
                sigma_x: 7e-9,
                xi: 0.0,
            },
            alt_sigma_x: None,
            default_x_range: (1e3, 1e14),
            provenance: "MINOS muon-neutrino beam data: sin^2(2 theta_23) = 0.95 +0.035/-0.036, \
                 dm^2_32 = 2.32 +0.12/-0.08 x 10^-3 eV^2; E = 0.5 GeV; sigma_x = 7e-9 m; xi = 0",
        }),
        other => Err(Error::UnknownPreset {
            name: other.to_string(),
            available: PRESET_NAMES.join(", "),
        }),
    }
}

/// Per-point envelope of each marker over the parameter corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandPoint {
    pub probability: (f64, f64),
    pub naqc: (f64, f64),
    pub chsh: (f64, f64),
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Distance in meters.
    pub x_m: f64,
    pub values: MarkerValues,
}

/// A scan of both markers over a distance grid, with an optional
/// uncertainty band aligned point-for-point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkerCurve {
    pub model: Model,
    pub points: Vec<CurvePoint>,
    pub band: Option<Vec<BandPoint>>,
}

fn survival_probability(
    model: Model,
    osc: &OscillationParams,
    wp: &WavePacketParams,
    energy: f64,
    x: f64,
) -> Result<f64> {
    match model {
        Model::PlaneWave => survival_probability_pw(osc, energy, x),
        Model::WavePacket => survival_probability_wp(osc, wp, energy, x),
    }
}

/// Evaluates the selected probability model and both markers at each grid
/// point. Output order follows the grid; evaluation is deterministic.
pub fn scan(preset: &ExperimentPreset, model: Model, grid: &Grid) -> Result<MarkerCurve> {
    let osc = OscillationParams::new(preset.sin2_2theta.value, preset.delta_m2.value)?;
    let wp = WavePacketParams::new(preset.wp.sigma_x, preset.wp.xi)?;
    let points = grid
        .points()
        .into_iter()
        .map(|x| {
            let p = survival_probability(model, &osc, &wp, preset.energy, x)?;
            Ok(CurvePoint {
                x_m: x,
                values: marker_values(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkerCurve {
        model,
        points,
        band: None,
    })
}

/// Scan with a per-point min/max envelope over the 3x3 corner grid of
/// (sin^2 2theta, dm^2) at {central, +sigma, -sigma}. The band always
/// contains the central curve.
pub fn uncertainty_band(
    preset: &ExperimentPreset,
    model: Model,
    grid: &Grid,
) -> Result<MarkerCurve> {
    let mut curve = scan(preset, model, grid)?;
    let wp = WavePacketParams::new(preset.wp.sigma_x, preset.wp.xi)?;

    let mut corners = Vec::with_capacity(9);
    for s in preset.sin2_2theta.corners() {
        for d in preset.delta_m2.corners() {
            corners.push(OscillationParams::new(s, d)?);
        }
    }

    let mut band = Vec::with_capacity(curve.points.len());
    for point in &curve.points {
        let mut envelope = BandPoint {
            probability: (f64::INFINITY, f64::NEG_INFINITY),
            naqc: (f64::INFINITY, f64::NEG_INFINITY),
            chsh: (f64::INFINITY, f64::NEG_INFINITY),
        };
        for osc in &corners {
            let p = survival_probability(model, osc, &wp, preset.energy, point.x_m)?;
            let values = marker_values(p)?;
            widen(&mut envelope.probability, values.probability);
            widen(&mut envelope.naqc, values.naqc);
            widen(&mut envelope.chsh, values.chsh);
        }
        band.push(envelope);
    }
    curve.band = Some(band);
    Ok(curve)
}

fn widen(range: &mut (f64, f64), value: f64) {
    range.0 = range.0.min(value);
    range.1 = range.1.max(value);
}
