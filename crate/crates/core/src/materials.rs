//! Material property database and cable catalog.
//!
//! Thermal conductivity curves are stored as tabulated (T, k) samples of the
//! published cryogenic fits and interpolated piecewise in log-log space, since
//! the curves span several decades. Below the lowest sample a material either
//! extrapolates linearly to zero (the standard treatment for metals, and an
//! upper bound for insulators and superconductors) or refuses to extrapolate.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{CryoError, Result};
use crate::quad::adaptive_simpson;

/// Internal quadrature tolerance; tight enough that interval additivity holds
/// to better than 1e-9 relative.
const QUAD_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    /// k(T) = k(T_min) * T / T_min below the lowest sample.
    LinearToZero,
    /// Evaluation below the lowest sample is an error.
    Forbidden,
}

/// A named thermal-conductivity curve.
#[derive(Debug, Clone)]
pub struct Material {
    name: String,
    /// (temperature K, conductivity W/(m K)), strictly increasing in T.
    points: Vec<(f64, f64)>,
    extrapolation: Extrapolation,
}

impl Material {
    pub fn new(
        name: impl Into<String>,
        points: Vec<(f64, f64)>,
        extrapolation: Extrapolation,
    ) -> Result<Self> {
        let name = name.into();
        if points.is_empty() {
            return Err(CryoError::Config(format!("material `{name}` has no samples")));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(CryoError::Config(format!(
                    "material `{name}`: temperatures must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if points.iter().any(|&(t, k)| t <= 0.0 || k <= 0.0 || !t.is_finite() || !k.is_finite()) {
            return Err(CryoError::Config(format!(
                "material `{name}`: temperatures and conductivities must be positive and finite"
            )));
        }
        Ok(Material { name, points, extrapolation })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Lowest and highest tabulated temperature.
    pub fn valid_range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    pub fn extrapolation(&self) -> Extrapolation {
        self.extrapolation
    }

    /// Thermal conductivity at `t_k`, W/(m K).
    pub fn conductivity(&self, t_k: f64) -> Result<f64> {
        if !t_k.is_finite() || t_k < 0.0 {
            return Err(CryoError::Domain(format!(
                "temperature {t_k} K is not a valid evaluation point"
            )));
        }
        let (t_min, t_max) = self.valid_range();
        if t_k > t_max {
            return Err(self.range_error(t_k));
        }
        if t_k < t_min {
            return match self.extrapolation {
                Extrapolation::LinearToZero => Ok(self.points[0].1 * t_k / t_min),
                Extrapolation::Forbidden => Err(self.range_error(t_k)),
            };
        }
        // log-log interpolation between the bracketing samples
        let idx = self
            .points
            .partition_point(|&(t, _)| t <= t_k)
            .min(self.points.len() - 1);
        if self.points[idx.saturating_sub(1)].0 == t_k {
            return Ok(self.points[idx.saturating_sub(1)].1);
        }
        let (t1, k1) = self.points[idx - 1];
        let (t2, k2) = self.points[idx];
        let u = (t_k.ln() - t1.ln()) / (t2.ln() - t1.ln());
        Ok((k1.ln() * (1.0 - u) + k2.ln() * u).exp())
    }

    /// Integral of the conductivity over `[t_low, t_high]`, W/m.
    ///
    /// Adaptive quadrature split at the sample knots (and the extrapolation
    /// boundary) so each panel is smooth.
    pub fn conductivity_integral(&self, t_low: f64, t_high: f64) -> Result<f64> {
        if !(0.0..=f64::INFINITY).contains(&t_low) || t_high < t_low {
            return Err(CryoError::Domain(format!(
                "invalid integration interval [{t_low}, {t_high}] K"
            )));
        }
        if t_low == t_high {
            return Ok(0.0);
        }
        // Probe the endpoints so range errors surface before integrating.
        self.conductivity(t_low)?;
        self.conductivity(t_high)?;

        let mut cuts: Vec<f64> = vec![t_low];
        for &(t, _) in &self.points {
            if t > t_low && t < t_high {
                cuts.push(t);
            }
        }
        cuts.push(t_high);

        let mut total = 0.0;
        for w in cuts.windows(2) {
            let f = |t: f64| self.conductivity(t).unwrap_or(0.0);
            total += adaptive_simpson(&f, w[0], w[1], QUAD_REL_TOL);
        }
        Ok(total)
    }

    fn range_error(&self, t_k: f64) -> CryoError {
        let (lo, hi) = self.valid_range();
        CryoError::TemperatureRange {
            material: self.name.clone(),
            t_k,
            lo_k: if self.extrapolation == Extrapolation::LinearToZero { 0.0 } else { lo },
            hi_k: hi,
        }
    }
}

/// Conductor stack-up diameters of a coaxial cable.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConductorGeometry {
    pub cc_diameter_m: f64,
    pub dielectric_od_m: f64,
    pub shield_od_m: f64,
}

impl ConductorGeometry {
    fn validate(&self, name: &str) -> Result<()> {
        if !(self.cc_diameter_m > 0.0
            && self.cc_diameter_m < self.dielectric_od_m
            && self.dielectric_od_m < self.shield_od_m)
        {
            return Err(CryoError::Config(format!(
                "cable `{name}`: require 0 < cc_diameter < dielectric_od < shield_od"
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> ConductorGeometry {
        ConductorGeometry {
            cc_diameter_m: self.cc_diameter_m * s,
            dielectric_od_m: self.dielectric_od_m * s,
            shield_od_m: self.shield_od_m * s,
        }
    }
}

/// One of the three conduction paths through a coaxial cable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CableElement {
    Outer,
    Dielectric,
    Center,
}

impl CableElement {
    pub const ALL: [CableElement; 3] =
        [CableElement::Outer, CableElement::Dielectric, CableElement::Center];
}

/// A coaxial cable: geometry, materials, and RF attenuation data.
#[derive(Debug, Clone)]
pub struct CableSpec {
    pub name: String,
    pub geometry: ConductorGeometry,
    pub center: Arc<Material>,
    pub dielectric: Arc<Material>,
    pub outer: Arc<Material>,
    /// (frequency Hz, dB/m) at room temperature, non-decreasing in both.
    pub attenuation_curve: Vec<(f64, f64)>,
    /// Factor applied to the attenuation for cable runs below the 4 K plate.
    pub cryo_attenuation_scale: f64,
    /// Center + shield loop resistance at cryogenic temperature, ohm/m.
    pub dc_resistance_per_m: f64,
}

impl CableSpec {
    /// Center conductor cross section, m^2.
    pub fn area_center(&self) -> f64 {
        std::f64::consts::PI * self.geometry.cc_diameter_m.powi(2) / 4.0
    }

    /// Dielectric annulus cross section, m^2.
    pub fn area_dielectric(&self) -> f64 {
        std::f64::consts::PI
            * (self.geometry.dielectric_od_m.powi(2) - self.geometry.cc_diameter_m.powi(2))
            / 4.0
    }

    /// Outer conductor annulus cross section, m^2.
    pub fn area_outer(&self) -> f64 {
        std::f64::consts::PI
            * (self.geometry.shield_od_m.powi(2) - self.geometry.dielectric_od_m.powi(2))
            / 4.0
    }

    pub fn area(&self, element: CableElement) -> f64 {
        match element {
            CableElement::Outer => self.area_outer(),
            CableElement::Dielectric => self.area_dielectric(),
            CableElement::Center => self.area_center(),
        }
    }

    pub fn material(&self, element: CableElement) -> &Arc<Material> {
        match element {
            CableElement::Outer => &self.outer,
            CableElement::Dielectric => &self.dielectric,
            CableElement::Center => &self.center,
        }
    }

    /// Attenuation of `length_m` of this cable at `frequency_hz`, dB.
    pub fn attenuation_db(&self, frequency_hz: f64, length_m: f64, cryogenic: bool) -> Result<f64> {
        if length_m < 0.0 {
            return Err(CryoError::Domain(format!("negative cable length {length_m} m")));
        }
        let per_m = self.attenuation_db_per_m(frequency_hz)?;
        let scale = if cryogenic { self.cryo_attenuation_scale } else { 1.0 };
        Ok(per_m * scale * length_m)
    }

    pub fn attenuation_db_per_m(&self, frequency_hz: f64) -> Result<f64> {
        let curve = &self.attenuation_curve;
        let (lo, hi) = (curve[0].0, curve[curve.len() - 1].0);
        if frequency_hz < lo || frequency_hz > hi {
            return Err(CryoError::FrequencyRange {
                cable: self.name.clone(),
                frequency_hz,
                lo_hz: lo,
                hi_hz: hi,
            });
        }
        let idx = curve.partition_point(|&(f, _)| f <= frequency_hz).min(curve.len() - 1);
        if curve[idx.saturating_sub(1)].0 == frequency_hz {
            return Ok(curve[idx.saturating_sub(1)].1);
        }
        let (f1, a1) = curve[idx - 1];
        let (f2, a2) = curve[idx];
        Ok(a1 + (a2 - a1) * (frequency_hz - f1) / (f2 - f1))
    }

    /// The same cable with every diameter multiplied by `s`: cross sections go
    /// as s^2, RF attenuation as 1/s, DC resistance as 1/s^2.
    pub fn scaled(&self, s: f64) -> CableSpec {
        CableSpec {
            name: self.name.clone(),
            geometry: self.geometry.scaled(s),
            center: Arc::clone(&self.center),
            dielectric: Arc::clone(&self.dielectric),
            outer: Arc::clone(&self.outer),
            attenuation_curve: self.attenuation_curve.iter().map(|&(f, a)| (f, a / s)).collect(),
            cryo_attenuation_scale: self.cryo_attenuation_scale,
            dc_resistance_per_m: self.dc_resistance_per_m / (s * s),
        }
    }
}

/// DC loom wiring: a twisted pair of round wires.
#[derive(Debug, Clone)]
pub struct TwistedPairSpec {
    pub name: String,
    pub wire_material: Arc<Material>,
    pub wire_diameter_m: f64,
    pub wires_per_pair: u32,
}

impl TwistedPairSpec {
    /// Total metal cross section of the pair, m^2.
    pub fn area_total(&self) -> f64 {
        self.wires_per_pair as f64 * std::f64::consts::PI * self.wire_diameter_m.powi(2) / 4.0
    }
}

// ---------------------------------------------------------------------------
// Catalog file schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    schema_version: u32,
    #[serde(default)]
    #[allow(dead_code)]
    units: Option<String>,
    materials: Vec<MaterialEntry>,
    #[serde(default)]
    cables: Vec<CableEntry>,
    #[serde(default)]
    twisted_pairs: Vec<PairEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialEntry {
    name: String,
    conductivity_points: Vec<(f64, f64)>,
    /// Documentation of the sampled fit range; must match the sample span.
    valid_range: (f64, f64),
    extrapolation: Extrapolation,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CableEntry {
    name: String,
    conductor_geometry: ConductorGeometry,
    materials: CableMaterials,
    attenuation_curve_db_per_m: Vec<(f64, f64)>,
    cryo_attenuation_scale: f64,
    dc_resistance_per_m_ohm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CableMaterials {
    center: String,
    dielectric: String,
    outer: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    name: String,
    wire_material: String,
    wire_diameter_m: f64,
    wires_per_pair: u32,
}

/// Immutable material/cable database. Safe to share across threads.
#[derive(Debug, Default)]
pub struct Catalog {
    materials: BTreeMap<String, Arc<Material>>,
    cables: BTreeMap<String, Arc<CableSpec>>,
    twisted_pairs: BTreeMap<String, Arc<TwistedPairSpec>>,
}

static BUILTIN: OnceLock<Catalog> = OnceLock::new();

impl Catalog {
    /// The catalog bundled with the crate.
    pub fn builtin() -> &'static Catalog {
        BUILTIN.get_or_init(|| {
            Catalog::from_json(include_str!("../data/catalog.json"))
                .expect("bundled catalog must parse")
        })
    }

    pub fn from_json(text: &str) -> Result<Catalog> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: CatalogFile = serde_path_to_error::deserialize(de)
            .map_err(|e| CryoError::Config(format!("catalog: {e}")))?;
        if file.schema_version != 1 {
            return Err(CryoError::Config(format!(
                "catalog: unsupported schema_version {}",
                file.schema_version
            )));
        }
        let mut cat = Catalog::default();
        for m in file.materials {
            let mat = Material::new(m.name.clone(), m.conductivity_points, m.extrapolation)?;
            let (lo, hi) = mat.valid_range();
            if (m.valid_range.0 - lo).abs() > 1e-12 || (m.valid_range.1 - hi).abs() > 1e-12 {
                return Err(CryoError::Config(format!(
                    "material `{}`: valid_range {:?} does not match sample span [{lo}, {hi}]",
                    m.name, m.valid_range
                )));
            }
            cat.materials.insert(m.name, Arc::new(mat));
        }
        for c in file.cables {
            c.conductor_geometry.validate(&c.name)?;
            if c.attenuation_curve_db_per_m.is_empty() {
                return Err(CryoError::Config(format!("cable `{}`: empty attenuation curve", c.name)));
            }
            for w in c.attenuation_curve_db_per_m.windows(2) {
                if w[1].0 <= w[0].0 || w[1].1 < w[0].1 {
                    return Err(CryoError::Config(format!(
                        "cable `{}`: attenuation curve must be increasing in frequency and non-decreasing in dB/m",
                        c.name
                    )));
                }
            }
            let spec = CableSpec {
                name: c.name.clone(),
                geometry: c.conductor_geometry,
                center: Arc::clone(cat.material(&c.materials.center)?),
                dielectric: Arc::clone(cat.material(&c.materials.dielectric)?),
                outer: Arc::clone(cat.material(&c.materials.outer)?),
                attenuation_curve: c.attenuation_curve_db_per_m,
                cryo_attenuation_scale: c.cryo_attenuation_scale,
                dc_resistance_per_m: c.dc_resistance_per_m_ohm,
            };
            cat.cables.insert(c.name, Arc::new(spec));
        }
        for p in file.twisted_pairs {
            if p.wire_diameter_m <= 0.0 {
                return Err(CryoError::Config(format!("twisted pair `{}`: diameter must be > 0", p.name)));
            }
            let spec = TwistedPairSpec {
                name: p.name.clone(),
                wire_material: Arc::clone(cat.material(&p.wire_material)?),
                wire_diameter_m: p.wire_diameter_m,
                wires_per_pair: p.wires_per_pair,
            };
            cat.twisted_pairs.insert(p.name, Arc::new(spec));
        }
        Ok(cat)
    }

    pub fn material(&self, name: &str) -> Result<&Arc<Material>> {
        self.materials.get(name).ok_or_else(|| CryoError::UnknownEntry {
            kind: "material",
            name: name.to_string(),
        })
    }

    pub fn cable(&self, name: &str) -> Result<&Arc<CableSpec>> {
        self.cables.get(name).ok_or_else(|| CryoError::UnknownEntry {
            kind: "cable",
            name: name.to_string(),
        })
    }

    pub fn twisted_pair(&self, name: &str) -> Result<&Arc<TwistedPairSpec>> {
        self.twisted_pairs.get(name).ok_or_else(|| CryoError::UnknownEntry {
            kind: "twisted pair",
            name: name.to_string(),
        })
    }

    pub fn material_names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(String::as_str)
    }

    pub fn cable_names(&self) -> impl Iterator<Item = &str> {
        self.cables.keys().map(String::as_str)
    }

    /// A copy of the catalog with every cable's diameters scaled by `s`.
    pub fn with_scaled_cables(&self, s: f64) -> Catalog {
        Catalog {
            materials: self.materials.clone(),
            cables: self
                .cables
                .iter()
                .map(|(k, v)| (k.clone(), Arc::new(v.scaled(s))))
                .collect(),
            twisted_pairs: self.twisted_pairs.clone(),
        }
    }
}
