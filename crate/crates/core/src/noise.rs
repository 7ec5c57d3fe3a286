//! Thermal photon and current-noise propagation through attenuator chains,
//! and the dephasing-time bounds they imply for flux-tunable qubits.
//!
//! A discrete attenuator of linear power attenuation A thermalized at T acts
//! as a beamsplitter: it transmits 1/A of the incident photon occupation and
//! adds (A-1)/A of the local blackbody occupation. Lossy cable runs are the
//! continuous limit of that map, integrated over a linear temperature
//! gradient between their end plates.

use crate::constants::{db_to_linear, BOLTZMANN, PLANCK};
use crate::error::{CryoError, Result};

/// Bose-Einstein photon occupation at temperature `t_k` and frequency `nu_hz`.
pub fn bose_einstein(t_k: f64, nu_hz: f64) -> f64 {
    if t_k <= 0.0 {
        return 0.0;
    }
    let x = PLANCK * nu_hz / (BOLTZMANN * t_k);
    1.0 / x.exp_m1()
}

/// Two-sided blackbody voltage PSD across a resistance `r_ohm`, V^2/Hz:
/// `2 k_B T R * (h nu / k_B T) * n_BE`. Reduces to `2 k_B T R` for
/// `h nu << k_B T`.
pub fn thermal_voltage_psd(t_k: f64, r_ohm: f64, nu_hz: f64) -> f64 {
    if t_k <= 0.0 {
        return 0.0;
    }
    let x = PLANCK * nu_hz / (BOLTZMANN * t_k);
    2.0 * BOLTZMANN * t_k * r_ohm * x * bose_einstein(t_k, nu_hz)
}

/// Classical two-sided Johnson-Nyquist current-noise PSD, A^2/Hz.
pub fn thermal_current_psd(t_k: f64, r_ohm: f64) -> f64 {
    2.0 * BOLTZMANN * t_k / r_ohm
}

/// One element of an attenuation chain, ordered along the signal direction.
#[derive(Debug, Clone)]
pub enum ChainElement {
    /// Lumped attenuator with linear power attenuation >= 1, thermalized at
    /// `temperature_k`.
    Discrete { attenuation: f64, temperature_k: f64 },
    /// Cable run with total attenuation `total_db`, temperature varying
    /// linearly from `t_start_k` (signal entry) to `t_end_k`.
    Distributed { total_db: f64, t_start_k: f64, t_end_k: f64 },
}

#[derive(Debug, Clone, Default)]
pub struct AttenuatorChain {
    pub elements: Vec<ChainElement>,
}

impl AttenuatorChain {
    pub fn validate(&self) -> Result<()> {
        for el in &self.elements {
            match *el {
                ChainElement::Discrete { attenuation, .. } if attenuation < 1.0 => {
                    return Err(CryoError::Domain(format!(
                        "discrete attenuation {attenuation} must be >= 1"
                    )));
                }
                ChainElement::Distributed { total_db, .. } if total_db < 0.0 => {
                    return Err(CryoError::Domain(format!(
                        "distributed attenuation {total_db} dB must be >= 0"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn push_discrete_db(&mut self, db: f64, temperature_k: f64) {
        self.elements.push(ChainElement::Discrete {
            attenuation: db_to_linear(db),
            temperature_k,
        });
    }

    pub fn total_db(&self) -> f64 {
        self.elements
            .iter()
            .map(|el| match *el {
                ChainElement::Discrete { attenuation, .. } => 10.0 * attenuation.log10(),
                ChainElement::Distributed { total_db, .. } => total_db,
            })
            .sum()
    }
}

/// Photon occupation after each chain element.
#[derive(Debug, Clone)]
pub struct PhotonNumberProfile {
    pub frequency_hz: f64,
    pub input: f64,
    /// Occupation after element i.
    pub after_element: Vec<f64>,
}

impl PhotonNumberProfile {
    pub fn output(&self) -> f64 {
        self.after_element.last().copied().unwrap_or(self.input)
    }
}

fn discrete_step(n: f64, attenuation: f64, n_local: f64) -> f64 {
    n / attenuation + (attenuation - 1.0) / attenuation * n_local
}

/// Distributed segment integrated as a product of infinitesimal attenuators,
/// slice count doubled from 1000 until successive results agree to 1e-9
/// relative.
fn distributed_step(n0: f64, total_db: f64, t_start: f64, t_end: f64, nu_hz: f64) -> f64 {
    if total_db == 0.0 {
        return n0;
    }
    let eval = |slices: u32| -> f64 {
        let a_slice = db_to_linear(total_db / slices as f64);
        let mut n = n0;
        for i in 0..slices {
            let frac = (i as f64 + 0.5) / slices as f64;
            let t = t_start + (t_end - t_start) * frac;
            n = discrete_step(n, a_slice, bose_einstein(t, nu_hz));
        }
        n
    };
    let mut slices = 1000u32;
    let mut prev = eval(slices);
    loop {
        slices *= 2;
        let next = eval(slices);
        if (next - prev).abs() <= 1e-9 * next.abs().max(1e-300) || slices >= 64_000 {
            return next;
        }
        prev = next;
    }
}

/// Propagate a photon occupation through the chain (Eq.-3-style cascade).
pub fn cascade_photon_number(
    chain: &AttenuatorChain,
    nu_hz: f64,
    n_input: f64,
) -> Result<PhotonNumberProfile> {
    chain.validate()?;
    if n_input < 0.0 {
        return Err(CryoError::Domain(format!("input occupation {n_input} must be >= 0")));
    }
    let mut n = n_input;
    let mut after = Vec::with_capacity(chain.elements.len());
    for el in &chain.elements {
        n = match *el {
            ChainElement::Discrete { attenuation, temperature_k } => {
                discrete_step(n, attenuation, bose_einstein(temperature_k, nu_hz))
            }
            ChainElement::Distributed { total_db, t_start_k, t_end_k } => {
                distributed_step(n, total_db, t_start_k, t_end_k, nu_hz)
            }
        };
        after.push(n);
    }
    Ok(PhotonNumberProfile { frequency_hz: nu_hz, input: n_input, after_element: after })
}

/// Reference attenuation for a stage: the occupation ratio between the plate
/// above and the plate itself, in dB. More attenuation than this buys little.
pub fn reference_attenuation_db(t_above_k: f64, t_stage_k: f64, nu_hz: f64) -> f64 {
    10.0 * (bose_einstein(t_above_k, nu_hz) / bose_einstein(t_stage_k, nu_hz)).log10()
}

/// Effective current-noise PSD after a single attenuator at the 4 K stage
/// (classical Johnson-Nyquist regime), A^2/Hz.
pub fn current_noise_psd(a_4k_linear: f64, t_rt_k: f64, t_4k_k: f64, r_ohm: f64) -> Result<f64> {
    if a_4k_linear < 1.0 {
        return Err(CryoError::Domain(format!("attenuation {a_4k_linear} must be >= 1")));
    }
    Ok(thermal_current_psd(t_rt_k, r_ohm) / a_4k_linear
        + (a_4k_linear - 1.0) / a_4k_linear * thermal_current_psd(t_4k_k, r_ohm))
}

/// Coupling of flux-line current to the qubit frequency.
#[derive(Debug, Clone, Copy)]
pub struct FluxCoupling {
    /// Mutual inductance, flux quanta per ampere.
    pub mutual_inductance_phi0_per_a: f64,
    /// Sweet-spot angular frequency omega_0, rad/s.
    pub sweet_spot_omega: f64,
    /// Flux bias in units of the flux quantum, |phi| < 0.5.
    pub flux_phi0: f64,
}

/// Transition-frequency sensitivity D = (d omega / d Phi) * M, rad/(s A),
/// for the symmetric-SQUID dispersion omega = omega_0 sqrt(|cos(pi phi)|).
pub fn flux_sensitivity(coupling: &FluxCoupling) -> Result<f64> {
    let phi = coupling.flux_phi0;
    let c = (std::f64::consts::PI * phi).cos();
    if c <= 0.0 {
        return Err(CryoError::Domain(format!(
            "flux bias {phi} Phi0 is outside the cos > 0 branch"
        )));
    }
    let s = (std::f64::consts::PI * phi).sin();
    let domega_dphi = coupling.sweet_spot_omega * std::f64::consts::PI * s / (2.0 * c.sqrt());
    Ok(domega_dphi.abs() * coupling.mutual_inductance_phi0_per_a)
}

/// Flux bias (in Phi0) at which the qubit sits `detuning` below the sweet
/// spot: omega = (1 - detuning) * omega_0, i.e. cos(pi phi) = (1-d)^2.
pub fn flux_for_detuning(detuning: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&detuning) {
        return Err(CryoError::Domain(format!("detuning {detuning} outside [0, 1)")));
    }
    let target = (1.0 - detuning).powi(2);
    Ok(target.acos() / std::f64::consts::PI)
}

/// White-noise dephasing bounds; `Unbounded` encodes the sweet-spot case D=0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DephasingBounds {
    Bounded { t2_star_s: f64, t2_echo_s: f64 },
    Unbounded,
}

/// T2* = 2 / (D^2 S_I), with the echo bound exactly twice that.
pub fn dephasing_bounds(s_i: f64, d: f64) -> Result<DephasingBounds> {
    if s_i <= 0.0 {
        return Err(CryoError::Domain(format!("current PSD {s_i} must be > 0")));
    }
    if d == 0.0 {
        return Ok(DephasingBounds::Unbounded);
    }
    let t2_star = 2.0 / (d * d * s_i);
    Ok(DephasingBounds::Bounded { t2_star_s: t2_star, t2_echo_s: 2.0 * t2_star })
}
