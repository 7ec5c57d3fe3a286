//! Required signal levels and the dissipated powers they imply: Gaussian
//! pi-pulse drive model, duty cycles, and flux-bias dissipation.

use crate::constants::HBAR;
use crate::error::{CryoError, Result};

/// Gaussian pi-pulse drive parameters.
#[derive(Debug, Clone, Copy)]
pub struct PulseSpec {
    /// Gaussian width sigma, s.
    pub sigma_s: f64,
    /// Total pulse duration, s (>= 6 sigma recommended).
    pub duration_s: f64,
    /// Qubit angular frequency, rad/s.
    pub qubit_omega: f64,
    /// Purcell-limited T1 target set by the drive-line coupling, s.
    pub t1_limit_s: f64,
    /// Fraction of algorithm time carrying drive pulses.
    pub duty_cycle: f64,
    /// Fraction of pulses that are pi/2 (quarter power) rather than pi.
    pub pi_half_share: f64,
}

impl Default for PulseSpec {
    fn default() -> Self {
        PulseSpec {
            sigma_s: 5e-9,
            duration_s: 30e-9,
            qubit_omega: 2.0 * std::f64::consts::PI * 5e9,
            t1_limit_s: 0.5e-3,
            duty_cycle: 1.0 / 3.0,
            pi_half_share: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PulsePowers {
    /// Peak Rabi rate Omega_0 = sqrt(pi / (2 sigma^2)), rad/s.
    pub rabi_peak: f64,
    /// Peak drive power, W.
    pub p_peak_w: f64,
    /// Average power over one pulse, (sqrt(pi)/6) * peak, W.
    pub p_avg_w: f64,
    /// Line average including duty cycle and the pi/2 share, W.
    pub p_line_avg_w: f64,
    /// True when duration < 6 sigma (clipped Gaussian).
    pub duration_warning: bool,
}

/// Power levels needed to drive a pi-pulse through a weakly coupled line.
pub fn pi_pulse_powers(pulse: &PulseSpec) -> Result<PulsePowers> {
    if pulse.sigma_s <= 0.0 || pulse.t1_limit_s <= 0.0 || pulse.qubit_omega <= 0.0 {
        return Err(CryoError::Domain("sigma, T1 limit and qubit frequency must be > 0".into()));
    }
    if !(0.0..=1.0).contains(&pulse.duty_cycle) || !(0.0..=1.0).contains(&pulse.pi_half_share) {
        return Err(CryoError::Domain("duty_cycle and pi_half_share must lie in [0, 1]".into()));
    }
    let rabi_peak = (std::f64::consts::PI / (2.0 * pulse.sigma_s * pulse.sigma_s)).sqrt();
    let p_peak = HBAR * pulse.qubit_omega * pulse.t1_limit_s * rabi_peak * rabi_peak / 4.0;
    let p_avg = std::f64::consts::PI.sqrt() / 6.0 * p_peak;
    // a pi/2 pulse needs a quarter of the power
    let share = 1.0 * (1.0 - pulse.pi_half_share) + 0.25 * pulse.pi_half_share;
    let p_line = p_avg * pulse.duty_cycle * share;
    Ok(PulsePowers {
        rabi_peak,
        p_peak_w: p_peak,
        p_avg_w: p_avg,
        p_line_avg_w: p_line,
        duration_warning: pulse.duration_s < 6.0 * pulse.sigma_s,
    })
}

/// Effective DC resistances seen by flux-bias currents, and the bias plan.
#[derive(Debug, Clone, Copy)]
pub struct FluxBiasSpec {
    /// Dissipation coefficient at the mixing chamber, W/A^2 (== ohm).
    pub r_eff_mxc_ohm: f64,
    /// Dissipation coefficient at the cold plate, W/A^2.
    pub r_eff_cp_ohm: f64,
    /// Static offset currents are uniform over [-i_max, i_max], A.
    pub i_max_a: f64,
    /// Two-qubit-gate flux pulse amplitude, A.
    pub pulse_amplitude_a: f64,
    /// Flux-pulse duty cycle.
    pub pulse_duty: f64,
}

impl Default for FluxBiasSpec {
    fn default() -> Self {
        FluxBiasSpec {
            r_eff_mxc_ohm: 0.15,
            r_eff_cp_ohm: 0.42,
            i_max_a: 1e-3,
            pulse_amplitude_a: 0.2e-3,
            pulse_duty: 1.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxLoads {
    pub p_mxc_w: f64,
    pub p_cp_w: f64,
}

/// Dissipation of a static bias current `i_a`: R_eff * I^2 on each stage.
pub fn flux_bias_load(spec: &FluxBiasSpec, i_a: f64) -> FluxLoads {
    FluxLoads {
        p_mxc_w: spec.r_eff_mxc_ohm * i_a * i_a,
        p_cp_w: spec.r_eff_cp_ohm * i_a * i_a,
    }
}

/// Mean dissipation over offsets uniform in [-i_max, i_max]: R_eff I_max^2 / 3.
pub fn flux_bias_average_load(spec: &FluxBiasSpec) -> Result<FluxLoads> {
    if spec.i_max_a <= 0.0 {
        return Err(CryoError::Domain(format!("i_max {} must be > 0", spec.i_max_a)));
    }
    let f = spec.i_max_a * spec.i_max_a / 3.0;
    Ok(FluxLoads { p_mxc_w: spec.r_eff_mxc_ohm * f, p_cp_w: spec.r_eff_cp_ohm * f })
}

/// Dissipation of the two-qubit-gate flux pulses: R_eff * amplitude^2 * duty.
pub fn flux_pulse_load(spec: &FluxBiasSpec) -> FluxLoads {
    let f = spec.pulse_amplitude_a * spec.pulse_amplitude_a * spec.pulse_duty;
    FluxLoads { p_mxc_w: spec.r_eff_mxc_ohm * f, p_cp_w: spec.r_eff_cp_ohm * f }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::w_to_dbm;
    use approx::assert_relative_eq;

    #[test]
    fn rabi_rate_golden() {
        let p = pi_pulse_powers(&PulseSpec::default()).unwrap();
        let mhz = p.rabi_peak / (2.0 * std::f64::consts::PI) / 1e6;
        assert!((mhz - 40.0).abs() / 40.0 < 0.01, "got {mhz} MHz");
        assert_relative_eq!(mhz, 39.8942, max_relative = 1e-4);
    }

    #[test]
    fn peak_power_formula_value() {
        // direct evaluation of hbar omega T1 Omega0^2 / 4 with the printed
        // parameters; the often-quoted -66 dBm does not follow from it
        let p = pi_pulse_powers(&PulseSpec::default()).unwrap();
        assert_relative_eq!(p.p_peak_w, 2.602052e-11, max_relative = 1e-5);
        assert!((w_to_dbm(p.p_peak_w) + 75.85).abs() < 0.05);
    }

    #[test]
    fn average_ratio_is_exact() {
        let p = pi_pulse_powers(&PulseSpec::default()).unwrap();
        assert_relative_eq!(
            p.p_avg_w / p.p_peak_w,
            std::f64::consts::PI.sqrt() / 6.0,
            max_relative = 1e-15
        );
        // about -5.3 dB
        let db = 10.0 * (p.p_avg_w / p.p_peak_w).log10();
        assert!((db + 5.296).abs() < 0.01);
    }

    #[test]
    fn duty_chain_step() {
        // 33% duty with an equal pi / pi-2 share: -71 dBm -> -78 dBm class step
        let p = pi_pulse_powers(&PulseSpec::default()).unwrap();
        let db = 10.0 * (p.p_line_avg_w / p.p_avg_w).log10();
        assert!((db + 6.812).abs() < 0.01, "got {db}");
        assert!((db + 7.0).abs() < 0.3);
    }

    #[test]
    fn ordering_invariant() {
        let p = pi_pulse_powers(&PulseSpec::default()).unwrap();
        assert!(p.p_line_avg_w <= p.p_avg_w && p.p_avg_w <= p.p_peak_w);
        assert!(!p.duration_warning);
        let clipped = PulseSpec { duration_s: 10e-9, ..PulseSpec::default() };
        assert!(pi_pulse_powers(&clipped).unwrap().duration_warning);
    }

    #[test]
    fn flux_bias_goldens() {
        let spec = FluxBiasSpec::default();
        let at_1ma = flux_bias_load(&spec, 1e-3);
        assert_relative_eq!(at_1ma.p_mxc_w, 0.15e-6, max_relative = 1e-12);
        assert_eq!(flux_bias_load(&spec, 0.0).p_mxc_w, 0.0);
        let cp = FluxBiasSpec { r_eff_cp_ohm: 0.42, ..spec };
        assert_relative_eq!(flux_bias_load(&cp, 4.6e-3).p_cp_w, 0.42 * 4.6e-3 * 4.6e-3, max_relative = 1e-12);

        let avg = flux_bias_average_load(&spec).unwrap();
        assert_relative_eq!(avg.p_mxc_w, 0.050e-6, max_relative = 1e-9);
        assert_relative_eq!(25.0 * avg.p_mxc_w, 1.25e-6, max_relative = 1e-9);
    }

    #[test]
    fn average_matches_numeric_mean() {
        // midpoint-rule average of R I^2 over 1e5 bins of [0, i_max]
        let spec = FluxBiasSpec::default();
        let n = 100_000;
        let mut acc = 0.0;
        for i in 0..n {
            let cur = spec.i_max_a * (i as f64 + 0.5) / n as f64;
            acc += flux_bias_load(&spec, cur).p_mxc_w;
        }
        let numeric = acc / n as f64;
        let analytic = flux_bias_average_load(&spec).unwrap().p_mxc_w;
        assert!((numeric - analytic).abs() / analytic < 1e-3);
    }

    #[test]
    fn pulse_load_scalings() {
        let spec = FluxBiasSpec::default();
        let p = flux_pulse_load(&spec);
        let dc = flux_bias_average_load(&spec).unwrap();
        assert!(p.p_mxc_w <= 0.2 * dc.p_mxc_w, "{} vs {}", p.p_mxc_w, dc.p_mxc_w);
        assert!(p.p_cp_w <= 0.2 * dc.p_cp_w);
        let zero_duty = FluxBiasSpec { pulse_duty: 0.0, ..spec };
        assert_eq!(flux_pulse_load(&zero_duty).p_mxc_w, 0.0);
        let doubled = FluxBiasSpec { pulse_amplitude_a: 0.4e-3, ..spec };
        assert_relative_eq!(flux_pulse_load(&doubled).p_mxc_w, 4.0 * p.p_mxc_w, max_relative = 1e-12);
    }
}
