//! Physical constants (CODATA 2018 exact values where defined).

/// Planck constant, J s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Stefan-Boltzmann constant, W m^-2 K^-4.
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;

/// Default signal frequency for noise budgets, Hz (qubits near 5 GHz, readout near 7 GHz).
pub const DEFAULT_FREQUENCY_HZ: f64 = 6.0e9;

/// Default room-temperature boundary, K.
pub const ROOM_TEMPERATURE_K: f64 = 300.0;

/// Convert a power in dBm to W.
pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Convert a power in W to dBm.
pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * (w / 1e-3).log10()
}

/// Convert attenuation in dB to a linear power factor >= 1.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power factor to dB.
pub fn linear_to_db(a: f64) -> f64 {
    10.0 * a.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dbm_round_trip() {
        assert!((dbm_to_w(0.0) - 1e-3).abs() < 1e-18);
        assert!((w_to_dbm(dbm_to_w(-78.0)) + 78.0).abs() < 1e-12);
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-12);
    }
}
