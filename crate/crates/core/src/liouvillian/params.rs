use alloc::format;

use crate::{Error, Result};

/// Collective pump and decay rates for `N` atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_atoms: usize,
    pump: f64,
    decay: f64,
}

impl ModelParams {
    pub fn new(n_atoms: usize, pump: f64, decay: f64) -> Result<Self> {
        if n_atoms < 1 {
            return Err(Error::Domain("atom count must be at least 1".into()));
        }
        if !(pump.is_finite() && decay.is_finite()) || pump < 0.0 || decay < 0.0 {
            return Err(Error::Domain(format!(
                "rates must be finite and non-negative (W = {pump}, Γc = {decay})"
            )));
        }
        if pump == 0.0 && decay == 0.0 {
            return Err(Error::Domain("pump and decay rates are both zero".into()));
        }
        Ok(Self {
            n_atoms,
            pump,
            decay,
        })
    }

    /// `W = ratio`, `Γc = 1`.
    pub fn from_ratio(n_atoms: usize, ratio: f64) -> Result<Self> {
        Self::new(n_atoms, ratio, 1.0)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Collective pump rate `W`.
    pub fn pump(&self) -> f64 {
        self.pump
    }

    /// Collective decay rate `Γc`.
    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `W/Γc`.
    pub fn ratio(&self) -> f64 {
        self.pump / self.decay
    }

    /// Same atom count with pump and decay exchanged.
    pub fn exchanged(&self) -> Self {
        Self {
            n_atoms: self.n_atoms,
            pump: self.decay,
            decay: self.pump,
        }
    }
}

/// Cavity and drive parameters, all in one shared frequency unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub g_x: f64,
    pub g_z: f64,
    pub omega: f64,
    pub delta_a: f64,
    pub kappa_x: f64,
    pub kappa_z: f64,
}

/// Rates after adiabatic elimination of both cavities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveRates {
    pub pump: f64,
    pub decay: f64,
}

/// `W = g_z²Ω²/(4Δ_a²κ_z)`, `Γc = g_x²/κ_x`.
pub fn effective_rates(p: &PhysicalParams) -> Result<EffectiveRates> {
    if !(p.kappa_x > 0.0) || !(p.kappa_z > 0.0) {
        return Err(Error::Domain("cavity linewidths must be positive".into()));
    }
    if p.delta_a == 0.0 || !p.delta_a.is_finite() {
        return Err(Error::Domain("drive detuning must be finite and non-zero".into()));
    }
    let pump = p.g_z * p.g_z * p.omega * p.omega / (4.0 * p.delta_a * p.delta_a * p.kappa_z);
    let decay = p.g_x * p.g_x / p.kappa_x;
    Ok(EffectiveRates { pump, decay })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phys() -> PhysicalParams {
        PhysicalParams {
            g_x: 1.0,
            g_z: 1.0,
            omega: 2.0,
            delta_a: 10.0,
            kappa_x: 100.0,
            kappa_z: 100.0,
        }
    }

    #[test]
    fn rates_by_substitution() {
        let r = effective_rates(&phys()).unwrap();
        assert!((r.decay - 0.01).abs() < 1e-18);
        assert!((r.pump - 1e-4).abs() < 1e-18);
        let r0 = effective_rates(&PhysicalParams { omega: 0.0, ..phys() }).unwrap();
        assert_eq!(r0.pump, 0.0);
    }

    #[test]
    fn invalid_physical_params() {
        assert!(effective_rates(&PhysicalParams { kappa_x: 0.0, ..phys() }).is_err());
        assert!(effective_rates(&PhysicalParams { kappa_z: -1.0, ..phys() }).is_err());
        assert!(effective_rates(&PhysicalParams { delta_a: 0.0, ..phys() }).is_err());
    }

    #[test]
    fn model_param_validation() {
        assert!(ModelParams::new(0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(2, 0.0, 0.0).is_err());
        assert!(ModelParams::new(2, -1.0, 1.0).is_err());
        assert!(ModelParams::new(2, f64::NAN, 1.0).is_err());
        let p = ModelParams::from_ratio(3, 10.0).unwrap();
        assert_eq!(p.exchanged().pump(), 1.0);
        assert_eq!(p.exchanged().decay(), 10.0);
    }
}
