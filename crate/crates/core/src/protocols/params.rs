use crate::{Error, Result};

use super::analytic::collection_efficiency;

/// How the photon collection efficiency of a link is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Collection {
    /// Collection cone half-angle in radians; efficiency is `3(1 − cos θ)/4`.
    HalfAngle(f64),
    /// Collection efficiency given directly.
    Efficiency(f64),
}

/// Physical parameters of one entangling link. Times in seconds, angles in
/// radians, lengths in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolParams {
    /// Excitation probability per pump pulse (interference protocol only).
    pub p_e: f64,
    pub collection: Collection,
    /// Detector efficiency.
    pub eta_d: f64,
    /// Multiplier on the free-space collection efficiency (cavity or fiber).
    pub enhancement: f64,
    /// Duration of one entangling attempt.
    pub t_c: f64,
    /// Radiative lifetime of the excited level.
    pub t_e: f64,
    /// Difference between pump and collected wave vectors (rad/m).
    pub delta_k: f64,
    /// RMS position spread of each ion (m).
    pub sigma_x: f64,
    /// RMS interferometer phase, replacing `√2·Δk·σ_x` when set.
    pub sigma_phi_override: Option<f64>,
    /// Polarizers replaced by polarizing beam splitters with extra detectors.
    pub pbs_variant: bool,
    /// Photons needed for a quantum-jump state readout.
    pub k_photons: u32,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams::cd111()
    }
}

fn unit_interval(field: &'static str, x: f64, allow_zero: bool) -> Result<()> {
    let lower_ok = if allow_zero { x >= 0.0 } else { x > 0.0 };
    if !(lower_ok && x <= 1.0) {
        let range = if allow_zero { "[0, 1]" } else { "(0, 1]" };
        return Err(Error::validation(field, format!("{x} is not in {range}")));
    }
    Ok(())
}

fn nonnegative(field: &'static str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::validation(field, format!("{x} must be finite and ≥ 0")));
    }
    Ok(())
}

impl ProtocolParams {
    /// Free-space ¹¹¹Cd⁺ magnitudes: `t_e = 3 ns`, `p_e = 1%`, `p_c·η_d = 10⁻³`.
    pub fn cd111() -> Self {
        ProtocolParams {
            p_e: 0.01,
            collection: Collection::Efficiency(1e-3),
            eta_d: 1.0,
            enhancement: 1.0,
            t_c: 3e-9,
            t_e: 3e-9,
            delta_k: 0.0,
            sigma_x: 0.0,
            sigma_phi_override: None,
            pbs_variant: false,
            k_photons: 3,
        }
    }

    /// Unit collection and detection, negligible excitation, no phase noise.
    pub fn ideal() -> Self {
        ProtocolParams {
            p_e: 1e-6,
            collection: Collection::Efficiency(1.0),
            eta_d: 1.0,
            ..ProtocolParams::cd111()
        }
    }

    /// Named parameter presets.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "cd111" => Ok(ProtocolParams::cd111()),
            "ideal" => Ok(ProtocolParams::ideal()),
            other => Err(Error::Unknown {
                kind: "preset",
                name: other.to_string(),
            }),
        }
    }

    pub const PRESETS: &'static [&'static str] = &["cd111", "ideal"];

    /// Collection efficiency after the enhancement factor, checked to be a
    /// probability.
    pub fn collection_efficiency(&self) -> Result<f64> {
        let base = match self.collection {
            Collection::HalfAngle(theta) => collection_efficiency(theta)
                .map_err(|e| Error::validation("theta", e.to_string()))?,
            Collection::Efficiency(p) => {
                unit_interval("pc", p, true)?;
                p
            }
        };
        if !(self.enhancement >= 1.0 && self.enhancement.is_finite()) {
            return Err(Error::validation(
                "enhancement",
                format!("{} must be finite and ≥ 1", self.enhancement),
            ));
        }
        let effective = base * self.enhancement;
        if effective > 1.0 {
            return Err(Error::validation(
                "enhancement",
                format!("effective collection efficiency {effective} exceeds 1"),
            ));
        }
        Ok(effective)
    }

    /// RMS phase of the interference protocol's heralded state.
    pub fn sigma_phi(&self) -> f64 {
        self.sigma_phi_override
            .unwrap_or(std::f64::consts::SQRT_2 * self.delta_k * self.sigma_x)
    }

    fn validate_common(&self) -> Result<()> {
        nonnegative("delta-k", self.delta_k)?;
        nonnegative("sigma-x", self.sigma_x)?;
        if let Some(s) = self.sigma_phi_override {
            nonnegative("sigma-phi", s)?;
        }
        if !(self.t_e > 0.0 && self.t_e.is_finite()) {
            return Err(Error::validation("te", format!("{} must be > 0", self.t_e)));
        }
        if !(self.t_c >= self.t_e && self.t_c.is_finite()) {
            return Err(Error::validation(
                "tc",
                format!("{} must be finite and ≥ te = {}", self.t_c, self.t_e),
            ));
        }
        if self.k_photons == 0 {
            return Err(Error::validation("k-photons", "must be ≥ 1"));
        }
        Ok(())
    }

    /// Checks for sampling: every efficiency strictly positive, and `p_e` in
    /// `(0, 1]` when `uses_p_e`.
    pub fn validate(&self, uses_p_e: bool) -> Result<()> {
        self.validate_common()?;
        let p_c = self.collection_efficiency()?;
        if p_c <= 0.0 {
            return Err(Error::validation("pc", "collection efficiency is 0"));
        }
        unit_interval("eta-d", self.eta_d, false)?;
        if uses_p_e {
            unit_interval("pe", self.p_e, false)?;
        }
        Ok(())
    }

    /// Relaxed checks for closed-form queries: zero efficiencies and `p_e = 0`
    /// are allowed.
    pub fn validate_analytic(&self) -> Result<()> {
        self.validate_common()?;
        self.collection_efficiency()?;
        unit_interval("eta-d", self.eta_d, true)?;
        unit_interval("pe", self.p_e, true)?;
        Ok(())
    }
}
