//! Closed-form success probabilities, times and fidelities.

use crate::{Error, Result};

use super::ProtocolParams;

/// Largest half-angle for which `3(1 − cos θ)/4` is still a probability:
/// `arccos(−1/3)`.
pub fn max_collection_half_angle() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Fraction of dipole emission collected in a cone of half-angle `theta`:
/// `3(1 − cos θ)/4`.
pub fn collection_efficiency(theta: f64) -> Result<f64> {
    let max = max_collection_half_angle();
    if !(0.0..=max).contains(&theta) {
        return Err(Error::domain(
            "theta",
            format!("{theta} rad is outside [0, arccos(-1/3) = {max}]"),
        ));
    }
    Ok((0.75 * (1.0 - theta.cos())).min(1.0))
}

/// `p_e·p_c·η_d/2`: one click behind the beam splitter.
pub fn interference_success_probability(p_e: f64, p_c: f64, eta_d: f64) -> f64 {
    p_e * p_c * eta_d / 2.0
}

/// `p_c²·η_d²/8`, times 4 with polarizing beam splitters.
pub fn coincidence_success_probability(p_c: f64, eta_d: f64, pbs_variant: bool) -> f64 {
    let p = (p_c * eta_d).powi(2) / 8.0;
    if pbs_variant {
        4.0 * p
    } else {
        p
    }
}

pub fn success_prob_type1(params: &ProtocolParams) -> Result<f64> {
    params.validate_analytic()?;
    Ok(interference_success_probability(
        params.p_e,
        params.collection_efficiency()?,
        params.eta_d,
    ))
}

pub fn success_prob_type2(params: &ProtocolParams) -> Result<f64> {
    params.validate_analytic()?;
    Ok(coincidence_success_probability(
        params.collection_efficiency()?,
        params.eta_d,
        params.pbs_variant,
    ))
}

/// Mean time to a heralded success, `t_c/p_s`.
pub fn expected_entangle_time(p_s: f64, t_c: f64) -> Result<f64> {
    if !(p_s > 0.0 && p_s <= 1.0) {
        return Err(Error::domain("p_s", format!("{p_s} is not in (0, 1]")));
    }
    if !(t_c > 0.0 && t_c.is_finite()) {
        return Err(Error::domain("t_c", format!("{t_c} must be > 0")));
    }
    Ok(t_c / p_s)
}

/// Fidelity of the phase-averaged interference output with `(|01⟩+|10⟩)/√2`:
/// `(1 − p_e)·(1 + e^{−σ²/2})/2`.
pub fn type1_fidelity_analytic(sigma_phi: f64, p_e: f64) -> Result<f64> {
    if sigma_phi.is_nan() || sigma_phi < 0.0 {
        return Err(Error::domain("sigma_phi", format!("{sigma_phi} must be ≥ 0")));
    }
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::domain("p_e", format!("{p_e} is not in [0, 1]")));
    }
    let coherence = (-sigma_phi * sigma_phi / 2.0).exp();
    Ok((1.0 - p_e) * (1.0 + coherence) / 2.0)
}

/// Quantum-jump readout time `k·t_e/(p_c·η_d)`.
pub fn detection_time(t_e: f64, p_c: f64, eta_d: f64, k_photons: u32) -> Result<f64> {
    for (name, x) in [("t_e", t_e), ("p_c", p_c), ("eta_d", eta_d)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(name, format!("{x} must be > 0")));
        }
    }
    if k_photons == 0 {
        return Err(Error::domain("k_photons", "must be ≥ 1"));
    }
    Ok(f64::from(k_photons) * t_e / (p_c * eta_d))
}

/// `g²/(κ·γ_s)`; values far above 1 mean strong coupling.
pub fn strong_coupling_ratio(g: f64, kappa: f64, gamma_s: f64) -> Result<f64> {
    for (name, x) in [("g", g), ("kappa", kappa), ("gamma_s", gamma_s)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(name, format!("{x} must be > 0")));
        }
    }
    Ok(g * g / (kappa * gamma_s))
}
