//! Dressed-state reduction of the resonantly driven two-level model.
//!
//! With `|±⟩ = (|g⟩ ± |e⟩)/√2`, `σ₊ᴰ = |+⟩⟨−|`, `σ₋ᴰ = |−⟩⟨+|` and
//! `σzᴰ = |+⟩⟨+| − |−⟩⟨−|`, the bare raising operator is
//! `σ₊ = ½σzᴰ + ½(σ₊ᴰ − σ₋ᴰ)`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{embed, transition, CsrMatrix, Operator};
use crate::lindblad::{build_liouvillian, CollapseChannel};

use super::two_level::{mode_layout, mode_operators};
use super::{BuiltSystem, TwoLevelParams, ATOM};

/// `(σ₊ᴰ, σ₋ᴰ, σzᴰ)` as 2 × 2 operators in the bare `(|g⟩, |e⟩)` basis.
pub fn dressed_operators() -> Result<(Operator, Operator, Operator)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = [s, s];
    let minus = [s, -s];
    let outer = |u: [f64; 2], v: [f64; 2]| {
        let trip = (0..2).flat_map(move |i| (0..2).map(move |j| (i, j, C64::new(u[i] * v[j], 0.0))));
        CsrMatrix::from_triplets(2, 2, trip)
    };
    let sp = outer(plus, minus);
    let sm = outer(minus, plus);
    let sz = outer(plus, plus).lin_comb(C64::new(1.0, 0.0), &outer(minus, minus), C64::new(-1.0, 0.0));
    Ok((
        Operator::local(ATOM, sp)?,
        Operator::local(ATOM, sm)?,
        Operator::local(ATOM, sz)?,
    ))
}

/// `H = (g/2)[(r − b†)σ₋ᴰ + σ₊ᴰ(r† − b)]` in the frame co-rotating with the
/// dressed splitting. Atomic decay is kept in its secular form
/// `(γ/4)[D(σzᴰ) + D(σ₋ᴰ) + D(σ₊ᴰ)]`; the modes decay at `2κ`.
///
/// Requires `Ω = Δ₀`.
pub fn build_dressed_secular(p: &TwoLevelParams) -> Result<BuiltSystem> {
    p.validate()?;
    if (p.omega_rabi - p.delta0).abs() > 1e-12 * p.delta0 {
        return Err(Error::InvalidParameter {
            name: "omega_rabi",
            reason: format!(
                "dressed model requires omega_rabi = delta0, got {} and {}",
                p.omega_rabi, p.delta0
            ),
        });
    }
    let layout = mode_layout(2, p.n_max)?;
    let (sp_d, sm_d, sz_d) = dressed_operators()?;
    let sp_d = embed(&sp_d, &layout, ATOM)?;
    let sm_d = embed(&sm_d, &layout, ATOM)?;
    let sz_d = embed(&sz_d, &layout, ATOM)?;
    let (r, b) = mode_operators(&layout, p.n_max)?;

    let h = (&(&(&r - &b.adjoint()) * &sm_d) + &(&sp_d * &(&r.adjoint() - &b))).scale(p.g / 2.0);
    let quarter = p.gamma / 4.0;
    let channels = vec![
        CollapseChannel::new(sz_d.clone(), quarter)?,
        CollapseChannel::new(sm_d.clone(), quarter)?,
        CollapseChannel::new(sp_d.clone(), quarter)?,
        CollapseChannel::new(r.clone(), 2.0 * p.kappa)?,
        CollapseChannel::new(b.clone(), 2.0 * p.kappa)?,
    ];
    let liouvillian = build_liouvillian(h, channels)?;

    let sm = transition(&layout, ATOM, 1, 0)?;
    let mut operators = BTreeMap::new();
    operators.insert("atom".to_string(), sm.clone());
    operators.insert("sigma_minus".to_string(), sm);
    operators.insert("sigma_plus_d".to_string(), sp_d);
    operators.insert("sigma_minus_d".to_string(), sm_d);
    operators.insert("sigma_z_d".to_string(), sz_d);
    operators.insert("E".to_string(), &r + &b);
    operators.insert("r".to_string(), r);
    operators.insert("b".to_string(), b);

    Ok(BuiltSystem {
        layout,
        liouvillian,
        operators,
        warnings: p.warnings(),
    })
}

/// Approximate auto-correlation of either mode: `1 − e^{−γτ/2}`.
pub fn dressed_g2_auto(tau: f64, gamma: f64) -> f64 {
    1.0 - (-0.5 * gamma * tau).exp()
}

/// Approximate cross-correlation between the modes:
/// `e^{−γτ/2} − 1 + ½(2 − e^{−κτ})² + ½e^{−2κτ}`.
pub fn dressed_g2_cross(tau: f64, gamma: f64, kappa: f64) -> f64 {
    let k = (-kappa * tau).exp();
    (-0.5 * gamma * tau).exp() - 1.0 + 0.5 * (2.0 - k).powi(2) + 0.5 * k * k
}
