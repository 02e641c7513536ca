use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::hilbert::{annihilation, embed, transition, Operator, SpaceLayout};
use crate::lindblad::{build_liouvillian, CollapseChannel};

use super::{check_non_negative, check_positive, BuiltSystem, ATOM, BLUE, RED, RESOLVED_RATIO};

/// Parameters of the driven two-level atom with two cavity modes at `±Δ₀`.
/// Rates are in units of γ.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelParams {
    pub gamma: f64,
    /// Field halfwidth of each mode; the modes lose energy at `2κ`.
    pub kappa: f64,
    pub g: f64,
    pub omega_rabi: f64,
    pub delta0: f64,
    pub n_max: usize,
}

impl Default for TwoLevelParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            kappa: 1.0,
            g: 1.0,
            omega_rabi: 25.0,
            delta0: 25.0,
            n_max: 3,
        }
    }
}

impl TwoLevelParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("gamma", self.gamma)?;
        check_positive("kappa", self.kappa)?;
        check_non_negative("g", self.g)?;
        check_non_negative("omega_rabi", self.omega_rabi)?;
        check_positive("delta0", self.delta0)?;
        if self.n_max == 0 {
            return Err(crate::Error::InvalidTruncation);
        }
        Ok(())
    }

    /// `Δ₀ / max(g, κ)`.
    pub fn mode_resolution(&self) -> f64 {
        self.delta0 / self.g.max(self.kappa)
    }

    pub fn modes_resolved(&self) -> bool {
        self.mode_resolution() >= RESOLVED_RATIO
    }

    pub(crate) fn warnings(&self) -> Vec<String> {
        if self.modes_resolved() {
            Vec::new()
        } else {
            vec![format!(
                "modes not well resolved: delta0/max(g, kappa) = {:.3} < {RESOLVED_RATIO}",
                self.mode_resolution()
            )]
        }
    }
}

pub(crate) fn mode_layout(atom_dim: usize, n_max: usize) -> Result<Arc<SpaceLayout>> {
    Ok(Arc::new(SpaceLayout::new([
        (ATOM, atom_dim),
        (RED, n_max + 1),
        (BLUE, n_max + 1),
    ])?))
}

/// Mode lowering operators `(r, b)` on `layout`.
pub(crate) fn mode_operators(layout: &Arc<SpaceLayout>, n_max: usize) -> Result<(Operator, Operator)> {
    let a = annihilation(n_max)?;
    Ok((embed(&a, layout, RED)?, embed(&a, layout, BLUE)?))
}

/// `H = (Ω/2)(σ₋ + σ₊) + Δ₀(b†b − r†r) + g([r + b]σ₊ + σ₋[r† + b†])` with
/// decay `γ D(σ₋) + 2κ D(r) + 2κ D(b)`. Atomic basis `(|g⟩, |e⟩)`.
pub fn build_two_level(p: &TwoLevelParams) -> Result<BuiltSystem> {
    p.validate()?;
    let layout = mode_layout(2, p.n_max)?;
    let sm = transition(&layout, ATOM, 1, 0)?;
    let sp = sm.adjoint();
    let (r, b) = mode_operators(&layout, p.n_max)?;
    let e = &r + &b;

    let drive = (&sm + &sp).scale(p.omega_rabi / 2.0);
    let modes = (&(&b.adjoint() * &b) - &(&r.adjoint() * &r)).scale(p.delta0);
    let coupling = (&(&e * &sp) + &(&sm * &e.adjoint())).scale(p.g);
    let h = &(&drive + &modes) + &coupling;

    let channels = vec![
        CollapseChannel::new(sm.clone(), p.gamma)?,
        CollapseChannel::new(r.clone(), 2.0 * p.kappa)?,
        CollapseChannel::new(b.clone(), 2.0 * p.kappa)?,
    ];
    let liouvillian = build_liouvillian(h, channels)?;

    let mut operators = BTreeMap::new();
    operators.insert("atom".to_string(), sm.clone());
    operators.insert("sigma_minus".to_string(), sm);
    operators.insert("r".to_string(), r);
    operators.insert("b".to_string(), b);
    operators.insert("E".to_string(), e);

    Ok(BuiltSystem {
        layout,
        liouvillian,
        operators,
        warnings: p.warnings(),
    })
}
