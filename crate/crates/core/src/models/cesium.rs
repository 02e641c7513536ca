//! Cesium D2 hyperfine atom (`6S½ F = 3, 4` ↔ `6P3/2 F' = 2'…5'`) with two
//! horizontally polarised cavity modes.
//!
//! The frame rotates with the laser, which is resonant with the cycling
//! transition `|4, ∓4⟩ ↔ |5', ∓5'⟩`; other manifolds carry their detuning in
//! the bare Hamiltonian.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{embed, expectation, CsrMatrix, DensityOperator, Operator};
use crate::lindblad::{build_liouvillian, CollapseChannel};

use super::angular::clebsch_gordan;
use super::two_level::{mode_layout, mode_operators};
use super::{check_non_negative, check_positive, BuiltSystem, ATOM, RESOLVED_RATIO};

/// Linewidth used to express the datasheet splittings in units of γ, MHz.
pub const GAMMA_MHZ: f64 = 5.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Manifold {
    Ground(u32),
    Excited(u32),
}

impl Manifold {
    pub const ALL: [Manifold; 6] = [
        Manifold::Ground(3),
        Manifold::Ground(4),
        Manifold::Excited(2),
        Manifold::Excited(3),
        Manifold::Excited(4),
        Manifold::Excited(5),
    ];

    pub fn f(self) -> u32 {
        match self {
            Manifold::Ground(f) | Manifold::Excited(f) => f,
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Ground(x) => write!(f, "{x}"),
            Manifold::Excited(x) => write!(f, "{x}'"),
        }
    }
}

impl FromStr for Manifold {
    type Err = Error;

    /// `"4"` is a ground manifold, `"5'"` an excited one.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter {
            name: "included_manifolds",
            reason: format!("unknown manifold `{s}`"),
        };
        let m = match s.strip_suffix('\'') {
            Some(x) => Manifold::Excited(x.parse().map_err(|_| bad())?),
            None => Manifold::Ground(s.parse().map_err(|_| bad())?),
        };
        if Manifold::ALL.contains(&m) {
            Ok(m)
        } else {
            Err(bad())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CesiumParams {
    pub gamma: f64,
    pub kappa: f64,
    /// Circular-basis coupling; the horizontal coupling is `√2 g`.
    pub g: f64,
    pub omega_rabi: f64,
    pub delta0: f64,
    pub n_max: usize,
    /// Energy of `F = 3` relative to `F = 4`.
    pub ground_splitting: f64,
    /// `Δ_{F'5'}` for `F' = 2, 3, 4`.
    pub excited_detunings: BTreeMap<u32, f64>,
    pub included_manifolds: BTreeSet<Manifold>,
    /// Drive polarisation `q = ±1`.
    pub polarization: i32,
}

impl Default for CesiumParams {
    fn default() -> Self {
        let (d45, d34, d23) = (251.0916, 201.2871, 151.2247);
        Self {
            gamma: 1.0,
            kappa: 1.0,
            g: 1.0,
            omega_rabi: 25.0,
            delta0: 25.0,
            n_max: 3,
            ground_splitting: -9192.631770 / GAMMA_MHZ,
            excited_detunings: BTreeMap::from([
                (4, -d45 / GAMMA_MHZ),
                (3, -(d45 + d34) / GAMMA_MHZ),
                (2, -(d45 + d34 + d23) / GAMMA_MHZ),
            ]),
            included_manifolds: [
                Manifold::Ground(4),
                Manifold::Excited(3),
                Manifold::Excited(4),
                Manifold::Excited(5),
            ]
            .into_iter()
            .collect(),
            polarization: -1,
        }
    }
}

impl CesiumParams {
    /// Every hyperfine manifold of the D2 line.
    pub fn with_full_basis(mut self) -> Self {
        self.included_manifolds = Manifold::ALL.into_iter().collect();
        self
    }

    pub fn g_horizontal(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.g
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("gamma", self.gamma)?;
        check_positive("kappa", self.kappa)?;
        check_non_negative("g", self.g)?;
        check_non_negative("omega_rabi", self.omega_rabi)?;
        check_positive("delta0", self.delta0)?;
        if self.n_max == 0 {
            return Err(Error::InvalidTruncation);
        }
        if self.polarization.abs() != 1 {
            return Err(Error::InvalidParameter {
                name: "polarization",
                reason: format!("must be -1 or +1, got {}", self.polarization),
            });
        }
        for m in [Manifold::Ground(4), Manifold::Excited(5)] {
            if !self.included_manifolds.contains(&m) {
                return Err(Error::ManifoldExcluded(m.to_string()));
            }
        }
        for fp in [2, 3, 4] {
            if self.included_manifolds.contains(&Manifold::Excited(fp))
                && !self.excited_detunings.contains_key(&fp)
            {
                return Err(Error::InvalidParameter {
                    name: "excited_detunings",
                    reason: format!("no detuning given for F' = {fp}"),
                });
            }
        }
        Ok(())
    }

    /// Detuning of manifold `F'` from `5'`.
    pub fn excited_detuning(&self, fp: u32) -> f64 {
        if fp == 5 {
            0.0
        } else {
            self.excited_detunings.get(&fp).copied().unwrap_or(f64::NAN)
        }
    }

    /// Smallest `|±Δ₀ − Δ_{F'5'}| / γ` over the included off-resonant
    /// excited manifolds; infinite when only `5'` is present.
    pub fn suppression_margin(&self) -> f64 {
        self.included_manifolds
            .iter()
            .filter_map(|m| match m {
                Manifold::Excited(fp) if *fp != 5 => Some(self.excited_detuning(*fp)),
                _ => None,
            })
            .flat_map(|d| [(self.delta0 - d).abs(), (-self.delta0 - d).abs()])
            .fold(f64::INFINITY, f64::min)
            / self.gamma
    }

    fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let res = self.delta0 / self.g.max(self.kappa);
        if res < RESOLVED_RATIO {
            out.push(format!(
                "modes not well resolved: delta0/max(g, kappa) = {res:.3} < {RESOLVED_RATIO}"
            ));
        }
        let sup = self.suppression_margin();
        if sup < RESOLVED_RATIO {
            out.push(format!(
                "off-resonant hyperfine coupling not suppressed: |delta0 - Delta_F'5'|/gamma = {sup:.3}"
            ));
        }
        out
    }

    /// Sublevels in basis order: ground manifolds by `F`, then excited, each
    /// with `m` ascending.
    fn sublevels(&self) -> Vec<(Manifold, i32)> {
        let mut out = Vec::new();
        for m in &self.included_manifolds {
            let f = m.f() as i32;
            out.extend((-f..=f).map(|mf| (*m, mf)));
        }
        out
    }
}

/// Builds the atom ⊗ red ⊗ blue system with
/// `H = H₀ + Δ₀(b†b − r†r) + (Ω/2)(D_q + D_q†) + g_h([r + b]D_h† + D_h[r† + b†])`,
/// `D_h = (D₊ + D₋)/√2`, and decay `γ Σ_q D(D_q) + 2κ D(r) + 2κ D(b)`.
pub fn build_cesium(p: &CesiumParams) -> Result<BuiltSystem> {
    p.validate()?;
    let levels = p.sublevels();
    let index: BTreeMap<(Manifold, i32), usize> =
        levels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let na = levels.len();
    let layout = mode_layout(na, p.n_max)?;

    let h0 = CsrMatrix::diagonal(
        &levels
            .iter()
            .map(|(m, _)| {
                C64::new(
                    match m {
                        Manifold::Ground(3) => p.ground_splitting,
                        Manifold::Ground(_) => 0.0,
                        Manifold::Excited(fp) => p.excited_detuning(*fp),
                    },
                    0.0,
                )
            })
            .collect::<Vec<_>>(),
    );

    let mut dipoles = BTreeMap::new();
    for q in [-1, 0, 1] {
        let mut trip = Vec::new();
        for &(ground, m) in &levels {
            let Manifold::Ground(f) = ground else { continue };
            for &(excited, mp) in &levels {
                let Manifold::Excited(fp) = excited else { continue };
                if mp != m + q {
                    continue;
                }
                let c = clebsch_gordan(f, fp, m, q)?;
                trip.push((index[&(ground, m)], index[&(excited, mp)], C64::new(c, 0.0)));
            }
        }
        let local = Operator::local(ATOM, CsrMatrix::from_triplets(na, na, trip))?;
        dipoles.insert(q, embed(&local, &layout, ATOM)?);
    }
    let (r, b) = mode_operators(&layout, p.n_max)?;
    let e = &r + &b;

    let dq = &dipoles[&p.polarization];
    let dh = (&dipoles[&1] + &dipoles[&-1]).scale(std::f64::consts::FRAC_1_SQRT_2);
    let h = &(&(&embed(&Operator::local(ATOM, h0)?, &layout, ATOM)?
        + &(&(&b.adjoint() * &b) - &(&r.adjoint() * &r)).scale(p.delta0))
        + &(dq + &dq.adjoint()).scale(p.omega_rabi / 2.0))
        + &(&(&e * &dh.adjoint()) + &(&dh * &e.adjoint())).scale(p.g_horizontal());

    let mut channels = Vec::new();
    for q in [-1, 0, 1] {
        channels.push(CollapseChannel::new(dipoles[&q].clone(), p.gamma)?);
    }
    channels.push(CollapseChannel::new(r.clone(), 2.0 * p.kappa)?);
    channels.push(CollapseChannel::new(b.clone(), 2.0 * p.kappa)?);
    let liouvillian = build_liouvillian(h, channels)?;

    let s = p.polarization;
    let projector = |level: (Manifold, i32)| -> Result<Operator> {
        let i = index[&level];
        let local = CsrMatrix::from_triplets(na, na, [(i, i, C64::new(1.0, 0.0))]);
        embed(&Operator::local(ATOM, local)?, &layout, ATOM)
    };
    let mut operators = BTreeMap::new();
    operators.insert("P_cycling_ground".into(), projector((Manifold::Ground(4), 4 * s))?);
    operators.insert("P_cycling_excited".into(), projector((Manifold::Excited(5), 5 * s))?);
    operators.insert("atom".into(), dq.clone());
    operators.insert("Dh".into(), dh);
    for (q, d) in dipoles {
        operators.insert(format!("D{q:+}").replace("+0", "0"), d);
    }
    operators.insert("r".into(), r);
    operators.insert("b".into(), b);
    operators.insert("E".into(), e);

    Ok(BuiltSystem {
        layout,
        liouvillian,
        operators,
        warnings: p.warnings(),
    })
}

/// Population held by the two cycling sublevels.
pub fn population_confinement(rho: &DensityOperator, system: &BuiltSystem) -> Result<f64> {
    let pg = system.operator("P_cycling_ground")?;
    let pe = system.operator("P_cycling_excited")?;
    Ok(expectation(rho, pg)?.re + expectation(rho, pe)?.re)
}
