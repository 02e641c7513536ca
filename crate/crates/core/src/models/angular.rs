//! Wigner 3-j and 6-j symbols and the cesium D2 hyperfine dipole
//! coefficients built from them.
//!
//! Angular momenta are passed doubled (`2j`) so half-integers stay exact.

use crate::error::{Error, Result};

fn fact(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

// Δ(abc) with undoubled arguments recovered from doubled ones
fn delta(a: i64, b: i64, c: i64) -> f64 {
    fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2) / fact((a + b + c) / 2 + 1)
}

/// `(j1 j2 j3; m1 m2 m3)` with doubled arguments.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if m.abs() > j || (j + m) % 2 != 0 {
            return 0.0;
        }
    }
    let pre = sign((j1 - j2 - m3) / 2)
        * (delta(j1, j2, j3)
            * fact((j1 + m1) / 2)
            * fact((j1 - m1) / 2)
            * fact((j2 + m2) / 2)
            * fact((j2 - m2) / 2)
            * fact((j3 + m3) / 2)
            * fact((j3 - m3) / 2))
            .sqrt();
    let lo = 0.max((j2 - j3 - m1) / 2).max((j1 - j3 + m2) / 2);
    let hi = ((j1 + j2 - j3) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    let mut sum = 0.0;
    for k in lo..=hi {
        sum += sign(k)
            / (fact(k)
                * fact((j3 - j2 + m1) / 2 + k)
                * fact((j3 - j1 - m2) / 2 + k)
                * fact((j1 + j2 - j3) / 2 - k)
                * fact((j1 - m1) / 2 - k)
                * fact((j2 + m2) / 2 - k));
    }
    pre * sum
}

/// `{j1 j2 j3; j4 j5 j6}` with doubled arguments.
pub fn wigner_6j(j1: i64, j2: i64, j3: i64, j4: i64, j5: i64, j6: i64) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return 0.0;
    }
    let pre: f64 = triads.iter().map(|&(a, b, c)| delta(a, b, c)).product::<f64>().sqrt();
    let a = triads.map(|(x, y, z)| (x + y + z) / 2);
    let b = [
        (j1 + j2 + j4 + j5) / 2,
        (j2 + j3 + j5 + j6) / 2,
        (j3 + j1 + j6 + j4) / 2,
    ];
    let lo = *a.iter().max().unwrap();
    let hi = *b.iter().min().unwrap();
    let mut sum = 0.0;
    for t in lo..=hi {
        let den: f64 = a.iter().map(|&ai| fact(t - ai)).product::<f64>()
            * b.iter().map(|&bi| fact(bi - t)).product::<f64>();
        sum += sign(t) * fact(t + 1) / den;
    }
    pre * sum
}

// Cs D2: J = 1/2 → J' = 3/2, I = 7/2
const J2: i64 = 1;
const JP2: i64 = 3;
const I2: i64 = 7;

fn raw_coefficient(f: i64, fp: i64, m: i64, q: i64) -> f64 {
    let mp = m + q;
    if m.abs() > f || mp.abs() > fp {
        return 0.0;
    }
    let reduced = sign((J2 + I2) / 2 + fp + 1)
        * (((2 * f + 1) * (2 * fp + 1)) as f64).sqrt()
        * wigner_6j(J2, 2 * f, I2, 2 * fp, JP2, 2);
    sign(f - m) * wigner_3j(2 * f, 2, 2 * fp, -2 * m, -2 * q, 2 * mp) * reduced
}

/// Dipole coefficient for `|F, m⟩ ↔ |F', m + q⟩`, normalised so the
/// stretched transition `|4, ±4⟩ ↔ |5', ±5'⟩` has unit strength.
pub fn clebsch_gordan(f: u32, f_prime: u32, m: i32, q: i32) -> Result<f64> {
    let invalid = |reason: String| Error::InvalidParameter {
        name: "clebsch_gordan",
        reason,
    };
    if !(3..=4).contains(&f) {
        return Err(invalid(format!("ground F = {f} is not 3 or 4")));
    }
    if !(2..=5).contains(&f_prime) {
        return Err(invalid(format!("excited F' = {f_prime} is not in 2..=5")));
    }
    if !(-1..=1).contains(&q) {
        return Err(invalid(format!("polarisation q = {q}")));
    }
    if m.unsigned_abs() > f {
        return Err(invalid(format!("|m| = {} exceeds F = {f}", m.abs())));
    }
    if (m + q).unsigned_abs() > f_prime {
        return Err(invalid(format!("|m + q| = {} exceeds F' = {f_prime}", (m + q).abs())));
    }
    let norm = raw_coefficient(4, 5, -4, -1);
    Ok(raw_coefficient(f as i64, f_prime as i64, m as i64, q as i64) / norm)
}
