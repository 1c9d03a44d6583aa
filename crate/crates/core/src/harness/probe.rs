//! Searching for unbounded curvature near isotropic directions.
//!
//! Along `x + t a` with `g(x,x) = 1`, `g(a,a) = -1`, the curvature numerators
//! are polynomials `p(t)` and the denominators are `±(1 - t^2)^k`. Unless
//! `p` has a zero of order `k` at `t = ±1`, the curvature blows up as
//! `t -> ±1`. The probe walks the ladders `t = ±(1 - 2^-j)` (inner side)
//! and `t = ±(1 + 2^-j)` (outer side) for `j = 1..=ladder`.

use std::fmt;
use std::str::FromStr;

use crate::constancy::sign_patterns;
use crate::error::{CurvatureError, Result};
use crate::par::Exec;
use crate::polarization::{expand, TPolynomial, VectorFamily};
use crate::random::mix_seed;
use crate::scalar::Scalar;
use crate::space::{HermitianSpace, PlaneSignature, RealVector, Sign};
use crate::tensor::CurvatureTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProbeFamily {
    /// `H(x + t a)`.
    Holomorphic,
    /// `K(span{x + t a, y})`.
    Antiholomorphic,
    /// `H(x + t a, y)`, the totally real biholomorphic curvature.
    Biholomorphic,
}

impl ProbeFamily {
    pub const ALL: [ProbeFamily; 3] = [Self::Holomorphic, Self::Antiholomorphic, Self::Biholomorphic];

    pub fn label(self) -> &'static str {
        match self {
            Self::Holomorphic => "holomorphic",
            Self::Antiholomorphic => "antiholomorphic",
            Self::Biholomorphic => "biholomorphic",
        }
    }

    fn multiplicity(self) -> usize {
        match self {
            Self::Holomorphic => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ProbeFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| format!("unknown probe family `{s}`"))
    }
}

/// Which values count as crossing the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Above,
    Below,
    Either,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub threshold: f64,
    pub pairs: usize,
    pub ladder: u32,
    pub seed: u64,
    pub families: Vec<ProbeFamily>,
    pub direction: Direction,
    /// Only planes of this signature are probed, if set.
    pub restriction: Option<PlaneSignature>,
    pub exec: Exec,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            threshold: 1e6,
            pairs: 64,
            ladder: 40,
            seed: 0,
            families: vec![ProbeFamily::Holomorphic, ProbeFamily::Antiholomorphic],
            direction: Direction::Either,
            restriction: None,
            exec: Exec::default(),
        }
    }
}

/// A plane on which the probed curvature exceeds the threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundWitness<T> {
    pub family: ProbeFamily,
    /// `x + t a` and, except for the holomorphic family, `y`.
    pub plane: Vec<RealVector<T>>,
    pub t: T,
    pub value: T,
    pub threshold: f64,
}

impl<T: Scalar> BoundWitness<T> {
    /// Recomputes the curvature of the stored plane by direct evaluation.
    pub fn recompute(&self, r: &CurvatureTensor<T>) -> Result<T> {
        match self.family {
            ProbeFamily::Holomorphic => r.holomorphic_sectional(&self.plane[0]),
            ProbeFamily::Antiholomorphic => r.sectional(&self.plane[0], &self.plane[1]),
            ProbeFamily::Biholomorphic => r.biholomorphic(&self.plane[0], &self.plane[1]),
        }
    }

    /// Exact agreement for rationals, relative `1e-6` for floats.
    pub fn reverifies(&self, r: &CurvatureTensor<T>) -> bool {
        match self.recompute(r) {
            Ok(v) if T::EXACT => v == self.value,
            Ok(v) => {
                let (a, b) = (v.to_f64(), self.value.to_f64());
                (a - b).abs() <= 1e-6 * a.abs().max(b.abs())
            }
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeOutcome<T> {
    Unbounded(BoundWitness<T>),
    BoundedSoFar {
        /// Largest `|value|` seen per family.
        maxima: Vec<(ProbeFamily, f64)>,
        evaluations: usize,
    },
}

impl<T> ProbeOutcome<T> {
    pub fn witness(&self) -> Option<&BoundWitness<T>> {
        match self {
            ProbeOutcome::Unbounded(w) => Some(w),
            ProbeOutcome::BoundedSoFar { .. } => None,
        }
    }
}

/// A numerator polynomial with the constant sign of its denominator.
struct Curve<T> {
    family: ProbeFamily,
    x: RealVector<T>,
    a: RealVector<T>,
    y: Option<RealVector<T>>,
    numerator: TPolynomial<T>,
    /// Sign of `g(y, y)` (1 for the holomorphic family).
    sign: i64,
}

fn curves<T: Scalar>(
    r: &CurvatureTensor<T>,
    family: ProbeFamily,
    seed: u64,
) -> Result<Vec<Curve<T>>> {
    let sp = r.space();
    let fam_seed = mix_seed(seed, family as u64, 0);
    match family {
        ProbeFamily::Holomorphic => {
            let t = sp.orthonormal_tuple(fam_seed, &[Sign::Plus, Sign::Minus], true)?;
            let f = VectorFamily::new(t[0].clone(), t[1].clone());
            let jf = f.j(sp);
            Ok(vec![Curve {
                family,
                x: t[0].clone(),
                a: t[1].clone(),
                y: None,
                numerator: expand(r, [&f, &jf, &jf, &f])?,
                sign: 1,
            }])
        }
        _ => {
            let mut out = Vec::new();
            for (k, ysign) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
                let pattern = [Sign::Plus, Sign::Minus, ysign];
                if !sp.realizable(&pattern, true) {
                    continue;
                }
                let t = sp.orthonormal_tuple(mix_seed(fam_seed, k as u64, 1), &pattern, true)?;
                let f = VectorFamily::new(t[0].clone(), t[1].clone());
                let y = VectorFamily::constant(t[2].clone());
                let numerator = if family == ProbeFamily::Antiholomorphic {
                    expand(r, [&f, &y, &y, &f])?
                } else {
                    let (jf, jy) = (f.j(sp), y.j(sp));
                    expand(r, [&f, &jf, &jy, &y])?
                };
                out.push(Curve {
                    family,
                    x: t[0].clone(),
                    a: t[1].clone(),
                    y: Some(t[2].clone()),
                    numerator,
                    sign: ysign.value(),
                });
            }
            Ok(out)
        }
    }
}

fn plane_signature(first: Sign, second: Sign) -> PlaneSignature {
    match (first, second) {
        (Sign::Plus, Sign::Plus) => PlaneSignature::PlusPlus,
        (Sign::Minus, Sign::Minus) => PlaneSignature::MinusMinus,
        _ => PlaneSignature::PlusMinus,
    }
}

/// Value of `p(t) / (sign (1 - t^2)^k)` at `t = t0 + d`, `t0 = ±1`, with the
/// factor `d^k` cancelled analytically. Taylor coefficients of `p` at `t0`
/// below order `k` that are negligible against the rest are treated as 0.
fn stable_value<T: Scalar>(shifted: &TPolynomial<T>, t0: i64, d: &T, mult: usize, sign: i64) -> T {
    let scale = shifted.max_magnitude();
    let two_t0 = T::from_i64(2 * t0);
    let mut value = T::zero();
    let mut low = T::zero();
    for (k, b) in shifted.coeffs().iter().enumerate() {
        if k < mult {
            if !b.is_negligible(scale) {
                let mut term = b.clone();
                for _ in k..mult {
                    term = term / d.clone();
                }
                low = low + term;
            }
        } else {
            let mut term = b.clone();
            for _ in mult..k {
                term = term * d.clone();
            }
            value = value + term;
        }
    }
    // 1 - t^2 = -d (2 t0 + d)
    let mut den = T::from_i64(sign);
    for _ in 0..mult {
        den = den * -(two_t0.clone() + d.clone());
    }
    (value + low) / den
}

/// Searches the seeded families for a curvature value beyond `threshold`.
/// Requires `0 < s < m`.
pub fn probe_unboundedness<T: Scalar>(r: &CurvatureTensor<T>, config: &ProbeConfig) -> Result<ProbeOutcome<T>> {
    let sp: &HermitianSpace<T> = r.space();
    if !sp.is_indefinite() {
        return Err(CurvatureError::Hypothesis(
            "probing needs an indefinite metric (0 < s < m)".into(),
        ));
    }
    let families: Vec<ProbeFamily> = config
        .families
        .iter()
        .copied()
        .filter(|f| *f == ProbeFamily::Holomorphic || sign_patterns(3).iter().any(|p| p[..2] == [Sign::Plus, Sign::Minus] && sp.realizable(p, true)))
        .collect();
    if families.is_empty() {
        return Err(CurvatureError::Hypothesis(
            "no requested probe family is realizable in this signature".into(),
        ));
    }
    let threshold = config.threshold;
    let ladder = config.ladder;
    let per_pair = config.exec.map(config.pairs, |i| -> Result<(Option<BoundWitness<T>>, Vec<f64>, usize)> {
        let mut maxima = vec![0.0f64; families.len()];
        let mut evaluations = 0;
        let mut all = Vec::new();
        for (fi, &family) in families.iter().enumerate() {
            for curve in curves(r, family, mix_seed(config.seed, i as u64, 2))? {
                all.push((fi, curve));
            }
        }
        let shifted: Vec<[TPolynomial<T>; 2]> = all
            .iter()
            .map(|(_, c)| [c.numerator.shift(&T::from_i64(1)), c.numerator.shift(&T::from_i64(-1))])
            .collect();
        for j in 1..=ladder {
            let eps = T::from_f64(2f64.powi(-(j as i32))).expect("finite");
            for (ci, (fi, curve)) in all.iter().enumerate() {
                let mult = curve.family.multiplicity();
                for (side, t0) in [(0usize, 1i64), (0, -1), (1, 1), (1, -1)] {
                    // Inner side moves towards 0, outer side away from it.
                    let x_sign = if side == 0 { Sign::Plus } else { Sign::Minus };
                    let second = match curve.y {
                        None => x_sign,
                        Some(_) if curve.sign > 0 => Sign::Plus,
                        Some(_) => Sign::Minus,
                    };
                    if config.restriction.is_some_and(|want| plane_signature(x_sign, second) != want) {
                        continue;
                    }
                    let d = if (side == 0) == (t0 > 0) { -eps.clone() } else { eps.clone() };
                    let poly = &shifted[ci][usize::from(t0 < 0)];
                    let value = stable_value(poly, t0, &d, mult, curve.sign);
                    evaluations += 1;
                    let mag = value.to_f64().abs();
                    maxima[*fi] = maxima[*fi].max(mag);
                    let crossed = match config.direction {
                        Direction::Above => value.to_f64() > threshold,
                        Direction::Below => value.to_f64() < -threshold,
                        Direction::Either => mag > threshold,
                    };
                    if crossed {
                        let t = T::from_i64(t0) + d;
                        let xt = curve.x.axpy(&t, &curve.a);
                        let mut plane = vec![xt];
                        plane.extend(curve.y.iter().cloned());
                        return Ok((
                            Some(BoundWitness {
                                family: curve.family,
                                plane,
                                t,
                                value,
                                threshold,
                            }),
                            maxima,
                            evaluations,
                        ));
                    }
                }
            }
        }
        Ok((None, maxima, evaluations))
    });
    let mut maxima = vec![0.0f64; families.len()];
    let mut evaluations = 0;
    for item in per_pair {
        let (witness, m, e) = item?;
        if let Some(w) = witness {
            return Ok(ProbeOutcome::Unbounded(w));
        }
        for (acc, v) in maxima.iter_mut().zip(m) {
            *acc = acc.max(v);
        }
        evaluations += e;
    }
    Ok(ProbeOutcome::BoundedSoFar {
        maxima: families.into_iter().zip(maxima).collect(),
        evaluations,
    })
}
