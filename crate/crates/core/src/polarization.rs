//! Polarization along affine families `base + t * direction`.
//!
//! Curvature numerators along such families are polynomials in `t` of degree
//! at most 4. Bounded-ratio arguments become divisibility of the numerator by
//! a power of `1 - t^2`, which [`bound_forced_identities`] checks at `t = ±1`.

use num_complex::Complex;

use crate::error::{CurvatureError, Result};
use crate::scalar::{Field, Scalar};
use crate::space::{HermitianSpace, RealVector, Vector};
use crate::tensor::CurvatureTensor;

/// Polynomial in `t`; `coeffs[k]` multiplies `t^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TPolynomial<F> {
    coeffs: Vec<F>,
}

impl<F: Field> TPolynomial<F> {
    /// Trailing exact zeros are trimmed.
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `(1 - t^2)^k`.
    pub fn one_minus_t2_pow(k: usize) -> Self {
        let base = Self::new(vec![F::one(), F::zero(), -F::one()]);
        (0..k).fold(Self::new(vec![F::one()]), |acc, _| acc.mul(&base))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder (`r0 + r1 t`) of division by `1 - t^2`.
    pub fn div_one_minus_t2(&self) -> (Self, [F; 2]) {
        let mut rem = self.coeffs.clone();
        if rem.len() < 3 {
            rem.resize(2, F::zero());
            return (Self::zero(), [rem[0].clone(), rem[1].clone()]);
        }
        let mut quot = vec![F::zero(); rem.len() - 2];
        for k in (2..rem.len()).rev() {
            // t^k = -t^(k-2) (1 - t^2) + t^(k-2)
            let c = rem[k].clone();
            quot[k - 2] = -c.clone();
            rem[k - 2] = rem[k - 2].clone() + c;
            rem[k] = F::zero();
        }
        (Self::new(quot), [rem[0].clone(), rem[1].clone()])
    }

    /// Taylor coefficients around `t = t0`: `p(t0 + d) = sum b_k d^k`.
    pub fn shift(&self, t0: &F) -> Self {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                b[k] = b[k].clone() + t0.clone() * b[k + 1].clone();
            }
        }
        Self::new(b)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(Field::magnitude).fold(0.0, f64::max)
    }
}

impl<T: Scalar> TPolynomial<Complex<T>> {
    pub fn re(&self) -> TPolynomial<T> {
        TPolynomial::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im(&self) -> TPolynomial<T> {
        TPolynomial::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }
}

impl<T: Scalar> TPolynomial<T> {
    pub fn complexify(&self) -> TPolynomial<Complex<T>> {
        TPolynomial::new(self.coeffs.iter().map(|c| Complex::from_real(c.clone())).collect())
    }
}

/// The family `base + t * direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily<F> {
    pub base: Vector<F>,
    pub direction: Vector<F>,
}

impl<F: Field> VectorFamily<F> {
    pub fn new(base: Vector<F>, direction: Vector<F>) -> Self {
        assert_eq!(base.dim(), direction.dim(), "family vectors must share a space");
        Self { base, direction }
    }

    pub fn constant(v: Vector<F>) -> Self {
        let d = v.dim();
        Self::new(v, Vector::zeros(d))
    }

    pub fn at(&self, t: &F) -> Vector<F> {
        self.base.axpy(t, &self.direction)
    }

    /// Image under `J` (which is linear, so families map to families).
    pub fn j(&self, space: &HermitianSpace<F::Real>) -> Self {
        Self::new(space.j_of(&self.base), space.j_of(&self.direction))
    }
}

impl<T: Scalar> VectorFamily<Complex<T>> {
    /// `base + i t dir` for real `base`, `dir`.
    pub fn imaginary(base: &RealVector<T>, dir: &RealVector<T>) -> Self {
        let zero = Vector::zeros(dir.dim());
        Self::new(base.complexify(), Vector::from_parts(&zero, dir))
    }

    /// Whether the base is real and the direction purely imaginary.
    pub fn is_imaginary(&self) -> bool {
        self.base.im().is_zero() && self.direction.re().is_zero()
    }
}

impl<T: Scalar> VectorFamily<T> {
    pub fn complexify(&self) -> VectorFamily<Complex<T>> {
        VectorFamily::new(self.base.complexify(), self.direction.complexify())
    }
}

/// `R(f1(t), f2(t), f3(t), f4(t))` as a polynomial in `t`: coefficient `k`
/// sums the evaluations with the direction vector in exactly `k` slots.
pub fn expand<T: Scalar, F: Field<Real = T>>(
    r: &CurvatureTensor<T>,
    families: [&VectorFamily<F>; 4],
) -> Result<TPolynomial<F>> {
    for f in families {
        for v in [&f.base, &f.direction] {
            if v.dim() != r.dim() {
                return Err(CurvatureError::DimensionMismatch {
                    expected: r.dim(),
                    got: v.dim(),
                });
            }
        }
    }
    let mut coeffs = vec![F::zero(); 5];
    for mask in 0u32..16 {
        let pick = |slot: usize| {
            let f = families[slot];
            if mask & (1 << slot) != 0 {
                &f.direction
            } else {
                &f.base
            }
        };
        if (0..4).any(|s| pick(s).is_zero()) {
            continue;
        }
        let k = mask.count_ones() as usize;
        coeffs[k] = coeffs[k].clone() + r.r(pick(0), pick(1), pick(2), pick(3));
    }
    Ok(TPolynomial::new(coeffs))
}

/// Checks `g(v_i, v_j) = sign_i delta_ij` and, with `antiholomorphic`,
/// `g(v_i, J v_j) = 0`.
pub fn check_orthonormal<T: Scalar>(
    space: &HermitianSpace<T>,
    vectors: &[&RealVector<T>],
    signs: &[i64],
    antiholomorphic: bool,
) -> Result<()> {
    let fail = |what: &str| Err(CurvatureError::Precondition(what.to_string()));
    for v in vectors {
        if v.dim() != space.dim() {
            return Err(CurvatureError::DimensionMismatch {
                expected: space.dim(),
                got: v.dim(),
            });
        }
    }
    for (i, u) in vectors.iter().enumerate() {
        let norm = space.g(u, u);
        if !(norm - T::from_i64(signs[i])).is_negligible(1.0) {
            return fail("vectors must be unit with the required signs");
        }
        for (j, v) in vectors.iter().enumerate() {
            if i < j && !space.g(u, v).is_negligible(1.0) {
                return fail("vectors must be mutually orthogonal");
            }
            if antiholomorphic && !space.g(u, &space.j_of(v)).is_negligible(1.0) {
                return fail("vectors must span an antiholomorphic subspace");
            }
        }
    }
    Ok(())
}

/// Numerator of `H(x + t a)`: `R(X, JX, JX, X)` with `X = x + t a`.
pub fn theorem1_coefficients<T: Scalar>(r: &CurvatureTensor<T>, x: &RealVector<T>, a: &RealVector<T>) -> Result<TPolynomial<T>> {
    let sp = r.space();
    check_orthonormal(sp, &[x, a], &[1, -1], true)?;
    let f = VectorFamily::new(x.clone(), a.clone());
    let jf = f.j(sp);
    expand(r, [&f, &jf, &jf, &f])
}

/// Direct evaluations of the bracketed terms of the `H(x + t a)` expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Terms<T> {
    pub h_x: T,
    /// `R(x,Jx,Jx,a) + R(x,Jx,Ja,x)`, the hypothesis of the lemma.
    pub odd1: T,
    /// `2R(x,Jx,Ja,a) + 2R(x,Ja,Jx,a) - K(x,Ja) - K(Jx,a)`.
    pub even2: T,
    /// `R(a,Ja,Ja,x) + R(a,Ja,Jx,a)`.
    pub odd3: T,
    pub h_a: T,
}

impl<T: Scalar> Theorem1Terms<T> {
    pub fn compute(r: &CurvatureTensor<T>, x: &RealVector<T>, a: &RealVector<T>) -> Result<Self> {
        let sp = r.space();
        check_orthonormal(sp, &[x, a], &[1, -1], true)?;
        let (jx, ja) = (sp.j_of(x), sp.j_of(a));
        let two = T::from_i64(2);
        Ok(Self {
            h_x: r.holomorphic_sectional(x)?,
            odd1: r.r(x, &jx, &jx, a) + r.r(x, &jx, &ja, x),
            even2: two.clone() * r.r(x, &jx, &ja, a) + two * r.r(x, &ja, &jx, a)
                - r.sectional(x, &ja)?
                - r.sectional(&jx, a)?,
            odd3: r.r(a, &ja, &ja, x) + r.r(a, &ja, &jx, a),
            h_a: r.holomorphic_sectional(a)?,
        })
    }

    /// The polynomial these terms predict.
    pub fn polynomial(&self) -> TPolynomial<T> {
        let two = T::from_i64(2);
        TPolynomial::new(vec![
            self.h_x.clone(),
            two.clone() * self.odd1.clone(),
            self.even2.clone(),
            two * self.odd3.clone(),
            self.h_a.clone(),
        ])
    }
}

/// Numerator of the complexified `H(x + i t y)` as a complex polynomial.
pub fn theorem5_expansion<T: Scalar>(
    r: &CurvatureTensor<T>,
    x: &RealVector<T>,
    y: &RealVector<T>,
) -> Result<TPolynomial<Complex<T>>> {
    let sp = r.space();
    if !sp.is_definite() {
        return Err(CurvatureError::Hypothesis("the space must be definite".into()));
    }
    let sign = if sp.s() == 0 { 1 } else { -1 };
    check_orthonormal(sp, &[x, y], &[sign, sign], true)?;
    let f = VectorFamily::imaginary(x, y);
    let jf = f.j(sp);
    expand(r, [&f, &jf, &jf, &f])
}

/// Real part of [`theorem5_expansion`]; odd coefficients vanish.
pub fn theorem5_coefficients<T: Scalar>(r: &CurvatureTensor<T>, x: &RealVector<T>, y: &RealVector<T>) -> Result<TPolynomial<T>> {
    Ok(theorem5_expansion(r, x, y)?.re())
}

/// Direct evaluations for the `x + i t y` expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem5Terms<T> {
    pub h_x: T,
    /// `K(x,Jy) + 2R(x,Jx,Jy,y) + 2R(x,Jy,Jx,y) + K(Jx,y)`.
    pub bracket: T,
    pub h_y: T,
    /// `R(x,Jx,Jx,y) + R(x,Jx,Jy,x)`.
    pub odd1: T,
    /// `R(y,Jy,Jy,x) + R(y,Jy,Jx,y)`.
    pub odd3: T,
}

impl<T: Scalar> Theorem5Terms<T> {
    pub fn compute(r: &CurvatureTensor<T>, x: &RealVector<T>, y: &RealVector<T>) -> Result<Self> {
        let sp = r.space();
        let (jx, jy) = (sp.j_of(x), sp.j_of(y));
        let two = T::from_i64(2);
        Ok(Self {
            h_x: r.holomorphic_sectional(x)?,
            bracket: r.sectional(x, &jy)? + two.clone() * r.r(x, &jx, &jy, y) + two * r.r(x, &jy, &jx, y)
                + r.sectional(&jx, y)?,
            h_y: r.holomorphic_sectional(y)?,
            odd1: r.r(x, &jx, &jx, y) + r.r(x, &jx, &jy, x),
            odd3: r.r(y, &jy, &jy, x) + r.r(y, &jy, &jx, y),
        })
    }

    /// Predicted real part `H(x) - t^2 bracket + t^4 H(y)`.
    pub fn real_polynomial(&self) -> TPolynomial<T> {
        TPolynomial::new(vec![
            self.h_x.clone(),
            T::zero(),
            -self.bracket.clone(),
            T::zero(),
            self.h_y.clone(),
        ])
    }

    /// Predicted imaginary part `2t odd1 - 2t^3 odd3`.
    pub fn imaginary_polynomial(&self) -> TPolynomial<T> {
        let two = T::from_i64(2);
        TPolynomial::new(vec![
            T::zero(),
            two.clone() * self.odd1.clone(),
            T::zero(),
            -two * self.odd3.clone(),
        ])
    }
}

/// `R^C(x, y + i t z, y + i t z, x)`; real part `K(x,y) - t^2 K(x,z)`,
/// imaginary part `2t R(x,y,z,x)`. The denominator is `1 - t^2`.
pub fn theorem7_expansion<T: Scalar>(
    r: &CurvatureTensor<T>,
    x: &RealVector<T>,
    y: &RealVector<T>,
    z: &RealVector<T>,
) -> Result<TPolynomial<Complex<T>>> {
    let sp = r.space();
    if !sp.is_definite() {
        return Err(CurvatureError::Hypothesis("the space must be definite".into()));
    }
    let sign = if sp.s() == 0 { 1 } else { -1 };
    check_orthonormal(sp, &[x, y, z], &[sign; 3], true)?;
    let fx = VectorFamily::constant(x.complexify());
    let fw = VectorFamily::imaginary(y, z);
    expand(r, [&fx, &fw, &fw, &fx])
}

/// `E(x,a) = R(x,Jx,Jx,a) + R(x,Jx,Ja,x)` along `(x + t a, t x + a)`.
/// Coefficients: `[E(x,a), (2), 3(E(x,a) + (4)), (3), (4)]` where `(2)`,
/// `(3)`, `(4)` are the left-hand sides in [`Lemma1Terms`].
pub fn lemma1_polarization<T: Scalar>(r: &CurvatureTensor<T>, x: &RealVector<T>, a: &RealVector<T>) -> Result<TPolynomial<T>> {
    let sp = r.space();
    check_orthonormal(sp, &[x, a], &[1, -1], true)?;
    let u = VectorFamily::new(x.clone(), a.clone());
    let v = VectorFamily::new(a.clone(), x.clone());
    let (ju, jv) = (u.j(sp), v.j(sp));
    Ok(expand(r, [&u, &ju, &ju, &v])?.add(&expand(r, [&u, &ju, &jv, &u])?))
}

/// Left-hand sides of the identities forced by the `(x + ta, tx + a)`
/// polarization of `E(x,a) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Terms<T> {
    pub e1: T,
    /// `2H(x) + 2R(x,Jx,Ja,a) + 2R(x,Ja,Jx,a) - K(x,Ja) - K(Jx,a)`.
    pub eq2: T,
    /// `2H(a) + 2R(x,Jx,Ja,a) + 2R(x,Ja,Jx,a) - K(x,Ja) - K(Jx,a)`.
    pub eq3: T,
    /// `R(a,Ja,Ja,x) + R(a,Ja,Jx,a)`.
    pub eq4: T,
}

impl<T: Scalar> Lemma1Terms<T> {
    pub fn compute(r: &CurvatureTensor<T>, x: &RealVector<T>, a: &RealVector<T>) -> Result<Self> {
        let t1 = Theorem1Terms::compute(r, x, a)?;
        let two = T::from_i64(2);
        Ok(Self {
            e1: t1.odd1.clone(),
            eq2: two.clone() * t1.h_x + t1.even2.clone(),
            eq3: two * t1.h_a + t1.even2,
            eq4: t1.odd3,
        })
    }

    pub fn polynomial(&self) -> TPolynomial<T> {
        TPolynomial::new(vec![
            self.e1.clone(),
            self.eq2.clone(),
            T::from_i64(3) * (self.e1.clone() + self.eq4.clone()),
            self.eq3.clone(),
            self.eq4.clone(),
        ])
    }
}

/// `E(x,y) = K(x,Jy) + 2R(x,Jx,Jy,y) + 2R(x,Jy,Jx,y) + K(Jx,y) - 2H(x)`
/// (raw numerators, unit vectors) along `(x + t y, t x - y)`.
pub fn lemma2_rotation_coefficients<T: Scalar>(
    r: &CurvatureTensor<T>,
    x: &RealVector<T>,
    y: &RealVector<T>,
) -> Result<TPolynomial<T>> {
    let sp = r.space();
    if !sp.is_definite() {
        return Err(CurvatureError::Hypothesis("the space must be definite".into()));
    }
    let sign = if sp.s() == 0 { 1 } else { -1 };
    check_orthonormal(sp, &[x, y], &[sign, sign], true)?;
    let u = VectorFamily::new(x.clone(), y.clone());
    let v = VectorFamily::new(y.neg(), x.clone());
    let (ju, jv) = (u.j(sp), v.j(sp));
    let two = T::from_i64(2);
    let p = expand(r, [&u, &jv, &jv, &u])?
        .add(&expand(r, [&u, &ju, &jv, &v])?.scale(&two))
        .add(&expand(r, [&u, &jv, &ju, &v])?.scale(&two))
        .add(&expand(r, [&ju, &v, &v, &ju])?)
        .sub(&expand(r, [&u, &ju, &ju, &u])?.scale(&two));
    Ok(p)
}

/// `A = R(x,Jx,Jx,y) + R(x,Jx,Jy,x)` and `B = R(x,Jy,Jy,y) + R(y,Jy,Jx,y)`;
/// the rotation polynomial has `t^1 = -2(5A - 3B)` and `t^3 = 2(3A - 5B)`.
pub fn lemma2_terms<T: Scalar>(r: &CurvatureTensor<T>, x: &RealVector<T>, y: &RealVector<T>) -> (T, T) {
    let sp = r.space();
    let (jx, jy) = (sp.j_of(x), sp.j_of(y));
    (
        r.r(x, &jx, &jx, y) + r.r(x, &jx, &jy, x),
        r.r(x, &jy, &jy, y) + r.r(y, &jy, &jx, y),
    )
}

/// Scalars that must vanish if `|p(t)| <= c (1 - t^2)^multiplicity` near
/// `t = ±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcedIdentities<F> {
    /// `[p(1), p(-1)]`.
    pub at_ends: [F; 2],
    /// `[q(1), q(-1)]` for `q = p / (1 - t^2)`; present for multiplicity 2
    /// when `at_ends` vanishes.
    pub deflated: Option<[F; 2]>,
}

impl<F: Field> ForcedIdentities<F> {
    pub fn values(&self) -> Vec<F> {
        let mut out = self.at_ends.to_vec();
        if let Some(d) = &self.deflated {
            out.extend(d.iter().cloned());
        }
        out
    }

    /// Whether every forced identity holds (exactly, or relative to `scale`).
    pub fn hold(&self, multiplicity: usize, scale: f64) -> bool {
        let ends = self.at_ends.iter().all(|v| v.is_negligible(scale));
        match (&self.deflated, multiplicity) {
            (_, 1) => ends,
            (Some(d), _) => ends && d.iter().all(|v| v.is_negligible(scale)),
            (None, _) => false,
        }
    }
}

pub fn bound_forced_identities<F: Field>(p: &TPolynomial<F>, multiplicity: usize) -> ForcedIdentities<F> {
    let one = F::one();
    let at_ends = [p.eval(&one), p.eval(&-one.clone())];
    let scale = p.max_magnitude();
    let deflated = (multiplicity >= 2 && at_ends.iter().all(|v| v.is_negligible(scale))).then(|| {
        let (q, _) = p.div_one_minus_t2();
        [q.eval(&one), q.eval(&-one)]
    });
    ForcedIdentities { at_ends, deflated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::models::{model_complex_space_form, model_constant_sectional, random_tensor};
    use crate::random::{random_coords, stream_rng};
    use crate::scalar::Rational;
    use crate::space::Sign;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn poly(c: &[i64]) -> TPolynomial<Q> {
        TPolynomial::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn polynomial_basics() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.eval(&q(3)), q(7));
        assert_eq!(TPolynomial::<Q>::one_minus_t2_pow(2), poly(&[1, 0, -2, 0, 1]));
        let (quot, rem) = poly(&[1, 0, -2, 0, 1]).div_one_minus_t2();
        assert_eq!(quot, poly(&[1, 0, -1]));
        assert_eq!(rem, [q(0), q(0)]);
        let (quot, rem) = poly(&[3, 5, 0, 7]).div_one_minus_t2();
        assert_eq!(quot.mul(&poly(&[1, 0, -1])).add(&poly(&[0, 0])).add(&TPolynomial::new(rem.to_vec())), poly(&[3, 5, 0, 7]));
        let p = poly(&[2, -1, 4, 3]);
        let shifted = p.shift(&q(-1));
        for d in [-2, 0, 1, 5] {
            assert_eq!(shifted.eval(&q(d)), p.eval(&q(d - 1)));
        }
    }

    #[test]
    fn forced_identities_examples() {
        let f = bound_forced_identities(&poly(&[3, 0, -6, 0, 3]), 2);
        assert_eq!(f.values(), vec![q(0); 4]);
        assert!(f.hold(2, 1.0));
        let f = bound_forced_identities(&poly(&[0, 1]), 2);
        assert_eq!(f.at_ends, [q(1), q(-1)]);
        assert!(f.deflated.is_none());
        assert!(!f.hold(2, 1.0));
        // Vanishes at ±1 but only to first order.
        let f = bound_forced_identities(&poly(&[1, 0, -1]), 2);
        assert_eq!(f.deflated, Some([q(1), q(1)]));
        assert!(bound_forced_identities(&poly(&[1, 0, -1]), 1).hold(1, 1.0));
    }

    #[test]
    fn expand_pi1_example() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        let model = model_constant_sectional(&sp, &q(1));
        let t = sp.orthonormal_tuple(5, &[Sign::Plus, Sign::Plus, Sign::Minus], true).unwrap();
        let (x, y, a) = (&t[0], &t[1], &t[2]);
        let f = VectorFamily::new(x.clone(), a.clone());
        let fy = VectorFamily::constant(y.clone());
        assert_eq!(expand(&model, [&f, &fy, &fy, &f]).unwrap(), poly(&[1, 0, -1]));
    }

    #[test]
    fn expand_matches_substitution() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        let r = random_tensor(&sp, 1, false);
        let mut rng = stream_rng(1, 2);
        let fams: Vec<VectorFamily<Q>> = (0..4)
            .map(|_| VectorFamily::new(Vector::new(random_coords(&mut rng, 4)), Vector::new(random_coords(&mut rng, 4))))
            .collect();
        let p = expand(&r, [&fams[0], &fams[1], &fams[2], &fams[3]]).unwrap();
        for t in [0, 1, -1, 2, -2, 3, -3] {
            let t = q(t);
            let direct = r.r(&fams[0].at(&t), &fams[1].at(&t), &fams[2].at(&t), &fams[3].at(&t));
            assert_eq!(p.eval(&t), direct);
        }
        let zero = VectorFamily::constant(fams[0].base.clone());
        let c = expand(&r, [&zero, &VectorFamily::constant(fams[1].base.clone()), &zero, &zero]).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn theorem1_terms_match_expansion() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        for seed in 0..4 {
            let r = random_tensor(&sp, seed, seed % 2 == 0);
            let t = sp.orthonormal_tuple(seed, &[Sign::Plus, Sign::Minus], true).unwrap();
            let p = theorem1_coefficients(&r, &t[0], &t[1]).unwrap();
            assert_eq!(p, Theorem1Terms::compute(&r, &t[0], &t[1]).unwrap().polynomial());
            // Negating the whole family is invisible to a quartic form;
            // negating the direction reverses t.
            assert_eq!(theorem1_coefficients(&r, &t[0].neg(), &t[1].neg()).unwrap(), p);
            let flipped = theorem1_coefficients(&r, &t[0], &t[1].neg()).unwrap();
            for k in 0..5 {
                let sign = if k % 2 == 0 { q(1) } else { q(-1) };
                assert_eq!(flipped.coeff(k), p.coeff(k) * sign);
            }
        }
        let c = q(3);
        let model = model_constant_sectional(&sp, &c);
        let t = sp.orthonormal_tuple(9, &[Sign::Plus, Sign::Minus], true).unwrap();
        assert_eq!(theorem1_coefficients(&model, &t[0], &t[1]).unwrap(), poly(&[3, 0, -6, 0, 3]));
        assert!(theorem1_coefficients(&model, &t[1], &t[0]).is_err());
    }

    #[test]
    fn lemma1_polarization_coefficients() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        for seed in 0..3 {
            let r = random_tensor(&sp, seed, false);
            let t = sp.orthonormal_tuple(seed, &[Sign::Plus, Sign::Minus], true).unwrap();
            let p = lemma1_polarization(&r, &t[0], &t[1]).unwrap();
            assert_eq!(p, Lemma1Terms::compute(&r, &t[0], &t[1]).unwrap().polynomial());
        }
    }

    #[test]
    fn theorem5_real_and_imaginary_parts() {
        let sp = HermitianSpace::<Q>::new(2, 0).unwrap();
        for seed in 0..3 {
            let r = random_tensor(&sp, seed, true);
            let t = sp.orthonormal_tuple(seed, &[Sign::Plus, Sign::Plus], true).unwrap();
            let full = theorem5_expansion(&r, &t[0], &t[1]).unwrap();
            let terms = Theorem5Terms::compute(&r, &t[0], &t[1]).unwrap();
            assert_eq!(full.re(), terms.real_polynomial());
            assert_eq!(full.im(), terms.imaginary_polynomial());
        }
        let c = q(4);
        let model = model_complex_space_form(&sp, &c);
        let t = sp.orthonormal_tuple(1, &[Sign::Plus, Sign::Plus], true).unwrap();
        assert_eq!(theorem5_coefficients(&model, &t[0], &t[1]).unwrap(), poly(&[4, 0, -8, 0, 4]));
        let indefinite = HermitianSpace::<Q>::new(2, 1).unwrap();
        let r = random_tensor(&indefinite, 0, true);
        let t = indefinite.orthonormal_tuple(0, &[Sign::Plus, Sign::Minus], true).unwrap();
        assert!(matches!(theorem5_expansion(&r, &t[0], &t[1]), Err(CurvatureError::Hypothesis(_))));
    }

    #[test]
    fn theorem7_parts() {
        let sp = HermitianSpace::<Q>::new(3, 0).unwrap();
        let r = random_tensor(&sp, 2, true);
        let t = sp.orthonormal_tuple(2, &[Sign::Plus; 3], true).unwrap();
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let p = theorem7_expansion(&r, x, y, z).unwrap();
        assert_eq!(p.re(), TPolynomial::new(vec![r.r(x, y, y, x), q(0), -r.r(x, z, z, x)]));
        assert_eq!(p.im(), TPolynomial::new(vec![q(0), q(2) * r.r(x, y, z, x)]));
    }

    #[test]
    fn lemma2_rotation_structure() {
        let sp = HermitianSpace::<Q>::new(2, 0).unwrap();
        for seed in 0..3 {
            let r = random_tensor(&sp, seed, seed == 0);
            let t = sp.orthonormal_tuple(seed, &[Sign::Plus, Sign::Plus], true).unwrap();
            let p = lemma2_rotation_coefficients(&r, &t[0], &t[1]).unwrap();
            let (a, b) = lemma2_terms(&r, &t[0], &t[1]);
            assert_eq!(p.coeff(1), q(-2) * (q(5) * a.clone() - q(3) * b.clone()));
            assert_eq!(p.coeff(3), q(2) * (q(3) * a - q(5) * b));
        }
    }
}
