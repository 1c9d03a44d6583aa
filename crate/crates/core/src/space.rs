//! The tangent space at a point: an inner product of signature `(2s, 2(m-s))`
//! on `R^{2m}`, a compatible almost complex structure `J`, vectors and their
//! complexifications, and the taxonomy of 2-planes.

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{CurvatureError, Result};
use crate::linalg::{identity, mat_mul, solve, Matrix};
use crate::random::{random_int, stream_rng};
use crate::scalar::{format_rational, Field, Rational, Scalar};

/// Coordinates of a tangent vector (`F = T`) or of a complexified one
/// (`F = Complex<T>`).
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<F> {
    coords: Vec<F>,
}

pub type RealVector<T> = Vector<T>;
pub type ComplexVector<T> = Vector<Complex<T>>;

impl<F: Field> Vector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[k] = F::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, k: &F) -> Self {
        Self::new(self.coords.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn scale_real(&self, k: &F::Real) -> Self {
        Self::new(self.coords.iter().map(|c| c.scale(k)).collect())
    }

    /// `self + k * other`
    pub fn axpy(&self, k: &F, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + k.clone() * b.clone())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coords.iter().map(Field::magnitude).fold(0.0, f64::max)
    }

    fn zip(&self, other: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect())
    }
}

impl<T: Scalar> Vector<T> {
    pub fn complexify(&self) -> ComplexVector<T> {
        Vector::new(self.coords.iter().map(|c| Complex::from_real(c.clone())).collect())
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector::new(self.coords.iter().map(Scalar::to_f64).collect())
    }

    pub fn cast<U: Scalar>(&self) -> Vector<U> {
        Vector::new(
            self.coords
                .iter()
                .map(|c| U::from_f64(c.to_f64()).unwrap_or_else(U::zero))
                .collect(),
        )
    }
}

impl Vector<Rational> {
    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| Rational::from_i64(c)).collect())
    }
}

impl<T: Scalar> Vector<Complex<T>> {
    pub fn from_parts(re: &RealVector<T>, im: &RealVector<T>) -> Self {
        assert_eq!(re.dim(), im.dim(), "real and imaginary parts differ in dimension");
        Self::new(
            re.coords
                .iter()
                .zip(&im.coords)
                .map(|(a, b)| Complex::new(a.clone(), b.clone()))
                .collect(),
        )
    }

    pub fn re(&self) -> RealVector<T> {
        Vector::new(self.coords.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im(&self) -> RealVector<T> {
        Vector::new(self.coords.iter().map(|c| c.im.clone()).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coords.iter().map(Field::conj).collect())
    }
}

/// Sign of `g(u, u)` requested for a unit vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn parse_pattern(text: &str) -> Option<Vec<Sign>> {
        text.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '+' => Some(Sign::Plus),
                '-' => Some(Sign::Minus),
                _ => None,
            })
            .collect()
    }
}

pub fn pattern_label(pattern: &[Sign]) -> String {
    let inner: Vec<String> = pattern.iter().map(|s| s.symbol().to_string()).collect();
    format!("({})", inner.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Holomorphy {
    Holomorphic,
    Antiholomorphic,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneSignature {
    PlusPlus,
    PlusMinus,
    MinusMinus,
}

impl fmt::Display for PlaneSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaneSignature::PlusPlus => "(+,+)",
            PlaneSignature::PlusMinus => "(+,-)",
            PlaneSignature::MinusMinus => "(-,-)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneClass {
    pub holomorphy: Holomorphy,
    pub gram_rank: usize,
    /// Only for rank-2 planes whose Gram form (in the given basis) is real.
    pub signature: Option<PlaneSignature>,
}

impl PlaneClass {
    pub fn is_weakly_isotropic(&self) -> bool {
        self.gram_rank == 1
    }
}

/// A `2m`-dimensional real inner-product space of signature `(2s, 2(m-s))`
/// with a compatible almost complex structure.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpace<T> {
    m: usize,
    s: usize,
    signs: Vec<i8>,
    j: Matrix<T>,
    canonical: bool,
}

fn canonical_j<T: Scalar>(n: usize) -> Matrix<T> {
    let mut j = vec![vec![T::zero(); n]; n];
    for k in (0..n).step_by(2) {
        j[k + 1][k] = T::one();
        j[k][k + 1] = -T::one();
    }
    j
}

impl<T: Scalar> HermitianSpace<T> {
    /// Space with the canonical complex structure `J e_{2k} = e_{2k+1}`,
    /// `J e_{2k+1} = -e_{2k}` (0-based), which preserves the sign blocks.
    pub fn new(m: usize, s: i64) -> Result<Self> {
        if m == 0 {
            return Err(CurvatureError::ZeroDimension);
        }
        if s < 0 || s as usize > m {
            return Err(CurvatureError::InvalidSignature { m, s });
        }
        let s = s as usize;
        let n = 2 * m;
        let signs = (0..n).map(|i| if i < 2 * s { -1 } else { 1 }).collect();
        Ok(Self {
            m,
            s,
            signs,
            j: canonical_j(n),
            canonical: true,
        })
    }

    /// Space with a custom complex structure, accepted only if `J^2 = -id`
    /// and `g(JX, JY) = g(X, Y)` hold on the basis.
    pub fn with_complex_structure(m: usize, s: i64, j: Matrix<T>) -> Result<Self> {
        let mut space = Self::new(m, s)?;
        let n = 2 * m;
        if j.len() != n || j.iter().any(|row| row.len() != n) {
            return Err(CurvatureError::DimensionMismatch {
                expected: n,
                got: j.len(),
            });
        }
        space.canonical = j == space.j;
        space.j = j;
        space.check_invariants()?;
        Ok(space)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.dim();
        let negatives = self.signs.iter().filter(|&&s| s < 0).count();
        if negatives != 2 * self.s || self.signs[..2 * self.s].iter().any(|&s| s > 0) {
            return Err(CurvatureError::InvariantViolation {
                invariant: "metric-signs",
                detail: format!("expected {} leading negative signs", 2 * self.s),
            });
        }
        let jj = mat_mul(&self.j, &self.j);
        for (i, row) in jj.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let target = if i == k { -T::one() } else { T::zero() };
                if !(v.clone() - target).is_negligible(1.0) {
                    return Err(CurvatureError::InvariantViolation {
                        invariant: "J-squared",
                        detail: format!("(J^2)[{}][{}] != {}", i + 1, k + 1, if i == k { -1 } else { 0 }),
                    });
                }
            }
        }
        for a in 0..n {
            let ja = self.j_of(&Vector::<T>::basis(n, a));
            for b in a..n {
                let jb = self.j_of(&Vector::<T>::basis(n, b));
                let lhs = self.g(&ja, &jb);
                let rhs = if a == b { T::from_i64(self.signs[a] as i64) } else { T::zero() };
                if !(lhs - rhs).is_negligible(1.0) {
                    return Err(CurvatureError::InvariantViolation {
                        invariant: "J-compatibility",
                        detail: format!("g(Je{}, Je{}) != g(e{}, e{})", a + 1, b + 1, a + 1, b + 1),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn metric_signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn complex_structure(&self) -> &Matrix<T> {
        &self.j
    }

    pub fn has_canonical_j(&self) -> bool {
        self.canonical
    }

    pub fn is_definite(&self) -> bool {
        self.s == 0 || self.s == self.m
    }

    pub fn is_indefinite(&self) -> bool {
        !self.is_definite()
    }

    /// Number of positive / negative complex lines.
    pub fn line_counts(&self) -> (usize, usize) {
        (self.m - self.s, self.s)
    }

    fn check_dim<F>(&self, v: &Vector<F>) -> Result<()> {
        if v.coords.len() != self.dim() {
            return Err(CurvatureError::DimensionMismatch {
                expected: self.dim(),
                got: v.coords.len(),
            });
        }
        Ok(())
    }

    /// `g(u, v)` without dimension checks. Complex-bilinear on complexified
    /// vectors (no conjugation).
    pub fn g<F: Field<Real = T>>(&self, u: &Vector<F>, v: &Vector<F>) -> F {
        let mut acc = F::zero();
        for ((a, b), &s) in u.coords.iter().zip(&v.coords).zip(&self.signs) {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let p = a.clone() * b.clone();
            acc = if s < 0 { acc - p } else { acc + p };
        }
        acc
    }

    /// `g(u, v) = sum_i sign_i u_i v_i`.
    pub fn inner<F: Field<Real = T>>(&self, u: &Vector<F>, v: &Vector<F>) -> Result<F> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.g(u, v))
    }

    /// `J u` without dimension checks.
    pub fn j_of<F: Field<Real = T>>(&self, u: &Vector<F>) -> Vector<F> {
        let n = self.dim();
        if self.canonical {
            let mut out = Vec::with_capacity(n);
            for k in (0..n).step_by(2) {
                out.push(-u.coords[k + 1].clone());
                out.push(u.coords[k].clone());
            }
            return Vector::new(out);
        }
        Vector::new(
            self.j
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&u.coords)
                        .filter(|(a, _)| !a.is_zero())
                        .fold(F::zero(), |acc, (a, x)| acc + x.scale(a))
                })
                .collect(),
        )
    }

    pub fn apply_j<F: Field<Real = T>>(&self, u: &Vector<F>) -> Result<Vector<F>> {
        self.check_dim(u)?;
        Ok(self.j_of(u))
    }

    /// Classifies `span{u, v}` for real or complexified vectors.
    pub fn classify_plane<F: Field<Real = T>>(&self, u: &Vector<F>, v: &Vector<F>) -> Result<PlaneClass> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        let scale = u.max_magnitude().max(v.max_magnitude()).max(1.0);
        let wedge = wedge2(u, v);
        if wedge.iter().all(|w| w.is_negligible(scale * scale)) {
            return Err(CurvatureError::DependentVectors);
        }
        let ju = self.j_of(u);
        let jv = self.j_of(v);
        let holomorphic = [&ju, &jv].iter().all(|w| {
            wedge3(u, v, w)
                .iter()
                .all(|c| c.is_negligible(scale * scale * scale))
        });
        let holomorphy = if holomorphic {
            Holomorphy::Holomorphic
        } else if self.g(u, &jv).is_negligible(scale * scale) {
            Holomorphy::Antiholomorphic
        } else {
            Holomorphy::Generic
        };

        let a = self.g(u, u);
        let b = self.g(u, v);
        let c = self.g(v, v);
        let gram_rank = gram_rank_2x2(&a, &b, &c);
        let signature = if gram_rank == 2 {
            real_signature(&a, &b, &c)
        } else {
            None
        };
        Ok(PlaneClass {
            holomorphy,
            gram_rank,
            signature,
        })
    }

    /// A `g`-orthonormal basis of the form `f_0, J f_0, f_1, J f_1, ...`,
    /// returned as line representatives `f_k` with their signs. Negative
    /// lines come first.
    pub fn adapted_frame(&self) -> Result<Vec<(Vector<T>, Sign)>> {
        let n = self.dim();
        if self.canonical {
            return Ok((0..self.m)
                .map(|k| {
                    let sign = if self.signs[2 * k] < 0 { Sign::Minus } else { Sign::Plus };
                    (Vector::basis(n, 2 * k), sign)
                })
                .collect());
        }
        let mut frame: Vec<Vector<T>> = Vec::new();
        let mut lines: Vec<(Vector<T>, Sign)> = Vec::new();
        let mut candidates: Vec<Vector<T>> = (0..n).map(|k| Vector::basis(n, k)).collect();
        for a in 0..n {
            for b in a + 1..n {
                candidates.push(Vector::basis(n, a).add(&Vector::basis(n, b)));
                candidates.push(Vector::basis(n, a).sub(&Vector::basis(n, b)));
            }
        }
        for cand in candidates {
            if lines.len() == self.m {
                break;
            }
            let mut v = cand;
            for f in &frame {
                let nf = self.g(f, f);
                let k = self.g(&v, f) / nf;
                v = v.axpy(&-k, f);
            }
            let norm = self.g(&v, &v);
            if norm.is_negligible(1.0) {
                continue;
            }
            let (sign, mag) = if norm > T::zero() {
                (Sign::Plus, norm)
            } else {
                (Sign::Minus, -norm)
            };
            let Some(root) = mag.sqrt_exact() else {
                continue;
            };
            let unit = v.scale_real(&(T::one() / root));
            frame.push(unit.clone());
            frame.push(self.j_of(&unit));
            lines.push((unit, sign));
        }
        if lines.len() < self.m {
            return Err(CurvatureError::NoRationalFrame);
        }
        lines.sort_by_key(|(_, s)| match s {
            Sign::Minus => 0,
            Sign::Plus => 1,
        });
        Ok(lines)
    }

    /// A random `g`-isometry `Q = (I - A)^{-1} (I + A)` with `A` a small
    /// integer `g`-skew generator; commutes with `J` when `j_commuting`.
    pub fn random_isometry(&self, rng: &mut impl Rng, j_commuting: bool) -> Option<Matrix<T>> {
        let n = self.dim();
        let mut skew = vec![vec![T::zero(); n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let v: T = random_int(rng, 2);
                skew[a][b] = v.clone();
                skew[b][a] = -v;
            }
        }
        // eta * skew is g-skew: (eta K)^T eta + eta (eta K) = K^T + K = 0.
        let mut gen: Matrix<T> = skew
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                if self.signs[i] < 0 {
                    row.into_iter().map(|v| -v).collect()
                } else {
                    row
                }
            })
            .collect();
        if j_commuting {
            let jaj = mat_mul(&mat_mul(&self.j, &gen), &self.j);
            let half = T::from_ratio(1, 2);
            for (row, jrow) in gen.iter_mut().zip(&jaj) {
                for (x, y) in row.iter_mut().zip(jrow) {
                    *x = (x.clone() - y.clone()) * half.clone();
                }
            }
        }
        let id = identity::<T>(n);
        let minus: Matrix<T> = id
            .iter()
            .zip(&gen)
            .map(|(r, a)| r.iter().zip(a).map(|(x, y)| x.clone() - y.clone()).collect())
            .collect();
        let plus: Matrix<T> = id
            .iter()
            .zip(&gen)
            .map(|(r, a)| r.iter().zip(a).map(|(x, y)| x.clone() + y.clone()).collect())
            .collect();
        solve(minus, plus)
    }

    /// A `g`-orthonormal tuple with the requested signs, deterministic in
    /// `seed`. With `antiholomorphic`, also `g(u_i, J u_k) = 0` for all `i, k`.
    ///
    /// The tuple is the image of a reference tuple taken from the adapted
    /// frame under a random rational isometry (Cayley transform), so it is
    /// exactly orthonormal in the rational backend. Singular Cayley draws are
    /// retried up to 32 times.
    pub fn orthonormal_tuple(&self, seed: u64, pattern: &[Sign], antiholomorphic: bool) -> Result<Vec<Vector<T>>> {
        let reference = self.reference_tuple(pattern, antiholomorphic)?;
        const ATTEMPTS: usize = 32;
        for attempt in 0..ATTEMPTS {
            let mut rng = stream_rng(seed, attempt as u64);
            if let Some(q) = self.random_isometry(&mut rng, antiholomorphic) {
                return Ok(reference.iter().map(|v| apply_matrix(&q, v)).collect());
            }
        }
        Err(CurvatureError::RetryBudgetExhausted { attempts: ATTEMPTS })
    }

    fn reference_tuple(&self, pattern: &[Sign], antiholomorphic: bool) -> Result<Vec<Vector<T>>> {
        let frame = self.adapted_frame()?;
        let unrealizable = || CurvatureError::Unrealizable {
            pattern: pattern_label(pattern),
            m: self.m,
            s: self.s,
        };
        let mut pool: Vec<(Vector<T>, Sign)> = Vec::new();
        for (f, sign) in &frame {
            pool.push((f.clone(), *sign));
            if !antiholomorphic {
                pool.push((self.j_of(f), *sign));
            }
        }
        let mut used = vec![false; pool.len()];
        let mut out = Vec::with_capacity(pattern.len());
        for want in pattern {
            let idx = pool
                .iter()
                .enumerate()
                .position(|(i, (_, s))| !used[i] && s == want)
                .ok_or_else(unrealizable)?;
            used[idx] = true;
            out.push(pool[idx].0.clone());
        }
        Ok(out)
    }

    /// Whether an orthonormal tuple with this sign pattern exists.
    pub fn realizable(&self, pattern: &[Sign], antiholomorphic: bool) -> bool {
        let plus = pattern.iter().filter(|&&s| s == Sign::Plus).count();
        let minus = pattern.len() - plus;
        let (pos, neg) = self.line_counts();
        let k = if antiholomorphic { 1 } else { 2 };
        plus <= k * pos && minus <= k * neg
    }

    /// Converts to another backend (through `f64` for float targets).
    pub fn cast<U: Scalar>(&self) -> HermitianSpace<U> {
        HermitianSpace {
            m: self.m,
            s: self.s,
            signs: self.signs.clone(),
            j: self
                .j
                .iter()
                .map(|row| row.iter().map(|v| U::from_f64(v.to_f64()).unwrap_or_else(U::zero)).collect())
                .collect(),
            canonical: self.canonical,
        }
    }
}

pub fn apply_matrix<F: Field>(q: &Matrix<F::Real>, v: &Vector<F>) -> Vector<F> {
    Vector::new(
        q.iter()
            .map(|row| {
                row.iter()
                    .zip(v.coords())
                    .filter(|(a, x)| !a.is_zero() && !x.is_zero())
                    .fold(F::zero(), |acc, (a, x)| acc + x.scale(a))
            })
            .collect(),
    )
}

/// Components `u_i v_j - u_j v_i` for `i < j`, in lexicographic pair order.
pub fn wedge2<F: Field>(u: &Vector<F>, v: &Vector<F>) -> Vec<F> {
    let n = u.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (ui, uj, vi, vj) = (&u.coords[i], &u.coords[j], &v.coords[i], &v.coords[j]);
            let term = |a: &F, b: &F| {
                if a.is_zero() || b.is_zero() {
                    F::zero()
                } else {
                    a.clone() * b.clone()
                }
            };
            out.push(term(ui, vj) - term(uj, vi));
        }
    }
    out
}

fn wedge3<F: Field>(u: &Vector<F>, v: &Vector<F>, w: &Vector<F>) -> Vec<F> {
    let n = u.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let m = |x: &Vector<F>, a: usize| x.coords[a].clone();
                let det = m(u, i) * (m(v, j) * m(w, k) - m(v, k) * m(w, j))
                    - m(u, j) * (m(v, i) * m(w, k) - m(v, k) * m(w, i))
                    + m(u, k) * (m(v, i) * m(w, j) - m(v, j) * m(w, i));
                out.push(det);
            }
        }
    }
    out
}

/// Rank of the Gram matrix of `u, v`.
pub fn gram_rank<T: Scalar, F: Field<Real = T>>(space: &HermitianSpace<T>, u: &Vector<F>, v: &Vector<F>) -> usize {
    gram_rank_2x2(&space.g(u, u), &space.g(u, v), &space.g(v, v))
}

fn gram_rank_2x2<F: Field>(a: &F, b: &F, c: &F) -> usize {
    let det = a.clone() * c.clone() - b.clone() * b.clone();
    if <F::Real as Scalar>::EXACT {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            0
        } else if det.is_zero() {
            1
        } else {
            2
        }
    } else {
        // Singular values of the complex symmetric 2x2 Gram matrix.
        let (ma, mb, mc) = (a.magnitude(), b.magnitude(), c.magnitude());
        let trace = ma * ma + 2.0 * mb * mb + mc * mc;
        let mdet = det.magnitude();
        let disc = (trace * trace - 4.0 * mdet * mdet).max(0.0).sqrt();
        let s_max = ((trace + disc) / 2.0).sqrt();
        let s_min = if s_max > 0.0 { mdet / s_max } else { 0.0 };
        let threshold = 1e-9 * ma.max(mb).max(mc).max(1.0);
        usize::from(s_max > threshold) + usize::from(s_min > threshold)
    }
}

fn real_signature<F: Field>(a: &F, b: &F, c: &F) -> Option<PlaneSignature> {
    let scale = a.magnitude().max(b.magnitude()).max(c.magnitude());
    if [a, b, c]
        .iter()
        .any(|x| !F::from_real(x.imag_part()).is_negligible(scale))
    {
        return None;
    }
    let (a, b, c) = (a.real_part(), b.real_part(), c.real_part());
    let det = a.clone() * c.clone() - b.clone() * b;
    let zero = <F::Real as Zero>::zero();
    Some(if det < zero {
        PlaneSignature::PlusMinus
    } else if a + c > zero {
        PlaneSignature::PlusPlus
    } else {
        PlaneSignature::MinusMinus
    })
}

/// Second intersection of the line `anchor + lambda v` with the null cone,
/// `anchor - 2 g(anchor, v) / g(v, v) * v`; `anchor` must be isotropic.
pub fn reflect_isotropic<T: Scalar, F: Field<Real = T>>(
    space: &HermitianSpace<T>,
    anchor: &Vector<F>,
    v: &Vector<F>,
) -> Option<Vector<F>> {
    let vv = space.g(v, v);
    if vv.is_negligible(1.0) {
        return None;
    }
    let k = F::from_real(T::from_i64(-2)) * space.g(anchor, v) / vv;
    let out = anchor.axpy(&k, v);
    (!out.is_zero()).then_some(out)
}

impl<T: Scalar> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| if T::EXACT { format!("\"{}\"", format_rational(&c.to_rational())) } else { c.to_f64().to_string() })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn e(n: usize, k: usize) -> Vector<Q> {
        Vector::basis(n, k)
    }

    #[test]
    fn sign_layout_and_j() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        assert_eq!(sp.metric_signs(), &[-1, -1, 1, 1]);
        // J e1 = e2 in 1-based numbering.
        assert_eq!(sp.apply_j(&e(4, 0)).unwrap(), e(4, 1));
        let sp = HermitianSpace::<Q>::new(1, 0).unwrap();
        assert_eq!(sp.metric_signs(), &[1, 1]);
        assert!(sp.is_definite());
        let sp = HermitianSpace::<Q>::new(3, 3).unwrap();
        assert!(sp.metric_signs().iter().all(|&s| s == -1));
    }

    #[test]
    fn rejects_bad_signature() {
        assert!(matches!(
            HermitianSpace::<Q>::new(2, 3),
            Err(CurvatureError::InvalidSignature { .. })
        ));
        assert!(HermitianSpace::<Q>::new(2, -1).is_err());
        assert!(HermitianSpace::<Q>::new(0, 0).is_err());
    }

    #[test]
    fn inner_products_on_basis() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        assert_eq!(sp.inner(&e(4, 0), &e(4, 0)).unwrap(), q(-1));
        assert_eq!(sp.inner(&e(4, 2), &e(4, 2)).unwrap(), q(1));
        assert_eq!(sp.inner(&e(4, 0), &e(4, 2)).unwrap(), q(0));
        assert!(matches!(
            sp.inner(&e(4, 0), &e(6, 0)),
            Err(CurvatureError::DimensionMismatch { .. })
        ));
        let je1 = sp.j_of(&e(4, 0));
        let je3 = sp.j_of(&e(4, 2));
        assert_eq!(sp.g(&je1, &je3), q(0));
    }

    #[test]
    fn complex_bilinear_inner() {
        let sp = HermitianSpace::<Q>::new(2, 0).unwrap();
        let x = e(4, 0);
        let y = e(4, 2);
        let z = ComplexVector::from_parts(&x, &y);
        assert!(sp.g(&z, &z).is_zero());
        assert_eq!(sp.g(&x.complexify(), &x.complexify()), Complex::from_real(q(1)));
        let u = ComplexVector::from_parts(&e(4, 0), &e(4, 2));
        let w = ComplexVector::from_parts(&e(4, 0), &e(4, 2).neg());
        assert_eq!(sp.g(&u, &w), Complex::from_real(q(2)));
    }

    #[test]
    fn plane_classification_examples() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        let c = sp.classify_plane(&e(4, 0), &e(4, 1)).unwrap();
        assert_eq!(c.holomorphy, Holomorphy::Holomorphic);
        assert_eq!(c.gram_rank, 2);
        assert_eq!(c.signature, Some(PlaneSignature::MinusMinus));

        let c = sp.classify_plane(&e(4, 0), &e(4, 2)).unwrap();
        assert_eq!(c.holomorphy, Holomorphy::Antiholomorphic);
        assert_eq!(c.gram_rank, 2);
        assert_eq!(c.signature, Some(PlaneSignature::PlusMinus));

        // Gram oracle: g(e1+e3, e1+e3) = 0, g(e1+e3, e2) = 0, g(e2, e2) = -1.
        let c = sp.classify_plane(&e(4, 0).add(&e(4, 2)), &e(4, 1)).unwrap();
        assert_eq!(c.gram_rank, 1);
        assert!(c.is_weakly_isotropic());
        assert_eq!(c.signature, None);

        assert_eq!(
            sp.classify_plane(&e(4, 0), &e(4, 0).scale(&q(3))),
            Err(CurvatureError::DependentVectors)
        );
    }

    #[test]
    fn custom_j_validation() {
        let sp = HermitianSpace::<Q>::new(2, 0).unwrap();
        let mut j = sp.complex_structure().clone();
        assert!(HermitianSpace::with_complex_structure(2, 0, j.clone()).is_ok());
        j[0][1] = q(1);
        let err = HermitianSpace::with_complex_structure(2, 0, j).unwrap_err();
        assert!(matches!(err, CurvatureError::InvariantViolation { invariant: "J-squared", .. }));
    }

    #[test]
    fn custom_j_frame_is_adapted() {
        // J pairing e1 with e3 and e2 with e4 instead of the canonical pairing.
        let n = 4;
        let mut j = vec![vec![q(0); n]; n];
        j[2][0] = q(1);
        j[0][2] = q(-1);
        j[3][1] = q(1);
        j[1][3] = q(-1);
        let sp = HermitianSpace::with_complex_structure(2, 0, j).unwrap();
        assert!(!sp.has_canonical_j());
        let tuple = sp.orthonormal_tuple(3, &[Sign::Plus, Sign::Plus], true).unwrap();
        let (x, y) = (&tuple[0], &tuple[1]);
        assert_eq!(sp.g(x, x), q(1));
        assert_eq!(sp.g(y, y), q(1));
        assert_eq!(sp.g(x, y), q(0));
        assert_eq!(sp.g(x, &sp.j_of(y)), q(0));
    }

    #[test]
    fn antiholomorphic_triple_in_indefinite_space() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        let pattern = [Sign::Plus, Sign::Plus, Sign::Minus];
        let t = sp.orthonormal_tuple(17, &pattern, true).unwrap();
        for (i, u) in t.iter().enumerate() {
            for (k, v) in t.iter().enumerate() {
                let want = if i == k { q(pattern[i].value()) } else { q(0) };
                assert_eq!(sp.g(u, v), want);
                assert_eq!(sp.g(u, &sp.j_of(v)), q(0));
            }
        }
        // Deterministic per seed.
        assert_eq!(t, sp.orthonormal_tuple(17, &pattern, true).unwrap());
        assert_ne!(t, sp.orthonormal_tuple(18, &pattern, true).unwrap());
    }

    #[test]
    fn unrealizable_patterns() {
        let sp = HermitianSpace::<Q>::new(2, 0).unwrap();
        let pair = sp.orthonormal_tuple(1, &[Sign::Plus, Sign::Plus], true).unwrap();
        assert_eq!(sp.g(&pair[0], &sp.j_of(&pair[1])), q(0));
        assert!(matches!(
            sp.orthonormal_tuple(1, &[Sign::Plus; 3], true),
            Err(CurvatureError::Unrealizable { .. })
        ));
        assert!(sp.orthonormal_tuple(1, &[Sign::Plus; 3], false).is_ok());
        assert!(!sp.realizable(&[Sign::Minus], false));
    }

    #[test]
    fn isotropic_sum_of_opposite_units() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        let t = sp.orthonormal_tuple(5, &[Sign::Plus, Sign::Minus], true).unwrap();
        let xi = t[0].add(&t[1]);
        assert!(sp.g(&xi, &xi).is_zero());
    }

    #[test]
    fn reflection_lands_on_null_cone() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        let anchor = e(4, 0).add(&e(4, 2));
        let v = Vector::from_ints(&[1, 2, -3, 5]);
        let xi = reflect_isotropic(&sp, &anchor, &v).unwrap();
        assert!(sp.g(&xi, &xi).is_zero());
        assert_ne!(xi, anchor);
    }

    #[test]
    fn float_backend_frame_and_rank() {
        let sp = HermitianSpace::<f64>::new(2, 1).unwrap();
        let t = sp.orthonormal_tuple(2, &[Sign::Plus, Sign::Minus], true).unwrap();
        assert!((sp.g(&t[0], &t[0]) - 1.0).abs() < 1e-12);
        assert!((sp.g(&t[1], &t[1]) + 1.0).abs() < 1e-12);
        let xi = t[0].add(&t[1]);
        let c = sp.classify_plane(&xi, &sp.j_of(&t[0]).add(&t[1])).unwrap();
        assert!(c.gram_rank <= 2);
        let c = sp.classify_plane(&xi, &sp.j_of(&xi)).unwrap();
        assert_eq!(c.gram_rank, 0);
        assert_eq!(c.holomorphy, Holomorphy::Holomorphic);
    }

    #[test]
    fn isometries_preserve_metric_and_commute_with_j() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        let mut rng = stream_rng(9, 0);
        let q_mat = sp.random_isometry(&mut rng, true).unwrap();
        let n = sp.dim();
        for a in 0..n {
            let qa = apply_matrix(&q_mat, &e(n, a));
            assert_eq!(apply_matrix(&q_mat, &sp.j_of(&e(n, a))), sp.j_of(&qa));
            for b in 0..n {
                let qb = apply_matrix(&q_mat, &e(n, b));
                assert_eq!(sp.g(&qa, &qb), sp.g(&e(n, a), &e(n, b)));
            }
        }
    }
}
