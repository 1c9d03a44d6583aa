//! Algebraic curvature tensors at a point and the curvature quantities built
//! from them: `R`, `pi1`, sectional curvature of real and complexified planes,
//! holomorphic and totally real biholomorphic sectional curvature.


use crate::error::{CurvatureError, Result};
use crate::space::{wedge2, HermitianSpace, Vector};
use crate::scalar::{Field, Scalar};

/// Index of the pair `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// The pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// A rank-4 tensor with `R(X,Y,Z,U) = -R(Y,X,Z,U) = -R(X,Y,U,Z) = R(Z,U,X,Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor<T> {
    space: HermitianSpace<T>,
    components: Vec<T>,
    // Symmetric matrix on pairs i < j; eval contracts through it.
    bivector: Vec<T>,
}

/// A failed algebraic identity, named for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryFailure {
    pub identity: &'static str,
    pub index: [usize; 4],
}

impl<T: Scalar> CurvatureTensor<T> {
    /// Builds a tensor from 0-based sparse entries. With `symmetrize` the
    /// array is first averaged over the 8-element symmetry orbit; with
    /// `bianchi_project` it is then projected onto the kernel of the first
    /// Bianchi map. The result must satisfy the pair and antisymmetry
    /// relations (and Bianchi, if projected) or an error names the identity.
    pub fn from_components(
        space: HermitianSpace<T>,
        entries: &[([usize; 4], T)],
        symmetrize: bool,
        bianchi_project: bool,
    ) -> Result<Self> {
        let tensor = Self::assemble(space, entries, symmetrize, bianchi_project)?;
        if let Some(fail) = tensor.symmetry_failures(false).into_iter().next() {
            return Err(CurvatureError::InvariantViolation {
                invariant: fail.identity,
                detail: format!("at index {:?} (1-based)", fail.index.map(|i| i + 1)),
            });
        }
        Ok(tensor)
    }

    /// Like [`Self::from_components`] but without checking the symmetries,
    /// so that they can be reported.
    pub fn assemble(
        space: HermitianSpace<T>,
        entries: &[([usize; 4], T)],
        symmetrize: bool,
        bianchi_project: bool,
    ) -> Result<Self> {
        let n = space.dim();
        let mut dense = vec![T::zero(); n * n * n * n];
        for (idx, value) in entries {
            if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
                return Err(CurvatureError::IndexOutOfRange { index: bad, dim: n });
            }
            if !value.is_finite() {
                return Err(CurvatureError::NonFinite);
            }
            dense[flat(n, idx[0], idx[1], idx[2], idx[3])] = value.clone();
        }
        if symmetrize {
            dense = symmetrize_array(n, &dense);
        }
        if bianchi_project {
            dense = bianchi_projection(n, &dense);
        }
        Ok(Self::from_dense_unchecked(space, dense))
    }

    pub(crate) fn from_dense_unchecked(space: HermitianSpace<T>, components: Vec<T>) -> Self {
        let n = space.dim();
        let ps = pairs(n);
        let mut bivector = Vec::with_capacity(ps.len() * ps.len());
        for &(i, j) in &ps {
            for &(k, l) in &ps {
                bivector.push(components[flat(n, i, j, k, l)].clone());
            }
        }
        Self {
            space,
            components,
            bivector,
        }
    }

    /// Tensor with bivector matrix entries `M[P][Q] = M[Q][P] = values[(P, Q)]`
    /// for `P <= Q`, in row-major order over the upper triangle.
    pub fn from_reduced(space: HermitianSpace<T>, values: &[T]) -> Self {
        let n = space.dim();
        let ps = pairs(n);
        let np = ps.len();
        assert_eq!(values.len(), np * (np + 1) / 2, "reduced coordinate count");
        let mut dense = vec![T::zero(); n * n * n * n];
        let mut it = values.iter();
        for a in 0..np {
            for b in a..np {
                let v = it.next().expect("length checked").clone();
                if v.is_zero() {
                    continue;
                }
                let (i, j) = ps[a];
                let (k, l) = ps[b];
                for (p, q) in [((i, j), (k, l)), ((k, l), (i, j))] {
                    let ((i, j), (k, l)) = (p, q);
                    dense[flat(n, i, j, k, l)] = v.clone();
                    dense[flat(n, j, i, k, l)] = -v.clone();
                    dense[flat(n, i, j, l, k)] = -v.clone();
                    dense[flat(n, j, i, l, k)] = v.clone();
                }
            }
        }
        Self::from_dense_unchecked(space, dense)
    }

    /// Projection onto the kernel of the first Bianchi map.
    pub fn bianchi_projected(&self) -> Self {
        let n = self.dim();
        Self::from_dense_unchecked(self.space.clone(), bianchi_projection(n, &self.components))
    }

    /// Coordinates on the symmetry-reduced space (inverse of `from_reduced`).
    pub fn reduced(&self) -> Vec<T> {
        let np = self.pair_count();
        let mut out = Vec::with_capacity(np * (np + 1) / 2);
        for a in 0..np {
            for b in a..np {
                out.push(self.bivector[a * np + b].clone());
            }
        }
        out
    }

    pub fn space(&self) -> &HermitianSpace<T> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    fn pair_count(&self) -> usize {
        let n = self.dim();
        n * (n - 1) / 2
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> &T {
        &self.components[flat(self.dim(), i, j, k, l)]
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    /// Nonzero components as 0-based index tuples, in lexicographic order.
    pub fn nonzero_entries(&self) -> Vec<([usize; 4], T)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.component(i, j, k, l);
                        if !v.is_zero() {
                            out.push(([i, j, k, l], v.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn max_component(&self) -> f64 {
        self.components
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: &T) -> Self {
        Self::from_dense_unchecked(
            self.space.clone(),
            self.components.iter().map(|v| v.clone() * k.clone()).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "tensor dimension mismatch");
        Self::from_dense_unchecked(
            self.space.clone(),
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn cast<U: Scalar>(&self) -> CurvatureTensor<U> {
        CurvatureTensor::from_dense_unchecked(
            self.space.cast(),
            self.components
                .iter()
                .map(|v| U::from_f64(v.to_f64()).unwrap_or_else(U::zero))
                .collect(),
        )
    }

    pub fn to_f64(&self) -> CurvatureTensor<f64> {
        self.cast()
    }

    /// All violated algebraic identities (empty when the tensor is valid).
    pub fn symmetry_failures(&self, include_bianchi: bool) -> Vec<SymmetryFailure> {
        let n = self.dim();
        let scale = self.max_component();
        let mut out = Vec::new();
        let close = |a: T, b: T| (a - b).is_negligible(scale);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.component(i, j, k, l).clone();
                        let idx = [i, j, k, l];
                        if !close(r.clone(), -self.component(j, i, k, l).clone()) {
                            out.push(SymmetryFailure { identity: "antisymmetry-12", index: idx });
                        }
                        if !close(r.clone(), -self.component(i, j, l, k).clone()) {
                            out.push(SymmetryFailure { identity: "antisymmetry-34", index: idx });
                        }
                        if !close(r.clone(), self.component(k, l, i, j).clone()) {
                            out.push(SymmetryFailure { identity: "pair-symmetry", index: idx });
                        }
                        if include_bianchi {
                            let cyc = r
                                + self.component(j, k, i, l).clone()
                                + self.component(k, i, j, l).clone();
                            if !cyc.is_negligible(scale) {
                                out.push(SymmetryFailure { identity: "first-bianchi", index: idx });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn satisfies_bianchi(&self) -> bool {
        self.symmetry_failures(true)
            .iter()
            .all(|f| f.identity != "first-bianchi")
    }

    /// `R(X, Y, Z, U)` without dimension checks; complex-multilinear on
    /// complexified vectors.
    pub fn r<F: Field<Real = T>>(&self, x: &Vector<F>, y: &Vector<F>, z: &Vector<F>, u: &Vector<F>) -> F {
        let left = wedge2(x, y);
        let right = wedge2(z, u);
        let np = left.len();
        let mut acc = F::zero();
        for (a, wl) in left.iter().enumerate() {
            if wl.is_zero() {
                continue;
            }
            let row = &self.bivector[a * np..(a + 1) * np];
            let mut inner = F::zero();
            for (m, wr) in row.iter().zip(&right) {
                if !m.is_zero() && !wr.is_zero() {
                    inner = inner + wr.scale(m);
                }
            }
            acc = acc + wl.clone() * inner;
        }
        acc
    }

    pub fn eval<F: Field<Real = T>>(&self, x: &Vector<F>, y: &Vector<F>, z: &Vector<F>, u: &Vector<F>) -> Result<F> {
        for v in [x, y, z, u] {
            if v.dim() != self.dim() {
                return Err(CurvatureError::DimensionMismatch {
                    expected: self.dim(),
                    got: v.dim(),
                });
            }
        }
        Ok(self.r(x, y, z, u))
    }

    /// `K(u, v) = R(u,v,v,u) / pi1(u,v,v,u)`, for real or complexified planes.
    pub fn sectional<F: Field<Real = T>>(&self, u: &Vector<F>, v: &Vector<F>) -> Result<F> {
        let num = self.eval(u, v, v, u)?;
        let den = pi1(&self.space, u, v, v, u);
        let scale = (u.max_magnitude() * v.max_magnitude()).powi(2);
        if den.is_negligible(scale) {
            let gram_rank = crate::space::gram_rank(&self.space, u, v);
            return Err(CurvatureError::DegeneratePlane { gram_rank });
        }
        Ok(num / den)
    }

    /// `H(X) = K(X, JX)`.
    pub fn holomorphic_sectional<F: Field<Real = T>>(&self, x: &Vector<F>) -> Result<F> {
        let jx = self.space.apply_j(x)?;
        let scale = x.max_magnitude().powi(2);
        if self.space.g(x, x).is_negligible(scale) {
            return Err(CurvatureError::IsotropicVector);
        }
        self.sectional(x, &jx)
    }

    /// Totally real biholomorphic curvature `R(X,JX,JY,Y) / (g(X,X) g(Y,Y))`
    /// of an orthogonal antiholomorphic pair; equals `R(X,JX,JY,Y)` for
    /// orthonormal pairs of equal signs.
    pub fn biholomorphic<F: Field<Real = T>>(&self, x: &Vector<F>, y: &Vector<F>) -> Result<F> {
        let sp = &self.space;
        let jx = sp.apply_j(x)?;
        let jy = sp.apply_j(y)?;
        let scale = x.max_magnitude() * y.max_magnitude();
        if !sp.g(x, y).is_negligible(scale) || !sp.g(x, &jy).is_negligible(scale) {
            return Err(CurvatureError::Precondition(
                "biholomorphic curvature needs an orthogonal antiholomorphic pair".into(),
            ));
        }
        let nx = sp.g(x, x);
        let ny = sp.g(y, y);
        if nx.is_negligible(x.max_magnitude().powi(2)) || ny.is_negligible(y.max_magnitude().powi(2)) {
            return Err(CurvatureError::DegeneratePlane {
                gram_rank: crate::space::gram_rank(sp, x, y),
            });
        }
        Ok(self.r(x, &jx, &jy, y) / (nx * ny))
    }
}

/// `pi1(X,Y,Z,U) = g(X,U) g(Y,Z) - g(X,Z) g(Y,U)`.
pub fn pi1<T: Scalar, F: Field<Real = T>>(
    space: &HermitianSpace<T>,
    x: &Vector<F>,
    y: &Vector<F>,
    z: &Vector<F>,
    u: &Vector<F>,
) -> F {
    space.g(x, u) * space.g(y, z) - space.g(x, z) * space.g(y, u)
}

pub(crate) fn flat(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

fn symmetrize_array<T: Scalar>(n: usize, a: &[T]) -> Vec<T> {
    let eighth = T::from_ratio(1, 8);
    let mut out = vec![T::zero(); a.len()];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s = a[flat(n, i, j, k, l)].clone() - a[flat(n, j, i, k, l)].clone()
                        - a[flat(n, i, j, l, k)].clone()
                        + a[flat(n, j, i, l, k)].clone()
                        + a[flat(n, k, l, i, j)].clone()
                        - a[flat(n, l, k, i, j)].clone()
                        - a[flat(n, k, l, j, i)].clone()
                        + a[flat(n, l, k, j, i)].clone();
                    out[flat(n, i, j, k, l)] = s * eighth.clone();
                }
            }
        }
    }
    out
}

/// `R - b(R)` with `b(R)_{ijkl} = (R_ijkl + R_jkil + R_kijl) / 3`, which is
/// totally antisymmetric for pair-symmetric `R`.
fn bianchi_projection<T: Scalar>(n: usize, a: &[T]) -> Vec<T> {
    let third = T::from_ratio(1, 3);
    let mut out = a.to_vec();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let cyc = a[flat(n, i, j, k, l)].clone()
                        + a[flat(n, j, k, i, l)].clone()
                        + a[flat(n, k, i, j, l)].clone();
                    if !cyc.is_zero() {
                        let idx = flat(n, i, j, k, l);
                        out[idx] = out[idx].clone() - cyc * third.clone();
                    }
                }
            }
        }
    }
    out
}
