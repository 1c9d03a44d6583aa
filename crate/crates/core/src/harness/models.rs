//! Model and random curvature tensors.

use crate::random::{random_unit_interval, stream_rng};
use crate::scalar::Scalar;
use crate::space::HermitianSpace;
use crate::tensor::{flat, CurvatureTensor};

/// `c * pi1`, the tensor of constant sectional curvature `c`.
pub fn model_constant_sectional<T: Scalar>(space: &HermitianSpace<T>, c: &T) -> CurvatureTensor<T> {
    let n = space.dim();
    let g = |a: usize, b: usize| if a == b { space.metric_signs()[a] as i64 } else { 0 };
    let mut dense = vec![T::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = g(i, l) * g(j, k) - g(i, k) * g(j, l);
                    if v != 0 {
                        dense[flat(n, i, j, k, l)] = c.clone() * T::from_i64(v);
                    }
                }
            }
        }
    }
    CurvatureTensor::from_dense_unchecked(space.clone(), dense)
}

/// The complex space form of constant holomorphic sectional curvature `c`:
/// `(c/4) [pi1 + g(JX,U) g(JY,Z) - g(JX,Z) g(JY,U) - 2 g(JX,Y) g(JZ,U)]`.
pub fn model_complex_space_form<T: Scalar>(space: &HermitianSpace<T>, c: &T) -> CurvatureTensor<T> {
    let n = space.dim();
    let signs = space.metric_signs();
    let j = space.complex_structure();
    // omega[a][b] = g(J e_a, e_b)
    let omega: Vec<Vec<T>> = (0..n)
        .map(|a| (0..n).map(|b| j[b][a].clone() * T::from_i64(signs[b] as i64)).collect())
        .collect();
    let g = |a: usize, b: usize| {
        if a == b {
            T::from_i64(signs[a] as i64)
        } else {
            T::zero()
        }
    };
    let quarter = c.clone() * T::from_ratio(1, 4);
    let two = T::from_i64(2);
    let mut dense = vec![T::zero(); n * n * n * n];
    for i in 0..n {
        for jj in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = g(i, l) * g(jj, k) - g(i, k) * g(jj, l)
                        + omega[i][l].clone() * omega[jj][k].clone()
                        - omega[i][k].clone() * omega[jj][l].clone()
                        - two.clone() * omega[i][jj].clone() * omega[k][l].clone();
                    if !v.is_zero() {
                        dense[flat(n, i, jj, k, l)] = quarter.clone() * v;
                    }
                }
            }
        }
    }
    CurvatureTensor::from_dense_unchecked(space.clone(), dense)
}

/// Symmetrized tensor with uniform rational entries `k/8` in `[-1, 1]` on
/// the reduced coordinates, optionally projected onto the Bianchi kernel.
pub fn random_tensor<T: Scalar>(space: &HermitianSpace<T>, seed: u64, bianchi: bool) -> CurvatureTensor<T> {
    let n = space.dim();
    let np = n * (n - 1) / 2;
    let mut rng = stream_rng(seed, u64::MAX);
    let values: Vec<T> = (0..np * (np + 1) / 2)
        .map(|_| random_unit_interval(&mut rng, 8))
        .collect();
    let t = CurvatureTensor::from_reduced(space.clone(), &values);
    if bianchi {
        t.bianchi_projected()
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn models_pass_symmetry_suite() {
        for (m, s) in [(2, 0), (2, 1), (3, 1), (3, 3)] {
            let sp = HermitianSpace::<Q>::new(m, s).unwrap();
            let c = Q::from_i64(3);
            assert!(model_constant_sectional(&sp, &c).symmetry_failures(true).is_empty());
            assert!(model_complex_space_form(&sp, &c).symmetry_failures(true).is_empty());
        }
    }

    #[test]
    fn zero_curvature_model() {
        let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
        assert!(model_constant_sectional(&sp, &Q::from_i64(0)).nonzero_entries().is_empty());
    }

    #[test]
    fn random_tensors_are_deterministic() {
        let sp = HermitianSpace::<Q>::new(3, 1).unwrap();
        let a = random_tensor(&sp, 11, true);
        assert_eq!(a, random_tensor(&sp, 11, true));
        assert_ne!(a, random_tensor(&sp, 12, true));
        assert!(a.symmetry_failures(true).is_empty());
        let b = random_tensor(&sp, 11, false);
        assert!(b.symmetry_failures(false).is_empty());
        assert!(!b.satisfies_bianchi());
    }
}
