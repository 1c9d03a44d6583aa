use ahcurv::document::{Metadata, TensorDocument};
use ahcurv::harness::models::{model_complex_space_form, random_tensor};
use ahcurv::polarization::{expand, VectorFamily};
use ahcurv::random::{random_coords, stream_rng};
use ahcurv::{CurvatureError, CurvatureTensor, HermitianSpace, Rational, Scalar, Vector};
use proptest::prelude::*;

type Q = Rational;

const SPACES: [(usize, i64); 7] = [(1, 0), (2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (3, 2)];

fn space_strategy() -> impl Strategy<Value = HermitianSpace<Q>> {
    (0..SPACES.len()).prop_map(|i| HermitianSpace::new(SPACES[i].0, SPACES[i].1).unwrap())
}

fn small() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::from_ratio(n, d))
}

fn vectors(sp: &HermitianSpace<Q>, seed: u64, count: usize) -> Vec<Vector<Q>> {
    let mut rng = stream_rng(seed, 1);
    (0..count).map(|_| Vector::new(random_coords(&mut rng, sp.dim()))).collect()
}

/// Coefficients of the degree <= 4 polynomial through `(t, p(t))` for
/// `t = 0..=4`, by Newton divided differences.
fn interpolate(values: &[Q]) -> Vec<Q> {
    let n = values.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / Q::from_i64(level as i64);
        }
    }
    // Expand the Newton form  sum dd[k] prod_{j<k} (t - j).
    let mut coeffs = vec![Q::from_i64(0); n];
    for k in (0..n).rev() {
        let mut shifted = vec![Q::from_i64(0); n];
        shifted[1..].clone_from_slice(&coeffs[..n - 1]);
        for i in 0..n {
            shifted[i] = shifted[i].clone() - coeffs[i].clone() * Q::from_i64(k as i64);
        }
        coeffs = shifted;
        coeffs[0] = coeffs[0].clone() + dd[k].clone();
    }
    coeffs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_tensors_have_all_symmetries(sp in space_strategy(), seed in any::<u64>()) {
        let r = random_tensor(&sp, seed, true);
        prop_assert!(r.symmetry_failures(true).is_empty());
        let unprojected = random_tensor(&sp, seed, false);
        prop_assert!(unprojected.symmetry_failures(false).is_empty());
    }

    #[test]
    fn sectional_depends_only_on_the_plane(
        sp in space_strategy(),
        seed in any::<u64>(),
        (a, b, c, d) in (small(), small(), small(), small()),
    ) {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        prop_assume!(det != Q::from_i64(0));
        let r = random_tensor(&sp, seed, true);
        let v = vectors(&sp, seed, 2);
        let (u, w) = (&v[0], &v[1]);
        let Ok(k) = r.sectional(u, w) else { return Ok(()) };
        let u2 = u.scale(&a).add(&w.scale(&b));
        let w2 = u.scale(&c).add(&w.scale(&d));
        prop_assert_eq!(r.sectional(&u2, &w2).unwrap(), k);
    }

    #[test]
    fn holomorphic_curvature_is_scale_invariant(sp in space_strategy(), seed in any::<u64>(), lambda in small()) {
        prop_assume!(lambda != Q::from_i64(0));
        let r = random_tensor(&sp, seed, true);
        let x = &vectors(&sp, seed, 1)[0];
        match r.holomorphic_sectional(x) {
            Ok(h) => prop_assert_eq!(r.holomorphic_sectional(&x.scale(&lambda)).unwrap(), h),
            Err(e) => prop_assert_eq!(e, CurvatureError::IsotropicVector),
        }
    }

    #[test]
    fn curvature_is_linear_in_the_tensor(sp in space_strategy(), seed in any::<u64>(), k in small()) {
        let r1 = random_tensor(&sp, seed, true);
        let r2 = model_complex_space_form(&sp, &Q::from_i64(4));
        let v = vectors(&sp, seed, 4);
        let combined = r1.add(&r2.scaled(&k));
        let lhs = combined.r(&v[0], &v[1], &v[2], &v[3]);
        let rhs = r1.r(&v[0], &v[1], &v[2], &v[3]) + k * r2.r(&v[0], &v[1], &v[2], &v[3]);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_matches_interpolation(sp in space_strategy(), seed in any::<u64>()) {
        let r = random_tensor(&sp, seed, true);
        let v = vectors(&sp, seed, 8);
        let fams: Vec<_> = (0..4).map(|i| VectorFamily::new(v[2 * i].clone(), v[2 * i + 1].clone())).collect();
        let p = expand(&r, [&fams[0], &fams[1], &fams[2], &fams[3]]).unwrap();
        let values: Vec<Q> = (0..5)
            .map(|t| {
                let t = Q::from_i64(t);
                let at: Vec<_> = fams.iter().map(|f| f.at(&t)).collect();
                r.r(&at[0], &at[1], &at[2], &at[3])
            })
            .collect();
        let coeffs = interpolate(&values);
        for (k, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(&p.coeff(k), c);
        }
    }

    #[test]
    fn documents_round_trip(sp in space_strategy(), seed in any::<u64>(), bianchi in any::<bool>()) {
        let r = random_tensor(&sp, seed, bianchi);
        let doc = TensorDocument::from_tensor(&r, Metadata { name: None, seed: Some(seed) });
        let text = doc.serialize();
        let parsed = TensorDocument::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.serialize(), text);
        let back: CurvatureTensor<Q> = parsed.tensor().unwrap();
        prop_assert_eq!(back, r);
    }
}
