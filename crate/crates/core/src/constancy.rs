//! Pointwise constancy of holomorphic, antiholomorphic and totally real
//! biholomorphic sectional curvature.

use std::collections::BTreeMap;

use crate::error::{CurvatureError, Result};
use crate::par::Exec;
use crate::random::{mix_seed, random_coords, stream_rng};
use crate::scalar::{Scalar, FLOAT_VERDICT_TOL};
use crate::space::{HermitianSpace, RealVector, Sign, Vector};
use crate::tensor::CurvatureTensor;

/// Vectors on which a curvature quantity takes two different values.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    /// Which identity failed: `"H"`, `"K"`, `"a)"`, `"Eq.(9)"`, ...
    pub label: &'static str,
    pub vectors: Vec<RealVector<T>>,
    pub values: [T; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstancyVerdict<T> {
    Constant { value: T },
    Nonconstant { witness: Witness<T> },
}

impl<T> ConstancyVerdict<T> {
    pub fn is_constant(&self) -> bool {
        matches!(self, ConstancyVerdict::Constant { .. })
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            ConstancyVerdict::Constant { value } => Some(value),
            ConstancyVerdict::Nonconstant { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        match self {
            ConstancyVerdict::Constant { .. } => None,
            ConstancyVerdict::Nonconstant { witness } => Some(witness),
        }
    }
}

/// Probe-set parameters shared by the sampled classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub seed: u64,
    /// Tuples per realizable sign pattern.
    pub per_pattern: usize,
    /// Random vectors for the float route of the holomorphic test.
    pub holomorphic_samples: usize,
    pub exec: Exec,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            seed: 0,
            per_pattern: 60,
            holomorphic_samples: 200,
            exec: Exec::default(),
        }
    }
}

impl Sampling {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

fn same<T: Scalar>(a: &T, b: &T, scale: f64) -> bool {
    if T::EXACT {
        a == b
    } else {
        (a.to_f64() - b.to_f64()).abs() <= FLOAT_VERDICT_TOL * scale
    }
}

fn vanishes<T: Scalar>(a: &T, scale: f64) -> bool {
    same(a, &T::zero(), scale)
}

/// All sign sequences of the given length.
pub fn sign_patterns(len: usize) -> Vec<Vec<Sign>> {
    (0..1u32 << len)
        .map(|bits| {
            (0..len)
                .map(|k| if bits & (1 << (len - 1 - k)) == 0 { Sign::Plus } else { Sign::Minus })
                .collect()
        })
        .collect()
}

/// A sign pattern with one orthonormal tuple realizing it.
pub type SignedTuple<T> = (Vec<Sign>, Vec<RealVector<T>>);

type Lemma3Row<T> = (Option<Witness<T>>, Option<Witness<T>>, bool);

/// Seeded orthonormal antiholomorphic tuples, `per_pattern` for each
/// realizable pattern of the given length, grouped by pattern.
pub fn probe_tuples<T: Scalar>(
    space: &HermitianSpace<T>,
    len: usize,
    sampling: &Sampling,
) -> Result<Vec<SignedTuple<T>>> {
    let patterns: Vec<Vec<Sign>> = sign_patterns(len)
        .into_iter()
        .filter(|p| space.realizable(p, true))
        .collect();
    let per = sampling.per_pattern;
    sampling
        .exec
        .map(patterns.len() * per, |job| {
            let (p, k) = (job / per, job % per);
            let seed = mix_seed(sampling.seed, p as u64, k as u64);
            space
                .orthonormal_tuple(seed, &patterns[p], true)
                .map(|t| (patterns[p].clone(), t))
        })
        .into_iter()
        .collect()
}

/// Monomial coefficients of the quartic form `R(X,JX,JX,X) - c g(X,X)^2`,
/// keyed by sorted index quadruples; zero entries are dropped.
pub fn holomorphic_quartic_residual<T: Scalar>(r: &CurvatureTensor<T>, c: &T) -> BTreeMap<[usize; 4], T> {
    let sp = r.space();
    let n = sp.dim();
    let j = sp.complex_structure();
    let columns: Vec<Vec<(usize, T)>> = (0..n)
        .map(|b| (0..n).filter(|&i| !j[i][b].is_zero()).map(|i| (i, j[i][b].clone())).collect())
        .collect();
    let mut out: BTreeMap<[usize; 4], T> = BTreeMap::new();
    let mut add = |key: [usize; 4], v: T| {
        let mut key = key;
        key.sort_unstable();
        let slot = out.entry(key).or_insert_with(T::zero);
        *slot = slot.clone() + v;
    };
    for a in 0..n {
        for d in 0..n {
            for b in 0..n {
                for c_idx in 0..n {
                    let mut acc = T::zero();
                    for (jj, jb) in &columns[b] {
                        for (kk, kc) in &columns[c_idx] {
                            let comp = r.component(a, *jj, *kk, d);
                            if !comp.is_zero() {
                                acc = acc + comp.clone() * jb.clone() * kc.clone();
                            }
                        }
                    }
                    if !acc.is_zero() {
                        add([a, b, c_idx, d], acc);
                    }
                }
            }
        }
    }
    let signs = sp.metric_signs();
    for a in 0..n {
        for b in 0..n {
            let v = c.clone() * T::from_i64((signs[a] * signs[b]) as i64);
            add([a, a, b, b], -v);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Constancy of `H`. Exact backend: the quartic form `R(X,JX,JX,X) -
/// c g(X,X)^2` must vanish identically, with `c = H(e_1)`. Float backend:
/// `H` is compared on `holomorphic_samples` seeded vectors.
pub fn constant_holomorphic<T: Scalar>(r: &CurvatureTensor<T>, sampling: &Sampling) -> Result<ConstancyVerdict<T>> {
    let sp = r.space();
    let n = sp.dim();
    let reference = Vector::basis(n, 0);
    let c = r.holomorphic_sectional(&reference)?;
    let scale = r.max_component();
    let mut rng = stream_rng(sampling.seed, 0);
    if T::EXACT && holomorphic_quartic_residual(r, &c).is_empty() {
        return Ok(ConstancyVerdict::Constant { value: c });
    }
    let budget = if T::EXACT { 1000 } else { sampling.holomorphic_samples };
    let candidates = (1..n)
        .map(|k| Vector::<T>::basis(n, k))
        .chain((0..budget).map(|_| Vector::new(random_coords(&mut rng, n))));
    for v in candidates {
        let norm = Scalar::to_f64(&sp.g(&v, &v)).abs();
        let euclid: f64 = v.coords().iter().map(|x| Scalar::to_f64(x).powi(2)).sum();
        if norm < 0.1 * euclid {
            continue;
        }
        let h = r.holomorphic_sectional(&v)?;
        if !same(&h, &c, scale) {
            return Ok(ConstancyVerdict::Nonconstant {
                witness: Witness {
                    label: "H",
                    vectors: vec![reference, v],
                    values: [c, h],
                },
            });
        }
    }
    if T::EXACT {
        // The form is nonzero, so generic vectors cannot all miss it.
        return Err(CurvatureError::RetryBudgetExhausted { attempts: budget });
    }
    Ok(ConstancyVerdict::Constant { value: c })
}

fn require_m_gt_2<T: Scalar>(space: &HermitianSpace<T>) -> Result<()> {
    if space.m() <= 2 {
        return Err(CurvatureError::Hypothesis(format!(
            "complex dimension m = {} must exceed 2",
            space.m()
        )));
    }
    Ok(())
}

fn zero_witness<T: Scalar>(label: &'static str, vectors: Vec<RealVector<T>>, value: T) -> Witness<T> {
    Witness {
        label,
        vectors,
        values: [value, T::zero()],
    }
}

/// Witness for `R(x,y,z,x) != 0`: the planes `{x, y+z}` and `{x, y-z}`
/// when they are nondegenerate, else the raw value against 0.
fn triple_witness<T: Scalar>(r: &CurvatureTensor<T>, label: &'static str, x: &RealVector<T>, y: &RealVector<T>, z: &RealVector<T>) -> Witness<T> {
    let (p, m) = (y.add(z), y.sub(z));
    match (r.sectional(x, &p), r.sectional(x, &m)) {
        (Ok(kp), Ok(km)) => Witness {
            label,
            vectors: vec![x.clone(), p, m],
            values: [kp, km],
        },
        _ => zero_witness(label, vec![x.clone(), y.clone(), z.clone()], r.r(x, y, z, x)),
    }
}

fn check_triple<T: Scalar>(
    r: &CurvatureTensor<T>,
    signs: &[Sign],
    t: &[RealVector<T>],
    reference: &T,
    scale: f64,
) -> Result<Option<Witness<T>>> {
    let sp = r.space();
    let (x, y, z) = (&t[0], &t[1], &t[2]);
    let mixed = signs[1] != signs[2];
    let a_value = r.r(x, y, z, x);
    if !vanishes(&a_value, scale) {
        let label = if mixed { "Eq.(10)" } else { "a)" };
        return Ok(Some(triple_witness(r, label, x, y, z)));
    }
    for (u, v) in [(x, y), (x, z), (y, z)] {
        let k = r.sectional(u, v)?;
        if !same(&k, reference, scale) {
            let label = match (u == x, v == z) {
                (true, true) if mixed => "Eq.(9)",
                (true, _) if sp.is_indefinite() => "Eq.(12)/§2",
                (true, _) => "b)",
                _ => "K",
            };
            return Ok(Some(Witness {
                label,
                vectors: vec![u.clone(), v.clone()],
                values: [reference.clone(), k],
            }));
        }
    }
    if sp.is_indefinite() {
        let (jy, jz) = (sp.j_of(y), sp.j_of(z));
        let eleven = [
            (r.r(x, y, &jy, x), [x, y, &jy]),
            (r.r(x, z, &jz, x), [x, z, &jz]),
            (r.r(x, z, z, y), [x, z, y]),
        ];
        for (value, vs) in eleven {
            if !vanishes(&value, scale) {
                return Ok(Some(zero_witness("Eq.(11)", vs.iter().map(|v| (*v).clone()).collect(), value)));
            }
        }
        let value = r.r(z, y, &jy, z);
        if !vanishes(&value, scale) {
            return Ok(Some(zero_witness("Eq.(11')", vec![z.clone(), y.clone(), jy], value)));
        }
    }
    Ok(None)
}

/// Constancy of the sectional curvature of antiholomorphic planes (`m > 2`).
///
/// On each probe triple `{x, y, z}` this checks `R(x,y,z,x) = 0` and that
/// `K(x,y)`, `K(x,z)`, `K(y,z)` equal the reference value; in indefinite
/// signature also the vanishing of `R(x,y,Jy,x)`, `R(x,z,Jz,x)`,
/// `R(x,z,z,y)` and `R(z,y,Jy,z)`.
pub fn constant_antiholomorphic<T: Scalar>(r: &CurvatureTensor<T>, sampling: &Sampling) -> Result<ConstancyVerdict<T>> {
    require_m_gt_2(r.space())?;
    let tuples = probe_tuples(r.space(), 3, sampling)?;
    let scale = r.max_component();
    let reference = r.sectional(&tuples[0].1[0], &tuples[0].1[1])?;
    let failure = sampling.exec.find_first(tuples.len(), |i| {
        let (signs, t) = &tuples[i];
        check_triple(r, signs, t, &reference, scale).transpose()
    });
    match failure {
        Some(Err(e)) => Err(e),
        Some(Ok(witness)) => Ok(ConstancyVerdict::Nonconstant { witness }),
        None => Ok(ConstancyVerdict::Constant { value: reference }),
    }
}

/// Constancy of `R(X,JX,JY,Y) / (g(X,X) g(Y,Y))` over orthonormal
/// antiholomorphic pairs of every realizable signature (`m > 2`).
pub fn constant_biholomorphic<T: Scalar>(r: &CurvatureTensor<T>, sampling: &Sampling) -> Result<ConstancyVerdict<T>> {
    require_m_gt_2(r.space())?;
    let tuples = probe_tuples(r.space(), 2, sampling)?;
    let scale = r.max_component();
    let first = &tuples[0].1;
    let reference = r.biholomorphic(&first[0], &first[1])?;
    let failure = sampling.exec.find_first(tuples.len(), |i| {
        let t = &tuples[i].1;
        match r.biholomorphic(&t[0], &t[1]) {
            Err(e) => Some(Err(e)),
            Ok(v) if !same(&v, &reference, scale) => Some(Ok(Witness {
                label: "H(X,Y)",
                vectors: vec![first[0].clone(), first[1].clone(), t[0].clone(), t[1].clone()],
                values: [reference.clone(), v],
            })),
            Ok(_) => None,
        }
    });
    match failure {
        Some(Err(e)) => Err(e),
        Some(Ok(witness)) => Ok(ConstancyVerdict::Nonconstant { witness }),
        None => Ok(ConstancyVerdict::Constant { value: reference }),
    }
}

/// The three equivalent conditions for definite spaces with `m > 2`:
/// a) `R(x,y,z,x) = 0`, b) `K(x,y) = K(x,z)` on orthonormal antiholomorphic
/// triples, c) constant antiholomorphic sectional curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma3Report<T> {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    /// `R(x, y-z, y+z, x) = K(x,y) - K(x,z)` on every probe triple.
    pub coherent: bool,
    pub witness_a: Option<Witness<T>>,
    pub witness_b: Option<Witness<T>>,
    pub verdict: ConstancyVerdict<T>,
}

impl<T> Lemma3Report<T> {
    pub fn agree(&self) -> bool {
        self.a == self.b && self.b == self.c
    }
}

pub fn lemma3_check<T: Scalar>(r: &CurvatureTensor<T>, sampling: &Sampling) -> Result<Lemma3Report<T>> {
    let sp = r.space();
    if !sp.is_definite() {
        return Err(CurvatureError::Hypothesis("the space must be definite".into()));
    }
    require_m_gt_2(sp)?;
    let tuples = probe_tuples(sp, 3, sampling)?;
    let scale = r.max_component();
    let rows: Vec<Result<Lemma3Row<T>>> = sampling.exec.map(tuples.len(), |i| {
        let t = &tuples[i].1;
        let (x, y, z) = (&t[0], &t[1], &t[2]);
        let a_value = r.r(x, y, z, x);
        let wa = (!vanishes(&a_value, scale)).then(|| triple_witness(r, "a)", x, y, z));
        let (kxy, kxz) = (r.sectional(x, y)?, r.sectional(x, z)?);
        let wb = (!same(&kxy, &kxz, scale)).then(|| Witness {
            label: "b)",
            vectors: vec![x.clone(), y.clone(), z.clone()],
            values: [kxy.clone(), kxz.clone()],
        });
        let coherent = same(&r.r(x, &y.sub(z), &y.add(z), x), &(kxy - kxz), scale);
        Ok((wa, wb, coherent))
    });
    let mut witness_a = None;
    let mut witness_b = None;
    let mut coherent = true;
    for row in rows {
        let (wa, wb, ok) = row?;
        witness_a = witness_a.or(wa);
        witness_b = witness_b.or(wb);
        coherent &= ok;
    }
    let verdict = constant_antiholomorphic(r, sampling)?;
    Ok(Lemma3Report {
        a: witness_a.is_none(),
        b: witness_b.is_none(),
        c: verdict.is_constant(),
        coherent,
        witness_a,
        witness_b,
        verdict,
    })
}
