//! Quantified curvature conditions as exact linear constraints.
//!
//! Each condition is linear in `R` and polynomial in its probe vectors, so
//! instantiating it on generic rational configurations produces linear
//! functionals on the symmetry-reduced coordinates of `R`. Instantiation
//! stops once the rank (tracked modulo a 61-bit prime) has been stable for
//! [`STABLE_ROUNDS`] consecutive configurations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{CurvatureError, Result};
use crate::linalg::{rational_kernel, rational_mod, ModEchelon, PRIMES};
use crate::par::Exec;
use crate::random::{mix_seed, random_int, random_unit_interval, stream_rng};
use crate::scalar::{Field, Rational, Scalar};
use crate::space::{wedge2, ComplexVector, HermitianSpace, Sign, Vector};
use crate::tensor::CurvatureTensor;

pub const STABLE_ROUNDS: usize = 10;

const BATCH: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConditionId {
    /// `R(x,Jx,Jx,a) + R(x,Jx,Ja,x) = 0` on antiholomorphic `(+,-)` pairs.
    Eq1,
    /// `R(x,Jx,Jx,y) + R(x,Jx,Jy,x) = 0` on antiholomorphic pairs, definite.
    Lemma2,
    /// `R(X,xi,xi,X) = 0` on weakly isotropic antiholomorphic planes.
    ThmA,
    /// `R(X,JX,Jxi,xi) = 0` on weakly isotropic antiholomorphic planes.
    Thm3,
    /// `R(x,xi,xi,x) = 0` for complex isotropic `xi`, definite.
    Thm6,
}

impl ConditionId {
    pub const ALL: [ConditionId; 5] = [Self::Eq1, Self::Lemma2, Self::ThmA, Self::Thm3, Self::Thm6];

    pub fn label(self) -> &'static str {
        match self {
            Self::Eq1 => "eq1",
            Self::Lemma2 => "lemma2",
            Self::ThmA => "thmA",
            Self::Thm3 => "thm3",
            Self::Thm6 => "thm6",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Self::Eq1 => "R(x,Jx,Jx,a)+R(x,Jx,Ja,x)=0",
            Self::Lemma2 => "R(x,Jx,Jx,y)+R(x,Jx,Jy,x)=0",
            Self::ThmA => "R(X,xi,xi,X)=0",
            Self::Thm3 => "R(X,JX,Jxi,xi)=0",
            Self::Thm6 => "R^C(x,xi,xi,x)=0",
        }
    }

    /// Fails unless the condition's quantifier is realizable in `space`.
    pub fn check_space<T: Scalar>(self, space: &HermitianSpace<T>) -> Result<()> {
        let (m, s) = (space.m(), space.s());
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(CurvatureError::Hypothesis(format!(
                    "{} needs {what} (m = {m}, s = {s})",
                    self.label()
                )))
            }
        };
        match self {
            Self::Eq1 => need(m > 1 && space.is_indefinite(), "m > 1 and 0 < s < m"),
            Self::Lemma2 => need(m > 1 && space.is_definite(), "m > 1 and a definite metric"),
            Self::ThmA | Self::Thm3 => {
                need(m > 2 && space.is_indefinite(), "m > 2 and 0 < s < m")?;
                need(!isotropic_plane_signs(space).is_empty(), "an indefinite complement of some holomorphic line")
            }
            Self::Thm6 => need(m > 2 && space.is_definite(), "m > 2 and a definite metric"),
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ConditionId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

/// Signs of `X` for which `{X, JX}^perp` is indefinite.
fn isotropic_plane_signs<T: Scalar>(space: &HermitianSpace<T>) -> Vec<Sign> {
    [Sign::Plus, Sign::Minus]
        .into_iter()
        .filter(|&sign| space.realizable(&[sign, Sign::Plus, Sign::Minus], true))
        .collect()
}

type Q = Rational;
type CQ = Complex<Rational>;

/// One term `coef * R(v1, v2, v3, v4)` of a linear functional.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: i64,
    pub vectors: [ComplexVector<Q>; 4],
}

/// A linear functional on curvature tensors: `sum coef * R(...)`.
pub type Functional = Vec<Term>;

pub fn evaluate(r: &CurvatureTensor<Q>, f: &Functional) -> CQ {
    f.iter().fold(CQ::zero(), |acc, t| {
        let [a, b, c, d] = &t.vectors;
        acc + Field::scale(&r.r(a, b, c, d), &Q::from_i64(t.coef))
    })
}

/// Coefficients of `f` on the reduced coordinates of `R` (pairs `P <= Q`).
pub fn functional_row(f: &Functional, dim: usize) -> Vec<CQ> {
    let np = dim * (dim - 1) / 2;
    let mut row = vec![CQ::zero(); np * (np + 1) / 2];
    for term in f {
        let [a, b, c, d] = &term.vectors;
        let (left, right) = (wedge2(a, b), wedge2(c, d));
        let coef = Q::from_i64(term.coef);
        let mut idx = 0;
        for p in 0..np {
            for q in p..np {
                let mut v = left[p].clone() * right[q].clone();
                if p != q {
                    v += left[q].clone() * right[p].clone();
                }
                if !v.is_zero() {
                    row[idx] = row[idx].clone() + Field::scale(&v, &coef);
                }
                idx += 1;
            }
        }
    }
    row
}

fn cvec(v: &Vector<Q>) -> ComplexVector<Q> {
    v.complexify()
}

fn term(coef: i64, v: [&ComplexVector<Q>; 4]) -> Term {
    Term {
        coef,
        vectors: v.map(Clone::clone),
    }
}

/// Functionals of one seeded instantiation of the condition.
pub fn instantiate(space: &HermitianSpace<Q>, condition: ConditionId, seed: u64) -> Result<Vec<Functional>> {
    let j = |v: &ComplexVector<Q>| space.j_of(v);
    match condition {
        ConditionId::Eq1 | ConditionId::Lemma2 => {
            let pattern = match condition {
                ConditionId::Eq1 => [Sign::Plus, Sign::Minus],
                _ if space.s() == 0 => [Sign::Plus, Sign::Plus],
                _ => [Sign::Minus, Sign::Minus],
            };
            let t = space.orthonormal_tuple(seed, &pattern, true)?;
            let (x, y) = (cvec(&t[0]), cvec(&t[1]));
            let (jx, jy) = (j(&x), j(&y));
            Ok(vec![vec![term(1, [&x, &jx, &jx, &y]), term(1, [&x, &jx, &jy, &x])]])
        }
        ConditionId::ThmA | ConditionId::Thm3 => {
            let signs = isotropic_plane_signs(space);
            let sign = signs[(seed % signs.len() as u64) as usize];
            let t = space.orthonormal_tuple(seed, &[sign, Sign::Plus, Sign::Minus], true)?;
            let x = cvec(&t[0]);
            let xi = cvec(&t[1].add(&t[2]));
            let f = if condition == ConditionId::ThmA {
                vec![term(1, [&x, &xi, &xi, &x])]
            } else {
                vec![term(1, [&x, &j(&x), &j(&xi), &xi])]
            };
            Ok(vec![f])
        }
        ConditionId::Thm6 => {
            let sign = if space.s() == 0 { Sign::Plus } else { Sign::Minus };
            let t = space.orthonormal_tuple(seed, &[sign; 3], true)?;
            // xi = y + i (c z + s Jy) with a random rational angle, so the
            // J-angle between the real and imaginary parts is generic.
            let mut rng = stream_rng(seed, 1 << 32);
            let u: Q = random_unit_interval(&mut rng, 7);
            let one = Q::from_i64(1);
            let den = one.clone() + u.clone() * u.clone();
            let (c, s) = ((one - u.clone() * u.clone()) / den.clone(), Q::from_i64(2) * u / den);
            let w = t[2].scale(&c).add(&space.j_of(&t[1]).scale(&s));
            let x = cvec(&t[0]);
            let xi = Vector::from_parts(&t[1], &w);
            Ok(vec![vec![term(1, [&x, &xi, &xi, &x])]])
        }
    }
}

/// Linear constraints of a condition and a basis of their solution space.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub space: HermitianSpace<Q>,
    pub condition: ConditionId,
    pub seed: u64,
    /// Functionals on the reduced coordinates (real and imaginary parts).
    pub rows: Vec<Vec<Q>>,
    pub instantiations: usize,
    pub rank: usize,
    pub basis: Vec<CurvatureTensor<Q>>,
}

impl ConstraintSystem {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// A small-integer combination of the basis, deterministic in `seed`.
    pub fn random_element(&self, seed: u64) -> CurvatureTensor<Q> {
        let mut rng = stream_rng(seed, 7);
        let n = self.space.dim();
        let zero = CurvatureTensor::from_dense_unchecked(self.space.clone(), vec![Q::zero(); n * n * n * n]);
        self.basis.iter().fold(zero, |acc, b| {
            let k: Q = random_int(&mut rng, 3);
            if k.is_zero() {
                acc
            } else {
                acc.add(&b.scaled(&k))
            }
        })
    }

    /// Evaluates the condition directly on `count` fresh configurations and
    /// returns the first nonzero value, if any.
    pub fn violation(&self, r: &CurvatureTensor<Q>, seed: u64, count: usize) -> Result<Option<CQ>> {
        for k in 0..count {
            for f in instantiate(&self.space, self.condition, mix_seed(seed, 0xC0FFEE, k as u64))? {
                let v = evaluate(r, &f);
                if !v.is_zero() {
                    return Ok(Some(v));
                }
            }
        }
        Ok(None)
    }
}

/// Builds the constraint system of `condition` on `space`.
pub fn impose(space: &HermitianSpace<Q>, condition: ConditionId, seed: u64, exec: Exec) -> Result<ConstraintSystem> {
    condition.check_space(space)?;
    let n = space.dim();
    let np = n * (n - 1) / 2;
    let width = np * (np + 1) / 2;
    let limit = width + 20 * STABLE_ROUNDS;
    let mut echelon = ModEchelon::new(width, PRIMES[0]);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut stable = 0;
    let mut used = 0;
    'outer: while stable < STABLE_ROUNDS {
        if used >= limit {
            return Err(CurvatureError::RetryBudgetExhausted { attempts: used });
        }
        let batch: Vec<Result<Vec<Vec<Q>>>> = exec.map(BATCH, |b| {
            let fs = instantiate(space, condition, mix_seed(seed, condition as u64, (used + b) as u64))?;
            let mut out = Vec::new();
            for f in fs {
                let row = functional_row(&f, n);
                let re: Vec<Q> = row.iter().map(|c| c.re.clone()).collect();
                let im: Vec<Q> = row.iter().map(|c| c.im.clone()).collect();
                for part in [re, im] {
                    if part.iter().any(|v| !v.is_zero()) {
                        out.push(part);
                    }
                }
            }
            Ok(out)
        });
        for inst in batch {
            used += 1;
            let mut grew = false;
            for row in inst? {
                match row.iter().map(|v| rational_mod(v, PRIMES[0])).collect::<Option<Vec<u64>>>() {
                    Some(m) => grew |= echelon.insert(m),
                    None => grew = true,
                }
                rows.push(row);
            }
            stable = if grew { 0 } else { stable + 1 };
            if stable >= STABLE_ROUNDS {
                break 'outer;
            }
        }
    }
    let kernel = rational_kernel(&rows, width);
    let basis = kernel
        .iter()
        .map(|v| CurvatureTensor::from_reduced(space.clone(), v))
        .collect();
    Ok(ConstraintSystem {
        space: space.clone(),
        condition,
        seed,
        rank: width - kernel.len(),
        rows,
        instantiations: used,
        basis,
    })
}
