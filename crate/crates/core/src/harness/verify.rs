//! End-to-end checks of each constancy theorem.
//!
//! Theorems whose hypothesis is an identity (lemma1, lemma2, thmA, thm3,
//! thm6) are checked on random elements of the hypothesis solution space.
//! Boundedness theorems are checked through their contrapositive on random
//! Bianchi tensors (a nonconstant tensor must show unbounded curvature),
//! together with the bounds on the two model tensors.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;

use crate::constancy::{
    constant_antiholomorphic, constant_biholomorphic, constant_holomorphic, lemma3_check, ConstancyVerdict, Sampling,
};
use crate::document::{Metadata, TensorDocument};
use crate::error::{CurvatureError, Result};
use crate::harness::constraints::{impose, ConditionId, ConstraintSystem};
use crate::harness::models::{model_complex_space_form, model_constant_sectional, random_tensor};
use crate::harness::probe::{probe_unboundedness, Direction, ProbeConfig, ProbeFamily, ProbeOutcome};
use crate::par::Exec;
use crate::polarization::{
    bound_forced_identities, lemma2_rotation_coefficients, lemma2_terms, theorem1_coefficients, theorem5_expansion,
    theorem7_expansion, Lemma1Terms, TPolynomial, Theorem5Terms,
};
use crate::random::mix_seed;
use crate::scalar::{Rational, Scalar};
use crate::space::{HermitianSpace, PlaneSignature, RealVector, Sign};
use crate::tensor::CurvatureTensor;

type Q = Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    Lemma1,
    Thm1,
    ThmA,
    Thm2,
    Remark1,
    Thm3,
    Thm4,
    Lemma2,
    Thm5,
    Thm6,
    Thm7,
}

impl TheoremId {
    pub const ALL: [TheoremId; 11] = [
        Self::Lemma1,
        Self::Thm1,
        Self::ThmA,
        Self::Thm2,
        Self::Remark1,
        Self::Thm3,
        Self::Thm4,
        Self::Lemma2,
        Self::Thm5,
        Self::Thm6,
        Self::Thm7,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Lemma1 => "lemma1",
            Self::Thm1 => "thm1",
            Self::ThmA => "thmA",
            Self::Thm2 => "thm2",
            Self::Remark1 => "remark1",
            Self::Thm3 => "thm3",
            Self::Thm4 => "thm4",
            Self::Lemma2 => "lemma2",
            Self::Thm5 => "thm5",
            Self::Thm6 => "thm6",
            Self::Thm7 => "thm7",
        }
    }

    pub fn claim(self) -> &'static str {
        match self {
            Self::Lemma1 => "Eq.(1) on antiholomorphic (+,-) pairs implies constant H",
            Self::Thm1 => "|H| bounded on non-null vectors implies constant H",
            Self::ThmA => "R(X,xi,xi,X) = 0 on weakly isotropic antiholomorphic planes implies constant antiholomorphic K",
            Self::Thm2 => "antiholomorphic K bounded above implies constant antiholomorphic K",
            Self::Remark1 => "the bound of thm2 may be from below, or on (+,+) or (-,-) planes only",
            Self::Thm3 => "R(X,JX,Jxi,xi) = 0 implies constant totally real biholomorphic curvature",
            Self::Thm4 => "biholomorphic curvature bounded above implies it is constant",
            Self::Lemma2 => "R(x,Jx,Jx,y)+R(x,Jx,Jy,x) = 0 (definite) implies constant H",
            Self::Thm5 => "|Re H^C| or |Im H^C| bounded on (+,+) holomorphic planes implies constant H",
            Self::Thm6 => "R^C(x,xi,xi,x) = 0 (definite) implies constant antiholomorphic K",
            Self::Thm7 => "Re or Im of K^C bounded on one side implies constant antiholomorphic K",
        }
    }

    /// The constraint set whose solution space is sampled, if any.
    pub fn condition(self) -> Option<ConditionId> {
        match self {
            Self::Lemma1 => Some(ConditionId::Eq1),
            Self::Lemma2 => Some(ConditionId::Lemma2),
            Self::ThmA => Some(ConditionId::ThmA),
            Self::Thm3 => Some(ConditionId::Thm3),
            Self::Thm6 => Some(ConditionId::Thm6),
            _ => None,
        }
    }

    pub fn check_space<T: Scalar>(self, space: &HermitianSpace<T>) -> Result<()> {
        if let Some(c) = self.condition() {
            return c.check_space(space).map_err(|e| match e {
                CurvatureError::Hypothesis(msg) => {
                    CurvatureError::Hypothesis(msg.replacen(c.label(), self.label(), 1))
                }
                other => other,
            });
        }
        let (m, s) = (space.m(), space.s());
        let (need_m, definite) = match self {
            Self::Thm1 => (2, false),
            Self::Thm2 | Self::Remark1 | Self::Thm4 => (3, false),
            Self::Thm5 => (2, true),
            _ => (3, true),
        };
        let ok = m >= need_m && if definite { space.is_definite() } else { space.is_indefinite() };
        if ok {
            Ok(())
        } else {
            Err(CurvatureError::Hypothesis(format!(
                "{} needs m > {} and {} (m = {m}, s = {s})",
                self.label(),
                need_m - 1,
                if definite { "a definite metric" } else { "0 < s < m" }
            )))
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub threshold: f64,
    pub probe_pairs: usize,
    /// Pairs or triples per trial for identities checked by direct evaluation.
    pub samples: usize,
    /// Tuples per sign pattern for the constancy classifiers.
    pub per_pattern: usize,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 20,
            seed: 0,
            threshold: 1e6,
            probe_pairs: 64,
            samples: 50,
            per_pattern: 20,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub label: String,
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    /// `None` for the model checks.
    pub trial: Option<usize>,
    pub check: String,
    pub reason: String,
    pub tensor: CurvatureTensor<Q>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub m: usize,
    pub s: usize,
    pub trials: usize,
    pub seed: u64,
    pub notes: Vec<(String, String)>,
    pub checks: Vec<CheckLine>,
    pub failure: Option<Failure>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn status(&self) -> Status {
        if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Reruns the failing check on the stored tensor and confirms it fails
    /// the same way.
    pub fn failure_reverifies(&self, config: &VerifyConfig) -> Result<bool> {
        let Some(f) = &self.failure else {
            return Ok(true);
        };
        let ctx = Context::new(self.theorem, f.tensor.space().clone(), config)?;
        let outcomes = match f.trial {
            Some(trial) => ctx.checks_on(&f.tensor, trial_seed(config.seed, trial)),
            None => ctx.model_checks(),
        };
        Ok(outcomes
            .into_iter()
            .any(|(label, o)| label == f.check && matches!(o, Outcome::Fail(ref r) if *r == f.reason)))
    }

    /// Line-oriented `key: value` text; a failing report ends with the
    /// failing tensor in the tensor file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem: {}", self.theorem);
        let _ = writeln!(out, "claim: {}", self.theorem.claim());
        let _ = writeln!(out, "space: m = {}, s = {}", self.m, self.s);
        let _ = writeln!(out, "trials: {}", self.trials);
        let _ = writeln!(out, "seed: {}", self.seed);
        for (k, v) in &self.notes {
            let _ = writeln!(out, "{k}: {v}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "check: {} | {} | {} passed, {} failed, {} skipped",
                c.label,
                c.status.label(),
                c.passed,
                c.failed,
                c.skipped
            );
        }
        let _ = writeln!(out, "status: {}", self.status().label());
        if let Some(f) = &self.failure {
            match f.trial {
                Some(t) => {
                    let _ = writeln!(out, "failure.trial: {t}");
                }
                None => out.push_str("failure.trial: model\n"),
            }
            let _ = writeln!(out, "failure.check: {}", f.check);
            let _ = writeln!(out, "failure.reason: {}", f.reason);
            out.push_str("failure.tensor:\n");
            out.push_str(
                &TensorDocument::from_tensor(
                    &f.tensor,
                    Metadata {
                        name: Some(format!("{} failure", self.theorem)),
                        seed: f.trial.map(|t| trial_seed(self.seed, t)),
                    },
                )
                .serialize(),
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

fn outcome(ok: bool, reason: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(reason())
    }
}

fn from_result(r: Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Outcome::Fail(e.to_string()))
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    mix_seed(seed, trial as u64, 0x7E57)
}

fn vecs(vs: &[&RealVector<Q>]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

struct Context<'a> {
    theorem: TheoremId,
    space: HermitianSpace<Q>,
    system: Option<ConstraintSystem>,
    config: &'a VerifyConfig,
}

const MODEL_C: i64 = 4;

impl<'a> Context<'a> {
    fn new(theorem: TheoremId, space: HermitianSpace<Q>, config: &'a VerifyConfig) -> Result<Self> {
        theorem.check_space(&space)?;
        let system = match theorem.condition() {
            Some(c) => Some(impose(&space, c, config.seed, config.exec)?),
            None => None,
        };
        Ok(Self {
            theorem,
            space,
            system,
            config,
        })
    }

    fn sampling(&self, seed: u64) -> Sampling {
        Sampling {
            per_pattern: self.config.per_pattern,
            exec: Exec::Sequential,
            ..Sampling::with_seed(seed)
        }
    }

    /// Sign of unit vectors in a definite space.
    fn definite_sign(&self) -> Sign {
        if self.space.s() == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn tuples(&self, seed: u64, pattern: &[Sign], count: usize) -> Result<Vec<Vec<RealVector<Q>>>> {
        (0..count)
            .map(|k| self.space.orthonormal_tuple(mix_seed(seed, k as u64, 0x5A), pattern, true))
            .collect()
    }

    fn tensor_for(&self, seed: u64) -> CurvatureTensor<Q> {
        match &self.system {
            Some(sys) => sys.random_element(seed),
            None => random_tensor(&self.space, seed, true),
        }
    }

    fn checks_on(&self, r: &CurvatureTensor<Q>, seed: u64) -> Vec<(String, Outcome)> {
        match &self.system {
            Some(sys) => self.hypothesis_checks(sys, r, seed),
            None => self.contrapositive_checks(r, seed),
        }
    }

    fn hypothesis_checks(&self, sys: &ConstraintSystem, r: &CurvatureTensor<Q>, seed: u64) -> Vec<(String, Outcome)> {
        let mut out = Vec::new();
        let cond = sys.condition;
        out.push((
            format!("hypothesis {} on 30 fresh configurations", cond.statement()),
            from_result(sys.violation(r, seed, 30).map(|v| {
                outcome(v.is_none(), || format!("value {} on a fresh configuration", v.unwrap_or_default()))
            })),
        ));
        let sampling = self.sampling(seed);
        let constancy = |label: &str, v: Result<ConstancyVerdict<Q>>| {
            (
                label.to_string(),
                from_result(v.map(|v| match v {
                    ConstancyVerdict::Constant { .. } => Outcome::Pass,
                    ConstancyVerdict::Nonconstant { witness } => Outcome::Fail(format!(
                        "{}: values {} and {} at {}",
                        witness.label,
                        witness.values[0],
                        witness.values[1],
                        vecs(&witness.vectors.iter().collect::<Vec<_>>())
                    )),
                })),
            )
        };
        match self.theorem {
            TheoremId::Lemma1 => {
                out.push(constancy("constant H", constant_holomorphic(r, &sampling)));
                out.extend(self.lemma1_identities(r, seed));
            }
            TheoremId::Lemma2 => {
                out.push(constancy("constant H", constant_holomorphic(r, &sampling)));
                out.extend(self.lemma2_identities(r, seed));
            }
            TheoremId::ThmA => out.push(constancy("constant antiholomorphic K", constant_antiholomorphic(r, &sampling))),
            TheoremId::Thm3 => out.push(constancy("constant biholomorphic H(X,Y)", constant_biholomorphic(r, &sampling))),
            TheoremId::Thm6 => {
                out.push(constancy("constant antiholomorphic K", constant_antiholomorphic(r, &sampling)));
                out.push((
                    "Lemma 3 a), b), c) all hold".to_string(),
                    from_result(lemma3_check(r, &sampling).map(|rep| {
                        outcome(rep.agree() && rep.a && rep.b && rep.c, || {
                            format!("a) {}, b) {}, c) {}", rep.a, rep.b, rep.c)
                        })
                    })),
                ));
            }
            _ => unreachable!("no condition"),
        }
        out
    }

    fn lemma1_identities(&self, r: &CurvatureTensor<Q>, seed: u64) -> Vec<(String, Outcome)> {
        let pairs = match self.tuples(seed, &[Sign::Plus, Sign::Minus], self.config.samples) {
            Ok(p) => p,
            Err(e) => return vec![("antiholomorphic (+,-) pairs".into(), Outcome::Fail(e.to_string()))],
        };
        let terms: Result<Vec<Lemma1Terms<Q>>> = pairs.iter().map(|p| Lemma1Terms::compute(r, &p[0], &p[1])).collect();
        let terms = match terms {
            Ok(t) => t,
            Err(e) => return vec![("Lemma 1 terms".into(), Outcome::Fail(e.to_string()))],
        };
        let mut out = Vec::new();
        let zero_on = |label: &str, pick: &dyn Fn(&Lemma1Terms<Q>) -> Q| {
            let bad = terms.iter().position(|t| !pick(t).is_zero());
            (
                format!("{label} on {} pairs", pairs.len()),
                outcome(bad.is_none(), || {
                    let k = bad.unwrap_or(0);
                    format!("value {} at x, a = {}", pick(&terms[k]), vecs(&[&pairs[k][0], &pairs[k][1]]))
                }),
            )
        };
        out.push(zero_on("Eq.(2)", &|t| t.eq2.clone()));
        out.push(zero_on("Eq.(3)", &|t| t.eq3.clone()));
        out.push(zero_on("Eq.(4)", &|t| t.eq4.clone()));
        let h: Result<Vec<(Q, Q)>> = pairs
            .iter()
            .map(|p| Ok((r.holomorphic_sectional(&p[0])?, r.holomorphic_sectional(&p[1])?)))
            .collect();
        out.push((
            format!("Eq.(5) H(x) = H(a) on {} pairs", pairs.len()),
            from_result(h.map(|h| {
                let bad = h.iter().position(|(a, b)| a != b);
                outcome(bad.is_none(), || {
                    let k = bad.unwrap_or(0);
                    format!("H(x) = {}, H(a) = {} at {}", h[k].0, h[k].1, vecs(&[&pairs[k][0], &pairs[k][1]]))
                })
            })),
        ));
        out
    }

    fn lemma2_identities(&self, r: &CurvatureTensor<Q>, seed: u64) -> Vec<(String, Outcome)> {
        let s = self.definite_sign();
        let mut out = Vec::new();
        let res = self.tuples(seed, &[s, s], self.config.samples).and_then(|pairs| {
            for p in &pairs {
                let poly = lemma2_rotation_coefficients(r, &p[0], &p[1])?;
                if !poly.is_zero() {
                    return Ok(Outcome::Fail(format!("nonzero rotation polynomial at {}", vecs(&[&p[0], &p[1]]))));
                }
            }
            Ok(Outcome::Pass)
        });
        out.push(("rotated hypothesis vanishes identically".into(), from_result(res)));
        if self.space.m() == 2 {
            let res = self.tuples(seed, &[s, s], self.config.samples).map(|pairs| {
                let bad = pairs.iter().find_map(|p| {
                    let (a, b) = lemma2_terms(r, &p[0], &p[1]);
                    let five = Q::from_i64(5);
                    let three = Q::from_i64(3);
                    let l = five.clone() * a.clone() - three.clone() * b.clone();
                    let rr = three * a - five * b;
                    (!l.is_zero() || !rr.is_zero()).then(|| format!("residuals {l}, {rr} at {}", vecs(&[&p[0], &p[1]])))
                });
                bad.map_or(Outcome::Pass, Outcome::Fail)
            });
            out.push(("5/3 relation pair".into(), from_result(res)));
        }
        out
    }

    fn contrapositive_checks(&self, r: &CurvatureTensor<Q>, seed: u64) -> Vec<(String, Outcome)> {
        let sampling = self.sampling(seed);
        let mut out = Vec::new();
        let verdict = match self.theorem {
            TheoremId::Thm1 | TheoremId::Thm5 => constant_holomorphic(r, &sampling),
            TheoremId::Thm4 => constant_biholomorphic(r, &sampling),
            _ => constant_antiholomorphic(r, &sampling),
        };
        let nonconstant = match verdict {
            Ok(v) => !v.is_constant(),
            Err(e) => {
                out.push(("classify".into(), Outcome::Fail(e.to_string())));
                return out;
            }
        };
        match self.theorem {
            TheoremId::Thm1 => {
                out.push(("Eq.(6) forced identities violated".into(), self.thm1_forced(r, seed, nonconstant)));
                out.push(self.probe_check("H unbounded", r, seed, ProbeFamily::Holomorphic, None, Direction::Either, nonconstant));
            }
            TheoremId::Thm2 => {
                out.push(self.probe_check(
                    "K unbounded above",
                    r,
                    seed,
                    ProbeFamily::Antiholomorphic,
                    None,
                    Direction::Above,
                    nonconstant,
                ));
            }
            TheoremId::Remark1 => {
                for (sig, dir) in remark1_variants() {
                    out.push(self.probe_check(
                        &format!("K on {} planes unbounded {}", sig, dir_label(dir)),
                        r,
                        seed,
                        ProbeFamily::Antiholomorphic,
                        Some(sig),
                        dir,
                        nonconstant,
                    ));
                }
            }
            TheoremId::Thm4 => {
                out.push(self.probe_check(
                    "H(X,Y) unbounded above",
                    r,
                    seed,
                    ProbeFamily::Biholomorphic,
                    None,
                    Direction::Above,
                    nonconstant,
                ));
            }
            TheoremId::Thm5 => out.extend(self.thm5_checks(r, seed, nonconstant)),
            TheoremId::Thm7 => out.extend(self.thm7_checks(r, seed, nonconstant)),
            _ => unreachable!("hypothesis theorem"),
        }
        out
    }

    fn thm1_forced(&self, r: &CurvatureTensor<Q>, seed: u64, nonconstant: bool) -> Outcome {
        if !nonconstant {
            return Outcome::Skip;
        }
        from_result(self.tuples(seed, &[Sign::Plus, Sign::Minus], self.config.samples).and_then(|pairs| {
            for p in &pairs {
                let poly = theorem1_coefficients(r, &p[0], &p[1])?;
                if !bound_forced_identities(&poly, 2).hold(2, 0.0) {
                    return Ok(Outcome::Pass);
                }
            }
            Ok(Outcome::Fail(format!("forced identities hold on all {} pairs", pairs.len())))
        }))
    }

    #[allow(clippy::too_many_arguments)]
    fn probe_check(
        &self,
        label: &str,
        r: &CurvatureTensor<Q>,
        seed: u64,
        family: ProbeFamily,
        restriction: Option<PlaneSignature>,
        direction: Direction,
        nonconstant: bool,
    ) -> (String, Outcome) {
        if !nonconstant {
            return (label.to_string(), Outcome::Skip);
        }
        if let Some(sig) = restriction {
            if !remark1_realizable(&self.space, sig) {
                return (label.to_string(), Outcome::Skip);
            }
        }
        let rf = r.to_f64();
        let cfg = ProbeConfig {
            threshold: self.config.threshold,
            pairs: self.config.probe_pairs,
            seed,
            families: vec![family],
            direction,
            restriction,
            exec: Exec::Sequential,
            ..ProbeConfig::default()
        };
        let o = from_result(probe_unboundedness(&rf, &cfg).map(|res| match res {
            ProbeOutcome::Unbounded(w) => outcome(w.reverifies(&rf), || {
                format!("witness at t = {} does not reverify (stored {})", w.t, w.value)
            }),
            ProbeOutcome::BoundedSoFar { maxima, evaluations } => Outcome::Fail(format!(
                "bounded so far after {evaluations} evaluations, max |value| = {}",
                maxima.first().map_or(0.0, |m| m.1)
            )),
        }));
        (format!("{label} (threshold {:e})", self.config.threshold), o)
    }

    fn thm5_checks(&self, r: &CurvatureTensor<Q>, seed: u64, nonconstant: bool) -> Vec<(String, Outcome)> {
        let s = self.definite_sign();
        let pairs = match self.tuples(seed, &[s, s], self.config.samples.min(20)) {
            Ok(p) => p,
            Err(e) => return vec![("antiholomorphic pairs".into(), Outcome::Fail(e.to_string()))],
        };
        let mut out = Vec::new();
        let mut expansions = Vec::new();
        let mut ingredients = Outcome::Pass;
        for p in &pairs {
            match (theorem5_expansion(r, &p[0], &p[1]), Theorem5Terms::compute(r, &p[0], &p[1])) {
                (Ok(e), Ok(t)) => {
                    if e.re() != t.real_polynomial() || e.im() != t.imaginary_polynomial() {
                        ingredients = Outcome::Fail(format!("expansion differs from direct terms at {}", vecs(&[&p[0], &p[1]])));
                    }
                    expansions.push(e);
                }
                (Err(e), _) | (_, Err(e)) => {
                    ingredients = Outcome::Fail(e.to_string());
                    break;
                }
            }
        }
        out.push((format!("Eqs.(12)-(15) terms by direct evaluation on {} pairs", pairs.len()), ingredients));
        if self.space.m() == 2 {
            let mut rel = Outcome::Pass;
            for p in &pairs {
                let (a, b) = lemma2_terms(r, &p[0], &p[1]);
                let poly = match lemma2_rotation_coefficients(r, &p[0], &p[1]) {
                    Ok(p) => p,
                    Err(e) => {
                        rel = Outcome::Fail(e.to_string());
                        break;
                    }
                };
                let two = Q::from_i64(2);
                let five = Q::from_i64(5);
                let three = Q::from_i64(3);
                let t1 = -(two.clone() * (five.clone() * a.clone() - three.clone() * b.clone()));
                let t3 = two * (three * a - five * b);
                if poly.coeff(1) != t1 || poly.coeff(3) != t3 {
                    rel = Outcome::Fail(format!("rotation coefficients differ at {}", vecs(&[&p[0], &p[1]])));
                    break;
                }
            }
            out.push(("5/3 relation pair coefficients by direct evaluation".into(), rel));
        }
        for (label, part) in [("Eq.(12)/§3 real part unbounded", 0usize), ("imaginary part unbounded", 1)] {
            let o = if !nonconstant {
                Outcome::Skip
            } else {
                let violated = expansions.iter().any(|e| {
                    let p = if part == 0 { e.re() } else { e.im() };
                    !bound_forced_identities(&p, 2).hold(2, 0.0)
                });
                outcome(violated, || format!("forced identities hold on all {} pairs", expansions.len()))
            };
            out.push((label.to_string(), o));
        }
        out
    }

    fn thm7_checks(&self, r: &CurvatureTensor<Q>, seed: u64, nonconstant: bool) -> Vec<(String, Outcome)> {
        let s = self.definite_sign();
        let triples = match self.tuples(seed, &[s, s, s], self.config.samples.min(20)) {
            Ok(p) => p,
            Err(e) => return vec![("antiholomorphic triples".into(), Outcome::Fail(e.to_string()))],
        };
        let mut out = Vec::new();
        let mut expansions = Vec::new();
        let mut ingredients = Outcome::Pass;
        for t in &triples {
            let (x, y, z) = (&t[0], &t[1], &t[2]);
            match theorem7_expansion(r, x, y, z) {
                Ok(e) => {
                    let re = TPolynomial::new(vec![r.r(x, y, y, x), Q::from_i64(0), -r.r(x, z, z, x)]);
                    let im = TPolynomial::new(vec![Q::from_i64(0), Q::from_i64(2) * r.r(x, y, z, x)]);
                    if e.re() != re || e.im() != im {
                        ingredients = Outcome::Fail(format!("expansion differs from direct terms at {}", vecs(&[x, y, z])));
                    }
                    expansions.push(e);
                }
                Err(e) => {
                    ingredients = Outcome::Fail(e.to_string());
                    break;
                }
            }
        }
        out.push((format!("K^C(x, y+itz) terms by direct evaluation on {} triples", triples.len()), ingredients));
        for (label, part) in [("real part unbounded on one side (Lemma 3 b) fails)", 0usize), ("imaginary part unbounded on one side (Lemma 3 a) fails)", 1)] {
            let o = if !nonconstant {
                Outcome::Skip
            } else {
                let violated = expansions.iter().any(|e| {
                    let p = if part == 0 { e.re() } else { e.im() };
                    !bound_forced_identities(&p, 1).hold(1, 0.0)
                });
                outcome(violated, || format!("forced identities hold on all {} triples", expansions.len()))
            };
            out.push((label.to_string(), o));
        }
        out
    }

    fn models(&self) -> [(String, CurvatureTensor<Q>); 2] {
        let c = Q::from_i64(MODEL_C);
        [
            (format!("c*pi1 (c = {MODEL_C})"), model_constant_sectional(&self.space, &c)),
            (format!("space form (c = {MODEL_C})"), model_complex_space_form(&self.space, &c)),
        ]
    }

    /// Expected bounds for the two models: (pi1, space form).
    fn model_values(&self) -> (f64, f64) {
        let c = MODEL_C as f64;
        match self.theorem {
            TheoremId::Thm1 | TheoremId::Thm5 => (c, c),
            TheoremId::Thm4 => (0.0, c / 2.0),
            _ => (c, c / 4.0),
        }
    }

    fn model_checks(&self) -> Vec<(String, Outcome)> {
        let mut out = Vec::new();
        let (pi1_value, form_value) = self.model_values();
        for ((name, model), expected) in self.models().into_iter().zip([pi1_value, form_value]) {
            if let Some(sys) = &self.system {
                out.push((
                    format!("model {name} satisfies the hypothesis"),
                    from_result(sys.violation(&model, self.config.seed, 30).map(|v| {
                        outcome(v.is_none(), || format!("value {} on a fresh configuration", v.unwrap_or_default()))
                    })),
                ));
                continue;
            }
            match self.theorem {
                TheoremId::Thm5 | TheoremId::Thm7 => out.push(self.definite_model_check(&name, &model)),
                TheoremId::Remark1 => {
                    for sig in [PlaneSignature::PlusPlus, PlaneSignature::MinusMinus] {
                        if remark1_realizable(&self.space, sig) {
                            out.push(self.model_probe(&name, &model, expected, Some(sig), Direction::Either));
                        }
                    }
                }
                _ => out.push(self.model_probe(&name, &model, expected, None, Direction::Either)),
            }
        }
        out
    }

    fn model_probe(
        &self,
        name: &str,
        model: &CurvatureTensor<Q>,
        expected: f64,
        restriction: Option<PlaneSignature>,
        direction: Direction,
    ) -> (String, Outcome) {
        let family = match self.theorem {
            TheoremId::Thm1 => ProbeFamily::Holomorphic,
            TheoremId::Thm4 => ProbeFamily::Biholomorphic,
            _ => ProbeFamily::Antiholomorphic,
        };
        let cfg = ProbeConfig {
            threshold: self.config.threshold,
            pairs: self.config.probe_pairs,
            seed: self.config.seed,
            families: vec![family],
            direction,
            restriction,
            exec: self.config.exec,
            ..ProbeConfig::default()
        };
        let label = match restriction {
            Some(sig) => format!("model {name}: {family} on {sig} planes bounded, max |value| = {expected}"),
            None => format!("model {name}: {family} bounded, max |value| = {expected}"),
        };
        let o = from_result(probe_unboundedness(&model.to_f64(), &cfg).map(|res| match res {
            ProbeOutcome::BoundedSoFar { maxima, .. } => {
                let max = maxima.first().map_or(0.0, |m| m.1);
                outcome((max - expected).abs() <= 1e-6 * expected.max(1.0), || format!("max |value| = {max}"))
            }
            ProbeOutcome::Unbounded(w) => Outcome::Fail(format!("value {} at t = {}", w.value, w.t)),
        }));
        (label, o)
    }

    fn definite_model_check(&self, name: &str, model: &CurvatureTensor<Q>) -> (String, Outcome) {
        let s = self.definite_sign();
        let c = Q::from_i64(MODEL_C);
        let expected_value = if name.starts_with("c*pi1") || self.theorem == TheoremId::Thm5 {
            c
        } else {
            c / Q::from_i64(4)
        };
        let mult = if self.theorem == TheoremId::Thm5 { 2 } else { 1 };
        let target = TPolynomial::one_minus_t2_pow(mult).scale(&expected_value);
        let label = if mult == 2 {
            format!("model {name}: Re H^C numerator = {expected_value}(1-t^2)^2, Im = 0")
        } else {
            format!("model {name}: Re K^C numerator = {expected_value}(1-t^2), Im = 0")
        };
        let len = if mult == 2 { 2 } else { 3 };
        let res = self.tuples(self.config.seed, &vec![s; len], self.config.samples.min(20)).and_then(|ts| {
            for t in &ts {
                let e = if mult == 2 {
                    theorem5_expansion(model, &t[0], &t[1])?
                } else {
                    theorem7_expansion(model, &t[0], &t[1], &t[2])?
                };
                if e.re() != target || !e.im().is_zero() {
                    return Ok(Outcome::Fail(format!("numerator differs at {}", vecs(&t.iter().collect::<Vec<_>>()))));
                }
            }
            Ok(Outcome::Pass)
        });
        (label, from_result(res))
    }
}

fn remark1_variants() -> [(PlaneSignature, Direction); 4] {
    [
        (PlaneSignature::PlusPlus, Direction::Above),
        (PlaneSignature::PlusPlus, Direction::Below),
        (PlaneSignature::MinusMinus, Direction::Above),
        (PlaneSignature::MinusMinus, Direction::Below),
    ]
}

fn remark1_realizable<T: Scalar>(space: &HermitianSpace<T>, sig: PlaneSignature) -> bool {
    let y = if sig == PlaneSignature::PlusPlus { Sign::Plus } else { Sign::Minus };
    space.realizable(&[Sign::Plus, Sign::Minus, y], true)
}

fn dir_label(d: Direction) -> &'static str {
    match d {
        Direction::Above => "above",
        Direction::Below => "below",
        Direction::Either => "in absolute value",
    }
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
}

/// Runs the checks for `theorem`; trials run on `config.exec` and the
/// report does not depend on it.
pub fn verify(theorem: TheoremId, space: &HermitianSpace<Q>, config: &VerifyConfig) -> Result<TheoremReport> {
    let ctx = Context::new(theorem, space.clone(), config)?;
    let mut notes = Vec::new();
    if let Some(sys) = &ctx.system {
        notes.push((
            "solution-space".to_string(),
            format!(
                "condition {}, dimension {}, rank {}, instantiations {}",
                sys.condition,
                sys.dimension(),
                sys.rank,
                sys.instantiations
            ),
        ));
    }
    let mut order: Vec<String> = Vec::new();
    let mut tallies: Vec<Tally> = Vec::new();
    let mut failure: Option<Failure> = None;
    let mut record = |label: String, o: Outcome, trial: Option<usize>, tensor: &CurvatureTensor<Q>| {
        let k = match order.iter().position(|l| *l == label) {
            Some(k) => k,
            None => {
                order.push(label.clone());
                tallies.push(Tally::default());
                order.len() - 1
            }
        };
        match o {
            Outcome::Pass => tallies[k].passed += 1,
            Outcome::Skip => tallies[k].skipped += 1,
            Outcome::Fail(reason) => {
                tallies[k].failed += 1;
                if failure.is_none() {
                    failure = Some(Failure {
                        trial,
                        check: label,
                        reason,
                        tensor: tensor.clone(),
                    });
                }
            }
        }
    };
    let models = ctx.models();
    for (label, o) in ctx.model_checks() {
        let tensor = if label.contains("space form") { &models[1].1 } else { &models[0].1 };
        record(label, o, None, tensor);
    }
    let trials = config.exec.map(config.trials, |t| {
        let seed = trial_seed(config.seed, t);
        let r = ctx.tensor_for(seed);
        let checks = ctx.checks_on(&r, seed);
        (r, checks)
    });
    for (t, (r, checks)) in trials.into_iter().enumerate() {
        for (label, o) in checks {
            record(label, o, Some(t), &r);
        }
    }
    let checks = order
        .into_iter()
        .zip(tallies)
        .map(|(label, t)| CheckLine {
            label,
            status: if t.failed > 0 {
                Status::Fail
            } else if t.passed == 0 {
                Status::Skip
            } else {
                Status::Pass
            },
            passed: t.passed,
            failed: t.failed,
            skipped: t.skipped,
        })
        .collect();
    Ok(TheoremReport {
        theorem,
        m: space.m(),
        s: space.s(),
        trials: config.trials,
        seed: config.seed,
        notes,
        checks,
        failure,
    })
}
