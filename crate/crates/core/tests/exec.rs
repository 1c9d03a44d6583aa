//! Sequential and parallel execution must give identical results.

use ahcurv::constancy::{constant_antiholomorphic, lemma3_check, Sampling};
use ahcurv::harness::constraints::{impose, ConditionId};
use ahcurv::harness::models::random_tensor;
use ahcurv::harness::probe::{probe_unboundedness, ProbeConfig};
use ahcurv::harness::verify::{verify, TheoremId, VerifyConfig};
use ahcurv::{Exec, HermitianSpace, Rational};

type Q = Rational;

const BOTH: [Exec; 2] = [Exec::Sequential, Exec::Parallel];

#[test]
fn impose_is_execution_independent() {
    let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
    let [a, b] = BOTH.map(|exec| impose(&sp, ConditionId::Eq1, 3, exec).unwrap());
    assert_eq!(a, b);
}

#[test]
fn classifiers_are_execution_independent() {
    let sp = HermitianSpace::<Q>::new(3, 0).unwrap();
    let r = random_tensor(&sp, 9, true);
    let [a, b] = BOTH.map(|exec| {
        let sampling = Sampling { exec, ..Sampling::with_seed(5) };
        (constant_antiholomorphic(&r, &sampling).unwrap(), lemma3_check(&r, &sampling).unwrap())
    });
    assert_eq!(a, b);
}

#[test]
fn probe_is_execution_independent() {
    let sp = HermitianSpace::<f64>::new(2, 1).unwrap();
    for seed in 0..4 {
        let r = random_tensor(&sp, seed, true);
        let [a, b] = BOTH.map(|exec| probe_unboundedness(&r, &ProbeConfig { exec, seed, ..ProbeConfig::default() }).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn reports_are_execution_independent() {
    let sp = HermitianSpace::<Q>::new(2, 1).unwrap();
    let [a, b] = BOTH.map(|exec| {
        let config = VerifyConfig { trials: 4, seed: 2, exec, ..VerifyConfig::default() };
        verify(TheoremId::Thm1, &sp, &config).unwrap().render()
    });
    assert_eq!(a, b);
}
