//! Golden cases shared by the golden and acceptance targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn corpus(name: &str) -> String {
    root().join("corpus").join(name).to_string_lossy().into_owned()
}

pub const CASES: &[(&str, &[&str], i32)] = &[
    ("generate_space_form_m3s0", &["generate", "--model", "space-form", "--c", "4", "--m", "3", "--s", "0"], 0),
    ("generate_pi1_m2s1", &["generate", "--model", "pi1", "--c", "3", "--m", "2", "--s", "1"], 0),
    ("generate_random_m2s1", &["generate", "--model", "random", "--m", "2", "--s", "1", "--seed", "4", "--bianchi"], 0),
    ("generate_solution_eq1_m2s1", &["generate", "--model", "solution", "--condition", "eq1", "--m", "2", "--s", "1", "--seed", "7"], 0),
    ("check_symmetries_random_m3s1", &["check-symmetries", "@random_m3s1.json"], 0),
    ("check_symmetries_no_bianchi", &["check-symmetries", "@no_bianchi_m2s0.json"], 0),
    ("check_symmetries_broken", &["check-symmetries", "@broken_symmetry_m1s0.json"], 1),
    ("classify_space_form_m3s0", &["classify", "@space_form_m3s0.json"], 0),
    ("classify_sparse_pi1_m2s1", &["classify", "@sparse_pi1_m2s1.json"], 0),
    ("classify_rotated_j_m2s0", &["classify", "@rotated_j_m2s0.json"], 0),
    ("classify_random_m3s1", &["classify", "@random_m3s1.json", "--seed", "3"], 0),
    ("classify_random_m3s0_float", &["classify", "@random_m3s0.json", "--backend", "float"], 0),
    ("expand_theorem1", &["expand", "@random_m2s1.json", "--family", "theorem1", "--seed", "2"], 0),
    ("expand_lemma1_solution", &["expand", "@solution_eq1_m2s1.json", "--family", "lemma1", "--seed", "2"], 0),
    ("expand_theorem5", &["expand", "@random_m2s0.json", "--family", "theorem5", "--seed", "2"], 0),
    ("expand_theorem5_space_form", &["expand", "@space_form_m3s0.json", "--family", "theorem5", "--seed", "2"], 0),
    ("expand_lemma2", &["expand", "@random_m2s0.json", "--family", "lemma2", "--seed", "2"], 0),
    ("expand_theorem7", &["expand", "@random_m3s0.json", "--family", "theorem7", "--seed", "2"], 0),
    ("probe_pi1_m2s1", &["probe", "@pi1_m2s1.json"], 0),
    ("probe_random_m2s1", &["probe", "@random_m2s1.json"], 0),
    ("probe_random_m3s1_biholomorphic", &["probe", "@random_m3s1.json", "--family", "biholomorphic", "--backend", "exact", "--pairs", "4"], 0),
    ("lemma3_space_form_m3s0", &["lemma3", "@space_form_m3s0.json"], 0),
    ("lemma3_random_m3s0", &["lemma3", "@random_m3s0.json"], 0),
    ("verify_lemma1_m2s1", &["verify", "--theorem", "lemma1", "--m", "2", "--s", "1", "--trials", "20", "--seed", "7"], 0),
    ("verify_thm1_m2s1", &["verify", "--theorem", "thm1", "--m", "2", "--s", "1", "--trials", "20", "--seed", "7"], 0),
    ("verify_thmA_m3s1", &["verify", "--theorem", "thmA", "--m", "3", "--s", "1", "--trials", "4", "--seed", "7"], 0),
    ("verify_remark1_m4s2", &["verify", "--theorem", "remark1", "--m", "4", "--s", "2", "--trials", "3", "--seed", "7"], 0),
    ("verify_thm5_m2s0", &["verify", "--theorem", "thm5", "--m", "2", "--s", "0", "--trials", "5", "--seed", "7"], 0),
    ("verify_thm7_m3s0", &["verify", "--theorem", "thm7", "--m", "3", "--s", "0", "--trials", "5", "--seed", "7"], 0),
    ("verify_thm6_m2s1_hypothesis", &["verify", "--theorem", "thm6", "--m", "2", "--s", "1"], 2),
];

pub fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["ahcurv".to_string()];
    argv.extend(args.iter().map(|a| match a.strip_prefix('@') {
        Some(file) => corpus(file),
        None => a.to_string(),
    }));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ahcurv_cli::run(argv, &mut out, &mut err);
    let mut text = String::from_utf8(out).expect("utf-8 output");
    if !err.is_empty() {
        text.push_str("--- stderr\n");
        text.push_str(&String::from_utf8(err).expect("utf-8 stderr"));
    }
    (code, text)
}

/// Runs one case and compares against its expected file; `Ok(false)` on a
/// byte mismatch.
pub fn matches_golden(name: &str, args: &[&str], want_code: i32) -> Result<bool, String> {
    let (code, text) = run(args);
    if code != want_code {
        return Err(format!("{name}: exit code {code}, expected {want_code}"));
    }
    let path = root().join("expected").join(format!("{name}.out"));
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(want == text)
}
