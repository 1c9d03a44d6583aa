//! Tensor files.
//!
//! A tensor file is a JSON object with a fixed set of keys:
//!
//! ```text
//! {
//!   "space": {"m": 2, "s": 1, "J": [["0", "-1", "0", "0"], ...]},
//!   "tensor": {
//!     "symmetrize": false,
//!     "bianchi": false,
//!     "entries": [
//!       [1, 2, 2, 1, "-3/4"]
//!     ]
//!   },
//!   "metadata": {"name": "space-form", "seed": 7}
//! }
//! ```
//!
//! - `J` is optional; when absent the canonical structure `J e1 = e2`,
//!   `J e3 = e4`, ... is used.
//! - Entry indices are 1-based. Values are rationals written as strings
//!   `"p"` or `"p/q"`; floats are rejected.
//! - An entry list without `symmetrize` must already carry every curvature
//!   symmetry. With `symmetrize` the listed components are averaged over the
//!   symmetry group (so a lone `[1,2,3,4,"1"]` contributes `1/8`), and with
//!   `bianchi` the first Bianchi identity is then projected in.
//! - Repeated indices: the last entry wins.
//! - `metadata` and both of its keys are optional. Unknown keys are errors.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{CurvatureError, Result};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::space::HermitianSpace;
use crate::tensor::CurvatureTensor;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Metadata {
    pub name: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorDocument {
    pub m: usize,
    pub s: i64,
    pub j: Option<Matrix<Rational>>,
    pub symmetrize: bool,
    pub bianchi: bool,
    /// 0-based indices.
    pub entries: Vec<([usize; 4], Rational)>,
    pub metadata: Metadata,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    m: usize,
    s: i64,
    #[serde(rename = "J")]
    j: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensor {
    #[serde(default)]
    symmetrize: bool,
    #[serde(default)]
    bianchi: bool,
    entries: Vec<(usize, usize, usize, usize, String)>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawMetadata {
    name: Option<String>,
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    space: RawSpace,
    tensor: RawTensor,
    #[serde(default)]
    metadata: RawMetadata,
}

fn rational(text: &str, at: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| CurvatureError::InvariantViolation {
        invariant: "rational-value",
        detail: format!("{at}: `{text}` is not of the form p or p/q"),
    })
}

impl TensorDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| CurvatureError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
        })?;
        let j = match raw.space.j {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, v)| rational(v, &format!("J[{}][{}]", r + 1, c + 1)))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut entries = Vec::with_capacity(raw.tensor.entries.len());
        for (k, (a, b, c, d, v)) in raw.tensor.entries.iter().enumerate() {
            let idx = [*a, *b, *c, *d];
            if let Some(&bad) = idx.iter().find(|&&i| i == 0) {
                return Err(CurvatureError::IndexOutOfRange { index: bad, dim: 2 * raw.space.m });
            }
            entries.push((idx.map(|i| i - 1), rational(v, &format!("entry {}", k + 1))?));
        }
        let doc = Self {
            m: raw.space.m,
            s: raw.space.s,
            j,
            symmetrize: raw.tensor.symmetrize,
            bianchi: raw.tensor.bianchi,
            entries,
            metadata: Metadata {
                name: raw.metadata.name,
                seed: raw.metadata.seed,
            },
        };
        doc.space()?;
        Ok(doc)
    }

    pub fn space(&self) -> Result<HermitianSpace<Rational>> {
        match &self.j {
            None => HermitianSpace::new(self.m, self.s),
            Some(j) => HermitianSpace::with_complex_structure(self.m, self.s, j.clone()),
        }
    }

    pub fn tensor(&self) -> Result<CurvatureTensor<Rational>> {
        CurvatureTensor::from_components(self.space()?, &self.entries, self.symmetrize, self.bianchi)
    }

    /// The tensor without symmetry validation.
    pub fn raw_tensor(&self) -> Result<CurvatureTensor<Rational>> {
        CurvatureTensor::assemble(self.space()?, &self.entries, self.symmetrize, self.bianchi)
    }

    /// All nonzero components, flags off. The complex structure is written
    /// out only when it is not the canonical one.
    pub fn from_tensor<T: Scalar>(r: &CurvatureTensor<T>, metadata: Metadata) -> Self {
        let sp = r.space();
        let j = (!sp.has_canonical_j()).then(|| {
            sp.complex_structure()
                .iter()
                .map(|row| row.iter().map(Scalar::to_rational).collect())
                .collect()
        });
        let entries = r
            .nonzero_entries()
            .into_iter()
            .map(|(idx, v)| (idx, v.to_rational()))
            .collect();
        Self {
            m: sp.m(),
            s: sp.s() as i64,
            j,
            symmetrize: false,
            bianchi: false,
            entries,
            metadata,
        }
    }

    /// Canonical text: fixed key order, one entry per line, entries in the
    /// order given.
    pub fn serialize(&self) -> String {
        let mut out = String::from("{\n");
        let _ = write!(out, "  \"space\": {{\"m\": {}, \"s\": {}", self.m, self.s);
        if let Some(j) = &self.j {
            out.push_str(", \"J\": [");
            for (r, row) in j.iter().enumerate() {
                if r > 0 {
                    out.push_str(", ");
                }
                let cells: Vec<String> = row.iter().map(|v| format!("\"{}\"", format_rational(v))).collect();
                let _ = write!(out, "[{}]", cells.join(", "));
            }
            out.push(']');
        }
        out.push_str("},\n  \"tensor\": {\n");
        let _ = writeln!(out, "    \"symmetrize\": {},", self.symmetrize);
        let _ = writeln!(out, "    \"bianchi\": {},", self.bianchi);
        if self.entries.is_empty() {
            out.push_str("    \"entries\": []\n");
        } else {
            out.push_str("    \"entries\": [\n");
            for (k, (idx, v)) in self.entries.iter().enumerate() {
                let sep = if k + 1 < self.entries.len() { "," } else { "" };
                let [a, b, c, d] = idx.map(|i| i + 1);
                let _ = writeln!(out, "      [{a}, {b}, {c}, {d}, \"{}\"]{sep}", format_rational(v));
            }
            out.push_str("    ]\n");
        }
        out.push_str("  }");
        let mut meta = Vec::new();
        if let Some(name) = &self.metadata.name {
            meta.push(format!("\"name\": {}", serde_json::to_string(name).unwrap_or_default()));
        }
        if let Some(seed) = self.metadata.seed {
            meta.push(format!("\"seed\": {seed}"));
        }
        if !meta.is_empty() {
            let _ = write!(out, ",\n  \"metadata\": {{{}}}", meta.join(", "));
        }
        out.push_str("\n}\n");
        out
    }
}
