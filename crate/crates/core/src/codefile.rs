//! JSON interchange format for explicit codes.
//!
//! ```json
//! {
//!   "format": "pmrd-code",
//!   "version": 1,
//!   "q": 2, "N": 4, "k": 2, "count": 25,
//!   "construction": {"kind": "parallel", "q": 2, "n": 2, "k": 2, "d": 2, "s": 0},
//!   "blocks": [16, 9],
//!   "members": [["1000", "0100"], ...]
//! }
//! ```
//!
//! Each member is its canonical `k x N` generator, one string of `N` base-`q`
//! digits per row; a digit is the field element index.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdc::{canonicalize, Cdc, ParallelParams, Subspace, SubspaceCode};
use crate::finite_field::{Field, FieldError, Matrix};

pub const FORMAT_NAME: &str = "pmrd-code";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CodeFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed code file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format {0:?} version {1}")]
    Format(String, u32),
    #[error("member {member}: {msg}")]
    Member { member: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Construction {
    Parallel { q: u32, n: usize, k: usize, d: usize, s: usize },
}

impl From<ParallelParams> for Construction {
    fn from(p: ParallelParams) -> Self {
        Construction::Parallel {
            q: p.q,
            n: p.n,
            k: p.k,
            d: p.d,
            s: p.s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format: String,
    pub version: u32,
    pub q: u32,
    #[serde(rename = "N")]
    pub ambient: usize,
    pub k: usize,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<u64>,
    pub members: Vec<Vec<String>>,
}

fn encode_row(row: &[crate::finite_field::Elem]) -> String {
    row.iter()
        .map(|e| char::from_digit(e.index(), 36).expect("q <= 9"))
        .collect()
}

impl CodeFile {
    pub fn from_code(code: &Cdc, construction: Option<Construction>) -> Self {
        let members = code
            .members()
            .iter()
            .map(|m| {
                let g = m.generator();
                (0..g.rows()).map(|r| encode_row(g.row(r))).collect()
            })
            .collect();
        CodeFile {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            q: code.q(),
            ambient: code.ambient(),
            k: code.dim(),
            count: code.members().len() as u64,
            construction,
            blocks: code.blocks().iter().map(|r| r.end - r.start).collect(),
            members,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CodeFileError> {
        let file: CodeFile = serde_json::from_str(text)?;
        if file.format != FORMAT_NAME || file.version != FORMAT_VERSION {
            return Err(CodeFileError::Format(file.format, file.version));
        }
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<(), CodeFileError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CodeFileError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parses the member generators. Generators are canonicalized, so a
    /// file written by [`CodeFile::from_code`] reads back identically.
    pub fn to_code(&self, claimed_distance: usize) -> Result<Cdc, CodeFileError> {
        let field: Arc<Field> = Field::code_alphabet(self.q)?;
        let mut members = Vec::with_capacity(self.members.len());
        for (idx, rows) in self.members.iter().enumerate() {
            let err = |msg: String| CodeFileError::Member { member: idx, msg };
            if rows.len() != self.k {
                return Err(err(format!("expected {} rows, found {}", self.k, rows.len())));
            }
            let mut parsed = Vec::with_capacity(self.k);
            for row in rows {
                if row.chars().count() != self.ambient {
                    return Err(err(format!("row {row:?} does not have {} digits", self.ambient)));
                }
                let digits = row
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&d| d < self.q)
                            .ok_or_else(|| err(format!("invalid digit {c:?} for q = {}", self.q)))
                    })
                    .collect::<Result<Vec<u32>, _>>()?;
                parsed.push(digits);
            }
            let m = Matrix::from_rows(Arc::clone(&field), &parsed)?;
            let s: Subspace = canonicalize(&m).map_err(|e| err(e.to_string()))?;
            members.push(s);
        }
        let mut code = Cdc::new(self.q, self.ambient, self.k, claimed_distance, members)
            .map_err(|e| CodeFileError::Member { member: 0, msg: e.to_string() })?;
        if self.blocks.iter().sum::<u64>() == code.members().len() as u64 && !self.blocks.is_empty() {
            let mut start = 0;
            let ranges = self
                .blocks
                .iter()
                .map(|&b| {
                    let r = start..start + b;
                    start += b;
                    r
                })
                .collect();
            code = code.with_blocks(ranges);
        }
        if let Some(Construction::Parallel { q, n, k, d, s }) = self.construction {
            code.params = ParallelParams::new(q, n, k, d, s).ok();
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::assemble_parallel;

    #[test]
    fn round_trip_small_code() {
        let pc = assemble_parallel(3, 2, 2, 2, 0).unwrap();
        let code = pc.materialize(10_000).unwrap();
        let file = CodeFile::from_code(&code, Some(pc.params().into()));
        let back = CodeFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let code2 = back.to_code(2).unwrap();
        assert_eq!(code2.members(), code.members());
        assert_eq!(code2.blocks(), code.blocks());
        assert_eq!(code2.params, Some(pc.params()));
    }

    #[test]
    fn rejects_bad_members() {
        let base = r#"{"format":"pmrd-code","version":1,"q":2,"N":3,"k":2,"count":1,"members":[ROWS]}"#;
        let bad_digit = base.replace("ROWS", r#"["102","012"]"#);
        assert!(CodeFile::from_json(&bad_digit).unwrap().to_code(2).is_err());
        let short = base.replace("ROWS", r#"["10","01"]"#);
        assert!(CodeFile::from_json(&short).unwrap().to_code(2).is_err());
        let deficient = base.replace("ROWS", r#"["101","101"]"#);
        assert!(CodeFile::from_json(&deficient).unwrap().to_code(2).is_err());
        let ok = base.replace("ROWS", r#"["011","101"]"#);
        let code = CodeFile::from_json(&ok).unwrap().to_code(2).unwrap();
        assert_eq!(encode_row(code.members()[0].generator().row(0)), "101");
        let wrong = ok.replace("pmrd-code", "other");
        assert!(matches!(CodeFile::from_json(&wrong), Err(CodeFileError::Format(..))));
    }
}
