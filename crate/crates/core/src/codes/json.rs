use serde::{Deserialize, Serialize};

use super::LinearCode;
use crate::algebra::{Field, FieldSpec, Gf, Matrix};
use crate::error::{Error, Result};

/// Serialized form of a code: row-major generator entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDoc {
    pub field: FieldSpec,
    pub n: usize,
    pub gen: Vec<u32>,
    pub label: String,
}

impl CodeDoc {
    pub fn to_code(&self) -> Result<LinearCode> {
        let field = Field::from_spec(&self.field)?;
        self.to_code_in(&field)
    }

    /// Decode against an already constructed field (must match the field spec).
    pub fn to_code_in(&self, field: &Field) -> Result<LinearCode> {
        if field.spec() != self.field {
            return Err(Error::FieldMismatch);
        }
        if self.n == 0 && !self.gen.is_empty() || self.n > 0 && self.gen.len() % self.n != 0 {
            return Err(Error::Serde("generator length is not a multiple of n".into()));
        }
        let rows = if self.n == 0 { 0 } else { self.gen.len() / self.n };
        let entries: Vec<Gf> = self.gen.iter().map(|&x| Gf(x)).collect();
        if entries.iter().any(|x| !field.contains(*x)) {
            return Err(Error::Serde("entry outside the field".into()));
        }
        let g = Matrix::from_vec(field, rows, self.n, entries)?;
        Ok(LinearCode::new(g, self.label.clone()))
    }
}

impl LinearCode {
    pub fn to_doc(&self) -> CodeDoc {
        CodeDoc {
            field: self.field().spec(),
            n: self.len(),
            gen: self.generator().data().iter().map(|x| x.0).collect(),
            label: self.label().to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("code documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<LinearCode> {
        let doc: CodeDoc = serde_json::from_str(s)?;
        doc.to_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;

    #[test]
    fn round_trip_is_bit_exact() {
        for q in [4u64, 9, 13] {
            let f = Field::of_order(q).unwrap();
            let c = rs_code(&f, q as usize - 1, 3, None).unwrap();
            let s = c.to_json();
            let back = LinearCode::from_json(&s).unwrap();
            assert_eq!(back.generator(), c.generator());
            assert_eq!(back.to_json(), s);
        }
    }

    #[test]
    fn rejects_bad_entries() {
        let f = Field::prime(3).unwrap();
        let mut doc = LinearCode::full(&f, 2).to_doc();
        doc.gen[0] = 7;
        assert!(doc.to_code().is_err());
    }
}
