use serde::{Deserialize, Serialize};

use super::field::PrimeField;
use super::AchievabilityError;

/// An `ℓ × m` generator matrix over `GF(q)`; row `k` is the `k`-th coded
/// symbol as a linear combination of the messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: PrimeField,
    m: usize,
    rows: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    q: u32,
    rows: Vec<Vec<i64>>,
}

impl LinearCode {
    pub fn new(q: u32, m: usize, rows: Vec<Vec<u32>>) -> Result<Self, AchievabilityError> {
        let field = PrimeField::new(q)?;
        for (k, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(AchievabilityError::RowLength { row: k, len: row.len(), m });
            }
            if let Some(&c) = row.iter().find(|&&c| c >= q) {
                return Err(AchievabilityError::Coefficient { value: c as i64, q });
            }
        }
        Ok(LinearCode { field, m, rows })
    }

    /// Sends every message uncoded.
    pub fn identity(q: u32, m: usize) -> Result<Self, AchievabilityError> {
        let rows = (0..m).map(|i| unit_row(m, i)).collect();
        Self::new(q, m, rows)
    }

    /// Parses `{"q": .., "rows": [[..], ..]}` for an instance with `m`
    /// messages.
    pub fn from_json(text: &str, m: usize) -> Result<Self, AchievabilityError> {
        let file: CodeFile = serde_json::from_str(text).map_err(|e| AchievabilityError::Json(e.to_string()))?;
        let mut rows = Vec::with_capacity(file.rows.len());
        for row in file.rows {
            let mut out = Vec::with_capacity(row.len());
            for c in row {
                if !(0..file.q as i64).contains(&c) {
                    return Err(AchievabilityError::Coefficient { value: c, q: file.q });
                }
                out.push(c as u32);
            }
            rows.push(out);
        }
        Self::new(file.q, m, rows)
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::json!({ "q": self.q(), "rows": self.rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_value()).expect("code serializes")
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Code length `ℓ`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<u32>) -> Result<(), AchievabilityError> {
        if row.len() != self.m {
            return Err(AchievabilityError::RowLength { row: self.rows.len(), len: row.len(), m: self.m });
        }
        if let Some(&c) = row.iter().find(|&&c| c >= self.q()) {
            return Err(AchievabilityError::Coefficient { value: c as i64, q: self.q() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(self.field, &mut rows).len()
    }
}

pub(crate) fn unit_row(m: usize, i: usize) -> Vec<u32> {
    let mut row = vec![0; m];
    row[i] = 1;
    row
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub(crate) fn rref(field: PrimeField, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}
