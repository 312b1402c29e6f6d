//! Instance files: a field, a dilation and a direction matrix, optionally with a claimed mask.
//!
//! ```json
//! { "field": {"n": 10, "k": 2}, "lambda": "t", "columns": ["1", "1/2*t"] }
//! { "field": {"n": 10, "k": 2}, "lambda": "t", "dim": 2,
//!   "columns": [["1", "0"], ["0", "1"]] }
//! ```

use serde_json::{json, Value};

use crate::codec::{fe_from_json, fe_to_json, field_from_json, field_to_json, get, mask_from_json, mask_to_json};
use crate::error::{Error, Result};
use crate::exactreal::{Field, FieldElement};
use crate::splinecore::{BoxSplineSpec, MaskSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub field: Field,
    pub lambda: FieldElement,
    pub dim: usize,
    /// Each column has `dim` entries.
    pub columns: Vec<Vec<FieldElement>>,
    pub mask: Option<MaskSpec>,
}

impl Instance {
    pub fn univariate(lambda: FieldElement, columns: Vec<FieldElement>) -> Self {
        Instance {
            field: lambda.field(),
            lambda,
            dim: 1,
            columns: columns.into_iter().map(|c| vec![c]).collect(),
            mask: None,
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = match v.get("field") {
            Some(f) => field_from_json(f)?,
            None => Field::RATIONAL,
        };
        let lambda = fe_from_json(get(v, "lambda")?, field)?;
        let dim = match v.get("dim") {
            Some(d) => {
                d.as_u64().filter(|&d| d > 0).ok_or_else(|| Error::Parse("dim must be a positive integer".into()))?
                    as usize
            }
            None => 1,
        };
        let raw = get(v, "columns")?.as_array().ok_or_else(|| Error::Parse("columns must be an array".into()))?;
        let mut columns = Vec::with_capacity(raw.len());
        for c in raw {
            if dim == 1 {
                columns.push(vec![fe_from_json(c, field)?]);
            } else {
                let entries = c.as_array().ok_or_else(|| Error::Parse("each column must be an array".into()))?;
                if entries.len() != dim {
                    return Err(Error::Parse(format!("column has {} entries, expected {dim}", entries.len())));
                }
                columns.push(entries.iter().map(|e| fe_from_json(e, field)).collect::<Result<Vec<_>>>()?);
            }
        }
        let mask = v.get("mask").map(|m| mask_from_json(m, field)).transpose()?;
        Ok(Instance { field, lambda, dim, columns, mask })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let columns: Vec<Value> = if self.dim == 1 {
            self.columns.iter().map(|c| fe_to_json(&c[0])).collect()
        } else {
            self.columns.iter().map(|c| Value::Array(c.iter().map(fe_to_json).collect())).collect()
        };
        let mut v = json!({
            "field": field_to_json(self.field),
            "lambda": fe_to_json(&self.lambda),
            "dim": self.dim,
            "columns": columns,
        });
        if let Some(m) = &self.mask {
            v["mask"] = mask_to_json(m);
        }
        v
    }

    /// Directions of a univariate instance.
    pub fn directions(&self) -> Result<Vec<FieldElement>> {
        if self.dim != 1 {
            return Err(Error::Precondition(format!("instance is {}-dimensional", self.dim)));
        }
        Ok(self.columns.iter().map(|c| c[0].clone()).collect())
    }

    pub fn box_spline(&self) -> Result<BoxSplineSpec> {
        BoxSplineSpec::new(self.field, self.columns.clone())
    }
}
