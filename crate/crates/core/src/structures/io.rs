//! JSON files for structured matrices and vectors.
//!
//! ```json
//! {"kind": "toeplitz", "n": 2, "data": [[3, 0], [1, 0], [2, 0]]}
//! {"kind": "f_circulant", "n": 2, "f": [-1, 0], "data": [[1, 0], [2, 0]]}
//! {"kind": "sparse", "n": 2, "omega": [[0, 0], [1, 1]], "data": [[1, 0], [2, 0]]}
//! {"kind": "multilevel", "n": 6, "levels": [{"kind": "toeplitz", "n": 3}, {"kind": "toeplitz", "n": 2}], "data": [...]}
//! {"n": 2, "data": [[1, 0], [0, 1]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Floats are written with the
//! shortest representation that parses back to the same bits. Parsed
//! parameters are `Variable`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::{Kind, Level, SparsityPattern, StructuredMatrix};
use crate::arith::TrackedScalar;
use crate::error::{Error, Result};

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn as_complex(v: &Value, path: &str) -> Result<Complex64> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected [re, im]"))?;
    if arr.len() != 2 {
        return Err(schema(path, format!("expected [re, im], got {} numbers", arr.len())));
    }
    let re = arr[0].as_f64().ok_or_else(|| schema(&format!("{path}[0]"), "expected a number"))?;
    let im = arr[1].as_f64().ok_or_else(|| schema(&format!("{path}[1]"), "expected a number"))?;
    Ok(Complex64::new(re, im))
}

fn complex_list(v: &Value, path: &str) -> Result<Vec<Complex64>> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array of [re, im] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_complex(x, &format!("{path}[{i}]")))
        .collect()
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn parse_kind(obj: &Map<String, Value>, path: &str, n: usize) -> Result<Kind> {
    let name = field(obj, path, "kind")?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.kind"), "expected a string"))?;
    Ok(match name {
        "circulant" => Kind::Circulant,
        "f_circulant" => {
            let f = as_complex(field(obj, path, "f")?, &format!("{path}.f"))?;
            if f.norm() == 0.0 {
                return Err(schema(&format!("{path}.f"), "f must be nonzero"));
            }
            Kind::FCirculant { f }
        }
        "toeplitz" => Kind::Toeplitz,
        "hankel" => Kind::Hankel,
        "upper_triangular_toeplitz" => Kind::UpperTriangularToeplitz,
        "toeplitz_plus_hankel" | "tph" => Kind::ToeplitzPlusHankel,
        "symmetric" => Kind::Symmetric,
        "skew_symmetric" => Kind::SkewSymmetric,
        "sparse" => {
            let opath = format!("{path}.omega");
            let arr = field(obj, path, "omega")?
                .as_array()
                .ok_or_else(|| schema(&opath, "expected an array of [i, j] pairs"))?;
            let mut entries = Vec::with_capacity(arr.len());
            for (k, pair) in arr.iter().enumerate() {
                let epath = format!("{opath}[{k}]");
                let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| schema(&epath, "expected [i, j]"))?;
                entries.push((as_usize(&p[0], &epath)?, as_usize(&p[1], &epath)?));
            }
            Kind::Sparse(SparsityPattern::square(n, entries).map_err(|e| schema(&opath, e.to_string()))?)
        }
        "multilevel" => {
            let lpath = format!("{path}.levels");
            let arr = field(obj, path, "levels")?
                .as_array()
                .ok_or_else(|| schema(&lpath, "expected an array of levels"))?;
            let mut levels = Vec::with_capacity(arr.len());
            for (k, lv) in arr.iter().enumerate() {
                let p = format!("{lpath}[{k}]");
                let lobj = as_object(lv, &p)?;
                let ln = as_usize(field(lobj, &p, "n")?, &format!("{p}.n"))?;
                let lkind = parse_kind(lobj, &p, ln)?;
                levels.push(Level::new(lkind, ln).map_err(|e| schema(&p, e.to_string()))?);
            }
            Kind::Multilevel(levels)
        }
        other => return Err(schema(&format!("{path}.kind"), format!("unknown kind \"{other}\""))),
    })
}

pub fn parse_matrix(text: &str) -> Result<StructuredMatrix> {
    let root: Value = serde_json::from_str(text)?;
    let obj = as_object(&root, "$")?;
    let n = as_usize(field(obj, "$", "n")?, "$.n")?;
    if n == 0 {
        return Err(schema("$.n", "order must be positive"));
    }
    let kind = parse_kind(obj, "$", n)?;
    let data = complex_list(field(obj, "$", "data")?, "$.data")?;
    let expected = super::param_count(&kind, n);
    if data.len() != expected {
        return Err(schema(
            "$.data",
            format!("{} with n = {n} needs {expected} entries, got {}", kind.name(), data.len()),
        ));
    }
    StructuredMatrix::from_values(kind, n, &data).map_err(|e| schema("$", e.to_string()))
}

fn kind_fields(kind: &Kind, n: usize, obj: &mut Map<String, Value>) {
    obj.insert("kind".into(), json!(kind.name()));
    obj.insert("n".into(), json!(n));
    match kind {
        Kind::FCirculant { f } => {
            obj.insert("f".into(), complex_value(*f));
        }
        Kind::Sparse(p) => {
            obj.insert("omega".into(), json!(p.entries().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>()));
        }
        Kind::Multilevel(levels) => {
            let lv: Vec<Value> = levels
                .iter()
                .map(|l| {
                    let mut m = Map::new();
                    kind_fields(&l.kind, l.n, &mut m);
                    Value::Object(m)
                })
                .collect();
            obj.insert("levels".into(), Value::Array(lv));
        }
        _ => {}
    }
}

pub fn serialize_matrix(m: &StructuredMatrix) -> String {
    let mut obj = Map::new();
    kind_fields(m.kind(), m.n(), &mut obj);
    obj.insert("data".into(), Value::Array(m.data().iter().map(|x| complex_value(x.value)).collect()));
    Value::Object(obj).to_string()
}

pub fn parse_vector(text: &str) -> Result<Vec<TrackedScalar>> {
    let root: Value = serde_json::from_str(text)?;
    let obj = as_object(&root, "$")?;
    let n = as_usize(field(obj, "$", "n")?, "$.n")?;
    let data = complex_list(field(obj, "$", "data")?, "$.data")?;
    if data.len() != n {
        return Err(schema("$.data", format!("expected {n} entries, got {}", data.len())));
    }
    Ok(data.into_iter().map(TrackedScalar::variable).collect())
}

pub fn serialize_vector(v: &[TrackedScalar]) -> String {
    json!({
        "n": v.len(),
        "data": v.iter().map(|x| complex_value(x.value)).collect::<Vec<_>>(),
    })
    .to_string()
}
