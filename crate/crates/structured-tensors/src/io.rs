//! JSON file formats and the byte-stable report writer.
//!
//! Formats:
//! - tensor: `{"order": m, "dim": n, "entries": [{"alpha": [...], "value": v}, ...]}`
//!   (alphas unique, graded-lex sorted on write)
//! - decomposition: `{"dim": n, "weights": [...], "vectors": [[...], ...]}`
//! - generating vector: `{"order": m, "dim": n, "h": [...]}`
//!
//! Reports serialize with floats at 17 significant digits and fixed field
//! order, so identical inputs produce identical bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::GeneratingVector;
use crate::multi_index::MultiIndex;
use crate::tensor::{DecompositionList, SymmetricTensor};

#[derive(Serialize, Deserialize)]
struct EntryJson {
    alpha: Vec<u32>,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    order: usize,
    dim: usize,
    entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    dim: usize,
    weights: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct GeneratingJson {
    order: usize,
    dim: usize,
    h: Vec<f64>,
}

fn malformed(field: &str, message: impl ToString) -> Error {
    Error::MalformedInput {
        field: field.into(),
        message: message.to_string(),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| malformed("root", e))
}

pub fn load_tensor(path: &Path) -> Result<SymmetricTensor> {
    let j: TensorJson = parse(path)?;
    if j.order < 2 || j.dim < 2 {
        return Err(malformed("order/dim", "order and dim must be at least 2"));
    }
    let mut a = SymmetricTensor::zero(j.order, j.dim);
    let mut seen = std::collections::BTreeSet::new();
    for (i, e) in j.entries.iter().enumerate() {
        if e.alpha.len() != j.dim {
            return Err(malformed(
                &format!("entries[{i}].alpha"),
                format!("length {} but dim is {}", e.alpha.len(), j.dim),
            ));
        }
        let mi = MultiIndex::new(e.alpha.clone());
        if mi.degree() != j.order {
            return Err(malformed(
                &format!("entries[{i}].alpha"),
                format!("degree {} but order is {}", mi.degree(), j.order),
            ));
        }
        if !seen.insert(mi.clone()) {
            return Err(malformed(
                &format!("entries[{i}].alpha"),
                "duplicate multi-index",
            ));
        }
        if !e.value.is_finite() {
            return Err(malformed(&format!("entries[{i}].value"), "not finite"));
        }
        a.set(mi, e.value)?;
    }
    Ok(a)
}

pub fn save_tensor(path: &Path, a: &SymmetricTensor) -> Result<()> {
    let j = TensorJson {
        order: a.order(),
        dim: a.dim(),
        // BTreeMap iteration is already graded-lex
        entries: a
            .entries()
            .map(|(alpha, &value)| EntryJson {
                alpha: alpha.exponents().to_vec(),
                value,
            })
            .collect(),
    };
    fs::write(path, to_stable_json(&j)?)?;
    Ok(())
}

pub fn load_decomposition(path: &Path) -> Result<DecompositionList> {
    let j: DecompositionJson = parse(path)?;
    if j.vectors.is_empty() {
        return Err(malformed("vectors", "decomposition must be nonempty"));
    }
    if j.weights.len() != j.vectors.len() {
        return Err(malformed(
            "weights",
            format!("{} weights for {} vectors", j.weights.len(), j.vectors.len()),
        ));
    }
    for (i, v) in j.vectors.iter().enumerate() {
        if v.len() != j.dim {
            return Err(malformed(
                &format!("vectors[{i}]"),
                format!("length {} but dim is {}", v.len(), j.dim),
            ));
        }
    }
    Ok(DecompositionList::new(j.vectors, Some(j.weights)))
}

pub fn save_decomposition(path: &Path, dec: &DecompositionList) -> Result<()> {
    let j = DecompositionJson {
        dim: dec.dim(),
        weights: dec.weights.clone(),
        vectors: dec.vectors.clone(),
    };
    fs::write(path, to_stable_json(&j)?)?;
    Ok(())
}

pub fn load_generating(path: &Path) -> Result<GeneratingVector> {
    let j: GeneratingJson = parse(path)?;
    GeneratingVector::new(j.h, j.order, j.dim)
}

pub fn save_generating(path: &Path, h: &GeneratingVector) -> Result<()> {
    let j = GeneratingJson {
        order: h.order,
        dim: h.dim,
        h: h.values.clone(),
    };
    fs::write(path, to_stable_json(&j)?)?;
    Ok(())
}

/// serde_json formatter printing every float with 17 significant digits.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

/// Byte-stable JSON: fixed field order (struct order) and 17-digit floats.
pub fn to_stable_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| malformed("serialize", e))?;
    String::from_utf8(buf).map_err(|e| malformed("serialize", e))
}

pub fn write_report<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    fs::write(path, to_stable_json(report)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::rank_one_pow;
    use tempfile::tempdir;

    #[test]
    fn tensor_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.json");
        let a = rank_one_pow(&[1.0, -2.0, 0.5], 4);
        save_tensor(&path, &a).unwrap();
        let b = load_tensor(&path).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_inputs_name_the_field() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(
            &path,
            r#"{"order": 4, "dim": 2, "entries": [{"alpha": [1, 2], "value": 1.0}]}"#,
        )
        .unwrap();
        match load_tensor(&path) {
            Err(Error::MalformedInput { field, .. }) => {
                assert_eq!(field, "entries[0].alpha")
            }
            other => panic!("expected malformed input, got {other:?}"),
        }
        fs::write(&path, "not json").unwrap();
        assert!(matches!(
            load_tensor(&path),
            Err(Error::MalformedInput { .. })
        ));
    }

    #[test]
    fn generating_roundtrip_and_length_check() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("h.json");
        let h = GeneratingVector::new(vec![1.0, 2.0, 4.0, 8.0, 16.0], 4, 2).unwrap();
        save_generating(&path, &h).unwrap();
        assert_eq!(load_generating(&path).unwrap(), h);

        fs::write(&path, r#"{"order": 4, "dim": 2, "h": [1.0, 2.0]}"#).unwrap();
        assert!(load_generating(&path).is_err());
    }

    #[test]
    fn decomposition_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("d.json");
        let dec = DecompositionList::new(
            vec![vec![1.0, 2.0], vec![0.5, -1.0]],
            Some(vec![1.0, 3.0]),
        );
        save_decomposition(&path, &dec).unwrap();
        assert_eq!(load_decomposition(&path).unwrap(), dec);
    }

    #[test]
    fn stable_json_is_deterministic() {
        let a = rank_one_pow(&[1.0, 3.0], 2);
        let j = TensorJson {
            order: a.order(),
            dim: a.dim(),
            entries: a
                .entries()
                .map(|(alpha, &value)| EntryJson {
                    alpha: alpha.exponents().to_vec(),
                    value,
                })
                .collect(),
        };
        let s1 = to_stable_json(&j).unwrap();
        let s2 = to_stable_json(&j).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.contains("1.0000000000000000e0"));
    }
}
