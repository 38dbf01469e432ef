//! JSON formats for lattices, filtrations, tensor subspaces and quadratic points.
//!
//! Rationals are JSON integers, strings like `"-3/4"`, or objects `{"n": .., "d": ..}`.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::algpoints::{IQInt, IQRing, IQVector};
use crate::error::{Error, Result};
use crate::exact::rational::{fmt_rational, parse_rational};
use crate::exact::{Int, QMatrix, Rational};
use crate::filtration::RFiltration;
use crate::lattice::Lattice;
use crate::tensor::TensorSubspace;

fn err(path: &str, msg: impl Into<String>) -> Error {
    Error::input(if path.is_empty() { "<root>" } else { path }, msg)
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| err(path, format!("missing field '{key}'")))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn int_of(v: &Value, path: &str) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| err(path, format!("expected an integer, found {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| err(path, format!("expected an integer, found '{s}'"))),
        other => Err(err(path, format!("expected an integer, found {other}"))),
    }
}

pub fn parse_rational_value(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::Number(_) => Ok(Rational::from_integer(int_of(v, path)?)),
        Value::String(s) => parse_rational(s).ok_or_else(|| err(path, format!("expected a rational, found '{s}'"))),
        Value::Object(_) => {
            let n = int_of(field(v, "n", path)?, &join(path, "n"))?;
            let d = match v.get("d") {
                Some(d) => int_of(d, &join(path, "d"))?,
                None => Int::from(1),
            };
            if d == Int::from(0) {
                return Err(err(&join(path, "d"), "zero denominator"));
            }
            Ok(Rational::new(n, d))
        }
        other => Err(err(path, format!("expected a rational, found {other}"))),
    }
}

pub fn rational_to_value(q: &Rational) -> Value {
    if q.is_integer() {
        return int_to_value(q.numer());
    }
    Value::String(fmt_rational(q))
}

pub fn parse_matrix(v: &Value, path: &str) -> Result<QMatrix> {
    let rows = v.as_array().ok_or_else(|| err(path, "expected an array of rows"))?;
    let mut out: Vec<Vec<Rational>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| err(&rp, "expected an array"))?;
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, x)| parse_rational_value(x, &format!("{rp}[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            if first.len() != parsed.len() {
                return Err(err(&rp, format!("row has {} entries, expected {}", parsed.len(), first.len())));
            }
        }
        out.push(parsed);
    }
    if out.is_empty() || out[0].is_empty() {
        return Err(err(path, "empty matrix"));
    }
    QMatrix::from_rows(out).map_err(|e| err(path, e.to_string()))
}

pub fn matrix_to_value(m: &QMatrix) -> Value {
    Value::Array(m.rows_iter().map(|r| Value::Array(r.iter().map(rational_to_value).collect())).collect())
}

pub fn parse_lattice(v: &Value, path: &str) -> Result<Lattice> {
    let gp = join(path, "gram");
    let gram = parse_matrix(field(v, "gram", path)?, &gp)?;
    let label = match v.get("label") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(err(&join(path, "label"), format!("expected a string, found {other}"))),
    };
    Lattice::with_label(gram, label).map_err(|e| err(&gp, e.to_string()))
}

pub fn lattice_to_value(l: &Lattice) -> Value {
    json!({ "label": l.label(), "gram": matrix_to_value(l.gram()) })
}

pub fn parse_filtration(v: &Value, path: &str) -> Result<RFiltration> {
    let dp = join(path, "dim");
    let dim = field(v, "dim", path)?
        .as_u64()
        .ok_or_else(|| err(&dp, "expected a non-negative integer"))? as usize;
    let sp = join(path, "steps");
    let steps = field(v, "steps", path)?.as_array().ok_or_else(|| err(&sp, "expected an array"))?;
    let mut flag = Vec::with_capacity(steps.len());
    let mut weights = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let p = format!("{sp}[{i}]");
        flag.push(parse_matrix(field(s, "basis", &p)?, &join(&p, "basis"))?);
        weights.push(parse_rational_value(field(s, "weight", &p)?, &join(&p, "weight"))?);
    }
    RFiltration::new(dim, flag, weights).map_err(|e| err(&sp, e.to_string()))
}

pub fn filtration_to_value(f: &RFiltration) -> Value {
    let steps: Vec<Value> = f
        .flag()
        .iter()
        .zip(f.weights())
        .map(|(b, w)| json!({ "basis": matrix_to_value(b), "weight": rational_to_value(w) }))
        .collect();
    json!({ "dim": f.dim(), "steps": steps })
}

/// A lattice given inline or as a path relative to `base`.
fn lattice_ref(v: &Value, path: &str, base: &Path) -> Result<Lattice> {
    match v {
        Value::String(file) => read_lattice(base.join(file)),
        _ => parse_lattice(v, path),
    }
}

pub fn parse_tensor_subspace(v: &Value, path: &str, base: &Path) -> Result<TensorSubspace> {
    let left = lattice_ref(field(v, "left", path)?, &join(path, "left"), base)?;
    let right = lattice_ref(field(v, "right", path)?, &join(path, "right"), base)?;
    let gp = join(path, "generators");
    let gens = field(v, "generators", path)?.as_array().ok_or_else(|| err(&gp, "expected an array"))?;
    let mut out = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let p = format!("{gp}[{i}]");
        let m = parse_matrix(g, &p)?;
        if m.nrows() != left.rank() || m.ncols() != right.rank() {
            return Err(err(
                &p,
                format!("{}x{} matrix, expected {}x{}", m.nrows(), m.ncols(), left.rank(), right.rank()),
            ));
        }
        out.push(m);
    }
    TensorSubspace::new(left, right, out).map_err(|e| err(&gp, e.to_string()))
}

pub fn tensor_subspace_to_value(v: &TensorSubspace) -> Value {
    json!({
        "left": lattice_to_value(&v.left),
        "right": lattice_to_value(&v.right),
        "generators": v.generators.iter().map(matrix_to_value).collect::<Vec<_>>(),
    })
}

pub fn parse_iq_vector(v: &Value, path: &str) -> Result<IQVector> {
    let rp = join(path, "ring");
    let ring: IQRing = field(v, "ring", path)?
        .as_str()
        .ok_or_else(|| err(&rp, "expected a string"))?
        .parse()
        .map_err(|e: Error| err(&rp, e.to_string()))?;
    let cp = join(path, "coords");
    let coords = field(v, "coords", path)?.as_array().ok_or_else(|| err(&cp, "expected an array"))?;
    let mut out = Vec::with_capacity(coords.len());
    for (i, c) in coords.iter().enumerate() {
        let p = format!("{cp}[{i}]");
        let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(&p, "expected a pair [a, b]"))?;
        out.push(IQInt {
            a: int_of(&pair[0], &format!("{p}[0]"))?,
            b: int_of(&pair[1], &format!("{p}[1]"))?,
        });
    }
    Ok(IQVector { ring, coords: out })
}

fn int_to_value(n: &Int) -> Value {
    i64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

pub fn iq_vector_to_value(v: &IQVector) -> Value {
    let coords: Vec<Value> = v.coords.iter().map(|c| json!([int_to_value(&c.a), int_to_value(&c.b)])).collect();
    json!({ "ring": v.ring.to_string(), "coords": coords })
}

fn read_json(path: &Path) -> Result<Value> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::input(&shown, e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::input(format!("{shown}:{}:{}", e.line(), e.column()), e.to_string()))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn prefixed<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input { path: p, msg } if !p.contains(':') => Error::input(format!("{}: {p}", path.display()), msg),
        other => other,
    })
}

pub fn read_lattice(path: impl AsRef<Path>) -> Result<Lattice> {
    let path = path.as_ref();
    let v = read_json(path)?;
    prefixed(path, parse_lattice(&v, ""))
}

pub fn read_filtration(path: impl AsRef<Path>) -> Result<RFiltration> {
    let path = path.as_ref();
    let v = read_json(path)?;
    prefixed(path, parse_filtration(&v, ""))
}

pub fn read_tensor_subspace(path: impl AsRef<Path>) -> Result<TensorSubspace> {
    let path = path.as_ref();
    let v = read_json(path)?;
    prefixed(path, parse_tensor_subspace(&v, "", &base_dir(path)))
}

pub fn read_iq_vector(path: impl AsRef<Path>) -> Result<IQVector> {
    let path = path.as_ref();
    let v = read_json(path)?;
    prefixed(path, parse_iq_vector(&v, ""))
}

/// A matrix given either as inline JSON or as a file containing one.
pub fn matrix_from_spec(spec: &str) -> Result<QMatrix> {
    let v: Value = match serde_json::from_str(spec) {
        Ok(v) => v,
        Err(_) => read_json(Path::new(spec))?,
    };
    parse_matrix(&v, "element")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    #[test]
    fn rationals() {
        assert_eq!(parse_rational_value(&json!(3), "x").unwrap(), rint(3));
        assert_eq!(parse_rational_value(&json!("-3/6"), "x").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational_value(&json!({"n": 2, "d": 4}), "x").unwrap(), rat(1, 2));
        assert_eq!(parse_rational_value(&json!({"n": "7"}), "x").unwrap(), rint(7));
        let big: Rational = Rational::from_integer(Int::from(1) << 80u32) / rint(3);
        assert_eq!(parse_rational_value(&rational_to_value(&big), "x").unwrap(), big);
        match parse_rational_value(&json!({"n": 1, "d": 0}), "gram[0][1]") {
            Err(Error::Input { path, .. }) => assert_eq!(path, "gram[0][1].d"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn paths_in_errors() {
        let v = json!({"label": "x", "gram": [[2, 1], [1, "q"]]});
        match parse_lattice(&v, "") {
            Err(Error::Input { path, .. }) => assert_eq!(path, "gram[1][1]"),
            other => panic!("{other:?}"),
        }
        let v = json!({"gram": [[1, 2], [2, 1]]});
        match parse_lattice(&v, "") {
            Err(Error::Input { path, msg }) => {
                assert_eq!(path, "gram");
                assert!(msg.contains("positive definite"));
            }
            other => panic!("{other:?}"),
        }
        let v = json!({"dim": 2, "steps": [{"basis": [[1, 0]], "weight": 1}, {"basis": [[1, 0], [0, 1]]}]});
        match parse_filtration(&v, "") {
            Err(Error::Input { path, .. }) => assert_eq!(path, "steps[1]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trips() {
        let l = Lattice::with_label(QMatrix::from_fn(2, 2, |i, j| if i == j { rat(3, 2) } else { rat(-1, 3) }), "t").unwrap();
        assert_eq!(parse_lattice(&lattice_to_value(&l), "").unwrap(), l);
        let f = RFiltration::new(
            2,
            vec![QMatrix::from_i64(&[&[1, 1]]), QMatrix::identity(2)],
            vec![rat(5, 2), rint(-1)],
        )
        .unwrap();
        assert_eq!(parse_filtration(&filtration_to_value(&f), "").unwrap(), f);
        let v = TensorSubspace::new(Lattice::a_n(2), Lattice::standard(1), vec![QMatrix::from_i64(&[&[1], &[2]])]).unwrap();
        assert_eq!(parse_tensor_subspace(&tensor_subspace_to_value(&v), "", Path::new(".")).unwrap(), v);
        let p = IQVector::new(IQRing::Eisenstein, &[(1, 0), (1, 1)]);
        assert_eq!(parse_iq_vector(&iq_vector_to_value(&p), "").unwrap(), p);
    }
}
