//! JSON documents for channels, transformation matrices and input states.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays of them:
//!
//! ```json
//! {"d": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "env": [[1,0]]}
//! {"d": 2, "t": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}
//! {"d": 2, "rho": [[[1,0],[0,0]],[[0,0],[0,0]]]}
//! {"d": 2, "psi": [[1,0],[0,0]]}
//! {"d": 2, "items": [{"p": 0.6, "psi": [[1,0],[0,0]]}, {"p": 0.4, "psi": [[0,0],[1,0]]}]}
//! ```
//!
//! Syntax errors carry serde's line and column; semantic problems are
//! reported as [`Error::Schema`] with the offending field path.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::implementation::ChannelImplementation;
use crate::info::Ensemble;
use crate::linalg::ComplexMatrix;

type C64 = Complex<f64>;
type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelJson {
    pub d: usize,
    pub kraus: Vec<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationJson {
    pub d: usize,
    pub t: RawMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleItemJson {
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub d: usize,
    pub items: Vec<EnsembleItemJson>,
}

/// A parsed channel document; `env` is present when the file describes an
/// implementation.
#[derive(Debug, Clone)]
pub struct ChannelDoc {
    pub channel: Channel<f64>,
    pub env: Option<Vec<C64>>,
}

impl ChannelDoc {
    pub fn implementation(&self) -> Result<ChannelImplementation<f64>> {
        let env = self.env.clone().ok_or_else(|| schema("env", "required for an implementation"))?;
        ChannelImplementation::new(self.channel.clone(), env)
    }
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Json(e.to_string())
}

fn check_finite(field: &str, z: [f64; 2]) -> Result<C64> {
    if z[0].is_finite() && z[1].is_finite() {
        Ok(Complex::new(z[0], z[1]))
    } else {
        Err(schema(field, "non-finite entry"))
    }
}

fn vector_from_raw(field: &str, raw: &[[f64; 2]], len: usize) -> Result<Vec<C64>> {
    if raw.len() != len {
        return Err(schema(field, format!("expected {len} entries, found {}", raw.len())));
    }
    raw.iter()
        .enumerate()
        .map(|(i, z)| check_finite(&format!("{field}[{i}]"), *z))
        .collect()
}

fn matrix_from_raw(field: &str, raw: &RawMatrix, d: usize) -> Result<ComplexMatrix<f64>> {
    if raw.len() != d {
        return Err(schema(field, format!("expected {d} rows, found {}", raw.len())));
    }
    let mut data = Vec::with_capacity(d * d);
    for (i, row) in raw.iter().enumerate() {
        data.extend(vector_from_raw(&format!("{field}[{i}]"), row, d)?);
    }
    ComplexMatrix::from_vec(d, d, data)
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(schema("d", "must be positive"))
    } else {
        Ok(())
    }
}

pub fn parse_channel(text: &str) -> Result<ChannelDoc> {
    let raw: ChannelJson = serde_json::from_str(text).map_err(json_err)?;
    check_dim(raw.d)?;
    if raw.kraus.is_empty() {
        return Err(schema("kraus", "at least one Kraus operator is required"));
    }
    let kraus = raw
        .kraus
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_raw(&format!("kraus[{k}]"), m, raw.d))
        .collect::<Result<Vec<_>>>()?;
    let channel = Channel::new(kraus)?;
    let env = raw
        .env
        .as_deref()
        .map(|e| vector_from_raw("env", e, channel.kraus_count()))
        .transpose()?;
    Ok(ChannelDoc { channel, env })
}

pub fn parse_transformation(text: &str) -> Result<ComplexMatrix<f64>> {
    let raw: TransformationJson = serde_json::from_str(text).map_err(json_err)?;
    check_dim(raw.d)?;
    matrix_from_raw("t", &raw.t, raw.d)
}

/// Reads a density matrix (`rho`) or a state vector (`psi`, normalized on
/// read).
pub fn parse_state(text: &str) -> Result<ComplexMatrix<f64>> {
    let raw: StateJson = serde_json::from_str(text).map_err(json_err)?;
    check_dim(raw.d)?;
    state_from_raw("", raw.d, raw.rho.as_ref(), raw.psi.as_deref())
}

fn state_from_raw(
    prefix: &str,
    d: usize,
    rho: Option<&RawMatrix>,
    psi: Option<&[[f64; 2]]>,
) -> Result<ComplexMatrix<f64>> {
    match (rho, psi) {
        (Some(rho), None) => {
            let field = format!("{prefix}rho");
            let m = matrix_from_raw(&field, rho, d)?;
            m.validate_density(1e-9).map_err(|e| schema(field, e.to_string()))?;
            Ok(m)
        }
        (None, Some(psi)) => {
            let field = format!("{prefix}psi");
            let v = vector_from_raw(&field, psi, d)?;
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(schema(field, "zero vector"));
            }
            let v: Vec<_> = v.into_iter().map(|z| z / norm).collect();
            Ok(ComplexMatrix::outer(&v, &v))
        }
        _ => Err(schema(format!("{prefix}rho|psi"), "exactly one of `rho` and `psi` is required")),
    }
}

pub fn parse_ensemble(text: &str) -> Result<Ensemble<f64>> {
    let raw: EnsembleJson = serde_json::from_str(text).map_err(json_err)?;
    check_dim(raw.d)?;
    if raw.items.is_empty() {
        return Err(schema("items", "at least one state is required"));
    }
    let items = raw
        .items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let prefix = format!("items[{k}].");
            let rho = state_from_raw(&prefix, raw.d, item.rho.as_ref(), item.psi.as_deref())?;
            Ok((item.p, rho))
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(items)
}

pub fn complex_to_value(z: C64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn vector_to_value(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| complex_to_value(*z)).collect())
}

/// Row-major nested `[re, im]` arrays.
pub fn matrix_to_value(m: &ComplexMatrix<f64>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| complex_to_value(m[(i, j)])).collect()))
            .collect(),
    )
}

fn raw_matrix(m: &ComplexMatrix<f64>) -> RawMatrix {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn channel_to_json(channel: &Channel<f64>, env: Option<&[C64]>) -> String {
    let doc = ChannelJson {
        d: channel.dim(),
        kraus: channel.kraus().iter().map(raw_matrix).collect(),
        env: env.map(|e| e.iter().map(|z| [z.re, z.im]).collect()),
    };
    serde_json::to_string(&doc).expect("serializable")
}

pub fn transformation_to_json(t: &ComplexMatrix<f64>) -> String {
    serde_json::to_string(&TransformationJson {
        d: t.rows(),
        t: raw_matrix(t),
    })
    .expect("serializable")
}

pub fn state_to_json(rho: &ComplexMatrix<f64>) -> String {
    serde_json::to_string(&StateJson {
        d: rho.rows(),
        rho: Some(raw_matrix(rho)),
        psi: None,
    })
    .expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_roundtrip() {
        let ch = Channel::<f64>::phase_flip(0.3).unwrap();
        let env = [Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)];
        let text = channel_to_json(&ch, Some(&env));
        let doc = parse_channel(&text).unwrap();
        assert_eq!(doc.channel.kraus_count(), 2);
        for (a, b) in doc.channel.kraus().iter().zip(ch.kraus()) {
            assert!(a.approx_eq(b, 0.0));
        }
        let imp = doc.implementation().unwrap();
        assert_eq!(imp.env(), &env);
    }

    #[test]
    fn identity_document() {
        let doc = parse_channel(r#"{"d": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "env": [[1,0]]}"#).unwrap();
        let t = doc.implementation().unwrap().transformation_matrix();
        assert!(t.matrix().approx_eq(&ComplexMatrix::identity(2), 0.0));
        let doc = parse_channel(r#"{"d": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#).unwrap();
        assert!(matches!(doc.implementation(), Err(Error::Schema { .. })));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let bad_row = r#"{"d": 2, "kraus": [[[[1,0],[0,0]],[[0,0]]]]}"#;
        match parse_channel(bad_row) {
            Err(Error::Schema { field, .. }) => assert_eq!(field, "kraus[0][1]"),
            other => panic!("{other:?}"),
        }
        let bad_env = r#"{"d": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "env": [[1,0],[0,0]]}"#;
        assert!(matches!(parse_channel(bad_env), Err(Error::Schema { field, .. }) if field == "env"));
        let not_tp = r#"{"d": 1, "kraus": [[[[2,0]]]]}"#;
        assert!(matches!(parse_channel(not_tp), Err(Error::NotTracePreserving(_))));
        assert!(matches!(parse_channel(r#"{"d": 0, "kraus": []}"#), Err(Error::Schema { .. })));
        assert!(matches!(parse_channel(r#"{"d": 1, "kraus": []}"#), Err(Error::Schema { .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_channel("{\"d\": 2,\n \"kraus\": [}") {
            Err(Error::Json(msg)) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_channel(r#"{"d": 1, "kraus": [[[[1,0]]]], "extra": 1}"#), Err(Error::Json(_))));
    }

    #[test]
    fn ensembles() {
        let text = r#"{"d": 2, "items": [{"p": 0.6, "psi": [[1,0],[0,0]]}, {"p": 0.4, "rho": [[[0,0],[0,0]],[[0,0],[1,0]]]}]}"#;
        let ens = parse_ensemble(text).unwrap();
        assert_eq!(ens.len(), 2);
        assert_eq!(ens.probabilities(), vec![0.6, 0.4]);
        let bad = r#"{"d": 2, "items": [{"p": 1.0, "psi": [[1,0]]}]}"#;
        assert!(matches!(parse_ensemble(bad), Err(Error::Schema { field, .. }) if field == "items[0].psi"));
        let unnormalized = r#"{"d": 1, "items": [{"p": 0.5, "psi": [[1,0]]}]}"#;
        assert!(matches!(parse_ensemble(unnormalized), Err(Error::InvalidEnsemble(_))));
        assert!(parse_ensemble(r#"{"d": 1, "items": []}"#).is_err());
    }

    #[test]
    fn states_and_transformations() {
        let rho = parse_state(r#"{"d": 2, "psi": [[1,0],[1,0]]}"#).unwrap();
        assert!((rho[(0, 1)].re - 0.5).abs() < 1e-15);
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert!(back.approx_eq(&rho, 0.0));
        assert!(parse_state(r#"{"d": 2}"#).is_err());
        assert!(parse_state(r#"{"d": 2, "rho": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#).is_err());
        assert!(parse_state(r#"{"d": 1, "psi": [[0,0]]}"#).is_err());

        let t = ComplexMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(parse_transformation(&transformation_to_json(&t)).unwrap().approx_eq(&t, 0.0));
        let v = matrix_to_value(&t);
        assert_eq!(v[1][1], serde_json::json!([-0.5, 0.0]));
    }
}
