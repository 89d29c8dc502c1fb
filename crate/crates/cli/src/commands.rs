use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex;
use serde_json::{json, Map, Value};

use qcontrol::control::{ClassicalControl, CoherentControl, GlobalMap, QuantumSwitch};
use qcontrol::discrimination::{optimal_input, output_distance, success_probability};
use qcontrol::implementation::{is_admissible, realize};
use qcontrol::info::{coherent_info_bound, holevo_lower_bound};
use qcontrol::io::{matrix_to_value, parse_channel, parse_ensemble, parse_state, parse_transformation, vector_to_value, ChannelDoc};
use qcontrol::{CMatrix, ControlState64, ControlledOutput64, DiscriminationInstance, Implementation64};

use crate::error::{CliError, Result};
use crate::report::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Coherent,
    Classical,
    Switch,
}

/// Two arms and how they are combined.
#[derive(Debug, Args)]
pub struct MapArgs {
    /// Channel JSON for arm 0 (coherent mode needs `env`).
    #[arg(long)]
    pub arm0: PathBuf,
    /// Channel JSON for arm 1.
    #[arg(long)]
    pub arm1: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Coherent)]
    pub mode: Mode,
    /// `plus`, `zero`, `one` or `a_re,a_im,b_re,b_im`.
    #[arg(long, default_value = "plus")]
    pub control: String,
    /// Classical-control weights `w0,w1`; defaults to `|a|^2,|b|^2`.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// State JSON for the target input.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    /// Transformation-matrix JSON.
    #[arg(long)]
    pub t: PathBuf,
    /// Also construct an environment state realizing `T`.
    #[arg(long)]
    pub realize: bool,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Ensemble JSON; reports the Holevo quantity of the outputs.
    #[arg(long, conflicts_with = "bipartite", required_unless_present = "bipartite")]
    pub ensemble: Option<PathBuf>,
    /// State JSON on reference ⊗ input; reports the coherent information.
    #[arg(long)]
    pub bipartite: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistinguishArgs {
    /// Implementation JSON for the fixed arm.
    #[arg(long)]
    pub fixed: PathBuf,
    /// First candidate implementation.
    #[arg(long)]
    pub a: PathBuf,
    /// Second candidate implementation.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, default_value = "plus")]
    pub control: String,
    /// State JSON for the target input.
    #[arg(long, conflicts_with = "optimal", required_unless_present = "optimal")]
    pub input: Option<PathBuf>,
    /// Use the input that maximizes the distance.
    #[arg(long)]
    pub optimal: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> qcontrol::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_implementation(path: &Path) -> Result<Implementation64> {
    load(path, |text| parse_channel(text)?.implementation())
}

fn numbers(text: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let values: std::result::Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(CliError::Usage(format!("{what} expects {n} comma-separated numbers, got `{text}`"))),
    }
}

pub fn parse_control(text: &str) -> Result<ControlState64> {
    Ok(match text {
        "plus" => ControlState64::plus(),
        "zero" => ControlState64::zero(),
        "one" => ControlState64::one(),
        other => {
            let v = numbers(other, 4, "--control")?;
            ControlState64::new(Complex::new(v[0], v[1]), Complex::new(v[2], v[3]))?
        }
    })
}

fn build_map(args: &MapArgs) -> Result<Box<dyn GlobalMap<f64>>> {
    let control = parse_control(&args.control)?;
    let doc0: ChannelDoc = load(&args.arm0, parse_channel)?;
    let doc1: ChannelDoc = load(&args.arm1, parse_channel)?;
    let implementation = |doc: &ChannelDoc, path: &Path| {
        doc.implementation().map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })
    };
    Ok(match args.mode {
        Mode::Coherent => Box::new(CoherentControl::new(
            implementation(&doc0, &args.arm0)?,
            implementation(&doc1, &args.arm1)?,
            control,
        )?),
        Mode::Classical => {
            let weights = match &args.weights {
                Some(text) => {
                    let w = numbers(text, 2, "--weights")?;
                    (w[0], w[1])
                }
                None => (control.a().norm_sqr(), control.b().norm_sqr()),
            };
            Box::new(ClassicalControl::new(doc0.channel, doc1.channel, weights)?)
        }
        Mode::Switch => Box::new(QuantumSwitch::new(doc0.channel, doc1.channel, control)?),
    })
}

pub fn simulate(args: &SimulateArgs) -> Result<Value> {
    let map = build_map(&args.map)?;
    let rho = load(&args.input, parse_state)?;
    let out = ControlledOutput64::from_matrix(map.apply(&rho)?)?;
    let m = out.matrix();
    let valid = out.validate(1e-9).is_ok();
    Ok(json!({
        "mode": format!("{:?}", args.map.mode).to_lowercase(),
        "d": out.target_dim(),
        "output": matrix_to_value(m),
        "blocks": {
            "00": matrix_to_value(&out.diag0()),
            "01": matrix_to_value(&out.offdiag01()),
            "10": matrix_to_value(&out.offdiag10()),
            "11": matrix_to_value(&out.diag1()),
        },
        "control_marginal": matrix_to_value(&out.control_marginal()),
        "target_marginal": matrix_to_value(&out.target_marginal()),
        "diagnostics": {
            "trace": m.trace().re,
            "hermitian_deviation": m.hermitian_deviation(),
            "min_eigenvalue": out.min_eigenvalue(),
            "valid_state": valid,
        },
    }))
}

pub fn validate_t(args: &ValidateArgs) -> Result<Value> {
    let doc = load(&args.channel, parse_channel)?;
    let t = load(&args.t, parse_transformation)?;
    let verdict = is_admissible(&doc.channel, &t)?;
    let mut report = Map::new();
    report.insert("range_residual".into(), json!(verdict.range_residual));
    report.insert("quadratic_form".into(), json!(verdict.quadratic_form));
    report.insert("admissible".into(), json!(verdict.admissible));
    if args.realize {
        match realize(&doc.channel, &t) {
            Ok(imp) => {
                let err = imp.transformation_matrix().matrix().max_abs_diff(&t);
                report.insert("env".into(), vector_to_value(imp.env()));
                report.insert("kraus".into(), Value::Array(imp.channel().kraus().iter().map(matrix_to_value).collect()));
                report.insert("roundtrip_error".into(), json!(err));
            }
            Err(e) => {
                report.insert("realize_error".into(), json!(e.to_string()));
            }
        }
    }
    Ok(Value::Object(report))
}

pub fn info(args: &InfoArgs) -> Result<Value> {
    let map = build_map(&args.map)?;
    if let Some(path) = &args.ensemble {
        let ens = load(path, parse_ensemble)?;
        let chi = holevo_lower_bound(map.as_ref(), &ens)?;
        return Ok(json!({"quantity": "holevo", "value": chi, "states": ens.len()}));
    }
    let path = args.bipartite.as_ref().expect("clap requires one of the inputs");
    let nu0 = load(path, parse_state)?;
    let q = coherent_info_bound(map.as_ref(), &nu0)?;
    Ok(json!({"quantity": "coherent_information", "value": q}))
}

pub fn distinguish(args: &DistinguishArgs) -> Result<Value> {
    let control = parse_control(&args.control)?;
    let inst = DiscriminationInstance::new(
        load_implementation(&args.fixed)?,
        load_implementation(&args.a)?,
        load_implementation(&args.b)?,
    )?;
    let (a, b) = inst.candidates();
    let ta = a.transformation_matrix().into_inner();
    let tb = b.transformation_matrix().into_inner();
    let best = match optimal_input(&ta, &tb) {
        Ok(psi) => Some(psi),
        Err(qcontrol::Error::ZeroDifference) => None,
        Err(e) => return Err(e.into()),
    };
    let rho = match (&args.input, &best) {
        (Some(path), _) => load(path, parse_state)?,
        (None, Some(psi)) => CMatrix::outer(psi, psi),
        (None, None) => CMatrix::basis_projector(inst.dim(), 0),
    };
    let dist = output_distance(&inst, control, &rho)?;
    Ok(json!({
        "trace_distance": dist.direct,
        "closed_form": dist.closed_form,
        "diamond_bound": inst.diamond_bound(),
        "optimal_input": best.as_deref().map_or(Value::Null, vector_to_value),
        "success_probability": success_probability(dist.direct)?,
    }))
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Renders a command result: JSON as is, CSV as `field,value` rows with
/// nested values in compact JSON, pretty as aligned lines.
pub fn render(value: &Value, format: Format) -> Result<String> {
    let fields: Vec<(&String, &Value)> = match value {
        Value::Object(map) => map.iter().collect(),
        _ => Vec::new(),
    };
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value).expect("values serialize") + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["field", "value"])?;
            for (k, v) in fields {
                w.write_record([k.as_str(), &plain(v)])?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Pretty => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut out = String::new();
            for (k, v) in fields {
                match v {
                    Value::Object(inner) => {
                        out.push_str(&format!("{k}:\n"));
                        for (ik, iv) in inner {
                            out.push_str(&format!("  {ik}: {}\n", plain(iv)));
                        }
                    }
                    _ => out.push_str(&format!("{k:width$}  {}\n", plain(v))),
                }
            }
            Ok(out)
        }
    }
}
