//! Command-line front end: load a datum or a named catalog entry, run one
//! pipeline stage, emit a machine-readable report.
//!
//! Exit codes: 0 on success, 2 when a verification fails (for instance a
//! fan that does not cover the valuation cone), 1 on input errors. Reports
//! embed the datum hash and the tool version; outputs are byte-identical
//! across runs with the same seed and inputs.

use crate::instances::{
    self, sample_sl2cubed_orbit, random_sum_zero_triple, ExampleInstance, ExampleRepresentation,
};
use crate::momentnum::{
    cartan_decompose, invert_toric_moment, kempf_ness_minimize_from, CompactRep, GroupTag,
    KempfNessOutcome, MatrixGroupElement, NumericConfig, WeightedVector,
};
use crate::polycore::Fan;
use crate::rat::{parse_rat, RatVec};
use crate::spherical::{
    datum_hash, orbit_space_model, stratification_report, verify_toroidal_normal_fan,
    SphericalDatum, SphericalError,
};
use nalgebra::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Valcone,
    Polytope,
    OrbitSpace,
    Stratify,
    VerifyFan,
    InvertMoment,
    KempfNess,
    Cartan,
    SampleOrbits,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Valcone => "valcone",
            Command::Polytope => "polytope",
            Command::OrbitSpace => "orbit-space",
            Command::Stratify => "stratify",
            Command::VerifyFan => "verify-fan",
            Command::InvertMoment => "invert-moment",
            Command::KempfNess => "kempf-ness",
            Command::Cartan => "cartan",
            Command::SampleOrbits => "sample-orbits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum InputSource {
    Example(String),
    Path(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub command: Command,
    pub source: InputSource,
    pub format: OutputFormat,
    pub seed: u64,
    pub tol: Option<f64>,
    pub mu: Option<String>,
    pub out: Option<PathBuf>,
}

pub struct RunOutcome {
    pub exit_code: u8,
    pub report: String,
}

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_VERIFY: u8 = 2;

pub fn run(req: &RunRequest) -> RunOutcome {
    match dispatch(req) {
        Ok((code, result)) => RunOutcome {
            exit_code: code,
            report: render(req, result),
        },
        Err(e) => RunOutcome {
            exit_code: e.code,
            report: render(req, json!({"error": e.message})),
        },
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn input_err(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

fn spherical_exit(e: &SphericalError) -> u8 {
    match e {
        SphericalError::NotToroidal(_)
        | SphericalError::VerificationFailed(_)
        | SphericalError::IncompleteFan => EXIT_VERIFY,
        _ => EXIT_INPUT,
    }
}

fn dispatch(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let cfg = NumericConfig {
        residual_tol: req.tol.unwrap_or(NumericConfig::default().residual_tol),
        ..NumericConfig::default()
    };
    match req.command {
        Command::Valcone => cmd_valcone(req),
        Command::Polytope => cmd_polytope(req),
        Command::VerifyFan => cmd_verify_fan(req),
        Command::OrbitSpace => cmd_orbit_space(req),
        Command::Stratify => cmd_stratify(req),
        Command::InvertMoment => cmd_invert_moment(req, &cfg),
        Command::KempfNess => cmd_kempf_ness(req, &cfg),
        Command::Cartan => cmd_cartan(req, &cfg),
        Command::SampleOrbits => cmd_sample_orbits(req, &cfg),
    }
}

/// Datum plus optional fan, from the catalog or from a JSON file.
struct LoadedInput {
    datum: SphericalDatum,
    fan: Option<Fan>,
    instance: Option<ExampleInstance>,
    label: Value,
}

#[derive(Deserialize)]
struct DatumFile {
    datum: SphericalDatum,
    #[serde(default)]
    fan: Option<Fan>,
}

fn parse_json_pointer<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        input_err(format!(
            "schema violation at /{}: {}",
            e.path().to_string().replace('.', "/"),
            e.inner()
        ))
    })
}

fn load_input(req: &RunRequest) -> Result<LoadedInput, CliError> {
    match &req.source {
        InputSource::Example(name) => {
            let instance = instances::build(name).ok_or_else(|| {
                input_err(format!(
                    "unknown example {name:?}; known: {}",
                    instances::registry().join(", ")
                ))
            })?;
            let hash = datum_hash(&instance.datum);
            Ok(LoadedInput {
                datum: instance.datum.clone(),
                fan: Some(instance.fan.clone()),
                label: json!({"example": name, "datum_hash": hash}),
                instance: Some(instance),
            })
        }
        InputSource::Path(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
            let file: DatumFile = parse_json_pointer(&text)?;
            file.datum
                .validate()
                .map_err(|e| input_err(e.to_string()))?;
            let hash = datum_hash(&file.datum);
            Ok(LoadedInput {
                datum: file.datum,
                fan: file.fan,
                instance: None,
                label: json!({"path": path.display().to_string(), "datum_hash": hash}),
            })
        }
    }
}

fn require_fan(input: &LoadedInput) -> Result<Fan, CliError> {
    input
        .fan
        .clone()
        .ok_or_else(|| input_err("this command needs a fan (catalog entries carry one; files must provide a \"fan\" field)"))
}

fn cmd_valcone(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let input = load_input(req)?;
    let val = input.datum.valuation_cone();
    let result = json!({
        "input": input.label,
        "valuation_cone": val,
        "dimension": val.dim(),
        "facet_count": val.facet_normals().len(),
        "spherical_root_count": input.datum.spherical_roots.len(),
        "is_horospherical": input.datum.is_horospherical(),
    });
    Ok((EXIT_OK, result))
}

fn cmd_polytope(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let input = load_input(req)?;
    let pol = input
        .datum
        .moment_polytope()
        .map_err(|e| input_err(e.to_string()))?;
    let negated: Vec<RatVec> = pol.vertices().iter().map(|v| -v).collect();
    let faces = if pol.is_empty() {
        vec![]
    } else {
        pol.face_lattice().map_err(|e| input_err(e.to_string()))?
    };
    let result = json!({
        "input": input.label,
        "polytope": pol,
        "conventions": {
            "vertices": "dominant side: compares directly against highest weights",
            "vertices_negated": "raw invariant-moment-map image (the opposite sign convention)",
        },
        "vertices_negated": negated,
        "face_count": faces.len(),
        "faces": faces,
    });
    Ok((EXIT_OK, result))
}

fn cmd_verify_fan(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let input = load_input(req)?;
    let fan = require_fan(&input)?;
    let report = verify_toroidal_normal_fan(&input.datum, &fan).map_err(|e| CliError {
        code: spherical_exit(&e),
        message: e.to_string(),
    })?;
    let ok = report.verified() && report.complete;
    let code = if ok { EXIT_OK } else { EXIT_VERIFY };
    let result = json!({
        "input": input.label,
        "report": report,
        "verified": report.verified(),
        "complete": report.complete,
    });
    Ok((code, result))
}

fn cmd_orbit_space(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let input = load_input(req)?;
    let fan = require_fan(&input)?;
    let model = orbit_space_model(&input.datum, &fan).map_err(|e| CliError {
        code: spherical_exit(&e),
        message: e.to_string(),
    })?;
    let val = input.datum.valuation_cone();
    let result = json!({
        "input": input.label,
        "valuation_cone_facets": val.facet_normals(),
        "polytope": model.polytope,
        "removed_faces": model.removed_faces,
        "retained_faces": model.retained_faces,
        "removed_count": model.removed_faces.len(),
        "retained_count": model.retained_faces.len(),
    });
    Ok((EXIT_OK, result))
}

fn cmd_stratify(req: &RunRequest) -> Result<(u8, Value), CliError> {
    let input = load_input(req)?;
    let fan = require_fan(&input)?;
    let model = orbit_space_model(&input.datum, &fan).map_err(|e| CliError {
        code: spherical_exit(&e),
        message: e.to_string(),
    })?;
    let mut reports = Vec::new();
    for face in &model.retained_faces {
        let rep = stratification_report(&input.datum, &model, face)
            .map_err(|e| input_err(e.to_string()))?;
        reports.push(rep);
    }
    let mut type_keys: Vec<&str> = reports.iter().map(|r| r.type_key.as_str()).collect();
    type_keys.sort();
    type_keys.dedup();
    let result = json!({
        "input": input.label,
        "stratum_reports": reports,
        "distinct_type_keys": type_keys.len(),
    });
    Ok((EXIT_OK, result))
}

fn parse_mu(req: &RunRequest, rank: usize) -> Result<Vec<f64>, CliError> {
    let text = req
        .mu
        .as_ref()
        .ok_or_else(|| input_err("this command needs --mu (comma-separated coordinates)"))?;
    let coords: Result<Vec<f64>, CliError> = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            if let Ok(r) = parse_rat(part) {
                use num_traits::ToPrimitive;
                r.to_f64()
                    .ok_or_else(|| input_err(format!("coordinate {part} out of range")))
            } else {
                part.parse::<f64>()
                    .map_err(|_| input_err(format!("bad coordinate {part:?}")))
            }
        })
        .collect();
    let coords = coords?;
    if coords.len() != rank {
        return Err(input_err(format!(
            "--mu has {} coordinates, expected {rank}",
            coords.len()
        )));
    }
    Ok(coords)
}

#[derive(Deserialize)]
struct WeightedFile {
    rank: usize,
    weights: Vec<Vec<i64>>,
    amplitudes: Vec<f64>,
}

fn load_weighted(req: &RunRequest) -> Result<(WeightedVector, Value), CliError> {
    match &req.source {
        InputSource::Example(name) => {
            let inst = instances::build(name)
                .ok_or_else(|| input_err(format!("unknown example {name:?}")))?;
            match &inst.representation {
                ExampleRepresentation::Weighted(w) => Ok((
                    w.clone(),
                    json!({"example": name, "datum_hash": datum_hash(&inst.datum)}),
                )),
                _ => Err(input_err(format!(
                    "example {name:?} carries no weighted representation"
                ))),
            }
        }
        InputSource::Path(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
            let file: WeightedFile = parse_json_pointer(&text)?;
            let weights: Vec<RatVec> = file
                .weights
                .iter()
                .map(|w| RatVec::from_ints(w))
                .collect();
            let w = WeightedVector::new(weights, file.amplitudes, file.rank)
                .map_err(|e| input_err(e.to_string()))?;
            Ok((w, json!({"path": path.display().to_string()})))
        }
    }
}

fn cmd_invert_moment(req: &RunRequest, cfg: &NumericConfig) -> Result<(u8, Value), CliError> {
    let (w, label) = load_weighted(req)?;
    let mu_pol = parse_mu(req, w.rank())?;
    // the moment polytope is the negated weight hull: flip once
    let target: Vec<f64> = mu_pol.iter().map(|x| -x).collect();
    let res = invert_toric_moment(&w, &target, cfg).map_err(|e| input_err(e.to_string()))?;
    let forward = crate::momentnum::toric_moment(&w, &res.xi);
    let result = json!({
        "input": label,
        "mu": sig15_vec(&mu_pol),
        "hull_target": sig15_vec(&target),
        "xi": sig15_vec(&res.xi),
        "iterations": res.iterations,
        "residual": sig15(res.residual),
        "forward_check": sig15_vec(&forward),
    });
    Ok((EXIT_OK, result))
}

fn cmd_kempf_ness(req: &RunRequest, cfg: &NumericConfig) -> Result<(u8, Value), CliError> {
    let (w, label) = load_weighted(req)?;
    let rep = CompactRep::Torus(w.clone());
    let v = nalgebra::DVector::from_iterator(
        w.weights().len(),
        w.amplitudes().iter().map(|&c| Complex::new(c.sqrt(), 0.0)),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let start: Vec<f64> = (0..w.rank())
        .map(|_| rand::Rng::gen_range(&mut rng, -1.0..1.0))
        .collect();
    let first = kempf_ness_minimize_from(&rep, &v, None, cfg)
        .map_err(|e| input_err(e.to_string()))?;
    let second = kempf_ness_minimize_from(&rep, &v, Some(&start), cfg)
        .map_err(|e| input_err(e.to_string()))?;
    let describe = |out: &KempfNessOutcome| match out {
        KempfNessOutcome::MinimumFound {
            moment_norm,
            stabilizer_dim,
            iterations,
            minimizer,
        } => json!({
            "outcome": "minimum-found",
            "moment_norm": sig15(*moment_norm),
            "stabilizer_dim": stabilizer_dim,
            "iterations": iterations,
            "minimizer_norm": sig15(minimizer.dotc(minimizer).re.sqrt()),
        }),
        KempfNessOutcome::Divergent {
            parameter_norm,
            iterations,
        } => json!({
            "outcome": "divergent",
            "parameter_norm": sig15(*parameter_norm),
            "iterations": iterations,
        }),
    };
    let agree = first.is_minimum() == second.is_minimum();
    let result = json!({
        "input": label,
        "run": describe(&first),
        "independent_start": describe(&second),
        "outcomes_agree": agree,
    });
    Ok((EXIT_OK, result))
}

#[derive(Deserialize)]
struct MatrixFile {
    /// factors as row-major [re, im] pair matrices
    factors: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    tag: Option<String>,
}

fn cmd_cartan(req: &RunRequest, _cfg: &NumericConfig) -> Result<(u8, Value), CliError> {
    let (h, label) = match &req.source {
        InputSource::Example(name) => {
            if name != "sl2-group" {
                return Err(input_err(
                    "cartan runs on --example sl2-group or on an --input matrix file",
                ));
            }
            let inst = instances::build(name).expect("catalog entry exists");
            // a seeded pseudo-random unimodular matrix
            let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
            let m = random_complex_sl(2, &mut rng);
            let h = MatrixGroupElement::single(m, GroupTag::SpecialLinear)
                .map_err(|e| input_err(e.to_string()))?;
            (
                h,
                json!({"example": name, "datum_hash": datum_hash(&inst.datum), "seed": req.seed}),
            )
        }
        InputSource::Path(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
            let file: MatrixFile = parse_json_pointer(&text)?;
            let tag = match file.tag.as_deref() {
                None | Some("SL") => GroupTag::SpecialLinear,
                Some("SU") => GroupTag::SpecialUnitary,
                Some(other) => return Err(input_err(format!("unknown tag {other:?}"))),
            };
            let factors: Vec<nalgebra::DMatrix<Complex<f64>>> = file
                .factors
                .iter()
                .map(|rows| {
                    let n = rows.len();
                    nalgebra::DMatrix::from_fn(n, n, |i, j| {
                        Complex::new(rows[i][j][0], rows[i][j][1])
                    })
                })
                .collect();
            let h = MatrixGroupElement::new(factors, tag)
                .map_err(|e| input_err(e.to_string()))?;
            (h, json!({"path": path.display().to_string()}))
        }
    };
    let d = cartan_decompose(&h).map_err(|e| input_err(e.to_string()))?;
    let result = json!({
        "input": label,
        "val": sig15_vec(&d.val_coords()),
        "singular_values": sig15_vec(&d.val_coords().iter().map(|x| x.exp()).collect::<Vec<_>>()),
        "residual": sig15(d.residual),
        "antidominant": d.val_coords().windows(2).all(|w| w[0] <= w[1]),
    });
    Ok((EXIT_OK, result))
}

fn random_complex_sl(n: usize, rng: &mut ChaCha8Rng) -> nalgebra::DMatrix<Complex<f64>> {
    use rand::Rng;
    loop {
        let m = nalgebra::DMatrix::from_fn(n, n, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let det = m.clone().lu().determinant();
        if det.norm() > 1e-3 {
            let root = det.powf(1.0 / n as f64);
            return m / root;
        }
    }
}

fn cmd_sample_orbits(req: &RunRequest, cfg: &NumericConfig) -> Result<(u8, Value), CliError> {
    let InputSource::Example(name) = &req.source else {
        return Err(input_err("sample-orbits runs on --example sl2cubed"));
    };
    if name != "sl2cubed" {
        return Err(input_err("sample-orbits runs on --example sl2cubed"));
    }
    let inst = instances::build(name).expect("catalog entry exists");
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let count = 1000usize;
    let mut rows = Vec::with_capacity(count);
    let mut class_counts = std::collections::BTreeMap::<String, usize>::new();
    let mut triangle_ok = true;
    for _ in 0..count {
        let triple = random_sum_zero_triple(&mut rng);
        let s = sample_sl2cubed_orbit(&triple, cfg.rank_tol)
            .map_err(|e| input_err(e.to_string()))?;
        for i in 0..3 {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            if s.lengths[i] > s.lengths[j] + s.lengths[k] + 1e-12 {
                triangle_ok = false;
            }
        }
        *class_counts
            .entry(format!("{:?}", s.stratum_class).to_lowercase())
            .or_default() += 1;
        rows.push(json!({
            "len1": sig15(s.lengths[0]),
            "len2": sig15(s.lengths[1]),
            "len3": sig15(s.lengths[2]),
            "stabilizer_dim": s.stabilizer_dim,
            "class": format!("{:?}", s.stratum_class).to_lowercase(),
        }));
    }
    let result = json!({
        "input": {"example": name, "datum_hash": datum_hash(&inst.datum), "seed": req.seed},
        "samples": count,
        "class_counts": class_counts,
        "triangle_inequalities_hold": triangle_ok,
        "fixtures": inst.reference_fixtures.get("sampler.stabilizer_dims"),
        "rows": rows,
    });
    Ok((EXIT_OK, result))
}

/// Rounds to 15 significant digits for stable reporting.
fn sig15(x: f64) -> Value {
    let rounded: f64 = format!("{x:.14e}").parse().expect("round trip");
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn sig15_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| sig15(x)).collect())
}

fn render(req: &RunRequest, result: Value) -> String {
    let envelope = json!({
        "tool": {"name": "orbitope", "version": env!("CARGO_PKG_VERSION")},
        "command": req.command.name(),
        "seed": req.seed,
        "result": result,
    });
    match req.format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&envelope).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => {
            let mut lines = vec!["key,value".to_string()];
            flatten("", &envelope, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

fn flatten(prefix: &str, value: &Value, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, lines);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, lines);
            }
        }
        other => {
            let text = match other {
                Value::String(s) => s.replace(',', ";"),
                v => v.to_string(),
            };
            lines.push(format!("{prefix},{text}"));
        }
    }
}

/// Convenience used by tests and the binary: build a request.
pub fn request(
    command: Command,
    source: InputSource,
    format: OutputFormat,
    seed: u64,
) -> RunRequest {
    RunRequest {
        command,
        source,
        format,
        seed,
        tol: None,
        mu: None,
        out: None,
    }
}
