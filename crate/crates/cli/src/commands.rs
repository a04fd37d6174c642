//! Subcommand bodies. Each builds its result, wraps it with a manifest and
//! hands the text to [`output::emit`].

use std::fmt;
use std::fs;
use std::path::Path;

use anyhow::Context;
use rayon::prelude::*;
use serde_json::{json, Value};
use twistcert::approx_eig::{shared_approx_eigenvector, shared_approx_eigenvector_normal, SharedEigenResult};
use twistcert::certify::{
    certified_dimension, certify_lambda_exclusion, certify_single, single_pair_threshold, verify_double_witness,
    Certificate,
};
use twistcert::io::{read_matrix, write_matrix, MatrixFormat};
use twistcert::linalg::{from_diagonal, haar_unitary, twist_phase, unitary_exp};
use twistcert::models::{clock_model, hermitian_perturbation, tensor_double_model, ModelKind, ModelSpec};
use twistcert::restriction::{ground_symmetry, restrict_pair, BandSpec, GroundSymmetry, RestrictionResult};
use twistcert::svn::lambda_min;
use twistcert::{c64, DenseMatrix, NormSpec, Tolerances};

use crate::output::{cell, emit, render_csv, render_report, render_table_json, RunManifest, Table};
use crate::{
    CertifyArgs, DoubleArgs, EigshareArgs, Format, GenerateArgs, MatrixFormatArg, MinimaArgs, MountainsArgs, PairSource,
    RestrictArgs, Variant,
};

/// A bad flag combination or value: exit code 2.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<twistcert::Error>() {
            return if err.is_input() {
                1
            } else if err.is_numerical() {
                3
            } else {
                2
            };
        }
        if cause.is::<UsageError>() {
            return 2;
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 1;
        }
    }
    1
}

fn emit_table(command: &str, args: &impl serde::Serialize, format: Format, table: &Table, out: Option<&Path>) -> anyhow::Result<()> {
    let manifest = RunManifest::new(command, args, None)?;
    let text = match format {
        Format::Csv => render_csv(&manifest, table)?,
        Format::Json => render_table_json(&manifest, table)?,
    };
    emit(&text, out)
}

pub fn mountains(args: &MountainsArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    let deltas = args.delta_grid.points();
    let cells: Vec<(f64, f64)> = args
        .alpha_grid
        .points()
        .into_iter()
        .flat_map(|a| deltas.iter().map(move |&d| (a, d)))
        .collect();
    let dims = cells
        .par_iter()
        .map(|&(a, d)| certify_single(a, d, &tol).map(|c| c.d_min))
        .collect::<twistcert::Result<Vec<_>>>()?;
    let rows = cells
        .iter()
        .zip(&dims)
        .map(|(&(a, d), dim)| vec![cell(a), cell(d), dim.to_string()])
        .collect();
    // the closed-form thresholds, approached from below
    let mut crosses = Vec::new();
    for d in 2..=args.max_threshold_dim {
        let alpha = 1.0 / d as f64;
        let delta = single_pair_threshold(d)? * (1.0 - 1e-9);
        crosses.push(vec![cell(alpha), cell(delta), certified_dimension(alpha, delta, &tol)?.to_string()]);
    }
    let table = Table {
        header: &["alpha", "delta", "certified_dim"],
        rows,
        trailer: Some(("threshold rows: alpha = 1/d, delta = (1 - 1e-9) times the closed-form threshold".into(), crosses)),
    };
    emit_table("mountains", args, args.format, &table, args.out.out.as_deref())
}

pub fn minima(args: &MinimaArgs) -> anyhow::Result<()> {
    let base = NormSpec::new(args.p, args.k)?;
    if let Some(g) = args.g.iter().find(|&&g| g == 0) {
        return Err(usage(format!("g must be positive, got {g}")));
    }
    let alphas = args.alpha_grid.points();
    let cells: Vec<(usize, f64)> = args.g.iter().flat_map(|&g| alphas.iter().map(move |&a| (g, a))).collect();
    let values = cells
        .par_iter()
        .map(|&(g, a)| lambda_min(g, a, base.clamped(g)))
        .collect::<twistcert::Result<Vec<_>>>()?;
    let rows = cells
        .iter()
        .zip(&values)
        .map(|(&(g, a), &l)| vec![g.to_string(), cell(a), cell(base.p), base.clamped(g).k.to_string(), cell(l)])
        .collect();
    let table = Table { header: &["g", "alpha", "p", "k", "lambda"], rows, trailer: None };
    emit_table("minima", args, args.format, &table, args.out.out.as_deref())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn required<'a>(value: &'a Option<std::path::PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    value.as_deref().ok_or_else(|| usage(format!("--{flag} is required unless --model is given")))
}

fn load_band(h: &Path, projector: &Path, gap: Option<f64>, tol: &Tolerances) -> anyhow::Result<BandSpec> {
    Ok(BandSpec::new(read_matrix(h)?, read_matrix(projector)?, gap, tol)?)
}

struct LoadedPair {
    band: BandSpec,
    u: DenseMatrix,
    v: DenseMatrix,
    alpha: f64,
    model: Option<(ModelSpec, Value)>,
}

fn load_pair(src: &PairSource, tol: &Tolerances) -> anyhow::Result<LoadedPair> {
    if let Some(path) = &src.model {
        let spec: ModelSpec = read_json(path)?;
        let m = clock_model(&spec, tol)?;
        let measured = serde_json::to_value(&m.measured)?;
        return Ok(LoadedPair { band: m.band, u: m.u, v: m.v, alpha: src.alpha.unwrap_or(m.alpha), model: Some((spec, measured)) });
    }
    let band = load_band(required(&src.h, "h")?, required(&src.projector, "projector")?, src.gap, tol)?;
    let alpha = src.alpha.ok_or_else(|| usage("--alpha is required with matrix files"))?;
    Ok(LoadedPair {
        band,
        u: read_matrix(required(&src.u, "u")?)?,
        v: read_matrix(required(&src.v, "v")?)?,
        alpha,
        model: None,
    })
}

fn ground_report(g: &GroundSymmetry) -> Value {
    json!({
        "xi": g.xi,
        "distance_full": { "measured": g.distance_full, "bound": g.bound_full },
        "distance_band": { "measured": g.distance_band, "bound": g.bound_band },
        "min_singular": g.min_singular,
    })
}

fn restriction_report(r: &RestrictionResult, band: &BandSpec) -> Value {
    json!({
        "dim": band.dim(),
        "band_dim": band.band_dim(),
        "alpha": r.alpha,
        "norm": r.spec,
        "epsilon": r.epsilon,
        "epsilon_flattened": r.epsilon_flattened,
        "width": r.width,
        "gap": r.gap,
        "xi_stated": r.xi_stated,
        "xi": r.xi,
        "delta": r.delta_in,
        "delta_restricted": { "measured": r.delta_out_measured, "bound": r.delta_out_bound },
        "ground_u": ground_report(&r.ground_u),
        "ground_v": ground_report(&r.ground_v),
    })
}

fn with_model(mut body: Value, model: &Option<(ModelSpec, Value)>) -> anyhow::Result<Value> {
    if let Some((spec, measured)) = model {
        body["model"] = json!({ "spec": spec, "measured": measured });
    }
    Ok(body)
}

pub fn restrict(args: &RestrictArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    let pair = load_pair(&args.source, &tol)?;
    let spec = args.norm.resolve(pair.band.dim())?;
    let r = restrict_pair(&pair.u, &pair.v, &pair.band, pair.alpha, spec, &tol)?;
    let body = with_model(json!({ "restriction": restriction_report(&r, &pair.band) }), &pair.model)?;
    let manifest = RunManifest::new("restrict", args, pair.model.as_ref().map(|m| m.0.seed))?;
    emit(&render_report(&manifest, body)?, args.out.out.as_deref())
}

/// Every certificate that applies to a restricted pair with the given bound,
/// strongest first.
pub fn candidate_certificates(alpha: f64, delta: f64, spec: NormSpec, tol: &Tolerances) -> twistcert::Result<Vec<Certificate>> {
    // every (p, k) norm dominates the operator norm, so the arc bound applies as is
    let mut out = vec![certify_single(alpha, delta, tol)?];
    if spec.p >= 2.0 && delta > 0.0 {
        out.push(certify_lambda_exclusion(alpha, delta, spec)?);
    }
    // stable: ties keep the arc certificate first
    out.sort_by_key(|c| std::cmp::Reverse(c.d_min));
    Ok(out)
}

pub fn certify(args: &CertifyArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    if let Some(path) = &args.check {
        let doc: Value = read_json(path)?;
        let raw = doc.get("certificate").cloned().unwrap_or(doc);
        let cert: Certificate = serde_json::from_value(raw).with_context(|| format!("parsing certificate in {}", path.display()))?;
        cert.check(&tol)?;
        let manifest = RunManifest::new("certify --check", args, None)?;
        let body = json!({ "valid": true, "d_min": cert.d_min, "method": cert.method });
        return emit(&render_report(&manifest, body)?, args.out.out.as_deref());
    }
    let pair = load_pair(&args.source, &tol)?;
    let spec = args.norm.resolve(pair.band.dim())?;
    let r = restrict_pair(&pair.u, &pair.v, &pair.band, pair.alpha, spec, &tol)?;
    let candidates = candidate_certificates(pair.alpha, r.delta_out_bound, spec.clamped(pair.band.band_dim()), &tol)?;
    let body = json!({
        "measurements": restriction_report(&r, &pair.band),
        "certificate": candidates[0],
        "candidates": candidates,
    });
    let body = with_model(body, &pair.model)?;
    let manifest = RunManifest::new("certify", args, pair.model.as_ref().map(|m| m.0.seed))?;
    emit(&render_report(&manifest, body)?, args.out.out.as_deref())
}

pub fn certify_double(args: &DoubleArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    let (band, ops, d1, d2, model) = if let Some(path) = &args.model {
        let spec: ModelSpec = read_json(path)?;
        let m = tensor_double_model(&spec, &tol)?;
        let (d1, d2) = (args.d1.unwrap_or(spec.g), args.d2.unwrap_or(spec.g2.unwrap_or(0)));
        let measured = serde_json::to_value(&m.measured)?;
        (m.band, [m.u1, m.u2, m.v1, m.v2], d1, d2, Some((spec, measured)))
    } else {
        let band = load_band(required(&args.h, "h")?, required(&args.projector, "projector")?, args.gap, &tol)?;
        let ops = [
            read_matrix(required(&args.u1, "u1")?)?,
            read_matrix(required(&args.u2, "u2")?)?,
            read_matrix(required(&args.v1, "v1")?)?,
            read_matrix(required(&args.v2, "v2")?)?,
        ];
        let d1 = args.d1.ok_or_else(|| usage("--d1 is required with matrix files"))?;
        let d2 = args.d2.ok_or_else(|| usage("--d2 is required with matrix files"))?;
        (band, ops, d1, d2, None)
    };
    let mut grounds = Vec::with_capacity(4);
    for op in &ops {
        grounds.push(ground_symmetry(op, &band, NormSpec::operator(), &tol)?);
    }
    let report = verify_double_witness(
        &grounds[0].restricted,
        &grounds[1].restricted,
        &grounds[2].restricted,
        &grounds[3].restricted,
        d1,
        d2,
        &tol,
    )?;
    let names = ["u1", "u2", "v1", "v2"];
    let restriction: serde_json::Map<String, Value> =
        names.iter().zip(&grounds).map(|(n, g)| (n.to_string(), ground_report(g))).collect();
    let body = json!({
        "band_dim": band.band_dim(),
        "restriction": restriction,
        "certificate": report.certificate,
        "witness": report,
    });
    let body = with_model(body, &model)?;
    let manifest = RunManifest::new("certify-double", args, model.as_ref().map(|m| m.0.seed))?;
    emit(&render_report(&manifest, body)?, args.out.out.as_deref())
}

fn complex(z: c64) -> Value {
    json!([z.re, z.im])
}

/// A normal `A` and a perturbed polynomial in it (general), or two
/// approximately commuting unitaries (normal), all from one seed.
fn generated_instance(variant: Variant, n: usize, epsilon: f64, seed: u64) -> anyhow::Result<(DenseMatrix, DenseMatrix)> {
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    let w = haar_unitary(n, seed);
    let conj = |d: &[c64]| &w * from_diagonal(d) * w.adjoint();
    let kick = hermitian_perturbation(n, seed.wrapping_add(1));
    // golden-ratio phases keep the generated spectrum spread out for every n
    let phase = |j: usize| twist_phase(j as f64 * 0.618_033_988_749_894_9);
    Ok(match variant {
        Variant::General => {
            let eigs: Vec<c64> = (0..n).map(|j| phase(j) * (1.0 + j as f64 / n as f64)).collect();
            let a = conj(&eigs);
            let b = &a * &a + kick * c64::new(epsilon, 0.0);
            (a, b)
        }
        Variant::Normal => {
            let eigs: Vec<c64> = (0..n).map(phase).collect();
            let squared: Vec<c64> = eigs.iter().map(|z| z * z).collect();
            (conj(&eigs), unitary_exp(&kick, epsilon)? * conj(&squared))
        }
    })
}

fn eig_report(r: &SharedEigenResult, variant: Variant, n: usize) -> Value {
    let b = &r.blocks;
    json!({
        "variant": variant,
        "n": n,
        "epsilon": r.epsilon,
        "lambda": complex(r.lambda),
        "mu": complex(r.mu),
        "mu_compressed": complex(r.mu_compressed),
        "residual_a": { "measured": r.residual_a, "bound": r.bound, "bound_effective": r.bound_effective },
        "residual_b": { "measured": r.residual_b, "bound": r.bound, "bound_effective": r.bound_effective },
        "compressed_residual": r.compressed_residual,
        "cluster": {
            "indices": r.cluster.indices,
            "radius": r.cluster.radius,
            "max_distance": { "measured": r.cluster.max_distance, "bound": r.cluster.diameter_bound },
            "separation": r.cluster.separation,
        },
        "blocks": {
            "a_deviation": { "measured": b.a_deviation, "bound": b.a_deviation_bound },
            "b_offdiag": { "measured": b.b_offdiag, "bound": b.b_offdiag_bound, "sharp_bound": b.b_offdiag_sharp },
        },
        "vector": r.vector.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
    })
}

pub fn eigshare(args: &EigshareArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    let (a, b, seed) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => (read_matrix(a)?, read_matrix(b)?, None),
        _ => {
            let (a, b) = generated_instance(args.variant, args.n, args.epsilon, args.seed)?;
            (a, b, Some(args.seed))
        }
    };
    let r = match args.variant {
        Variant::General => shared_approx_eigenvector(&a, &b, None, &tol)?,
        Variant::Normal => shared_approx_eigenvector_normal(&a, &b, None, &tol)?,
    };
    let manifest = RunManifest::new("eigshare", args, seed)?;
    emit(&render_report(&manifest, eig_report(&r, args.variant, a.nrows()))?, args.out.out.as_deref())
}

fn model_spec(args: &GenerateArgs) -> anyhow::Result<ModelSpec> {
    if let Some(path) = &args.model {
        return read_json(path);
    }
    let kind: ModelKind = serde_json::from_value(Value::String(args.kind.clone()))
        .map_err(|_| usage(format!("--kind must be clock-block, flat-band or tensor-double, got {:?}", args.kind)))?;
    let code = args.g * args.g2.unwrap_or(1);
    Ok(ModelSpec {
        kind,
        g: args.g,
        g2: args.g2,
        n_excited: args.n_excited.unwrap_or(2 * code),
        gap: args.gap,
        width: args.width,
        perturbation_strength: args.s,
        symmetry_perturbation: args.t,
        seed: args.seed,
    })
}

pub fn generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let tol = args.tol.resolve()?;
    let spec = model_spec(args)?;
    spec.validate()?;
    let (format, ext) = match args.matrix_format {
        MatrixFormatArg::Text => (MatrixFormat::Text, "txt"),
        MatrixFormatArg::Binary => (MatrixFormat::Binary, "twc"),
    };
    let (band, ops, measured) = if spec.kind == ModelKind::TensorDouble {
        let m = tensor_double_model(&spec, &tol)?;
        let extra = json!({ "gamma": m.gamma, "deltas": m.deltas, "delta": m.delta });
        (m.band, vec![("u1", m.u1), ("u2", m.u2), ("v1", m.v1), ("v2", m.v2)], (m.measured, extra))
    } else {
        let m = clock_model(&spec, &tol)?;
        let extra = json!({ "alpha": m.alpha, "delta": m.delta });
        (m.band, vec![("u", m.u), ("v", m.v)], (m.measured, extra))
    };
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let mut files = serde_json::Map::new();
    let mut write = |name: &str, m: &DenseMatrix| -> anyhow::Result<()> {
        let file = format!("{name}.{ext}");
        write_matrix(&args.out.join(&file), m, format)?;
        files.insert(name.into(), file.into());
        Ok(())
    };
    write("h", band.hamiltonian())?;
    write("projector", band.projector())?;
    for (name, m) in &ops {
        write(name, m)?;
    }
    fs::write(args.out.join("model.json"), serde_json::to_string_pretty(&spec)? + "\n")
        .with_context(|| format!("writing model.json in {}", args.out.display()))?;
    let body = json!({
        "spec": spec,
        "gap": band.gap(),
        "files": files,
        "measured": measured.0,
        "commutators": measured.1,
    });
    let manifest = RunManifest::new("generate", args, Some(spec.seed))?;
    let text = render_report(&manifest, body)?;
    fs::write(args.out.join("manifest.json"), &text).with_context(|| format!("writing manifest.json in {}", args.out.display()))?;
    emit(&text, None)
}
