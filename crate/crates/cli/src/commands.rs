use std::fs;
use std::io::Write;
use std::path::Path;

use ewc_core::certify::{
    assemble, entanglement_lower_bound, noise_sweep, run_certification, AllocationPolicy,
    CertificationReport, CertifyOptions, DeviceModel, JobFile, Scheme, Verdict,
};
use ewc_core::circuit::{
    catalog_circuit, parse_circuit, CatalogFamily, NoiseModel, Preparation, QubitNoise,
};
use ewc_core::json::{fmt17, to_json_string};
use ewc_core::linalg::eig_hermitian;
use ewc_core::seed::{derive_seed, rng_from_seed};
use ewc_core::witness::{
    bell2_witness, bundle_from_json, bundle_to_json, ghz3_witness, Family, SeeSawConfig,
    WitnessBundle,
};
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::args::{
    CertifyArgs, DemoArgs, Figure, JobArgs, NoiseArgs, ReproduceArgs, SweepArgs, WindowArgs,
    WitnessArgs, WitnessSource,
};
use crate::error::{CliError, CliResult};

/// Validated parameters shared by the certification commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub shots: u64,
    pub seed: u64,
    pub noise: QubitNoise,
    pub policy: AllocationPolicy,
    pub k_sigma: f64,
}

impl RunConfig {
    pub fn new(
        scheme: &str,
        shots: u64,
        seed: u64,
        noise: &NoiseArgs,
        policy: &str,
        k_sigma: f64,
    ) -> CliResult<Self> {
        if shots == 0 {
            return Err(CliError::Usage("--shots must be at least 1".into()));
        }
        if k_sigma.is_nan() || k_sigma < 0.0 {
            return Err(CliError::Usage(format!(
                "--k-sigma {k_sigma} must be non-negative"
            )));
        }
        Ok(RunConfig {
            scheme: scheme.parse()?,
            shots,
            seed,
            noise: QubitNoise::new(noise.noise_1q, noise.noise_2q, noise.readout)?,
            policy: policy.parse()?,
            k_sigma,
        })
    }
}

fn see_saw_config(w: &WindowArgs) -> CliResult<SeeSawConfig> {
    if w.restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    if w.tol.is_nan() || w.tol < 0.0 {
        return Err(CliError::Usage(format!(
            "--tol {} must be non-negative",
            w.tol
        )));
    }
    Ok(SeeSawConfig {
        restarts: w.restarts,
        tol: w.tol,
        ..SeeSawConfig::default()
    })
}

pub fn family_bundle(family: Family, window: &WindowArgs) -> CliResult<WitnessBundle> {
    let cfg = see_saw_config(window)?;
    if cfg == SeeSawConfig::default() {
        return Ok(family.bundle());
    }
    let w = match family {
        Family::Bell2 => bell2_witness(),
        Family::Ghz3 => ghz3_witness(),
    };
    Ok(WitnessBundle::from_witness(
        family.name(),
        w,
        family.n_qubits(),
        &cfg,
    )?)
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::File {
        path: path.display().to_string(),
        source,
    })
}

fn load_bundle(source: &WitnessSource, window: &WindowArgs) -> CliResult<WitnessBundle> {
    match (&source.family, &source.witness) {
        (Some(f), None) => family_bundle(f.parse()?, window),
        (None, Some(path)) => Ok(bundle_from_json(&read_file(path)?)?),
        _ => Err(CliError::Usage(
            "give exactly one of --family or --witness".into(),
        )),
    }
}

/// `catalog:<family>/<id>` or a circuit file whose first `n` wires are the system.
pub fn load_prep(spec: &str, n: usize) -> CliResult<Preparation> {
    if let Some(rest) = spec.strip_prefix("catalog:") {
        let (family, id) = rest
            .split_once('/')
            .ok_or_else(|| CliError::Usage(format!("catalog id {spec:?} is not <family>/<id>")))?;
        let family: CatalogFamily = family.parse()?;
        let id: usize = id
            .parse()
            .map_err(|_| CliError::Usage(format!("catalog state {id:?} is not a number")))?;
        return Ok(catalog_circuit(family, id)?);
    }
    let circuit = parse_circuit(&read_file(Path::new(spec))?)?;
    Ok(Preparation::new(circuit, n)?)
}

/// A device just large enough for the run. The adversarial allocator gets a
/// residual group holding the state that most violates `W⁽⁺⁾`.
pub fn build_device(
    width: usize,
    bundle: &WitnessBundle,
    policy: &AllocationPolicy,
    noise: QubitNoise,
) -> CliResult<DeviceModel> {
    let noise = NoiseModel::uniform(noise)?;
    Ok(match policy {
        AllocationPolicy::AdversarialSplit { .. } => {
            let n = bundle.n_qubits;
            let eig = eig_hermitian(&bundle.w_plus)?;
            let worst = eig.vector(bundle.dim() - 1);
            DeviceModel::new(width + n, noise)?
                .with_residual((width..width + n).collect(), worst)?
        }
        AllocationPolicy::FixedPermutation { perm } => {
            DeviceModel::new(width.max(perm.len()), noise)?
        }
        _ => DeviceModel::new(width, noise)?,
    })
}

fn run_width(scheme: Scheme, prep: &Preparation, bundle: &WitnessBundle) -> CliResult<usize> {
    Ok(match scheme {
        Scheme::SplitPm => prep.circuit.width(),
        s => assemble(s, prep, bundle)?.circuit.width(),
    })
}

pub fn certify_prep(
    prep: &Preparation,
    bundle: &WitnessBundle,
    cfg: &RunConfig,
) -> CliResult<CertificationReport> {
    let width = run_width(cfg.scheme, prep, bundle)?;
    let device = build_device(width, bundle, &cfg.policy, cfg.noise)?;
    let opts = CertifyOptions::new(cfg.scheme, cfg.shots, cfg.seed, device)
        .with_policy(cfg.policy.clone())
        .with_k_sigma(cfg.k_sigma);
    Ok(run_certification(prep, bundle, &opts)?)
}

pub fn cmd_witness(args: &WitnessArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let family: Family = args.family.parse()?;
    let bundle = family_bundle(family, &args.window)?;
    let text = bundle_to_json(&bundle)?;
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    writeln!(
        stdout,
        "{} p={} q={} window=[{}, {}]",
        bundle.label,
        fmt17(bundle.p),
        fmt17(bundle.q),
        fmt17(bundle.window.lower),
        fmt17(bundle.window.upper)
    )?;
    Ok(())
}

pub fn cmd_certify(args: &CertifyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = RunConfig::new(
        &args.scheme,
        args.shots,
        args.seed,
        &args.noise,
        &args.policy,
        args.k_sigma,
    )?;
    let bundle = load_bundle(&args.source, &args.window)?;
    let prep = load_prep(&args.prep, bundle.n_qubits)?;
    let report = certify_prep(&prep, &bundle, &cfg)?;
    if let Some(path) = &args.out {
        write_file(path, &report.to_json()?)?;
    }
    writeln!(stdout, "{}", report.summary_line())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub state_id: usize,
    pub ideal: f64,
    pub estimate: f64,
    pub std: f64,
    pub verdict: Verdict,
}

fn figure_setup(figure: Figure) -> (CatalogFamily, Family, u64) {
    match figure {
        Figure::Fig4 | Figure::TableE => (CatalogFamily::TwoQubit, Family::Bell2, 8192),
        Figure::Fig5TwoQubit => (CatalogFamily::TwoQubit, Family::Bell2, 2000),
        Figure::Fig5ThreeQubit => (CatalogFamily::ThreeQubit, Family::Ghz3, 2000),
    }
}

/// Slope of the entanglement bound with respect to the estimate.
fn bound_slope(x: f64, bundle: &WitnessBundle) -> f64 {
    if x < bundle.p / 4.0 {
        1.0 / (1.0 - bundle.p)
    } else if x > bundle.q / 4.0 {
        1.0 / (bundle.q - 1.0)
    } else {
        0.0
    }
}

pub fn reproduce_rows(args: &ReproduceArgs) -> CliResult<Vec<TableRow>> {
    let (catalog, family, default_shots) = figure_setup(args.figure);
    let shots = args.shots.unwrap_or(default_shots);
    let base = RunConfig::new(
        &args.scheme,
        shots,
        args.seed,
        &args.noise,
        "identity",
        args.k_sigma,
    )?;
    let bundle = family_bundle(family, &args.window)?;
    (1..=7)
        .map(|id| {
            let prep = catalog_circuit(catalog, id)?;
            let cfg = RunConfig {
                seed: derive_seed(args.seed, id as u64),
                ..base.clone()
            };
            let r = certify_prep(&prep, &bundle, &cfg)?;
            Ok(if args.figure == Figure::TableE {
                let e = |x: f64| entanglement_lower_bound(x.clamp(0.0, 1.0), &bundle);
                TableRow {
                    state_id: id,
                    ideal: e(r.ideal)?,
                    estimate: e(r.estimate)?,
                    std: bound_slope(r.estimate, &bundle) * r.std,
                    verdict: r.verdict,
                }
            } else {
                TableRow {
                    state_id: id,
                    ideal: r.ideal,
                    estimate: r.estimate,
                    std: r.std,
                    verdict: r.verdict,
                }
            })
        })
        .collect()
}

fn rows_to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

pub fn cmd_reproduce(args: &ReproduceArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let rows = reproduce_rows(args)?;
    let csv = rows_to_csv(
        &["state_id", "ideal", "estimate", "std", "verdict"],
        rows.iter().map(|r| {
            vec![
                r.state_id.to_string(),
                fmt17(r.ideal),
                fmt17(r.estimate),
                fmt17(r.std),
                r.verdict.to_string(),
            ]
        }),
    )?;
    emit(args.out.as_deref(), &csv, stdout)
}

fn parse_grid(grid: &str) -> CliResult<Vec<QubitNoise>> {
    grid.split(',')
        .map(|p| {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad noise rate {p:?}")))?;
            Ok(QubitNoise::new(0.0, p, 0.0)?)
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let scheme: Scheme = args.scheme.parse()?;
    let grid = parse_grid(&args.grid)?;
    let bundle = load_bundle(&args.source, &args.window)?;
    let prep = load_prep(&args.prep, bundle.n_qubits)?;
    let rows = noise_sweep(
        &prep,
        &bundle,
        scheme,
        &grid,
        args.shots,
        args.seed,
        args.k_sigma,
    )?;
    let csv = rows_to_csv(
        &["noise_2q", "estimate", "std", "verdict"],
        rows.iter().map(|r| {
            vec![
                fmt17(r.noise.depol_2q),
                fmt17(r.estimate),
                fmt17(r.std),
                r.verdict.to_string(),
            ]
        }),
    )?;
    emit(args.out.as_deref(), &csv, stdout)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub preparation: String,
    pub seed: u64,
    pub split_honest: CertificationReport,
    pub split_adversarial: CertificationReport,
    pub ewc_identity: CertificationReport,
    pub ewc_adversarial: CertificationReport,
    pub ewc_permuted: Vec<CertificationReport>,
    /// The split estimator certified a separable preparation.
    pub false_positive: bool,
    /// Every EWC run reached the identity-policy verdict.
    pub ewc_verdict_invariant: bool,
}

pub const DEMO_PERMUTATIONS: usize = 10;

/// Separable `|00⟩` preparation; the adversary reroutes the negative-part
/// job onto a residual `|φ⁺⟩` pair.
pub fn adversary_demo(seed: u64, shots: u64) -> CliResult<DemoReport> {
    let bundle = Family::Bell2.bundle();
    let prep = catalog_circuit(CatalogFamily::TwoQubit, 2)?;
    let quiet = NoiseArgs {
        noise_1q: 0.0,
        noise_2q: 0.0,
        readout: 0.0,
    };
    let cfg = |scheme: &str, policy: &str| RunConfig::new(scheme, shots, seed, &quiet, policy, 5.0);
    let split_honest = certify_prep(&prep, &bundle, &cfg("split_pm", "identity")?)?;
    let split_adversarial = certify_prep(&prep, &bundle, &cfg("split_pm", "adversarial")?)?;
    let ewc_identity = certify_prep(&prep, &bundle, &cfg("1", "identity")?)?;
    let ewc_adversarial = certify_prep(&prep, &bundle, &cfg("1", "adversarial")?)?;
    let width = run_width(Scheme::One, &prep, &bundle)?;
    let ewc_permuted = (0..DEMO_PERMUTATIONS)
        .map(|i| {
            let mut perm: Vec<usize> = (0..width + 2).collect();
            perm.shuffle(&mut rng_from_seed(derive_seed(seed, 1000 + i as u64)));
            let mut c = cfg("1", "identity")?;
            c.policy = AllocationPolicy::FixedPermutation { perm };
            certify_prep(&prep, &bundle, &c)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let ewc_verdict_invariant = ewc_permuted
        .iter()
        .chain([&ewc_adversarial])
        .all(|r| r.verdict == ewc_identity.verdict);
    Ok(DemoReport {
        preparation: prep.circuit.name().to_string(),
        seed,
        false_positive: split_adversarial.verdict.is_entangled(),
        split_honest,
        split_adversarial,
        ewc_identity,
        ewc_adversarial,
        ewc_permuted,
        ewc_verdict_invariant,
    })
}

pub fn cmd_adversary_demo(args: &DemoArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if args.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let demo = adversary_demo(args.seed, args.shots)?;
    let line = |label: &str, r: &CertificationReport| {
        format!(
            "{label:<28} estimate={:+.6} std={:.6} {}",
            r.estimate, r.std, r.verdict
        )
    };
    writeln!(stdout, "preparation {} (separable)", demo.preparation)?;
    writeln!(
        stdout,
        "{}",
        line("split P&M, identity", &demo.split_honest)
    )?;
    writeln!(
        stdout,
        "{}",
        line("split P&M, adversarial", &demo.split_adversarial)
    )?;
    writeln!(
        stdout,
        "{}",
        line("EWC scheme 1, identity", &demo.ewc_identity)
    )?;
    writeln!(
        stdout,
        "{}",
        line("EWC scheme 1, adversarial", &demo.ewc_adversarial)
    )?;
    writeln!(
        stdout,
        "EWC verdict under {DEMO_PERMUTATIONS} random permutations: {}",
        if demo.ewc_verdict_invariant {
            "unchanged"
        } else {
            "CHANGED"
        }
    )?;
    writeln!(
        stdout,
        "split P&M false positive: {}",
        if demo.false_positive { "yes" } else { "no" }
    )?;
    if let Some(path) = &args.out {
        write_file(path, &to_json_string(&demo)?)?;
    }
    Ok(())
}

pub fn cmd_job(args: &JobArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let job: JobFile =
        serde_json::from_str(&read_file(&args.file)?).map_err(ewc_core::Error::from)?;
    let result = job.run()?;
    emit(args.out.as_deref(), &to_json_string(&result)?, stdout)
}
