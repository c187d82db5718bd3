//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use ppovm_core::discrim::{analyze, PhaseSet};
use ppovm_core::matrix::{herm_eig, partial_trace, ComplexMatrix, Subsystem};
use ppovm_core::ppovm::{outcome_probabilities, realize, Ppovm};
use ppovm_core::quantum::{kraus_of_choi_matrix, make_standard, StandardChannel};
use ppovm_core::random::{random_channel, random_unitary};
use ppovm_core::schemes;
use ppovm_core::tomo::{linear_inversion, reconstruction_error, simulate_counts};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::{
    ChannelJson, CountsJson, CouplesJson, DiscriminationJson, MatrixJson, PovmJson, PpovmJson,
    PpovmSource, TomographyJson, UnitarySource,
};
use crate::{read_json, CliError, Report, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidateKind {
    State,
    Povm,
    Channel,
    Ppovm,
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    value: f64,
    pass: bool,
}

fn check(name: impl Into<String>, value: f64, pass: bool) -> Check {
    Check {
        name: name.into(),
        value,
        pass,
    }
}

#[derive(Debug, Serialize)]
struct ValidationJson {
    kind: &'static str,
    valid: bool,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_state: Option<MatrixJson>,
}

fn spectrum(m: &ComplexMatrix) -> Result<(f64, f64), CliError> {
    let eig = herm_eig(&m.hermitian_part())?;
    Ok((eig.values[0], eig.values[eig.values.len() - 1]))
}

fn require_square(m: &ComplexMatrix) -> Result<(), CliError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(ppovm_core::Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into())
    }
}

fn hermiticity_check(m: &ComplexMatrix, tol: f64) -> Check {
    let dev = m.hermiticity_deviation();
    check(
        "hermiticity deviation",
        dev,
        dev <= tol * m.max_abs().max(1.0),
    )
}

fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
    out
}

pub fn validate(path: &Path, kind: ValidateKind, cfg: &RunConfig) -> Result<Report, CliError> {
    let tol = cfg.tol;
    let mut checks = Vec::new();
    let mut norm_state = None;
    let name = match kind {
        ValidateKind::State => {
            let m = read_json::<MatrixJson>(path)?.to_matrix()?;
            require_square(&m)?;
            checks.push(hermiticity_check(&m, tol));
            let (lo, _) = spectrum(&m)?;
            checks.push(check("min eigenvalue", lo, lo >= -tol));
            let tr = (m.trace().re - 1.0).abs();
            checks.push(check("trace residual", tr, tr <= tol));
            "state"
        }
        ValidateKind::Povm => {
            let effects = read_json::<PovmJson>(path)?.matrices()?;
            let first = effects
                .first()
                .ok_or(ppovm_core::Error::Empty("POVM has no effects"))?;
            let n = first.1.rows();
            let mut sum = ComplexMatrix::zeros(n, n);
            for (label, m) in &effects {
                require_square(m)?;
                if m.rows() != n {
                    return Err(ppovm_core::Error::ShapeMismatch {
                        expected: (n, n),
                        found: m.shape(),
                    }
                    .into());
                }
                let (lo, hi) = spectrum(m)?;
                checks.push(check(
                    format!("effect {label} min eigenvalue"),
                    lo,
                    lo >= -tol,
                ));
                checks.push(check(
                    format!("effect {label} max eigenvalue"),
                    hi,
                    hi <= 1.0 + tol,
                ));
                sum += m;
            }
            let r = sum.max_diff(&ComplexMatrix::identity(n));
            checks.push(check("completeness residual", r, r <= tol));
            "povm"
        }
        ValidateKind::Channel => {
            match read_json::<ChannelJson>(path)? {
                ch @ ChannelJson::Kraus { .. } => {
                    let k = ch.raw_kraus()?;
                    checks.push(check(
                        "dim_in = dim_out",
                        k.dim_in() as f64,
                        k.dim_in() == k.dim_out(),
                    ));
                    let r = k.tp_residual();
                    checks.push(check("trace-preservation residual", r, r <= tol));
                }
                ChannelJson::Choi { d, matrix } => {
                    let m = matrix.to_matrix()?;
                    if m.shape() != (d * d, d * d) {
                        return Err(ppovm_core::Error::ShapeMismatch {
                            expected: (d * d, d * d),
                            found: m.shape(),
                        }
                        .into());
                    }
                    checks.push(hermiticity_check(&m, tol));
                    let (lo, hi) = spectrum(&m)?;
                    checks.push(check("min eigenvalue", lo, lo >= -tol * hi.max(1.0)));
                    let tr = (m.trace().re - d as f64).abs();
                    checks.push(check("trace residual", tr, tr <= tol * d as f64));
                    let marginal = partial_trace(&m, d, d, Subsystem::Second)?;
                    let r = marginal.max_diff(&ComplexMatrix::identity(d));
                    checks.push(check("marginal residual", r, r <= tol));
                }
            }
            "channel"
        }
        ValidateKind::Ppovm => {
            let (effects, d) = match read_json::<PpovmSource>(path)? {
                PpovmSource::Ppovm(p) => (p.process_effects()?, p.d),
                PpovmSource::Couples(c) => {
                    let pp = PpovmSource::Couples(c).to_ppovm(tol)?;
                    (pp.effects().to_vec(), pp.d())
                }
            };
            let diag = Ppovm::diagnostics(&effects, d)?;
            checks.push(check(
                "min effect eigenvalue",
                diag.min_eigenvalue,
                diag.min_eigenvalue >= -tol,
            ));
            checks.push(check(
                "max effect eigenvalue",
                diag.max_eigenvalue,
                diag.max_eigenvalue <= 1.0 + tol,
            ));
            checks.push(check(
                "product residual",
                diag.product_residual,
                diag.product_residual <= tol,
            ));
            let mut sum = ComplexMatrix::zeros(d * d, d * d);
            for e in &effects {
                sum += &e.matrix;
            }
            let rho = partial_trace(&sum, d, d, Subsystem::Second)?
                .scale(1.0 / d as f64)
                .transpose();
            let (lo, _) = spectrum(&rho)?;
            checks.push(check("normalization state min eigenvalue", lo, lo >= -tol));
            let tr = (rho.trace().re - 1.0).abs();
            checks.push(check("normalization state trace residual", tr, tr <= tol));
            norm_state = Some(rho);
            "ppovm"
        }
    };
    let valid = checks.iter().all(|c| c.pass);
    let mut table = format!("{name}: {}\n", if valid { "valid" } else { "INVALID" });
    for c in &checks {
        let _ = writeln!(
            table,
            "  {:<40} {:>14.6e}  {}",
            c.name,
            c.value,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    if let Some(rho) = &norm_state {
        let _ = write!(table, "normalization state rho:\n{}", format_matrix(rho));
    }
    let json = ValidationJson {
        kind: name,
        valid,
        checks,
        norm_state: norm_state.as_ref().map(MatrixJson::from),
    };
    let mut report = Report::new(&json, table)?;
    report.ok = valid;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    KrausToChoi,
    ChoiToKraus,
}

pub fn convert(path: &Path, direction: Direction, cfg: &RunConfig) -> Result<Report, CliError> {
    let input = read_json::<ChannelJson>(path)?;
    let mut warnings = Vec::new();
    let (output, residual) = match (direction, &input) {
        (Direction::KrausToChoi, ChannelJson::Kraus { .. }) => {
            let ch = input.raw_kraus()?;
            let d = ch.dim_in();
            if ch.dim_out() != d {
                return Err(CliError::Format(
                    "channels must map a qudit to itself".into(),
                ));
            }
            let tp = ch.tp_residual();
            if tp > cfg.tol {
                warnings.push(format!(
                    "map is not trace preserving (residual {tp:.3e}); converted anyway"
                ));
            }
            let choi = ch.choi_matrix();
            let back = kraus_of_choi_matrix(&choi, d, d)?.choi_matrix();
            (ChannelJson::from_choi(d, &choi), back.max_diff(&choi))
        }
        (Direction::ChoiToKraus, ChannelJson::Choi { d, matrix }) => {
            let m = matrix.to_matrix()?;
            let d = *d;
            if m.shape() != (d * d, d * d) {
                return Err(CliError::Format(format!(
                    "Choi matrix of a d = {d} channel must be {0}x{0}",
                    d * d
                )));
            }
            let marginal =
                partial_trace(&m, d, d, Subsystem::Second)?.max_diff(&ComplexMatrix::identity(d));
            if marginal > cfg.tol {
                warnings.push(format!("map is not trace preserving (marginal residual {marginal:.3e}); converted anyway"));
            }
            let ch = kraus_of_choi_matrix(&m, d, d)?;
            let residual = ch.choi_matrix().max_diff(&m);
            (ChannelJson::from_kraus(&ch), residual)
        }
        (Direction::KrausToChoi, _) => {
            return Err(CliError::Failed("input is already a Choi matrix".into()))
        }
        (Direction::ChoiToKraus, _) => {
            return Err(CliError::Failed("input is already a Kraus list".into()))
        }
    };
    let summary = match &output {
        ChannelJson::Kraus { ops, .. } => format!("{} Kraus operators", ops.len()),
        ChannelJson::Choi { d, .. } => format!("Choi matrix, d = {d}"),
    };
    let table = format!("converted: {summary}\nround-trip residual: {residual:.3e}\n");
    let mut report = Report::new(&output, table)?;
    report.warnings = warnings;
    report
        .notes
        .push(format!("round-trip residual: {residual:.3e}"));
    Ok(report)
}

#[derive(Debug, Serialize)]
struct LabeledProbability {
    label: String,
    probability: f64,
}

#[derive(Debug, Serialize)]
struct ProbsJson {
    probabilities: Vec<LabeledProbability>,
    sum: f64,
}

pub fn probs(ppovm_path: &Path, channel_path: &Path, cfg: &RunConfig) -> Result<Report, CliError> {
    let pp = read_json::<PpovmSource>(ppovm_path)?.to_ppovm(cfg.tol)?;
    let ch = read_json::<ChannelJson>(channel_path)?.to_channel(cfg.tol)?;
    let p = outcome_probabilities(&pp, &ch)?;
    let sum: f64 = p.iter().sum();
    let mut table = String::new();
    for (l, x) in pp.labels().zip(&p) {
        let _ = writeln!(table, "{l:<24} {x:.12}");
    }
    let _ = writeln!(table, "{:<24} {sum:.12}", "sum");
    let json = ProbsJson {
        probabilities: pp
            .labels()
            .zip(&p)
            .map(|(l, x)| LabeledProbability {
                label: l.to_owned(),
                probability: *x,
            })
            .collect(),
        sum,
    };
    Report::new(&json, table)
}

/// Source of outcome statistics for tomography.
#[derive(Debug, Clone, Copy)]
pub enum TomoData<'a> {
    /// Exact probabilities of a channel file.
    Exact(&'a Path),
    /// A counts file.
    Counts(&'a Path),
}

pub fn tomo(
    ppovm_path: &Path,
    data: TomoData<'_>,
    truth: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let pp = read_json::<PpovmSource>(ppovm_path)?.to_ppovm(cfg.tol)?;
    let probs = match data {
        TomoData::Exact(p) => {
            outcome_probabilities(&pp, &read_json::<ChannelJson>(p)?.to_channel(cfg.tol)?)?
        }
        TomoData::Counts(p) => read_json::<CountsJson>(p)?.frequencies(&pp)?,
    };
    let mut result = linear_inversion(&pp, &probs)?;
    if let Some(t) = truth {
        let ch = read_json::<ChannelJson>(t)?.to_channel(cfg.tol)?;
        let omega = ppovm_core::quantum::choi_of_channel(&ch)?;
        result.hs_error = Some(reconstruction_error(&result, &omega)?);
    }
    let json = TomographyJson::from_result(&result);
    let mut table = String::new();
    let _ = writeln!(table, "informationally complete: {}", result.ic.complete);
    let _ = writeln!(table, "deficiency = {}", result.ic.deficiency);
    let _ = writeln!(table, "residual: {:.3e}", result.residual);
    let _ = writeln!(
        table,
        "projection converged: {}",
        result.projection_converged
    );
    if let Some(e) = result.hs_error {
        let _ = writeln!(table, "HS error: {e:.3e}");
    }
    let _ = write!(
        table,
        "reconstructed process state:\n{}",
        format_matrix(result.omega_projected.matrix())
    );
    let mut report = Report::new(&json, table)?;
    report.warnings = result.warnings();
    Ok(report)
}

pub fn simulate(
    channel_path: &Path,
    ppovm_path: &Path,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let ch = read_json::<ChannelJson>(channel_path)?.to_channel(cfg.tol)?;
    let pp = read_json::<PpovmSource>(ppovm_path)?.to_ppovm(cfg.tol)?;
    let real = realize(&pp)?;
    let rec = simulate_counts(&ch, &real, cfg.shots, cfg.seed)?;
    let mut table = format!(
        "shots: {}, seed: {}, generator: {}\n",
        rec.shots, rec.seed, rec.generator
    );
    for (l, n) in &rec.counts {
        let _ = writeln!(table, "{l:<24} {n}");
    }
    Report::new(&CountsJson::from_record(&rec), table)
}

pub fn discriminate(
    u_path: &Path,
    v_path: &Path,
    copies: Option<usize>,
    _cfg: &RunConfig,
) -> Result<Report, CliError> {
    let u = read_json::<UnitarySource>(u_path)?.to_matrix()?;
    let v = read_json::<UnitarySource>(v_path)?.to_matrix()?;
    if PhaseSet::of_pair(&u, &v)?.tensor_power(1).len() <= 1 {
        return Err(ppovm_core::Error::AlwaysIndistinguishable.into());
    }
    let report = analyze(&u, &v, copies)?;
    let json = DiscriminationJson::from(&report);
    let mut table = String::new();
    let _ = writeln!(table, "overlap |Tr U†V|: {:.12}", report.overlap);
    let _ = writeln!(
        table,
        "necessary condition (|Tr U†V| <= d-1): {}",
        report.necessary
    );
    let _ = writeln!(
        table,
        "zero in hull of eigenvalues: {}",
        report.zero_in_hull
    );
    let phases: Vec<String> = report
        .phases
        .phases()
        .iter()
        .map(|t| format!("{t:.6}"))
        .collect();
    let _ = writeln!(table, "eigenphases of U†V: [{}]", phases.join(", "));
    if copies.is_some() {
        match report.min_copies {
            Some(n) => {
                let _ = writeln!(table, "min copies: {n}");
            }
            None => {
                let _ = writeln!(table, "min copies: none within limit");
            }
        }
    }
    match &report.plan {
        Some(plan) => {
            let probe: Vec<String> = plan
                .probe
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            let _ = writeln!(table, "probe: [{}]", probe.join(", "));
            let _ = writeln!(
                table,
                "error rates: ({:.3e}, {:.3e})",
                plan.error_rates.0, plan.error_rates.1
            );
        }
        None => {
            let _ = writeln!(table, "no single-use perfect discrimination plan");
        }
    }
    Report::new(&json, table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    PauliProbe,
    SixState,
    IdentityVsContraction,
    Identity,
    Depolarizing,
    Contraction,
    Unitary,
    RandomUnitary,
    RandomChannel,
}

/// Parameters of [`generate`]; unused fields are ignored.
#[derive(Debug, Clone)]
pub struct GenParams {
    pub d: usize,
    pub p: f64,
    pub target: usize,
    pub phases: Vec<f64>,
    pub kraus: usize,
    pub couples: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            d: 2,
            p: 0.5,
            target: 0,
            phases: Vec::new(),
            kraus: 2,
            couples: false,
        }
    }
}

fn qubit_only(kind: &str, d: usize) -> Result<(), CliError> {
    if d == 2 {
        Ok(())
    } else {
        Err(ppovm_core::Error::InvalidParameter(format!("{kind} is defined for d = 2 only")).into())
    }
}

pub fn generate(kind: GenKind, params: &GenParams, cfg: &RunConfig) -> Result<Report, CliError> {
    let d = params.d;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let experiment =
        |couples: Vec<ppovm_core::ppovm::TestCouple>, pp: Ppovm| -> Result<Report, CliError> {
            if params.couples {
                let json = CouplesJson::from_couples(2, &couples);
                Report::new(&json, format!("{} test couples, d = 2\n", couples.len()))
            } else {
                Report::new(
                    &PpovmJson::from_ppovm(&pp),
                    format!("PPOVM with {} effects, d = 2\n", pp.len()),
                )
            }
        };
    let channel = |ch: ppovm_core::quantum::KrausChannel| {
        let table = format!(
            "channel with {} Kraus operators, d = {}\n",
            ch.kraus().len(),
            ch.dim_in()
        );
        Report::new(&ChannelJson::from_kraus(&ch), table)
    };
    match kind {
        GenKind::PauliProbe => {
            qubit_only("pauli-probe", d)?;
            experiment(vec![schemes::pauli_probe_couple()], schemes::pauli_probe())
        }
        GenKind::SixState => {
            qubit_only("six-state", d)?;
            experiment(schemes::six_state_couples(), schemes::six_state())
        }
        GenKind::IdentityVsContraction => {
            qubit_only("identity-vs-contraction", d)?;
            experiment(
                vec![schemes::identity_vs_contraction_couple()],
                schemes::identity_vs_contraction(),
            )
        }
        GenKind::Identity => channel(make_standard(&StandardChannel::Identity, d)?),
        GenKind::Depolarizing => {
            channel(make_standard(&StandardChannel::Depolarizing(params.p), d)?)
        }
        GenKind::Contraction => {
            if params.target >= d {
                return Err(ppovm_core::Error::InvalidParameter(format!(
                    "target {} out of range",
                    params.target
                ))
                .into());
            }
            let t = (0..d)
                .map(|k| Complex64::new(if k == params.target { 1.0 } else { 0.0 }, 0.0))
                .collect();
            channel(make_standard(&StandardChannel::Contraction(t), d)?)
        }
        GenKind::Unitary => {
            if params.phases.is_empty() {
                return Err(
                    ppovm_core::Error::InvalidParameter("unitary needs --phases".into()).into(),
                );
            }
            let u = ComplexMatrix::diag(
                &params
                    .phases
                    .iter()
                    .map(|&t| Complex64::from_polar(1.0, t))
                    .collect::<Vec<_>>(),
            );
            Report::new(
                &MatrixJson::from(&u),
                format!("diagonal unitary, d = {}\n", u.rows()),
            )
        }
        GenKind::RandomUnitary => {
            let u = random_unitary(d, &mut rng);
            Report::new(
                &MatrixJson::from(&u),
                format!("Haar-random unitary, d = {d}, seed = {}\n", cfg.seed),
            )
        }
        GenKind::RandomChannel => channel(random_channel(d, params.kraus.max(1), &mut rng)),
    }
}
