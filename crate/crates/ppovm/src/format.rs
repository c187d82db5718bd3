//! JSON file formats.
//!
//! Matrices are `{"rows": R, "cols": C, "data": [[re, im], ...]}` in
//! row-major order. Floats are written in shortest round-trip form, so a
//! write followed by a read reproduces every entry bit for bit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use ppovm_core::discrim::{DiscriminationPlan, DiscriminationReport};
use ppovm_core::ppovm::{build_ppovm, Ppovm, ProcessEffect, TestCouple};
use ppovm_core::quantum::{channel_of_choi, DensityOperator, KrausChannel, Povm, ProcessState};
use ppovm_core::tomo::{IcReport, ShotRecord, TomographyResult};
use ppovm_core::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let data = self
            .data
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        ComplexMatrix::from_vec(self.rows, self.cols, data)
            .map_err(|e| CliError::Format(e.to_string()))
    }
}

pub fn vector_json(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelJson {
    Kraus {
        dim_in: usize,
        dim_out: usize,
        ops: Vec<MatrixJson>,
    },
    Choi {
        d: usize,
        matrix: MatrixJson,
    },
}

impl ChannelJson {
    pub fn from_kraus(ch: &KrausChannel) -> Self {
        Self::Kraus {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            ops: ch.kraus().iter().map(MatrixJson::from).collect(),
        }
    }

    pub fn from_choi(d: usize, m: &ComplexMatrix) -> Self {
        Self::Choi {
            d,
            matrix: MatrixJson::from(m),
        }
    }

    /// Kraus operators exactly as written, without trace-preservation check.
    pub fn raw_kraus(&self) -> Result<KrausChannel, CliError> {
        match self {
            Self::Kraus {
                dim_in,
                dim_out,
                ops,
            } => {
                let ops = ops
                    .iter()
                    .map(MatrixJson::to_matrix)
                    .collect::<Result<Vec<_>, _>>()?;
                let ch = KrausChannel::new(ops)?;
                if ch.dim_in() != *dim_in || ch.dim_out() != *dim_out {
                    return Err(CliError::Format(format!(
                        "declared dimensions {dim_in}->{dim_out} do not match operators {}->{}",
                        ch.dim_in(),
                        ch.dim_out()
                    )));
                }
                Ok(ch)
            }
            Self::Choi { .. } => Err(CliError::Format("expected a Kraus channel".into())),
        }
    }

    /// A validated qudit channel.
    pub fn to_channel(&self, tol: f64) -> Result<KrausChannel, CliError> {
        match self {
            Self::Kraus { .. } => {
                let ch = self.raw_kraus()?;
                if ch.dim_in() != ch.dim_out() {
                    return Err(CliError::Format(
                        "channels must map a qudit to itself".into(),
                    ));
                }
                let residual = ch.tp_residual();
                if residual > tol {
                    return Err(ppovm_core::Error::NotTracePreserving { residual }.into());
                }
                Ok(ch)
            }
            Self::Choi { d, matrix } => {
                let omega = ProcessState::with_tol(matrix.to_matrix()?, *d, tol)?;
                Ok(channel_of_choi(&omega)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectJson {
    pub label: String,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmJson {
    pub effects: Vec<EffectJson>,
}

impl PovmJson {
    pub fn from_povm(p: &Povm) -> Self {
        Self {
            effects: p
                .effects()
                .zip(p.labels())
                .map(|(m, l)| EffectJson {
                    label: l.clone(),
                    matrix: MatrixJson::from(m),
                })
                .collect(),
        }
    }

    pub fn matrices(&self) -> Result<Vec<(String, ComplexMatrix)>, CliError> {
        self.effects
            .iter()
            .map(|e| Ok((e.label.clone(), e.matrix.to_matrix()?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpovmJson {
    pub d: usize,
    pub effects: Vec<EffectJson>,
}

impl PpovmJson {
    pub fn from_ppovm(pp: &Ppovm) -> Self {
        Self {
            d: pp.d(),
            effects: pp
                .effects()
                .iter()
                .map(|e| EffectJson {
                    label: e.label.clone(),
                    matrix: MatrixJson::from(&e.matrix),
                })
                .collect(),
        }
    }

    pub fn process_effects(&self) -> Result<Vec<ProcessEffect>, CliError> {
        self.effects
            .iter()
            .map(|e| Ok(ProcessEffect::new(e.label.clone(), e.matrix.to_matrix()?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupleJson {
    pub weight: f64,
    pub anc_dim: usize,
    pub state: MatrixJson,
    pub povm: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplesJson {
    pub d: usize,
    pub couples: Vec<CoupleJson>,
}

impl CouplesJson {
    pub fn from_couples(d: usize, couples: &[TestCouple]) -> Self {
        Self {
            d,
            couples: couples
                .iter()
                .map(|c| CoupleJson {
                    weight: c.weight(),
                    anc_dim: c.anc_dim(),
                    state: MatrixJson::from(c.state().matrix()),
                    povm: c.povm().effects().map(MatrixJson::from).collect(),
                    labels: Some(c.povm().labels().to_vec()),
                    label: c.label().map(str::to_owned),
                })
                .collect(),
        }
    }

    pub fn to_couples(&self, tol: f64) -> Result<Vec<TestCouple>, CliError> {
        self.couples
            .iter()
            .map(|c| {
                let state = DensityOperator::with_tol(c.state.to_matrix()?, tol)?;
                let effects = c
                    .povm
                    .iter()
                    .map(MatrixJson::to_matrix)
                    .collect::<Result<Vec<_>, _>>()?;
                let labels = match &c.labels {
                    Some(l) => l.clone(),
                    None => (0..effects.len()).map(|i| i.to_string()).collect(),
                };
                let povm = Povm::with_tol(effects, labels, tol)?;
                let couple = TestCouple::new(c.weight, c.anc_dim, state, povm)?;
                Ok(match &c.label {
                    Some(l) => couple.with_label(l.clone()),
                    None => couple,
                })
            })
            .collect()
    }
}

/// Either a PPOVM or an experiment description that builds one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PpovmSource {
    Ppovm(PpovmJson),
    Couples(CouplesJson),
}

impl PpovmSource {
    pub fn to_ppovm(&self, tol: f64) -> Result<Ppovm, CliError> {
        match self {
            Self::Ppovm(p) => Ok(Ppovm::validate_with_tol(p.process_effects()?, p.d, tol)?),
            Self::Couples(c) => Ok(build_ppovm(&c.to_couples(tol)?, c.d)?),
        }
    }
}

/// A unitary given as a bare matrix or as a one-operator Kraus channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitarySource {
    Matrix(MatrixJson),
    Channel(ChannelJson),
}

impl UnitarySource {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        match self {
            Self::Matrix(m) => m.to_matrix(),
            Self::Channel(ch) => {
                let k = ch.raw_kraus()?;
                match k.kraus() {
                    [u] => Ok(u.clone()),
                    ops => Err(CliError::Format(format!(
                        "expected one Kraus operator, found {}",
                        ops.len()
                    ))),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsJson {
    pub shots: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    pub counts: BTreeMap<String, u64>,
}

impl CountsJson {
    pub fn from_record(rec: &ShotRecord) -> Self {
        Self {
            shots: rec.shots,
            seed: rec.seed,
            generator: Some(rec.generator.clone()),
            counts: rec.counts.iter().cloned().collect(),
        }
    }

    /// Relative frequencies in the effect order of `pp`; labels absent from
    /// the file count zero.
    pub fn frequencies(&self, pp: &Ppovm) -> Result<Vec<f64>, CliError> {
        let labels: Vec<&str> = pp.labels().collect();
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(*l) {
                return Err(CliError::Failed(format!("PPOVM label {l:?} is not unique")));
            }
        }
        if let Some(unknown) = self.counts.keys().find(|k| !seen.contains(k.as_str())) {
            return Err(CliError::Failed(format!(
                "counts label {unknown:?} is not a PPOVM outcome"
            )));
        }
        let total: u64 = self.counts.values().sum();
        if self.shots == 0 || total != self.shots {
            return Err(CliError::Failed(format!(
                "counts sum to {total}, file declares {} shots",
                self.shots
            )));
        }
        Ok(labels
            .iter()
            .map(|l| self.counts.get(*l).copied().unwrap_or(0) as f64 / self.shots as f64)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcJson {
    pub complete: bool,
    pub deficiency: usize,
    pub difference_rank: usize,
    pub span_rank: usize,
}

impl From<&IcReport> for IcJson {
    fn from(r: &IcReport) -> Self {
        Self {
            complete: r.complete,
            deficiency: r.deficiency,
            difference_rank: r.difference_rank,
            span_rank: r.span_rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyJson {
    pub d: usize,
    pub omega_raw: MatrixJson,
    pub omega_projected: MatrixJson,
    pub residual: f64,
    pub ic: IcJson,
    pub projection_converged: bool,
    pub hs_error: Option<f64>,
    pub warnings: Vec<String>,
}

impl TomographyJson {
    pub fn from_result(r: &TomographyResult) -> Self {
        Self {
            d: r.omega_projected.d(),
            omega_raw: MatrixJson::from(&r.omega_raw),
            omega_projected: MatrixJson::from(r.omega_projected.matrix()),
            residual: r.residual,
            ic: IcJson::from(&r.ic),
            projection_converged: r.projection_converged,
            hs_error: r.hs_error,
            warnings: r.warnings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJson {
    pub probe: Vec<[f64; 2]>,
    pub povm: PovmJson,
    pub ppovm: PpovmJson,
    pub error_rates: [f64; 2],
    pub perfect: bool,
}

impl From<&DiscriminationPlan> for PlanJson {
    fn from(p: &DiscriminationPlan) -> Self {
        Self {
            probe: vector_json(&p.probe),
            povm: PovmJson::from_povm(&p.povm),
            ppovm: PpovmJson::from_ppovm(&p.ppovm),
            error_rates: [p.error_rates.0, p.error_rates.1],
            perfect: p.is_perfect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationJson {
    pub overlap: f64,
    pub necessary: bool,
    pub zero_in_hull: bool,
    pub phases: Vec<f64>,
    pub min_copies: Option<usize>,
    pub plan: Option<PlanJson>,
}

impl From<&DiscriminationReport> for DiscriminationJson {
    fn from(r: &DiscriminationReport) -> Self {
        Self {
            overlap: r.overlap,
            necessary: r.necessary,
            zero_in_hull: r.zero_in_hull,
            phases: r.phases.phases().to_vec(),
            min_copies: r.min_copies,
            plan: r.plan.as_ref().map(PlanJson::from),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppovm_core::random::ginibre;
    use ppovm_core::schemes;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_round_trip_is_bit_exact() {
        let m = ginibre(3, 4, &mut ChaCha8Rng::seed_from_u64(11)).scale(1.0 / 3.0);
        let text = serde_json::to_string(&MatrixJson::from(&m)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        let back = back.to_matrix().unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn matrix_length_is_checked() {
        let bad = MatrixJson {
            rows: 2,
            cols: 2,
            data: vec![[1.0, 0.0]],
        };
        assert!(matches!(bad.to_matrix(), Err(CliError::Format(_))));
    }

    #[test]
    fn channel_tags() {
        let ch = KrausChannel::identity(2);
        let text = serde_json::to_string(&ChannelJson::from_kraus(&ch)).unwrap();
        assert!(text.starts_with(r#"{"kind":"kraus","dim_in":2,"dim_out":2,"ops":["#));
        let back: ChannelJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_channel(1e-9).unwrap(), ch);
    }

    #[test]
    fn ppovm_and_couples_sources_agree() {
        let from_ppovm = PpovmSource::Ppovm(PpovmJson::from_ppovm(&schemes::six_state()));
        let from_couples =
            PpovmSource::Couples(CouplesJson::from_couples(2, &schemes::six_state_couples()));
        let text = serde_json::to_string(&from_couples).unwrap();
        let parsed: PpovmSource = serde_json::from_str(&text).unwrap();
        assert!(matches!(parsed, PpovmSource::Couples(_)));
        let a = from_ppovm.to_ppovm(1e-9).unwrap();
        let b = parsed.to_ppovm(1e-9).unwrap();
        assert!(a.multiset_eq(&b, 1e-15));
    }
}
