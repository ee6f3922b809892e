//! File formats and batch runs: the versioned JSON spec document, the
//! report produced by a check, and the seeded random sweep used to validate
//! the rule engine against the closure oracle.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier4::{classify4, ClassifyError, FourLevelCase};
use crate::closure::{closure, ClosureError, LieClosureResult};
use crate::criteria::{full_verdict, Conclusion, Rule, Verdict};
use crate::system::{build_h0, build_h1, DerivedParams, SpecError, SystemSpec};
use crate::{DEFAULT_EPS_PARAM, DEFAULT_EPS_RANK};

#[derive(Debug, Error)]
pub enum SpecFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported spec file version {0} (expected 1)")]
    Version(u32),
    #[error("field '{field}': {reason}")]
    Field {
        field: &'static str,
        reason: String,
    },
    #[error("invalid system: {0}")]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_param: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_rank: Option<f64>,
}

/// On-disk system description. Exactly one of `levels` or `spacings` must
/// be present; `spacings` are the level gaps, anchored at `ground_energy`
/// (default 0).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpecFile {
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacings: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
    pub dipoles: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecFileError> {
        let file: SpecFile = serde_json::from_str(text)?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<(), SpecFileError> {
        if self.version != 1 {
            return Err(SpecFileError::Version(self.version));
        }
        match (&self.levels, &self.spacings) {
            (Some(_), Some(_)) => Err(SpecFileError::Field {
                field: "levels",
                reason: "exactly one of 'levels' and 'spacings' may be present".into(),
            }),
            (None, None) => Err(SpecFileError::Field {
                field: "levels",
                reason: "one of 'levels' or 'spacings' is required".into(),
            }),
            (Some(_), None) if self.ground_energy.is_some() => Err(SpecFileError::Field {
                field: "ground_energy",
                reason: "'ground_energy' only applies to the 'spacings' form".into(),
            }),
            (None, Some(s)) if s.iter().any(|&x| x < 0.0) => Err(SpecFileError::Field {
                field: "spacings",
                reason: "spacings must be non-negative".into(),
            }),
            _ => Ok(()),
        }
    }

    pub fn to_system_spec(&self) -> Result<SystemSpec, SpecFileError> {
        self.validate()?;
        let levels = match (&self.levels, &self.spacings) {
            (Some(l), None) => l.clone(),
            (None, Some(s)) => {
                let mut levels = vec![self.ground_energy.unwrap_or(0.0)];
                for &gap in s {
                    levels.push(levels.last().unwrap() + gap);
                }
                levels
            }
            _ => unreachable!("validated"),
        };
        Ok(SystemSpec::new(levels, self.dipoles.clone())?)
    }

    pub fn from_system_spec(name: Option<String>, spec: &SystemSpec) -> Self {
        SpecFile {
            version: 1,
            name,
            levels: Some(spec.levels().to_vec()),
            spacings: None,
            ground_energy: None,
            dipoles: spec.dipoles().to_vec(),
            tolerances: None,
        }
    }

    pub fn eps_param(&self) -> f64 {
        self.tolerances
            .as_ref()
            .and_then(|t| t.eps_param)
            .unwrap_or(DEFAULT_EPS_PARAM)
    }

    pub fn eps_rank(&self) -> f64 {
        self.tolerances
            .as_ref()
            .and_then(|t| t.eps_rank)
            .unwrap_or(DEFAULT_EPS_RANK)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub conclusion: Conclusion,
    pub provenance: Vec<String>,
    pub notes: Vec<String>,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        VerdictReport {
            conclusion: v.conclusion,
            provenance: v.provenance.iter().map(|r| r.to_string()).collect(),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub dimension: usize,
    pub identification: String,
    pub contains_identity: bool,
    pub generations: usize,
}

impl From<&LieClosureResult> for OracleReport {
    fn from(r: &LieClosureResult) -> Self {
        OracleReport {
            dimension: r.dimension,
            identification: r.identification.to_string(),
            contains_identity: r.contains_identity,
            generations: r.generations,
        }
    }
}

/// Full result of checking one spec: derived parameters, rule verdict,
/// optional closure oracle, and the agreement flag between the two.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec: SpecFile,
    pub num_levels: usize,
    pub mu: Vec<f64>,
    pub v: Vec<f64>,
    pub trace_h0: f64,
    pub equally_spaced: bool,
    pub verdict: VerdictReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<FourLevelCase>,
    /// False only on a soundness bug (rule verdict contradicting the
    /// oracle); the CLI exits nonzero in that case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    SpecFile(#[from] SpecFileError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error("eps_param must be positive and finite, got {0}")]
    BadEpsParam(f64),
}

/// The conclusion implied by a closure result plus the trace of `H0`.
pub fn oracle_conclusion(result: &LieClosureResult, params: &DerivedParams, n: usize) -> Conclusion {
    if result.dimension == n * n {
        Conclusion::CompletelyControllable
    } else if result.dimension == n * n - 1
        && !result.contains_identity
        && params.trace_is_zero()
    {
        Conclusion::ControllableUpToPhase
    } else {
        Conclusion::NotControllable
    }
}

/// Rule verdict and oracle agree when the rule verdict is definite and
/// matches the oracle-implied conclusion (an undetermined rule verdict is
/// vacuously consistent).
pub fn verdicts_agree(rule: Conclusion, oracle: Conclusion) -> bool {
    rule == Conclusion::Undetermined || rule == oracle
}

/// Run the rule engine (and, when requested, the closure oracle) on a
/// parsed spec file.
pub fn run_check(file: &SpecFile, with_oracle: bool) -> Result<Report, CheckError> {
    let start = Instant::now();
    let spec = file.to_system_spec()?;
    let eps_param = file.eps_param();
    if !(eps_param > 0.0 && eps_param.is_finite()) {
        return Err(CheckError::BadEpsParam(eps_param));
    }
    let params = DerivedParams::derive(&spec, eps_param);
    let rule_verdict = full_verdict(&spec, &params, None);

    let (oracle, agreement, verdict) = if with_oracle {
        let result = closure(&[build_h0(&spec), build_h1(&spec)], file.eps_rank(), None)?;
        let oc = oracle_conclusion(&result, &params, spec.num_levels());
        let agree = verdicts_agree(rule_verdict.conclusion, oc);
        let verdict = if rule_verdict.conclusion == Conclusion::Undetermined {
            full_verdict(&spec, &params, Some(&result))
        } else {
            rule_verdict
        };
        (Some(OracleReport::from(&result)), Some(agree), verdict)
    } else {
        (None, None, rule_verdict)
    };

    let classification = match classify4(&spec, &params) {
        Ok((case, _)) => Some(case),
        Err(ClassifyError::NotFourLevels(_)) | Err(ClassifyError::Decomposable(_)) => None,
    };

    Ok(Report {
        spec: file.clone(),
        num_levels: spec.num_levels(),
        mu: params.mu().to_vec(),
        v: params.v().to_vec(),
        trace_h0: params.trace_h0(),
        equally_spaced: params.equally_spaced(),
        verdict: VerdictReport::from(&verdict),
        oracle,
        classification,
        agreement,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One sweep sample with its rule verdict and oracle outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub index: usize,
    pub levels: Vec<f64>,
    pub dipoles: Vec<f64>,
    pub rule_conclusion: Conclusion,
    pub rule_provenance: Vec<String>,
    pub oracle_dimension: usize,
    pub oracle_conclusion: Conclusion,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub count: usize,
    pub seed: u64,
    pub nmin: usize,
    pub nmax: usize,
    pub completely_controllable: usize,
    pub controllable_up_to_phase: usize,
    pub not_controllable: usize,
    pub undetermined: usize,
    pub disagreements: usize,
    pub records: Vec<SweepRecord>,
}

/// Random spec distribution used by the sweep. Spacings: with probability
/// 0.2 a copy of an earlier spacing, else 0 with probability 0.15, else
/// Uniform(0.5, 2). Dipoles: with probability 0.2 a sign-flipped-or-not
/// copy of an earlier dipole, else a random sign times Uniform(0.5, 2).
/// The forced collisions make the equality cases reachable.
pub fn random_spec<R: Rng>(rng: &mut R, nmin: usize, nmax: usize) -> SystemSpec {
    let n = rng.gen_range(nmin..=nmax);
    let mut spacings: Vec<f64> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let s = if i > 0 && rng.gen_bool(0.2) {
            spacings[rng.gen_range(0..i)]
        } else if rng.gen_bool(0.15) {
            0.0
        } else {
            rng.gen_range(0.5..2.0)
        };
        spacings.push(s);
    }
    let mut dipoles: Vec<f64> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let d = if i > 0 && rng.gen_bool(0.2) {
            let base = dipoles[rng.gen_range(0..i)];
            if rng.gen_bool(0.5) {
                -base
            } else {
                base
            }
        } else {
            let mag = rng.gen_range(0.5..2.0);
            if rng.gen_bool(0.5) {
                -mag
            } else {
                mag
            }
        };
        dipoles.push(d);
    }
    let mut levels = vec![0.0];
    for s in &spacings {
        levels.push(levels.last().unwrap() + s);
    }
    SystemSpec::new(levels, dipoles).expect("construction is sorted by design")
}

/// Run `count` seeded random specs through both the rule engine and the
/// closure oracle and tally agreements. Deterministic for a fixed seed.
pub fn run_sweep(
    count: usize,
    nmin: usize,
    nmax: usize,
    seed: u64,
    eps_param: f64,
    eps_rank: f64,
) -> SweepSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = SweepSummary {
        count,
        seed,
        nmin,
        nmax,
        completely_controllable: 0,
        controllable_up_to_phase: 0,
        not_controllable: 0,
        undetermined: 0,
        disagreements: 0,
        records: Vec::with_capacity(count),
    };
    for index in 0..count {
        let spec = random_spec(&mut rng, nmin, nmax);
        let params = DerivedParams::derive(&spec, eps_param);
        let verdict = full_verdict(&spec, &params, None);
        let result = closure(&[build_h0(&spec), build_h1(&spec)], eps_rank, None)
            .expect("random specs have a nonzero generator");
        let oc = oracle_conclusion(&result, &params, spec.num_levels());
        let agree = verdicts_agree(verdict.conclusion, oc);
        match verdict.conclusion {
            Conclusion::CompletelyControllable => summary.completely_controllable += 1,
            Conclusion::ControllableUpToPhase => summary.controllable_up_to_phase += 1,
            Conclusion::NotControllable => summary.not_controllable += 1,
            Conclusion::Undetermined => summary.undetermined += 1,
        }
        if !agree {
            summary.disagreements += 1;
        }
        summary.records.push(SweepRecord {
            index,
            levels: spec.levels().to_vec(),
            dipoles: spec.dipoles().to_vec(),
            rule_conclusion: verdict.conclusion,
            rule_provenance: verdict.provenance.iter().map(Rule::to_string).collect(),
            oracle_dimension: result.dimension,
            oracle_conclusion: oc,
            agree,
        });
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_levels_form() {
        let f = SpecFile::parse(
            r#"{"version":1,"name":"x","levels":[0,1,3,4],"dipoles":[1,1,1]}"#,
        )
        .unwrap();
        let s = f.to_system_spec().unwrap();
        assert_eq!(s.levels(), &[0.0, 1.0, 3.0, 4.0]);
    }

    #[test]
    fn parse_spacings_form() {
        let f = SpecFile::parse(
            r#"{"version":1,"spacings":[1,2,1],"ground_energy":0.5,"dipoles":[1,1,1]}"#,
        )
        .unwrap();
        let s = f.to_system_spec().unwrap();
        assert_eq!(s.levels(), &[0.5, 1.5, 3.5, 4.5]);
    }

    #[test]
    fn rejects_both_forms_and_bad_version() {
        assert!(matches!(
            SpecFile::parse(r#"{"version":1,"levels":[0,1],"spacings":[1],"dipoles":[1]}"#),
            Err(SpecFileError::Field { field: "levels", .. })
        ));
        assert!(matches!(
            SpecFile::parse(r#"{"version":2,"levels":[0,1],"dipoles":[1]}"#),
            Err(SpecFileError::Version(2))
        ));
        assert!(SpecFile::parse(r#"{"version":1,"dipoles":[1]}"#).is_err());
    }

    #[test]
    fn echoed_spec_round_trips() {
        let f = SpecFile::parse(
            r#"{"version":1,"levels":[0.25,1.125,3.5],"dipoles":[0.3,-1.7]}"#,
        )
        .unwrap();
        let report = run_check(&f, false).unwrap();
        let json = serde_json::to_string(&report.spec).unwrap();
        let again = SpecFile::parse(&json).unwrap();
        assert_eq!(
            again.to_system_spec().unwrap(),
            f.to_system_spec().unwrap()
        );
    }

    #[test]
    fn check_with_oracle_agrees() {
        let f = SpecFile::parse(
            r#"{"version":1,"spacings":[1,2,1],"dipoles":[1,1,1]}"#,
        )
        .unwrap();
        let report = run_check(&f, true).unwrap();
        assert_eq!(report.oracle.as_ref().unwrap().dimension, 11);
        assert_eq!(report.agreement, Some(true));
        assert_eq!(report.verdict.conclusion, Conclusion::NotControllable);
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = run_sweep(20, 2, 4, 42, 1e-9, 1e-8);
        let b = run_sweep(20, 2, 4, 42, 1e-9, 1e-8);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.disagreements, 0);
    }

    #[test]
    fn n2_nondegenerate_specs_are_controllable() {
        let s = run_sweep(30, 2, 2, 7, 1e-9, 1e-8);
        for r in &s.records {
            let trace: f64 = r.levels.iter().sum();
            let degenerate = (r.levels[1] - r.levels[0]).abs() < 1e-12;
            let decoupled = r.dipoles[0].abs() < 1e-12;
            if !degenerate && !decoupled && trace.abs() > 1e-12 {
                assert_eq!(r.rule_conclusion, Conclusion::CompletelyControllable);
            }
        }
    }
}
