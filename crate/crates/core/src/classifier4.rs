//! Exhaustive controllability classification for four-level systems.
//!
//! Every non-decomposable 4-level spec falls into exactly one spacing case,
//! and each case has a definitive verdict: either the system is completely
//! controllable (up to the trace condition), or the dynamical Lie algebra
//! is one of the known obstructions (the 11-dimensional `sp(2) + u(1)`, the
//! 4-dimensional `u(2)`-like algebra, or the 2-dimensional abelian algebra
//! of the fully degenerate system).

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::closure::SpanTracker;
use crate::criteria::{Conclusion, Rule, Verdict};
use crate::system::{DerivedParams, SkewHermMatrix, SystemSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("classification applies to 4-level systems, got {0} levels")]
    NotFourLevels(usize),
    #[error("spec is decomposable (dipole d_{0} vanishes); handle via the decomposability rule")]
    Decomposable(usize),
}

/// Spacing pattern of a four-level system (1-based spacing indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    MuAllDistinct,
    Mu1NeMu2EqMu3,
    Mu1EqMu2NeMu3,
    Mu1EqMu3NeMu2Nonzero,
    Mu1EqMu3NeMu2Zero,
    EqualSpacingV,
    FullyDegenerate,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseTag::MuAllDistinct => "mu1 != mu2 != mu3 (all distinct)",
            CaseTag::Mu1NeMu2EqMu3 => "mu1 != mu2 = mu3",
            CaseTag::Mu1EqMu2NeMu3 => "mu1 = mu2 != mu3",
            CaseTag::Mu1EqMu3NeMu2Nonzero => "mu1 = mu3 != mu2, mu2 != 0",
            CaseTag::Mu1EqMu3NeMu2Zero => "mu1 = mu3 != mu2, mu2 = 0",
            CaseTag::EqualSpacingV => "mu1 = mu2 = mu3 != 0 (v subcases)",
            CaseTag::FullyDegenerate => "mu1 = mu2 = mu3 = 0",
        };
        f.write_str(s)
    }
}

/// `v_n` equality pattern within the equal-spacing case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VSubcase {
    AllDistinct,
    V1EqV2NeV3,
    V1NeV2EqV3,
    V1EqV3NeV2,
    AllEqual,
}

impl std::fmt::Display for VSubcase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VSubcase::AllDistinct => "v1 != v2 != v3 (all distinct)",
            VSubcase::V1EqV2NeV3 => "v1 = v2 != v3",
            VSubcase::V1NeV2EqV3 => "v1 != v2 = v3",
            VSubcase::V1EqV3NeV2 => "v1 = v3 != v2",
            VSubcase::AllEqual => "v1 = v2 = v3",
        };
        f.write_str(s)
    }
}

/// The algebra a case is expected to generate (assuming nonzero trace).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectedAlgebra {
    U4,
    Sp2PlusU1,
    U2Like,
    Abelian2,
}

impl ExpectedAlgebra {
    pub fn dimension(self) -> usize {
        match self {
            ExpectedAlgebra::U4 => 16,
            ExpectedAlgebra::Sp2PlusU1 => 11,
            ExpectedAlgebra::U2Like => 4,
            ExpectedAlgebra::Abelian2 => 2,
        }
    }
}

impl std::fmt::Display for ExpectedAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ExpectedAlgebra::U4 => "u(4), dim 16",
            ExpectedAlgebra::Sp2PlusU1 => "sp(2)+u(1), dim 11",
            ExpectedAlgebra::U2Like => "u(2)-like, dim 4",
            ExpectedAlgebra::Abelian2 => "abelian, dim 2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourLevelCase {
    pub case_tag: CaseTag,
    pub v_subcase: Option<VSubcase>,
    /// `d_1 == +/- d_3`, when the case verdict depends on it.
    pub d_condition: Option<bool>,
    pub expected_algebra: ExpectedAlgebra,
}

/// Classify a non-decomposable 4-level spec. Returns the matched case and a
/// definitive verdict (never `Undetermined`).
pub fn classify4(
    spec: &SystemSpec,
    params: &DerivedParams,
) -> Result<(FourLevelCase, Verdict), ClassifyError> {
    if spec.num_levels() != 4 {
        return Err(ClassifyError::NotFourLevels(spec.num_levels()));
    }
    for n in 1..=3 {
        if params.d_is_zero(n) {
            return Err(ClassifyError::Decomposable(n));
        }
    }

    let eq12 = params.mu_eq(0, 1);
    let eq23 = params.mu_eq(1, 2);
    let eq13 = params.mu_eq(0, 2);
    // with a chain like mu1 ~ mu2 ~ mu3 the pairwise tests may disagree;
    // two or more equalities are canonicalized to the all-equal bucket
    let n_eq = [eq12, eq23, eq13].iter().filter(|&&b| b).count();

    let d_same_magnitude = params.d_eq_abs(1, 3, spec);
    let mut notes = params.fragility_notes();

    let (case, conclusion) = if n_eq >= 2 {
        if params.mu_all_zero() {
            notes.push(if params.trace_is_zero() {
                "iH0 vanishes; the algebra is spanned by iH1 alone (dim 1)".to_string()
            } else {
                "algebra spanned by iI and iH1 (dim 2)".to_string()
            });
            (
                FourLevelCase {
                    case_tag: CaseTag::FullyDegenerate,
                    v_subcase: None,
                    d_condition: None,
                    expected_algebra: ExpectedAlgebra::Abelian2,
                },
                Conclusion::NotControllable,
            )
        } else {
            classify_equal_spacing(params, d_same_magnitude, &mut notes)
        }
    } else if eq13 {
        // mu1 = mu3 != mu2
        let tag = if params.mu_is_zero(1) {
            CaseTag::Mu1EqMu3NeMu2Zero
        } else {
            CaseTag::Mu1EqMu3NeMu2Nonzero
        };
        if d_same_magnitude {
            notes.push(
                "d1 = +/- d3 with mu1 = mu3 != mu2: the generated algebra is sp(2)+u(1) (dim 11; dim 10 for a traceless H0)"
                    .to_string(),
            );
            (
                FourLevelCase {
                    case_tag: tag,
                    v_subcase: None,
                    d_condition: Some(true),
                    expected_algebra: ExpectedAlgebra::Sp2PlusU1,
                },
                Conclusion::NotControllable,
            )
        } else {
            (
                FourLevelCase {
                    case_tag: tag,
                    v_subcase: None,
                    d_condition: Some(false),
                    expected_algebra: ExpectedAlgebra::U4,
                },
                positive(params),
            )
        }
    } else {
        let tag = if eq12 {
            CaseTag::Mu1EqMu2NeMu3
        } else if eq23 {
            CaseTag::Mu1NeMu2EqMu3
        } else {
            CaseTag::MuAllDistinct
        };
        (
            FourLevelCase {
                case_tag: tag,
                v_subcase: None,
                d_condition: None,
                expected_algebra: ExpectedAlgebra::U4,
            },
            positive(params),
        )
    };

    let verdict = Verdict {
        conclusion,
        provenance: vec![Rule::FourLevelCase {
            case: case.case_tag,
        }],
        notes,
    };
    Ok((case, verdict))
}

fn positive(params: &DerivedParams) -> Conclusion {
    if params.trace_is_zero() {
        Conclusion::ControllableUpToPhase
    } else {
        Conclusion::CompletelyControllable
    }
}

fn classify_equal_spacing(
    params: &DerivedParams,
    d_same_magnitude: bool,
    notes: &mut Vec<String>,
) -> (FourLevelCase, Conclusion) {
    let ve12 = params.v_eq(0, 1);
    let ve23 = params.v_eq(1, 2);
    let ve13 = params.v_eq(0, 2);
    let n_eq = [ve12, ve23, ve13].iter().filter(|&&b| b).count();

    let (sub, expected, conclusion) = if n_eq >= 2 {
        (VSubcase::AllEqual, ExpectedAlgebra::U2Like, Conclusion::NotControllable)
    } else if ve13 {
        // equal spacing makes v1 = v3 equivalent to d1 = +/- d3
        notes.push(
            "v1 = v3 != v2 under equal spacing (equivalently d1 = +/- d3): sp(2)+u(1) obstruction"
                .to_string(),
        );
        (
            VSubcase::V1EqV3NeV2,
            ExpectedAlgebra::Sp2PlusU1,
            Conclusion::NotControllable,
        )
    } else {
        let sub = if ve12 {
            VSubcase::V1EqV2NeV3
        } else if ve23 {
            VSubcase::V1NeV2EqV3
        } else {
            VSubcase::AllDistinct
        };
        (sub, ExpectedAlgebra::U4, positive(params))
    };

    (
        FourLevelCase {
            case_tag: CaseTag::EqualSpacingV,
            v_subcase: Some(sub),
            d_condition: Some(d_same_magnitude),
            expected_algebra: expected,
        },
        conclusion,
    )
}

fn e(m: usize, n: usize) -> Array2<Complex64> {
    let mut a = Array2::zeros((4, 4));
    a[[m - 1, n - 1]] = Complex64::new(1.0, 0.0);
    a
}

/// The ten matrices spanning sp(2) inside su(4): `h_1 = i(e11 - e33)`,
/// `h_2 = i(e22 - e44)`, the long-root pairs `x_31, y_31, x_42, y_42`, and
/// the short-root combinations `x_32 + x_41`, `y_32 + y_41`,
/// `x_21 - x_34`, `y_21 - y_34`.
pub fn sp2_basis() -> Vec<SkewHermMatrix> {
    let i = Complex64::new(0.0, 1.0);
    let x = |m: usize, n: usize| e(m, n) - e(n, m);
    let y = |m: usize, n: usize| (e(m, n) + e(n, m)).mapv(|z| z * i);
    let mats = [
        (e(1, 1) - e(3, 3)).mapv(|z| z * i), // h1
        (e(2, 2) - e(4, 4)).mapv(|z| z * i), // h2
        x(3, 1),                             // x_{2w1}
        y(3, 1),                             // y_{2w1}
        x(4, 2),                             // x_{2w2}
        y(4, 2),                             // y_{2w2}
        x(3, 2) + x(4, 1),                   // x_{w1+w2}
        y(3, 2) + y(4, 1),                   // y_{w1+w2}
        x(2, 1) - x(3, 4),                   // x_{w1-w2}
        y(2, 1) - y(3, 4),                   // y_{w1-w2}
    ];
    mats.into_iter()
        .map(SkewHermMatrix::from_raw_unchecked)
        .collect()
}

/// Orthonormal basis for `span(P sp2 P^T) + span(iI)` where `P` is the
/// level reordering `{|1>,|2>,|3>,|4>} -> {|2>,|1>,|3>, sign |4>}` that
/// exhibits the dim-11 obstruction. Used by algebra identification.
pub(crate) fn sp2_plus_identity_span(sign: f64) -> Vec<SkewHermMatrix> {
    let mut p = Array2::<Complex64>::zeros((4, 4));
    p[[1, 0]] = Complex64::new(1.0, 0.0); // |1'> = |2>
    p[[0, 1]] = Complex64::new(1.0, 0.0); // |2'> = |1>
    p[[2, 2]] = Complex64::new(1.0, 0.0);
    p[[3, 3]] = Complex64::new(sign, 0.0);

    let mut tracker = SpanTracker::new();
    let mut out = Vec::new();
    let push = |m: SkewHermMatrix, tracker: &mut SpanTracker, out: &mut Vec<SkewHermMatrix>| {
        if tracker.try_insert(&m.vectorize(), 1e-12) {
            out.push(
                SkewHermMatrix::from_vector(4, tracker.vectors().last().unwrap()).unwrap(),
            );
        }
    };
    for b in sp2_basis() {
        let conj = p.dot(b.matrix()).dot(&p.t());
        push(
            SkewHermMatrix::from_raw_unchecked(conj),
            &mut tracker,
            &mut out,
        );
    }
    push(SkewHermMatrix::identity_imag(4), &mut tracker, &mut out);
    out
}

/// One row of the four-level reference table: a representative spec for a
/// spacing/dipole pattern together with its known verdict and the dimension
/// of the dynamical Lie algebra it generates.
#[derive(Debug, Clone)]
pub struct ReferenceCase {
    pub label: &'static str,
    pub spec: SystemSpec,
    pub controllable: bool,
    pub expected_dimension: usize,
}

/// Representative four-level systems covering every classification case,
/// with the equal-magnitude dipole rows instantiated for both signs of
/// `d_3`. Ground energy is 1 so every representative has nonzero trace.
pub fn reference_cases() -> Vec<ReferenceCase> {
    let spec = |mu: [f64; 3], d: [f64; 3]| {
        let levels = vec![1.0, 1.0 + mu[0], 1.0 + mu[0] + mu[1], 1.0 + mu[0] + mu[1] + mu[2]];
        SystemSpec::new(levels, d.to_vec()).expect("reference specs are valid")
    };
    let s32 = (7.0f64 / 3.0).sqrt();
    let s23 = 2.0 / 3.0f64.sqrt();
    vec![
        ReferenceCase {
            label: "mu1 != mu2 != mu3",
            spec: spec([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "mu1 != mu2 = mu3",
            spec: spec([1.0, 2.0, 2.0], [1.0, 1.0, 1.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "mu1 = mu2 != mu3",
            spec: spec([1.0, 1.0, 2.0], [1.0, 1.0, 1.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "mu1 = mu3 != mu2, d1 != +/-d3",
            spec: spec([1.0, 2.0, 1.0], [1.0, 1.0, 2.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "mu1 = mu3 != mu2, d1 = d3",
            spec: spec([1.0, 2.0, 1.0], [1.0, 1.0, 1.0]),
            controllable: false,
            expected_dimension: 11,
        },
        ReferenceCase {
            label: "mu1 = mu3 != mu2, d1 = -d3",
            spec: spec([1.0, 2.0, 1.0], [1.0, 1.0, -1.0]),
            controllable: false,
            expected_dimension: 11,
        },
        ReferenceCase {
            label: "equal spacing, v1 != v2 != v3",
            spec: spec([1.0, 1.0, 1.0], [1.0, 1.0, 2.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "equal spacing, v1 != v2 = v3",
            spec: spec([1.0, 1.0, 1.0], [2.0, s32, 1.0]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "equal spacing, v1 = v2 != v3",
            spec: spec([1.0, 1.0, 1.0], [1.0, 2.0f64.sqrt(), 3.0f64.sqrt()]),
            controllable: true,
            expected_dimension: 16,
        },
        ReferenceCase {
            label: "equal spacing, v1 = v3 != v2, d1 = d3",
            spec: spec([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]),
            controllable: false,
            expected_dimension: 11,
        },
        ReferenceCase {
            label: "equal spacing, v1 = v3 != v2, d1 = -d3",
            spec: spec([1.0, 1.0, 1.0], [1.0, 1.0, -1.0]),
            controllable: false,
            expected_dimension: 11,
        },
        ReferenceCase {
            label: "equal spacing, v1 = v2 = v3",
            spec: spec([1.0, 1.0, 1.0], [1.0, s23, 1.0]),
            controllable: false,
            expected_dimension: 4,
        },
        ReferenceCase {
            label: "fully degenerate (mu = 0)",
            spec: spec([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]),
            controllable: false,
            expected_dimension: 2,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{closure, span_contains};
    use crate::system::{build_h0, build_h1};

    fn spec_mu_d(mu: &[f64], d: &[f64], e1: f64) -> (SystemSpec, DerivedParams) {
        let mut levels = vec![e1];
        for m in mu {
            levels.push(levels.last().unwrap() + m);
        }
        let spec = SystemSpec::new(levels, d.to_vec()).unwrap();
        let params = DerivedParams::derive(&spec, 1e-9);
        (spec, params)
    }

    fn verdict_for(mu: &[f64], d: &[f64]) -> (FourLevelCase, Verdict) {
        let (spec, params) = spec_mu_d(mu, d, 1.0);
        classify4(&spec, &params).unwrap()
    }

    #[test]
    fn table_one_spacing_rows() {
        let (c, v) = verdict_for(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]);
        assert_eq!(c.case_tag, CaseTag::MuAllDistinct);
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        let (c, v) = verdict_for(&[1.0, 2.0, 2.0], &[1.0, 1.0, 1.0]);
        assert_eq!(c.case_tag, CaseTag::Mu1NeMu2EqMu3);
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        let (c, v) = verdict_for(&[1.0, 1.0, 2.0], &[1.0, 1.0, 1.0]);
        assert_eq!(c.case_tag, CaseTag::Mu1EqMu2NeMu3);
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        let (c, v) = verdict_for(&[1.0, 2.0, 1.0], &[1.0, 1.0, 2.0]);
        assert_eq!(c.case_tag, CaseTag::Mu1EqMu3NeMu2Nonzero);
        assert_eq!(c.d_condition, Some(false));
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        let (c, v) = verdict_for(&[1.0, 2.0, 1.0], &[1.0, 1.0, 1.0]);
        assert_eq!(c.d_condition, Some(true));
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert_eq!(c.expected_algebra, ExpectedAlgebra::Sp2PlusU1);
    }

    #[test]
    fn mu2_zero_variant() {
        let (c, v) = verdict_for(&[1.0, 0.0, 1.0], &[1.0, 1.0, 2.0]);
        assert_eq!(c.case_tag, CaseTag::Mu1EqMu3NeMu2Zero);
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        let (c, v) = verdict_for(&[1.0, 0.0, 1.0], &[1.0, 1.0, -1.0]);
        assert_eq!(c.case_tag, CaseTag::Mu1EqMu3NeMu2Zero);
        assert_eq!(c.d_condition, Some(true));
        assert_eq!(v.conclusion, Conclusion::NotControllable);
    }

    #[test]
    fn equal_spacing_rows() {
        // v = (1, -2, 7): all distinct
        let (c, v) = verdict_for(&[1.0, 1.0, 1.0], &[1.0, 1.0, 2.0]);
        assert_eq!(c.case_tag, CaseTag::EqualSpacingV);
        assert_eq!(c.v_subcase, Some(VSubcase::AllDistinct));
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);

        // d = (2,1,2): v = (7,-6,7) -> v1 = v3 != v2
        let (c, v) = verdict_for(&[1.0, 1.0, 1.0], &[2.0, 1.0, 2.0]);
        assert_eq!(c.v_subcase, Some(VSubcase::V1EqV3NeV2));
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert_eq!(c.expected_algebra, ExpectedAlgebra::Sp2PlusU1);

        // all v equal
        let (c, v) = verdict_for(&[1.0, 1.0, 1.0], &[3f64.sqrt(), 2.0, 3f64.sqrt()]);
        assert_eq!(c.v_subcase, Some(VSubcase::AllEqual));
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert_eq!(c.expected_algebra, ExpectedAlgebra::U2Like);
    }

    #[test]
    fn fully_degenerate() {
        let (c, v) = verdict_for(&[0.0, 0.0, 0.0], &[0.3, 1.0, -2.0]);
        assert_eq!(c.case_tag, CaseTag::FullyDegenerate);
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert_eq!(c.expected_algebra, ExpectedAlgebra::Abelian2);
    }

    #[test]
    fn rejects_wrong_size_and_decomposable() {
        let spec = SystemSpec::new(vec![0.0, 1.0, 2.0], vec![1.0, 1.0]).unwrap();
        let params = DerivedParams::derive(&spec, 1e-9);
        assert!(matches!(
            classify4(&spec, &params),
            Err(ClassifyError::NotFourLevels(3))
        ));

        let spec = SystemSpec::new(vec![0.0, 1.0, 2.0, 4.0], vec![1.0, 0.0, 1.0]).unwrap();
        let params = DerivedParams::derive(&spec, 1e-9);
        assert!(matches!(
            classify4(&spec, &params),
            Err(ClassifyError::Decomposable(2))
        ));
    }

    #[test]
    fn sp2_basis_is_independent_and_closed() {
        let basis = sp2_basis();
        assert_eq!(basis.len(), 10);
        for m in &basis {
            assert!(m.trace_imag().abs() < 1e-15);
        }
        // Gram matrix rank 10 via closure on the set (sp(2) is a Lie
        // algebra, so the closure adds nothing)
        let r = closure(&basis, 1e-8, None).unwrap();
        assert_eq!(r.dimension, 10);
    }

    #[test]
    fn sp2_contains_the_quoted_element() {
        // x_{w1-w2} = x_21 - x_34 is in the span by construction; check it
        // is also in the closure of the case A system after conjugation
        let (spec, _) = spec_mu_d(&[1.0, 2.0, 1.0], &[1.0, 1.0, 1.0], 0.0);
        let r = closure(&[build_h0(&spec), build_h1(&spec)], 1e-8, None).unwrap();
        assert_eq!(r.dimension, 11);
        let matched = [1.0, -1.0].iter().any(|&sign| {
            let candidate = sp2_plus_identity_span(sign);
            r.basis.iter().all(|b| span_contains(&candidate, b, 1e-8))
        });
        assert!(matched);
    }

    #[test]
    fn dim_eleven_cases_match_sp2_span() {
        for d in [[1.0, 1.0, 1.0], [1.0, 2.0, -1.0], [0.7, 1.3, 0.7]] {
            let (spec, _) = spec_mu_d(&[1.0, 2.0, 1.0], &d, 1.0);
            let r = closure(&[build_h0(&spec), build_h1(&spec)], 1e-8, None).unwrap();
            assert_eq!(r.dimension, 11, "d = {d:?}");
            assert_eq!(
                r.identification,
                crate::closure::AlgebraId::Sp2PlusU1,
                "d = {d:?}"
            );
        }
    }
}
