//! Rule engine: sufficient and negative controllability criteria evaluated
//! on the spacing and dipole patterns, with provenance for every verdict.
//!
//! Rule order is fixed: decomposability, then the positive spacing rules
//! (distinct first/last spacing; a single distinct spacing with the dipole
//! side condition; the `v_n` rule for equal spacing), then the negative
//! rules (all `v_n` equal; all dipoles equal), then the exhaustive
//! four-level classification. All applicable positive witnesses are
//! recorded even after the first fires.

use serde::Serialize;

use crate::classifier4::{classify4, CaseTag};
use crate::closure::LieClosureResult;
use crate::system::{DerivedParams, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    /// The dynamical Lie algebra is all of `u(N)`.
    CompletelyControllable,
    /// The algebra is `su(N)` (traceless `H0`): controllable up to a global
    /// phase.
    ControllableUpToPhase,
    NotControllable,
    /// No rule fired and no closure oracle was supplied.
    Undetermined,
}

impl std::fmt::Display for Conclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Conclusion::CompletelyControllable => "completely controllable",
            Conclusion::ControllableUpToPhase => "controllable up to phase",
            Conclusion::NotControllable => "not controllable",
            Conclusion::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

/// A fired rule with its witnessing indices (1-based, as in the usual
/// statement of the criteria).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rule {
    Decomposable { zero_dipole: usize },
    /// First (or, mirrored, last) spacing nonzero and distinct from all
    /// others.
    Theorem1 { mirrored: bool },
    /// Spacing `mu_p` nonzero and distinct from all others, with
    /// `d_{p-k} != +/- d_{p+k}`.
    Theorem2 { p: usize, k: usize },
    /// Equal spacing with `v_p` nonzero and distinct from all others;
    /// `k` is the dipole witness required when `p = N/2`.
    Theorem3 { p: usize, k: Option<usize> },
    /// Equal spacing with all `v_n` equal: the algebra has dimension 4.
    Theorem4,
    /// Equal spacing with all dipoles equal: not completely controllable.
    Theorem5,
    FourLevelCase { case: CaseTag },
    Oracle { dimension: usize, identification: String },
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rule::Decomposable { zero_dipole } => {
                write!(f, "decomposable (d_{zero_dipole} = 0)")
            }
            Rule::Theorem1 { mirrored: false } => write!(f, "theorem 1 (mu_1 distinct)"),
            Rule::Theorem1 { mirrored: true } => write!(f, "theorem 1 (mu_{{N-1}} distinct)"),
            Rule::Theorem2 { p, k } => write!(f, "theorem 2 (p = {p}, k = {k})"),
            Rule::Theorem3 { p, k: None } => write!(f, "theorem 3 (p = {p})"),
            Rule::Theorem3 { p, k: Some(k) } => write!(f, "theorem 3 (p = {p}, k = {k})"),
            Rule::Theorem4 => write!(f, "theorem 4 (all v_n equal)"),
            Rule::Theorem5 => write!(f, "theorem 5 (all d_n equal)"),
            Rule::FourLevelCase { case } => write!(f, "four-level case: {case}"),
            Rule::Oracle {
                dimension,
                identification,
            } => write!(f, "closure oracle (dim {dimension}, {identification})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub provenance: Vec<Rule>,
    pub notes: Vec<String>,
}

/// True iff some dipole vanishes within tolerance. A decomposable system is
/// never completely controllable.
pub fn check_decomposable(spec: &SystemSpec, params: &DerivedParams) -> bool {
    first_zero_dipole(spec, params).is_some()
}

fn first_zero_dipole(spec: &SystemSpec, params: &DerivedParams) -> Option<usize> {
    (1..spec.num_levels()).find(|&n| params.d_is_zero(n))
}

fn positive(params: &DerivedParams) -> Conclusion {
    if params.trace_is_zero() {
        Conclusion::ControllableUpToPhase
    } else {
        Conclusion::CompletelyControllable
    }
}

/// `mu_1 != 0` and distinct from all other spacings, or the mirrored
/// condition on the last spacing.
pub fn check_theorem1(params: &DerivedParams) -> Option<Rule> {
    let m = params.mu().len();
    if !params.mu_is_zero(0) && (1..m).all(|n| !params.mu_eq(0, n)) {
        return Some(Rule::Theorem1 { mirrored: false });
    }
    if !params.mu_is_zero(m - 1) && (0..m - 1).all(|n| !params.mu_eq(m - 1, n)) {
        return Some(Rule::Theorem1 { mirrored: true });
    }
    None
}

/// All `(p, k)` witnesses for the single-distinct-spacing rule. `p` and
/// `k` are 1-based; for `p != N/2` the boundary convention `d_0 = d_N = 0`
/// supplies `k = min(p, N-p)` automatically.
pub fn check_theorem2(spec: &SystemSpec, params: &DerivedParams) -> Vec<Rule> {
    let n_levels = spec.num_levels();
    let m = params.mu().len();
    let mut out = Vec::new();
    for p in 1..=m {
        let pi = p - 1;
        if params.mu_is_zero(pi) {
            continue;
        }
        if !(0..m).all(|n| n == pi || !params.mu_eq(pi, n)) {
            continue;
        }
        if 2 * p != n_levels {
            out.push(Rule::Theorem2 {
                p,
                k: p.min(n_levels - p),
            });
        } else if let Some(k) = dipole_witness(spec, params, p) {
            out.push(Rule::Theorem2 { p, k });
        }
    }
    out
}

/// Smallest `k` with `d_{p-k} != +/- d_{p+k}` (boundary convention applies).
fn dipole_witness(spec: &SystemSpec, params: &DerivedParams, p: usize) -> Option<usize> {
    let n_levels = spec.num_levels();
    (1..=p.min(n_levels - p)).find(|&k| !params.d_eq_abs(p - k, p + k, spec))
}

/// Equal-spacing rule: some `v_p != 0` distinct from all other `v_n`, plus
/// the dipole witness when `p = N/2`.
pub fn check_theorem3(spec: &SystemSpec, params: &DerivedParams) -> Vec<Rule> {
    if !params.equally_spaced() || params.mu_all_zero() {
        return Vec::new();
    }
    let n_levels = spec.num_levels();
    let m = params.v().len();
    let mut out = Vec::new();
    for p in 1..=m {
        let pi = p - 1;
        if params.v_is_zero(pi) {
            continue;
        }
        if !(0..m).all(|n| n == pi || !params.v_eq(pi, n)) {
            continue;
        }
        if 2 * p != n_levels {
            out.push(Rule::Theorem3 { p, k: None });
        } else if let Some(k) = dipole_witness(spec, params, p) {
            out.push(Rule::Theorem3 { p, k: Some(k) });
        }
    }
    out
}

/// Equal spacing with all `v_n` equal (N > 2): the dynamical Lie algebra has
/// dimension four, so the system is not completely controllable.
pub fn check_theorem4(spec: &SystemSpec, params: &DerivedParams) -> bool {
    spec.num_levels() > 2
        && params.equally_spaced()
        && !params.mu_all_zero()
        && params.v_all_equal()
}

/// Equal spacing with all dipoles equal to a common value (N > 2): not
/// completely controllable. The common value need not be 1 because scaling
/// a generator leaves the closure unchanged.
pub fn check_theorem5(spec: &SystemSpec, params: &DerivedParams) -> bool {
    let m = spec.dipoles().len();
    spec.num_levels() > 2
        && params.equally_spaced()
        && !params.mu_all_zero()
        && (1..=m).all(|n| params.d_eq(1, n, spec))
}

/// Run every rule in order and produce a verdict with provenance. When all
/// rules abstain the verdict is `Undetermined`, unless a closure result is
/// supplied, in which case the oracle decides.
pub fn full_verdict(
    spec: &SystemSpec,
    params: &DerivedParams,
    oracle: Option<&LieClosureResult>,
) -> Verdict {
    let mut notes = params.fragility_notes();

    if let Some(n) = first_zero_dipole(spec, params) {
        return Verdict {
            conclusion: Conclusion::NotControllable,
            provenance: vec![Rule::Decomposable { zero_dipole: n }],
            notes,
        };
    }

    let mut provenance = Vec::new();
    if let Some(r) = check_theorem1(params) {
        provenance.push(r);
    }
    provenance.extend(check_theorem2(spec, params));
    provenance.extend(check_theorem3(spec, params));

    if !provenance.is_empty() {
        return Verdict {
            conclusion: positive(params),
            provenance,
            notes,
        };
    }

    if check_theorem4(spec, params) {
        notes.push("equal spacing with all v_n equal: closure dimension is 4".to_string());
        return Verdict {
            conclusion: Conclusion::NotControllable,
            provenance: vec![Rule::Theorem4],
            notes,
        };
    }
    if check_theorem5(spec, params) {
        let d1 = spec.dipoles()[0];
        if (d1 - 1.0).abs() > f64::EPSILON {
            notes.push(format!(
                "all dipoles equal {d1}; reduced to the unit-dipole statement by generator scaling"
            ));
        }
        return Verdict {
            conclusion: Conclusion::NotControllable,
            provenance: vec![Rule::Theorem5],
            notes,
        };
    }

    if spec.num_levels() == 4 {
        if let Ok((_case, verdict)) = classify4(spec, params) {
            return verdict;
        }
    }

    if let Some(r) = oracle {
        let n = spec.num_levels();
        let conclusion = if r.dimension == n * n {
            Conclusion::CompletelyControllable
        } else if r.dimension == n * n - 1 && !r.contains_identity && params.trace_is_zero() {
            Conclusion::ControllableUpToPhase
        } else {
            Conclusion::NotControllable
        };
        return Verdict {
            conclusion,
            provenance: vec![Rule::Oracle {
                dimension: r.dimension,
                identification: r.identification.to_string(),
            }],
            notes,
        };
    }

    Verdict {
        conclusion: Conclusion::Undetermined,
        provenance: Vec::new(),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SystemSpec;

    fn spec_mu_d(mu: &[f64], d: &[f64], e1: f64) -> (SystemSpec, DerivedParams) {
        let mut levels = vec![e1];
        for m in mu {
            levels.push(levels.last().unwrap() + m);
        }
        let spec = SystemSpec::new(levels, d.to_vec()).unwrap();
        let params = DerivedParams::derive(&spec, 1e-9);
        (spec, params)
    }

    #[test]
    fn decomposable_detection() {
        let (s, p) = spec_mu_d(&[1.0, 1.0, 1.0], &[1.0, 0.0, 1.0], 0.0);
        assert!(check_decomposable(&s, &p));
        let (s, p) = spec_mu_d(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 0.0);
        assert!(!check_decomposable(&s, &p));
        // tiny dipole relative to the family scale counts as zero
        let (s, p) = spec_mu_d(&[1.0, 1.0, 1.0], &[1e-15, 1.0, 1.0], 0.0);
        assert!(check_decomposable(&s, &p));
    }

    #[test]
    fn theorem1_morse_and_degenerate() {
        // Morse spacings 1 - 0.1 n
        let (_, p) = spec_mu_d(&[0.9, 0.8, 0.7], &[1.0, 1.0, 1.0], 1.0);
        assert_eq!(check_theorem1(&p), Some(Rule::Theorem1 { mirrored: false }));

        // levels (0,1,1,1): mu = (1,0,0)
        let (_, p) = spec_mu_d(&[1.0, 0.0, 0.0], &[0.4, 2.0, 1.0], 0.0);
        assert_eq!(check_theorem1(&p), Some(Rule::Theorem1 { mirrored: false }));

        // equally spaced: no verdict
        let (_, p) = spec_mu_d(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 0.0);
        assert_eq!(check_theorem1(&p), None);
    }

    #[test]
    fn theorem1_mirrored() {
        let (_, p) = spec_mu_d(&[1.0, 1.0, 2.0], &[1.0, 1.0, 1.0], 0.0);
        assert_eq!(check_theorem1(&p), Some(Rule::Theorem1 { mirrored: true }));
    }

    #[test]
    fn theorem2_witnesses() {
        // mu = (1,1,2): p = 3 (automatic k since p != N/2)
        let (s, p) = spec_mu_d(&[1.0, 1.0, 2.0], &[1.0, 1.0, 1.0], 0.0);
        let w = check_theorem2(&s, &p);
        assert_eq!(w, vec![Rule::Theorem2 { p: 3, k: 1 }]);

        // mu = (1,2,1), d = (1,2,1): only candidate p = 2 = N/2, d1 = d3
        let (s, p) = spec_mu_d(&[1.0, 2.0, 1.0], &[1.0, 2.0, 1.0], 0.0);
        assert!(check_theorem2(&s, &p).is_empty());

        // same spacings, d = (1,1,2): p = 2, k = 1
        let (s, p) = spec_mu_d(&[1.0, 2.0, 1.0], &[1.0, 1.0, 2.0], 0.0);
        assert_eq!(check_theorem2(&s, &p), vec![Rule::Theorem2 { p: 2, k: 1 }]);
    }

    #[test]
    fn theorem2_automatic_k_never_inspects_interior() {
        // whenever p != N/2 the witness k = min(p, N-p) pairs a real dipole
        // with a boundary zero
        let (s, p) = spec_mu_d(&[1.0, 1.0, 1.0, 3.0], &[1.0, 1.0, 1.0, 1.0], 0.0);
        let w = check_theorem2(&s, &p);
        assert_eq!(w, vec![Rule::Theorem2 { p: 4, k: 1 }]);
    }

    #[test]
    fn theorem3_harmonic() {
        // truncated harmonic oscillator N=4: v = (0,0,4), p = 3
        let (s, p) = spec_mu_d(
            &[1.0, 1.0, 1.0],
            &[1.0, 2f64.sqrt(), 3f64.sqrt()],
            1.5,
        );
        assert_eq!(check_theorem3(&s, &p), vec![Rule::Theorem3 { p: 3, k: None }]);

        // N=5, d = (1,1,1,2): v = (1,0,-3,7), p = 4
        let (s, p) = spec_mu_d(&[1.0; 4], &[1.0, 1.0, 1.0, 2.0], 1.0);
        let w = check_theorem3(&s, &p);
        assert!(w.contains(&Rule::Theorem3 { p: 4, k: None }), "{w:?}");

        // d = (sqrt3, 2, sqrt3): all v equal, no witness
        let (s, p) = spec_mu_d(&[1.0; 3], &[3f64.sqrt(), 2.0, 3f64.sqrt()], 1.0);
        assert!(check_theorem3(&s, &p).is_empty());
    }

    #[test]
    fn theorem4_and_5() {
        let (s, p) = spec_mu_d(&[1.0, 1.0], &[1.0, 1.0], 1.0);
        assert!(check_theorem4(&s, &p));
        assert!(check_theorem5(&s, &p));

        let (s, p) = spec_mu_d(&[1.0; 3], &[3f64.sqrt(), 2.0, 3f64.sqrt()], 1.0);
        assert!(check_theorem4(&s, &p));
        assert!(!check_theorem5(&s, &p));

        // N = 2 excluded
        let (s, p) = spec_mu_d(&[1.0], &[1.0], 1.0);
        assert!(!check_theorem4(&s, &p));
        assert!(!check_theorem5(&s, &p));

        // any common dipole value fires theorem 5
        let (s, p) = spec_mu_d(&[1.0; 4], &[0.7; 4], 1.0);
        assert!(check_theorem5(&s, &p));
    }

    #[test]
    fn full_verdict_examples() {
        // levels (0,1,2,3), d = (1,1,2): theorem 3 with v = (1,-2,7)
        let (s, p) = spec_mu_d(&[1.0; 3], &[1.0, 1.0, 2.0], 0.0);
        let v = full_verdict(&s, &p, None);
        assert_eq!(v.conclusion, Conclusion::CompletelyControllable);
        assert!(v
            .provenance
            .iter()
            .any(|r| matches!(r, Rule::Theorem3 { .. })));

        // decomposable short-circuits
        let (s, p) = spec_mu_d(&[0.9, 0.8, 0.7], &[1.0, 0.0, 1.0], 1.0);
        let v = full_verdict(&s, &p, None);
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert_eq!(v.provenance, vec![Rule::Decomposable { zero_dipole: 2 }]);

        // traceless spec with a positive rule: up-to-phase only
        // 4 e1 + 3*0.9 + 2*0.8 + 0.7 = 0 at e1 = -1.25
        let (s, p) = spec_mu_d(&[0.9, 0.8, 0.7], &[1.0, 1.0, 1.0], -1.25);
        assert!(p.trace_is_zero(), "trace = {}", p.trace_h0());
        let v = full_verdict(&s, &p, None);
        assert_eq!(v.conclusion, Conclusion::ControllableUpToPhase);
    }

    #[test]
    fn four_level_fallback_is_definitive() {
        // mu = (1,2,1), d = (1,1,1): no general rule fires, classifier does
        let (s, p) = spec_mu_d(&[1.0, 2.0, 1.0], &[1.0, 1.0, 1.0], 0.0);
        let v = full_verdict(&s, &p, None);
        assert_eq!(v.conclusion, Conclusion::NotControllable);
        assert!(v
            .provenance
            .iter()
            .any(|r| matches!(r, Rule::FourLevelCase { .. })));
    }

    #[test]
    fn undetermined_without_oracle() {
        // N = 5, equal spacing, d = (1,1,1,1): theorem 5 fires...
        let (s, p) = spec_mu_d(&[1.0; 4], &[1.0; 4], 1.0);
        assert_eq!(full_verdict(&s, &p, None).conclusion, Conclusion::NotControllable);

        // ...but d = (1,-1,1,-1) is outside every rule for N = 5
        let (s, p) = spec_mu_d(&[1.0; 4], &[1.0, -1.0, 1.0, -1.0], 1.0);
        let v = full_verdict(&s, &p, None);
        assert_eq!(v.conclusion, Conclusion::Undetermined);
        assert!(v.provenance.is_empty());
    }
}
