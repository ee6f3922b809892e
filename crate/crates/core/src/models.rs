//! Named example systems: anharmonic oscillators, a particle in a box,
//! hydrogen-like atoms, truncated harmonic ladders, coupled oscillator
//! pairs, and the constrained families behind the negative results.

use thiserror::Error;

use crate::system::{SpecError, SystemSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{model}: parameter {param} = {value} outside valid range ({requirement})")]
    OutOfRange {
        model: &'static str,
        param: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("{model}: size {size} too small (need {min_size})")]
    TooSmall {
        model: &'static str,
        size: usize,
        min_size: usize,
    },
    #[error("{model}: expected {expected} dipoles, got {got}")]
    DipoleCount {
        model: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{model}: {reason}")]
    Invalid {
        model: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// Dipole choice for the coupled-oscillator model: the square-root ladder
/// restarting at the second oscillator, or uniform couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DipoleVariant {
    SqrtLadder,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    /// Morse oscillator: spacings `mu_n = 1 - B n`. Requires `0 < B < 1/N`
    /// so every spacing stays positive.
    Morse {
        n: usize,
        b: f64,
        e1: f64,
        dipoles: Option<Vec<f64>>,
    },
    /// Particle in a 1D box: `E_n = C n^2`, `C > 0`.
    Box1D {
        n: usize,
        c: f64,
        dipoles: Option<Vec<f64>>,
    },
    /// Hydrogen-like atom: `E_n = -13.9 Z^2 / n^2` (eV). The constant is
    /// kept at the fixture value -13.9 rather than the physical Rydberg
    /// energy; only ratios matter to any criterion.
    Atom {
        n: usize,
        z: f64,
        dipoles: Option<Vec<f64>>,
    },
    /// Truncated harmonic oscillator: `E_n = n + 1/2`, `d_n = sqrt(n)`.
    TruncatedHarmonic { n: usize },
    /// Two coupled `l`-level harmonic oscillators: `N = 2l` levels with a
    /// spacing defect `delta` at position `l` and the chosen dipole variant
    /// (`coupling` is the free dipole at position `l`).
    CoupledOscillators {
        ell: usize,
        mu: f64,
        delta: f64,
        coupling: f64,
        variant: DipoleVariant,
        e1: f64,
    },
    /// `E_1 < E_2 = ... = E_N`: one gap, then full degeneracy.
    DegenerateUpper {
        n: usize,
        gap: f64,
        dipoles: Option<Vec<f64>>,
    },
    /// `N = 2l + 1` levels with all even spacings equal to `mu2` and every
    /// odd spacing distinct from `mu1`; controllable by the first-spacing
    /// rule. The odd spacings beyond the first are free parameters
    /// (defaulting to values distinct from both `mu1` and `mu2`).
    AlternatingOdd {
        ell: usize,
        mu1: f64,
        mu2: f64,
        odd_spacings: Option<Vec<f64>>,
        e1: f64,
        dipoles: Option<Vec<f64>>,
    },
}

fn positive_finite(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

fn at_least(x: f64, min: f64) -> bool {
    x.is_finite() && x >= min
}

fn levels_from_spacings(e1: f64, spacings: &[f64]) -> Vec<f64> {
    let mut levels = Vec::with_capacity(spacings.len() + 1);
    levels.push(e1);
    for &s in spacings {
        levels.push(levels.last().unwrap() + s);
    }
    levels
}

fn dipoles_or_unit(
    model: &'static str,
    n: usize,
    dipoles: Option<Vec<f64>>,
) -> Result<Vec<f64>, ModelError> {
    match dipoles {
        None => Ok(vec![1.0; n - 1]),
        Some(d) if d.len() == n - 1 => Ok(d),
        Some(d) => Err(ModelError::DipoleCount {
            model,
            expected: n - 1,
            got: d.len(),
        }),
    }
}

pub fn make_model(params: &ModelParams) -> Result<SystemSpec, ModelError> {
    match params {
        ModelParams::Morse { n, b, e1, dipoles } => {
            let model = "morse";
            require_size(model, *n, 2)?;
            if !(*b > 0.0 && *b < 1.0 / *n as f64) {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "B",
                    value: *b,
                    requirement: "0 < B < 1/N",
                });
            }
            let spacings: Vec<f64> = (1..*n).map(|k| 1.0 - b * k as f64).collect();
            let d = dipoles_or_unit(model, *n, dipoles.clone())?;
            Ok(SystemSpec::new(levels_from_spacings(*e1, &spacings), d)?)
        }
        ModelParams::Box1D { n, c, dipoles } => {
            let model = "box";
            require_size(model, *n, 2)?;
            if !positive_finite(*c) {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "C",
                    value: *c,
                    requirement: "C > 0",
                });
            }
            let levels: Vec<f64> = (1..=*n).map(|k| c * (k * k) as f64).collect();
            let d = dipoles_or_unit(model, *n, dipoles.clone())?;
            Ok(SystemSpec::new(levels, d)?)
        }
        ModelParams::Atom { n, z, dipoles } => {
            let model = "atom";
            require_size(model, *n, 2)?;
            if !at_least(*z, 1.0) {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "Z",
                    value: *z,
                    requirement: "Z >= 1",
                });
            }
            let levels: Vec<f64> = (1..=*n)
                .map(|k| -13.9 * z * z / (k * k) as f64)
                .collect();
            let d = dipoles_or_unit(model, *n, dipoles.clone())?;
            Ok(SystemSpec::new(levels, d)?)
        }
        ModelParams::TruncatedHarmonic { n } => {
            let model = "truncated_harmonic";
            require_size(model, *n, 2)?;
            let levels: Vec<f64> = (1..=*n).map(|k| k as f64 + 0.5).collect();
            let d: Vec<f64> = (1..*n).map(|k| (k as f64).sqrt()).collect();
            Ok(SystemSpec::new(levels, d)?)
        }
        ModelParams::CoupledOscillators {
            ell,
            mu,
            delta,
            coupling,
            variant,
            e1,
        } => {
            let model = "coupled_oscillators";
            require_size(model, *ell, 2)?;
            if !positive_finite(*mu) {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "mu",
                    value: *mu,
                    requirement: "mu > 0",
                });
            }
            if *delta == 0.0 {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "delta",
                    value: *delta,
                    requirement: "delta != 0",
                });
            }
            if *mu + *delta < 0.0 {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "delta",
                    value: *delta,
                    requirement: "mu + delta >= 0 (levels must stay sorted)",
                });
            }
            if *coupling == 0.0 {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "coupling",
                    value: *coupling,
                    requirement: "coupling != 0",
                });
            }
            let n = 2 * ell;
            let levels: Vec<f64> = (1..=n)
                .map(|k| {
                    let base = e1 + (k - 1) as f64 * mu;
                    if k <= *ell {
                        base
                    } else {
                        base + delta
                    }
                })
                .collect();
            let d: Vec<f64> = (1..n)
                .map(|k| {
                    if k == *ell {
                        *coupling
                    } else {
                        match variant {
                            DipoleVariant::SqrtLadder => {
                                if k < *ell {
                                    (k as f64).sqrt()
                                } else {
                                    ((k - ell) as f64).sqrt()
                                }
                            }
                            DipoleVariant::Uniform => 1.0,
                        }
                    }
                })
                .collect();
            Ok(SystemSpec::new(levels, d)?)
        }
        ModelParams::DegenerateUpper { n, gap, dipoles } => {
            let model = "degenerate_upper";
            require_size(model, *n, 2)?;
            if !positive_finite(*gap) {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "gap",
                    value: *gap,
                    requirement: "gap > 0",
                });
            }
            let mut levels = vec![0.0];
            levels.resize(*n, *gap);
            let d = dipoles_or_unit(model, *n, dipoles.clone())?;
            Ok(SystemSpec::new(levels, d)?)
        }
        ModelParams::AlternatingOdd {
            ell,
            mu1,
            mu2,
            odd_spacings,
            e1,
            dipoles,
        } => {
            let model = "alternating_odd";
            require_size(model, *ell, 1)?;
            let n = 2 * ell + 1;
            if *mu1 <= 0.0 {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "mu1",
                    value: *mu1,
                    requirement: "mu1 > 0",
                });
            }
            if *mu2 < 0.0 {
                return Err(ModelError::OutOfRange {
                    model,
                    param: "mu2",
                    value: *mu2,
                    requirement: "mu2 >= 0",
                });
            }
            let odd: Vec<f64> = match odd_spacings {
                Some(v) => {
                    if v.len() != ell - 1 {
                        return Err(ModelError::Invalid {
                            model,
                            reason: format!(
                                "need {} odd spacings beyond mu1, got {}",
                                ell - 1,
                                v.len()
                            ),
                        });
                    }
                    v.clone()
                }
                // arbitrary defaults, kept distinct from mu1 and mu2
                None => (0..ell - 1)
                    .map(|k| mu2 * 1.5 + mu1 * 0.25 + 0.05 * (k + 1) as f64 * mu1.max(*mu2))
                    .collect(),
            };
            // spacing pattern mu1, mu2, odd[0], mu2, odd[1], ..., mu2
            let mut spacings = Vec::with_capacity(n - 1);
            spacings.push(*mu1);
            for &o in &odd {
                spacings.push(*mu2);
                spacings.push(o);
            }
            spacings.push(*mu2);
            // the construction requires mu1 distinct from every later spacing
            for (i, &s) in spacings.iter().enumerate().skip(1) {
                if s < 0.0 {
                    return Err(ModelError::Invalid {
                        model,
                        reason: format!("spacing {} is negative ({s})", i + 1),
                    });
                }
                if (s - mu1).abs() <= 1e-12 * mu1.abs().max(s.abs()) {
                    return Err(ModelError::Invalid {
                        model,
                        reason: format!("spacing {} collides with mu1 = {mu1}", i + 1),
                    });
                }
            }
            let d = dipoles_or_unit(model, n, dipoles.clone())?;
            Ok(SystemSpec::new(levels_from_spacings(*e1, &spacings), d)?)
        }
    }
}

fn require_size(model: &'static str, size: usize, min_size: usize) -> Result<(), ModelError> {
    if size < min_size {
        return Err(ModelError::TooSmall {
            model,
            size,
            min_size,
        });
    }
    Ok(())
}

/// Equally spaced spec with all `v_n` equal, when one exists for the given
/// size: `d = (d1, d1)` at N = 3, `d = (d1, 2 d1 / sqrt(3), d1)` at N = 4,
/// and for N >= 5 the closed form `d_n^2 = n d1^2 - n(n-1) v / 2` with
/// `v = 2 d1^2 / (N - 4)`, which always forces some `d_n^2 <= 0`, so the
/// result is `None` there.
pub fn theorem4_family(n: usize, d1: f64) -> Result<Option<SystemSpec>, ModelError> {
    let model = "theorem4_family";
    if n < 3 {
        return Err(ModelError::TooSmall {
            model,
            size: n,
            min_size: 3,
        });
    }
    if !positive_finite(d1) {
        return Err(ModelError::OutOfRange {
            model,
            param: "d1",
            value: d1,
            requirement: "d1 > 0",
        });
    }
    let levels: Vec<f64> = (1..=n).map(|k| k as f64).collect();
    let dipoles = match n {
        3 => vec![d1, d1],
        4 => vec![d1, 2.0 * d1 / 3f64.sqrt(), d1],
        _ => {
            let v = 2.0 * d1 * d1 / (n as f64 - 4.0);
            let mut d = Vec::with_capacity(n - 1);
            for k in 1..n {
                let kf = k as f64;
                let dk2 = kf * d1 * d1 - kf * (kf - 1.0) / 2.0 * v;
                if dk2 <= 0.0 {
                    return Ok(None);
                }
                d.push(dk2.sqrt());
            }
            d
        }
    };
    Ok(Some(SystemSpec::new(levels, dipoles)?))
}
