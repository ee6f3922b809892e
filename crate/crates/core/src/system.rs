//! System model: energy levels, dipole moments, derived parameters and the
//! skew-Hermitian matrices `iH0`, `iH1` together with the standard su(N)
//! basis elements.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("a system needs at least two levels, got {0}")]
    TooFewLevels(usize),
    #[error("energy levels must be non-decreasing: level {index} is {value}, below {prev}")]
    UnsortedLevels { index: usize, value: f64, prev: f64 },
    #[error("a {levels}-level system needs {expected} dipole moments, got {got}")]
    DipoleCount {
        levels: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {field} at index {index}")]
    NonFinite { field: &'static str, index: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix dimensions differ: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("vector of length {got} cannot encode a {dim}x{dim} skew-Hermitian matrix (need {expected})")]
    BadVectorLength {
        dim: usize,
        expected: usize,
        got: usize,
    },
    #[error("basis index out of range: kind {kind:?}, n={n}, n'={np}, N={dim}")]
    BasisIndex {
        kind: BasisKind,
        n: usize,
        np: usize,
        dim: usize,
    },
}

/// A dipole-coupled N-level system: `H = H0 + f(t) H1` with
/// `H0 = diag(E_n)` and `H1` tridiagonal with couplings `d_n`.
///
/// Levels must be non-decreasing; unsorted input is rejected rather than
/// sorted because the dipoles are positional (`d_n` couples levels `n` and
/// `n+1`). Zero dipoles are accepted and diagnosed as decomposable
/// downstream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemSpec {
    levels: Vec<f64>,
    dipoles: Vec<f64>,
}

impl SystemSpec {
    pub fn new(levels: Vec<f64>, dipoles: Vec<f64>) -> Result<Self, SpecError> {
        if levels.len() < 2 {
            return Err(SpecError::TooFewLevels(levels.len()));
        }
        for (i, &e) in levels.iter().enumerate() {
            if !e.is_finite() {
                return Err(SpecError::NonFinite {
                    field: "levels",
                    index: i,
                });
            }
        }
        for (i, &d) in dipoles.iter().enumerate() {
            if !d.is_finite() {
                return Err(SpecError::NonFinite {
                    field: "dipoles",
                    index: i,
                });
            }
        }
        for i in 1..levels.len() {
            if levels[i] < levels[i - 1] {
                return Err(SpecError::UnsortedLevels {
                    index: i,
                    value: levels[i],
                    prev: levels[i - 1],
                });
            }
        }
        if dipoles.len() != levels.len() - 1 {
            return Err(SpecError::DipoleCount {
                levels: levels.len(),
                expected: levels.len() - 1,
                got: dipoles.len(),
            });
        }
        Ok(Self { levels, dipoles })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn dipoles(&self) -> &[f64] {
        &self.dipoles
    }

    /// Dipole with the boundary convention `d_0 = d_N = 0`; `n` is 1-based,
    /// valid for `0 <= n <= N`.
    pub fn dipole_ext(&self, n: usize) -> f64 {
        if n == 0 || n >= self.levels.len() {
            0.0
        } else {
            self.dipoles[n - 1]
        }
    }
}

/// Spacings `mu_n = E_{n+1} - E_n`, the parameters
/// `v_n = 2 d_n^2 - d_{n-1}^2 - d_{n+1}^2` (with `d_0 = d_N = 0`),
/// the trace of `H0`, and the tolerance used for all scalar equality tests.
///
/// Every equality test is relative: two values of a family (spacings,
/// dipoles, `v_n`) are equal when they differ by at most `eps_param` times
/// the largest magnitude in that family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedParams {
    mu: Vec<f64>,
    v: Vec<f64>,
    trace_h0: f64,
    eps_param: f64,
    #[serde(skip)]
    dipoles: Vec<f64>,
    #[serde(skip)]
    mu_scale: f64,
    #[serde(skip)]
    d_scale: f64,
    #[serde(skip)]
    v_scale: f64,
    #[serde(skip)]
    level_scale: f64,
}

fn family_scale(values: &[f64]) -> f64 {
    let m = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

impl DerivedParams {
    /// Derive spacings and `v_n` from a valid spec. `eps_param` must be
    /// positive.
    pub fn derive(spec: &SystemSpec, eps_param: f64) -> Self {
        assert!(
            eps_param > 0.0 && eps_param.is_finite(),
            "eps_param must be positive and finite"
        );
        let n = spec.num_levels();
        let mu: Vec<f64> = (0..n - 1)
            .map(|i| spec.levels[i + 1] - spec.levels[i])
            .collect();
        let v: Vec<f64> = (1..n)
            .map(|k| {
                let d = |i: usize| spec.dipole_ext(i);
                2.0 * d(k) * d(k) - d(k - 1) * d(k - 1) - d(k + 1) * d(k + 1)
            })
            .collect();
        let trace_h0 = spec.levels.iter().sum();
        DerivedParams {
            mu_scale: family_scale(&mu),
            d_scale: family_scale(&spec.dipoles),
            v_scale: family_scale(&v),
            level_scale: family_scale(&spec.levels),
            mu,
            v,
            trace_h0,
            eps_param,
            dipoles: spec.dipoles.clone(),
        }
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn trace_h0(&self) -> f64 {
        self.trace_h0
    }

    pub fn eps_param(&self) -> f64 {
        self.eps_param
    }

    fn eq_scaled(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.eps_param * scale
    }

    fn fragile_scaled(&self, a: f64, b: f64, scale: f64) -> bool {
        let diff = (a - b).abs();
        let t = self.eps_param * scale;
        diff > 0.1 * t && diff <= 10.0 * t
    }

    /// `mu_i == mu_j` within tolerance; indices are 0-based.
    pub fn mu_eq(&self, i: usize, j: usize) -> bool {
        self.eq_scaled(self.mu[i], self.mu[j], self.mu_scale)
    }

    pub fn mu_is_zero(&self, i: usize) -> bool {
        self.eq_scaled(self.mu[i], 0.0, self.mu_scale)
    }

    pub fn mu_all_zero(&self) -> bool {
        (0..self.mu.len()).all(|i| self.mu_is_zero(i))
    }

    /// All spacings coincide within tolerance.
    pub fn equally_spaced(&self) -> bool {
        (1..self.mu.len()).all(|i| self.mu_eq(0, i))
    }

    /// Signed equality `d_i == d_j` (1-based, boundary convention applies).
    pub fn d_eq(&self, i: usize, j: usize, spec: &SystemSpec) -> bool {
        self.eq_scaled(spec.dipole_ext(i), spec.dipole_ext(j), self.d_scale)
    }

    /// `d_i == +/- d_j`, i.e. equal magnitudes (1-based indices with the
    /// boundary convention `d_0 = d_N = 0`).
    pub fn d_eq_abs(&self, i: usize, j: usize, spec: &SystemSpec) -> bool {
        self.eq_scaled(
            spec.dipole_ext(i).abs(),
            spec.dipole_ext(j).abs(),
            self.d_scale,
        )
    }

    /// `d_i == 0` within tolerance (1-based index into the stored dipoles).
    pub fn d_is_zero(&self, i: usize) -> bool {
        self.eq_scaled(self.dipoles[i - 1], 0.0, self.d_scale)
    }

    pub fn v_eq(&self, i: usize, j: usize) -> bool {
        self.eq_scaled(self.v[i], self.v[j], self.v_scale)
    }

    pub fn v_is_zero(&self, i: usize) -> bool {
        self.eq_scaled(self.v[i], 0.0, self.v_scale)
    }

    pub fn v_all_equal(&self) -> bool {
        (1..self.v.len()).all(|i| self.v_eq(0, i))
    }

    pub fn trace_is_zero(&self) -> bool {
        self.eq_scaled(self.trace_h0, 0.0, self.level_scale)
    }

    /// Notes for comparisons that land near the tolerance boundary. A
    /// sufficient criterion evaluated on such a spec is numerically fragile.
    pub fn fragility_notes(&self) -> Vec<String> {
        let mut notes = Vec::new();
        let families: [(&str, &[f64], f64); 3] = [
            ("mu", &self.mu, self.mu_scale),
            ("d", &self.dipoles, self.d_scale),
            ("v", &self.v, self.v_scale),
        ];
        for (name, vals, scale) in families {
            for i in 0..vals.len() {
                if self.fragile_scaled(vals[i], 0.0, scale) {
                    notes.push(format!(
                        "{}_{} is within 10x tolerance of zero; verdict is numerically fragile",
                        name,
                        i + 1
                    ));
                }
                for j in i + 1..vals.len() {
                    if self.fragile_scaled(vals[i], vals[j], scale) {
                        notes.push(format!(
                            "{name}_{} and {name}_{} are within 10x tolerance of equality; verdict is numerically fragile",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        notes
    }
}

/// An N x N skew-Hermitian matrix (`A^dag = -A`).
///
/// Constructors guarantee the structure; arithmetic closed on the class
/// (real linear combinations and commutators) preserves it. The canonical
/// real vectorization has dimension `N^2`: the N imaginary diagonal entries,
/// then the real parts and the imaginary parts of the strictly upper
/// triangle in row-major order. The vector representation round-trips
/// bitwise; the reconstructed lower triangle uses only negation, so matrix
/// entries round-trip exactly by value.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewHermMatrix {
    data: Array2<Complex64>,
}

impl SkewHermMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: Array2::zeros((dim, dim)),
        }
    }

    /// `i * diag(values)`.
    pub fn from_diag_imag(values: &[f64]) -> Self {
        let mut data = Array2::zeros((values.len(), values.len()));
        for (k, &x) in values.iter().enumerate() {
            data[[k, k]] = Complex64::new(0.0, x);
        }
        Self { data }
    }

    /// `i * I_dim`.
    pub fn identity_imag(dim: usize) -> Self {
        Self::from_diag_imag(&vec![1.0; dim])
    }

    pub(crate) fn from_raw_unchecked(data: Array2<Complex64>) -> Self {
        debug_assert!(data.is_square());
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            data: self.data.mapv(|z| z * c),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.dim() != other.dim() {
            return Err(MatrixError::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    /// Imaginary part of the trace (the real part is zero by structure).
    pub fn trace_imag(&self) -> f64 {
        (0..self.dim()).map(|k| self.data[[k, k]].im).sum()
    }

    pub fn vectorize(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            out.push(self.data[[k, k]].im);
        }
        for m in 0..n {
            for k in m + 1..n {
                out.push(self.data[[m, k]].re);
            }
        }
        for m in 0..n {
            for k in m + 1..n {
                out.push(self.data[[m, k]].im);
            }
        }
        out
    }

    pub fn from_vector(dim: usize, v: &[f64]) -> Result<Self, MatrixError> {
        if v.len() != dim * dim {
            return Err(MatrixError::BadVectorLength {
                dim,
                expected: dim * dim,
                got: v.len(),
            });
        }
        let mut data = Array2::zeros((dim, dim));
        for k in 0..dim {
            data[[k, k]] = Complex64::new(0.0, v[k]);
        }
        let upper = dim * (dim - 1) / 2;
        let mut idx = 0;
        for m in 0..dim {
            for k in m + 1..dim {
                let re = v[dim + idx];
                let im = v[dim + upper + idx];
                data[[m, k]] = Complex64::new(re, im);
                data[[k, m]] = Complex64::new(-re, im);
                idx += 1;
            }
        }
        Ok(Self { data })
    }
}

/// Commutator `[A, B] = AB - BA`; closed on skew-Hermitian matrices.
pub fn commutator_matrices(
    a: &SkewHermMatrix,
    b: &SkewHermMatrix,
) -> Result<SkewHermMatrix, MatrixError> {
    if a.dim() != b.dim() {
        return Err(MatrixError::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ab = a.data.dot(&b.data);
    let ba = b.data.dot(&a.data);
    Ok(SkewHermMatrix::from_raw_unchecked(ab - ba))
}

/// `iH0 = i * diag(E_n)`.
pub fn build_h0(spec: &SystemSpec) -> SkewHermMatrix {
    SkewHermMatrix::from_diag_imag(spec.levels())
}

/// `iH1`: tridiagonal with `i d_n` on the super- and sub-diagonal.
pub fn build_h1(spec: &SystemSpec) -> SkewHermMatrix {
    let n = spec.num_levels();
    let mut data = Array2::zeros((n, n));
    for (k, &d) in spec.dipoles().iter().enumerate() {
        data[[k, k + 1]] = Complex64::new(0.0, d);
        data[[k + 1, k]] = Complex64::new(0.0, d);
    }
    SkewHermMatrix::from_raw_unchecked(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    X,
    Y,
    H,
}

/// Standard su(N) basis element, with 1-based indices as in the usual
/// physics convention:
///
/// * `X`: `x_{nn'} = e_{nn'} - e_{n'n}` for `1 <= n < n' <= N`,
/// * `Y`: `y_{nn'} = i (e_{nn'} + e_{n'n})` for `1 <= n < n' <= N`,
/// * `H`: `h_n = i (e_{nn} - e_{n+1,n+1})` for `1 <= n <= N-1` (`np` ignored).
pub fn basis_element(
    kind: BasisKind,
    n: usize,
    np: usize,
    dim: usize,
) -> Result<SkewHermMatrix, MatrixError> {
    let err = || MatrixError::BasisIndex { kind, n, np, dim };
    let mut data = Array2::<Complex64>::zeros((dim, dim));
    match kind {
        BasisKind::X => {
            if !(1 <= n && n < np && np <= dim) {
                return Err(err());
            }
            data[[n - 1, np - 1]] = Complex64::new(1.0, 0.0);
            data[[np - 1, n - 1]] = Complex64::new(-1.0, 0.0);
        }
        BasisKind::Y => {
            if !(1 <= n && n < np && np <= dim) {
                return Err(err());
            }
            data[[n - 1, np - 1]] = Complex64::new(0.0, 1.0);
            data[[np - 1, n - 1]] = Complex64::new(0.0, 1.0);
        }
        BasisKind::H => {
            if !(1..dim).contains(&n) {
                return Err(err());
            }
            data[[n - 1, n - 1]] = Complex64::new(0.0, 1.0);
            data[[n, n]] = Complex64::new(0.0, -1.0);
        }
    }
    Ok(SkewHermMatrix::from_raw_unchecked(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn rejects_unsorted_levels() {
        let err = SystemSpec::new(vec![0.0, 2.0, 1.0], vec![1.0, 1.0]).unwrap_err();
        assert!(matches!(err, SpecError::UnsortedLevels { index: 2, .. }));
    }

    #[test]
    fn rejects_wrong_dipole_count() {
        let err = SystemSpec::new(vec![0.0, 1.0, 2.0], vec![1.0]).unwrap_err();
        assert!(matches!(
            err,
            SpecError::DipoleCount {
                expected: 2,
                got: 1,
                ..
            }
        ));
    }

    #[test]
    fn rejects_single_level() {
        assert!(matches!(
            SystemSpec::new(vec![0.0], vec![]),
            Err(SpecError::TooFewLevels(1))
        ));
    }

    #[test]
    fn derive_params_harmonic() {
        // truncated 4-level harmonic oscillator: v = (0, 0, 4)
        let spec =
            SystemSpec::new(vec![0.0, 1.0, 2.0, 3.0], vec![1.0, 2f64.sqrt(), 3f64.sqrt()])
                .unwrap();
        let p = DerivedParams::derive(&spec, 1e-9);
        assert_eq!(p.mu(), &[1.0, 1.0, 1.0]);
        assert!(p.equally_spaced());
        let v = p.v();
        assert!((v[0]).abs() < 1e-12);
        assert!((v[1]).abs() < 1e-12);
        assert!((v[2] - 4.0).abs() < 1e-12);
        assert_eq!(p.trace_h0(), 6.0);
    }

    #[test]
    fn derive_params_degenerate() {
        let spec = SystemSpec::new(vec![0.0; 4], vec![1.0, 1.0, 1.0]).unwrap();
        let p = DerivedParams::derive(&spec, 1e-9);
        assert_eq!(p.mu(), &[0.0, 0.0, 0.0]);
        assert!(p.mu_all_zero());
    }

    #[test]
    fn derive_params_hand_case() {
        // levels (0,1,3,4), d (1,1,1) -> mu = (1,2,1), v = (1,0,1)
        let spec = SystemSpec::new(vec![0.0, 1.0, 3.0, 4.0], vec![1.0, 1.0, 1.0]).unwrap();
        let p = DerivedParams::derive(&spec, 1e-9);
        assert_eq!(p.mu(), &[1.0, 2.0, 1.0]);
        assert_eq!(p.v(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn h0_is_imaginary_diagonal() {
        let spec = SystemSpec::new(vec![-1.0, 0.0, 2.0], vec![1.0, 1.0]).unwrap();
        let m = build_h0(&spec);
        assert_eq!(m.matrix()[[0, 0]], C64::new(0.0, -1.0));
        assert_eq!(m.matrix()[[1, 1]], C64::new(0.0, 0.0));
        assert_eq!(m.matrix()[[2, 2]], C64::new(0.0, 2.0));
    }

    #[test]
    fn h1_is_traceless_tridiagonal() {
        let spec = SystemSpec::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0]).unwrap();
        let m = build_h1(&spec);
        assert_eq!(m.matrix()[[0, 1]], C64::new(0.0, 1.0));
        assert_eq!(m.matrix()[[1, 2]], C64::new(0.0, 2.0));
        assert_eq!(m.matrix()[[1, 0]], C64::new(0.0, 1.0));
        assert_eq!(m.trace_imag(), 0.0);
    }

    #[test]
    fn h1_equals_dipole_weighted_y_sum() {
        let spec = SystemSpec::new(vec![0.0, 1.0, 3.0, 4.0], vec![0.5, -1.5, 2.0]).unwrap();
        let mut acc = SkewHermMatrix::zeros(4);
        for n in 1..=3 {
            let y = basis_element(BasisKind::Y, n, n + 1, 4).unwrap();
            acc = acc.add(&y.scaled(spec.dipoles()[n - 1])).unwrap();
        }
        let h1 = build_h1(&spec);
        for ((i, j), z) in h1.matrix().indexed_iter() {
            assert_eq!(*z, acc.matrix()[[i, j]]);
        }
    }

    #[test]
    fn basis_elements_match_definitions() {
        let x = basis_element(BasisKind::X, 1, 2, 2).unwrap();
        assert_eq!(x.matrix()[[0, 1]], C64::new(1.0, 0.0));
        assert_eq!(x.matrix()[[1, 0]], C64::new(-1.0, 0.0));
        let y = basis_element(BasisKind::Y, 1, 2, 2).unwrap();
        assert_eq!(y.matrix()[[0, 1]], C64::new(0.0, 1.0));
        assert_eq!(y.matrix()[[1, 0]], C64::new(0.0, 1.0));
        let h = basis_element(BasisKind::H, 1, 0, 3).unwrap();
        assert_eq!(h.matrix()[[0, 0]], C64::new(0.0, 1.0));
        assert_eq!(h.matrix()[[1, 1]], C64::new(0.0, -1.0));
        assert_eq!(h.matrix()[[2, 2]], C64::new(0.0, 0.0));
    }

    #[test]
    fn basis_index_out_of_range() {
        assert!(basis_element(BasisKind::X, 2, 2, 3).is_err());
        assert!(basis_element(BasisKind::Y, 0, 1, 3).is_err());
        assert!(basis_element(BasisKind::H, 3, 0, 3).is_err());
    }

    #[test]
    fn generation_identities_hold() {
        // [x_{n,n+k-1}, x_{n+k-1,n+k}] = x_{n,n+k} and the y analogue,
        // plus [x_{n,n+1}, y_{n,n+1}] = 2 h_n.
        let dim = 5;
        for n in 1..=dim - 2 {
            for k in 2..=dim - n {
                let a = basis_element(BasisKind::X, n, n + k - 1, dim).unwrap();
                let b = basis_element(BasisKind::X, n + k - 1, n + k, dim).unwrap();
                let want = basis_element(BasisKind::X, n, n + k, dim).unwrap();
                let got = commutator_matrices(&a, &b).unwrap();
                for ((i, j), z) in got.matrix().indexed_iter() {
                    assert!((z - want.matrix()[[i, j]]).norm() < 1e-12);
                }
                let a = basis_element(BasisKind::Y, n, n + k - 1, dim).unwrap();
                let want = basis_element(BasisKind::Y, n, n + k, dim).unwrap();
                let got = commutator_matrices(&a, &b).unwrap();
                for ((i, j), z) in got.matrix().indexed_iter() {
                    assert!((z - want.matrix()[[i, j]]).norm() < 1e-12);
                }
            }
        }
        for n in 1..dim {
            let x = basis_element(BasisKind::X, n, n + 1, dim).unwrap();
            let y = basis_element(BasisKind::Y, n, n + 1, dim).unwrap();
            let h = basis_element(BasisKind::H, n, 0, dim).unwrap().scaled(2.0);
            let got = commutator_matrices(&x, &y).unwrap();
            for ((i, j), z) in got.matrix().indexed_iter() {
                assert!((z - h.matrix()[[i, j]]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn vectorize_round_trip_is_bitwise() {
        let spec = SystemSpec::new(vec![0.3, 1.7, 3.1, 4.0], vec![0.9, -1.1, 2.3]).unwrap();
        let a = commutator_matrices(&build_h0(&spec), &build_h1(&spec)).unwrap();
        let b = commutator_matrices(&a, &build_h1(&spec)).unwrap();
        for m in [build_h0(&spec), build_h1(&spec), a, b] {
            let v = m.vectorize();
            let back = SkewHermMatrix::from_vector(m.dim(), &v).unwrap();
            // the vector representation round-trips bitwise
            let v2 = back.vectorize();
            for (x, y) in v.iter().zip(&v2) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            // matrix entries round-trip exactly by value (the reconstructed
            // lower triangle may flip the sign of a zero real part)
            for ((i, j), z) in m.matrix().indexed_iter() {
                let w = back.matrix()[[i, j]];
                assert_eq!(z.re, w.re);
                assert_eq!(z.im, w.im);
                if i <= j {
                    assert_eq!(z.re.to_bits(), w.re.to_bits());
                    assert_eq!(z.im.to_bits(), w.im.to_bits());
                }
            }
        }
    }

    #[test]
    fn tolerance_flags_tiny_dipole_as_zero() {
        let spec = SystemSpec::new(vec![0.0, 1.0, 2.0, 3.0], vec![1e-15, 1.0, 1.0]).unwrap();
        let p = DerivedParams::derive(&spec, 1e-9);
        assert!(p.d_is_zero(1));
        assert!(!p.d_is_zero(2));
    }
}
