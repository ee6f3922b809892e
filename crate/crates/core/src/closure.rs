//! Commutator closure of a set of skew-Hermitian generators, with
//! incremental rank tracking and identification of the resulting algebra.
//!
//! The algorithm is breadth-first: maintain an orthonormal basis of the
//! span (in the canonical vectorization), and per pass commute every
//! element added in the previous pass against the whole basis. A commutator
//! is adjoined when its residual after projection onto the current span
//! exceeds `eps_rank` times the product of the operand norms. The loop
//! terminates because the dimension strictly increases per productive pass
//! and is bounded by `N^2`.

use serde::Serialize;
use thiserror::Error;

use crate::classifier4;
use crate::system::{commutator_matrices, MatrixError, SkewHermMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosureError {
    #[error("closure needs at least one nonzero generator")]
    NoNonzeroGenerators,
    #[error("generator dimensions differ: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("eps_rank must be positive and finite, got {0}")]
    BadTolerance(f64),
}

/// Identification of a computed Lie algebra against the algebras that occur
/// for dipole-coupled systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AlgebraId {
    /// Full `u(N)`: dimension `N^2`.
    FullUnitary(usize),
    /// `su(N)`: dimension `N^2 - 1`, identity not in the span.
    SpecialUnitary(usize),
    /// The 11-dimensional `sp(2) + u(1)` obstruction at N = 4, verified by
    /// explicit span comparison against the sp(2) basis.
    Sp2PlusU1,
    /// A four-dimensional algebra with three-dimensional perfect derived
    /// algebra, i.e. isomorphic to `u(2)`.
    U2Like,
    /// Anything else, tagged by its dimension.
    Other(usize),
}

impl std::fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraId::FullUnitary(n) => write!(f, "u({n})"),
            AlgebraId::SpecialUnitary(n) => write!(f, "su({n})"),
            AlgebraId::Sp2PlusU1 => write!(f, "sp(2)+u(1)"),
            AlgebraId::U2Like => write!(f, "u(2)-like"),
            AlgebraId::Other(d) => write!(f, "other(dim {d})"),
        }
    }
}

/// Result of a commutator closure run.
#[derive(Debug, Clone)]
pub struct LieClosureResult {
    pub dimension: usize,
    /// Orthonormal basis of the span (unit vectors in the canonical
    /// vectorization, materialized as matrices).
    pub basis: Vec<SkewHermMatrix>,
    pub contains_identity: bool,
    pub identification: AlgebraId,
    /// Number of closure passes performed.
    pub generations: usize,
}

/// Commutator `[A, B] = AB - BA`.
pub fn commutator(a: &SkewHermMatrix, b: &SkewHermMatrix) -> Result<SkewHermMatrix, MatrixError> {
    commutator_matrices(a, b)
}

/// Incrementally maintained orthonormal span in R^(N^2).
pub(crate) struct SpanTracker {
    vectors: Vec<Vec<f64>>,
}

impl SpanTracker {
    pub(crate) fn new() -> Self {
        Self {
            vectors: Vec::new(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Modified Gram-Schmidt with one reorthogonalization pass.
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for b in &self.vectors {
                let dot: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
        }
        r
    }

    pub(crate) fn residual_norm(&self, v: &[f64]) -> f64 {
        norm(&self.residual(v))
    }

    /// Adjoin `v` if its residual exceeds `threshold`; returns true when the
    /// span grew.
    pub(crate) fn try_insert(&mut self, v: &[f64], threshold: f64) -> bool {
        let mut r = self.residual(v);
        let n = norm(&r);
        if n <= threshold {
            return false;
        }
        for x in r.iter_mut() {
            *x /= n;
        }
        self.vectors.push(r);
        true
    }

    pub(crate) fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// True iff `m` lies in the span of the orthonormal `basis` within `eps`
/// relative to the norm of `m`. A matrix whose norm is at most `eps` is
/// numerically zero at the working tolerance and contained by definition
/// (the closure never adjoins such vectors either).
pub fn span_contains(basis: &[SkewHermMatrix], m: &SkewHermMatrix, eps: f64) -> bool {
    let v = m.vectorize();
    let n = norm(&v);
    if n <= eps {
        return true;
    }
    let mut tracker = SpanTracker::new();
    tracker.vectors = basis.iter().map(|b| b.vectorize()).collect();
    tracker.residual_norm(&v) <= eps * n
}

/// Compute the Lie algebra generated by `generators` under commutation.
///
/// Generators are normalized to unit norm first, so `eps_rank` is a
/// scale-free residual threshold. `max_dim` defaults to `N^2` and caps the
/// computed dimension (the closure exits early once it is reached).
pub fn closure(
    generators: &[SkewHermMatrix],
    eps_rank: f64,
    max_dim: Option<usize>,
) -> Result<LieClosureResult, ClosureError> {
    if !(eps_rank > 0.0 && eps_rank.is_finite()) {
        return Err(ClosureError::BadTolerance(eps_rank));
    }
    let dim = match generators.first() {
        Some(g) => g.dim(),
        None => return Err(ClosureError::NoNonzeroGenerators),
    };
    for g in generators {
        if g.dim() != dim {
            return Err(ClosureError::DimMismatch {
                left: dim,
                right: g.dim(),
            });
        }
    }
    let max_dim = max_dim.unwrap_or(dim * dim).min(dim * dim);

    let mut span = SpanTracker::new();
    // zero generators are dropped
    for g in generators {
        let f = g.frobenius_norm();
        if f > 0.0 {
            span.try_insert(&g.scaled(1.0 / f).vectorize(), eps_rank);
        }
    }
    if span.dim() == 0 {
        return Err(ClosureError::NoNonzeroGenerators);
    }

    let mut mats: Vec<SkewHermMatrix> = span
        .vectors()
        .iter()
        .map(|v| SkewHermMatrix::from_vector(dim, v).expect("vector length is dim^2"))
        .collect();
    let mut frontier: Vec<usize> = (0..mats.len()).collect();
    let mut generations = 0;

    while !frontier.is_empty() && span.dim() < max_dim {
        generations += 1;
        let mut new_frontier = Vec::new();
        'pass: for &i in &frontier {
            for j in 0..mats.len() {
                let c = commutator_matrices(&mats[i], &mats[j]).expect("equal dims");
                // basis elements are unit vectors, so the operand-norm
                // product is 1 and the threshold is eps_rank itself
                if span.try_insert(&c.vectorize(), eps_rank) {
                    let v = span.vectors().last().unwrap();
                    mats.push(SkewHermMatrix::from_vector(dim, v).unwrap());
                    new_frontier.push(mats.len() - 1);
                    if span.dim() == max_dim {
                        break 'pass;
                    }
                }
            }
        }
        frontier = new_frontier;
    }

    let identity = SkewHermMatrix::identity_imag(dim);
    let contains_identity = span_contains(&mats, &identity, eps_rank);
    let identification = identify(&mats, span.dim(), dim, contains_identity, eps_rank);

    Ok(LieClosureResult {
        dimension: span.dim(),
        basis: mats,
        contains_identity,
        identification,
        generations,
    })
}

/// Tag a closed span. Dimension `N^2` is `u(N)`; `N^2 - 1` without the
/// identity is `su(N)`; dimension 11 at N = 4 is checked against the sp(2)
/// basis (conjugated back through the level reordering, for both dipole
/// signs) plus `iI`; dimension 4 is checked for a perfect three-dimensional
/// derived algebra.
pub fn identify(
    basis: &[SkewHermMatrix],
    dimension: usize,
    n: usize,
    contains_identity: bool,
    eps: f64,
) -> AlgebraId {
    if dimension == n * n {
        return AlgebraId::FullUnitary(n);
    }
    if dimension == n * n - 1 && !contains_identity {
        return AlgebraId::SpecialUnitary(n);
    }
    if n == 4 && dimension == 11 {
        for sign in [1.0, -1.0] {
            let candidate = classifier4::sp2_plus_identity_span(sign);
            if basis.iter().all(|b| span_contains(&candidate, b, eps)) {
                return AlgebraId::Sp2PlusU1;
            }
        }
        return AlgebraId::Other(11);
    }
    if dimension == 4 {
        let (derived_dim, derived) = derived_span(basis, eps);
        if derived_dim == 3 {
            let (dd, _) = derived_span(&derived, eps);
            if dd == 3 {
                return AlgebraId::U2Like;
            }
        }
        return AlgebraId::Other(4);
    }
    AlgebraId::Other(dimension)
}

/// Span of all pairwise commutators of `basis`.
fn derived_span(basis: &[SkewHermMatrix], eps: f64) -> (usize, Vec<SkewHermMatrix>) {
    let mut span = SpanTracker::new();
    let mut mats = Vec::new();
    let dim = match basis.first() {
        Some(b) => b.dim(),
        None => return (0, mats),
    };
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let c = commutator_matrices(&basis[i], &basis[j]).expect("equal dims");
            if span.try_insert(&c.vectorize(), eps) {
                mats.push(SkewHermMatrix::from_vector(dim, span.vectors().last().unwrap()).unwrap());
            }
        }
    }
    (span.dim(), mats)
}
