"""Dense pointwise linear algebra for the structure tensors.

Everything here operates on plain numpy arrays at a single point: the
adjoint endomorphism A with g(AX, Y) = F(X, Y), the self-adjoint square
Q, and the g-self-adjoint spectral decomposition with its Lagrange
eigen-projectors.  Matrix conventions: a (1,1)-tensor acts by column
convention, ``(A @ x)`` is A applied to the vector x, and a (0,2)-tensor
B has ``B[i, j] = B(e_i, e_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import IndefiniteMetricError, SingularMetricError, StructureKindError

#: relative gap under which eigenvalues are grouped into one cluster
EIGENVALUE_GAP = 1e-6


@dataclass(frozen=True)
class EndoAtPoint:
    """A (1,1)-tensor at a point, tagged with its g-adjoint symmetry."""

    components: np.ndarray
    adjoint: Optional[str] = None  # "skew" | "selfadjoint" | None

    @property
    def n(self) -> int:
        return self.components.shape[0]


@dataclass(frozen=True)
class SpectrumReport:
    """Clustered spectrum of a g-self-adjoint operator.

    ``eigenvalues`` are the cluster means in increasing order,
    ``multiplicities`` the cluster sizes, and ``projectors`` the Lagrange
    polynomial projectors onto each eigen-space.  ``eigenvalue_std`` is
    filled when reports are aggregated across sample points.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    projectors: tuple[np.ndarray, ...]
    raw_eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, g-orthonormal
    conformal: bool
    eigenvalue_std: Optional[np.ndarray] = None

    @property
    def k(self) -> int:
        return len(self.multiplicities)


def max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def sym_residual(b: np.ndarray) -> float:
    """How far a (0,2)-tensor is from being symmetric."""
    return max_abs(b - b.T)


def skew_residual(b: np.ndarray) -> float:
    """How far a (0,2)-tensor is from being skew-symmetric."""
    return max_abs(b + b.T)


def skew12_residual(t: np.ndarray) -> float:
    return max_abs(t + np.swapaxes(t, 0, 1))


def skew23_residual(t: np.ndarray) -> float:
    return max_abs(t + np.swapaxes(t, 1, 2))


def total_skew_residual(t: np.ndarray) -> float:
    """Distance of a (0,3)-tensor from total antisymmetry."""
    return max(skew12_residual(t), skew23_residual(t))


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    return max_abs(a @ b - b @ a)


def g_skew_residual(g: np.ndarray, a: np.ndarray) -> float:
    """Residual of g-skew-adjointness: g(AX, Y) + g(X, AY) = 0."""
    ga = g @ a
    return max_abs(ga + ga.T)


def g_selfadjoint_residual(g: np.ndarray, q: np.ndarray) -> float:
    """Residual of g-self-adjointness: g(QX, Y) = g(X, QY)."""
    gq = g @ q
    return max_abs(gq - gq.T)


def adjoint_from_form(g: np.ndarray, F: np.ndarray) -> EndoAtPoint:
    """The endomorphism A with g(A e_i, e_j) = F(e_i, e_j).

    In column convention this is A = -g^{-1} F; it is automatically
    g-skew-adjoint because F is skew.
    """
    g = np.asarray(g, dtype=float)
    F = np.asarray(F, dtype=float)
    if abs(np.linalg.det(g)) < 1e-14:
        raise SingularMetricError("cannot form adjoint: g is singular")
    a = -np.linalg.solve(g, F)
    return EndoAtPoint(a, adjoint="skew")


def reconstruct_form(g: np.ndarray, a: EndoAtPoint | np.ndarray) -> np.ndarray:
    """F back from A via F[i, j] = g(A e_i, e_j); inverse of the above."""
    comps = a.components if isinstance(a, EndoAtPoint) else np.asarray(a)
    return (np.asarray(g) @ comps).T


_Q_SIGN = {"weak-hermitian": -1.0, "weak-contact": -1.0,
           "weak-f": -1.0, "para": 1.0}


def q_from_a(a: EndoAtPoint | np.ndarray, kind: str,
             eta: Optional[np.ndarray] = None,
             xi: Optional[np.ndarray] = None) -> EndoAtPoint:
    """The self-adjoint square of the structure tensor.

    Q = -A^2 for weak Hermitian kinds, Q = -A^2 + eta (x) xi with contact
    data, and with the opposite sign of A^2 for para kinds.
    """
    comps = a.components if isinstance(a, EndoAtPoint) else np.asarray(a)
    if kind not in _Q_SIGN:
        raise StructureKindError(f"no Q relation for kind {kind!r}")
    q = -_Q_SIGN[kind] * (comps @ comps)
    contact = eta is not None or xi is not None
    if contact:
        if eta is None or xi is None:
            raise StructureKindError("contact kinds need both eta and xi")
        q = q + np.outer(np.asarray(xi, float), np.asarray(eta, float))
    elif kind == "weak-contact":
        raise StructureKindError("weak-contact kind needs eta and xi")
    return EndoAtPoint(q, adjoint="selfadjoint")


def cluster_eigenvalues(values: np.ndarray,
                        gap: float = EIGENVALUE_GAP) -> list[slice]:
    """Group sorted eigenvalues whose relative gaps fall below ``gap``."""
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    slices = []
    start = 0
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > gap * scale:
            slices.append(slice(start, i))
            start = i
    slices.append(slice(start, len(values)))
    return slices


def lagrange_projectors(q: np.ndarray,
                        eigenvalues: np.ndarray) -> list[np.ndarray]:
    """Eigen-projectors as Lagrange polynomials in Q.

    Pi_i = prod_{j != i} (Q - lambda_j) / (lambda_i - lambda_j).  Being
    polynomials in Q, their coordinate derivatives follow from dQ by the
    product rule, which the verifier relies on for involutivity residuals.
    """
    n = q.shape[0]
    eye = np.eye(n)
    out = []
    for i, li in enumerate(eigenvalues):
        proj = eye.copy()
        for j, lj in enumerate(eigenvalues):
            if j == i:
                continue
            proj = proj @ (q - lj * eye) / (li - lj)
        out.append(proj)
    return out


def g_selfadjoint_spectrum(g: np.ndarray, q: EndoAtPoint | np.ndarray,
                           gap: float = EIGENVALUE_GAP) -> SpectrumReport:
    """Spectral decomposition of a g-self-adjoint operator.

    Requires positive-definite g (refused otherwise): the factorization
    g = L L^T turns the problem into the symmetric eigenproblem for
    L^T Q L^{-T}, whose eigenvalues are those of Q as an operator and
    whose back-transformed eigenvectors are g-orthonormal.
    """
    g = np.asarray(g, dtype=float)
    comps = q.components if isinstance(q, EndoAtPoint) else np.asarray(q, float)
    if g_selfadjoint_residual(g, comps) > 1e-8:
        raise ValueError("operator is not g-self-adjoint")
    try:
        L = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise IndefiniteMetricError(
            "spectral decomposition needs positive-definite g; for "
            "indefinite metrics self-adjoint operators may fail to be "
            "diagonalizable (light-like eigenvectors)") from exc
    Linv = np.linalg.inv(L)
    s = L.T @ comps @ Linv.T
    s = 0.5 * (s + s.T)
    raw, u = np.linalg.eigh(s)
    vecs = Linv.T @ u
    slices = cluster_eigenvalues(raw, gap)
    means = np.array([raw[sl].mean() for sl in slices])
    mults = tuple(sl.stop - sl.start for sl in slices)
    if len(means) == 1:
        projectors = (np.eye(g.shape[0]),)
    else:
        projectors = tuple(lagrange_projectors(comps, means))
    return SpectrumReport(
        eigenvalues=means, multiplicities=mults, projectors=projectors,
        raw_eigenvalues=raw, eigenvectors=vecs, conformal=len(means) == 1)


def aggregate_spectra(reports: list[SpectrumReport]) -> SpectrumReport:
    """Combine per-point spectra; fails if the cluster layout varies.

    The returned report carries the cross-point mean eigenvalues and their
    standard deviations, certifying that the spectrum is constant.
    """
    if not reports:
        raise ValueError("no spectra to aggregate")
    mults = reports[0].multiplicities
    for r in reports[1:]:
        if r.multiplicities != mults:
            raise ValueError(
                f"cluster layout varies across points: {mults} vs "
                f"{r.multiplicities}")
    stacked = np.stack([r.eigenvalues for r in reports])
    base = reports[0]
    return SpectrumReport(
        eigenvalues=stacked.mean(axis=0), multiplicities=mults,
        projectors=base.projectors, raw_eigenvalues=base.raw_eigenvalues,
        eigenvectors=base.eigenvectors, conformal=base.conformal,
        eigenvalue_std=stacked.std(axis=0))


def rank_by_singular_values(a: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Rank with a scale-invariant singular-value threshold."""
    sv = np.linalg.svd(np.asarray(a, dtype=float), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def random_unit_vectors(rng: np.random.Generator, n: int,
                        count: int) -> np.ndarray:
    """Probe vectors on the unit sphere of the chart frame."""
    v = rng.normal(size=(count, n))
    return v / np.linalg.norm(v, axis=1, keepdims=True)
