"""Structure-axiom validation and structure-specific tensors.

Covers the weak Hermitian / contact / f / para axiom systems, the
nearly-Kahler defect, the contact Nijenhuis variants and the Reeb field
certificates.  Everything is a pointwise residual; :func:`validate_structure`
max-aggregates over sampled points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra, calculus
from .algebra import max_abs
from .chart import ChartManifold, sample_points
from .connections import TorsionAtPoint
from .errors import StructureKindError
from .frames import PointFrame, frame_at

#: residual below which a structure flag is granted
FLAG_TOL = 1e-10


@dataclass
class StructureReport:
    """Named axiom residuals (max over points) plus derived flags."""

    kind: str
    axiom_residuals: dict[str, float] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        return max(self.axiom_residuals.values(), default=0.0)


def _para_sign(kind: str) -> float:
    return 1.0 if kind == "para" else -1.0


def structure_axiom_residuals(frame: PointFrame) -> dict[str, float]:
    """Axiom residuals of the declared structure kind at one point."""
    g = frame.g.value
    f = frame.F.value
    out = {
        "g-symmetric": algebra.sym_residual(g),
        "F-skew": algebra.skew_residual(f),
    }
    if frame.kind == "generic":
        return out
    a = frame.A.value
    out["A-g-skew-adjoint"] = algebra.g_skew_residual(g, a)
    q = frame.Q.value
    out["Q-g-self-adjoint"] = algebra.g_selfadjoint_residual(g, q)
    out["[A,Q]=0"] = algebra.commutator_residual(a, q)
    s = _para_sign(frame.kind)
    gram = a.T @ g @ a  # g(AX, AY)
    gq = (g @ q).T      # g(QX, Y)
    if frame.eta is not None and frame.xi is not None:
        eta = frame.eta.value
        xi = frame.xi.value
        # contact kinds: A^2 = -Q + eta(x)xi, gram = g(QX,Y) - eta(X)eta(Y);
        # para-contact flips both structure-term signs
        out["A2-structure"] = max_abs(a @ a - s * q + s * np.outer(xi, eta))
        out["gram-structure"] = max_abs(gram + s * gq - s * np.outer(eta, eta))
        out["A xi = 0"] = max_abs(a @ xi)
        out["Q xi = xi"] = max_abs(q @ xi - xi)
        out["eta(xi) = 1"] = abs(float(eta @ xi) - 1.0)
        out["eta = g(xi, .)"] = max_abs(eta - g @ xi)
        out["F(xi, .) = 0"] = max_abs(xi @ f)
    else:
        out["A2-structure"] = max_abs(a @ a - s * q)
        out["gram-structure"] = max_abs(gram + s * gq)
    return out


def validate_structure(manifold: ChartManifold, points=None, count: int = 100,
                       seed: int = 42) -> StructureReport:
    """Evaluate all structure axioms over sampled points, max-aggregated.

    Also records A's rank (singular-value test), the classical/weak
    distinction and, for Hermitian kinds, the nearly-Kahler flags.
    """
    if points is None:
        points = sample_points(manifold, count, seed)
    report = StructureReport(kind=manifold.kind)
    rng = np.random.default_rng(np.uint64(seed) ^ np.uint64(0x9E3779B9))
    probes = algebra.random_unit_vectors(rng, manifold.dim, 8)
    ranks = set()
    classical_gap = 0.0
    kahler_defect = 0.0
    nk_defect = 0.0
    na_norm = 0.0
    for p in points:
        fr = frame_at(manifold, p)
        for name, value in structure_axiom_residuals(fr).items():
            report.axiom_residuals[name] = max(
                report.axiom_residuals.get(name, 0.0), value)
        if fr.kind == "generic":
            continue
        ranks.add(algebra.rank_by_singular_values(fr.A.value))
        classical_gap = max(classical_gap,
                            max_abs(fr.Q.value - np.eye(fr.n)))
        if fr.kind == "weak-hermitian":
            kahler_defect = max(kahler_defect, max_abs(fr.nabla_g_A))
            nk_defect = max(nk_defect, nearly_kahler_defect(fr, probes))
            na_norm = max(na_norm, max_abs(fr.nijenhuis_A))
    if manifold.kind != "generic":
        report.details["rank_A"] = sorted(ranks)
        report.flags["constant-rank-A"] = len(ranks) == 1
        report.flags["classical"] = classical_gap < FLAG_TOL
        if manifold.kind == "weak-hermitian":
            report.details["nabla_g_A_norm"] = kahler_defect
            report.details["nearly_kahler_defect"] = nk_defect
            report.flags["weak-kahler"] = kahler_defect < FLAG_TOL
            report.flags["weak-nearly-kahler"] = nk_defect < 1e-8
            report.flags["integrable"] = na_norm < 1e-8
    return report


def nearly_kahler_defect(frame: PointFrame, probes: np.ndarray) -> float:
    """max over unit probes X of |(nabla^g_X A) X|.

    Vanishing defect with nonzero nabla^g A is the nearly-Kahler regime;
    vanishing nabla^g A outright is the Kahler one."""
    na = frame.nabla_g_A
    return max(max_abs(np.einsum("iab,i,b->a", na, x, x)) for x in probes)


def a_directional_defect(frame: PointFrame, probes: np.ndarray) -> float:
    """max over unit probes X of |(nabla^g_{AX} A) X|."""
    na = frame.nabla_g_A
    a = frame.A.value
    return max(max_abs(np.einsum("iab,i,b->a", na, a @ x, x)) for x in probes)


def contact_nijenhuis(frame: PointFrame, variant: str) -> np.ndarray:
    """The contact Nijenhuis tensors N_A + d(eta) (x) eta (variant "wac")
    and N_A - d(eta) (x) eta (variant "wapc")."""
    if frame.eta is None:
        raise StructureKindError("contact Nijenhuis needs eta")
    if variant == "wac":
        sign = 1.0
        if frame.kind != "weak-contact":
            raise StructureKindError("variant 'wac' needs a weak-contact chart")
    elif variant == "wapc":
        sign = -1.0
        if frame.kind != "para":
            raise StructureKindError("variant 'wapc' needs a para chart")
    else:
        raise ValueError(f"unknown variant {variant!r}")
    eta = frame.eta.value
    return frame.nijenhuis_A + sign * np.einsum("ij,k->ijk", frame.deta, eta)


def wnuj_rhs(T: TorsionAtPoint | np.ndarray, a: np.ndarray, q: np.ndarray,
             para: bool = False) -> np.ndarray:
    """Four-torsion-term side of the contact Nijenhuis identity:

        +/- T(X, Y, QZ) - T(AX, AY, Z) - T(AX, Y, AZ) - T(X, AY, AZ)

    with + for weak contact and - for weak para-contact."""
    t = T.components if isinstance(T, TorsionAtPoint) else np.asarray(T)
    sign = -1.0 if para else 1.0
    return (sign * np.einsum("ija,ak->ijk", t, q)
            - np.einsum("ai,bj,abk->ijk", a, a, t)
            - np.einsum("ai,bk,ajb->ijk", a, a, t)
            - np.einsum("aj,bk,iab->ijk", a, a, t))


def wnuj_residual(frame: PointFrame, T: TorsionAtPoint) -> float:
    """Residual of the full contact Nijenhuis identity

    N_A(X,Y,Z) +/- eta(Z) d(eta)(X,Y) = wnuj_rhs(T), valid for the torsion
    of a structure-preserving connection with skew torsion."""
    if frame.eta is None:
        raise StructureKindError("identity needs contact data")
    para = frame.kind == "para"
    eta = frame.eta.value
    sign = -1.0 if para else 1.0
    lhs = frame.nijenhuis_A + sign * np.einsum("ij,k->ijk", frame.deta, eta)
    rhs = wnuj_rhs(T, frame.A.value, frame.Q.value, para=para)
    return max_abs(lhs - rhs)


@dataclass(frozen=True)
class ReebReport:
    geodesic_residual: float
    killing_residual: float
    parallel_residuals: dict[str, float]


def reeb_checks(frame: PointFrame,
                coeffs: calculus.ConnectionCoeffs) -> ReebReport:
    """Reeb field certificates: xi geodesic and Killing for the metric,
    and xi, eta, Q, A parallel for the given connection."""
    if frame.xi is None or frame.eta is None:
        raise StructureKindError("Reeb checks need eta and xi")
    xi = frame.xi.value
    g = frame.g.value
    cov_xi_lc = calculus.covariant_derivative(frame.xi, frame.lc, "10")
    geodesic = max_abs(np.einsum("i,ia->a", xi, cov_xi_lc))
    lowered = np.einsum("ia,aj->ij", cov_xi_lc, g)  # g(nabla^g_i xi, e_j)
    killing = max_abs(lowered + lowered.T)
    parallel = {
        "xi": max_abs(calculus.covariant_derivative(frame.xi, coeffs, "10")),
        "eta": max_abs(calculus.covariant_derivative(frame.eta, coeffs, "01")),
        "Q": max_abs(calculus.covariant_derivative(frame.Q, coeffs, "11")),
        "A": max_abs(calculus.covariant_derivative(frame.A, coeffs, "11")),
    }
    return ReebReport(geodesic, killing, parallel)


def f_structure_checks(frame: PointFrame) -> dict[str, float]:
    """Residuals of the rank-2m structure relations

    A^3 + AQ = 0 and g(AX, A^2 Y) = g(QX, AY) (signs flipped for para),
    plus the [A, Q] commutator and the distribution split dimensions."""
    a = frame.A.value
    q = frame.Q.value
    g = frame.g.value
    s = _para_sign(frame.kind)
    out = {
        "A3-structure": max_abs(a @ a @ a - s * (a @ q)),
        "gram-A2-structure": max_abs(a.T @ g @ (a @ a) + s * (g @ q).T @ a),
        "[A,Q]=0": algebra.commutator_residual(a, q),
    }
    rank = algebra.rank_by_singular_values(a)
    out["dim-D"] = float(rank)
    out["dim-D0"] = float(frame.n - rank)
    return out
