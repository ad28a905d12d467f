"""Metric connections with torsion and the named torsion constructors.

Torsion candidates are pointwise (0,3)-tensors, skew in the first two slots
by definition.  Feeding one through :func:`metric_connection_from_torsion`
yields the unique metric connection with that torsion; the residual
functions then certify whether the connection also preserves the skew part
F, i.e. whether it is a generalized metric connection.

The constructors invert the defining relations of the distinguished
connections through composed slots: where a torsion is prescribed as
T(AX, ., .) or T(QX, ., .), the substitution X -> A^{-1}X with
A^{-1} = -A Q^{-1} (forced by A^2 = -Q) recovers T itself.  Constructed
candidates are projected onto their skew part in the first two slots; the
discarded asymmetry is recorded so that misuse on structures outside a
theorem's hypotheses stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (max_abs, skew12_residual, total_skew_residual)
from .calculus import ConnectionCoeffs, covariant_derivative
from .errors import NotApplicableError, StructureKindError
from .frames import PointFrame

TOTALLY_SKEW_TOL = 1e-12


@dataclass(frozen=True)
class TorsionAtPoint:
    """A torsion candidate: (0,3) components, skew in the first two slots.

    ``skew12_defect`` records how much asymmetry a constructor had to
    project away (zero for honest torsions)."""

    components: np.ndarray
    totally_skew: bool
    skew12_defect: float = 0.0

    def __post_init__(self):
        if skew12_residual(self.components) > 1e-10:
            raise ValueError("torsion must be skew in its first two slots")

    @property
    def n(self) -> int:
        return self.components.shape[0]


def torsion_from_components(t: np.ndarray,
                            skew_tol: float = TOTALLY_SKEW_TOL) -> TorsionAtPoint:
    t = np.asarray(t, dtype=float)
    return TorsionAtPoint(t, totally_skew=total_skew_residual(t) < skew_tol)


def _project_skew12(raw: np.ndarray) -> tuple[np.ndarray, float]:
    defect = skew12_residual(raw)
    return 0.5 * (raw - np.swapaxes(raw, 0, 1)), defect


def zero_torsion(n: int) -> TorsionAtPoint:
    return TorsionAtPoint(np.zeros((n, n, n)), totally_skew=True)


def contorsion_from_torsion(T: TorsionAtPoint | np.ndarray) -> np.ndarray:
    """2 K(X,Y,Z) = T(X,Y,Z) + T(Z,X,Y) - T(Y,Z,X).

    For totally skew T this collapses to K = T/2."""
    t = T.components if isinstance(T, TorsionAtPoint) else np.asarray(T)
    return 0.5 * (t + np.einsum("kij->ijk", t) - np.einsum("jki->ijk", t))


def metric_connection_from_torsion(frame: PointFrame,
                                   T: TorsionAtPoint) -> ConnectionCoeffs:
    """The unique metric connection with the given torsion.

    2 g(nabla_X Y, Z) = 2 g(nabla^g_X Y, Z) + T(X,Y,Z) + T(Z,X,Y) - T(Y,Z,X);
    nabla g = 0 holds by construction for any skew12 candidate."""
    k_low = contorsion_from_torsion(T)
    k = np.einsum("kl,ijl->kij", frame.g_inv, k_low)
    lc = frame.lc
    return ConnectionCoeffs(lc=lc.lc, contorsion=k)


def torsion_of(coeffs: ConnectionCoeffs, g: np.ndarray) -> TorsionAtPoint:
    """Recompute the (0,3) torsion of coefficients on the coordinate frame."""
    tot = coeffs.total
    t_up = tot - np.swapaxes(tot, 1, 2)  # T^k_{ij}
    t = np.einsum("lk,kij->ijl", g, t_up)
    return torsion_from_components(t)


def nabla_g_residual(frame: PointFrame, coeffs: ConnectionCoeffs) -> float:
    return max_abs(covariant_derivative(frame.g, coeffs, "02"))


def nabla_F_residual(frame: PointFrame, coeffs: ConnectionCoeffs) -> float:
    return max_abs(covariant_derivative(frame.F, coeffs, "02"))


def eisenhart_connection(frame: PointFrame) -> tuple[ConnectionCoeffs,
                                                     TorsionAtPoint]:
    """The connection g(nabla_X Y, Z) = g(nabla^g_X Y, Z) + dF(X,Y,Z)/2.

    Metric (nabla g = 0), Codazzi, and its torsion is exactly dF."""
    df = frame.dF
    k = 0.5 * np.einsum("kl,ijl->kij", frame.g_inv, df)
    coeffs = ConnectionCoeffs(lc=frame.lc.lc, contorsion=k)
    return coeffs, TorsionAtPoint(df.copy(), totally_skew=True)


def check_codazzi(frame: PointFrame, coeffs: ConnectionCoeffs) -> float:
    """max |(nabla_Z g)(X,Y) - (nabla_X g)(Z,Y)| over index triples."""
    ng = covariant_derivative(frame.g, coeffs, "02")
    return max_abs(ng - np.swapaxes(ng, 0, 1))


def check_a_torsion(T: TorsionAtPoint, a: np.ndarray) -> float:
    """Residual of T(AX, Y) = T(X, AY)."""
    t = T.components
    return max_abs(np.einsum("ai,ajk->ijk", a, t)
                   - np.einsum("aj,iak->ijk", a, t))


def check_q_torsion(T: TorsionAtPoint, q: np.ndarray) -> float:
    """Residual of T(QX, Y) = T(X, QY) = Q T(X, Y).

    With self-adjoint Q the last clause lowers to T(X, Y, QZ)."""
    t = T.components
    first = np.einsum("ai,ajk->ijk", q, t)
    second = np.einsum("aj,iak->ijk", q, t)
    third = np.einsum("ak,ija->ijk", q, t)
    return max(max_abs(first - second), max_abs(first - third))


def residual_conn2(frame: PointFrame, T: TorsionAtPoint) -> float:
    """Residual of the F-preservation condition

    2 (nabla^g_X F)(Y,Z) = -T(X,Y,AZ) - T(Z,X,AY) - T(AZ,X,Y)
                           - T(AZ,Y,X) - T(X,AY,Z) - T(Z,AY,X).

    A vanishing residual is the exact criterion for the metric connection
    built from T to preserve F as well."""
    t = T.components
    a = frame.A.value
    rhs = -(np.einsum("ija,ak->ijk", t, a)
            + np.einsum("kia,aj->ijk", t, a)
            + np.einsum("ak,aij->ijk", a, t)
            + np.einsum("ak,aji->ijk", a, t)
            + np.einsum("aj,iak->ijk", a, t)
            + np.einsum("aj,kai->ijk", a, t))
    return max_abs(2.0 * frame.nabla_g_F - rhs)


def residual_conn1(frame: PointFrame, T: TorsionAtPoint) -> float:
    """Residual of dF(X,Y,Z) = -T(X,Y,AZ) - T(Y,Z,AX) - T(Z,X,AY)."""
    t = T.components
    a = frame.A.value
    rhs = -(np.einsum("ija,ak->ijk", t, a)
            + np.einsum("jka,ai->ijk", t, a)
            + np.einsum("kia,aj->ijk", t, a))
    return max_abs(frame.dF - rhs)


def nijenhuis_from_torsion(T: TorsionAtPoint, a: np.ndarray) -> np.ndarray:
    """N_A through the torsion of a connection with nabla A = 0:

    N_A(X,Y,Z) = -T(AX,AY,Z) - T(X,Y,A^2 Z) - T(AX,Y,AZ) - T(X,AY,AZ)."""
    t = T.components
    a2 = a @ a
    return -(np.einsum("ai,bj,abk->ijk", a, a, t)
             + np.einsum("ija,ak->ijk", t, a2)
             + np.einsum("ai,bk,ajb->ijk", a, a, t)
             + np.einsum("aj,bk,iab->ijk", a, a, t))


def nijenhuis_q_from_torsion(T: TorsionAtPoint, q: np.ndarray) -> np.ndarray:
    """N_Q through torsion (self-adjoint Q changes two signs):

    N_Q(X,Y,Z) = -T(QX,QY,Z) - T(X,Y,Q^2 Z) + T(QX,Y,QZ) + T(X,QY,QZ)."""
    t = T.components
    q2 = q @ q
    return (-np.einsum("ai,bj,abk->ijk", q, q, t)
            - np.einsum("ija,ak->ijk", t, q2)
            + np.einsum("ai,bk,ajb->ijk", q, q, t)
            + np.einsum("aj,bk,iab->ijk", q, q, t))


def residual_tor1_ndf1(frame: PointFrame, T: TorsionAtPoint,
                       skew_tol: float = 1e-9,
                       conn2_tol: float = 1e-7) -> tuple[float, float, float]:
    """Residuals of the skew-torsion identities

    T(AX,AY,Z) = -N_A(X,Y,Z) + dF(X,Y,AZ),
    T(AX,Y,Z)  = 2 (nabla^g_X F)(Y,Z) - dF(X,Y,Z),
    N_A(X,Y,AZ) + N_A(X,Z,AY) = dF(X,Y,A^2 Z) + dF(X,Z,A^2 Y).

    These presuppose a generalized metric connection with totally skew
    torsion, so the candidate must be totally skew and satisfy the
    F-preservation condition; otherwise the identities are not applicable.
    """
    t = T.components
    if total_skew_residual(t) > skew_tol:
        raise NotApplicableError("torsion is not totally skew-symmetric")
    if residual_conn2(frame, T) > conn2_tol:
        raise NotApplicableError(
            "torsion does not satisfy the F-preservation condition")
    a = frame.A.value
    a2 = a @ a
    na = frame.nijenhuis_A
    df = frame.dF
    r_tor1a = max_abs(np.einsum("ai,bj,abk->ijk", a, a, t) + na
                      - np.einsum("ija,ak->ijk", df, a))
    r_tor1b = max_abs(np.einsum("ai,ajk->ijk", a, t)
                      - 2.0 * frame.nabla_g_F + df)
    r_ndf1 = max_abs(np.einsum("ija,ak->ijk", na, a)
                     + np.einsum("ika,aj->ijk", na, a)
                     - np.einsum("ija,ak->ijk", df, a2)
                     - np.einsum("ika,aj->ijk", df, a2))
    return r_tor1a, r_tor1b, r_ndf1


def _a_q_inverse(frame: PointFrame) -> np.ndarray:
    """A^{-1} = -A Q^{-1} for invertible A with A^2 = -Q."""
    a = frame.A.value
    q = -(a @ a)
    if abs(np.linalg.det(q)) < 1e-12:
        raise StructureKindError(
            "A is singular (rank F < dim M); slot inversion needs a "
            "non-degenerate fundamental form")
    return -a @ np.linalg.inv(q)


def nk_torsion(frame: PointFrame) -> TorsionAtPoint:
    """Torsion of the nearly-Kahler-type connection:

    T(AX, Y, Z) = -dF(X, Y, Z)/3, solved as T(X,Y,Z) = dF(AQ^{-1}X,Y,Z)/3.

    On a weak nearly Kahler structure the result is totally skew and
    satisfies the A-torsion condition; on anything else the construction
    still returns a candidate (projected onto skew first slots) whose
    F-preservation residual will be visibly nonzero."""
    if frame.kind not in ("weak-hermitian",):
        raise StructureKindError("nk_torsion needs a weak Hermitian chart")
    a_inv = _a_q_inverse(frame)
    raw = -np.einsum("ai,ajk->ijk", a_inv, frame.dF) / 3.0
    t, defect = _project_skew12(raw)
    return TorsionAtPoint(
        t, totally_skew=total_skew_residual(t) < 1e-9, skew12_defect=defect)


def chern_torsion(frame: PointFrame) -> TorsionAtPoint:
    """Torsion of the Chern-type connection, determined by

    T(QX, Y, Z) = -[dF(AX, Y, Z) + dF(X, AY, Z)] / 2,

    solved through Q^{-1}.  Not totally skew in general; its hallmark is
    the sign-flipped relation T(AX,Y,Z) = T(X,AY,Z) = -T(X,Y,AZ)."""
    if frame.kind != "weak-hermitian":
        raise StructureKindError("chern_torsion needs a weak Hermitian chart")
    a = frame.A.value
    q = -(a @ a)
    if abs(np.linalg.det(q)) < 1e-12:
        raise StructureKindError("chern_torsion needs non-singular A")
    q_inv = np.linalg.inv(q)
    aq_inv = a @ q_inv
    df = frame.dF
    raw = -0.5 * (np.einsum("ai,ajk->ijk", aq_inv, df)
                  + np.einsum("ai,bj,abk->ijk", q_inv, a, df))
    t, defect = _project_skew12(raw)
    return TorsionAtPoint(
        t, totally_skew=total_skew_residual(t) < 1e-9, skew12_defect=defect)


def bismut_torsion(frame: PointFrame) -> TorsionAtPoint:
    """Torsion of the Bismut-type connection:

    T(AX, AY, Z) = dF(X, Y, AZ), i.e. T(X,Y,Z) = dF(A^{-1}X, A^{-1}Y, AZ).

    Totally skew exactly on Hermitian-type structures; the flag is set from
    the measured residual."""
    if frame.kind != "weak-hermitian":
        raise StructureKindError("bismut_torsion needs a weak Hermitian chart")
    a = frame.A.value
    a_inv = _a_q_inverse(frame)
    raw = np.einsum("ai,bj,abk->ijk", a_inv, a_inv,
                    np.einsum("ija,ak->ijk", frame.dF, a))
    t, defect = _project_skew12(raw)
    return TorsionAtPoint(
        t, totally_skew=total_skew_residual(t) < 1e-9, skew12_defect=defect)


def contact_characteristic_torsion(frame: PointFrame,
                                   t_d: np.ndarray | None = None
                                   ) -> TorsionAtPoint:
    """Skew torsion candidate for contact kinds: T = eta ^ d(eta) + T_D.

    The contact-distribution part T_D defaults to zero; reports carry that
    choice rather than asserting it as canonical.  The xi-slots reproduce
    d(eta) by construction."""
    if frame.eta is None or frame.xi is None:
        raise StructureKindError("characteristic torsion needs eta and xi")
    eta = frame.eta.value
    deta = frame.deta
    t = (np.einsum("i,jk->ijk", eta, deta)
         + np.einsum("j,ki->ijk", eta, deta)
         + np.einsum("k,ij->ijk", eta, deta))
    if t_d is not None:
        t = t + np.asarray(t_d, dtype=float)
    return torsion_from_components(t)


def nabla_g_A_identity_residual(frame: PointFrame, T: TorsionAtPoint) -> float:
    """Residual of (nabla^g_X A)Y = [A T(X,Y) - T(X, AY)] / 2 (lowered)."""
    a = frame.A.value
    g = frame.g.value
    t = T.components
    lhs = np.einsum("ka,iaj->ijk", g, frame.nabla_g_A)
    rhs = 0.5 * (-np.einsum("ija,ak->ijk", t, a)
                 - np.einsum("aj,iak->ijk", a, t))
    return max_abs(lhs - rhs)


def nabla_g_Q_identity_residual(frame: PointFrame, T: TorsionAtPoint) -> float:
    """Residual of (nabla^g_X Q)Y = [Q T(X,Y) - T(X, QY)] / 2 (lowered)."""
    if frame.Q is None:
        raise StructureKindError("chart kind defines no Q")
    q = frame.Q.value
    g = frame.g.value
    t = T.components
    nabla_q = covariant_derivative(frame.Q, frame.lc, "11")
    lhs = np.einsum("ka,iaj->ijk", g, nabla_q)
    rhs = 0.5 * (np.einsum("ija,ak->ijk", t, q)
                 - np.einsum("aj,iak->ijk", q, t))
    return max_abs(lhs - rhs)


def k_torsion_residual(T: TorsionAtPoint, a: np.ndarray) -> float:
    """Residual of the contorsion counterpart of the A-torsion condition.

    For totally skew T (so K = T/2) the condition reads, in (0,3) form,
    K(AX,Y,Z) = K(X,AY,Z) = K(X,Y,AZ)."""
    k = contorsion_from_torsion(T)
    first = np.einsum("ai,ajk->ijk", a, k)
    second = np.einsum("aj,iak->ijk", a, k)
    third = np.einsum("ak,ija->ijk", a, k)
    return max(max_abs(first - second), max_abs(first - third))
