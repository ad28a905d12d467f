"""First-order differential operators on jet-valued fields.

All identities are expanded on the coordinate frame, whose fields commute,
so torsion reads T(X, Y) = nabla_X Y - nabla_Y X and brackets of images
P(e_i) expand through the partials of P.  Index conventions:

* connection coefficients ``coeffs[k, i, j]`` mean nabla_{e_i} e_j =
  coeffs[k, i, j] e_k;
* covariant derivatives put the direction slot first, e.g.
  ``(nabla B)[i, j, k] = (nabla_{e_i} B)(e_j, e_k)``;
* jets store the derivative index last (see :class:`~griemlab.chart.FieldJet`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chart import FieldJet
from .errors import SingularMetricError

__all__ = [
    "ConnectionCoeffs", "levi_civita", "covariant_derivative",
    "exterior_derivative_2form", "exterior_derivative_1form", "nijenhuis",
    "lower_last_index", "jet_add", "jet_scale", "jet_matmul", "jet_inverse",
    "jet_outer", "adjoint_jet", "q_jet", "lagrange_projector_jets",
]


@dataclass(frozen=True)
class ConnectionCoeffs:
    """Connection coefficients split into Levi-Civita plus contorsion."""

    lc: np.ndarray          # Gamma^k_{ij}, symmetric in (i, j)
    contorsion: np.ndarray  # K^k_{ij}, zero for the Levi-Civita connection

    def __post_init__(self):
        if self.lc.shape != self.contorsion.shape:
            raise ValueError("lc and contorsion shapes differ")

    @property
    def total(self) -> np.ndarray:
        return self.lc + self.contorsion

    @property
    def n(self) -> int:
        return self.lc.shape[0]


def _partials_first(jet: FieldJet) -> np.ndarray:
    return np.moveaxis(jet.partials, -1, 0)


def levi_civita(g_jet: FieldJet) -> ConnectionCoeffs:
    """Levi-Civita coefficients from the metric jet.

    Gamma_{ij,l} = (d_i g_jl + d_j g_il - d_l g_ij) / 2 and the upper
    index is raised with the inverse metric.
    """
    g = g_jet.value
    if abs(np.linalg.det(g)) < 1e-14:
        raise SingularMetricError("Levi-Civita needs invertible g")
    dg = _partials_first(g_jet)  # dg[i, j, l] = d_i g_{jl}
    low = 0.5 * (dg + np.swapaxes(dg, 0, 1)
                 - np.einsum("lij->ijl", dg))
    gamma = np.einsum("kl,ijl->kij", np.linalg.inv(g), low)
    return ConnectionCoeffs(lc=gamma, contorsion=np.zeros_like(gamma))


def covariant_derivative(jet: FieldJet, coeffs: ConnectionCoeffs,
                         variance: str) -> np.ndarray:
    """Coordinate covariant derivative of a tensor jet.

    ``variance`` is one of "02", "11", "10" (vector) or "01" (covector).
    The output prepends the direction index.
    """
    tot = coeffs.total
    d = _partials_first(jet)
    v = jet.value
    if variance == "02":
        return (d - np.einsum("lij,lk->ijk", tot, v)
                - np.einsum("lik,jl->ijk", tot, v))
    if variance == "11":
        return (d + np.einsum("ail,lb->iab", tot, v)
                - np.einsum("lib,al->iab", tot, v))
    if variance == "10":
        return d + np.einsum("ail,l->ia", tot, v)
    if variance == "01":
        return d - np.einsum("lij,l->ij", tot, v)
    raise ValueError(f"unknown variance {variance!r}")


def exterior_derivative_2form(f_jet: FieldJet) -> np.ndarray:
    """(dF)_ijk = d_i F_jk + d_j F_ki + d_k F_ij (coboundary, no 1/3)."""
    df = _partials_first(f_jet)  # df[i, j, k] = d_i F_{jk}
    return df + np.einsum("jki->ijk", df) + np.einsum("kij->ijk", df)


def exterior_derivative_1form(eta_jet: FieldJet) -> np.ndarray:
    """(d eta)_ij = d_i eta_j - d_j eta_i (no 1/2 factor)."""
    de = eta_jet.partials.T  # de[i, j] = d_i eta_j
    return de - de.T


def nijenhuis(p_jet: FieldJet) -> np.ndarray:
    """N_P(X, Y) = [PX, PY] + P^2 [X, Y] - P[PX, Y] - P[X, PY] on the
    coordinate frame, returned as (1,2) components ``N[b, i, j]``.

    Coordinate fields commute, so the bracket terms reduce to products of
    P with its partials.
    """
    p = p_jet.value
    dp = _partials_first(p_jet)  # dp[c, a, b] = d_c P^a_b
    n = (np.einsum("ai,abj->bij", p, dp)
         - np.einsum("aj,abi->bij", p, dp)
         + np.einsum("jai,ba->bij", dp, p)
         - np.einsum("iaj,ba->bij", dp, p))
    return n


def lower_last_index(n12: np.ndarray, g: np.ndarray) -> np.ndarray:
    """(1,2) -> (0,3): out[i, j, l] = g(N(e_i, e_j), e_l)."""
    return np.einsum("la,aij->ijl", g, n12)


# -- jet algebra (value + partials, product rule throughout) ----------------

def jet_add(a: FieldJet, b: FieldJet) -> FieldJet:
    return FieldJet(a.value + b.value, a.partials + b.partials)


def jet_scale(a: FieldJet, c: float) -> FieldJet:
    return FieldJet(c * a.value, c * a.partials)


def jet_matmul(a: FieldJet, b: FieldJet) -> FieldJet:
    value = a.value @ b.value
    partials = (np.einsum("abk,bc->ack", a.partials, b.value)
                + np.einsum("ab,bck->ack", a.value, b.partials))
    return FieldJet(value, partials)


def jet_inverse(a: FieldJet) -> FieldJet:
    inv = np.linalg.inv(a.value)
    partials = -np.einsum("ab,bck,cd->adk", inv, a.partials, inv)
    return FieldJet(inv, partials)


def jet_outer(vec: FieldJet, covec: FieldJet) -> FieldJet:
    """(1,1) jet of xi (x) eta from a vector jet and a covector jet."""
    value = np.outer(vec.value, covec.value)
    partials = (np.einsum("ak,b->abk", vec.partials, covec.value)
                + np.einsum("a,bk->abk", vec.value, covec.partials))
    return FieldJet(value, partials)


def adjoint_jet(g_jet: FieldJet, f_jet: FieldJet) -> FieldJet:
    """Jet of A = -g^{-1} F, the derivative coming from the product rule
    with d(g^{-1}) = -g^{-1} (dg) g^{-1} rather than a second AD pass."""
    return jet_scale(jet_matmul(jet_inverse(g_jet), f_jet), -1.0)


def q_jet(a_jet: FieldJet, kind: str, eta_jet: FieldJet | None = None,
          xi_jet: FieldJet | None = None) -> FieldJet:
    """Jet of the structure square Q, by kind (see algebra.q_from_a)."""
    sign = 1.0 if kind == "para" else -1.0
    q = jet_scale(jet_matmul(a_jet, a_jet), sign)
    if eta_jet is not None and xi_jet is not None:
        q = jet_add(q, jet_outer(xi_jet, eta_jet))
    return q


def lagrange_projector_jets(q_jet_: FieldJet,
                            eigenvalues: np.ndarray) -> list[FieldJet]:
    """Jets of the Lagrange eigen-projectors for constant eigenvalues."""
    n = q_jet_.value.shape[0]
    dim = q_jet_.n
    eye_jet = FieldJet(np.eye(n), np.zeros((n, n, dim)))
    out = []
    for i, li in enumerate(eigenvalues):
        proj = eye_jet
        for j, lj in enumerate(eigenvalues):
            if j == i:
                continue
            shifted = FieldJet(q_jet_.value - lj * np.eye(n), q_jet_.partials)
            proj = jet_scale(jet_matmul(proj, shifted), 1.0 / (li - lj))
        out.append(proj)
    return out
