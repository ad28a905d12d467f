"""Point frames: everything the residual checks need at one sample point."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import algebra, calculus
from .chart import ChartManifold, FieldJet, evaluate_jet
from .errors import StructureKindError


@dataclass
class PointFrame:
    """A sample point with evaluated jets and derived tensors.

    Holds the g and F jets, the metric inverse, the adjoint tensor A (with
    jet, from the product rule on g and F), the structure square Q where the
    chart kind defines one, and the Levi-Civita coefficients.  Derived
    quantities (dF, nabla F, Nijenhuis tensors) are computed lazily and
    cached.
    """

    manifold: ChartManifold
    p: np.ndarray
    g: FieldJet
    F: FieldJet
    eta: Optional[FieldJet] = None
    xi: Optional[FieldJet] = None
    q_override: Optional[FieldJet] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.manifold.dim

    @property
    def kind(self) -> str:
        return self.manifold.kind

    @cached_property
    def g_inv(self) -> np.ndarray:
        return np.linalg.inv(self.g.value)

    @cached_property
    def A(self) -> FieldJet:
        return calculus.adjoint_jet(self.g, self.F)

    @cached_property
    def Q(self) -> Optional[FieldJet]:
        if self.q_override is not None:
            return self.q_override
        if self.kind == "generic":
            return None
        if self.kind in ("weak-contact", "weak-f") and (self.eta is None or
                                                        self.xi is None):
            if self.kind == "weak-contact":
                raise StructureKindError(
                    f"{self.manifold.name!r}: weak-contact chart lacks "
                    "eta/xi fields")
            return None
        return calculus.q_jet(self.A, self.kind, self.eta, self.xi)

    @cached_property
    def lc(self) -> calculus.ConnectionCoeffs:
        return calculus.levi_civita(self.g)

    @cached_property
    def dF(self) -> np.ndarray:
        return calculus.exterior_derivative_2form(self.F)

    @cached_property
    def deta(self) -> np.ndarray:
        if self.eta is None:
            raise StructureKindError("chart has no eta field")
        return calculus.exterior_derivative_1form(self.eta)

    @cached_property
    def nabla_g_F(self) -> np.ndarray:
        """(nabla^g F)[i, j, k] with the Levi-Civita connection."""
        return calculus.covariant_derivative(self.F, self.lc, "02")

    @cached_property
    def nabla_g_A(self) -> np.ndarray:
        return calculus.covariant_derivative(self.A, self.lc, "11")

    @cached_property
    def nijenhuis_A(self) -> np.ndarray:
        """N_A as (0,3) components, lowered with g."""
        return calculus.lower_last_index(calculus.nijenhuis(self.A),
                                         self.g.value)

    @cached_property
    def nijenhuis_Q(self) -> np.ndarray:
        if self.Q is None:
            raise StructureKindError("chart kind defines no Q")
        return calculus.lower_last_index(calculus.nijenhuis(self.Q),
                                         self.g.value)


def frame_at(manifold: ChartManifold, p) -> PointFrame:
    p = np.asarray(p, dtype=float)
    g = evaluate_jet(manifold, "g", p)
    F = evaluate_jet(manifold, "F", p)
    eta = xi = None
    if manifold.has_contact_data:
        eta = evaluate_jet(manifold, "eta", p)
        xi = evaluate_jet(manifold, "xi", p)
    q_override = None
    if manifold.q_field is not None:
        q_override = evaluate_jet(manifold, "Q", p)
    return PointFrame(manifold=manifold, p=p, g=g, F=F, eta=eta, xi=xi,
                      q_override=q_override)


def q_endo(frame: PointFrame) -> algebra.EndoAtPoint:
    q = frame.Q
    if q is None:
        raise StructureKindError(
            f"{frame.manifold.name!r} ({frame.kind}) defines no Q")
    return algebra.EndoAtPoint(q.value, adjoint="selfadjoint")
