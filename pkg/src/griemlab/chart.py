"""Coordinate charts with jet-valued field evaluators.

A :class:`ChartManifold` is a single coordinate patch carrying evaluators for
the symmetric part ``g`` and skew part ``F`` of a generalized metric
``G = g + F`` (plus optional contact data ``eta``/``xi`` and an optional
explicit ``Q``).  Evaluators are plain functions of the coordinate scalars;
:func:`evaluate_jet` feeds them dual numbers to obtain components together
with exact first partial derivatives.

Evaluators are pure and stateless, so a manifold value may be shared
read-only across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .autodiff import Dual, gradient_of, seed_point, value_of
from .errors import ChartDomainError, SingularMetricError

STRUCTURE_KINDS = ("generic", "weak-hermitian", "weak-contact", "weak-f", "para")

#: fields that evaluate to matrices vs. vectors
_MATRIX_FIELDS = ("g", "F", "Q")
_VECTOR_FIELDS = ("eta", "xi")

DET_FLOOR = 1e-10


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in chart coordinates."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box bounds must have equal length")
        if any(l >= h for l, h in zip(self.lo, self.hi)):
            raise ValueError("box must satisfy lo < hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def contains(self, p, tol: float = 1e-12) -> bool:
        p = np.asarray(p, dtype=float)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return bool(np.all(p >= lo - tol) and np.all(p <= hi + tol))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return lo + (hi - lo) * rng.random((count, self.dim))

    @staticmethod
    def cube(dim: int, half_width: float = 1.0) -> "Box":
        return Box((-half_width,) * dim, (half_width,) * dim)


@dataclass(frozen=True)
class FieldJet:
    """Tensor components at a point plus all first coordinate derivatives.

    ``partials`` has shape ``value.shape + (n,)`` with the derivative index
    last: ``partials[..., k]`` is the k-th coordinate derivative.
    """

    value: np.ndarray
    partials: np.ndarray

    def __post_init__(self):
        if self.partials.shape[:-1] != self.value.shape:
            raise ValueError("partials shape must be value shape x n")

    @property
    def n(self) -> int:
        return self.partials.shape[-1]


@dataclass
class ChartManifold:
    """A manifold presented on one coordinate patch.

    ``g_field``/``F_field`` map a list of coordinate scalars (floats or
    duals) to an n x n nested list of scalars; ``eta_field``/``xi_field``
    return length-n lists.  ``q_field`` optionally overrides the
    structure-derived Q.
    """

    dim: int
    domain: Box
    g_field: Callable
    F_field: Callable
    eta_field: Optional[Callable] = None
    xi_field: Optional[Callable] = None
    q_field: Optional[Callable] = None
    kind: str = "generic"
    name: str = "custom"
    params: dict = field(default_factory=dict)
    sample_box: Optional[Box] = None

    def __post_init__(self):
        if self.kind not in STRUCTURE_KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.domain.dim != self.dim:
            raise ValueError("domain dimension mismatch")
        if self.sample_box is None:
            self.sample_box = self.domain

    @property
    def has_contact_data(self) -> bool:
        return self.eta_field is not None and self.xi_field is not None

    def field_evaluator(self, name: str) -> Callable:
        fn = {
            "g": self.g_field,
            "F": self.F_field,
            "eta": self.eta_field,
            "xi": self.xi_field,
            "Q": self.q_field,
        }.get(name)
        if fn is None:
            raise KeyError(f"manifold {self.name!r} has no field {name!r}")
        return fn

    def describe(self) -> str:
        if not self.params:
            return self.name
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({inner})"


def _pack(raw, n: int) -> FieldJet:
    entries = np.asarray(raw, dtype=object)
    value = np.empty(entries.shape, dtype=float)
    partials = np.zeros(entries.shape + (n,), dtype=float)
    for idx in np.ndindex(entries.shape):
        e = entries[idx]
        value[idx] = value_of(e)
        if isinstance(e, Dual):
            partials[idx] = e.grad
    return FieldJet(value, partials)


def evaluate_jet(manifold: ChartManifold, field_name: str, p) -> FieldJet:
    """Evaluate a field at ``p``, returning components and exact partials.

    Raises :class:`ChartDomainError` outside the chart domain and
    :class:`SingularMetricError` when ``g`` degenerates at ``p``.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (manifold.dim,):
        raise ValueError(f"point must have shape ({manifold.dim},)")
    if not manifold.domain.contains(p):
        raise ChartDomainError(
            f"point {p.tolist()} outside domain of {manifold.name!r}")
    fn = manifold.field_evaluator(field_name)
    jet = _pack(fn(seed_point(p)), manifold.dim)
    expected = (manifold.dim,) if field_name in _VECTOR_FIELDS \
        else (manifold.dim, manifold.dim)
    if jet.value.shape != expected:
        raise ValueError(
            f"field {field_name!r} returned shape {jet.value.shape}, "
            f"expected {expected}")
    if field_name == "g" and abs(np.linalg.det(jet.value)) < DET_FLOOR:
        raise SingularMetricError(
            f"g singular at {p.tolist()} on {manifold.name!r}")
    return jet


def field_value(manifold: ChartManifold, field_name: str, p) -> np.ndarray:
    """Value-only evaluation (floats in, floats out); cheaper than a jet."""
    p = np.asarray(p, dtype=float)
    fn = manifold.field_evaluator(field_name)
    raw = np.asarray(fn(list(p)), dtype=object)
    out = np.empty(raw.shape, dtype=float)
    for idx in np.ndindex(raw.shape):
        out[idx] = value_of(raw[idx])
    return out


def sample_points(manifold: ChartManifold, count: int, seed: int,
                  det_floor: float = DET_FLOOR) -> np.ndarray:
    """Seed-reproducible uniform samples from the chart's sample box.

    Points where ``|det g|`` falls below ``det_floor`` are rejected.
    """
    rng = np.random.default_rng(np.uint64(seed))
    box = manifold.sample_box
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 100 * count + 100:
            raise SingularMetricError(
                f"sampling failed on {manifold.name!r}: metric nearly "
                f"singular on most of the sample box")
        p = box.sample(rng, 1)[0]
        if abs(np.linalg.det(field_value(manifold, "g", p))) >= det_floor:
            points.append(p)
    return np.asarray(points)


def finite_difference_partials(manifold: ChartManifold, field_name: str, p,
                               h: float = 1e-5) -> np.ndarray:
    """Central-difference partials, the cross-check oracle for the duals."""
    p = np.asarray(p, dtype=float)
    base = field_value(manifold, field_name, p)
    out = np.zeros(base.shape + (manifold.dim,))
    for k in range(manifold.dim):
        dp = np.zeros_like(p)
        dp[k] = h
        plus = field_value(manifold, field_name, p + dp)
        minus = field_value(manifold, field_name, p - dp)
        out[..., k] = (plus - minus) / (2.0 * h)
    return out
