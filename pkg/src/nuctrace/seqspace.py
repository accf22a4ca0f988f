"""Finite truncations of the classical sequence spaces.

A :class:`SpaceTag` names a truncated space: ``lp(p, n)`` for any exponent
``p`` in ``[1, inf]``, plus the distinct tags ``c0(n)`` and ``linf(n)``.
At a fixed truncation ``c0``, ``linf`` and ``lp(inf)`` all carry the sup
norm, but they remain different tags on purpose: operator composition
requires exact tag equality at every junction, which turns wiring mistakes
in multi-stage factorizations into immediate errors instead of silently
wrong numbers.

Vectors and dense operators are immutable float64 arrays tagged with their
spaces.  Truncation levels are capped at 4096; everything is dense.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exponents import Exponent, conjugate

__all__ = [
    "MAX_DIM",
    "SpaceMismatchError",
    "SpaceTag",
    "Vector",
    "DenseOperator",
    "lp",
    "c0",
    "linf",
    "conjugate_tag",
    "lp_norm",
    "dual_pairing",
    "normalize",
    "apply",
    "compose",
    "identity_injection",
    "diagonal_operator",
    "tag_to_json",
    "tag_from_json",
    "vector_to_json",
    "vector_from_json",
    "operator_to_json",
    "operator_from_json",
]

MAX_DIM = 4096

_KINDS = ("lp", "c0", "linf")


class SpaceMismatchError(ValueError):
    """Raised when tags disagree where two objects must share a space."""


@dataclass(frozen=True)
class SpaceTag:
    kind: str
    p: Exponent | None
    dim: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "lp":
            if not isinstance(self.p, Exponent):
                object.__setattr__(self, "p", Exponent(self.p))
        elif self.p is not None:
            raise ValueError(f"{self.kind} tags carry no exponent")
        if not isinstance(self.dim, int) or not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dim must be an integer in [1, {MAX_DIM}], got {self.dim}")

    def __str__(self) -> str:
        if self.kind == "lp":
            return f"lp({self.p})^{self.dim}"
        return f"{self.kind}^{self.dim}"


def lp(p, dim: int) -> SpaceTag:
    return SpaceTag("lp", Exponent(p), dim)


def c0(dim: int) -> SpaceTag:
    return SpaceTag("c0", None, dim)


def linf(dim: int) -> SpaceTag:
    return SpaceTag("linf", None, dim)


def conjugate_tag(tag: SpaceTag) -> SpaceTag:
    """The tag carrying the dual norm at the same truncation.

    ``lp(p)`` pairs with ``lp(p')``; the sup-normed tags ``c0`` and
    ``linf`` pair with ``lp(1)``.
    """
    if tag.kind == "lp":
        return lp(conjugate(tag.p), tag.dim)
    return lp(1, tag.dim)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Vector:
    coords: np.ndarray
    space: SpaceTag

    def __post_init__(self):
        coords = np.array(self.coords, dtype=np.float64, copy=True)
        if coords.ndim != 1 or coords.shape != (self.space.dim,):
            raise ValueError(
                f"coordinates of shape {coords.shape} do not match {self.space}"
            )
        object.__setattr__(self, "coords", _freeze(coords))


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray
    domain: SpaceTag
    codomain: SpaceTag

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64, copy=True)
        if m.ndim != 2 or m.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match "
                f"{self.codomain.dim} x {self.domain.dim} for {self.domain} -> {self.codomain}"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def lp_norm(v: Vector) -> float:
    """Norm of ``v`` in its tagged space: power mean for finite p, sup otherwise."""
    x = np.abs(v.coords)
    tag = v.space
    if tag.kind != "lp" or tag.p.is_inf:
        return float(x.max(initial=0.0))
    pf = float(tag.p)
    if pf == 1.0:
        return float(x.sum())
    if pf == 2.0:
        return float(np.sqrt(np.dot(x, x)))
    top = x.max(initial=0.0)
    if top == 0.0:
        return 0.0
    # scale out the peak so large p does not underflow
    return float(top * np.power(np.power(x / top, pf).sum(), 1.0 / pf))


def dual_pairing(f: Vector, v: Vector) -> float:
    """Bilinear pairing ``sum_i f_i v_i`` between a functional and a vector."""
    if f.space != conjugate_tag(v.space):
        raise SpaceMismatchError(
            f"functional tagged {f.space} cannot pair with vector in {v.space}"
        )
    return float(np.dot(f.coords, v.coords))


def normalize(v: Vector) -> Vector:
    nrm = lp_norm(v)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return Vector(v.coords / nrm, v.space)


def apply(op: DenseOperator, v: Vector) -> Vector:
    if v.space != op.domain:
        raise SpaceMismatchError(f"vector in {v.space} fed to operator on {op.domain}")
    return Vector(op.matrix @ v.coords, op.codomain)


def compose(ops: Sequence[DenseOperator]) -> DenseOperator:
    """Compose stages listed in application order (first applied first)."""
    if not ops:
        raise ValueError("compose needs at least one operator")
    for i in range(len(ops) - 1):
        if ops[i].codomain != ops[i + 1].domain:
            raise SpaceMismatchError(
                f"junction {i}: stage {i} ends in {ops[i].codomain} "
                f"but stage {i + 1} starts from {ops[i + 1].domain}"
            )
    product = ops[0].matrix
    for op in ops[1:]:
        product = op.matrix @ product
    return DenseOperator(product, ops[0].domain, ops[-1].codomain)


def identity_injection(domain: SpaceTag, codomain: SpaceTag) -> DenseOperator:
    """The formal identity between two tags of equal truncation."""
    if domain.dim != codomain.dim:
        raise SpaceMismatchError("identity injection needs equal truncations")
    return DenseOperator(np.eye(domain.dim), domain, codomain)


def diagonal_operator(diag, domain: SpaceTag, codomain: SpaceTag) -> DenseOperator:
    d = np.asarray(diag, dtype=np.float64).reshape(-1)
    if not domain.dim == codomain.dim == d.shape[0]:
        raise SpaceMismatchError("diagonal length must match both truncations")
    return DenseOperator(np.diag(d), domain, codomain)


# --- JSON interchange -------------------------------------------------------
#
# Vectors and matrices travel as plain JSON arrays (row-major for matrices)
# next to their tags; this is the format the CLI imports and exports.


def tag_to_json(tag: SpaceTag) -> dict:
    out: dict = {"kind": tag.kind, "dim": tag.dim}
    if tag.kind == "lp":
        out["p"] = str(tag.p)
    return out


def tag_from_json(data: dict) -> SpaceTag:
    kind = data["kind"]
    if kind == "lp":
        return lp(Exponent(data["p"]), int(data["dim"]))
    return SpaceTag(kind, None, int(data["dim"]))


def vector_to_json(v: Vector) -> dict:
    return {"space": tag_to_json(v.space), "coords": [float(x) for x in v.coords]}


def vector_from_json(data: dict) -> Vector:
    return Vector(np.asarray(data["coords"], dtype=np.float64), tag_from_json(data["space"]))


def operator_to_json(op: DenseOperator) -> dict:
    return {
        "domain": tag_to_json(op.domain),
        "codomain": tag_to_json(op.codomain),
        "matrix": [[float(x) for x in row] for row in op.matrix],
    }


def operator_from_json(data: dict) -> DenseOperator:
    return DenseOperator(
        np.asarray(data["matrix"], dtype=np.float64),
        tag_from_json(data["domain"]),
        tag_from_json(data["codomain"]),
    )
