"""Finite nuclear representations and their rewrite calculus.

A representation is a finite weighted sum of rank-one terms

    sum_k  mu_k * (f_k tensor v_k),

with vectors ``v_k`` unit-normed in the ambient ``lp`` truncation and
functionals ``f_k`` unit-normed in the conjugate tag.  The constructor
enforces the unit-norm convention by absorbing all scales into ``mu``, so
``mu`` is always the full weight of its term.

Rewrites (``split``, ``merge``, ``rotate``) change the term list while
leaving the assembled matrix fixed to rounding error; they are the probes
used to observe that the trace functional does not depend on which term
list represents an operator.
"""

from __future__ import annotations

import numpy as np

from .exponents import OrderExponent, s_from_p
from .seqspace import (
    DenseOperator,
    SpaceMismatchError,
    SpaceTag,
    Vector,
    conjugate_tag,
    lp,
    lp_norm,
)

__all__ = [
    "MU_FLOOR",
    "SchemeNotApplicableError",
    "NuclearRep",
    "quasi_norm_value",
    "nuclear_trace",
    "assemble",
    "adjoint_rep",
    "rewrite_equivalent",
    "equivalent",
    "rep_to_json",
    "rep_from_json",
]

# Terms lighter than this are dropped at construction: they are smaller than
# any representable relative contribution and only risk denormal underflow.
MU_FLOOR = 1e-300

_REWRITE_SCHEMES = ("split", "merge", "rotate")


class SchemeNotApplicableError(ValueError):
    """Raised when a rewrite scheme has no admissible target in the rep."""


class NuclearRep:
    """An s-nuclear representation over an ``lp`` truncation.

    Parameters
    ----------
    ambient : SpaceTag
        Must be of kind ``lp``; domain and codomain of the represented
        operator coincide.
    terms : iterable of (mu, functional_coords, vector_coords)
        Weights may carry un-normalized data; norms are absorbed into mu.
    order : OrderExponent, optional
        Defaults to the curve value ``s_from_p(ambient.p)``; override only
        for experiments that scan the order away from the curve.
    """

    __slots__ = ("ambient", "conjugate", "order", "_mu", "_fun", "_vec")

    def __init__(self, ambient: SpaceTag, terms, order: OrderExponent | None = None):
        if ambient.kind != "lp":
            raise ValueError(f"ambient space must be an lp tag, got {ambient}")
        self.ambient = ambient
        self.conjugate = conjugate_tag(ambient)
        self.order = OrderExponent(order) if order is not None else s_from_p(ambient.p)

        mus, funs, vecs = [], [], []
        for mu, f_coords, v_coords in terms:
            mu = float(mu)
            if not np.isfinite(mu) or mu < 0:
                raise ValueError(f"term weights must be finite and >= 0, got {mu}")
            f = Vector(f_coords, self.conjugate)
            v = Vector(v_coords, ambient)
            scale = mu * lp_norm(f) * lp_norm(v)
            if scale < MU_FLOOR:
                continue
            mus.append(scale)
            funs.append(f.coords / lp_norm(f))
            vecs.append(v.coords / lp_norm(v))

        n = ambient.dim
        if mus:
            order_idx = np.argsort(-np.asarray(mus), kind="stable")
            self._mu = np.asarray(mus, dtype=np.float64)[order_idx]
            self._fun = np.asarray(funs, dtype=np.float64)[order_idx]
            self._vec = np.asarray(vecs, dtype=np.float64)[order_idx]
        else:
            self._mu = np.zeros(0)
            self._fun = np.zeros((0, n))
            self._vec = np.zeros((0, n))
        for a in (self._mu, self._fun, self._vec):
            a.flags.writeable = False

    def __len__(self) -> int:
        return self._mu.shape[0]

    @property
    def mu(self) -> np.ndarray:
        """Term weights, nonincreasing."""
        return self._mu

    @property
    def functionals(self) -> np.ndarray:
        """Row k holds the coordinates of the k-th unit functional."""
        return self._fun

    @property
    def vectors(self) -> np.ndarray:
        """Row k holds the coordinates of the k-th unit vector."""
        return self._vec

    def term(self, k: int) -> tuple[float, Vector, Vector]:
        return (
            float(self._mu[k]),
            Vector(self._fun[k], self.conjugate),
            Vector(self._vec[k], self.ambient),
        )

    def raw_terms(self) -> list[tuple[float, np.ndarray, np.ndarray]]:
        return [
            (float(self._mu[k]), self._fun[k].copy(), self._vec[k].copy())
            for k in range(len(self))
        ]

    def __repr__(self) -> str:
        return f"NuclearRep({self.ambient}, {len(self)} terms, s={self.order})"


def quasi_norm_value(rep: NuclearRep, s) -> float:
    """Representation value ``(sum_k (mu_k |f_k| |v_k|)^s)^(1/s)``.

    This is the value of the *given* term list, an upper bound for the
    infimum over all representations (which is not computed here: it is a
    nonconvex search with no computable certificate).  For a fixed rep the
    value is nonincreasing in ``s``.
    """
    s = OrderExponent(s)
    if len(rep) == 0:
        return 0.0
    norms_f = np.array([lp_norm(Vector(f, rep.conjugate)) for f in rep.functionals])
    norms_v = np.array([lp_norm(Vector(v, rep.ambient)) for v in rep.vectors])
    sf = float(s)
    return float(np.power(np.power(rep.mu * norms_f * norms_v, sf).sum(), 1.0 / sf))


def nuclear_trace(rep: NuclearRep) -> float:
    """``sum_k mu_k <f_k, v_k>``, linear in the term list."""
    if len(rep) == 0:
        return 0.0
    pairings = np.einsum("kn,kn->k", rep.functionals, rep.vectors)
    return float(np.dot(rep.mu, pairings))


def assemble(rep: NuclearRep) -> DenseOperator:
    """Materialize ``sum_k mu_k v_k f_k^T`` as a dense matrix on the ambient tag."""
    n = rep.ambient.dim
    if len(rep) == 0:
        m = np.zeros((n, n))
    else:
        m = (rep.mu[:, None] * rep.vectors).T @ rep.functionals
    return DenseOperator(m, rep.ambient, rep.ambient)


def adjoint_rep(rep: NuclearRep) -> NuclearRep:
    """Swap functional and vector roles; the transpose acting on the conjugate tag.

    Unit norms are preserved by the swap (each side was normalized in the
    norm it now needs), the weights are untouched, the trace is identical,
    and the assembled matrix is the transpose of the original.  This is how
    a representation on ``lp(p)`` with ``p < 2`` is handed to code that
    requires ``p >= 2``.
    """
    swapped = [(mu, v, f) for mu, f, v in rep.raw_terms()]
    return NuclearRep(rep.conjugate, swapped, order=rep.order)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _split(rep: NuclearRep, rng: np.random.Generator) -> list:
    if len(rep) < 1:
        raise SchemeNotApplicableError("split needs at least one term")
    terms = rep.raw_terms()
    k = int(rng.integers(len(terms)))
    mu, f, v = terms[k]
    terms[k : k + 1] = [(mu / 2.0, f, v), (mu / 2.0, f.copy(), v.copy())]
    return terms


def _parallel_pairs(rep: NuclearRep) -> list[tuple[int, int]]:
    """Pairs whose rank-one terms are positively parallel (mergeable).

    A pair is mergeable when (f_i, v_i) = (sign f_j, sign v_j) with a joint
    sign, so both outer products point the same way.  Each term is
    sign-canonicalized (the functional's largest entry made positive, the
    vector flipped along) and the joint rows are lexsorted: candidates are
    then adjacent, which keeps the scan near-linear instead of quadratic.
    """
    k = len(rep)
    if k < 2:
        return []
    lead = np.argmax(np.abs(rep.functionals), axis=1)
    signs = np.sign(rep.functionals[np.arange(k), lead])
    signs[signs == 0] = 1.0
    canon = np.concatenate([rep.functionals, rep.vectors], axis=1) * signs[:, None]
    order = np.lexsort(canon.T[::-1])
    pairs = []
    for a, b in zip(order, order[1:]):
        if np.allclose(canon[a], canon[b], rtol=1e-9, atol=1e-12):
            pairs.append((min(a, b), max(a, b)))
    return pairs


def _merge(rep: NuclearRep, rng: np.random.Generator) -> list:
    pairs = _parallel_pairs(rep)
    if not pairs:
        raise SchemeNotApplicableError("merge needs two parallel-compatible terms")
    i, j = pairs[int(rng.integers(len(pairs)))]
    terms = rep.raw_terms()
    mu_i, f_i, v_i = terms[i]
    mu_j = terms[j][0]
    merged = (mu_i + mu_j, f_i, v_i)
    return [merged] + [t for k, t in enumerate(terms) if k not in (i, j)]


def _rotate(rep: NuclearRep, rng: np.random.Generator) -> list:
    if len(rep) < 2:
        raise SchemeNotApplicableError("rotate needs at least two terms")
    idx = rng.choice(len(rep), size=2, replace=False)
    i, j = int(idx[0]), int(idx[1])
    theta = float(rng.uniform(np.pi / 8, 3 * np.pi / 8))
    return rotate_pair(rep, i, j, theta)


def rotate_pair(rep: NuclearRep, i: int, j: int, theta: float) -> list:
    """Joint plane rotation of terms i and j; the assembled sum is invariant.

    Writing the pair as ``x_i y_i^T + x_j y_j^T`` with ``x = mu v`` scaled
    and ``y = f``, both sides are rotated by the same angle:

        x_i' =  c x_i + s x_j      y_i' =  c y_i + s y_j
        x_j' = -s x_i + c x_j      y_j' = -s y_i + c y_j

    so the sum of outer products is exactly preserved (the rotation cancels
    against its transpose).  When the pair shares a functional the rotation
    redistributes weight between the two terms; at theta = pi/4 one term
    degenerates to zero and is dropped, which merges the pair.
    """
    c, s = np.cos(theta), np.sin(theta)
    terms = rep.raw_terms()
    mu_i, f_i, v_i = terms[i]
    mu_j, f_j, v_j = terms[j]
    x_i, x_j = mu_i * v_i, mu_j * v_j
    new_i = (1.0, c * f_i + s * f_j, c * x_i + s * x_j)
    new_j = (1.0, -s * f_i + c * f_j, -s * x_i + c * x_j)
    out = [t for k, t in enumerate(terms) if k not in (i, j)]
    for mu, f, v in (new_i, new_j):
        # a degenerate side (for a shared pair at theta = pi/4, up to rounding)
        # leaves a term far below the pair weight; dropping it perturbs the
        # assembled matrix by at most 1e-14 relative, inside the contract
        weight = lp_norm(Vector(f, rep.conjugate)) * lp_norm(Vector(v, rep.ambient))
        if weight <= 1e-14 * (mu_i + mu_j):
            continue
        out.append((mu, f, v))
    return out


def rewrite_equivalent(rep: NuclearRep, scheme: str, seed: int) -> NuclearRep:
    """Return a different term list assembling to the same matrix.

    ``split`` halves one term into two copies, ``merge`` inverts a split on
    a parallel-compatible pair, ``rotate`` applies the joint plane rotation
    of :func:`rotate_pair` to a random pair.  Deterministic in (rep, scheme,
    seed).
    """
    if scheme not in _REWRITE_SCHEMES:
        raise ValueError(f"unknown rewrite scheme {scheme!r}")
    rng = _rng(seed)
    if scheme == "split":
        terms = _split(rep, rng)
    elif scheme == "merge":
        terms = _merge(rep, rng)
    else:
        terms = _rotate(rep, rng)
    return NuclearRep(rep.ambient, terms, order=rep.order)


def equivalent(rep1: NuclearRep, rep2: NuclearRep, tol: float) -> bool:
    """Frobenius comparison of the assembled matrices at relative tolerance."""
    if rep1.ambient != rep2.ambient:
        raise SpaceMismatchError(
            f"cannot compare reps on {rep1.ambient} and {rep2.ambient}"
        )
    m1 = assemble(rep1).matrix
    m2 = assemble(rep2).matrix
    return float(np.linalg.norm(m1 - m2)) <= tol * (1.0 + float(np.linalg.norm(m1)))


def rep_to_json(rep: NuclearRep) -> dict:
    return {
        "ambient": {"p": str(rep.ambient.p), "dim": rep.ambient.dim},
        "order_s": str(rep.order),
        "terms": [
            {
                "mu": float(mu),
                "functional": [float(x) for x in f],
                "vector": [float(x) for x in v],
            }
            for mu, f, v in rep.raw_terms()
        ],
    }


def rep_from_json(data: dict) -> NuclearRep:
    ambient = lp(data["ambient"]["p"], int(data["ambient"]["dim"]))
    terms = [
        (t["mu"], np.asarray(t["functional"], dtype=np.float64),
         np.asarray(t["vector"], dtype=np.float64))
        for t in data["terms"]
    ]
    order = OrderExponent(data["order_s"]) if "order_s" in data else None
    return NuclearRep(ambient, terms, order=order)
