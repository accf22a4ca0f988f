"""Five-stage diagonal factorization of a nuclear representation.

A representation ``sum_k mu_k f_k tensor v_k`` on an ``lp(p)`` truncation
with ``p >= 2`` factors through the chain

    lp(p) --A--> linf --D(mu^(1-s))--> lp(r) --j--> c0
          --D(mu^(s/2))--> lp(2) --D(mu^(s/2))--> lp(1) --B--> lp(p)

where row k of A evaluates the k-th functional, B sends the k-th basis
vector to v_k, j is the formal identity, and the middle diagonals carry the
weights.  The exponent r is chosen by ``(1 - s) r = s``, which is exactly
what makes the first diagonal r-summable whenever the weights are
s-summable; splitting the last diagonal evenly into two ``mu^(s/2)``
factors puts both halves in the Hilbert space whenever the same sum is
finite.

Each stage is certified with a summing exponent and a recorded upper
bound.  The three certificate exponents (r, 2, p) always satisfy
``1/r + 1/2 + 1/p = 1`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import (
    Exponent,
    OrderExponent,
    ParameterTriple,
    check_holder_chain,
    conjugate,
    r_from_s,
    reduce_to_p_ge_2,
    s_from_p,
)
from .nuclear import NuclearRep, assemble
from .seqspace import (
    DenseOperator,
    Vector,
    c0,
    compose,
    diagonal_operator,
    identity_injection,
    linf,
    lp,
    lp_norm,
    operator_to_json,
)

__all__ = [
    "Pipeline",
    "SummingCertificate",
    "build_pipeline",
    "split_diagonal",
    "summing_certificates",
    "exponent_budget",
    "pipeline_to_json",
]


@dataclass(frozen=True)
class SummingCertificate:
    """A recorded summing-norm upper bound for one composite stage."""

    stage_label: str  # "U1", "U2" or "U3"
    exponent: Exponent
    bound: float
    formula: str

    def as_dict(self) -> dict:
        return {
            "stage": self.stage_label,
            "exponent": str(self.exponent),
            "bound": self.bound,
            "formula": self.formula,
        }


@dataclass(frozen=True)
class Pipeline:
    """The assembled five-stage factorization record."""

    stage_a: DenseOperator      # lp(p) -> linf, row k = functional k
    stage_d1ms: DenseOperator   # linf -> lp(r), diag mu^(1-s)
    stage_j: DenseOperator      # lp(r) -> c0, formal identity
    stage_d1: DenseOperator     # c0 -> lp(2), diag mu^(s/2)
    stage_d2: DenseOperator     # lp(2) -> lp(1), diag mu^(s/2)
    stage_b: DenseOperator      # lp(1) -> lp(p), column k = vector k
    triple: ParameterTriple
    mu: np.ndarray

    def __post_init__(self):
        m = np.array(self.mu, dtype=np.float64, copy=True).reshape(-1)
        m.flags.writeable = False
        object.__setattr__(self, "mu", m)

    def stages(self) -> list[DenseOperator]:
        """All six stages in application order."""
        return [
            self.stage_a,
            self.stage_d1ms,
            self.stage_j,
            self.stage_d1,
            self.stage_d2,
            self.stage_b,
        ]

    def composed(self) -> DenseOperator:
        return compose(self.stages())


def split_diagonal(mu, s) -> tuple[np.ndarray, np.ndarray]:
    """Even split of the diagonal ``mu^s`` into two ``mu^(s/2)`` factors.

    Both halves have squared l2 norm ``sum mu^s``, so they live in the
    Hilbert space exactly when the s-powers are summable.  Among uneven
    splits ``(mu^(a s), mu^((1-a) s))`` the even one minimizes the larger
    of the two l2 bounds.
    """
    mu = np.asarray(mu, dtype=np.float64).reshape(-1)
    if mu.size == 0 or np.any(mu <= 0) or not np.all(np.isfinite(mu)):
        raise ValueError("diagonal entries must be strictly positive and finite")
    s = OrderExponent(s)
    half = np.power(mu, float(s) / 2.0)
    return half, half.copy()


def build_pipeline(rep: NuclearRep) -> Pipeline:
    """Factor ``rep`` through the diagonal chain; requires ambient p >= 2.

    Callers holding ``p < 2`` data must pass the conjugated representation
    (see :func:`nuctrace.nuclear.adjoint_rep`); building directly on the
    small-exponent side would need a second, untested chain, so it is
    rejected rather than guessed at.
    """
    p = rep.ambient.p
    if p < 2:
        raise ValueError(
            f"pipeline requires p >= 2; reduce p={p} by conjugation first"
        )
    if len(rep) == 0:
        raise ValueError("cannot factor an empty representation")
    triple = exponent_budget(p)
    if rep.order != triple.s:
        raise ValueError(
            f"representation order {rep.order} is off the curve value {triple.s}; "
            "the pipeline factors at the curve order only"
        )
    mu = rep.mu
    if np.any(mu <= 0):
        raise ValueError("all term weights must be strictly positive; drop zero terms")

    k = len(rep)
    s = float(triple.s)
    tag_y = rep.ambient
    tag_inf = linf(k)
    tag_r = lp(triple.r, k)
    tag_c0 = c0(k)
    tag_2 = lp(2, k)
    tag_1 = lp(1, k)

    d1, d2 = split_diagonal(mu, triple.s)
    d1ms = np.power(mu, 1.0 - s)

    pipe = Pipeline(
        stage_a=DenseOperator(rep.functionals, tag_y, tag_inf),
        stage_d1ms=diagonal_operator(d1ms, tag_inf, tag_r),
        stage_j=identity_injection(tag_r, tag_c0),
        stage_d1=diagonal_operator(d1, tag_c0, tag_2),
        stage_d2=diagonal_operator(d2, tag_2, tag_1),
        stage_b=DenseOperator(rep.vectors.T, tag_1, tag_y),
        triple=triple,
        mu=mu,
    )
    _check_pipeline(pipe, rep)
    return pipe


def _check_pipeline(pipe: Pipeline, rep: NuclearRep) -> None:
    """Internal consistency gates; violations indicate a wiring bug."""
    target = assemble(rep).matrix
    recon = pipe.composed().matrix
    err = np.linalg.norm(recon - target)
    if err > 1e-10 * (1.0 + np.linalg.norm(target)):
        raise RuntimeError(f"pipeline does not reconstruct its representation: {err:g}")
    d1 = np.diag(pipe.stage_d1.matrix)
    d2 = np.diag(pipe.stage_d2.matrix)
    d1ms = np.diag(pipe.stage_d1ms.matrix)
    if not np.allclose(d1 * d2 * d1ms, pipe.mu, rtol=1e-13, atol=0.0):
        raise RuntimeError("diagonal stages do not multiply back to the weights")


def _opnorm_lp_to_sup(op: DenseOperator) -> float:
    """Exact operator norm lp(p) -> sup-normed tag: max dual norm of the rows."""
    dual = conjugate(op.domain.p)
    return max(lp_norm(Vector(row, lp(dual, op.domain.dim))) for row in op.matrix)


def _opnorm_l1_to_lp(op: DenseOperator) -> float:
    """Exact operator norm lp(1) -> lp(p): max codomain norm of the columns."""
    tag = op.codomain
    return max(lp_norm(Vector(col, tag)) for col in op.matrix.T)


def summing_certificates(pipe: Pipeline) -> list[SummingCertificate]:
    """Certificates for the three-factor regrouping U3, U2, U1 (applied in
    that order), with exponents (r, 2, p) summing reciprocally to 1.

    U3 = j . D(mu^(1-s)) . A   absolutely r-summing, diagonal bound;
    U2 = D(mu^(s/2))           absolutely 2-summing, Hilbert diagonal bound;
    U1 = B . D(mu^(s/2))       absolutely p-summing via order boundedness.

    The U3 and U2 bounds are the exact diagonal formulas scaled by exact
    finite-stage operator norms.  The U1 bound reuses the same diagonal l2
    value; order boundedness gives no constant, so its sharpness is not
    certified.
    """
    triple = pipe.triple
    k = pipe.mu.shape[0]
    d1ms = np.diag(pipe.stage_d1ms.matrix)
    d1 = np.diag(pipe.stage_d1.matrix)

    norm_a = _opnorm_lp_to_sup(pipe.stage_a)
    norm_b = _opnorm_l1_to_lp(pipe.stage_b)
    d1ms_r = lp_norm(Vector(d1ms, lp(triple.r, k)))
    d_l2 = lp_norm(Vector(d1, lp(2, k)))

    certs = [
        SummingCertificate(
            "U3",
            triple.r,
            d1ms_r * norm_a,
            "lr_norm(mu^(1-s)) * opnorm(A); sup of the diagonal when r = inf",
        ),
        SummingCertificate(
            "U2",
            Exponent(2),
            d_l2,
            "l2_norm(mu^(s/2)) = (sum mu^s)^(1/2)",
        ),
        SummingCertificate(
            "U1",
            triple.p,
            norm_b * d_l2,
            "opnorm(B) * l2_norm(mu^(s/2)); order-bounded upper bound, "
            "sharpness not certified",
        ),
    ]
    if not check_holder_chain([c.exponent for c in certs]):
        raise RuntimeError("certificate exponents fail the exact chain identity")
    return certs


def exponent_budget(p) -> ParameterTriple:
    """Reduce ``p`` to its large conjugate and solve the curve for (s, r).

    The identity ``(1 - s) r = s`` encoded in the triple is what guarantees
    the ``mu^(1-s)`` diagonal is r-summable whenever ``mu^s`` is summable.
    """
    p2 = reduce_to_p_ge_2(p)
    s = s_from_p(p2)
    return ParameterTriple(p2, s, r_from_s(s))


def pipeline_to_json(pipe: Pipeline) -> dict:
    return {
        "triple": pipe.triple.as_dict(),
        "mu": [float(x) for x in pipe.mu],
        "diagonals": {
            "d_one_minus_s": [float(x) for x in np.diag(pipe.stage_d1ms.matrix)],
            "d_half_s_1": [float(x) for x in np.diag(pipe.stage_d1.matrix)],
            "d_half_s_2": [float(x) for x in np.diag(pipe.stage_d2.matrix)],
        },
        "stages": {
            "A": operator_to_json(pipe.stage_a),
            "D_one_minus_s": operator_to_json(pipe.stage_d1ms),
            "J": operator_to_json(pipe.stage_j),
            "D1": operator_to_json(pipe.stage_d1),
            "D2": operator_to_json(pipe.stage_d2),
            "B": operator_to_json(pipe.stage_b),
        },
        "certificates": [c.as_dict() for c in summing_certificates(pipe)],
    }
