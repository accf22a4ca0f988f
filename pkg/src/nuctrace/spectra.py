"""Dense spectra of assembled representations and summability diagnostics.

The eigensolver contract is a full backward-stable dense spectrum with
algebraic multiplicities; the LAPACK solver behind ``numpy.linalg`` meets
it.  Reports order eigenvalues by nonincreasing modulus with ties broken by
ascending principal argument in (-pi, pi] (zero modulus sorts last, with
argument 0), so repeated runs produce identical files.

All tolerance budgets use the affine form ``tol * (1 + magnitude)`` so they
behave sensibly at both tiny and large scales.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exponents import OrderExponent
from .nuclear import NuclearRep, assemble, nuclear_trace
from .seqspace import DenseOperator

__all__ = [
    "EigensolverError",
    "SpectralReport",
    "LadderRow",
    "eigen_spectrum",
    "spectral_report",
    "weyl_check",
    "summability_ladder",
    "ladder_csv",
    "LADDER_CSV_HEADER",
]

LADDER_CSV_HEADER = "level,abs_sum,tail_fraction,residual"

# Eigensolver accuracy budget used by residual checks downstream.
RESIDUAL_BUDGET = 1e-9


class EigensolverError(RuntimeError):
    """Dense eigensolve did not converge; nothing is silently truncated."""


def eigen_spectrum(op: DenseOperator) -> np.ndarray:
    """All eigenvalues with algebraic multiplicity, in report order."""
    if op.domain != op.codomain:
        raise ValueError(f"spectrum needs an endomorphism, got {op.domain} -> {op.codomain}")
    try:
        ev = np.linalg.eigvals(op.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed to converge: {exc}") from exc
    return _sort_spectrum(ev)


def _sort_spectrum(ev: np.ndarray) -> np.ndarray:
    mods = np.abs(ev)
    args = np.angle(ev)
    args = np.where(args == -np.pi, np.pi, args)  # principal branch is (-pi, pi]
    args = np.where(mods == 0.0, 0.0, args)
    order = np.lexsort((args, -mods))
    out = ev[order]
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    matrix_trace: float
    eigen_sum: complex
    abs_sum: float
    lidskii_residual: float
    dim: int

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "matrix_trace": self.matrix_trace,
            "eigen_sum": [float(self.eigen_sum.real), float(self.eigen_sum.imag)],
            "abs_sum": self.abs_sum,
            "lidskii_residual": self.lidskii_residual,
        }


def spectral_report(rep: NuclearRep) -> SpectralReport:
    """Solve the assembled truncation and compare its trace data.

    ``lidskii_residual`` is the distance between the representation trace
    ``sum mu_k <f_k, v_k>`` and the eigenvalue sum; in finite dimensions it
    can only be eigensolver noise, which is exactly why it is the quantity
    worth watching as truncations grow.
    """
    op = assemble(rep)
    ev = eigen_spectrum(op)
    eigen_sum = complex(ev.sum())
    return SpectralReport(
        eigenvalues=ev,
        matrix_trace=float(np.trace(op.matrix)),
        eigen_sum=eigen_sum,
        abs_sum=float(np.abs(ev).sum()),
        lidskii_residual=abs(nuclear_trace(rep) - eigen_sum),
        dim=rep.ambient.dim,
    )


def weyl_check(rep: NuclearRep) -> dict:
    """Eigenvalue moduli against singular values against the weight sum.

    In finite dimensions ``sum |lambda_n| <= sum sigma_n`` always, and the
    singular value sum of ``sum mu_k v_k f_k^T`` with unit factors is at
    most ``sum mu_k``; this is the desk-scale shadow of absolute eigenvalue
    summability for the represented class.
    """
    op = assemble(rep)
    ev = eigen_spectrum(op)
    try:
        sv = np.linalg.svd(op.matrix, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"singular value solve failed: {exc}") from exc
    abs_sum = float(np.abs(ev).sum())
    singular_sum = float(sv.sum())
    nuclear_bound = float(rep.mu.sum())
    tol = RESIDUAL_BUDGET * (1.0 + nuclear_bound)
    return {
        "abs_sum": abs_sum,
        "singular_sum": singular_sum,
        "nuclear_bound": nuclear_bound,
        "pass": bool(abs_sum <= singular_sum + tol and singular_sum <= nuclear_bound + tol),
    }


@dataclass(frozen=True)
class LadderRow:
    level: int
    abs_sum: float
    tail_fraction: float
    residual: float


def summability_ladder(
    family: Callable[[int], NuclearRep],
    levels: Sequence[int],
    s: OrderExponent | None = None,
) -> list[LadderRow]:
    """Spectral summability diagnostics along a truncation ladder.

    ``family`` maps a truncation level to a representation (it must be
    deterministic for reproducible tables).  Each row reports the modulus
    sum ``S_N``, the fraction of it carried by eigenvalues ranked beyond
    ``N/4`` (a fixed-quantile tail statistic: summability is observable as
    a shrinking tail without asserting any rate), and the trace residual.
    Rows come back in ladder order.
    """
    levels = list(levels)
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("ladder levels must be strictly increasing")
    if s is not None:
        s = OrderExponent(s)
    rows = []
    for level in levels:
        rep = family(level)
        if s is not None and rep.order != s:
            raise ValueError(
                f"family produced order {rep.order} at level {level}, expected {s}"
            )
        report = spectral_report(rep)
        cutoff = level // 4
        mods = np.abs(report.eigenvalues)  # already sorted nonincreasing
        tail = float(mods[cutoff:].sum())
        tail_fraction = tail / report.abs_sum if report.abs_sum > 0 else 0.0
        rows.append(
            LadderRow(
                level=level,
                abs_sum=report.abs_sum,
                tail_fraction=tail_fraction,
                residual=report.lidskii_residual,
            )
        )
    return rows


def ladder_csv(rows: Sequence[LadderRow]) -> str:
    """CSV table with 12 significant digits in fixed scientific notation."""
    lines = [LADDER_CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row.level},{row.abs_sum:.11e},{row.tail_fraction:.11e},{row.residual:.11e}"
        )
    return "\n".join(lines) + "\n"
