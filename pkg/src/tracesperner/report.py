"""Tables comparing exact small-n values of f(n, k, n - lp) with the conjectured extremal bands."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .constructions import conjecture_rhs, midband_spec
from .family import TraceProblem
from .search import PROVEN, SearchBudget, central_binomial, max_trace_sperner

COLUMNS = (
    "n",
    "k",
    "lp",
    "exact_f",
    "best_known",
    "status",
    "conjecture1_rhs",
    "midband_size",
    "ratio_to_central_binomial",
    "conj3_normalized",
)


@dataclass(frozen=True)
class ReportRow:
    n: int
    k: int
    lp: int
    exact_f: Optional[int]
    best_known: int
    status: str
    conjecture1_rhs: int
    midband_size: int
    ratio_to_central_binomial: str
    conj3_normalized: Optional[str] = None

    def as_dict(self) -> dict:
        return asdict(self)


def _decimal(x: float) -> str:
    return f"{x:.6f}"


def conjecture_row(n: int, k: int, lp: int, budget: Optional[SearchBudget] = None) -> ReportRow:
    res = max_trace_sperner(TraceProblem.co(n, k, lp), budget)
    exact = res.best_size if res.status == PROVEN else None
    mid = midband_spec(n, k, lp).size if lp < k else 0
    central = central_binomial(n)
    conj3 = None
    if k <= lp:
        conj3 = _decimal(n ** (lp - k + 1) * res.best_size / central)
    return ReportRow(
        n=n,
        k=k,
        lp=lp,
        exact_f=exact,
        best_known=res.best_size,
        status=res.status,
        conjecture1_rhs=conjecture_rhs(n, k, lp),
        midband_size=mid,
        ratio_to_central_binomial=_decimal(res.best_size / central),
        conj3_normalized=conj3,
    )


def conjecture_rows(n_max: int, k_max: int, budget: Optional[SearchBudget] = None) -> list:
    """One row per (n, k, lp) with 2 <= n <= n_max, 1 <= k, lp <= k_max and lp < n."""
    rows = []
    for n in range(2, n_max + 1):
        for k in range(1, k_max + 1):
            for lp in range(1, min(k_max, n - 1) + 1):
                rows.append(conjecture_row(n, k, lp, budget))
    return rows
