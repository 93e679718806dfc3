"""Perfect-secrecy verification for linear schemes.

Two independent routes are provided: the matrix-rank criterion (observable
message columns must lie inside the observable key column space) and an
exhaustive entropy oracle that enumerates every message/key realisation and
compares conditional distributions with exact integer counts.  On any
instance small enough for the oracle the two must agree.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .gf import FieldMatrix, _reduce
from .scheme import WiretapScheme


class EnumerationBudgetError(ValueError):
    """The exhaustive oracle would exceed its enumeration budget."""

    def __init__(self, message: str, required: int) -> None:
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class SecurityReport:
    scheme_id: str
    condition: str  # "rank" | "entropy" | "mds"
    passed: bool
    counterexample: tuple | None
    subsets_checked: int

    def __post_init__(self) -> None:
        if not self.passed and self.counterexample is None:
            raise ValueError("a failing report must carry a counterexample")

    def to_dict(self) -> dict:
        return {
            "scheme_id": self.scheme_id,
            "condition": self.condition,
            "passed": self.passed,
            "counterexample": list(self.counterexample) if self.counterexample is not None else None,
            "subsets_checked": self.subsets_checked,
        }


def _matching(message_part: FieldMatrix, key_part: FieldMatrix) -> None:
    if message_part.q != key_part.q:
        raise ValueError("message and key parts live over different fields")
    if message_part.rows != key_part.rows:
        raise ValueError(
            f"row counts differ: {message_part.rows} message rows vs {key_part.rows} key rows"
        )


def _rank_of(arr: np.ndarray, q: int) -> int:
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return 0
    return len(_reduce(arr, q)[1])


def rank_condition_holds(message_part: FieldMatrix, key_part: FieldMatrix, rows: Sequence[int]) -> bool:
    """Rank criterion on one wiretap set: observing ``rows`` leaks nothing
    iff rank([message | key] restricted) equals rank(key restricted)."""
    idx = list(rows)
    joint = np.concatenate([message_part.data[idx], key_part.data[idx]], axis=1)
    return _rank_of(joint, message_part.q) == _rank_of(key_part.data[idx], key_part.q)


def _subset_sweep(n_rows: int, k: int):
    for size in range(1, min(k, n_rows) + 1):
        yield from itertools.combinations(range(n_rows), size)


def rank_condition(
    message_part: FieldMatrix,
    key_part: FieldMatrix,
    k: int,
    labels: Sequence | None = None,
    scheme_id: str = "",
) -> SecurityReport:
    """Sweep all wiretap sets of size at most k, lexicographically, stopping
    at the first counterexample."""
    _matching(message_part, key_part)
    labels = tuple(labels) if labels is not None else tuple(range(message_part.rows))
    checked = 0
    for combo in _subset_sweep(message_part.rows, k):
        checked += 1
        if not rank_condition_holds(message_part, key_part, combo):
            return SecurityReport(
                scheme_id=scheme_id,
                condition="rank",
                passed=False,
                counterexample=tuple(labels[i] for i in combo),
                subsets_checked=checked,
            )
    return SecurityReport(scheme_id, "rank", True, None, checked)


def mds_check(matrix: FieldMatrix, k: int, scheme_id: str = "") -> SecurityReport:
    """Pass iff every k-row submatrix has full rank k.

    The matrix must have exactly k columns and at least k rows.
    """
    if k < 0:
        raise ValueError("negative budget")
    if matrix.cols != k:
        raise ValueError(f"expected exactly {k} columns, got {matrix.cols}")
    if matrix.rows < k:
        raise ValueError(f"need at least {k} rows, got {matrix.rows}")
    checked = 0
    for combo in itertools.combinations(range(matrix.rows), k):
        checked += 1
        if _rank_of(matrix.data[list(combo)], matrix.q) != k:
            return SecurityReport(scheme_id, "mds", False, tuple(combo), checked)
    return SecurityReport(scheme_id, "mds", True, None, checked)


_CHUNK = 1 << 14


def conditionals_identical(message_part: FieldMatrix, key_part: FieldMatrix, rows: Sequence[int]) -> bool:
    """Exhaustive check that the distribution of the observed symbols on
    ``rows`` is the same for every message realisation.

    Counts outcomes over all key draws per message; the counts are exact
    integers with a common denominator, so equality of the count vectors is
    equality of the conditional distributions (zero mutual information).
    """
    q = message_part.q
    idx = list(rows)
    a = message_part.data[idx]  # |Z| x n_msg
    b = key_part.data[idx]  # |Z| x n_key
    n_msg = message_part.cols
    n_key = key_part.cols
    powers = q ** np.arange(len(idx), dtype=np.int64)
    key_codes = []
    for kv in itertools.product(range(q), repeat=n_key):
        key_codes.append((b @ np.array(kv, dtype=np.int64)) % q)
    total_w = q**n_msg
    msg_powers = q ** np.arange(n_msg, dtype=np.int64)
    reference: np.ndarray | None = None
    for start in range(0, total_w, _CHUNK):
        stop = min(start + _CHUNK, total_w)
        indices = np.arange(start, stop, dtype=np.int64)
        if n_msg:
            w = (indices[:, None] // msg_powers[None, :]) % q
            base = (w @ a.T) % q
        else:
            base = np.zeros((stop - start, len(idx)), dtype=np.int64)
        counts = np.zeros((stop - start, q ** len(idx)), dtype=np.int64)
        for offset in key_codes:
            codes = ((base + offset) % q) @ powers
            counts[np.arange(stop - start), codes] += 1
        if reference is None:
            reference = counts[0].copy()
        if not np.array_equal(counts, np.broadcast_to(reference, counts.shape)):
            return False
    return True


def entropy_oracle(
    message_part: FieldMatrix,
    key_part: FieldMatrix,
    k: int,
    budget: int = 10**7,
    labels: Sequence | None = None,
    scheme_id: str = "",
) -> SecurityReport:
    """Exhaustive secrecy check over all wiretap sets of size at most k.

    Refuses when q**(message symbols + key symbols) exceeds ``budget``.
    """
    _matching(message_part, key_part)
    q = message_part.q
    required = q ** (message_part.cols + key_part.cols)
    if required > budget:
        raise EnumerationBudgetError(
            f"exhaustive check needs {required} enumerations, budget is {budget}", required
        )
    labels = tuple(labels) if labels is not None else tuple(range(message_part.rows))
    checked = 0
    for combo in _subset_sweep(message_part.rows, k):
        checked += 1
        if not conditionals_identical(message_part, key_part, combo):
            return SecurityReport(
                scheme_id=scheme_id,
                condition="entropy",
                passed=False,
                counterexample=tuple(labels[i] for i in combo),
                subsets_checked=checked,
            )
    return SecurityReport(scheme_id, "entropy", True, None, checked)


@dataclass(frozen=True)
class EdgeModel:
    """Distinct observable symbol rows of a deployed scheme.

    In a two-layer network every edge touching relay i carries that relay's
    symbol, so the t relay rows cover all physical edges; wiretapping k edges
    reveals at most k distinct rows.
    """

    labels: tuple[str, ...]
    message_part: FieldMatrix
    key_part: FieldMatrix
    physical_edge_count: int


def wiretap_edge_model(scheme: WiretapScheme) -> EdgeModel:
    physical = scheme.net.t + sum(len(c) for c in scheme.net.connections)
    labels = tuple(f"relay_{i}" for i in range(1, scheme.net.t + 1))
    return EdgeModel(
        labels=labels,
        message_part=scheme.message_matrix,
        key_part=scheme.key_matrix,
        physical_edge_count=physical,
    )


def verify_scheme(
    scheme: WiretapScheme,
    mode: str = "both",
    k: int | None = None,
    budget: int = 10**7,
    scheme_id: str = "",
) -> list[SecurityReport]:
    """Run the requested secrecy checks against a scheme's edge model."""
    if mode not in ("rank", "entropy", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    budget_k = scheme.k if k is None else k
    model = wiretap_edge_model(scheme)
    reports = []
    if mode in ("rank", "both"):
        reports.append(rank_condition(model.message_part, model.key_part, budget_k, model.labels, scheme_id))
    if mode in ("entropy", "both"):
        reports.append(entropy_oracle(model.message_part, model.key_part, budget_k, budget, model.labels, scheme_id))
    return reports
