"""Brute-force entropy ground truth, independent of the rank-based verifiers.

Enumerates source vectors outright and measures the empirical distribution of
the selected answer forms.  Conditioning on source columns pins them to zero:
for linear answers the conditional distribution given any other value of those
columns is a translate, so the entropy is unchanged and one slice suffices.

For linear answers over uniform independent sources the resulting
distribution is uniform over its support, whose size is a power of q, and the
entropy (in q-ary units) is exactly log_q(support); the result records
whether uniformity actually held, and only then is the value exact and
guaranteed to match the rank-based computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .audit import SourceLayout, form_row
from .forms import SchemeInstance

DEFAULT_BUDGET = 2**24
_CHUNK = 1 << 20


class OracleBudgetError(ValueError):
    """The instance's source space exceeds the enumeration budget."""


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    uniform: bool
    support: int


def entropy_oracle(
    instance: SchemeInstance,
    subset: Optional[Iterable[int]] = None,
    conditioning: Iterable[int] = (),
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """H(selected answer forms | conditioned source columns), by enumeration.

    subset selects flattened form positions (all forms when None);
    conditioning lists source column indices to fix.  Raises
    OracleBudgetError when q**(number of source columns) exceeds the budget.
    """
    layout = SourceLayout.of(instance)
    q = instance.q
    n_cols = layout.n_cols
    if q**n_cols > budget:
        raise OracleBudgetError(
            f"{q}**{n_cols} source vectors exceed the budget of {budget}"
        )
    forms = instance.all_forms()
    positions = list(range(len(forms))) if subset is None else list(subset)
    cond = set(conditioning)
    for c in cond:
        if not 0 <= c < n_cols:
            raise ValueError(f"conditioning column {c} out of range")
    free_cols = [c for c in range(n_cols) if c not in cond]
    rows = [form_row(forms[p], layout, q) for p in positions]

    # Map each form to its coefficients on the free columns (conditioned
    # columns are pinned to zero and contribute nothing).
    free_terms = [
        [(slot, row[col]) for slot, col in enumerate(free_cols) if row[col]]
        for row in rows
    ]
    total = q ** len(free_cols)
    counts: dict[int, int] = {}
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        v = np.arange(start, stop, dtype=np.int64)
        key = np.zeros(stop - start, dtype=np.int64)
        mult = 1
        for terms in free_terms:
            a = np.zeros(stop - start, dtype=np.int64)
            for slot, coeff in terms:
                if q == 2:
                    a += (v >> slot) & 1
                else:
                    a += coeff * ((v // (q**slot)) % q)
            a %= q
            key += mult * a
            mult *= q
        values, chunk_counts = np.unique(key, return_counts=True)
        for val, cnt in zip(values.tolist(), chunk_counts.tolist()):
            counts[val] = counts.get(val, 0) + cnt
    support = len(counts)
    count_values = set(counts.values())
    uniform = len(count_values) == 1
    if uniform:
        exponent = round(math.log(support, q))
        if q**exponent == support:
            return OracleResult(value=Fraction(exponent), uniform=True, support=support)
        uniform = False
    entropy_bits = math.log2(total) - sum(
        c * math.log2(c) for c in counts.values()
    ) / total
    value = Fraction(entropy_bits / math.log2(q)).limit_denominator(10**9)
    return OracleResult(value=value, uniform=False, support=support)
