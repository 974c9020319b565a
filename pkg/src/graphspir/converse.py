"""Necessary-condition entropy inequalities for symmetric retrieval schemes.

Information-theoretic lower bounds that every feasible symmetric scheme on a
path or cycle storage graph must satisfy.  Evaluating them on a concrete
family cannot prove the bounds (they quantify over all schemes), but any
violation would expose an implementation bug, and zero slack certifies that a
scheme sits exactly on a bound.

Averages over the user's query randomness are exact: every entropy evaluated
here is a rank that symbol permutations cannot change (they relabel columns
within per-message blocks), so averaging over the internal-choice tuples with
equal weights reproduces the full-space average.  When a family has more
choice tuples than the enumeration limit, a seeded sample is used and results
carry exact=False.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import gf2_echelon, gf2_pack, modq_rank
from .audit import SourceLayout, form_row
from .forms import SchemeFamily

DEFAULT_TUPLE_LIMIT = 4096
DEFAULT_TUPLE_SAMPLES = 64


@dataclass(frozen=True)
class Inequality:
    """One evaluated bound: holds iff lhs >= rhs (slack = lhs - rhs)."""

    name: str
    lhs: Fraction
    rhs: Fraction
    exact: bool

    @property
    def slack(self) -> Fraction:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.slack >= 0


class _EntropyAverager:
    """Average conditional answer entropies over one theta's choice tuples."""

    def __init__(self, family: SchemeFamily, theta: int, tuples: Sequence[tuple[int, ...]]):
        space = family.space()
        self.q = family.q
        self.count = len(tuples)
        self.rows_per_instance: list[list] = []
        self.layout: SourceLayout | None = None
        self.slices: list[range] = []
        for choices in tuples:
            instance = family.instance(theta, space.with_choices(choices))
            layout = SourceLayout.of(instance)
            if self.layout is None:
                self.layout = layout
                self.slices = [
                    instance.server_form_positions(n)
                    for n in range(1, family.graph.n_servers + 1)
                ]
            rows = [form_row(f, layout, self.q) for f in instance.all_forms()]
            if self.q == 2:
                self.rows_per_instance.append([gf2_pack(r) for r in rows])
            else:
                self.rows_per_instance.append([list(r) for r in rows])

    def _cond_cols(self, cond_messages: Iterable[int], cond_randomness: bool) -> set[int]:
        assert self.layout is not None
        cols: set[int] = set()
        for k in cond_messages:
            cols.update(self.layout.message_block(k))
        if cond_randomness:
            cols.update(self.layout.randomness_block)
        return cols

    def _rank(self, rows: list, positions: list[int], cond: set[int]) -> int:
        if self.q == 2:
            mask = 0
            for c in cond:
                mask |= 1 << c
            keep = ~mask
            return len(gf2_echelon(rows[p] & keep for p in positions))
        dense = []
        for p in positions:
            row = list(rows[p])
            for c in cond:
                row[c] = 0
            dense.append(row)
        return modq_rank(dense, self.q)

    def average(
        self,
        servers: Sequence[int],
        cond_messages: Iterable[int] = (),
        cond_randomness: bool = False,
        given_servers: Sequence[int] = (),
    ) -> Fraction:
        """Mean of H(A_servers | A_given, W_cond, [R], query) over the tuples."""
        cond = self._cond_cols(cond_messages, cond_randomness)
        pos_given = [p for n in given_servers for p in self.slices[n - 1]]
        pos_joint = pos_given + [p for n in servers for p in self.slices[n - 1]]
        total = 0
        for rows in self.rows_per_instance:
            h = self._rank(rows, pos_joint, cond)
            if pos_given:
                h -= self._rank(rows, pos_given, cond)
            total += h
        return Fraction(total, self.count)


def _select_tuples(
    family: SchemeFamily, limit: int, samples: int, seed: int
) -> tuple[list[tuple[int, ...]], bool]:
    total = 1
    for r in family.choice_radices:
        total *= r
    if total <= limit:
        return list(itertools.product(*[range(1, r + 1) for r in family.choice_radices])), True
    rng = random.Random(seed)
    picked = [
        tuple(rng.randint(1, r) for r in family.choice_radices) for _ in range(samples)
    ]
    return picked, False


def converse_suite(
    family: SchemeFamily,
    limit: int = DEFAULT_TUPLE_LIMIT,
    samples: int = DEFAULT_TUPLE_SAMPLES,
    seed: int = 0,
) -> tuple[Inequality, ...]:
    """Evaluate every applicable bound on one symmetric family.

    Covers: the shared-randomness floor H(R) >= H(all answers | query) - L;
    the storing-pair floor (the two servers holding the desired message must
    jointly carry L units about it); residual-download floors conditioned on
    one server's answer, for path and cycle graphs; and, on the 3-server
    path, the per-server-pair sums and the total download floor.
    """
    if family.r_count == 0:
        raise ValueError("converse bounds apply to families with shared randomness")
    graph = family.graph
    if graph.kind not in ("path", "cycle"):
        raise ValueError(f"no converse suite for graph kind {graph.kind!r}")
    tuples, exact = _select_tuples(family, limit, samples, seed)
    n_servers = graph.n_servers
    k_total = graph.message_count
    big_l = family.L
    averagers = {
        theta: _EntropyAverager(family, theta, tuples) for theta in family.thetas
    }

    def H(theta: int, servers: Sequence[int], **kwargs) -> Fraction:
        return averagers[theta].average(servers, **kwargs)

    all_servers = tuple(range(1, n_servers + 1))
    out: list[Inequality] = []

    for k in family.thetas:
        out.append(
            Inequality(
                name=f"randomness-floor[theta={k}]",
                lhs=Fraction(family.r_count),
                rhs=H(k, all_servers) - big_l,
                exact=exact,
            )
        )

    for k in family.thetas:
        i, j = graph.servers_of(k)
        other_messages = tuple(m for m in range(1, k_total + 1) if m != k)
        lhs = H(k, (i,), cond_messages=other_messages, cond_randomness=True) + H(
            k, (j,), cond_messages=other_messages, cond_randomness=True
        )
        out.append(
            Inequality(
                name=f"storing-pair-floor[message={k}]",
                lhs=lhs,
                rhs=Fraction(big_l),
                exact=exact,
            )
        )

    def residual(theta: int, server: int, rhs: Fraction) -> Inequality:
        rest = tuple(n for n in all_servers if n != server)
        lhs = H(theta, rest, cond_messages=(theta,), given_servers=(server,))
        return Inequality(
            name=f"residual-after-server[n={server},theta={theta}]",
            lhs=lhs,
            rhs=rhs,
            exact=exact,
        )

    if graph.kind == "path":
        edge_rhs = Fraction((n_servers - 2) * big_l, 2)
        out.append(residual(1, 1, edge_rhs))
        out.append(residual(k_total, n_servers, edge_rhs))
        interior_rhs = Fraction((n_servers - 3) * big_l, 2)
        for n in range(2, n_servers - 1):
            for k in (n - 1, n):
                out.append(residual(k, n, interior_rhs))
        if n_servers == 3:
            out.append(
                Inequality(
                    name="server-pair-sum[2+3,theta=1]",
                    lhs=H(1, (2,)) + H(1, (3,)),
                    rhs=Fraction(3 * big_l, 2),
                    exact=exact,
                )
            )
            out.append(
                Inequality(
                    name="server-pair-sum[1+2,theta=2]",
                    lhs=H(2, (1,)) + H(2, (2,)),
                    rhs=Fraction(3 * big_l, 2),
                    exact=exact,
                )
            )
            for k in (1, 2):
                out.append(
                    Inequality(
                        name=f"end-pair-sum[theta={k}]",
                        lhs=H(k, (1,)) + H(k, (3,)),
                        rhs=Fraction(big_l),
                        exact=exact,
                    )
                )
                out.append(
                    Inequality(
                        name=f"download-floor[theta={k}]",
                        lhs=2 * (H(k, (1,)) + H(k, (2,)) + H(k, (3,))),
                        rhs=Fraction(4 * big_l),
                        exact=exact,
                    )
                )
    else:  # cycle
        cycle_rhs = Fraction((n_servers - 2) * big_l, 2)
        for n in all_servers:
            stored = graph.storage_of(n)
            for k in stored:
                out.append(residual(k, n, cycle_rhs))
    return tuple(out)
