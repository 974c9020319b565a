"""Concrete retrieval scheme families on path and cycle graphs.

Three constructions live here:

* a chain-cancellation retrieval family on path graphs (one form per server;
  interior servers answer with the sum of their two stored messages' symbols,
  and the desired message gets two fresh symbols, one per storing server);
* a fixed 3-server cycle family (each server answers with two singletons and
  two 2-sums; the other two desired-message instances follow by rotating the
  cycle's automorphism);
* a hand-built symmetric family on the 3-server path that pads every download
  with shared randomness and retrieves 2 symbols from 4 downloads.

The first two download no shared randomness (r_count = 0) and are the inputs
to the symmetrizing conversion in `convert`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .algebra import modq_rank
from .forms import (
    LinearForm,
    Msg,
    Rand,
    RealizationSpace,
    SchemeFamily,
    SchemeInstance,
    Template,
    UserRealization,
    cached_template_fn,
)
from .graphdb import Graph, build_graph

DEFAULT_ENUMERATION_LIMIT = 10**6


def _assert_local(answers, graph: Graph) -> None:
    for server, forms in enumerate(answers, start=1):
        stored = set(graph.storage_of(server))
        for form in forms:
            for ref, _ in form.terms:
                if isinstance(ref, Msg) and ref.message not in stored:
                    raise AssertionError(
                        f"server {server} answers with message {ref.message} it does not store"
                    )


# ---------------------------------------------------------------------------
# Path family
# ---------------------------------------------------------------------------


def path_pir_family(n_servers: int, q: int = 2) -> SchemeFamily:
    """Chain-cancellation retrieval on the path with n_servers >= 3.

    Retrieves L' = 2 symbols of the desired message with one downloaded symbol
    per server (D' = N).  The realization supplies, for each non-desired
    message, which of its 2 fresh symbols rides the chain.
    """
    if n_servers < 3:
        raise ValueError("path retrieval needs at least 3 servers")
    graph = build_graph("path", n_servers)
    k_total = graph.message_count

    def build(theta: int, choices: tuple[int, ...]) -> Template:
        undesired = [m for m in range(1, k_total + 1) if m != theta]
        sigma = dict(zip(undesired, choices))

        def idx(message: int, server: int) -> int:
            if message == theta:
                return 1 if server == theta else 2
            return sigma[message]

        answers = []
        for n in range(1, n_servers + 1):
            terms = []
            if n > 1:
                terms.append((Msg(n - 1, idx(n - 1, n)), 1))
            if n < n_servers:
                terms.append((Msg(n, idx(n, n)), 1))
            answers.append((LinearForm.of(terms, q),))
        # Symbol 1 unwinds the chain from server 1 up to server theta;
        # symbol 2 unwinds from server N down to server theta+1.
        plan1 = [0] * n_servers
        for i in range(1, theta + 1):
            plan1[i - 1] = (-1) ** (theta - i)
        plan2 = [0] * n_servers
        for i in range(theta + 1, n_servers + 1):
            plan2[i - 1] = (-1) ** (i - theta - 1)
        tpl = Template(theta=theta, answers=tuple(answers), decode_plan=(tuple(plan1), tuple(plan2)))
        _assert_local(tpl.answers, graph)
        return tpl

    return SchemeFamily(
        name=f"path-pir-{n_servers}",
        graph=graph,
        q=q,
        L=2,
        r_count=0,
        base_symbols=2,
        base_download=n_servers,
        choice_radices=(2,) * (k_total - 1),
        template_fn=cached_template_fn(build),
    )


def build_path_pir(
    n_servers: int, theta: int, realization: UserRealization, q: int = 2
) -> SchemeInstance:
    return path_pir_family(n_servers, q).instance(theta, realization)


# ---------------------------------------------------------------------------
# Cycle family (3 servers)
# ---------------------------------------------------------------------------

# Canonical answers for desired message 1, as (message, symbol) pairs.
_CYCLE3_ANSWERS = (
    (((1, 1),), ((3, 1),), ((1, 2), (3, 2)), ((1, 3), (3, 3))),
    (((1, 4),), ((2, 1),), ((1, 5), (2, 2)), ((1, 6), (2, 3))),
    (((2, 2),), ((3, 2),), ((2, 1), (3, 3)), ((2, 3), (3, 1))),
)
# Flattened form positions: server 1 holds 0..3, server 2 holds 4..7, server 3 holds 8..11.
_CYCLE3_PLAN = (
    ((0, 1),),
    ((2, 1), (9, -1)),
    ((3, 1), (10, -1), (5, 1)),
    ((4, 1),),
    ((6, 1), (8, -1)),
    ((7, 1), (11, -1), (1, 1)),
)


def cycle3_pir_family(q: int = 2) -> SchemeFamily:
    """Fixed 3-server cycle retrieval: L' = 6 desired symbols from D' = 12.

    Desired messages 2 and 3 reuse the desired-message-1 pattern through the
    cycle rotation (server n -> n+1, message k -> k+1), so every server's
    answer shape is the same for all theta.
    """
    graph = build_graph("cycle", 3)

    def rotate(value: int, steps: int) -> int:
        return (value - 1 + steps) % 3 + 1

    def build(theta: int, choices: tuple[int, ...]) -> Template:
        steps = theta - 1
        answers: list[Optional[tuple[LinearForm, ...]]] = [None] * 3
        position_map: dict[int, int] = {}
        for n in range(1, 4):
            target = rotate(n, steps)
            forms = tuple(
                LinearForm.of(
                    [(Msg(rotate(m, steps), s), 1) for (m, s) in terms], q
                )
                for terms in _CYCLE3_ANSWERS[n - 1]
            )
            answers[target - 1] = forms
            for f in range(4):
                position_map[(n - 1) * 4 + f] = (target - 1) * 4 + f
        plan = []
        for entries in _CYCLE3_PLAN:
            dense = [0] * 12
            for pos, coeff in entries:
                dense[position_map[pos]] = coeff
            plan.append(tuple(dense))
        tpl = Template(theta=theta, answers=tuple(answers), decode_plan=tuple(plan))
        _assert_local(tpl.answers, graph)
        return tpl

    return SchemeFamily(
        name="cycle3-pir",
        graph=graph,
        q=q,
        L=6,
        r_count=0,
        base_symbols=6,
        base_download=12,
        choice_radices=(),
        template_fn=cached_template_fn(build),
    )


def build_cycle3_pir(theta: int, realization: UserRealization, q: int = 2) -> SchemeInstance:
    return cycle3_pir_family(q).instance(theta, realization)


# ---------------------------------------------------------------------------
# Hand-built symmetric family on the 3-server path
# ---------------------------------------------------------------------------


def p3_capacity_family(q: int = 2) -> SchemeFamily:
    """Symmetric retrieval on the 3-server path at rate 1/2 with 2 shared
    randomness symbols (both optimal for this graph)."""
    graph = build_graph("path", 3)

    def build(theta: int, choices: tuple[int, ...]) -> Template:
        s1, s2 = Rand(1), Rand(2)
        if theta == 1:
            answers = (
                (LinearForm.of([(Msg(1, 1), 1), (s1, 1)], q),),
                (
                    LinearForm.of([(s1, 1)], q),
                    LinearForm.of([(Msg(1, 2), 1), (Msg(2, 2), 1), (s2, 1)], q),
                ),
                (LinearForm.of([(Msg(2, 2), 1), (s2, 1)], q),),
            )
            plan = ((1, -1, 0, 0), (0, 0, 1, -1))
        else:
            answers = (
                (LinearForm.of([(Msg(1, 1), 1), (s1, 1)], q),),
                (
                    LinearForm.of([(s2, 1)], q),
                    LinearForm.of([(Msg(1, 1), 1), (Msg(2, 1), 1), (s1, 1)], q),
                ),
                (LinearForm.of([(Msg(2, 2), 1), (s2, 1)], q),),
            )
            plan = ((-1, 0, 1, 0), (0, -1, 0, 1))
        tpl = Template(theta=theta, answers=answers, decode_plan=plan)
        _assert_local(tpl.answers, graph)
        return tpl

    return SchemeFamily(
        name="p3-capacity",
        graph=graph,
        q=q,
        L=2,
        r_count=2,
        base_symbols=2,
        base_download=4,
        choice_radices=(),
        template_fn=cached_template_fn(build),
    )


def build_p3_capacity_spir(theta: int, realization: UserRealization, q: int = 2) -> SchemeInstance:
    return p3_capacity_family(q).instance(theta, realization)


# ---------------------------------------------------------------------------
# Realization enumeration and the symmetric-retrieval property
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealizationSample:
    """Restartable view over a family's realization space.

    Exhaustive (id order) when the space fits the limit, otherwise `count`
    seeded uniform draws with sampled=True.
    """

    space: RealizationSpace
    sampled: bool
    count: int
    seed: int

    @property
    def space_size(self) -> int:
        return self.space.size

    def __iter__(self) -> Iterator[tuple[int, UserRealization]]:
        if not self.sampled:
            return self.space.iter_all()
        return self.space.sample(self.count, random.Random(self.seed))


def enumerate_realizations(
    family: SchemeFamily, limit: int = DEFAULT_ENUMERATION_LIMIT, seed: int = 0
) -> RealizationSample:
    space = family.space()
    size = space.size
    if size <= limit:
        return RealizationSample(space=space, sampled=False, count=size, seed=seed)
    return RealizationSample(space=space, sampled=True, count=limit, seed=seed)


@dataclass(frozen=True)
class SrpReport:
    """Per-(theta, server) counts of desired symbols a storing server yields."""

    family: str
    expected_per_server: int
    counts: dict[tuple[int, int], tuple[int, ...]]
    ok: bool
    mode: str
    witness: Optional[dict] = None

    @property
    def status(self) -> str:
        if not self.ok:
            return "fail"
        return "pass" if self.mode in ("exhaustive", "quotient") else "sampled-pass"


def _desired_rank(instance: SchemeInstance, server: int) -> int:
    """Entropy the server's forms carry about the desired message alone."""
    rows = []
    for form in instance.answers[server - 1]:
        row = [0] * instance.L
        for ref, coeff in form.terms:
            if isinstance(ref, Msg) and ref.message == instance.theta:
                row[ref.symbol - 1] = coeff % instance.q
        rows.append(row)
    return modq_rank(rows, instance.q)


def check_srp(
    family: SchemeFamily,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    seed: int = 0,
) -> SrpReport:
    """Verify the family retrieves exactly half its symbols from each storing
    server, for every theta and every realization.

    Requires a family with no shared randomness.  Spaces beyond the limit are
    checked exactly over the internal-choice quotient (permutations relabel
    symbol indices, which cannot change the per-server count).
    """
    if family.r_count != 0:
        raise ValueError("symmetric-retrieval counts are defined for r_count == 0 families")
    if family.base_symbols % 2:
        raise ValueError("base scheme must retrieve an even number of symbols")
    expected = family.base_symbols // 2
    space = family.space()
    exhaustive = space.size <= limit
    mode = "exhaustive" if exhaustive else "quotient"
    counts: dict[tuple[int, int], set[int]] = {}
    ok = True
    witness = None
    for theta in family.thetas:
        i, j = family.graph.servers_of(theta)
        if exhaustive:
            iterator = space.iter_all()
        else:
            iterator = (
                (None, space.with_choices(choices))
                for choices in _iter_choice_tuples(family.choice_radices)
            )
        for rid, realization in iterator:
            instance = family.instance(theta, realization)
            for server in (i, j):
                c = _desired_rank(instance, server)
                counts.setdefault((theta, server), set()).add(c)
                if c != expected and ok:
                    ok = False
                    witness = {
                        "theta": theta,
                        "server": server,
                        "count": c,
                        "realization_id": rid,
                        "choices": list(realization.choices),
                    }
    return SrpReport(
        family=family.name,
        expected_per_server=expected,
        counts={key: tuple(sorted(vals)) for key, vals in sorted(counts.items())},
        ok=ok,
        mode=mode,
        witness=witness,
    )


def _iter_choice_tuples(radices: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    import itertools

    return iter(itertools.product(*[range(1, r + 1) for r in radices]))
