"""Conversion of symmetric-retrieval-property families into symmetric schemes.

Any graph retrieval family that downloads no shared randomness and takes half
its L' desired symbols from each storing server can be made database-private:
run x repetitions, pad every t-sum answer with the t masks assigned to its
message symbols, and additionally download y raw masks from every server.
Every queried symbol of a non-desired message gets a unique mask, shared by
both servers storing it, so it can never leak; each desired symbol's mask is
downloaded raw from some server that does not store the desired message, so
the user (and only the user) can strip it.

The repetition counts are the least x, y with x * L'/2 = (N - 1) * y; the
converted scheme retrieves L = x*L' symbols from D = x*D' + N*y downloads
using N*y + (K-1)*L/2 shared randomness symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .forms import (
    LinearForm,
    MaskAssignment,
    Msg,
    Rand,
    SchemeFamily,
    Template,
    cached_template_fn,
)
from .graphdb import Graph, validate_graph
from .schemes import check_srp


@dataclass(frozen=True)
class ConversionParams:
    """Repetition and pool sizes for one (L', N, K) conversion."""

    base_symbols: int
    n_servers: int
    message_count: int
    lcm: int
    x: int
    y: int
    L: int
    r_count: int


def conversion_params(base_symbols: int, n_servers: int, message_count: int) -> ConversionParams:
    """Least x, y with x*(L'/2) = (N-1)*y, plus the derived L and mask count."""
    if base_symbols <= 0 or base_symbols % 2:
        raise ValueError("base scheme must retrieve an even positive number of symbols")
    if n_servers < 2:
        raise ValueError("need at least 2 servers")
    if message_count < 1:
        raise ValueError("need at least 1 message")
    half = base_symbols // 2
    common = math.lcm(half, n_servers - 1)
    x = common // half
    y = common // (n_servers - 1)
    big_l = x * base_symbols
    assert x * half == (n_servers - 1) * y
    r_count = n_servers * y + (message_count - 1) * big_l // 2
    return ConversionParams(
        base_symbols=base_symbols,
        n_servers=n_servers,
        message_count=message_count,
        lcm=common,
        x=x,
        y=y,
        L=big_l,
        r_count=r_count,
    )


@dataclass(frozen=True)
class SchemeStats:
    L: int
    download: int
    rate: Fraction
    rho: Fraction


def scheme_stats(family: SchemeFamily) -> SchemeStats:
    """L, per-instance download count, rate L/D and randomness ratio r/L.

    The download count must not depend on theta (every family here answers
    with a fixed shape); a mismatch raises.
    """
    downloads = set()
    for theta in family.thetas:
        tpl = family.template(theta, family.space().identity().choices)
        downloads.add(sum(len(forms) for forms in tpl.answers))
    if len(downloads) != 1:
        raise ValueError(f"download count varies across theta: {sorted(downloads)}")
    d = downloads.pop()
    return SchemeStats(
        L=family.L,
        download=d,
        rate=Fraction(family.L, d),
        rho=Fraction(family.r_count, family.L),
    )


def convert_pir_to_spir(pir: SchemeFamily, graph: Optional[Graph] = None) -> SchemeFamily:
    """Build the mask-padded symmetric family from a half-split retrieval family.

    The result downloads, from each server, y raw randomness symbols followed
    by x repetitions of the base answers with per-symbol masks mixed in.
    """
    if graph is not None and graph != pir.graph:
        raise ValueError("graph does not match the base family's storage graph")
    graph = pir.graph
    problem = validate_graph(graph)
    if problem is not None:
        raise ValueError(f"invalid storage graph: {problem}")
    if pir.r_count != 0:
        raise ValueError("base family already downloads shared randomness")
    if pir.L != pir.base_symbols:
        raise ValueError("base family must be a single-repetition scheme")
    srp = check_srp(pir)
    if not srp.ok:
        raise ValueError(
            f"base family lacks the half-split retrieval property: {srp.witness}"
        )
    params = conversion_params(pir.base_symbols, graph.n_servers, graph.message_count)
    base_radix_count = len(pir.choice_radices)

    def build(theta: int, choices: tuple[int, ...]) -> Template:
        return _convert_template(pir, params, theta, choices)

    return SchemeFamily(
        name=f"{pir.name}-spir",
        graph=graph,
        q=pir.q,
        L=params.L,
        r_count=params.r_count,
        base_symbols=pir.base_symbols,
        base_download=pir.base_download,
        choice_radices=pir.choice_radices * params.x,
        template_fn=cached_template_fn(build),
    )


def _convert_template(
    pir: SchemeFamily, params: ConversionParams, theta: int, choices: tuple[int, ...]
) -> Template:
    graph = pir.graph
    n_servers = graph.n_servers
    q = pir.q
    x, y = params.x, params.y
    l_base = pir.base_symbols
    cr = len(pir.choice_radices)
    srv_i, srv_j = graph.servers_of(theta)

    # One base template per repetition; repetition u reads its symbols from
    # block {u*L'+1, ..., (u+1)*L'}.
    shifted: list[tuple[tuple[LinearForm, ...], ...]] = []
    base_plans: list[tuple[tuple[int, ...], ...]] = []
    forms_per_server: Optional[tuple[int, ...]] = None
    for u in range(x):
        tpl = pir.template(theta, choices[u * cr : (u + 1) * cr])
        shape = tuple(len(forms) for forms in tpl.answers)
        if forms_per_server is None:
            forms_per_server = shape
        elif shape != forms_per_server:
            raise AssertionError("base answer shape varies across repetitions")
        shift = u * l_base
        shifted.append(
            tuple(
                tuple(
                    LinearForm.of(
                        [(Msg(ref.message, ref.symbol + shift), c) for ref, c in form.terms],
                        q,
                    )
                    for form in forms
                )
                for forms in tpl.answers
            )
        )
        base_plans.append(tpl.decode_plan)
    assert forms_per_server is not None

    # Collect where every message symbol is queried.
    desired_occ: dict[int, list[tuple[int, int, int]]] = {srv_i: [], srv_j: []}
    undesired_occ: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for u, answers in enumerate(shifted):
        for server in range(1, n_servers + 1):
            stored = set(graph.storage_of(server))
            for f_idx, form in enumerate(answers[server - 1]):
                for ref, _ in form.terms:
                    assert isinstance(ref, Msg), "base family must be randomness-free"
                    assert ref.message in stored, "non-local message term"
                    if ref.message == theta:
                        assert server in (srv_i, srv_j)
                        desired_occ[server].append((u, f_idx, ref.symbol))
                    else:
                        undesired_occ.setdefault((ref.message, ref.symbol), []).append(
                            (u, server, f_idx)
                        )

    # Each desired symbol must be queried exactly once, half per server per
    # repetition, covering all L symbols.
    seen_desired: set[int] = set()
    for server in (srv_i, srv_j):
        per_rep: dict[int, int] = {}
        for u, _, sym in desired_occ[server]:
            per_rep[u] = per_rep.get(u, 0) + 1
            assert sym not in seen_desired, "desired symbol queried twice"
            seen_desired.add(sym)
        assert all(per_rep.get(u, 0) == l_base // 2 for u in range(x))
    assert seen_desired == set(range(1, params.L + 1))

    # Each queried non-desired symbol must be queried at both storing servers
    # within the same repetition -- its unique mask cancels only then.
    for (message, _sym), occ in undesired_occ.items():
        if len(occ) != 2 or occ[0][0] != occ[1][0]:
            raise AssertionError(
                f"message {message} symbol not queried at both storing servers once"
            )
        assert {o[1] for o in occ} == set(graph.servers_of(message))

    # Mask slots: a unique slot per undesired symbol; pool slots for desired
    # symbols.  At server i the first y desired downloads (repetition-major)
    # take pool(j) slots and vice versa; the remaining ones pair up across i
    # and j in repetition order, sharing one slot from the pools of the other
    # servers (ascending, y slots each).
    slot_pool_server: dict[int, int] = {}
    pools: dict[int, list[int]] = {n: [] for n in range(1, n_servers + 1)}
    desired_slot: dict[tuple[int, int], int] = {}
    undesired_slot: dict[tuple[int, int], int] = {}
    next_slot = 0

    def new_slot(pool_server: Optional[int]) -> int:
        nonlocal next_slot
        slot = next_slot
        next_slot += 1
        if pool_server is not None:
            slot_pool_server[slot] = pool_server
            pools[pool_server].append(slot)
        return slot

    leftovers: dict[int, list[int]] = {}
    for server, other in ((srv_i, srv_j), (srv_j, srv_i)):
        symbols = [sym for (_, _, sym) in desired_occ[server]]
        for sym in symbols[:y]:
            desired_slot[(server, sym)] = new_slot(other)
        leftovers[server] = symbols[y:]
    others = [n for n in range(1, n_servers + 1) if n not in (srv_i, srv_j)]
    assert len(leftovers[srv_i]) == len(leftovers[srv_j]) == (n_servers - 2) * y
    for t, (sym_i, sym_j) in enumerate(zip(leftovers[srv_i], leftovers[srv_j])):
        slot = new_slot(others[t // y])
        desired_slot[(srv_i, sym_i)] = slot
        desired_slot[(srv_j, sym_j)] = slot
    for key in undesired_occ:
        undesired_slot[key] = new_slot(None)
    assert next_slot == params.r_count
    assert sum(len(p) for p in pools.values()) == n_servers * y
    assert all(len(pools[n]) == y for n in pools)

    def slot_of(server: int, ref: Msg) -> int:
        if ref.message == theta:
            return desired_slot[(server, ref.symbol)]
        return undesired_slot[(ref.message, ref.symbol)]

    # Number the masks by first use, scanning the repetition answers the way
    # they are shipped: repetitions in order, servers ascending, forms in
    # order, terms in form order.
    slot_index: dict[int, int] = {}
    for u in range(x):
        for server in range(1, n_servers + 1):
            for form in shifted[u][server - 1]:
                for ref, _ in form.terms:
                    slot = slot_of(server, ref)
                    if slot not in slot_index:
                        slot_index[slot] = len(slot_index) + 1
    assert len(slot_index) == params.r_count

    # Answers: per server, y raw pool downloads followed by the repetition
    # forms with each message term's mask appended (message terms first).
    answers = []
    for server in range(1, n_servers + 1):
        forms = [
            LinearForm.of([(Rand(slot_index[slot]), 1)], q) for slot in pools[server]
        ]
        for u in range(x):
            for form in shifted[u][server - 1]:
                padded = list(form.terms) + [
                    (Rand(slot_index[slot_of(server, ref)]), coeff)
                    for ref, coeff in form.terms
                ]
                forms.append(LinearForm.of(padded, q))
        answers.append(tuple(forms))

    # Flattened positions of repetition-u form f at each server.
    offsets = []
    total = 0
    for server in range(1, n_servers + 1):
        offsets.append(total)
        total += y + x * forms_per_server[server - 1]
    assert total == params.x * pir.base_download + n_servers * y

    def rep_position(server: int, u: int, f_idx: int) -> int:
        return offsets[server - 1] + y + u * forms_per_server[server - 1] + f_idx

    def raw_position(slot: int) -> int:
        pool_server = slot_pool_server[slot]
        return offsets[pool_server - 1] + pools[pool_server].index(slot)

    # Decode: run each repetition's base plan on the padded forms -- every
    # undesired mask cancels with the message combination, leaving the desired
    # symbol plus its own mask -- then strip that mask with its raw download.
    base_positions: list[tuple[int, int]] = []
    for server in range(1, n_servers + 1):
        for f_idx in range(forms_per_server[server - 1]):
            base_positions.append((server, f_idx))
    occ_server = {sym: server for server in (srv_i, srv_j) for (_, _, sym) in desired_occ[server]}

    plan: list[tuple[int, ...]] = []
    for u in range(x):
        for l_rep, coeffs in enumerate(base_plans[u], start=1):
            sym = u * l_base + l_rep
            dense = [0] * total
            for base_pos, coeff in enumerate(coeffs):
                if coeff:
                    server, f_idx = base_positions[base_pos]
                    dense[rep_position(server, u, f_idx)] = coeff
            dense[raw_position(desired_slot[(occ_server[sym], sym)])] -= 1
            plan.append(tuple(dense))

    masks = MaskAssignment(
        undesired={key: slot_index[slot] for key, slot in undesired_slot.items()},
        desired={key: slot_index[slot] for key, slot in desired_slot.items()},
        pools={n: tuple(slot_index[s] for s in pools[n]) for n in pools},
    )
    template = Template(
        theta=theta, answers=tuple(answers), decode_plan=tuple(plan), masks=masks
    )
    _validate_plan(template, params.L, q)
    return template


def _validate_plan(template: Template, big_l: int, q: int) -> None:
    """Symbolically check that each plan row reduces the answers to one symbol."""
    flat = [form for forms in template.answers for form in forms]
    for sym, coeffs in enumerate(template.decode_plan, start=1):
        acc: dict = {}
        for pos, coeff in enumerate(coeffs):
            if coeff % q == 0:
                continue
            for ref, c in flat[pos].terms:
                acc[ref] = (acc.get(ref, 0) + coeff * c) % q
        residue = {ref: c for ref, c in acc.items() if c}
        if residue != {Msg(template.theta, sym): 1 % q}:
            raise AssertionError(f"decode plan fails for desired symbol {sym}: {residue}")
    assert len(template.decode_plan) == big_l
