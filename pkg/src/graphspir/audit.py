"""Exact verification of retrieval schemes: decoding, privacy, and entropy.

Every scheme here answers with linear forms over uniform independent source
symbols, so Shannon entropies (in q-ary units) equal matrix ranks: H of a set
of answer forms given a set of fixed source columns is the rank of the forms'
coefficient matrix with those columns zeroed.  All checks reduce to exact rank
and solvability computations over F_q.

Three verification depths exist, recorded on every result:

* "exhaustive": every realization of the user's private randomness checked.
* "quotient": every internal-choice tuple checked at the identity
  permutations.  This is exact, not a sample: symbol permutations act by
  relabeling columns inside per-message blocks, which changes no rank, no
  decodability verdict, and no view shape, so each checked representative
  settles its whole permutation class.  View distributions are compared as
  relabeling-invariant patterns, which is sound whenever no symbol index
  repeats inside a single server's view (asserted at run time).
* "sampled": seeded random realizations; at best certifies "sampled-pass".
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .algebra import (
    gf2_echelon,
    gf2_pack,
    gf2_reduce,
    gf2_solve_left,
    modq_rank,
    modq_solve_left,
)
from .forms import (
    LinearForm,
    Msg,
    SchemeFamily,
    SchemeInstance,
    SymbolRef,
    UserRealization,
)
from .schemes import check_srp

DEFAULT_LIMIT = 10**6
DEFAULT_SAMPLES = 1000


# ---------------------------------------------------------------------------
# Source layout and entropy-as-rank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SourceLayout:
    """Column layout of the global source vector: K blocks of L message
    symbols followed by the shared-randomness block."""

    message_count: int
    symbols_per_message: int
    randomness_count: int

    @classmethod
    def of(cls, instance: SchemeInstance) -> "SourceLayout":
        return cls(instance.graph.message_count, instance.L, instance.r_count)

    @property
    def n_cols(self) -> int:
        return self.message_count * self.symbols_per_message + self.randomness_count

    def col(self, ref: SymbolRef) -> int:
        if isinstance(ref, Msg):
            if not 1 <= ref.message <= self.message_count:
                raise ValueError(f"message {ref.message} outside layout")
            if not 1 <= ref.symbol <= self.symbols_per_message:
                raise ValueError(f"symbol {ref.symbol} outside layout")
            return (ref.message - 1) * self.symbols_per_message + ref.symbol - 1
        if not 1 <= ref.index <= self.randomness_count:
            raise ValueError(f"randomness index {ref.index} outside layout")
        return self.message_count * self.symbols_per_message + ref.index - 1

    def message_block(self, message: int) -> range:
        if not 1 <= message <= self.message_count:
            raise ValueError(f"message {message} outside layout")
        start = (message - 1) * self.symbols_per_message
        return range(start, start + self.symbols_per_message)

    @property
    def randomness_block(self) -> range:
        start = self.message_count * self.symbols_per_message
        return range(start, start + self.randomness_count)


def form_row(form: LinearForm, layout: SourceLayout, q: int) -> tuple[int, ...]:
    """Dense coefficient row of one answer form over the source columns."""
    row = [0] * layout.n_cols
    for ref, coeff in form.terms:
        row[layout.col(ref)] = coeff % q
    return tuple(row)


def linear_entropy(
    instance: SchemeInstance,
    subset: Optional[Iterable[int]] = None,
    conditioning: Iterable[int] = (),
) -> int:
    """H(selected answer forms | conditioned sources) in q-ary units.

    ``conditioning`` entries may be source column indices or Msg/Rand refs.
    Equals the rank of the selected forms' coefficient matrix with the
    conditioned columns zeroed; exact because sources are uniform and
    independent and answers are linear.
    """
    layout = SourceLayout.of(instance)
    forms = instance.all_forms()
    positions = list(range(len(forms))) if subset is None else list(subset)
    cond = {c if isinstance(c, int) else layout.col(c) for c in conditioning}
    for c in cond:
        if not 0 <= c < layout.n_cols:
            raise ValueError(f"conditioning column {c} out of range")
    q = instance.q
    rows = []
    for pos in positions:
        row = list(form_row(forms[pos], layout, q))
        for c in cond:
            row[c] = 0
        rows.append(row)
    if q == 2:
        return len(gf2_echelon(gf2_pack(r) for r in rows))
    return modq_rank(rows, q)


# ---------------------------------------------------------------------------
# Per-instance verifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReliabilityResult:
    """Decode check: the stored plan must reduce the downloads to each desired
    symbol, and an independent solver must confirm each symbol is reachable."""

    ok: bool
    certificate: tuple[tuple[int, ...], ...]
    witness: Optional[int] = None  # first undecodable desired symbol (1-based)


def verify_reliability(instance: SchemeInstance) -> ReliabilityResult:
    layout = SourceLayout.of(instance)
    q = instance.q
    forms = instance.all_forms()
    rows = [form_row(f, layout, q) for f in forms]
    packed = [gf2_pack(r) for r in rows] if q == 2 else None
    theta_block = layout.message_block(instance.theta)
    plan = instance.decode_plan
    if len(plan) != instance.L:
        return ReliabilityResult(False, (), witness=1)
    for sym in range(1, instance.L + 1):
        coeffs = plan[sym - 1]
        col = theta_block[sym - 1]
        if len(coeffs) != len(forms):
            return ReliabilityResult(False, (), witness=sym)
        acc = [0] * layout.n_cols
        for pos, c in enumerate(coeffs):
            if c % q:
                for j, v in enumerate(rows[pos]):
                    if v:
                        acc[j] = (acc[j] + c * v) % q
        target = [0] * layout.n_cols
        target[col] = 1
        if acc != target:
            return ReliabilityResult(False, (), witness=sym)
        if q == 2:
            solvable = gf2_solve_left(1 << col, packed, layout.n_cols) is not None
        else:
            solvable = modq_solve_left(target, rows, q) is not None
        if not solvable:
            return ReliabilityResult(False, (), witness=sym)
    return ReliabilityResult(True, plan)


@dataclass(frozen=True)
class DatabasePrivacyResult:
    """Rank test for leakage about non-desired messages.

    The downloads reveal nothing beyond the desired message and randomness iff
    zeroing every non-desired message block leaves the answer rank unchanged;
    the difference is exactly the q-ary mutual information between the
    downloads and the non-desired messages.
    """

    ok: bool
    rank_full: int
    rank_restricted: int

    @property
    def leakage(self) -> int:
        return self.rank_full - self.rank_restricted


def verify_database_privacy(instance: SchemeInstance) -> DatabasePrivacyResult:
    layout = SourceLayout.of(instance)
    undesired_cols = [
        c
        for k in range(1, layout.message_count + 1)
        if k != instance.theta
        for c in layout.message_block(k)
    ]
    rank_full = linear_entropy(instance)
    rank_restricted = linear_entropy(instance, None, undesired_cols)
    return DatabasePrivacyResult(rank_full == rank_restricted, rank_full, rank_restricted)


# ---------------------------------------------------------------------------
# Server views
# ---------------------------------------------------------------------------


def server_view(instance: SchemeInstance, server: int) -> tuple:
    """Canonical serialization of what one server is asked to send.

    A view is the multiset of the server's answer-form specifications
    (post-permutation symbol indices with coefficients); form order inside a
    server is not part of the view, so forms are compared sorted.
    """
    forms = instance.answers[server - 1]
    stored = set(instance.graph.storage_of(server))
    serialized = []
    for form in forms:
        terms = []
        for ref, coeff in form.sorted_terms():
            if isinstance(ref, Msg):
                assert ref.message in stored, "view references a message not stored here"
                terms.append((0, ref.message, ref.symbol, coeff))
            else:
                terms.append((1, ref.index, 0, coeff))
        serialized.append(tuple(terms))
    return tuple(sorted(serialized))


def _form_shape(form: LinearForm) -> tuple:
    """Relabeling-invariant shape of a form: which blocks appear, with which
    coefficients, ignoring symbol indices."""
    shape = []
    for ref, coeff in form.terms:
        if isinstance(ref, Msg):
            shape.append((0, ref.message, coeff))
        else:
            shape.append((1, 0, coeff))
    return tuple(sorted(shape))


def view_pattern(instance: SchemeInstance, server: int) -> tuple:
    """Orbit of a server view under per-block index relabeling.

    Valid as a complete invariant only for repetition-free views (no symbol
    reference used twice within the server's forms); the caller must check
    `view_repetition_free` before trusting pattern comparisons.
    """
    return tuple(sorted(_form_shape(f) for f in instance.answers[server - 1]))


def view_repetition_free(instance: SchemeInstance, server: int) -> bool:
    seen: set[SymbolRef] = set()
    for form in instance.answers[server - 1]:
        for ref in form.refs():
            if ref in seen:
                return False
            seen.add(ref)
    return True


# ---------------------------------------------------------------------------
# Family-level sweep
# ---------------------------------------------------------------------------


@dataclass
class SweepResult:
    """One pass over (theta, realizations): decode + leakage verdicts and the
    per-server view distribution."""

    theta: int
    mode: str
    checked: int
    reliability_ok: bool
    reliability_witness: Optional[dict]
    dbp_ok: bool
    dbp_witness: Optional[dict]
    views: dict[int, Counter]
    view_kind: str  # "exact" | "pattern"


def space_mode(family: SchemeFamily, limit: int) -> str:
    if family.realization_space_size <= limit:
        return "exhaustive"
    tuples = 1
    for r in family.choice_radices:
        tuples *= r
    if tuples <= limit:
        return "quotient"
    return "sampled"


def _choice_tuple_iter(family: SchemeFamily) -> Iterator[tuple[int, ...]]:
    return iter(itertools.product(*[range(1, r + 1) for r in family.choice_radices]))


def sweep_family(
    family: SchemeFamily,
    theta: int,
    mode: str,
    limit: int = DEFAULT_LIMIT,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    check_dbp: bool = True,
) -> SweepResult:
    """Run reliability, database privacy, and view collection for one theta."""
    if mode == "quotient":
        return _sweep_quotient(family, theta, check_dbp)
    if family.q == 2:
        return _sweep_gf2(family, theta, mode, seed, samples, check_dbp)
    return _sweep_generic(family, theta, mode, seed, samples, check_dbp)


def _realization_stream(
    family: SchemeFamily, theta: int, mode: str, seed: int, samples: int
) -> Iterator[tuple[Optional[int], UserRealization]]:
    space = family.space()
    if mode == "exhaustive":
        return space.iter_all()
    rng = random.Random(seed * 1000003 + theta)
    return space.sample(samples, rng)


def _sweep_quotient(family: SchemeFamily, theta: int, check_dbp: bool) -> SweepResult:
    """Exact verdicts via one identity-permutation representative per choice
    tuple; views recorded as relabeling patterns."""
    space = family.space()
    views: dict[int, Counter] = {n: Counter() for n in range(1, family.graph.n_servers + 1)}
    rel_ok, rel_wit = True, None
    dbp_ok, dbp_wit = True, None
    checked = 0
    for choices in _choice_tuple_iter(family):
        instance = family.instance(theta, space.with_choices(choices))
        checked += 1
        rel = verify_reliability(instance)
        if not rel.ok and rel_ok:
            rel_ok, rel_wit = False, {"theta": theta, "choices": list(choices), "symbol": rel.witness}
        if check_dbp:
            dbp = verify_database_privacy(instance)
            if not dbp.ok and dbp_ok:
                dbp_ok, dbp_wit = False, {
                    "theta": theta,
                    "choices": list(choices),
                    "rank_full": dbp.rank_full,
                    "rank_restricted": dbp.rank_restricted,
                }
        for server in views:
            if not view_repetition_free(instance, server):
                raise ValueError(
                    "quotient view comparison unsound: repeated symbol inside "
                    f"server {server}'s view (theta={theta}, choices={choices})"
                )
            views[server][view_pattern(instance, server)] += 1
    return SweepResult(
        theta=theta,
        mode="quotient",
        checked=checked,
        reliability_ok=rel_ok,
        reliability_witness=rel_wit,
        dbp_ok=dbp_ok,
        dbp_witness=dbp_wit,
        views=views,
        view_kind="pattern",
    )


def _sweep_generic(
    family: SchemeFamily, theta: int, mode: str, seed: int, samples: int, check_dbp: bool
) -> SweepResult:
    views: dict[int, Counter] = {n: Counter() for n in range(1, family.graph.n_servers + 1)}
    rel_ok, rel_wit = True, None
    dbp_ok, dbp_wit = True, None
    checked = 0
    exact_views = mode == "exhaustive"
    for rid, realization in _realization_stream(family, theta, mode, seed, samples):
        instance = family.instance(theta, realization)
        checked += 1
        rel = verify_reliability(instance)
        if not rel.ok and rel_ok:
            rel_ok, rel_wit = False, {"theta": theta, "realization_id": rid, "symbol": rel.witness}
        if check_dbp:
            dbp = verify_database_privacy(instance)
            if not dbp.ok and dbp_ok:
                dbp_ok, dbp_wit = False, {
                    "theta": theta,
                    "realization_id": rid,
                    "rank_full": dbp.rank_full,
                    "rank_restricted": dbp.rank_restricted,
                }
        for server in views:
            key = (
                server_view(instance, server)
                if exact_views
                else view_pattern(instance, server)
            )
            views[server][key] += 1
    return SweepResult(
        theta=theta,
        mode=mode,
        checked=checked,
        reliability_ok=rel_ok,
        reliability_witness=rel_wit,
        dbp_ok=dbp_ok,
        dbp_witness=dbp_wit,
        views=views,
        view_kind="exact" if exact_views else "pattern",
    )


def _sweep_gf2(
    family: SchemeFamily, theta: int, mode: str, seed: int, samples: int, check_dbp: bool
) -> SweepResult:
    """Bit-packed fast path over the full realization stream (q = 2).

    Equivalent to the per-instance verifiers (cross-checked in tests): rows
    are built directly from the canonical template and the realization's
    permutations, reliability uses the decode plan plus row-space membership,
    and views are the packed rows themselves (sorted per server).
    """
    graph = family.graph
    n_servers = graph.n_servers
    big_l = family.L
    k_total = graph.message_count
    r_count = family.r_count
    msg_cols = k_total * big_l
    n_cols = msg_cols + r_count
    theta_off = (theta - 1) * big_l

    keep_mask = sum(1 << c for c in range((theta - 1) * big_l, theta * big_l))
    keep_mask |= ((1 << r_count) - 1) << msg_cols

    # Per-choices template precomputation.
    compiled: dict[tuple[int, ...], tuple] = {}

    def compile_template(choices: tuple[int, ...]):
        tpl = family.template(theta, choices)
        form_terms = []  # flattened: list of (msg_terms, rand_terms)
        slices = []
        pos = 0
        for forms in tpl.answers:
            slices.append((pos, pos + len(forms)))
            for form in forms:
                msg_terms = []
                rand_terms = []
                for ref, coeff in form.terms:
                    assert coeff % 2 == 1
                    if isinstance(ref, Msg):
                        msg_terms.append((ref.message - 1, ref.symbol - 1, (ref.message - 1) * big_l))
                    else:
                        rand_terms.append(ref.index - 1)
                form_terms.append((msg_terms, rand_terms))
            pos += len(forms)
        plan_positions = []
        for coeffs in tpl.decode_plan:
            assert len(coeffs) == pos
            plan_positions.append([p for p, c in enumerate(coeffs) if c % 2])
        assert len(plan_positions) == big_l
        return form_terms, tuple(slices), plan_positions

    views: dict[int, Counter] = {n: Counter() for n in range(1, n_servers + 1)}
    rel_ok, rel_wit = True, None
    dbp_ok, dbp_wit = True, None
    checked = 0
    for rid, realization in _realization_stream(family, theta, mode, seed, samples):
        choices = realization.choices
        if choices not in compiled:
            compiled[choices] = compile_template(choices)
        form_terms, slices, plan_positions = compiled[choices]
        perms = realization.message_perms
        rperm = realization.randomness_perm
        rows = []
        for msg_terms, rand_terms in form_terms:
            row = 0
            for k0, s0, off in msg_terms:
                row |= 1 << (off + perms[k0][s0] - 1)
            for i0 in rand_terms:
                row |= 1 << (msg_cols + rperm[i0] - 1)
            rows.append(row)
        checked += 1

        basis = gf2_echelon(rows)
        perm_theta = perms[theta - 1]
        if rel_ok:
            for l0 in range(big_l):
                target = 1 << (theta_off + perm_theta[l0] - 1)
                acc = 0
                for p in plan_positions[l0]:
                    acc ^= rows[p]
                if acc != target or gf2_reduce(target, basis):
                    rel_ok = False
                    rel_wit = {"theta": theta, "realization_id": rid, "symbol": l0 + 1}
                    break
        if check_dbp and dbp_ok:
            restricted = len(gf2_echelon(r & keep_mask for r in rows))
            if restricted != len(basis):
                dbp_ok = False
                dbp_wit = {
                    "theta": theta,
                    "realization_id": rid,
                    "rank_full": len(basis),
                    "rank_restricted": restricted,
                }
        if mode == "exhaustive":
            for server in range(1, n_servers + 1):
                s, e = slices[server - 1]
                views[server][tuple(sorted(rows[s:e]))] += 1
        else:
            instance = family.instance(theta, realization)
            for server in range(1, n_servers + 1):
                views[server][view_pattern(instance, server)] += 1
    return SweepResult(
        theta=theta,
        mode=mode,
        checked=checked,
        reliability_ok=rel_ok,
        reliability_witness=rel_wit,
        dbp_ok=dbp_ok,
        dbp_witness=dbp_wit,
        views=views,
        view_kind="exact" if mode == "exhaustive" else "pattern",
    )


# ---------------------------------------------------------------------------
# User privacy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UserPrivacyResult:
    """Equality of per-server view distributions between two desired indices."""

    status: str  # pass | fail | sampled-pass
    mode: str
    theta_a: int
    theta_b: int
    checked_per_theta: int
    mismatched_servers: tuple[int, ...]
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def _compare_views(
    a: SweepResult, b: SweepResult
) -> tuple[tuple[int, ...], Optional[dict]]:
    mismatched = []
    witness = None
    for server in sorted(a.views):
        if a.mode == "sampled":
            equal = set(a.views[server]) == set(b.views[server])
        else:
            equal = a.views[server] == b.views[server]
        if not equal:
            mismatched.append(server)
            if witness is None:
                diff = (a.views[server] - b.views[server]) + (b.views[server] - a.views[server])
                example = next(iter(diff)) if diff else None
                witness = {
                    "server": server,
                    "theta_a": a.theta,
                    "theta_b": b.theta,
                    "example_view": repr(example),
                }
    return tuple(mismatched), witness


def verify_user_privacy(
    family: SchemeFamily,
    theta_a: int,
    theta_b: int,
    limit: int = DEFAULT_LIMIT,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
) -> UserPrivacyResult:
    """Check that every server's view distribution is the same whether the
    user wants message theta_a or theta_b."""
    for theta in (theta_a, theta_b):
        if theta not in family.thetas:
            raise ValueError(f"theta {theta} out of range")
    mode = space_mode(family, limit)
    sweep_a = sweep_family(family, theta_a, mode, limit, seed, samples, check_dbp=False)
    sweep_b = sweep_family(family, theta_b, mode, limit, seed, samples, check_dbp=False)
    mismatched, witness = _compare_views(sweep_a, sweep_b)
    if mismatched:
        status = "fail"
    elif mode == "sampled":
        status = "sampled-pass"
    else:
        status = "pass"
    return UserPrivacyResult(
        status=status,
        mode=mode,
        theta_a=theta_a,
        theta_b=theta_b,
        checked_per_theta=sweep_a.checked,
        mismatched_servers=mismatched,
        witness=witness,
    )


# ---------------------------------------------------------------------------
# Family audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # pass | fail | sampled-pass
    witness: Optional[dict] = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.detail:
            out.update(self.detail)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class AuditReport:
    scheme: str
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "scheme": self.scheme,
            "ok": self.ok,
            "checks": [c.to_json() for c in self.checks],
        }

    def to_json_str(self, indent: int = 2) -> str:
        return json.dumps(self.to_json(), indent=indent, sort_keys=False)


def _exhaustive_status(ok: bool, mode: str) -> str:
    if not ok:
        return "fail"
    return "sampled-pass" if mode == "sampled" else "pass"


def audit_family(
    family: SchemeFamily,
    limit: int = DEFAULT_LIMIT,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    force_sample: bool = False,
    converse: bool = True,
) -> AuditReport:
    """Full verification battery for one family.

    Randomness-free (plain retrieval) families get reliability, user privacy,
    and the half-split retrieval count; symmetric families additionally get
    database privacy and the converse inequality suite.
    """
    mode = "sampled" if force_sample else space_mode(family, limit)
    is_spir = family.r_count > 0
    sweeps = {
        theta: sweep_family(
            family, theta, mode, limit, seed, samples, check_dbp=is_spir
        )
        for theta in family.thetas
    }
    checked = sum(s.checked for s in sweeps.values())
    checks: list[CheckResult] = []

    rel_ok = all(s.reliability_ok for s in sweeps.values())
    rel_wit = next((s.reliability_witness for s in sweeps.values() if not s.reliability_ok), None)
    checks.append(
        CheckResult(
            name="reliability",
            status=_exhaustive_status(rel_ok, mode),
            witness=rel_wit,
            detail={"mode": mode, "instances_checked": checked},
        )
    )

    if is_spir:
        dbp_ok = all(s.dbp_ok for s in sweeps.values())
        dbp_wit = next((s.dbp_witness for s in sweeps.values() if not s.dbp_ok), None)
        checks.append(
            CheckResult(
                name="database-privacy",
                status=_exhaustive_status(dbp_ok, mode),
                witness=dbp_wit,
                detail={"mode": mode, "instances_checked": checked},
            )
        )
    else:
        srp = check_srp(family, limit=limit, seed=seed)
        checks.append(
            CheckResult(
                name="half-split-retrieval",
                status="pass" if srp.ok else "fail",
                witness=srp.witness,
                detail={
                    "mode": srp.mode,
                    "expected_per_server": srp.expected_per_server,
                },
            )
        )

    thetas = list(family.thetas)
    up_ok = True
    up_status = "pass" if mode != "sampled" else "sampled-pass"
    up_wit = None
    pairs_checked = 0
    for a_idx in range(len(thetas)):
        for b_idx in range(a_idx + 1, len(thetas)):
            mismatched, witness = _compare_views(sweeps[thetas[a_idx]], sweeps[thetas[b_idx]])
            pairs_checked += 1
            if mismatched and up_ok:
                up_ok = False
                up_status = "fail"
                up_wit = witness
    checks.append(
        CheckResult(
            name="user-privacy",
            status=up_status,
            witness=up_wit,
            detail={"mode": mode, "theta_pairs": pairs_checked},
        )
    )

    if is_spir and converse:
        from .converse import converse_suite

        for ineq in converse_suite(family, seed=seed):
            holds = ineq.slack >= 0
            checks.append(
                CheckResult(
                    name=f"converse:{ineq.name}",
                    status="fail" if not holds else ("pass" if ineq.exact else "sampled-pass"),
                    detail={
                        "lhs": str(ineq.lhs),
                        "rhs": str(ineq.rhs),
                        "slack": str(ineq.slack),
                    },
                )
            )

    return AuditReport(scheme=family.name, checks=tuple(checks))
