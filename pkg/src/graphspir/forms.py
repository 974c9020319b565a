"""Linear answer forms, user realizations, and scheme containers.

A scheme family fixes a storage graph and field.  For each desired message
theta, the user's randomness (a "realization") is a tuple of private
per-message symbol permutations, a permutation of the shared randomness pool,
and a list of small scheme-specific integer choices.  Concrete query/answer
instances are produced by relabeling a canonical template (built per theta and
choice tuple) through the realization's permutations -- the permutations act on
symbol indices only, never on the combinatorial shape of the answers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from .algebra import check_modulus, permutation_unrank
from .graphdb import Graph


class Msg(NamedTuple):
    """One symbol of one message: Msg(2, 5) is symbol 5 of message 2."""

    message: int
    symbol: int


class Rand(NamedTuple):
    """One symbol of the shared randomness pool."""

    index: int


SymbolRef = Union[Msg, Rand]


def term_key(ref: SymbolRef) -> tuple[int, int, int]:
    """Canonical sort key: message terms first (by message, then symbol)."""
    if isinstance(ref, Msg):
        return (0, ref.message, ref.symbol)
    return (1, ref.index, 0)


@dataclass(frozen=True)
class LinearForm:
    """A q-ary linear combination of source symbols with no zero terms.

    Term order is the construction order (which the answer tables display);
    `sorted_terms` gives the canonical order used for comparisons and views.
    """

    terms: tuple[tuple[SymbolRef, int], ...]

    @classmethod
    def of(cls, pairs: Iterable[tuple[SymbolRef, int]], q: int) -> "LinearForm":
        check_modulus(q)
        acc: dict[SymbolRef, int] = {}
        order: list[SymbolRef] = []
        for ref, coeff in pairs:
            if ref not in acc:
                acc[ref] = 0
                order.append(ref)
            acc[ref] = (acc[ref] + coeff) % q
        return cls(tuple((ref, acc[ref]) for ref in order if acc[ref]))

    def sorted_terms(self) -> tuple[tuple[SymbolRef, int], ...]:
        return tuple(sorted(self.terms, key=lambda t: term_key(t[0])))

    def refs(self) -> tuple[SymbolRef, ...]:
        return tuple(ref for ref, _ in self.terms)


def relabel_form(
    form: LinearForm,
    message_perms: Sequence[Sequence[int]],
    randomness_perm: Sequence[int],
) -> LinearForm:
    """Apply index permutations to every term (1-indexed images)."""
    out = []
    for ref, coeff in form.terms:
        if isinstance(ref, Msg):
            out.append((Msg(ref.message, message_perms[ref.message - 1][ref.symbol - 1]), coeff))
        else:
            out.append((Rand(randomness_perm[ref.index - 1]), coeff))
    return LinearForm(tuple(out))


@dataclass(frozen=True)
class UserRealization:
    """One draw of the user's private randomness."""

    message_perms: tuple[tuple[int, ...], ...]
    randomness_perm: tuple[int, ...]
    choices: tuple[int, ...] = ()

    def is_identity(self) -> bool:
        ident = all(p == tuple(range(1, len(p) + 1)) for p in self.message_perms)
        return ident and self.randomness_perm == tuple(range(1, len(self.randomness_perm) + 1))


@dataclass(frozen=True)
class RealizationSpace:
    """Indexable product space of all realizations for one family.

    Component order (most significant first in the id): message permutations by
    message, then the randomness permutation, then each choice digit.  Choice
    digits are 1-based values in [1, radix].
    """

    message_count: int
    symbols_per_message: int
    randomness_count: int
    choice_radices: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        n = math.factorial(self.symbols_per_message) ** self.message_count
        n *= math.factorial(self.randomness_count)
        for r in self.choice_radices:
            n *= r
        return n

    def identity(self) -> UserRealization:
        ident = tuple(range(1, self.symbols_per_message + 1))
        return UserRealization(
            message_perms=tuple(ident for _ in range(self.message_count)),
            randomness_perm=tuple(range(1, self.randomness_count + 1)),
            choices=tuple(1 for _ in self.choice_radices),
        )

    def with_choices(self, choices: Sequence[int]) -> UserRealization:
        """Identity permutations combined with the given choice digits."""
        base = self.identity()
        if len(choices) != len(self.choice_radices):
            raise ValueError("wrong number of choices")
        return UserRealization(base.message_perms, base.randomness_perm, tuple(choices))

    def unrank(self, index: int) -> UserRealization:
        if not 0 <= index < self.size:
            raise ValueError(f"realization id {index} out of range")
        digits: list[int] = []
        for radix in reversed(self.choice_radices):
            index, d = divmod(index, radix)
            digits.append(d + 1)
        digits.reverse()
        index, r_idx = divmod(index, math.factorial(self.randomness_count))
        perm_block = math.factorial(self.symbols_per_message)
        perm_ids: list[int] = []
        for _ in range(self.message_count):
            index, p = divmod(index, perm_block)
            perm_ids.append(p)
        perm_ids.reverse()
        return UserRealization(
            message_perms=tuple(
                permutation_unrank(self.symbols_per_message, p) for p in perm_ids
            ),
            randomness_perm=permutation_unrank(self.randomness_count, r_idx),
            choices=tuple(digits),
        )

    def iter_all(self) -> Iterator[tuple[int, UserRealization]]:
        """All (id, realization) pairs in id order, lazily."""
        import itertools

        msg_perms = list(
            itertools.permutations(range(1, self.symbols_per_message + 1))
        )
        rand_perms = list(itertools.permutations(range(1, self.randomness_count + 1)))
        choice_axes = [range(1, r + 1) for r in self.choice_radices]
        axes = [msg_perms] * self.message_count + [rand_perms] + choice_axes
        for rid, combo in enumerate(itertools.product(*axes)):
            perms = tuple(combo[: self.message_count])
            rperm = combo[self.message_count]
            choices = tuple(combo[self.message_count + 1 :])
            yield rid, UserRealization(perms, rperm, choices)

    def sample(self, count: int, rng: random.Random) -> Iterator[tuple[int, UserRealization]]:
        """`count` seeded uniform draws as (id, realization) pairs."""
        size = self.size
        for _ in range(count):
            rid = rng.randrange(size)
            yield rid, self.unrank(rid)


@dataclass(frozen=True)
class MaskAssignment:
    """How a converted scheme pads its downloads with shared randomness.

    undesired maps each queried (message, symbol) of a non-desired message to
    the mask it shares at both storing servers; desired maps (storing server,
    desired symbol) to that download's one-time-pad mask; pools[n] lists, in
    consumption order, the masks the user downloads raw from server n.
    """

    undesired: dict[tuple[int, int], int]
    desired: dict[tuple[int, int], int]
    pools: dict[int, tuple[int, ...]]


@dataclass(frozen=True)
class Template:
    """Canonical (pre-permutation) answers for one (theta, choices) pair.

    decode_plan[l-1] holds signed integer coefficients over the flattened form
    list (server 1's forms first); reducing them mod q recovers desired symbol
    l from the downloads.
    """

    theta: int
    answers: tuple[tuple[LinearForm, ...], ...]
    decode_plan: tuple[tuple[int, ...], ...]
    masks: Optional[MaskAssignment] = None


@dataclass(frozen=True)
class SchemeInstance:
    """One fully realized query/answer specification."""

    graph: Graph
    q: int
    theta: int
    L: int
    r_count: int
    answers: tuple[tuple[LinearForm, ...], ...]
    decode_plan: tuple[tuple[int, ...], ...]
    realization: UserRealization

    @property
    def download_count(self) -> int:
        return sum(len(forms) for forms in self.answers)

    def all_forms(self) -> tuple[LinearForm, ...]:
        return tuple(f for forms in self.answers for f in forms)

    def server_form_positions(self, server: int) -> range:
        """Positions of one server's forms inside the flattened download list."""
        start = sum(len(self.answers[s]) for s in range(server - 1))
        return range(start, start + len(self.answers[server - 1]))


@dataclass(frozen=True)
class SchemeFamily:
    """A scheme for every (theta, realization) over one graph and field.

    base_symbols/base_download are the per-repetition (L', D') of the
    underlying retrieval pattern; for unconverted families L == base_symbols
    and r_count == 0.
    """

    name: str
    graph: Graph
    q: int
    L: int
    r_count: int
    base_symbols: int
    base_download: int
    choice_radices: tuple[int, ...]
    template_fn: Callable[[int, tuple[int, ...]], Template] = field(repr=False)

    def __post_init__(self) -> None:
        check_modulus(self.q)

    @property
    def message_count(self) -> int:
        return self.graph.message_count

    @property
    def thetas(self) -> range:
        return range(1, self.message_count + 1)

    def space(self) -> RealizationSpace:
        return RealizationSpace(
            message_count=self.message_count,
            symbols_per_message=self.L,
            randomness_count=self.r_count,
            choice_radices=self.choice_radices,
        )

    @property
    def realization_space_size(self) -> int:
        return self.space().size

    def template(self, theta: int, choices: tuple[int, ...] = ()) -> Template:
        if theta not in self.thetas:
            raise ValueError(f"theta {theta} out of range 1..{self.message_count}")
        if len(choices) != len(self.choice_radices):
            raise ValueError(
                f"expected {len(self.choice_radices)} choices, got {len(choices)}"
            )
        for c, radix in zip(choices, self.choice_radices):
            if not 1 <= c <= radix:
                raise ValueError(f"choice {c} outside 1..{radix}")
        return self.template_fn(theta, tuple(choices))

    def instance(self, theta: int, realization: UserRealization) -> SchemeInstance:
        tpl = self.template(theta, realization.choices)
        answers = tuple(
            tuple(
                relabel_form(f, realization.message_perms, realization.randomness_perm)
                for f in forms
            )
            for forms in tpl.answers
        )
        # The plan for canonical symbol l decodes post-permutation symbol
        # perm_theta(l); reindex so decode_plan is addressed by visible index.
        perm_theta = realization.message_perms[theta - 1]
        plan: list[tuple[int, ...]] = [()] * self.L
        for l_base, coeffs in enumerate(tpl.decode_plan, start=1):
            plan[perm_theta[l_base - 1] - 1] = tuple(c % self.q for c in coeffs)
        return SchemeInstance(
            graph=self.graph,
            q=self.q,
            theta=theta,
            L=self.L,
            r_count=self.r_count,
            answers=answers,
            decode_plan=tuple(plan),
            realization=realization,
        )

    def instance_by_id(self, theta: int, realization_id: int) -> SchemeInstance:
        return self.instance(theta, self.space().unrank(realization_id))


def cached_template_fn(
    fn: Callable[[int, tuple[int, ...]], Template]
) -> Callable[[int, tuple[int, ...]], Template]:
    """Memoize a template builder (templates are pure values)."""
    cache: dict[tuple[int, tuple[int, ...]], Template] = {}

    def wrapped(theta: int, choices: tuple[int, ...]) -> Template:
        key = (theta, choices)
        if key not in cache:
            cache[key] = fn(theta, choices)
        return cache[key]

    return wrapped
