"""Exact rational rate formulas and capacity bounds for path and cycle graphs.

All quantities are Fractions.  The retrieval rate achieved by the conversion,
the plain-retrieval capacities of the two graph families, and the upper
bounds from the entropy converse are each closed forms in N; `bound_set`
assembles them with the trivial 1/N baseline of graph-restricted randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .convert import conversion_params

KINDS = ("path", "cycle")


def _check(kind: str, n_servers: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown graph kind {kind!r}")
    if n_servers < 3:
        raise ValueError("bounds are defined for at least 3 servers")


def achievable_rate(kind: str, n_servers: int) -> Fraction:
    """Rate of the converted scheme: path 2/(N + N/(N-1)), cycle
    2/(N+1 + N/(N-1))."""
    _check(kind, n_servers)
    n = n_servers
    chain = Fraction(n, n - 1)
    if kind == "path":
        return 2 / (n + chain)
    return 2 / (n + 1 + chain)


@dataclass(frozen=True)
class RateRho:
    rate: Fraction
    rho: Fraction


def general_rate_rho(
    base_symbols: int, base_download: int, n_servers: int, message_count: int
) -> RateRho:
    """Rate L'x/(D'x + Ny) and randomness ratio (K-1)/2 + Ny/(L'x) of the
    conversion applied to an (L', D') base scheme."""
    params = conversion_params(base_symbols, n_servers, message_count)
    rate = Fraction(
        base_symbols * params.x, base_download * params.x + n_servers * params.y
    )
    rho = Fraction(message_count - 1, 2) + Fraction(
        n_servers * params.y, base_symbols * params.x
    )
    return RateRho(rate=rate, rho=rho)


def pir_capacity(kind: str, n_servers: int) -> Fraction:
    """Plain-retrieval capacity of the base graph, derived by removing the
    conversion's randomness download cost from the achieved rate:
    1/R = 1/C + N/(2(N-1)).  Evaluates to 2/N (path) and 2/(N+1) (cycle)."""
    _check(kind, n_servers)
    inv = 1 / achievable_rate(kind, n_servers) - Fraction(n_servers, 2 * (n_servers - 1))
    return 1 / inv


def upper_bound(kind: str, n_servers: int) -> Fraction:
    """Converse bound on the symmetric rate: path 2/(N + 2/(N-1)), cycle
    2/(N+1 + 1/(N-1))."""
    _check(kind, n_servers)
    n = n_servers
    if kind == "path":
        return 2 / (n + Fraction(2, n - 1))
    return 2 / (n + 1 + Fraction(1, n - 1))


@dataclass(frozen=True)
class BoundSet:
    """All known rate bounds for one graph.

    lower is the best proven achievable symmetric rate (the hand-built
    3-server path scheme beats the generic conversion there); rho_lower_bound
    is the proven floor on randomness-per-symbol where known.
    """

    kind: str
    n_servers: int
    graph_replicated: Fraction
    lower: Fraction
    upper: Fraction
    pir: Fraction
    rho_lower_bound: Optional[Fraction] = None


def bound_set(kind: str, n_servers: int) -> BoundSet:
    _check(kind, n_servers)
    if kind == "path" and n_servers == 3:
        lower = Fraction(1, 2)
        rho_bound: Optional[Fraction] = Fraction(1)
    else:
        lower = achievable_rate(kind, n_servers)
        rho_bound = None
    bounds = BoundSet(
        kind=kind,
        n_servers=n_servers,
        graph_replicated=Fraction(1, n_servers),
        lower=lower,
        upper=upper_bound(kind, n_servers),
        pir=pir_capacity(kind, n_servers),
        rho_lower_bound=rho_bound,
    )
    assert bounds.graph_replicated <= bounds.lower <= bounds.upper <= bounds.pir
    return bounds
