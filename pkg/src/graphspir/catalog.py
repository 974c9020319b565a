"""Named registry of the bundled scheme families.

Masked (symmetric) schemes:
  p3-capacity   hand-built 3-server path scheme meeting the rate 1/2 bound
  p3-example    3-server path scheme produced by the generic masking
                conversion (rate 4/9)
  c3            3-server cycle scheme produced by the conversion (rate 4/11)
  path-N        converted path schemes for N servers, 3 <= N <= 8

Plain retrieval bases (no server randomness):
  path-pir-N    the path base scheme the conversion starts from
  cycle3-pir    the 3-server cycle base scheme
"""

from __future__ import annotations

from functools import lru_cache

from .convert import convert_pir_to_spir
from .forms import SchemeFamily
from .schemes import cycle3_pir_family, p3_capacity_family, path_pir_family

_PATH_RANGE = range(3, 9)


def family_names() -> tuple:
    names = ["p3-capacity", "p3-example", "c3"]
    names += [f"path-{n}" for n in _PATH_RANGE]
    names += [f"path-pir-{n}" for n in _PATH_RANGE]
    names.append("cycle3-pir")
    return tuple(names)


@lru_cache(maxsize=None)
def get_family(name: str, q: int = 2) -> SchemeFamily:
    if name == "p3-capacity":
        return p3_capacity_family(q=q)
    if name == "p3-example":
        return convert_pir_to_spir(path_pir_family(3, q=q))
    if name == "c3":
        return convert_pir_to_spir(cycle3_pir_family(q=q))
    if name == "cycle3-pir":
        return cycle3_pir_family(q=q)
    for prefix, convert in (("path-pir-", False), ("path-", True)):
        if name.startswith(prefix):
            try:
                n = int(name[len(prefix) :])
            except ValueError:
                break
            if n not in _PATH_RANGE:
                raise ValueError(f"unsupported server count in {name!r}")
            base = path_pir_family(n, q=q)
            return convert_pir_to_spir(base) if convert else base
    raise ValueError(f"unknown scheme {name!r}; known: {', '.join(family_names())}")
