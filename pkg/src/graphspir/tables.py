"""Human-readable renderings of the bundled schemes.

`golden_table` prints a pinned instance (fixed query choices, identity
relabelings) of each showcase scheme in a fixed text layout, so the exact
per-server answer forms can be inspected or diffed.  `instance_to_json`
gives the same information as a JSON-friendly structure for any instance.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

from .forms import LinearForm, Msg, Rand, SchemeInstance

GOLDEN_NAMES = ("p3-example", "c3", "p3-capacity")

# Query choices used for the rendered instances, per theta.  These pin the
# tables to one concrete realization of each scheme.
GOLDEN_CHOICES: Dict[str, Dict[int, Tuple[int, ...]]] = {
    "p3-example": {1: (2, 2), 2: (1, 1)},
    "c3": {1: ()},
    "p3-capacity": {1: (), 2: ()},
}

RENDERED_THETAS: Dict[str, Tuple[int, ...]] = {
    "p3-example": (1, 2),
    "c3": (1,),
    "p3-capacity": (1, 2),
}

_NOTE = (
    "note: in the theta=2 block the raw symbol at database 3 is s2, not s1; "
    "s1 is the mask shared with the undesired symbol a1, so serving it raw "
    "would expose a1 and leave b1 with no way to strip its mask s2."
)


def render_term(ref, coeff: int) -> str:
    if isinstance(ref, Msg):
        sym = chr(96 + ref.message) + str(ref.symbol)
    else:
        sym = "s" + str(ref.index)
    if coeff == 1:
        return sym
    return f"{coeff}*{sym}"


def render_form(form: LinearForm) -> str:
    """Render terms in stored order, e.g. ``a2+c2+s3+s4``."""
    if not form.terms:
        return "0"
    return "+".join(render_term(ref, coeff) for ref, coeff in form.terms)


def _line(label: str, cells: List[str]) -> str:
    return f"{label:<7} | " + " | ".join(cells)


def _header(label: str, n_servers: int) -> str:
    return _line(label, [f"database {n}" for n in range(1, n_servers + 1)])


def golden_instance(name: str, theta: int) -> SchemeInstance:
    from .catalog import get_family

    family = get_family(name)
    choices = GOLDEN_CHOICES[name][theta]
    return family.instance(theta, family.space().with_choices(choices))


def _server_forms(instance: SchemeInstance) -> List[List[LinearForm]]:
    forms = list(instance.all_forms())
    out = []
    for server in range(1, instance.graph.n_servers + 1):
        rng = instance.server_form_positions(server)
        out.append([forms[i] for i in rng])
    return out


def converted_block(
    instance: SchemeInstance,
    header_label: str,
    raw_label: str,
    pool_size: int,
    repetitions: int,
    packing: List[List[int]],
) -> List[str]:
    """Rows for a masked scheme: raw randomness row, then repetition rows.

    Each server's forms start with its ``pool_size`` raw randomness forms,
    followed by ``repetitions`` equal groups; ``packing`` maps a group's
    forms onto table rows (cells join multiple forms with a comma).
    """
    per_server = _server_forms(instance)
    per_rep = (len(per_server[0]) - pool_size) // repetitions
    lines = [_header(header_label, instance.graph.n_servers)]
    lines.append(
        _line(raw_label, [", ".join(render_form(f) for f in forms[:pool_size]) for forms in per_server])
    )
    for rep in range(repetitions):
        base = pool_size + rep * per_rep
        for row_index, row in enumerate(packing):
            label = f"rep. {rep + 1}" if row_index == 0 else ""
            cells = [
                ", ".join(render_form(forms[base + k]) for k in row)
                for forms in per_server
            ]
            lines.append(_line(label, cells))
    return lines


def golden_table(name: str) -> str:
    if name not in GOLDEN_NAMES:
        raise ValueError(f"no golden table for {name!r}")
    if name == "p3-example":
        blocks = []
        for theta in RENDERED_THETAS[name]:
            instance = golden_instance(name, theta)
            blocks.append(
                converted_block(
                    instance,
                    header_label=f"theta={theta}",
                    raw_label="",
                    pool_size=1,
                    repetitions=2,
                    packing=[[0]],
                )
            )
        lines = blocks[0] + [""] + blocks[1] + ["", _NOTE]
        return "\n".join(lines)
    if name == "c3":
        instance = golden_instance(name, 1)
        lines = converted_block(
            instance,
            header_label="",
            raw_label="theta=1",
            pool_size=3,
            repetitions=2,
            packing=[[0, 1], [2], [3]],
        )
        return "\n".join(lines)
    # p3-capacity: one row per theta, every form of a server in one cell.
    lines = [_header("", 3)]
    for theta in RENDERED_THETAS[name]:
        instance = golden_instance(name, theta)
        cells = [
            ", ".join(render_form(f) for f in forms)
            for forms in _server_forms(instance)
        ]
        lines.append(_line(f"theta={theta}", cells))
    return "\n".join(lines)


def term_to_json(ref, coeff: int) -> dict:
    if isinstance(ref, Msg):
        return {"message": ref.message, "symbol": ref.symbol, "coeff": coeff}
    assert isinstance(ref, Rand)
    return {"randomness": ref.index, "coeff": coeff}


def instance_to_json(instance: SchemeInstance) -> dict:
    servers = []
    for forms in _server_forms(instance):
        servers.append(
            [[term_to_json(ref, coeff) for ref, coeff in form.terms] for form in forms]
        )
    return {
        "theta": instance.theta,
        "servers": servers,
        "decode_plan": [list(row) for row in instance.decode_plan],
    }
