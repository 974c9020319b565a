"""Shared helpers for the test suite."""

from graphspir.forms import Msg
from graphspir.tables import render_form


def forms_of(family, theta, choices):
    inst = family.instance(theta, family.space().with_choices(choices))
    return [[render_form(f) for f in server] for server in inst.answers]


def decoded_symbols(inst):
    """Apply the decode plan symbolically; return one source-combination dict
    per desired symbol."""
    forms = inst.all_forms()
    out = []
    for row in inst.decode_plan:
        acc = {}
        for coeff, form in zip(row, forms):
            if coeff % inst.q == 0:
                continue
            for ref, c in form.terms:
                acc[ref] = (acc.get(ref, 0) + coeff * c) % inst.q
        out.append({ref: c for ref, c in acc.items() if c})
    return out


def assert_decodes(inst):
    got = decoded_symbols(inst)
    assert len(got) == inst.L
    for sym, combo in enumerate(got, start=1):
        assert combo == {Msg(inst.theta, sym): 1}, (inst.theta, sym, combo)
