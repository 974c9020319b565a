"""Scheme builders: exact answer forms, decode plans, retrieval-split checks."""

import pytest
from helpers import assert_decodes, forms_of

from graphspir.forms import LinearForm, Msg, SchemeFamily, Template
from graphspir.graphdb import build_graph
from graphspir.schemes import (
    RealizationSample,
    build_path_pir,
    check_srp,
    cycle3_pir_family,
    enumerate_realizations,
    p3_capacity_family,
    path_pir_family,
)


# ---------------------------------------------------------------------------
# Path schemes
# ---------------------------------------------------------------------------


def test_path3_answer_forms_are_exact():
    fam = path_pir_family(3)
    assert forms_of(fam, 1, (1,)) == [["a1"], ["a2+b1"], ["b1"]]
    assert forms_of(fam, 1, (2,)) == [["a1"], ["a2+b2"], ["b2"]]
    assert forms_of(fam, 2, (1,)) == [["a1"], ["a1+b1"], ["b2"]]
    assert forms_of(fam, 2, (2,)) == [["a2"], ["a2+b1"], ["b2"]]


def test_path4_interior_servers_mix_two_messages():
    fam = path_pir_family(4)
    assert forms_of(fam, 2, (2, 1)) == [["a2"], ["a2+b1"], ["b2+c1"], ["c1"]]
    assert forms_of(fam, 1, (1, 2)) == [["a1"], ["a2+b1"], ["b1+c2"], ["c2"]]


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_path_decode_plan_recovers_every_desired_symbol(n):
    fam = path_pir_family(n)
    for theta in fam.thetas:
        for _, realization in enumerate_realizations(fam, limit=64, seed=1):
            assert_decodes(fam.instance(theta, realization))


def test_path_download_is_one_form_per_server():
    for n in (3, 5, 8):
        fam = path_pir_family(n)
        inst = fam.instance(1, fam.space().identity())
        assert inst.download_count == n
        assert all(len(server) == 1 for server in inst.answers)


def test_path_requires_at_least_three_servers():
    with pytest.raises(ValueError):
        path_pir_family(2)


def test_build_path_pir_wrapper():
    fam = path_pir_family(3)
    inst = build_path_pir(3, 1, fam.space().identity())
    assert inst.theta == 1
    assert inst.L == 2


# ---------------------------------------------------------------------------
# Cycle scheme
# ---------------------------------------------------------------------------


def test_cycle3_theta1_data_is_exact():
    fam = cycle3_pir_family()
    assert forms_of(fam, 1, ()) == [
        ["a1", "c1", "a2+c2", "a3+c3"],
        ["a4", "b1", "a5+b2", "a6+b3"],
        ["b2", "c2", "b1+c3", "b3+c1"],
    ]


def test_cycle3_other_thetas_are_rotations():
    fam = cycle3_pir_family()
    base = fam.instance(1, fam.space().identity()).answers

    def rotate_ref(ref):
        return Msg(ref.message % 3 + 1, ref.symbol)

    rotated = [None, None, None]
    for server, forms in enumerate(base, start=1):
        target = server % 3 + 1
        rotated[target - 1] = [
            LinearForm.of([(rotate_ref(r), c) for r, c in f.terms], 2) for f in forms
        ]
    theta2 = fam.instance(2, fam.space().identity()).answers
    for server in range(3):
        assert sorted(map(str, rotated[server])) == sorted(map(str, theta2[server]))


def test_cycle3_decode_plan_recovers_every_desired_symbol():
    fam = cycle3_pir_family()
    for theta in (1, 2, 3):
        for _, realization in enumerate_realizations(fam, limit=200, seed=0):
            assert_decodes(fam.instance(theta, realization))


# ---------------------------------------------------------------------------
# Hand-built masked path-3 scheme
# ---------------------------------------------------------------------------


def test_p3_capacity_forms_and_decode():
    fam = p3_capacity_family()
    assert forms_of(fam, 1, ()) == [["a1+s1"], ["s1", "a2+b2+s2"], ["b2+s2"]]
    assert forms_of(fam, 2, ()) == [["a1+s1"], ["s2", "a1+b1+s1"], ["b2+s2"]]
    for theta in (1, 2):
        for _, realization in enumerate_realizations(fam, limit=100, seed=0):
            assert_decodes(fam.instance(theta, realization))


def test_p3_capacity_space_size():
    assert p3_capacity_family().realization_space_size == 8


# ---------------------------------------------------------------------------
# Retrieval-split reports
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(3, 9))
def test_path_retrieves_half_from_each_storing_server(n):
    report = check_srp(path_pir_family(n))
    assert report.ok
    assert report.status == "pass"
    assert report.expected_per_server == 1
    for theta in range(1, n):
        i, j = build_graph("path", n).servers_of(theta)
        assert report.counts[(theta, i)] == (1,)
        assert report.counts[(theta, j)] == (1,)


def test_cycle3_retrieves_half_from_each_storing_server():
    report = check_srp(cycle3_pir_family())
    assert report.ok
    assert report.expected_per_server == 3
    assert set(report.counts.values()) == {(3,)}


def lopsided_family():
    """Deliberately unbalanced: the full desired message comes from one server."""
    graph = build_graph("path", 3)

    def template_fn(theta, choices):
        i, _ = graph.servers_of(theta)
        answers = [(), (), ()]
        answers[i - 1] = (
            LinearForm.of([(Msg(theta, 1), 1)], 2),
            LinearForm.of([(Msg(theta, 2), 1)], 2),
        )
        return Template(
            theta=theta,
            answers=tuple(answers),
            decode_plan=((1, 0), (0, 1)),
        )

    return SchemeFamily(
        name="lopsided",
        graph=graph,
        q=2,
        L=2,
        r_count=0,
        base_symbols=2,
        base_download=2,
        choice_radices=(),
        template_fn=template_fn,
    )


def test_unbalanced_scheme_fails_the_split_check():
    report = check_srp(lopsided_family())
    assert not report.ok
    assert report.status == "fail"
    assert report.witness is not None
    assert report.witness["count"] in (0, 2)


def test_split_check_rejects_masked_families():
    with pytest.raises(ValueError):
        check_srp(p3_capacity_family())


# ---------------------------------------------------------------------------
# Realization enumeration
# ---------------------------------------------------------------------------


def test_enumerate_realizations_is_exhaustive_when_small():
    fam = path_pir_family(3)
    sample = enumerate_realizations(fam, limit=100, seed=0)
    assert isinstance(sample, RealizationSample)
    assert not sample.sampled
    seen = list(sample)
    assert len(seen) == 8
    assert len({rid for rid, _ in seen}) == 8


def test_enumerate_realizations_samples_when_large():
    fam = cycle3_pir_family()  # (6!)**3 realizations
    sample = enumerate_realizations(fam, limit=10, seed=3)
    assert sample.sampled
    assert len(list(sample)) == 10
    # deterministic under a fixed seed
    assert [r for r, _ in sample] == [r for r, _ in enumerate_realizations(fam, limit=10, seed=3)]


def test_instances_are_deterministic():
    fam = path_pir_family(4)
    a = fam.instance(2, fam.space().unrank(17))
    b = fam.instance(2, fam.space().unrank(17))
    assert a.answers == b.answers
    assert a.decode_plan == b.decode_plan
