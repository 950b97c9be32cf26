from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ck_oracle import (
    CORPUS_CYCLOMATIC,
    CORPUS_UNIT,
    SQUARE_RESPONSE_SET,
    brute_cbo,
    brute_dit,
    brute_lcom_components,
    brute_lcom_percent,
    brute_noc,
    brute_response_set,
)
from entropia.metrics import (
    MetricVector,
    WmcWeighting,
    cbo,
    compute_metrics,
    dit,
    lcom_components,
    lcom_percent,
    metric_vector,
    noc,
    response_set,
    rfc,
    wmc,
)
from entropia.model import SELF, CallSite, ClassDef, FieldDef, MethodDef, build_model
from entropia.weyuker import GeneratorConfig, random_model


def _fields(*names):
    return tuple(FieldDef(n, "int") for n in names)


def test_wmc_examples():
    c = ClassDef("C", methods=(MethodDef("a"), MethodDef("b"), MethodDef("c")))
    assert wmc(c) == 3
    assert wmc(ClassDef("E")) == 0
    d = ClassDef("D", methods=(MethodDef("m", decision_points=3), MethodDef("n")))
    assert wmc(d, WmcWeighting.CYCLOMATIC) == 4 + 1
    assert wmc(d, "cyclomatic") == 5


def test_wmc_ignores_inherited_methods():
    model = build_model([ClassDef("A", methods=(MethodDef("a"),)), ClassDef("B", parent="A")])
    assert wmc(model["B"]) == 0


def test_dit_examples():
    model = build_model(
        [ClassDef("A"), ClassDef("B", "A"), ClassDef("C", "B"), ClassDef("W", "Widget")],
        external=["Widget"],
    )
    assert [dit(model[n], model) for n in "ABC"] == [0, 1, 2]
    assert dit(model["W"], model) == 1


def test_noc_examples():
    model = build_model([ClassDef("A"), ClassDef("B", "A"), ClassDef("C", "A"), ClassDef("D", "B")])
    assert noc(model["A"], model) == 2
    assert noc(model["B"], model) == 1
    assert noc(model["D"], model) == 0


def test_cbo_examples():
    x = ClassDef("X", methods=(MethodDef("f"),))
    c = ClassDef("C", methods=(MethodDef("m", calls=(CallSite("X", "f"), CallSite("Y", "g"))),))
    model = build_model([x, c])
    assert cbo(model["C"], model) == 2

    parent = ClassDef("P", methods=(MethodDef("f"),))
    child = ClassDef("K", "P", methods=(MethodDef("m", calls=(CallSite("P", "f"), CallSite(SELF, "f"))),))
    model = build_model([parent, child])
    assert cbo(model["K"], model) == 0


def test_cbo_excludes_descendants_and_primitives():
    model = build_model([
        ClassDef("A", fields=(FieldDef("kid", "B"), FieldDef("n", "int"), FieldDef("s", "string"))),
        ClassDef("B", "A"),
        ClassDef("C", "B", fields=(FieldDef("root", "A"), FieldDef("other", "Z"))),
    ])
    assert cbo(model["A"], model) == 0
    assert cbo(model["C"], model) == 1


def test_rfc_example():
    model = build_model([
        ClassDef("C", methods=(
            MethodDef("m1", calls=(CallSite("X", "f"),)),
            MethodDef("m2", calls=(CallSite("Y", "g"), CallSite(SELF, "m1"))),
        )),
    ])
    assert response_set(model["C"], model) == {
        ("C", "m1", 0), ("C", "m2", 0), ("X", "f", 0), ("Y", "g", 0)
    }
    assert rfc(model["C"], model) == 4
    assert rfc(build_model([ClassDef("E")])["E"], build_model([ClassDef("E")])) == 0


def test_rfc_override_fixture():
    model = build_model([
        ClassDef("A", methods=(MethodDef("a"), MethodDef("b", calls=(CallSite(SELF, "a"),)))),
        ClassDef("B", "A", methods=(MethodDef("a"), MethodDef("b"))),
    ])
    b = model["B"]
    assert all(m.overrides for m in b.methods)
    # each signature once, owned by B; A's callees are not reached
    assert response_set(b, model) == {("B", "a", 0), ("B", "b", 0)}


def test_rfc_is_one_level_deep():
    model = build_model([
        ClassDef("X", methods=(MethodDef("f", calls=(CallSite("Y", "g"),)),)),
        ClassDef("C", methods=(MethodDef("m", calls=(CallSite("X", "f"),)),)),
    ])
    assert response_set(model["C"], model) == {("C", "m", 0), ("X", "f", 0)}


def test_rfc_resolves_remote_calls_to_declaring_ancestor():
    model = build_model([
        ClassDef("A", methods=(MethodDef("f"),)),
        ClassDef("B", "A"),
        ClassDef("C", methods=(MethodDef("m", calls=(CallSite("B", "f"),)),)),
    ])
    assert ("A", "f", 0) in response_set(model["C"], model)


def test_lcom_examples():
    c = ClassDef("C", fields=_fields("a", "b", "c"), methods=(
        MethodDef("m1", field_uses={"a"}),
        MethodDef("m2", field_uses={"a", "b"}),
        MethodDef("m3", field_uses={"c"}),
    ))
    assert lcom_components(c) == 2
    all_a = ClassDef("A", fields=_fields("a"), methods=tuple(MethodDef(f"m{i}", field_uses={"a"}) for i in range(3)))
    assert lcom_components(all_a) == 1
    none = ClassDef("N", methods=tuple(MethodDef(f"m{i}") for i in range(3)))
    assert lcom_components(none) == 3
    assert lcom_components(ClassDef("E")) == 0


def test_lcom_percent_examples():
    full = ClassDef("F", fields=_fields("x", "y"), methods=(
        MethodDef("a", field_uses={"x", "y"}), MethodDef("b", field_uses={"x", "y"})))
    assert lcom_percent(full) == 0
    split = ClassDef("S", fields=_fields("x", "y"), methods=(
        MethodDef("a", field_uses={"x"}), MethodDef("b", field_uses={"y"})))
    assert lcom_percent(split) == 50
    assert lcom_percent(ClassDef("N", methods=(MethodDef("a"),))) == 0
    assert lcom_percent(ClassDef("M", fields=_fields("x"))) == 0


def test_metric_vector_bundles():
    model = build_model([ClassDef("A", fields=_fields("a"), methods=(MethodDef("m", field_uses={"a"}),))])
    assert metric_vector(model["A"], model) == MetricVector(1, 0, 0, 0, 1, 1, 0.0)


# -- corpus oracle -------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS_UNIT))
def test_corpus_matches_hand_table(corpus, name):
    got = metric_vector(corpus[name], corpus, WmcWeighting.UNIT)
    want = CORPUS_UNIT[name]
    assert (got.wmc, got.dit, got.noc, got.cbo, got.rfc, got.lcom_components) == want[:6]
    assert got.lcom_percent == pytest.approx(want[6], abs=1e-9)


def test_corpus_cyclomatic_wmc(corpus):
    got = {n: v.wmc for n, v in compute_metrics(corpus, WmcWeighting.CYCLOMATIC).items()}
    assert got == CORPUS_CYCLOMATIC


def test_corpus_covers_every_class(corpus):
    assert set(corpus.names) == set(CORPUS_UNIT)
    assert corpus.external == {"Logger", "Monitor", "Notifier"}


def test_square_response_set(corpus):
    assert response_set(corpus["Square"], corpus) == SQUARE_RESPONSE_SET


def _agree_with_brute_force(model):
    for c in model.classes:
        assert dit(c, model) == brute_dit(model, c)
        assert noc(c, model) == brute_noc(model, c)
        assert cbo(c, model) == brute_cbo(model, c)
        assert response_set(c, model) == brute_response_set(model, c)
        assert lcom_components(c) == brute_lcom_components(c)
        assert lcom_percent(c) == pytest.approx(brute_lcom_percent(c), abs=1e-9)


def test_corpus_agrees_with_brute_force(corpus):
    _agree_with_brute_force(corpus)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_generated_models_agree_with_brute_force(seed):
    _agree_with_brute_force(random_model(random.Random(seed)))


# -- invariants -----------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_structural_invariants(seed):
    model = random_model(random.Random(seed), GeneratorConfig(classes=8))
    vectors = compute_metrics(model)
    with_parent = sum(1 for c in model.classes if c.parent in model)
    assert sum(v.noc for v in vectors.values()) == with_parent
    for c in model.classes:
        v = vectors[c.name]
        if c.parent in model:
            assert v.dit == vectors[c.parent].dit + 1
        assert (v.dit == 0) == (c.parent is None)
        if c.parent is None:
            assert v.rfc >= len(c.methods)
        assert v.lcom_components <= len(c.methods)
        assert 0 <= v.lcom_percent <= 100
        assert min(v.wmc, v.dit, v.noc, v.cbo, v.rfc, v.lcom_components) >= 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_metrics_invariant_under_class_reordering(seed, rnd):
    model = random_model(random.Random(seed))
    shuffled = list(model.classes)
    rnd.shuffle(shuffled)
    other = build_model(shuffled, external=model.external)
    assert compute_metrics(other) == compute_metrics(model)


@settings(max_examples=200)
@given(st.lists(st.frozensets(st.sampled_from("abc")), min_size=1, max_size=5))
def test_full_usage_means_zero_lcom_percent(uses):
    fields = sorted(set().union(*uses))
    c = ClassDef("C", fields=_fields(*fields), methods=tuple(
        MethodDef(f"m{i}", field_uses=frozenset(fields)) for i in range(len(uses))))
    if fields:
        assert lcom_components(c) == 1
    assert lcom_percent(c) == 0
