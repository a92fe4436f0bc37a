from __future__ import annotations

import itertools

import numpy as np
import pytest

from abring import (FactorizationSystem, FinCat, InvalidCategory, NoFactorizationSystem,
                    automorphisms, burnside_ring, canonical_factorization_system, gen_epi,
                    is_epi, is_iso, is_mono, order_objects, validate_category,
                    verify_factorization_system)
from abring.burnside import hom_matrix
from abring.fincat import CategoryError, full_subcategory


def function_category(sizes, surjective_only=False, name="Fun"):
    """Sets of the given sizes with all (or all surjective) maps, built by hand."""
    objects = [f"<{n}>" for n in sizes]
    morphisms, identities, maps = [], {}, {}
    for i, j in itertools.product(sizes, repeat=2):
        for images in itertools.product(range(j), repeat=i):
            if surjective_only and len(set(images)) != j:
                continue
            label = f"<{i}><{j}>" + "".join(map(str, images))
            morphisms.append((label, f"<{i}>", f"<{j}>"))
            maps[label] = images
            if i == j and images == tuple(range(i)):
                identities[f"<{i}>"] = label
    by_images = {(m[1], m[2], maps[m[0]]): m[0] for m in morphisms}
    compose = {}
    for g, gs, gd in morphisms:
        for f, fs, fd in morphisms:
            if fd == gs:
                images = tuple(maps[g][x] for x in maps[f])
                compose[(g, f)] = by_images[(fs, gd, images)]
    return FinCat(name, objects, morphisms, identities, compose)


def tiny(objects, morphisms, identities, compose, name="T"):
    return FinCat(name, objects, morphisms, identities, compose)


def one_object_monoid(elements, table, name="M"):
    """One object ``*``; ``table[(g, f)]`` gives ``g o f``; ``"1"`` is the identity."""
    morphisms = [(e, "*", "*") for e in elements]
    return FinCat(name, ["*"], morphisms, {"*": "1"}, table)


# -- validation -------------------------------------------------------------------

def test_builtin_categories_validate(epi_cats):
    for d in range(1, 7):
        rep = validate_category(epi_cats[d])
        assert rep.ok, list(rep)
    assert validate_category(epi_cats[5]).mode == "exhaustive"
    assert validate_category(epi_cats[6]).mode.startswith("sampled")


def test_composition_gap_reported():
    cat = tiny(["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")],
               {"a": "1a", "b": "1b"},
               {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1b", "f"): "f"})
    rep = validate_category(cat)
    assert not rep.ok
    assert "composition-gap" in rep.codes()
    assert any("f|1a" in f.detail for f in rep)
    with pytest.raises(InvalidCategory):
        burnside_ring(cat)


def test_identity_law_violation():
    cat = one_object_monoid(["1", "u"], {("1", "1"): "1", ("1", "u"): "1",
                                         ("u", "1"): "u", ("u", "u"): "u"})
    assert "identity-law" in validate_category(cat).codes()


def test_associativity_violation():
    # an order-3 magma with identity that is not associative
    tbl = {("1", "1"): "1", ("1", "a"): "a", ("1", "b"): "b",
           ("a", "1"): "a", ("a", "a"): "1", ("a", "b"): "1",
           ("b", "1"): "b", ("b", "a"): "1", ("b", "b"): "1"}
    cat = one_object_monoid(["1", "a", "b"], tbl)
    # (a a) b = b but a (a b) = a
    codes = validate_category(cat).codes()
    assert codes == {"associativity"}


def test_non_skeletal_category():
    compose = {("x", "y"): "1a", ("y", "x"): "1b"}
    for m, s, d in [("1a", "a", "a"), ("1b", "b", "b"), ("x", "b", "a"), ("y", "a", "b")]:
        compose[(m, "1" + s)] = m
        compose[("1" + d, m)] = m
    cat = tiny(["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("x", "b", "a"),
                            ("y", "a", "b")], {"a": "1a", "b": "1b"}, compose)
    rep = validate_category(cat)
    assert rep.codes() == {"non-skeletal"}


def test_unknown_data_is_rejected_at_construction():
    with pytest.raises(CategoryError):
        tiny(["a"], [("1a", "a", "zzz")], {"a": "1a"}, {})
    with pytest.raises(CategoryError):
        tiny(["a", "a"], [], {}, {})
    with pytest.raises(CategoryError):
        tiny(["a"], [("1a", "a", "a")], {"a": "1a"}, {("1a", "q"): "1a"})


def test_non_composable_composite_reported():
    cat = tiny(["a", "b"], [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")],
               {"a": "1a", "b": "1b"},
               {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1b", "f"): "f", ("f", "1a"): "f",
                ("f", "f"): "f"})
    assert "non-composable" in validate_category(cat).codes()


def test_empty_category():
    cat = tiny([], [], {}, {}, name="empty")
    assert validate_category(cat).ok
    ring = burnside_ring(cat)
    assert ring.rank == 0 and ring.idempotents() == []


def test_hand_built_epi_category_matches_generator():
    for d in (1, 2, 3, 4):
        hand = function_category(range(1, d + 1), surjective_only=True)
        assert validate_category(hand).ok
        assert hom_matrix(hand) == hom_matrix(gen_epi(d))


# -- epi / mono / iso ----------------------------------------------------------------

def test_epi2_classes(epi_cats):
    cat = epi_cats[2]
    f = "[2]->[1]:1,1"
    assert is_epi(cat, f)
    # both automorphisms of [2] have the same composite with f
    assert not is_mono(cat, f)
    assert cat.compose(f, "[2]->[2]:2,1") == cat.compose(f, "id:[2]") == f
    assert is_iso(cat, "[2]->[2]:2,1")
    assert len(automorphisms(cat, "[2]")) == 2


@pytest.mark.parametrize("d", range(1, 6))
def test_epi_category_classes(epi_cats, d):
    cat = epi_cats[d]
    for f in cat.morphisms:
        assert is_epi(cat, f)
        iso = cat.src(f) == cat.dst(f)
        assert is_mono(cat, f) == iso == is_iso(cat, f)
    for k in range(1, d + 1):
        assert len(automorphisms(cat, f"[{k}]")) == np.prod(range(1, k + 1))


def test_function_category_epi_mono_are_surj_inj():
    cat = function_category([2, 3])
    assert len(cat) <= 50
    assert validate_category(cat).ok
    for f in cat.morphisms:
        i, j = int(f[1]), int(f[4])
        images = [int(c) for c in f[6:]]
        assert is_epi(cat, f) == (len(set(images)) == j)
        assert is_mono(cat, f) == (len(set(images)) == i)
    assert not is_mono(cat, "<3><2>001")
    # constant maps cannot factor through a one-element set here
    with pytest.raises(NoFactorizationSystem) as exc:
        canonical_factorization_system(cat)
    assert str(exc.value).startswith("no epi-mono factorization system")
    assert any(f.code == "no-factorization" for f in exc.value.findings)


def test_full_function_category_has_factorization_system():
    cat = function_category([1, 2, 3])
    fs = canonical_factorization_system(cat)
    assert not verify_factorization_system(cat, fs)
    ring = burnside_ring(cat, fs)
    assert ring.rank == 3


def test_category_without_epis():
    # f: a -> b and a left-zero monoid {1b, u, v} on b
    mors = [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b"), ("u", "b", "b"),
            ("v", "b", "b")]
    compose = {("u", "v"): "u", ("v", "u"): "v", ("u", "u"): "u", ("v", "v"): "v",
               ("u", "f"): "f", ("v", "f"): "f"}
    for m, s, d in mors:
        compose[(m, "1" + s)] = m
        compose[("1" + d, m)] = m
    cat = tiny(["a", "b"], mors, {"a": "1a", "b": "1b"}, compose)
    assert validate_category(cat).ok
    assert not is_epi(cat, "f")
    assert not is_epi(cat, "u") and not is_mono(cat, "u")
    with pytest.raises(NoFactorizationSystem):
        canonical_factorization_system(cat)


def test_idempotent_monoid_has_no_factorization_system():
    cat = one_object_monoid(["1", "u"], {("1", "1"): "1", ("1", "u"): "u",
                                         ("u", "1"): "u", ("u", "u"): "u"})
    assert validate_category(cat).ok
    assert not is_epi(cat, "u") and not is_mono(cat, "u")
    with pytest.raises(NoFactorizationSystem):
        burnside_ring(cat)


# -- factorization systems --------------------------------------------------------------

def test_trivial_epi_class_fails_on_epi2(epi_cats):
    cat = epi_cats[2]
    ids = frozenset(cat.identity(o) for o in cat.objects)
    findings = verify_factorization_system(cat, FactorizationSystem(ids, frozenset(cat.morphisms)))
    codes = {f.code for f in findings}
    assert "missing-iso" in codes
    assert "not-mono" in codes


def test_unknown_names_in_classes(epi_cats):
    cat = epi_cats[2]
    fs = canonical_factorization_system(cat)
    bad = FactorizationSystem(fs.epi_class | {"nope"}, fs.mono_class)
    assert "unknown-morphism" in {f.code for f in verify_factorization_system(cat, bad)}


def test_canonical_fs_for_epi(epi_cats):
    for d in range(1, 7):
        cat = epi_cats[d]
        fs = canonical_factorization_system(cat)
        assert fs.epi_class == frozenset(cat.morphisms)
        assert len(fs.mono_class) == sum(np.prod(range(1, k + 1)) for k in range(1, d + 1))


# -- ordering and subcategories ------------------------------------------------------

def test_order_objects(epi_cats, orbit_cats):
    assert order_objects(epi_cats[4]) == ["[1]", "[2]", "[3]", "[4]"]
    assert order_objects(orbit_cats["C6"]) == ["C6/C6", "C6/C3", "C6/C2", "C6/C1"]
    rev = function_category([3, 2, 1], surjective_only=True)
    assert order_objects(rev) == ["<1>", "<2>", "<3>"]


def test_full_subcategory_keeps_names(epi_cats):
    sub = full_subcategory(epi_cats[4], ["[3]", "[1]"])
    assert sub.objects == ("[1]", "[3]")
    assert set(sub.morphisms) <= set(epi_cats[4].morphisms)
    assert sub.hom_count("[3]", "[1]") == 1 and sub.hom_count("[3]", "[3]") == 6
    assert validate_category(sub).ok
    f, g = "[3]->[1]:1,1,1", "[3]->[3]:2,3,1"
    assert sub.compose(f, g) == epi_cats[4].compose(f, g) == f
