"""The compiled kernels and the numpy fallback must agree exactly."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from abring import kernels
from abring.fincat import _sample_triples

py = kernels.get_backend("python")
cy = kernels.BACKENDS.get("cython")
needs_cython = pytest.mark.skipif(cy is None, reason="compiled extension not built")


def _cats(epi_cats, orbit_cats):
    return [epi_cats[d] for d in (1, 2, 3, 4, 5)] + \
        [orbit_cats[k] for k in ("C6", "C12", "S3", "D4")]


def corrupt(t, rng, count):
    """Swap ``count`` composites for other morphisms of the same hom-set."""
    table = t.table.copy()
    n = t.nobj
    for _ in range(count):
        pos = int(rng.integers(len(table)))
        old = int(table[pos])
        a, c = int(t.src[old]), int(t.dst[old])
        start, stop = t.homptr[a * n + c], t.homptr[a * n + c + 1]
        table[pos] = t.homids[rng.integers(start, stop)]
    return dataclasses.replace(t, table=table)


def masks(cat):
    return cat.epi_mask.copy(), cat.mono_mask.copy()


def test_backend_selection():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.get_backend() is kernels.BACKENDS[kernels.BACKEND]


def test_python_flags_match_brute_force(epi_cats):
    cat = epi_cats[3]
    t = cat.table
    epi = py.epi_flags(t)
    mono = py.mono_flags(t)
    for i, f in enumerate(cat.morphisms):
        b = cat.dst(f)
        assert epi[i] == all(len({cat.compose(g, f) for g in cat.hom(b, c)}) == cat.hom_count(b, c)
                             for c in cat.objects)
        a = cat.src(f)
        assert mono[i] == all(len({cat.compose(f, g) for g in cat.hom(z, a)}) == cat.hom_count(z, a)
                              for z in cat.objects)


@needs_cython
def test_backends_agree_on_builtins(epi_cats, orbit_cats):
    for cat in _cats(epi_cats, orbit_cats):
        t = cat.table
        assert py.assoc_exhaustive(t) is None and cy.assoc_exhaustive(t) is None
        assert np.array_equal(py.epi_flags(t), cy.epi_flags(t))
        assert np.array_equal(py.mono_flags(t), cy.mono_flags(t))
        e, m = masks(cat)
        pc, pm = py.factor_counts(t, e, m)
        cc, cm = cy.factor_counts(t, e, m)
        assert np.array_equal(pc, cc) and np.array_equal(pm, cm)
        for mask in (e, m, np.ones_like(e), ~m):
            assert py.closure_violation(t, mask) == cy.closure_violation(t, mask)


@needs_cython
def test_compose_many_agree(epi_cats):
    t = epi_cats[5].table
    f, g, _ = _sample_triples(t, 5000, 1)
    assert np.array_equal(py.compose_many(t, g, f), cy.compose_many(t, g, f))


@needs_cython
@pytest.mark.parametrize("seed", range(8))
def test_backends_agree_on_corrupted_tables(epi_cats, orbit_cats, seed):
    rng = np.random.default_rng(seed)
    for cat in _cats(epi_cats, orbit_cats)[1:]:
        t = corrupt(cat.table, rng, 1 + seed % 3)
        assert py.assoc_exhaustive(t) == cy.assoc_exhaustive(t)
        f, g, h = _sample_triples(t, 2000, seed)
        assert py.assoc_sampled(t, f, g, h) == cy.assoc_sampled(t, f, g, h)
        assert np.array_equal(py.epi_flags(t), cy.epi_flags(t))
        assert np.array_equal(py.mono_flags(t), cy.mono_flags(t))
        e, m = masks(cat)
        pc, pm = py.factor_counts(t, e, m)
        cc, cm = cy.factor_counts(t, e, m)
        assert np.array_equal(pc, cc) and np.array_equal(pm, cm)
        assert py.closure_violation(t, m) == cy.closure_violation(t, m)


def test_corruption_is_detected(epi_cats):
    rng = np.random.default_rng(3)
    t = epi_cats[4].table
    hits = sum(py.assoc_exhaustive(corrupt(t, rng, 5)) is not None for _ in range(10))
    assert hits > 0


def test_sampled_check_finds_violation_reported_exhaustively(epi_cats):
    rng = np.random.default_rng(11)
    t = corrupt(epi_cats[4].table, rng, 40)
    h, g, f = py.assoc_exhaustive(t)
    i = py.assoc_sampled(t, np.array([f]), np.array([g]), np.array([h]))
    assert i == 0
