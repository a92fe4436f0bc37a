"""Finite skeletal categories given by explicit composition tables."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from .kernels import CompositionTable

EXHAUSTIVE_LIMIT = 5000
SAMPLE_SIZE = 100_000
SAMPLE_SEED = 0
MAX_FINDINGS_PER_CODE = 20


class CategoryError(ValueError):
    """Raised when category data cannot even be assembled (unknown names...)."""


class InvalidCategory(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(str(f) for f in report.findings[:5])
        super().__init__(f"invalid category: {lines}")


class NoFactorizationSystem(ValueError):
    def __init__(self, findings: Sequence["Finding"]):
        self.findings = tuple(findings)
        lines = "; ".join(str(f) for f in self.findings[:5])
        super().__init__(f"no epi-mono factorization system: {lines}")


@dataclass(frozen=True)
class Finding:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()
    mode: str = "exhaustive"

    @property
    def ok(self) -> bool:
        return not self.findings

    def __len__(self):
        return len(self.findings)

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}


@dataclass(frozen=True)
class FactorizationSystem:
    epi_class: frozenset[str]
    mono_class: frozenset[str]


class _Collector:
    """Accumulates findings, capping each code and summarising the overflow."""

    def __init__(self):
        self.items: list[Finding] = []
        self.counts: dict[str, int] = {}

    def add(self, code: str, detail: str) -> None:
        n = self.counts.get(code, 0)
        self.counts[code] = n + 1
        if n < MAX_FINDINGS_PER_CODE:
            self.items.append(Finding(code, detail))

    def result(self) -> tuple[Finding, ...]:
        out = list(self.items)
        for code, n in self.counts.items():
            if n > MAX_FINDINGS_PER_CODE:
                out.append(Finding(code, f"... and {n - MAX_FINDINGS_PER_CODE} more"))
        return tuple(out)


def _build_table(nobj: int, src: np.ndarray, dst: np.ndarray,
                 blocks: Mapping[tuple[int, int, int], np.ndarray]) -> CompositionTable:
    n = nobj
    total = len(src)
    keys = src.astype(np.int64) * n + dst
    order = np.argsort(keys, kind="stable")
    nhom = np.bincount(keys, minlength=n * n).astype(np.int64) if total else np.zeros(n * n, np.int64)
    homptr = np.zeros(n * n + 1, dtype=np.int64)
    np.cumsum(nhom, out=homptr[1:])
    homids = order.astype(np.int32)
    loc = np.empty(total, dtype=np.int32)
    loc[order] = (np.arange(total) - homptr[keys[order]]).astype(np.int32)

    sizes = np.zeros(n * n * n, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                sizes[(a * n + b) * n + c] = nhom[b * n + c] * nhom[a * n + b]
    boff = np.zeros(n * n * n, dtype=np.int64)
    if len(sizes) > 1:
        np.cumsum(sizes[:-1], out=boff[1:])
    table = np.full(int(sizes.sum()), -1, dtype=np.int32)
    for (a, b, c), blk in blocks.items():
        k = (a * n + b) * n + c
        blk = np.asarray(blk, dtype=np.int32)
        if blk.size != sizes[k]:
            raise CategoryError(f"composition block {(a, b, c)} has the wrong shape")
        table[boff[k]:boff[k] + sizes[k]] = blk.ravel()
    return CompositionTable(n, src.astype(np.int32), dst.astype(np.int32), loc,
                            nhom, homptr, homids, boff, table)


class FinCat:
    """A finite category with named objects and morphisms.

    ``compose`` maps ``(outer, inner)`` to the name of ``outer o inner`` and
    must include composites involving identities.  Data problems that do not
    prevent assembling the table (gaps, bad identities, non-associativity)
    are left for :func:`validate_category` to report.
    """

    def __init__(self, name: str, objects: Sequence[str],
                 morphisms: Sequence[tuple[str, str, str]],
                 identities: Mapping[str, str],
                 compose: Mapping[tuple[str, str], str]):
        obj_index = {o: i for i, o in enumerate(objects)}
        if len(obj_index) != len(objects):
            raise CategoryError("duplicate object labels")
        names = [m[0] for m in morphisms]
        index = {m: i for i, m in enumerate(names)}
        if len(index) != len(names):
            raise CategoryError("duplicate morphism names")
        try:
            src = np.array([obj_index[m[1]] for m in morphisms], dtype=np.int32)
            dst = np.array([obj_index[m[2]] for m in morphisms], dtype=np.int32)
        except KeyError as exc:
            raise CategoryError(f"morphism refers to unknown object {exc.args[0]!r}") from None
        ident = np.full(len(objects), -1, dtype=np.int64)
        for o, m in identities.items():
            if o not in obj_index or m not in index:
                raise CategoryError(f"identity {o!r} -> {m!r} refers to unknown data")
            ident[obj_index[o]] = index[m]

        n = len(objects)
        nhom = np.zeros((n, n), dtype=np.int64)
        loc = np.zeros(len(names), dtype=np.int64)
        for i in range(len(names)):
            loc[i] = nhom[src[i], dst[i]]
            nhom[src[i], dst[i]] += 1
        blocks: dict[tuple[int, int, int], np.ndarray] = {}
        extra: list[Finding] = []
        for (outer, inner), result in compose.items():
            for m in (outer, inner, result):
                if m not in index:
                    raise CategoryError(f"composition refers to unknown morphism {m!r}")
            g, f, r = index[outer], index[inner], index[result]
            if dst[f] != src[g]:
                extra.append(Finding("non-composable",
                                     f"composite given for non-composable pair {outer}|{inner}"))
                continue
            key = (int(src[f]), int(dst[f]), int(dst[g]))
            blk = blocks.get(key)
            if blk is None:
                blk = blocks[key] = np.full(
                    (nhom[key[1], key[2]], nhom[key[0], key[1]]), -1, dtype=np.int32)
            blk[loc[g], loc[f]] = r
        self._setup(name, objects, names, _build_table(n, src, dst, blocks), ident, extra)

    @classmethod
    def from_arrays(cls, name: str, objects: Sequence[str], names: Sequence[str],
                    src: np.ndarray, dst: np.ndarray, identities: Sequence[int],
                    blocks: Mapping[tuple[int, int, int], np.ndarray]) -> "FinCat":
        """Fast path for generators: ``blocks[(a, b, c)][loc g, loc f]`` holds the
        global id of ``g o f``, with morphisms of each hom-set in id order."""
        self = cls.__new__(cls)
        src = np.asarray(src, dtype=np.int32)
        dst = np.asarray(dst, dtype=np.int32)
        table = _build_table(len(objects), src, dst, blocks)
        self._setup(name, objects, names, table,
                    np.asarray(identities, dtype=np.int64), [])
        return self

    def _setup(self, name, objects, names, table, ident, extra):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(names)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        self._index = {m: i for i, m in enumerate(self.morphisms)}
        self.table = table
        self._ident = ident
        self._extra = tuple(extra)

    def __repr__(self):
        return f"FinCat({self.name!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __len__(self):
        return len(self.morphisms)

    # -- lookups --------------------------------------------------------

    def object_index(self, obj: str) -> int:
        try:
            return self._obj_index[obj]
        except KeyError:
            raise KeyError(f"unknown object {obj!r}") from None

    def morphism_id(self, f: str) -> int:
        try:
            return self._index[f]
        except KeyError:
            raise KeyError(f"unknown morphism {f!r}") from None

    def src(self, f: str) -> str:
        return self.objects[self.table.src[self.morphism_id(f)]]

    def dst(self, f: str) -> str:
        return self.objects[self.table.dst[self.morphism_id(f)]]

    def identity(self, obj: str) -> str | None:
        i = self._ident[self.object_index(obj)]
        return self.morphisms[i] if i >= 0 else None

    def hom_ids(self, a: int, b: int) -> np.ndarray:
        k = a * len(self.objects) + b
        t = self.table
        return t.homids[t.homptr[k]:t.homptr[k + 1]]

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        ids = self.hom_ids(self.object_index(a), self.object_index(b))
        return tuple(self.morphisms[i] for i in ids)

    def hom_count(self, a: str, b: str) -> int:
        n = len(self.objects)
        return int(self.table.nhom[self.object_index(a) * n + self.object_index(b)])

    def block(self, a: int, b: int, c: int) -> np.ndarray:
        """Composites ``g o f`` for ``f: a -> b``, ``g: b -> c``, indexed ``[g, f]``."""
        t, n = self.table, len(self.objects)
        rows, cols = t.nhom[b * n + c], t.nhom[a * n + b]
        start = t.boff[(a * n + b) * n + c]
        return t.table[start:start + rows * cols].reshape(rows, cols)

    def compose(self, outer: str, inner: str) -> str | None:
        g, f = self.morphism_id(outer), self.morphism_id(inner)
        t = self.table
        if t.dst[f] != t.src[g]:
            raise ValueError(f"{outer} o {inner} is not composable")
        r = self.block(t.src[f], t.dst[f], t.dst[g])[t.loc[g], t.loc[f]]
        return self.morphisms[r] if r >= 0 else None

    def composition_entries(self) -> Iterator[tuple[str, str, str | None]]:
        """Every composable ``(outer, inner, result)`` in a deterministic order."""
        n = len(self.objects)
        names = self.morphisms
        for a in range(n):
            for b in range(n):
                fs = self.hom_ids(a, b)
                if not len(fs):
                    continue
                for c in range(n):
                    gs = self.hom_ids(b, c)
                    if not len(gs):
                        continue
                    blk = self.block(a, b, c)
                    for gi, g in enumerate(gs):
                        for fi, f in enumerate(fs):
                            r = blk[gi, fi]
                            yield names[g], names[f], (names[r] if r >= 0 else None)

    # -- cached structure -----------------------------------------------

    @cached_property
    def report(self) -> "ValidationReport":
        return _validate(self)

    @cached_property
    def epi_mask(self) -> np.ndarray:
        self._require_sound()
        return kernels.epi_flags(self.table).astype(bool)

    @cached_property
    def mono_mask(self) -> np.ndarray:
        self._require_sound()
        return kernels.mono_flags(self.table).astype(bool)

    @cached_property
    def iso_mask(self) -> np.ndarray:
        self._require_sound()
        n = len(self.objects)
        iso = np.zeros(len(self.morphisms), dtype=bool)
        for a in range(n):
            for b in range(n):
                fs, gs = self.hom_ids(a, b), self.hom_ids(b, a)
                if not len(fs) or not len(gs):
                    continue
                left = self.block(a, b, a) == self._ident[a]    # [g, f]
                right = self.block(b, a, b) == self._ident[b]   # [f, g]
                iso[fs[(left & right.T).any(axis=0)]] = True
        return iso

    def _require_sound(self) -> None:
        # kernels index the table blindly; gaps or ill-typed entries would
        # read garbage
        bad = {"composition-gap", "ill-typed-composite", "non-composable", "missing-identity"}
        found = bad & _structural_codes(self)
        if found:
            raise InvalidCategory(ValidationReport(tuple(
                f for f in _structural_findings(self) if f.code in found)))


def _structural_findings(cat: FinCat) -> tuple[Finding, ...]:
    cached = cat.__dict__.get("_structural")
    if cached is not None:
        return cached
    col = _Collector()
    for f in cat._extra:
        col.add(f.code, f.detail)
    t, n, names = cat.table, len(cat.objects), cat.morphisms
    for a, obj in enumerate(cat.objects):
        i = cat._ident[a]
        if i < 0:
            col.add("missing-identity", f"no identity declared for {obj}")
        elif t.src[i] != a or t.dst[i] != a:
            col.add("missing-identity", f"identity of {obj} ({names[i]}) is not an endomorphism of {obj}")
    for a in range(n):
        for b in range(n):
            fs = cat.hom_ids(a, b)
            if not len(fs):
                continue
            for c in range(n):
                gs = cat.hom_ids(b, c)
                if not len(gs):
                    continue
                blk = cat.block(a, b, c)
                for gi, fi in np.argwhere(blk < 0):
                    col.add("composition-gap",
                            f"no composite given for {names[gs[gi]]}|{names[fs[fi]]}")
                ok = blk >= 0
                vals = blk[ok]
                typed = (t.src[vals] == a) & (t.dst[vals] == c)
                if not typed.all():
                    for gi, fi in np.argwhere(ok)[~typed]:
                        col.add("ill-typed-composite",
                                f"{names[gs[gi]]}|{names[fs[fi]]} = {names[blk[gi, fi]]} "
                                f"is not a morphism {cat.objects[a]} -> {cat.objects[c]}")
    out = col.result()
    cat.__dict__["_structural"] = out
    return out


def _structural_codes(cat: FinCat) -> set[str]:
    return {f.code for f in _structural_findings(cat)}


def _sample_triples(t: CompositionTable, size: int, seed: int):
    rng = np.random.default_rng(seed)
    total = t.size
    order = np.argsort(t.src, kind="stable")
    outdeg = np.bincount(t.src, minlength=t.nobj)
    outptr = np.concatenate([[0], np.cumsum(outdeg)])

    def step(prev):
        b = t.dst[prev]
        pick = outptr[b] + np.floor(rng.random(len(prev)) * outdeg[b]).astype(np.int64)
        return order[pick].astype(np.int64)

    f = rng.integers(0, total, size=size, dtype=np.int64)
    g = step(f)
    h = step(g)
    return f, g, h


def _validate(cat: FinCat) -> ValidationReport:
    col = _Collector()
    structural = _structural_findings(cat)
    for f in structural:
        col.items.append(f)
    t, n, names = cat.table, len(cat.objects), cat.morphisms
    total = len(names)
    mode = "exhaustive" if total <= EXHAUSTIVE_LIMIT else \
        f"sampled ({SAMPLE_SIZE} triples, seed {SAMPLE_SEED})"
    if structural:
        return ValidationReport(col.result(), mode)

    ident = cat._ident
    for a in range(n):
        for b in range(n):
            fs = cat.hom_ids(a, b)
            if not len(fs):
                continue
            # f o id_a == f
            right_unit = cat.block(a, a, b)[:, t.loc[ident[a]]]
            for i in np.flatnonzero(right_unit != fs):
                col.add("identity-law",
                        f"{names[fs[i]]} o id({cat.objects[a]}) != {names[fs[i]]}")
            # id_b o f == f
            left_unit = cat.block(a, b, b)[t.loc[ident[b]], :]
            for i in np.flatnonzero(left_unit != fs):
                col.add("identity-law",
                        f"id({cat.objects[b]}) o {names[fs[i]]} != {names[fs[i]]}")

    if total <= EXHAUSTIVE_LIMIT:
        bad = kernels.assoc_exhaustive(t)
        if bad is not None:
            h, g, f = bad
            col.add("associativity",
                    f"({names[h]} o {names[g]}) o {names[f]} != {names[h]} o ({names[g]} o {names[f]})")
    elif total:
        fa, ga, ha = _sample_triples(t, SAMPLE_SIZE, SAMPLE_SEED)
        i = kernels.assoc_sampled(t, fa, ga, ha)
        if i >= 0:
            col.add("associativity",
                    f"({names[ha[i]]} o {names[ga[i]]}) o {names[fa[i]]} != "
                    f"{names[ha[i]]} o ({names[ga[i]]} o {names[fa[i]]})")

    iso = cat.iso_mask
    for a in range(n):
        for b in range(a + 1, n):
            fs = cat.hom_ids(a, b)
            if len(fs) and iso[fs].any():
                f = fs[np.flatnonzero(iso[fs])[0]]
                col.add("non-skeletal",
                        f"{cat.objects[a]} and {cat.objects[b]} are isomorphic via {names[f]}")
    return ValidationReport(col.result(), mode)


def validate_category(cat: FinCat) -> ValidationReport:
    return cat.report


def require_valid(cat: FinCat) -> None:
    if not cat.report.ok:
        raise InvalidCategory(cat.report)


def is_epi(cat: FinCat, f: str) -> bool:
    return bool(cat.epi_mask[cat.morphism_id(f)])


def is_mono(cat: FinCat, f: str) -> bool:
    return bool(cat.mono_mask[cat.morphism_id(f)])


def is_iso(cat: FinCat, f: str) -> bool:
    return bool(cat.iso_mask[cat.morphism_id(f)])


def automorphisms(cat: FinCat, c: str) -> frozenset[str]:
    i = cat.object_index(c)
    ids = cat.hom_ids(i, i)
    return frozenset(cat.morphisms[j] for j in ids[cat.iso_mask[ids]])


def aut_orders(cat: FinCat) -> list[int]:
    """``|Aut(c)|`` for every object, in ``cat.objects`` order."""
    iso = cat.iso_mask
    return [int(iso[cat.hom_ids(i, i)].sum()) for i in range(len(cat.objects))]


def _class_mask(cat: FinCat, names: Iterable[str], label: str, col: _Collector) -> np.ndarray:
    mask = np.zeros(len(cat.morphisms), dtype=bool)
    for m in sorted(names):
        if m in cat._index:
            mask[cat._index[m]] = True
        else:
            col.add("unknown-morphism", f"{label} class names unknown morphism {m}")
    return mask


def verify_factorization_system(cat: FinCat, fs: FactorizationSystem) -> tuple[Finding, ...]:
    """Check every axiom of an epi-mono factorization system.

    Uniqueness up to isomorphism is decided by counting: once E is made of
    epimorphisms and contains the isomorphisms, ``Aut(b)`` acts freely on the
    factorizations of ``h`` through ``b``, so ``h`` factors uniquely exactly
    when all its factorizations pass through one object ``b`` and there are
    ``|Aut(b)|`` of them.
    """
    col = _Collector()
    require_valid(cat)
    names, objs = cat.morphisms, cat.objects
    emask = _class_mask(cat, fs.epi_class, "epi", col)
    mmask = _class_mask(cat, fs.mono_class, "mono", col)
    iso = cat.iso_mask
    t = cat.table

    for label, mask in (("epi", emask), ("mono", mmask)):
        for a, obj in enumerate(objs):
            if not mask[cat._ident[a]]:
                col.add("not-wide", f"{label} class misses the identity of {obj}")
        for i in np.flatnonzero(iso & ~mask):
            col.add("missing-iso", f"{label} class misses the isomorphism {names[i]}")
        bad = kernels.closure_violation(t, mask)
        if bad is not None:
            g, f = bad
            col.add("not-closed", f"{label} class not closed under composition: "
                                  f"{names[g]} o {names[f]} = {cat.compose(names[g], names[f])}")
    for i in np.flatnonzero(emask & ~cat.epi_mask):
        col.add("not-epi", f"{names[i]} is in the epi class but is not an epimorphism")
    for i in np.flatnonzero(mmask & ~cat.mono_mask):
        col.add("not-mono", f"{names[i]} is in the mono class but is not a monomorphism")
    auts = aut_orders(cat)
    for a, obj in enumerate(objs):
        endo = cat.hom_ids(a, a)
        for label, mask in (("E", emask), ("M", mmask)):
            if (mask[endo] != iso[endo]).any():
                col.add("aut-mismatch", f"{label}({obj},{obj}) differs from Aut({obj})")

    counts, middle = kernels.factor_counts(t, emask, mmask)
    for h in range(len(names)):
        b = middle[h]
        if b == -1:
            col.add("no-factorization",
                    f"{names[h]} has no factorization m o e with e in E, m in M")
        elif b == -2:
            col.add("non-unique-factorization",
                    f"{names[h]} factors through more than one object")
        elif counts[h] != auts[b]:
            col.add("non-unique-factorization",
                    f"{names[h]} has {counts[h]} factorizations through {objs[b]}, "
                    f"expected |Aut({objs[b]})| = {auts[b]}")
    return col.result()


def canonical_factorization_system(cat: FinCat) -> FactorizationSystem:
    require_valid(cat)
    fs = FactorizationSystem(
        frozenset(cat.morphisms[i] for i in np.flatnonzero(cat.epi_mask)),
        frozenset(cat.morphisms[i] for i in np.flatnonzero(cat.mono_mask)))
    findings = verify_factorization_system(cat, fs)
    if findings:
        raise NoFactorizationSystem(findings)
    return fs


def order_objects(cat: FinCat, fs: FactorizationSystem | None = None) -> list[str]:
    """Linear extension of "c before d when a non-iso epi d -> c exists".

    Ties (and any cycle, which a skeletal category with a factorization
    system does not produce) fall back to the input order.
    """
    n = len(cat.objects)
    if fs is None:
        emask = cat.epi_mask
    else:
        emask = np.zeros(len(cat.morphisms), dtype=bool)
        emask[[cat.morphism_id(m) for m in fs.epi_class]] = True
    t = cat.table
    edges = [set() for _ in range(n)]
    for i in np.flatnonzero(emask & ~cat.iso_mask):
        d, c = int(t.src[i]), int(t.dst[i])
        if c != d:
            edges[c].add(d)
    indeg = [0] * n
    for c in range(n):
        for d in edges[c]:
            indeg[d] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    out, seen = [], set()
    while heap:
        c = heapq.heappop(heap)
        out.append(c)
        seen.add(c)
        for d in edges[c]:
            indeg[d] -= 1
            if indeg[d] == 0:
                heapq.heappush(heap, d)
    out.extend(i for i in range(n) if i not in seen)
    return [cat.objects[i] for i in out]


def full_subcategory(cat: FinCat, objects: Iterable[str], name: str | None = None) -> FinCat:
    """The full subcategory on ``objects``; names of objects and morphisms are kept."""
    keep = sorted({cat.object_index(o) for o in objects})
    new_index = {old: new for new, old in enumerate(keep)}
    kept_ids = [i for i in range(len(cat.morphisms))
                if cat.table.src[i] in new_index and cat.table.dst[i] in new_index]
    remap = np.full(len(cat.morphisms), -1, dtype=np.int64)
    remap[kept_ids] = np.arange(len(kept_ids))
    src = np.array([new_index[cat.table.src[i]] for i in kept_ids], dtype=np.int32)
    dst = np.array([new_index[cat.table.dst[i]] for i in kept_ids], dtype=np.int32)
    blocks = {}
    for a in keep:
        for b in keep:
            if not len(cat.hom_ids(a, b)):
                continue
            for c in keep:
                if len(cat.hom_ids(b, c)):
                    blk = cat.block(a, b, c)
                    blocks[(new_index[a], new_index[b], new_index[c])] = np.where(
                        blk >= 0, remap[np.maximum(blk, 0)], -1)
    ident = [remap[cat._ident[a]] if cat._ident[a] >= 0 else -1 for a in keep]
    label = name or f"{cat.name}|{{{','.join(cat.objects[a] for a in keep)}}}"
    return FinCat.from_arrays(label, [cat.objects[a] for a in keep],
                              [cat.morphisms[i] for i in kept_ids], src, dst, ident, blocks)
