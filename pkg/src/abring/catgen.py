"""Built-in categories: Epi<=d and orbit categories of finite groups."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from importlib.resources import files
from typing import Mapping, Sequence

import numpy as np

from .fincat import FinCat

MAX_GROUP_ORDER = 24


class GroupAxiomError(ValueError):
    pass


# -- Epi<=d -----------------------------------------------------------------

def epi_object(k: int) -> str:
    return f"[{k}]"


def surjections(i: int, j: int) -> np.ndarray:
    """All surjections ``[i] -> [j]`` as rows of images in ``0..j-1``, lexicographic."""
    if j > i or j < 1:
        return np.zeros((0, i), dtype=np.int64)
    maps = np.array(list(itertools.product(range(j), repeat=i)), dtype=np.int64).reshape(-1, i)
    hit = np.zeros((len(maps), j), dtype=bool)
    np.put_along_axis(hit, maps, True, axis=1)
    return maps[hit.all(axis=1)]


def _surj_name(i: int, j: int, images) -> str:
    if i == j and all(int(x) == k for k, x in enumerate(images)):
        return f"id:{epi_object(i)}"
    return f"{epi_object(i)}->{epi_object(j)}:" + ",".join(str(int(x) + 1) for x in images)


def gen_epi(d: int) -> FinCat:
    """The category of surjections between the sets ``[1], ..., [d]``."""
    if d < 1:
        raise ValueError("Epi<=d needs d >= 1")
    sizes = range(1, d + 1)
    tables = {(i, j): surjections(i, j) for i in sizes for j in sizes}
    names, src, dst = [], [], []
    offset: dict[tuple[int, int], int] = {}
    for i in sizes:
        for j in sizes:
            offset[(i, j)] = len(names)
            for row in tables[(i, j)]:
                names.append(_surj_name(i, j, row))
                src.append(i - 1)
                dst.append(j - 1)
    identities = [offset[(k, k)] for k in sizes]

    # code of a map [a] -> [c] is sum images[x] * c**x; codes index a lookup
    lookup = {}
    for (a, c), maps in tables.items():
        if len(maps):
            arr = np.full(c ** a, -1, dtype=np.int64)
            arr[maps @ (c ** np.arange(a))] = offset[(a, c)] + np.arange(len(maps))
            lookup[(a, c)] = arr
    blocks = {}
    for a in sizes:
        for b in range(1, a + 1):
            f = tables[(a, b)]
            for c in range(1, b + 1):
                g = tables[(b, c)]
                comp = g[:, f]                                # [g, f, x]
                codes = comp @ (c ** np.arange(a))
                blocks[(a - 1, b - 1, c - 1)] = lookup[(a, c)][codes]
    return FinCat.from_arrays(f"Epi<={d}", [epi_object(k) for k in sizes],
                              names, np.array(src), np.array(dst), identities, blocks)


# -- groups -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Group:
    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    name: str = "G"

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(row.index(e) for row in self.table)

    @cached_property
    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i))

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = self.table[x][i]
            k += 1
        return k

    @cached_property
    def is_cyclic(self) -> bool:
        return any(self.element_order(i) == self.order for i in range(self.order))


@dataclass(frozen=True, order=True)
class Subgroup:
    elements: tuple[int, ...]   # sorted element indices

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, i):
        return i in self._set

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.elements)


def group_from_cayley(table, elements: Sequence[str] | None = None, name: str = "G") -> Group:
    """Validate a Cayley table and build a :class:`Group`.

    ``table`` is either a square list of index rows or a mapping with keys
    ``"elements"`` and ``"table"`` as in the Cayley JSON file format.
    """
    if isinstance(table, Mapping):
        elements = table.get("elements", elements)
        name = table.get("name", name)
        table = table["table"]
    rows = [list(r) for r in table]
    n = len(rows)
    if n == 0:
        raise GroupAxiomError("empty table")
    if any(len(r) != n for r in rows):
        raise GroupAxiomError("table is not square")
    if elements is None:
        elements = [str(i) for i in range(n)]
    elements = tuple(str(e) for e in elements)
    if len(elements) != n:
        raise GroupAxiomError(f"{len(elements)} element labels for a table of size {n}")
    if len(set(elements)) != n:
        raise GroupAxiomError("duplicate element labels")
    full = set(range(n))
    for r in rows:
        for x in r:
            if not isinstance(x, (int, np.integer)) or isinstance(x, bool) or not 0 <= x < n:
                raise GroupAxiomError(f"entry {x!r} is not an element index")
    if any(set(r) != full for r in rows) or any({rows[i][j] for i in range(n)} != full
                                                for j in range(n)):
        raise GroupAxiomError("not a Latin square")
    ident = next((e for e in range(n)
                  if all(rows[e][x] == x and rows[x][e] == x for x in range(n))), None)
    if ident is None:
        raise GroupAxiomError("no identity element")
    for x in range(n):
        if not any(rows[x][y] == ident and rows[y][x] == ident for y in range(n)):
            raise GroupAxiomError(f"no inverse for element {elements[x]}")
    t = np.array(rows, dtype=np.int64)
    # (xy)z == x(yz) for all triples
    left = t[t, :]                   # left[x, y, z] = (xy)z
    right = t[:, t]                  # right[x, y, z] = x(yz)
    bad = np.argwhere(left != right)
    if bad.size:
        x, y, z = bad[0]
        raise GroupAxiomError(
            f"non-associative: ({elements[x]}*{elements[y]})*{elements[z]} != "
            f"{elements[x]}*({elements[y]}*{elements[z]})")
    return Group(elements, tuple(tuple(int(v) for v in r) for r in rows), ident, name)


def gen_cyclic(n: int) -> Group:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Group(tuple(str(i) for i in range(n)), tuple(map(tuple, table)), 0, f"C{n}")


def _closure(g: Group, gens) -> frozenset[int]:
    seen = {g.identity}
    frontier = [g.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.table[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _check_subgroup(g: Group, elems: frozenset[int]) -> None:
    if g.identity not in elems:
        raise AssertionError("subgroup misses the identity")
    for x in elems:
        if g.inverse[x] not in elems:
            raise AssertionError("subgroup not closed under inverses")
        for y in elems:
            if g.table[x][y] not in elems:
                raise AssertionError("subgroup not closed under products")


def _check_order(g: Group) -> None:
    if g.order > MAX_GROUP_ORDER:
        raise ValueError(f"group order {g.order} exceeds the cap of {MAX_GROUP_ORDER}")


def subgroups(g: Group) -> list[Subgroup]:
    """All subgroups, sorted by order and then by element indices.

    Starts from the cyclic subgroups and closes joins of known subgroups
    until nothing new appears; every subgroup is a join of cyclic ones.
    """
    _check_order(g)
    known = {_closure(g, [x]) for x in range(g.order)}
    frontier = set(known)
    while frontier:
        new = set()
        for h in frontier:
            for k in known:
                if h <= k or k <= h:
                    continue
                j = _closure(g, h | k)
                if j not in known:
                    new.add(j)
        known |= new
        frontier = new
    for h in known:
        _check_subgroup(g, h)
    return sorted((Subgroup(tuple(sorted(h))) for h in known),
                  key=lambda s: (s.order, s.elements))


def conjugate(g: Group, h: Subgroup, x: int) -> Subgroup:
    """``x^-1 H x``."""
    xi = g.inverse[x]
    return Subgroup(tuple(sorted({g.table[g.table[xi][y]][x] for y in h.elements})))


def conjugacy_classes_of_subgroups(g: Group) -> list[Subgroup]:
    """One representative per class: the lexicographically least member."""
    reps = []
    seen: set[Subgroup] = set()
    for h in subgroups(g):
        if h in seen:
            continue
        cls = {conjugate(g, h, x) for x in range(g.order)}
        seen |= cls
        reps.append(min(cls, key=lambda s: s.elements))
    return reps


def subgroup_label(g: Group, h: Subgroup) -> str:
    if g.is_cyclic:
        return f"C{h.order}"
    return "{" + ",".join(g.elements[i] for i in h.elements) + "}"


def gen_orbit_category(g: Group) -> FinCat:
    """Skeletal orbit category: one object ``G/H`` per conjugacy class.

    A morphism ``G/H -> G/K`` is a coset ``aK`` with ``a^-1 H a <= K``
    (``eH -> aK``), named by the least element index in the coset.  The
    composite of ``eH -> aK`` and ``eK -> bL`` is ``eH -> abL``.
    Objects are listed by decreasing subgroup order.
    """
    _check_order(g)
    reps = sorted(conjugacy_classes_of_subgroups(g), key=lambda s: (-s.order, s.elements))
    labels = [f"{g.name}/{subgroup_label(g, h)}" for h in reps]
    n = len(reps)
    # coset_rep[k][x] = least index in x K_k
    coset_rep = [[min(g.table[x][k] for k in h.elements) for x in range(g.order)] for h in reps]

    names, src, dst = [], [], []
    homs: dict[tuple[int, int], list[int]] = {}
    offset: dict[tuple[int, int], int] = {}
    for i, h in enumerate(reps):
        for j, k in enumerate(reps):
            cosets = sorted(set(coset_rep[j]))
            good = [a for a in cosets if all(y in k for y in conjugate(g, h, a).elements)]
            homs[(i, j)] = good
            offset[(i, j)] = len(names)
            for a in good:
                if i == j and a == coset_rep[j][g.identity]:
                    names.append(f"id:{labels[i]}")
                else:
                    names.append(f"{labels[i]}->{labels[j]}@{g.elements[a]}")
                src.append(i)
                dst.append(j)
    identities = [offset[(i, i)] + homs[(i, i)].index(coset_rep[i][g.identity]) for i in range(n)]

    blocks = {}
    for a_obj in range(n):
        for b_obj in range(n):
            fs = homs[(a_obj, b_obj)]
            if not fs:
                continue
            for c_obj in range(n):
                gs = homs[(b_obj, c_obj)]
                if not gs:
                    continue
                target = {rep: offset[(a_obj, c_obj)] + idx
                          for idx, rep in enumerate(homs[(a_obj, c_obj)])}
                blk = np.empty((len(gs), len(fs)), dtype=np.int64)
                for gi, b in enumerate(gs):
                    for fi, a in enumerate(fs):
                        blk[gi, fi] = target[coset_rep[c_obj][g.table[a][b]]]
                blocks[(a_obj, b_obj, c_obj)] = blk
    return FinCat.from_arrays(f"Orb({g.name})", labels, names, np.array(src, dtype=np.int64),
                              np.array(dst, dtype=np.int64), identities, blocks)


def load_group(name: str) -> Group:
    """A bundled Cayley table: ``"s3"`` or ``"d4"``."""
    data = json.loads(files("abring.data").joinpath(f"{name.lower()}.json").read_text())
    return group_from_cayley(data)
