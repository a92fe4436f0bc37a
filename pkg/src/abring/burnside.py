"""Rational Burnside rings of finite skeletal categories.

The ring ``A(C)`` has one basis element per object.  The marks map sends an
object ``d`` to the vector ``(|C(c, d)|)_c``; it is represented by the
hom-set matrix ``H`` (rows ``c``, columns ``d``) and, when ``C`` carries an
epi-mono factorization system, it is invertible and the ring structure is
the componentwise one pulled back along it.  The idempotent ``e_d`` is
column ``d`` of ``H^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .fincat import (FactorizationSystem, FinCat, Finding, NoFactorizationSystem,
                     aut_orders, canonical_factorization_system, full_subcategory,
                     order_objects, require_valid, verify_factorization_system)
from .ratmat import (RatMatrix, format_rational, mat_inverse, mat_mul, mat_solve,
                     mat_vec, nullspace, to_rational)


class ForeignSupport(ValueError):
    pass


class NotAFunctor(ValueError):
    def __init__(self, findings: Sequence[Finding]):
        self.findings = tuple(findings)
        super().__init__("not a functor: " + "; ".join(str(f) for f in self.findings[:5]))


class RingElement:
    """A finitely supported rational combination of objects.

    Zero coefficients are dropped, so equality is coefficientwise.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        out: dict[str, Fraction] = {}
        for obj, v in items:
            q = out.get(obj, Fraction(0)) + to_rational(v)
            if q:
                out[obj] = q
            else:
                out.pop(obj, None)
        self._coeffs = out

    def coefficient(self, obj: str) -> Fraction:
        return self._coeffs.get(obj, Fraction(0))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(list(self.items()) + list(other.items()))

    def __neg__(self) -> "RingElement":
        return RingElement({k: -v for k, v in self.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, scalar) -> "RingElement":
        if isinstance(scalar, RingElement):
            raise TypeError("multiply ring elements with BurnsideRing.multiply")
        q = to_rational(scalar)
        return RingElement({k: q * v for k, v in self.items()})

    __rmul__ = __mul__

    def format(self, order: Sequence[str] | None = None) -> str:
        keys = [k for k in order if k in self._coeffs] if order is not None else list(self._coeffs)
        if not keys:
            return "0"
        parts = []
        for k in keys:
            q = self._coeffs[k]
            mag = abs(q)
            term = k if mag == 1 else f"{format_rational(mag)}*{k}"
            if not parts:
                parts.append(term if q > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if q > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self):
        return f"RingElement({self.format()})"


def _resolve_fs(cat: FinCat, fs: FactorizationSystem | None) -> FactorizationSystem:
    if fs is None:
        return canonical_factorization_system(cat)
    findings = verify_factorization_system(cat, fs)
    if findings:
        raise NoFactorizationSystem(findings)
    return fs


def hom_matrix(cat: FinCat, order: Sequence[str] | None = None) -> RatMatrix:
    require_valid(cat)
    if order is None:
        order = order_objects(cat)
    return RatMatrix.from_rows([[cat.hom_count(c, d) for d in order] for c in order],
                               cols=len(order))


def eam_matrices(cat: FinCat, fs: FactorizationSystem | None = None,
                 order: Sequence[str] | None = None) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    """Epimorphism, automorphism and monomorphism matrices in ``order``."""
    require_valid(cat)
    fs = _resolve_fs(cat, fs)
    if order is None:
        order = order_objects(cat, fs)
    idx = [cat.object_index(o) for o in order]
    aut = aut_orders(cat)
    emask = np.zeros(len(cat), dtype=bool)
    emask[[cat.morphism_id(m) for m in fs.epi_class]] = True
    mmask = np.zeros(len(cat), dtype=bool)
    mmask[[cat.morphism_id(m) for m in fs.mono_class]] = True

    def count(mask, a, b):
        return int(mask[cat.hom_ids(a, b)].sum())

    n = len(order)
    e = RatMatrix.from_rows([[Fraction(count(emask, c, d), aut[d]) for d in idx] for c in idx], cols=n)
    m = RatMatrix.from_rows([[Fraction(count(mmask, c, d), aut[c]) for d in idx] for c in idx], cols=n)
    a = RatMatrix.diagonal([aut[c] for c in idx])
    return e, a, m


def check_eam(cat: FinCat, fs: FactorizationSystem | None = None) -> bool:
    fs = _resolve_fs(cat, fs)
    order = order_objects(cat, fs)
    e, a, m = eam_matrices(cat, fs, order)
    return mat_mul(mat_mul(e, a), m) == hom_matrix(cat, order)


class BurnsideRing:
    """``A(C)`` with its marks map, unit and complete set of idempotents."""

    def __init__(self, category: FinCat, factorization: FactorizationSystem,
                 basis: Sequence[str]):
        self.category = category
        self.factorization = factorization
        self.basis = tuple(basis)
        self._pos = {o: i for i, o in enumerate(self.basis)}
        self.H = hom_matrix(category, self.basis)
        self.H_inv = mat_inverse(self.H)
        n = len(self.basis)
        self.unit = self.from_coordinates(mat_solve(self.H, [1] * n))
        self.idempotent_list = tuple(self.from_coordinates(self.H_inv.col(j)) for j in range(n))

    def __repr__(self):
        return f"BurnsideRing({self.category.name!r}, basis={list(self.basis)})"

    @property
    def rank(self) -> int:
        return len(self.basis)

    def element(self, coeffs: Mapping[str, object]) -> RingElement:
        x = RingElement(coeffs)
        self._check_support(x)
        return x

    def basis_element(self, obj: str) -> RingElement:
        return self.element({obj: 1})

    def zero(self) -> RingElement:
        return RingElement()

    def _check_support(self, x: RingElement) -> None:
        foreign = x.support - self._pos.keys()
        if foreign:
            raise ForeignSupport(f"{sorted(foreign)} not in the basis of {self.category.name}")

    def coordinates(self, x: RingElement) -> list[Fraction]:
        self._check_support(x)
        return [x.coefficient(o) for o in self.basis]

    def from_coordinates(self, vec: Sequence) -> RingElement:
        if len(vec) != len(self.basis):
            raise ValueError("coordinate vector has the wrong length")
        return RingElement(zip(self.basis, vec))

    def phi(self, x: RingElement) -> list[Fraction]:
        """Marks of ``x``: the vector ``H x``."""
        return mat_vec(self.H, self.coordinates(x))

    def phi_inverse(self, marks: Sequence) -> RingElement:
        return self.from_coordinates(mat_vec(self.H_inv, list(marks)))

    def multiply(self, x: RingElement, y: RingElement) -> RingElement:
        return self.phi_inverse([p * q for p, q in zip(self.phi(x), self.phi(y))])

    def structure_constants(self) -> dict[tuple[str, str], RingElement]:
        """``b_i * b_j`` expanded in the basis, for ``i <= j`` in basis order."""
        marks = [self.H.col(j) for j in range(self.rank)]
        out = {}
        for i, a in enumerate(self.basis):
            for j in range(i, self.rank):
                prod = [p * q for p, q in zip(marks[i], marks[j])]
                out[(a, self.basis[j])] = self.phi_inverse(prod)
        return out

    def idempotents(self) -> list[RingElement]:
        return list(self.idempotent_list)

    def idempotent(self, obj: str) -> RingElement:
        return self.idempotent_list[self._pos[obj]]


def burnside_ring(cat: FinCat, fs: FactorizationSystem | None = None) -> BurnsideRing:
    """Build ``A(C)``; refuses categories without an epi-mono factorization system."""
    require_valid(cat)
    fs = _resolve_fs(cat, fs)
    return BurnsideRing(cat, fs, order_objects(cat, fs))


# -- functors and restriction ---------------------------------------------------

def validate_functor(source: FinCat, target: FinCat, object_map: Mapping[str, str],
                     morphism_map: Mapping[str, str]) -> tuple[Finding, ...]:
    found: list[Finding] = []
    for o in source.objects:
        if o not in object_map:
            found.append(Finding("objects", f"object {o} is not mapped"))
        elif object_map[o] not in target.objects:
            found.append(Finding("objects", f"{o} maps to unknown object {object_map[o]}"))
    for m in source.morphisms:
        if m not in morphism_map:
            found.append(Finding("morphisms", f"morphism {m} is not mapped"))
        elif morphism_map[m] not in target.morphisms:
            found.append(Finding("morphisms", f"{m} maps to unknown morphism {morphism_map[m]}"))
    if found:
        return tuple(found)
    fmap = np.array([target.morphism_id(morphism_map[m]) for m in source.morphisms], dtype=np.int64)
    omap = np.array([target.object_index(object_map[o]) for o in source.objects], dtype=np.int64)
    s, t = source.table, target.table
    bad_type = np.flatnonzero((t.src[fmap] != omap[s.src]) | (t.dst[fmap] != omap[s.dst]))
    for i in bad_type[:20]:
        found.append(Finding("source-target",
                             f"{source.morphisms[i]} maps to {morphism_map[source.morphisms[i]]} "
                             "with the wrong source or target"))
    if found:
        return tuple(found)
    for o in source.objects:
        if morphism_map[source.identity(o)] != target.identity(object_map[o]):
            found.append(Finding("identities", f"identity of {o} is not sent to an identity"))
    n = len(source.objects)
    for a in range(n):
        for b in range(n):
            fs = source.hom_ids(a, b)
            if not len(fs):
                continue
            for c in range(n):
                gs = source.hom_ids(b, c)
                if not len(gs):
                    continue
                gg, ff = np.meshgrid(gs, fs, indexing="ij")
                lhs = fmap[source.block(a, b, c)]
                rhs = kernels.compose_many(t, fmap[gg].ravel(), fmap[ff].ravel()).reshape(lhs.shape)
                for gi, fi in np.argwhere(lhs != rhs)[:1]:
                    g_, f_ = source.morphisms[gs[gi]], source.morphisms[fs[fi]]
                    found.append(Finding("composition",
                                         f"F({g_} o {f_}) != F({g_}) o F({f_})"))
                    return tuple(found)
    return tuple(found)


@dataclass(frozen=True)
class RingMap:
    """``f^*: A(D) -> A(C)`` induced by a functor ``f: C -> D``.

    ``matrix`` has one row per basis object of ``C`` and one column per basis
    object of ``D``; column ``d`` holds the coordinates of ``f^*(d)``.
    """

    source_ring: BurnsideRing   # A(C)
    target_ring: BurnsideRing   # A(D)
    object_map: Mapping[str, str]
    matrix: RatMatrix

    def __call__(self, x: RingElement) -> RingElement:
        return self.source_ring.from_coordinates(
            mat_vec(self.matrix, self.target_ring.coordinates(x)))

    def pull_marks(self, marks: Sequence) -> list[Fraction]:
        """Precomposition ``Q^D -> Q^C``: ``(v_d)_d -> (v_{f(c)})_c``."""
        pos = {o: i for i, o in enumerate(self.target_ring.basis)}
        return [to_rational(marks[pos[self.object_map[c]]]) for c in self.source_ring.basis]


def restriction_map(source: FinCat, target: FinCat, object_map: Mapping[str, str],
                    morphism_map: Mapping[str, str], *,
                    source_ring: BurnsideRing | None = None,
                    target_ring: BurnsideRing | None = None) -> RingMap:
    findings = validate_functor(source, target, object_map, morphism_map)
    if findings:
        raise NotAFunctor(findings)
    rc = source_ring or burnside_ring(source)
    rd = target_ring or burnside_ring(target)
    # column d: marks (|D(f(c), d)|)_c, pulled back through H_C^-1
    marks = RatMatrix.from_rows([[target.hom_count(object_map[c], d) for d in rd.basis]
                                 for c in rc.basis], cols=rd.rank)
    return RingMap(rc, rd, dict(object_map), mat_mul(rc.H_inv, marks))


def identity_functor(cat: FinCat) -> tuple[dict[str, str], dict[str, str]]:
    return {o: o for o in cat.objects}, {m: m for m in cat.morphisms}


@dataclass(frozen=True)
class KernelResult:
    """Kernel of the restriction ``A(D) -> A(C)`` to a full subcategory."""

    hypothesis_holds: bool
    offending_morphism: str | None
    kind: str                       # "structural" or "generic"
    basis: tuple[RingElement, ...]
    ring_map: RingMap = field(repr=False)


def inclusion_kernel(cat: FinCat, sub_objects: Iterable[str], *,
                     ring: BurnsideRing | None = None) -> KernelResult:
    """Kernel of ``i^*`` for the full subcategory on ``sub_objects``.

    When no morphism runs from a chosen object to an omitted one, the
    kernel is spanned by the omitted objects.  Otherwise the kernel is
    computed by exact elimination and marked ``"generic"``.
    """
    sub = set(sub_objects)
    for o in sub:
        cat.object_index(o)
    rd = ring or burnside_ring(cat)
    inner = full_subcategory(cat, [o for o in cat.objects if o in sub])
    omap, mmap = identity_functor(inner)
    rmap = restriction_map(inner, cat, omap, mmap, target_ring=rd)

    offending = None
    for c in rd.basis:
        if c not in sub:
            continue
        for d in rd.basis:
            if d not in sub and cat.hom_count(c, d):
                offending = cat.hom(c, d)[0]
                break
        if offending:
            break
    if offending is None:
        basis = tuple(rd.basis_element(d) for d in rd.basis if d not in sub)
        return KernelResult(True, None, "structural", basis, rmap)
    basis = tuple(rd.from_coordinates(v) for v in nullspace(rmap.matrix))
    return KernelResult(False, offending, "generic", basis, rmap)
