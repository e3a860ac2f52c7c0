"""Free bigraded-commutative differential graded algebras over Q(i).

Generators carry a bidegree (n, parity).  Two homogeneous elements commute up
to the sign (-1)^(n1*n2 + p1*p2), so a generator squares to zero exactly when
n + p is odd.  Monomials are tuples of (generator id, exponent) pairs sorted
by id; an Element maps monomials to nonzero Gaussian rationals.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .errors import (CapTooSmall, DegreeMismatch, InvalidName, NameCollision,
                     NotSquareZero, TableMismatch)
from .linsolve import solve_sparse
from .report import ReportEntry, entry
from .scalars import ONE, ZERO, GaussianRational

Monomial = tuple  # tuple[tuple[int, int], ...]
UNIT: Monomial = ()

RESERVED = frozenset({"algebra", "gen", "d", "i", "even", "odd", "element",
                      "cocycle", "morphism", "in", "curved"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Bidegree(NamedTuple):
    n: int
    odd: bool = False

    @property
    def exterior(self) -> bool:
        return (self.n + self.odd) % 2 == 1

    def __add__(self, other):  # type: ignore[override]
        return Bidegree(self.n + other.n, self.odd != other.odd)

    def __str__(self):
        return f"({self.n},{'odd' if self.odd else 'even'})"


EVEN1 = Bidegree(1, False)
SHIFT_D = Bidegree(1, False)
SHIFT_S = Bidegree(-1, False)
UNIT_DEGREE = Bidegree(0, False)


def koszul_sign(a: Bidegree, b: Bidegree) -> int:
    return -1 if (a.n * b.n + a.odd * b.odd) % 2 else 1


@dataclass(frozen=True)
class GeneratorDecl:
    id: int
    name: str
    bidegree: Bidegree


def check_name(name: str) -> None:
    if not isinstance(name, str) or not _IDENT.match(name) or name in RESERVED:
        raise InvalidName(f"invalid generator name {name!r}")


class GeneratorTable:
    """Ordered generator declarations.  Tables compare by content."""

    __slots__ = ("decls", "index", "key", "_npar", "_spar", "_ext", "_hash")

    def __init__(self, decls: Iterable[tuple[str, Bidegree]]):
        out = []
        index = {}
        for i, (name, bd) in enumerate(decls):
            check_name(name)
            if name in index:
                raise NameCollision(f"generator {name!r} declared twice")
            bd = Bidegree(int(bd[0]), bool(bd[1]))
            index[name] = i
            out.append(GeneratorDecl(i, name, bd))
        self.decls = tuple(out)
        self.index = index
        self.key = tuple((g.name, g.bidegree.n, g.bidegree.odd) for g in out)
        self._npar = tuple(g.bidegree.n & 1 for g in out)
        self._spar = tuple(int(g.bidegree.odd) for g in out)
        self._ext = tuple(g.bidegree.exterior for g in out)
        self._hash = hash(self.key)

    def __len__(self):
        return len(self.decls)

    def __eq__(self, other):
        return self is other or (isinstance(other, GeneratorTable) and self.key == other.key)

    def __hash__(self):
        return self._hash

    def names(self) -> list[str]:
        return [g.name for g in self.decls]

    def id_of(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"no generator named {name!r}") from None

    def extend(self, decls: Iterable[tuple[str, Bidegree]]) -> "GeneratorTable":
        return GeneratorTable([(g.name, g.bidegree) for g in self.decls] + list(decls))

    def bidegree_of(self, mono: Monomial) -> Bidegree:
        n = 0
        p = 0
        for g, e in mono:
            bd = self.decls[g].bidegree
            n += bd.n * e
            p += bd.odd * e
        return Bidegree(n, bool(p & 1))

    def mono_mul(self, a: Monomial, b: Monomial):
        """Return (negate?, a*b) in canonical order, or None when the product vanishes."""
        if not a:
            return False, b
        if not b:
            return False, a
        npar, spar = self._npar, self._spar
        la = len(a)
        # suffix parities of a: sn[i] = sum_{k>=i} e_k*n_k mod 2
        sn = [0] * (la + 1)
        ss = [0] * (la + 1)
        for k in range(la - 1, -1, -1):
            g, e = a[k]
            sn[k] = (sn[k + 1] + e * npar[g]) & 1
            ss[k] = (ss[k + 1] + e * spar[g]) & 1
        out = []
        sign = 0
        i = 0
        ext = self._ext
        for y, ey in b:
            while i < la and a[i][0] < y:
                out.append(a[i])
                i += 1
            if i < la and a[i][0] == y:
                if ext[y]:
                    return None
                if ey & 1:
                    sign += npar[y] * sn[i + 1] + spar[y] * ss[i + 1]
                out.append((y, a[i][1] + ey))
                i += 1
            else:
                if ey & 1:
                    sign += npar[y] * sn[i] + spar[y] * ss[i]
                out.append((y, ey))
        if i < la:
            out.extend(a[i:])
        return bool(sign & 1), tuple(out)

    def mono_text(self, mono: Monomial) -> str:
        if not mono:
            return "1"
        parts = []
        for g, e in mono:
            name = self.decls[g].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def _gr(c) -> GaussianRational:
    return c if isinstance(c, GaussianRational) else GaussianRational(c)


class Element:
    """A sparse exact linear combination of canonical monomials."""

    __slots__ = ("table", "terms")

    def __init__(self, table: GeneratorTable, terms: Optional[Mapping[Monomial, GaussianRational]] = None):
        self.table = table
        if terms is None:
            self.terms = {}
        else:
            self.terms = {m: _gr(c) for m, c in terms.items() if c}

    @classmethod
    def _trusted(cls, table, terms: dict) -> "Element":
        obj = object.__new__(cls)
        obj.table = table
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, table) -> "Element":
        return cls._trusted(table, {})

    @classmethod
    def scalar(cls, table, c) -> "Element":
        c = _gr(c)
        return cls._trusted(table, {UNIT: c} if c else {})

    @classmethod
    def generator(cls, table, gen: Union[str, int]) -> "Element":
        gid = table.id_of(gen) if isinstance(gen, str) else gen
        return cls._trusted(table, {((gid, 1),): ONE})

    @classmethod
    def monomial(cls, table, mono: Monomial, c=ONE) -> "Element":
        c = _gr(c)
        return cls._trusted(table, {tuple(mono): c} if c else {})

    # --- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[Monomial, GaussianRational]]:
        return sorted(self.terms.items())

    def bidegree(self):
        """Common bidegree of all terms, None for zero, or the string 'mixed'."""
        seen = None
        for m in self.terms:
            bd = self.table.bidegree_of(m)
            if seen is None:
                seen = bd
            elif bd != seen:
                return "mixed"
        return seen

    def unit_coefficient(self) -> GaussianRational:
        return self.terms.get(UNIT, ZERO)

    def coefficient(self, mono: Monomial) -> GaussianRational:
        return self.terms.get(tuple(mono), ZERO)

    def generators_used(self) -> set[int]:
        return {g for m in self.terms for g, _ in m}

    def by_degree(self) -> dict[int, "Element"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(self.table.bidegree_of(m).n, {})[m] = c
        return {n: Element._trusted(self.table, t) for n, t in sorted(out.items())}

    def degree_part(self, n: int) -> "Element":
        return Element._trusted(self.table, {m: c for m, c in self.terms.items()
                                             if self.table.bidegree_of(m).n == n})

    def first_term(self) -> Optional["Element"]:
        if not self.terms:
            return None
        m = min(self.terms)
        return Element._trusted(self.table, {m: self.terms[m]})

    # --- arithmetic -------------------------------------------------------
    def _check(self, other: "Element"):
        if self.table is not other.table and self.table != other.table:
            raise TableMismatch("elements live over different generator tables")

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(self.table, other)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            old = terms.get(m)
            if old is None:
                terms[m] = c
            else:
                s = old + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return Element._trusted(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return Element._trusted(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = Element.scalar(self.table, other)
        return self + (-other)

    def __rsub__(self, other):
        return Element.scalar(self.table, other) - self

    def scale(self, c) -> "Element":
        c = _gr(c)
        if not c:
            return Element.zero(self.table)
        return Element._trusted(self.table, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        return _multiply(self.table, self.terms, other.terms)

    def __rmul__(self, other):
        if isinstance(other, Element):
            return other.__mul__(self)
        return self.scale(other)

    def __pow__(self, k: int):
        out = Element.scalar(self.table, ONE)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return (self.table is other.table or self.table == other.table) and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None  # mutable-looking container semantics; compare by value only

    def to(self, table: GeneratorTable, renaming: Optional[Mapping[str, str]] = None) -> "Element":
        """Re-express over another table by generator name, optionally renaming some generators."""
        if not renaming and (table is self.table or table == self.table):
            return Element._trusted(table, self.terms)
        renaming = renaming or {}
        used = sorted(self.generators_used())
        ids = {}
        for g in used:
            decl = self.table.decls[g]
            tid = table.id_of(renaming.get(decl.name, decl.name))
            if table.decls[tid].bidegree != decl.bidegree:
                raise TableMismatch(f"generator {decl.name} has a different bidegree in the target table")
            ids[g] = tid
        mapped = [ids[g] for g in used]
        if mapped == sorted(mapped):
            # order preserving: canonical monomials stay canonical, no signs
            return Element._trusted(table, {tuple((ids[g], e) for g, e in m): c for m, c in self.terms.items()})
        acc: dict = {}
        mul = table.mono_mul
        for m, c in self.terms.items():
            neg, cur = False, ()
            for g, e in m:
                r = mul(cur, ((ids[g], e),))
                if r is None:
                    break
                neg ^= r[0]
                cur = r[1]
            else:
                w = -c if neg else c
                old = acc.get(cur)
                acc[cur] = w if old is None else old + w
        return Element._trusted(table, {k: v for k, v in acc.items() if v})

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mt = self.table.mono_text(m)
            if not m:
                parts.append(c.to_text())
            elif c == ONE:
                parts.append(mt)
            elif c == -ONE:
                parts.append("-" + mt)
            else:
                parts.append(f"{c.to_text()}*{mt}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Element({self.text()})"

    __str__ = text


def _multiply(table: GeneratorTable, ta: dict, tb: dict) -> Element:
    acc: dict = {}
    mul = table.mono_mul
    for ma, ca in ta.items():
        ar, ai = ca.re, ca.im
        for mb, cb in tb.items():
            r = mul(ma, mb)
            if r is None:
                continue
            neg, m = r
            br, bi = cb.re, cb.im
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            if neg:
                re, im = -re, -im
            old = acc.get(m)
            if old is None:
                acc[m] = [re, im]
            else:
                old[0] += re
                old[1] += im
    terms = {m: GaussianRational._raw(v[0], v[1]) for m, v in acc.items() if v[0] or v[1]}
    return Element._trusted(table, terms)


def multiply(a: Element, b: Element) -> Element:
    return a * b


def linear_combination(table: GeneratorTable, parts: Iterable[tuple[GaussianRational, Element]]) -> Element:
    acc: dict = {}
    for c, x in parts:
        c = _gr(c)
        for m, v in x.terms.items():
            w = v * c
            old = acc.get(m)
            acc[m] = w if old is None else old + w
    return Element._trusted(table, {m: v for m, v in acc.items() if v})


# --- derivations -----------------------------------------------------------

class DerivationSpec:
    """A graded derivation given by its values on generators."""

    def __init__(self, table: GeneratorTable, shift: Bidegree, values: Mapping[int, Element]):
        self.table = table
        self.shift = Bidegree(shift[0], bool(shift[1]))
        self.values = {g: v for g, v in values.items() if v}
        for g, v in self.values.items():
            if v.table != table:
                raise TableMismatch("derivation value over a foreign table")

    def value(self, gid: int) -> Element:
        return self.values.get(gid) or Element.zero(self.table)

    def apply(self, x: Element) -> Element:
        return apply_derivation(self, x)


def apply_derivation(D: DerivationSpec, x: Element) -> Element:
    table = D.table
    if x.table != table:
        raise TableMismatch("derivation and element over different tables")
    m_shift, t_shift = D.shift.n & 1, int(D.shift.odd)
    npar, spar = table._npar, table._spar
    mul = table.mono_mul
    acc: dict = {}
    values = D.values
    for mono, c in x.terms.items():
        if not mono:
            continue
        flat = [g for g, e in mono for _ in range(e)]
        for j, g in enumerate(flat):
            dv = values.get(g)
            if dv is None:
                continue
            if j and flat[j - 1] == g and not table._ext[g]:
                continue  # handled together with the first copy below
            # count equal copies for polynomial generators: g^k, derivation hits each copy
            k = 1
            while j + k < len(flat) and flat[j + k] == g:
                k += 1
            prefix = _flat_to_mono(flat[:j])
            suffix = _flat_to_mono(flat[j + k:])
            sgn_par = 0
            for h in flat[:j]:
                sgn_par += m_shift * npar[h] + t_shift * spar[h]
            # D(g^k) = sum_t (sign)^t g^t D(g) g^(k-1-t)
            gpar = m_shift * npar[g] + t_shift * spar[g]
            for t in range(k):
                left = _mono_concat(prefix, ((g, t),) if t else ())
                right = _mono_concat(((g, k - 1 - t),) if k - 1 - t else (), suffix)
                neg0 = (sgn_par + t * gpar) & 1
                for dm, dc in dv.terms.items():
                    r1 = mul(left, dm)
                    if r1 is None:
                        continue
                    r2 = mul(r1[1], right)
                    if r2 is None:
                        continue
                    neg = neg0 ^ r1[0] ^ r2[0]
                    w = dc * c
                    if neg:
                        w = -w
                    old = acc.get(r2[1])
                    acc[r2[1]] = w if old is None else old + w
    return Element._trusted(table, {m: v for m, v in acc.items() if v})


def _flat_to_mono(flat: list[int]) -> Monomial:
    out = []
    for g in flat:
        if out and out[-1][0] == g:
            out[-1] = (g, out[-1][1] + 1)
        else:
            out.append((g, 1))
    return tuple(out)


def _mono_concat(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    if a[-1][0] == b[0][0]:
        return a[:-1] + ((a[-1][0], a[-1][1] + b[0][1]),) + b[1:]
    return a + b


# --- algebras --------------------------------------------------------------

DiffSpec = Union[Element, str, int, Callable[[GeneratorTable], Element]]


class FreeDGA:
    """A free bigraded-commutative algebra with a square-zero differential."""

    def __init__(self, table: GeneratorTable, differential: DerivationSpec, label: str):
        self.table = table
        self.differential = differential
        self.label = label
        self._s_cache = None

    @property
    def generators(self) -> tuple[GeneratorDecl, ...]:
        return self.table.decls

    def names(self) -> list[str]:
        return self.table.names()

    def __contains__(self, name: str) -> bool:
        return name in self.table.index

    def gen(self, name: Union[str, int]) -> Element:
        return Element.generator(self.table, name)

    def gens(self, *names: str) -> list[Element]:
        return [self.gen(n) for n in names]

    def zero(self) -> Element:
        return Element.zero(self.table)

    def one(self) -> Element:
        return Element.scalar(self.table, ONE)

    def scalar(self, c) -> Element:
        return Element.scalar(self.table, c)

    def d(self, x: Union[Element, str]) -> Element:
        if isinstance(x, str):
            return self.differential.value(self.table.id_of(x))
        return apply_derivation(self.differential, self.lift(x))

    def d_of(self, name: str) -> Element:
        return self.differential.value(self.table.id_of(name))

    def lift(self, x: Element) -> Element:
        if x.table is self.table:
            return x
        return x.to(self.table)

    def bidegree(self, name: str) -> Bidegree:
        return self.table.decls[self.table.id_of(name)].bidegree

    def __eq__(self, other):
        """Same presentation: same generators in the same order and same differential."""
        if not isinstance(other, FreeDGA):
            return NotImplemented
        if self.table != other.table:
            return False
        return all(self.d_of(g.name) == other.d_of(g.name).to(self.table) for g in self.generators)

    __hash__ = None

    def __repr__(self):
        return f"FreeDGA({self.label!r}, {len(self.table)} generators)"


def _materialize(table: GeneratorTable, spec: DiffSpec) -> Element:
    if callable(spec) and not isinstance(spec, Element):
        spec = spec(table)
    if isinstance(spec, Element):
        return spec if spec.table is table else spec.to(table)
    if spec == 0:
        return Element.zero(table)
    raise TypeError(f"unsupported differential specification {spec!r}")


def declare_algebra(label: str, generators: Iterable, differentials: Mapping[str, DiffSpec] | Callable,
                    check: bool = True) -> FreeDGA:
    """Build a FreeDGA after checking bidegrees and d^2 = 0 on every generator.

    `generators` lists (name, Bidegree) pairs.  `differentials` maps generator
    names to Elements over any table containing the needed names, or is a
    callable receiving the new table and returning such a mapping.
    Unlisted generators are closed.
    """
    decls = []
    for g in generators:
        if isinstance(g, GeneratorDecl):
            decls.append((g.name, g.bidegree))
        else:
            name, bd = g
            decls.append((name, Bidegree(*bd) if not isinstance(bd, Bidegree) else bd))
    for name, bd in decls:
        if bd.n < 0:
            raise DegreeMismatch(f"generator {name} has negative degree {bd}")
    table = GeneratorTable(decls)
    if callable(differentials):
        differentials = differentials(table)
    values = {}
    for name, spec in differentials.items():
        if name not in table.index:
            raise KeyError(f"differential given for unknown generator {name!r}")
        gid = table.index[name]
        v = _materialize(table, spec)
        if v:
            want = table.decls[gid].bidegree + SHIFT_D
            got = v.bidegree()
            if got != want:
                raise DegreeMismatch(f"d {name} has bidegree {got}, expected {want}")
            values[gid] = v
    alg = FreeDGA(table, DerivationSpec(table, SHIFT_D, values), label)
    if check:
        bad = first_nonzero_d_squared(alg)
        if bad is not None:
            raise NotSquareZero(*bad)
    return alg


def first_nonzero_d_squared(alg: FreeDGA):
    for g in alg.generators:
        dg = alg.differential.value(g.id)
        if dg:
            dd = apply_derivation(alg.differential, dg)
            if dd:
                return g.name, dd
    return None


def check_d_squared(alg: FreeDGA) -> ReportEntry:
    bad = first_nonzero_d_squared(alg)
    if bad is None:
        return entry(f"dsquared.{alg.label}", True, f"d^2 = 0 on all {len(alg.table)} generators")
    return entry(f"dsquared.{alg.label}", False, f"d^2 {bad[0]} is nonzero", bad[1].first_term())


def adjoin_generators(base: FreeDGA, new: Iterable, differentials: Mapping[str, DiffSpec] | Callable,
                      label: Optional[str] = None) -> FreeDGA:
    """Adjoin generators after the existing ones; base differentials are kept."""
    new = [(n, Bidegree(*bd)) for n, bd in new]
    for n, _ in new:
        if n in base.table.index:
            raise NameCollision(f"generator {n!r} already present in {base.label}")
    all_decls = [(g.name, g.bidegree) for g in base.generators] + new

    def diffs(table):
        specs = differentials(table) if callable(differentials) else differentials
        out = {g.name: base.differential.value(g.id).to(table) for g in base.generators}
        out.update(specs)
        return out

    return declare_algebra(label or base.label + "+" + ",".join(n for n, _ in new), all_decls, diffs)


# --- morphisms -------------------------------------------------------------

class DgaMorphism:
    """An algebra map CE(source) -> CE(target) given on generators.

    A morphism is curved when some images carry a unit term; that is only
    legal for generators of bidegree (0, even).
    """

    def __init__(self, source: FreeDGA, target: FreeDGA, images: Mapping, curved: bool = False,
                 label: str = "", default_zero: bool = False):
        self.source = source
        self.target = target
        self.curved = curved
        self.label = label or f"{source.label}->{target.label}"
        imgs: dict[int, Element] = {}
        for k, v in images.items():
            gid = source.table.id_of(k) if isinstance(k, str) else k
            if not isinstance(v, Element):
                v = Element.scalar(target.table, v)
            imgs[gid] = v if v.table is target.table else v.to(target.table)
        if not default_zero:
            missing = [g.name for g in source.generators if g.id not in imgs]
            if missing:
                raise KeyError(f"no image given for {missing[:5]}")
        for g in source.generators:
            imgs.setdefault(g.id, Element.zero(target.table))
        self.images = imgs
        self._mono_cache: dict = {}

    def image(self, name: Union[str, int]) -> Element:
        gid = self.source.table.id_of(name) if isinstance(name, str) else name
        return self.images[gid]

    def _mono_image(self, mono: Monomial) -> Element:
        hit = self._mono_cache.get(mono)
        if hit is not None:
            return hit
        if len(mono) == 1 and mono[0][1] == 1:
            out = self.images[mono[0][0]]
        elif mono[-1][1] > 1:
            g, e = mono[-1]
            head = mono[:-1] + ((g, e - 1),)
            out = self._mono_image(head) * self.images[g]
        else:
            out = self._mono_image(mono[:-1]) * self.images[mono[-1][0]]
        if len(self._mono_cache) < 200000:
            self._mono_cache[mono] = out
        return out

    def apply(self, x: Element) -> Element:
        x = self.source.lift(x)
        acc: dict = {}
        ttable = self.target.table
        for m, c in x.terms.items():
            img = Element.scalar(ttable, ONE) if not m else self._mono_image(m)
            for tm, tc in img.terms.items():
                w = tc * c
                old = acc.get(tm)
                acc[tm] = w if old is None else old + w
        return Element._trusted(ttable, {m: v for m, v in acc.items() if v})

    __call__ = apply

    def __eq__(self, other):
        if not isinstance(other, DgaMorphism):
            return NotImplemented
        if self.source.table != other.source.table or self.target.table != other.target.table:
            return False
        return all(self.images[g] == other.images[g].to(self.target.table) for g in self.images)

    __hash__ = None

    def first_difference(self, other: "DgaMorphism"):
        for g in self.source.generators:
            a, b = self.images[g.id], other.images[g.id].to(self.target.table)
            if a != b:
                return g.name, a - b
        return None

    def check(self) -> ReportEntry:
        return check_morphism(self)

    def is_valid(self) -> bool:
        return check_morphism(self).ok

    def __repr__(self):
        return f"DgaMorphism({self.label})"


def morphism_defect(m: DgaMorphism):
    """First generator violating homogeneity or d-commutation, with a description."""
    for g in m.source.generators:
        img = m.images[g.id]
        unit = img.unit_coefficient()
        if unit:
            if not m.curved:
                return g.name, "unit term in a non-curved morphism", img
            if g.bidegree != UNIT_DEGREE:
                return g.name, "unit term on a generator not of bidegree (0,even)", img
        bd = img.bidegree()
        if bd is not None and bd != g.bidegree:
            return g.name, f"image has bidegree {bd}, expected {g.bidegree}", img
    for g in m.source.generators:
        lhs = m.apply(m.source.differential.value(g.id))
        rhs = m.target.d(m.images[g.id])
        diff = lhs - rhs
        if diff:
            return g.name, "image(d g) != d(image g)", diff
    return None


def check_morphism(m: DgaMorphism, check_id: Optional[str] = None) -> ReportEntry:
    cid = check_id or f"morphism.{m.label}"
    bad = morphism_defect(m)
    if bad is None:
        return entry(cid, True, f"valid on all {len(m.source.table)} generators")
    name, why, value = bad
    return entry(cid, False, f"generator {name}: {why}", value.first_term() if isinstance(value, Element) else value)


def identity(alg: FreeDGA) -> DgaMorphism:
    return DgaMorphism(alg, alg, {g.id: alg.gen(g.id) for g in alg.generators}, label=f"id.{alg.label}")


def compose(g: DgaMorphism, f: DgaMorphism) -> DgaMorphism:
    """The algebra map x -> g(f(x)); requires f.target == g.source."""
    if f.target.table != g.source.table:
        raise TableMismatch(f"cannot compose {g.label} after {f.label}")
    imgs = {gid: g.apply(v) for gid, v in f.images.items()}
    return DgaMorphism(f.source, g.target, imgs, curved=f.curved or g.curved,
                       label=f"{g.label}*{f.label}")


def inclusion(source: FreeDGA, target: FreeDGA, renaming: Optional[Mapping[str, str]] = None,
              label: str = "") -> DgaMorphism:
    """Send each source generator to the same-named (or renamed) target generator."""
    renaming = renaming or {}
    imgs = {g.id: target.gen(renaming.get(g.name, g.name)) for g in source.generators}
    return DgaMorphism(source, target, imgs, label=label or f"incl.{source.label}->{target.label}")


def pushout(extension: FreeDGA, base: FreeDGA, f: DgaMorphism, label: str = ""):
    """CE-level pushout of a free extension `base -> extension` along `f: base -> B`.

    Returns (P, j) where P is B with the extension's extra generators adjoined
    (differentials transported along f) and j: extension -> P.
    """
    if f.source.table != base.table:
        raise TableMismatch("pushout map does not start at the base")
    extra = [g for g in extension.generators if g.name not in base.table.index]
    B = f.target

    def diffs(table):
        out = {}
        for g in extra:
            out[g.name] = _transport(extension.d_of(g.name), base, f, table)
        return out

    P = adjoin_generators(B, [(g.name, g.bidegree) for g in extra], diffs, label=label or f"pushout.{extension.label}")
    imgs = {}
    for g in extension.generators:
        if g.name in base.table.index:
            imgs[g.id] = f.image(g.name).to(P.table)
        else:
            imgs[g.id] = P.gen(g.name)
    return P, DgaMorphism(extension, P, imgs, label=f"pushout-leg.{extension.label}")


def _transport(x: Element, base: FreeDGA, f: DgaMorphism, table: GeneratorTable) -> Element:
    out = Element.zero(table)
    for m, c in x.terms.items():
        t = Element.scalar(table, c)
        for gid, e in m:
            name = x.table.decls[gid].name
            if name in base.table.index:
                img = f.image(name).to(table)
            else:
                img = Element.generator(table, name)
            for _ in range(e):
                t = t * img
        out = out + t
    return out


# --- bases and exactness ---------------------------------------------------

def homogeneous_basis(alg: FreeDGA, bidegree: Bidegree, caps: Optional[Mapping] = None,
                      default_cap: int = 2) -> list[Monomial]:
    """All monomials of the bidegree, in id-lexicographic order.

    Generators of positive degree are bounded by the degree itself.  Degree-0
    polynomial generators are bounded by `caps` (name -> max exponent) or by
    `default_cap`; a CapTooSmall warning is issued when such a cap truncates.
    """
    bidegree = Bidegree(bidegree[0], bool(bidegree[1]))
    caps = caps or {}
    decls = alg.generators
    limits = []
    truncated = False
    for g in decls:
        n = g.bidegree.n
        if g.bidegree.exterior:
            lim = 1
        elif n > 0:
            lim = bidegree.n // n
        else:
            lim = caps.get(g.name, caps.get(g.id, default_cap))
            truncated = True
        limits.append(min(lim, caps.get(g.name, lim)))
    if truncated:
        warnings.warn(CapTooSmall(
            f"{alg.label} has degree-0 polynomial generators; the capped basis in {bidegree} is incomplete"),
            stacklevel=2)
    # suffix max/min degree for pruning
    count = len(decls)
    out: list[Monomial] = []
    max_rest = [0] * (count + 1)
    for k in range(count - 1, -1, -1):
        max_rest[k] = max_rest[k + 1] + decls[k].bidegree.n * limits[k]

    def rec(k: int, remaining: int, parity: int, acc: list):
        if remaining < 0 or remaining > max_rest[k]:
            return
        if k == count:
            if remaining == 0 and parity == bidegree.odd:
                out.append(tuple(acc))
            return
        g = decls[k]
        n = g.bidegree.n
        rec(k + 1, remaining, parity, acc)
        for e in range(1, limits[k] + 1):
            if n * e > remaining:
                break
            acc.append((k, e))
            rec(k + 1, remaining - n * e, parity ^ (g.bidegree.odd and (e & 1)), acc)
            acc.pop()

    rec(0, bidegree.n, 0, [])
    out.sort()
    return out


def solve_exactness(alg: FreeDGA, target: Element, caps: Optional[Mapping] = None,
                    default_cap: int = 2) -> Optional[Element]:
    """Find x with d x = target inside the capped basis, or None."""
    target = alg.lift(target)
    if not target:
        return alg.zero()
    bd = target.bidegree()
    if bd == "mixed":
        raise DegreeMismatch("target is not homogeneous")
    basis = homogeneous_basis(alg, Bidegree(bd.n - 1, bd.odd), caps, default_cap)
    columns = []
    for m in basis:
        img = alg.d(Element.monomial(alg.table, m))
        columns.append(img.terms)
    sol = solve_sparse(columns, target.terms)
    if sol is None:
        return None
    x = Element._trusted(alg.table, {basis[j]: c for j, c in sol.items() if c})
    if alg.d(x) != target:  # post-condition, cheap relative to the solve
        raise AssertionError("exact solver returned a wrong potential")
    return x


# --- small helpers ---------------------------------------------------------

def sum_elements(table: GeneratorTable, xs: Iterable[Element]) -> Element:
    acc: dict = {}
    for x in xs:
        for m, v in x.terms.items():
            old = acc.get(m)
            acc[m] = v if old is None else old + v
    return Element._trusted(table, {m: v for m, v in acc.items() if v})


def iter_generators(alg: FreeDGA) -> Iterator[tuple[str, Element]]:
    for g in alg.generators:
        yield g.name, alg.gen(g.id)
