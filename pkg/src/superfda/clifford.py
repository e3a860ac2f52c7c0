"""Exact gamma matrices in 9, 10 and 11 dimensions and spinor bilinears.

Metric η = diag(-1, +1, ..., +1) and Γ_a Γ_b + Γ_b Γ_a = -2 η_ab.  The 9d
Dirac matrices come from eight real symmetric anticommuting 16x16 matrices
E_j built as Kronecker products of 2x2 involutions; γ_j = i E_j and
γ_0 = E_1 ... E_8.  The 11d matrices are 2x2 block lifts of these.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Optional, Sequence

from .errors import (AmbiguousCandidate, ConstructionInvalid, DimensionMismatch,
                     IndexOutOfRange, NoValidCandidate)
from .graded_algebra import Element, FreeDGA, linear_combination
from .linsolve import nullspace
from .report import ReportEntry, entry
from .scalars import ONE, ZERO, GaussianRational, I

ETA_SIGNS = lambda d: [-1] + [1] * (d - 1)  # noqa: E731


class MatrixQ:
    """A matrix over Q(i), stored as sparse rows."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows: int, cols: int, sparse_rows: Optional[Sequence[dict]] = None):
        self.rows = rows
        self.cols = cols
        if sparse_rows is None:
            self._r = tuple({} for _ in range(rows))
        else:
            self._r = tuple({j: v for j, v in r.items() if v} for r in sparse_rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "MatrixQ":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        sr = []
        for r in data:
            sr.append({j: GaussianRational.coerce(v) for j, v in enumerate(r) if v})
        return cls(rows, cols, sr)

    @classmethod
    def identity(cls, n: int, c=ONE) -> "MatrixQ":
        c = GaussianRational.coerce(c)
        return cls(n, n, [{i: c} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(rows, cols)

    @classmethod
    def blocks(cls, grid: Sequence[Sequence[Optional["MatrixQ"]]]) -> "MatrixQ":
        """Assemble from a 2D grid of equally sized square blocks (None = zero)."""
        n = next(b.rows for row in grid for b in row if b is not None)
        R = len(grid) * n
        C = len(grid[0]) * n
        sr = [dict() for _ in range(R)]
        for bi, row in enumerate(grid):
            for bj, b in enumerate(row):
                if b is None:
                    continue
                for i, r in enumerate(b._r):
                    target = sr[bi * n + i]
                    for j, v in r.items():
                        target[bj * n + j] = v
        return cls(R, C, sr)

    def entry(self, i: int, j: int) -> GaussianRational:
        return self._r[i].get(j, ZERO)

    def row(self, i: int) -> dict:
        return dict(self._r[i])

    def nonzeros(self):
        for i, r in enumerate(self._r):
            for j in sorted(r):
                yield i, j, r[j]

    def dense(self) -> list[list[GaussianRational]]:
        return [[self._r[i].get(j, ZERO) for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self._r)

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        orows = other._r
        for r in self._r:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    v = a * b
                    old = acc.get(j)
                    acc[j] = v if old is None else old + v
            out.append(acc)
        return MatrixQ(self.rows, other.cols, out)

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        self._same_shape(other)
        out = []
        for r1, r2 in zip(self._r, other._r):
            acc = dict(r1)
            for j, v in r2.items():
                old = acc.get(j)
                acc[j] = v if old is None else old + v
            out.append(acc)
        return MatrixQ(self.rows, self.cols, out)

    def __neg__(self):
        return MatrixQ(self.rows, self.cols, [{j: -v for j, v in r.items()} for r in self._r])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MatrixQ":
        c = GaussianRational.coerce(c)
        return MatrixQ(self.rows, self.cols, [{j: v * c for j, v in r.items()} for r in self._r])

    def __mul__(self, c):
        if isinstance(c, MatrixQ):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self) -> "MatrixQ":
        out = [dict() for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, v in r.items():
                out[j][i] = v
        return MatrixQ(self.cols, self.rows, out)

    @property
    def T(self):
        return self.transpose()

    def conjugate(self) -> "MatrixQ":
        return MatrixQ(self.rows, self.cols, [{j: v.conjugate() for j, v in r.items()} for r in self._r])

    def dagger(self) -> "MatrixQ":
        return self.transpose().conjugate()

    def symmetric_part(self) -> "MatrixQ":
        half = GaussianRational(1, 0) / 2
        return (self + self.transpose()).scale(half)

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")

    def __eq__(self, other):
        if not isinstance(other, MatrixQ):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._r == other._r

    __hash__ = None

    def to_text(self) -> str:
        return "\n".join(" ".join(self.entry(i, j).to_text() for j in range(self.cols))
                         for i in range(self.rows))

    def __repr__(self):
        return f"MatrixQ({self.rows}x{self.cols}, nnz={sum(len(r) for r in self._r)})"


# 2x2 building blocks: identity, sigma_1, sigma_3 and the real antisymmetric epsilon
_P = {
    "I": ((1, 0), (0, 1)),
    "X": ((0, 1), (1, 0)),
    "Z": ((1, 0), (0, -1)),
    "E": ((0, 1), (-1, 0)),
}
# eight mutually anticommuting words with an even number of E's (hence symmetric)
_EUCLIDEAN_WORDS = ("IIIX", "IIIZ", "IIEE", "IEXE", "XEZE", "ZEZE", "EIZE", "EXXE")


def kron(a: MatrixQ, b: MatrixQ) -> MatrixQ:
    out = []
    for ra in a._r:
        for rb in b._r:
            row = {}
            for ja, va in ra.items():
                for jb, vb in rb.items():
                    row[ja * b.cols + jb] = va * vb
            out.append(row)
    return MatrixQ(a.rows * b.rows, a.cols * b.cols, out)


def _word_matrix(word: str) -> MatrixQ:
    m = MatrixQ.from_dense(_P[word[0]])
    for ch in word[1:]:
        m = kron(m, MatrixQ.from_dense(_P[ch]))
    return m


def clifford_defects(gammas: Sequence[MatrixQ], eta: Sequence[int]):
    """Yield (a, b, residual) for every failing relation Γ_aΓ_b + Γ_bΓ_a = -2η_ab."""
    n = gammas[0].rows
    for a in range(len(gammas)):
        for b in range(a, len(gammas)):
            lhs = gammas[a] @ gammas[b] + gammas[b] @ gammas[a]
            rhs = MatrixQ.identity(n, -2 * eta[a]) if a == b else MatrixQ.zeros(n, n)
            if lhs != rhs:
                yield a, b, lhs - rhs


def build_gamma_d9() -> list[MatrixQ]:
    E = [_word_matrix(w) for w in _EUCLIDEAN_WORDS]
    g0 = E[0]
    for m in E[1:]:
        g0 = g0 @ m
    gammas = [g0] + [m.scale(I) for m in E]
    if any(True for _ in clifford_defects(gammas, ETA_SIGNS(9))):
        raise ConstructionInvalid("9d gamma matrices fail the Clifford relation")
    if g0.dagger() != g0 or any(g.dagger() != -g for g in gammas[1:]):
        raise ConstructionInvalid("9d gamma matrices have the wrong hermiticity")
    return gammas


@dataclass
class CliffordModel:
    dimension: int
    gammas: list[MatrixQ]
    label: str
    eta: list[int] = field(default_factory=list)
    charge_conjugation: Optional[MatrixQ] = None
    iib: Optional[list[MatrixQ]] = None
    sigma: Optional[tuple[MatrixQ, MatrixQ, MatrixQ]] = None

    def __post_init__(self):
        if not self.eta:
            self.eta = ETA_SIGNS(self.dimension)

    @property
    def spinor_dim(self) -> int:
        return self.gammas[0].rows

    @property
    def C(self) -> MatrixQ:
        if self.charge_conjugation is None:
            self.charge_conjugation = find_charge_conjugation(self)
        return self.charge_conjugation

    def gamma(self, a: int, convention: str = "IIA") -> MatrixQ:
        if convention == "IIB":
            if self.iib is None:
                gamma_iib(self)
            if not 0 <= a < len(self.iib):
                raise IndexOutOfRange(f"IIB index {a}")
            return self.iib[a]
        if not 0 <= a < len(self.gammas):
            raise IndexOutOfRange(f"index {a} outside 0..{len(self.gammas) - 1}")
        return self.gammas[a]

    def gamma_upper(self, a: int, convention: str = "IIA") -> MatrixQ:
        g = self.gamma(a, convention)
        return g if self.eta[a] > 0 else -g


def lift_to_d11(d9: Sequence[MatrixQ]) -> CliffordModel:
    n = d9[0].rows
    Id = MatrixQ.identity(n)
    gam = [MatrixQ.blocks([[None, g], [g, None]]) for g in d9]
    gam.append(MatrixQ.blocks([[None, Id], [-Id, None]]))
    gam.append(MatrixQ.blocks([[Id.scale(I), None], [None, Id.scale(-I)]]))
    model = CliffordModel(11, gam, "d11")
    bad = next(clifford_defects(gam, model.eta), None)
    if bad is not None:
        raise ConstructionInvalid(f"11d relation fails for ({bad[0]},{bad[1]})")
    return model


def gamma_iib(model: CliffordModel):
    """IIB matrices Γ^IIB_a (a <= 9) and the triple σ1 = Γ9, σ2 = -Γ9Γ10, σ3 = Γ10."""
    n = model.spinor_dim // 2
    Id = MatrixQ.identity(n)
    g9b = MatrixQ.blocks([[None, Id], [Id, None]])
    iib = list(model.gammas[:9]) + [g9b]
    G9, G10 = model.gammas[9], model.gammas[10]
    sigma = (G9, -(G9 @ G10), G10)
    model.iib = iib
    model.sigma = sigma
    return iib, sigma


@lru_cache(maxsize=None)
def standard_model() -> CliffordModel:
    """The 11d model with IIB overlay and charge conjugation, built once."""
    model = lift_to_d11(build_gamma_d9())
    gamma_iib(model)
    model.charge_conjugation = find_charge_conjugation(model)
    return model


def antisymmetrized_product(model: CliffordModel, indices: Sequence[int], convention: str = "IIA") -> MatrixQ:
    """Γ_{a1...ap}.  Distinct indices give the sorted ordered product times the sort sign.

    With the IIB matrices Γ^IIB_9 commutes with the other Γ^IIB_a, so the
    product is formed in ascending index order (the literal average over
    permutations would cancel every term containing 9).
    """
    n = model.spinor_dim
    for a in indices:
        model.gamma(a, convention)  # range check
    if len(set(indices)) < len(indices):
        return MatrixQ.zeros(n, n)
    return _sorted_product(model, tuple(indices), convention)


def _perm_sign(seq: Sequence[int]) -> int:
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _sorted_product(model, indices, convention):
    key = (id(model), tuple(sorted(indices)), convention)
    m = _PRODUCT_CACHE.get(key)
    if m is None:
        m = MatrixQ.identity(model.spinor_dim)
        for a in sorted(indices):
            m = m @ model.gamma(a, convention)
        _PRODUCT_CACHE[key] = m
    return m if _perm_sign(indices) > 0 else -m


_PRODUCT_CACHE: dict = {}


def literal_antisymmetrization(model: CliffordModel, indices: Sequence[int], convention: str = "IIA") -> MatrixQ:
    """(1/p!) Σ_σ sgn(σ) Γ_{aσ1}...Γ_{aσp}, computed by brute force."""
    p = len(indices)
    n = model.spinor_dim
    acc = MatrixQ.zeros(n, n)
    for perm in itertools.permutations(range(p)):
        m = MatrixQ.identity(n)
        for k in perm:
            m = m @ model.gamma(indices[k], convention)
        acc = acc + (m if _perm_sign(perm) > 0 else -m)
    return acc.scale(GaussianRational(1, 0) / factorial(p))


def find_charge_conjugation(model: CliffordModel) -> MatrixQ:
    """Solve Γ_aᵀ X = ±X Γ_a; keep the sign whose solution makes every CΓ^a symmetric."""
    n = model.spinor_dim
    candidates = []
    for sgn in (1, -1):
        eqs = []
        for g in model.gammas:
            gt = g.transpose()
            # (Γᵀ X)_{ij} = Σ_k Γ_{ki} X_{kj};  (X Γ)_{ij} = Σ_k X_{ik} Γ_{kj}
            for i in range(n):
                for j in range(n):
                    row: dict = {}
                    for k, v in gt._r[i].items():
                        row[k * n + j] = row.get(k * n + j, ZERO) + v
                    for k, v in gt._r[j].items():
                        key = i * n + k
                        row[key] = row.get(key, ZERO) - v * sgn
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        eqs.append(row)
        basis = nullspace(eqs, n * n)
        if len(basis) > 1:
            raise ConstructionInvalid(f"intertwiner space of dimension {len(basis)} (sign {sgn})")
        for vec in basis:
            X = MatrixQ(n, n, [{j: vec[i * n + j] for j in range(n) if (i * n + j) in vec} for i in range(n)])
            X = _normalize_matrix(X)
            if all(_is_symmetric(X @ model.gamma_upper(a)) for a in range(model.dimension)):
                candidates.append(X)
    if not candidates:
        raise NoValidCandidate("no intertwiner makes CΓ^a symmetric")
    if len(candidates) > 1:
        raise AmbiguousCandidate("both intertwiners make CΓ^a symmetric")
    return candidates[0]


def _normalize_matrix(X: MatrixQ) -> MatrixQ:
    """Scale so that the first nonzero entry (row-major) equals 1."""
    for i, j, v in X.nonzeros():
        return X.scale(v.inverse())
    return X


def _is_symmetric(M: MatrixQ) -> bool:
    return M == M.transpose()


# --- reports ----------------------------------------------------------------

def check_clifford_relations(model: CliffordModel) -> ReportEntry:
    bad = list(clifford_defects(model.gammas, model.eta))
    d = model.dimension
    count = d * (d + 1) // 2
    if not bad:
        return entry("clifford.relations", True, f"all {count} anticommutators hold in d={d}")
    a, b, _ = bad[0]
    return entry("clifford.relations", False, f"{len(bad)} of {count} relations fail; first ({a},{b})")


def check_iib_relations(model: CliffordModel) -> list[ReportEntry]:
    if model.iib is None:
        gamma_iib(model)
    iib = model.iib
    G9, G10 = model.gammas[9], model.gammas[10]
    n = model.spinor_dim
    out = []
    identity_ok = iib[9] == (G9 @ G10).scale(I) and G9 == (iib[9] @ G10).scale(I)
    out.append(entry("clifford.iib.identity", identity_ok, "Γ9^IIB = iΓ9Γ10 and Γ9 = iΓ9^IIB Γ10"))
    sq = iib[9] @ iib[9]
    out.append(entry("clifford.iib.not_clifford", sq == MatrixQ.identity(n) and sq != MatrixQ.identity(n, -1),
                     "(Γ9^IIB)^2 = +1 differs from -η99 = -1, so the IIB matrices are not a Clifford system"))
    sigmas = model.sigma
    fails = []
    for a in range(9):
        for b in range(a + 1, 9):
            gab = iib[a] @ iib[b]
            for k, s in enumerate(sigmas):
                if gab @ s != s @ gab:
                    fails.append(f"[Γ_{a}{b}, σ{k + 1}]")
        ga9 = iib[a] @ iib[9]
        for k, s in enumerate(sigmas):
            if ga9 @ s != s @ ga9:
                fails.append(f"[Γ_{a}Γ_9, σ{k + 1}]")
    out.append(entry("clifford.iib.sigma_invariance", not fails,
                     "IIB spin generators commute with σ1, σ2, σ3" if not fails else f"fails: {fails[:3]}"))
    rot = G9 @ G10
    bad = [a for a in range(10) if rot @ iib[a] != iib[a] @ rot]
    out.append(entry("clifford.iib.rotation_invariance", not bad,
                     "Γ9Γ10 commutes with every Γ^IIB_a" if not bad else f"fails for a in {bad}"))
    return out


def hermiticity_phases(model: CliffordModel, max_p: int = 5) -> dict[int, set]:
    """Observed phases λ with (CΓ_A)† = λ·CΓ_A, per rank p (over all index sets)."""
    C = model.C
    out: dict[int, set] = {}
    for p in range(max_p + 1):
        phases = set()
        for A in itertools.combinations(range(model.dimension), p):
            M = C @ antisymmetrized_product(model, A)
            Md = M.dagger()
            lam = None
            for i, j, v in M.nonzeros():
                lam = Md.entry(i, j) / v
                break
            if lam is None or Md != M.scale(lam):
                phases.add("none")
            else:
                phases.add(lam.to_text())
        out[p] = phases
    return out


def check_hermiticity_pattern(model: CliffordModel) -> list[ReportEntry]:
    out = []
    observed = hermiticity_phases(model)
    for p, phases in observed.items():
        expected = "1" if (p * (p - 1) // 2) % 2 == 0 else "-1"
        ok = phases == {expected}
        detail = f"p={p}: expected phase {expected}, observed {sorted(phases)}"
        e = entry(f"clifford.hermiticity.p{p}", ok, detail)
        if not ok:
            e = ReportEntry(e.id, "skip", detail + " (diagnostic only)")
        out.append(e)
    return out


def check_charge_conjugation(model: CliffordModel) -> ReportEntry:
    C = model.C
    sym = all(_is_symmetric(C @ model.gamma_upper(a)) for a in range(model.dimension))
    inv = _invertible(C)
    return entry("clifford.charge_conjugation", sym and inv,
                 f"unique intertwiner with CΓ^a symmetric for all {model.dimension} a; invertible={inv}")


def _invertible(M: MatrixQ) -> bool:
    # rank via nullspace of the columns
    eqs = [dict(r) for r in M._r if r]
    return len(nullspace(eqs, M.cols)) == 0


# --- bilinears -------------------------------------------------------------

@dataclass(frozen=True)
class BilinearSpec:
    indices: tuple = ()
    convention: str = "IIA"
    trailing: tuple = ()  # subset of ("G9", "G10") applied in order, always 11d matrices
    prefactor: GaussianRational = ONE


def pairing_matrix(model: CliffordModel, spec: BilinearSpec, upper: bool = False) -> MatrixQ:
    """prefactor * C * Γ_{indices} * trailing factors."""
    if upper:
        if len(spec.indices) != 1:
            raise ValueError("upper index only supported for a single gamma")
        M = model.gamma_upper(spec.indices[0], spec.convention)
    else:
        M = antisymmetrized_product(model, spec.indices, spec.convention)
    for t in spec.trailing:
        M = M @ model.gammas[{"G9": 9, "G10": 10}[t]]
    return (model.C @ M).scale(spec.prefactor)


def psi_names(n: int) -> list[str]:
    return [f"psi{k}" for k in range(1, n + 1)]


def quadratic_form(algebra: FreeDGA, M: MatrixQ, psi: Optional[Sequence[str]] = None) -> Element:
    """Σ_{αβ} M_{αβ} ψ^α ψ^β as an element (only the symmetric part survives)."""
    psi = psi or psi_names(M.rows)
    if len(psi) != M.rows or any(p not in algebra for p in psi):
        raise DimensionMismatch(f"{algebra.label} lacks the {M.rows} spinor generators")
    ids = [algebra.table.id_of(p) for p in psi]
    terms: dict = {}
    for i, j, v in M.nonzeros():
        a, b = ids[i], ids[j]
        mono = ((a, 2),) if a == b else (((a, 1), (b, 1)) if a < b else ((b, 1), (a, 1)))
        old = terms.get(mono)
        terms[mono] = v if old is None else old + v
    return Element(algebra.table, terms)


def bilinear_element(algebra: FreeDGA, model: CliffordModel, spec: BilinearSpec,
                     e_names: Sequence[str] = (), upper: bool = False) -> Element:
    """prefactor * (ψ̄ Γ... ψ) ∧ e^{e_names[0]} ∧ ... in canonical form."""
    q = quadratic_form(algebra, pairing_matrix(model, spec, upper))
    if not e_names:
        return q
    ev = algebra.one()
    for name in e_names:
        ev = ev * algebra.gen(name)
    return q * ev


def form_element(algebra: FreeDGA, model: CliffordModel, p: int, prefactor, index_range: Sequence[int],
                 e_name, convention: str = "IIA", trailing: tuple = ()) -> Element:
    """(prefactor / p!) Σ_{a1..ap} (ψ̄ Γ_{a1..ap} T ψ) e^{a1}...e^{ap}.

    The sum over all orderings collapses to p! times the sum over ascending
    index sets, so each set is visited once with the bare prefactor.
    `e_name` maps a vector index to the generator name of e^a.
    """
    parts = []
    pref = GaussianRational.coerce(prefactor)
    for A in itertools.combinations(index_range, p):
        spec = BilinearSpec(A, convention, trailing, pref)
        M = pairing_matrix(model, spec)
        if M.is_zero():
            continue
        parts.append((ONE, bilinear_element(algebra, model, spec, [e_name(a) for a in A])))
    return linear_combination(algebra.table, parts)
