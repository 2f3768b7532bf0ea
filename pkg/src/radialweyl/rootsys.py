"""Root systems, Weyl groups and weight-lattice combinatorics.

Everything in this module is exact.  Weights are plain integer tuples in the
*doubled* fundamental-weight basis: the tuple ``c`` denotes the weight
``sum(c[j] / 2 * omega_j)``.  The doubling makes both true weights and the
half-integral functionals of the radial operator integer vectors.

The ambient space of a root system of rank ``k`` is ``Q^k`` with the simple
roots as its basis, so ``simple_roots`` is the identity and every metric
question goes through ``gram``.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy

Weight = tuple[int, ...]

__all__ = [
    "CartanType",
    "RootSystem",
    "UnsupportedType",
    "NotDominant",
    "Weight",
    "build_root_system",
    "weyl_orbit",
    "dominant_representative",
    "hull_contains",
    "dominant_weights_in_hull",
    "pi_involution",
    "fundamental",
    "doubled",
    "undoubled",
]


class UnsupportedType(ValueError):
    pass


class NotDominant(ValueError):
    pass


_TYPE_RE = re.compile(r"^\s*([A-Za-z])\s*(\d+)\s*$")


@dataclass(frozen=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        ok = (
            (fam == "A" and self.rank >= 1)
            or (fam in "BC" and self.rank >= 2)
            or (fam == "D" and self.rank >= 3)
            or (fam == "G" and self.rank == 2)
        )
        if fam not in ("A", "B", "C", "D", "G") or not ok:
            raise UnsupportedType(f"unsupported Cartan type {fam}{self.rank}")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse strings such as ``"A2"``, ``"g2"`` or ``"D4"``."""
        m = _TYPE_RE.match(text)
        if m is None:
            raise UnsupportedType(f"cannot parse Cartan type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _realization(t: CartanType) -> list[list[int]]:
    # Simple roots in a Euclidean realization with integer coordinates.
    n, fam = t.rank, t.family
    if fam == "A":
        dim = n + 1
        rows = []
        for i in range(n):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            rows.append(v)
        return rows
    if fam == "G":
        return [[1, -1, 0], [-2, 1, 1]]
    rows = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        rows.append(v)
    last = [0] * n
    if fam == "B":
        last[-1] = 1
    elif fam == "C":
        last[-1] = 2
    else:  # D
        last[-2], last[-1] = 1, 1
    rows.append(last)
    return rows


def _mat(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in rows])


def _frac(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A reduced crystallographic root system with exact data.

    ``gram[i][j]`` is the inner product of simple roots ``i`` and ``j``,
    normalized so long roots have squared length 2.  ``cartan_matrix[i][j]``
    is ``<alpha_i, alpha_j^vee>``, so row ``i`` holds the fundamental-weight
    coordinates of ``alpha_i``.
    """

    cartan_type: CartanType
    simple_roots: tuple[tuple[Fraction, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    weyl_order: int = field(default=0)

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    def __repr__(self):
        return f"RootSystem({self.cartan_type})"

    # -- exact linear algebra --------------------------------------------

    @cached_property
    def _cartan_adj(self) -> tuple[tuple[int, ...], ...]:
        adj = _mat(self.cartan_matrix).adjugate()
        return tuple(tuple(int(x) for x in adj.row(i)) for i in range(self.rank))

    @cached_property
    def cartan_det(self) -> int:
        return int(_mat(self.cartan_matrix).det())

    @cached_property
    def root_lengths(self) -> tuple[Fraction, ...]:
        """Squared lengths of the simple roots."""
        return tuple(self.gram[i][i] for i in range(self.rank))

    @cached_property
    def weight_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Inner products of fundamental weights (undoubled)."""
        k = self.rank
        # alpha_i = sum_j C[i][j] omega_j, so omega_i = sum_j Cinv[i][j] alpha_j
        cinv = _mat(self.cartan_matrix).inv()
        g = _mat(self.gram)
        wg = cinv * g * cinv.T
        return tuple(tuple(_frac(wg[i, j]) for j in range(k)) for i in range(k))

    @cached_property
    def fundamental_weights(self) -> tuple[tuple[Fraction, ...], ...]:
        """Fundamental weights as ambient vectors (simple-root coordinates)."""
        cinv = _mat(self.cartan_matrix).inv()
        k = self.rank
        return tuple(tuple(_frac(cinv[i, j]) for j in range(k)) for i in range(k))

    def root_coordinates(self, w: Weight) -> tuple[Fraction, ...]:
        """Simple-root coordinates of a doubled weight."""
        det = self.cartan_det
        adj = self._cartan_adj
        k = self.rank
        return tuple(
            Fraction(sum(w[i] * adj[i][j] for i in range(k)), 2 * det) for j in range(k)
        )

    def inner(self, a: Weight, b: Weight) -> Fraction:
        """Inner product of two doubled weights."""
        wg = self.weight_gram
        k = self.rank
        return sum(
            (wg[i][j] * a[i] * b[j] for i in range(k) for j in range(k)), Fraction(0)
        ) / 4

    def weight_to_ambient(self, w: Weight) -> tuple[Fraction, ...]:
        fw = self.fundamental_weights
        k = self.rank
        return tuple(sum((Fraction(w[i], 2) * fw[i][j] for i in range(k)), Fraction(0)) for j in range(k))

    # -- Weyl group ----------------------------------------------------------

    def reflect(self, w: Weight, i: int) -> Weight:
        """Simple reflection ``s_i`` on a doubled weight."""
        c = w[i]
        if c == 0:
            return tuple(w)
        row = self.cartan_matrix[i]
        return tuple(x - c * r for x, r in zip(w, row))

    @cached_property
    def roots(self) -> tuple[Weight, ...]:
        """All roots, as doubled weights."""
        out: set[Weight] = set()
        for i in range(self.rank):
            out |= _orbit(self, tuple(2 * x for x in self.cartan_matrix[i]), range(self.rank))
        return tuple(sorted(out))

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        pos = [r for r in self.roots if all(c >= 0 for c in self.root_coordinates(r))]
        # simple roots first, then by height
        return tuple(sorted(pos, key=lambda r: (sum(self.root_coordinates(r)), r)))

    @cached_property
    def rho(self) -> Weight:
        return (2,) * self.rank


def _orbit(rs: RootSystem, w: Weight, gens) -> set[Weight]:
    seen = {tuple(w)}
    queue = deque(seen)
    gens = tuple(gens)
    while queue:
        x = queue.popleft()
        for i in gens:
            y = rs.reflect(x, i)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _parabolic_order(rs: RootSystem, gens: tuple[int, ...]) -> int:
    # |W_J| = |W_J . omega_j| * |W_{J - j}|; the stabilizer of a fundamental
    # weight in a parabolic subgroup is the parabolic on the remaining nodes.
    if not gens:
        return 1
    j = gens[0]
    w = tuple(2 if i == j else 0 for i in range(rs.rank))
    return len(_orbit(rs, w, gens)) * _parabolic_order(rs, gens[1:])


def build_root_system(t: CartanType | str) -> RootSystem:
    if isinstance(t, str):
        t = CartanType.parse(t)
    real = _realization(t)
    k = t.rank
    raw = [[sum(a * b for a, b in zip(real[i], real[j])) for j in range(k)] for i in range(k)]
    scale = Fraction(2, max(raw[i][i] for i in range(k)))
    gram = tuple(tuple(scale * raw[i][j] for j in range(k)) for i in range(k))
    cartan = tuple(
        tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(k)) for i in range(k)
    )
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k))
    rs = RootSystem(t, ident, gram, cartan)
    object.__setattr__(rs, "weyl_order", _parabolic_order(rs, tuple(range(k))))
    return rs


# -- lattice bridge ------------------------------------------------------------


def doubled(coeffs) -> Weight:
    """Doubled coordinates of the weight ``sum(coeffs[j] * omega_j)``."""
    return tuple(int(2 * Fraction(c)) for c in coeffs)


def undoubled(w: Weight) -> tuple[Fraction, ...]:
    return tuple(Fraction(c, 2) for c in w)


def fundamental(rs: RootSystem, j: int) -> Weight:
    """Doubled coordinates of the ``j``-th fundamental weight (0-based)."""
    return tuple(2 if i == j else 0 for i in range(rs.rank))


# -- orbits and order ----------------------------------------------------------


def weyl_orbit(rs: RootSystem, w: Weight) -> frozenset[Weight]:
    return frozenset(_orbit(rs, tuple(w), range(rs.rank)))


def dominant_representative(rs: RootSystem, w: Weight) -> Weight:
    w = tuple(w)
    while True:
        for i, c in enumerate(w):
            if c < 0:
                w = rs.reflect(w, i)
                break
        else:
            return w


def is_dominant(w: Weight) -> bool:
    return all(c >= 0 for c in w)


def _cone_le(rs: RootSystem, small: Weight, big: Weight) -> bool:
    # big - small in the nonnegative rational cone of simple roots.
    # root coordinates are (diff . adj) / (2 det) and det > 0
    adj = rs._cartan_adj
    k = rs.rank
    diff = [b - s for b, s in zip(big, small)]
    return all(sum(diff[i] * adj[i][j] for i in range(k)) >= 0 for j in range(k))


def hull_contains(rs: RootSystem, big: Weight, small: Weight) -> bool:
    """True iff ``small`` lies in the convex hull of the orbit of ``big``."""
    return _cone_le(rs, dominant_representative(rs, small), dominant_representative(rs, big))


def sort_key(rs: RootSystem, w: Weight):
    return (rs.inner(w, w), tuple(w))


def dominant_weights_in_hull(rs: RootSystem, top: Weight) -> list[Weight]:
    """All dominant doubled-lattice points in ``conv(W . top)``, top last.

    Every doubled-lattice coset is included.  Ordering is by squared norm
    and then lexicographically, which refines the dominance order.
    """
    top = tuple(top)
    if not is_dominant(top):
        raise NotDominant(f"{top} is not dominant")
    k = rs.rank
    # <d, alpha_j^vee> <= |d| |alpha_j^vee| <= |top| * 2 / |alpha_j|
    norm2 = rs.inner(top, top)
    bounds = []
    for j in range(k):
        # doubled coordinate c_j = 2 <d, alpha_j^vee>; c_j^2 <= 16 |top|^2 / |alpha_j|^2
        lim = 16 * norm2 / rs.root_lengths[j]
        b = 0
        while (b + 1) ** 2 <= lim:
            b += 1
        bounds.append(b)
    out = [
        w
        for w in itertools.product(*(range(b + 1) for b in bounds))
        if _cone_le(rs, w, top)
    ]
    out.sort(key=lambda w: sort_key(rs, w))
    return out


def pi_involution(rs: RootSystem) -> tuple[int, ...]:
    """Permutation ``p`` (0-based) with ``-omega_j`` in ``W omega_{p[j]}``."""
    perm = []
    for j in range(rs.rank):
        neg = tuple(-c for c in fundamental(rs, j))
        d = dominant_representative(rs, neg)
        perm.append(d.index(2))
    return tuple(perm)


def in_root_lattice(rs: RootSystem, w: Weight) -> bool:
    return all(c.denominator == 1 for c in rs.root_coordinates(w))
