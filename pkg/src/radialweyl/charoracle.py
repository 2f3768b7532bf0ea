"""Irreducible characters restricted to the maximal torus.

Weight multiplicities come from Freudenthal's recursion in exact rational
arithmetic on the true weight lattice; ``doubled`` moves them onto the
lattice used by the Fourier polynomials.  Nothing here touches the radial
operator, so the results can serve as an independent check of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .fourier import InvariantPolynomial, multiply
from .rootsys import (
    NotDominant,
    RootSystem,
    Weight,
    dominant_representative,
    dominant_weights_in_hull,
    doubled,
    in_root_lattice,
    is_dominant,
    sort_key,
)

__all__ = [
    "HighestWeight",
    "Character",
    "SupportOverflow",
    "NonIntegral",
    "weyl_character",
    "weyl_dimension",
    "check_eigen",
    "product_decompose",
]


class SupportOverflow(ValueError):
    pass


class NonIntegral(ArithmeticError):
    pass


@dataclass(frozen=True)
class HighestWeight:
    """Dominant weight in fundamental-weight coordinates (not doubled)."""

    weight: tuple[int, ...]

    def __post_init__(self):
        w = tuple(self.weight)
        if any(Fraction(c).denominator != 1 for c in w):
            raise ValueError(f"{w} is not integral")
        w = tuple(int(c) for c in w)
        if not is_dominant(w):
            raise NotDominant(f"{w} is not dominant")
        object.__setattr__(self, "weight", w)

    @property
    def doubled(self) -> Weight:
        return doubled(self.weight)

    @classmethod
    def from_doubled(cls, w: Weight) -> "HighestWeight":
        if any(c % 2 for c in w):
            raise ValueError(f"{w} is not on the weight lattice")
        return cls(tuple(c // 2 for c in w))


@dataclass(frozen=True, eq=False)
class Character:
    poly: InvariantPolynomial
    highest: HighestWeight
    multiplicities: dict  # dominant doubled weight -> int

    @property
    def dimension(self) -> int:
        return int(round(sum(a.real for a in self.poly.coeffs.values())))


def _positive_roots(rs: RootSystem) -> list[tuple[int, ...]]:
    # roots are even in doubled coordinates
    return [tuple(c // 2 for c in r) for r in rs.positive_roots]


def _form(rs: RootSystem):
    g = rs.weight_gram

    def inner(a, b):
        return sum(a[i] * g[i][j] * b[j] for i in range(len(a)) for j in range(len(b)) if a[i] and b[j])

    return inner


@lru_cache(maxsize=None)
def _multiplicities(rs: RootSystem, lam: tuple[int, ...]) -> dict:
    inner = _form(rs)
    pos = _positive_roots(rs)
    rho = (1,) * rs.rank
    top = doubled(lam)
    cands = [
        tuple(c // 2 for c in w)
        for w in dominant_weights_in_hull(rs, top)
        if all(c % 2 == 0 for c in w)
        and in_root_lattice(rs, tuple(a - b for a, b in zip(top, w)))
    ]
    # process from the top down: increasing height of lam - mu
    def height(mu):
        return sum(rs.root_coordinates(doubled(tuple(a - b for a, b in zip(lam, mu)))))

    cands.sort(key=height)
    cand_set = set(cands)
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_lr = inner(lr, lr)
    mult: dict = {}
    for mu in cands:
        if mu == lam:
            mult[mu] = Fraction(1)
            continue
        acc = Fraction(0)
        for a in pos:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                rep = tuple(c // 2 for c in dominant_representative(rs, doubled(nu)))
                if rep not in cand_set:
                    break
                m = mult.get(rep, Fraction(0))
                if m == 0:
                    break
                acc += m * inner(nu, a)
                k += 1
        mr = tuple(a + b for a, b in zip(mu, rho))
        val = 2 * acc / (norm_lr - inner(mr, mr))
        if val.denominator != 1:
            raise NonIntegral(f"multiplicity of {mu} came out as {val}")
        mult[mu] = val
    return {doubled(mu): int(m) for mu, m in mult.items() if m}


def weyl_character(rs: RootSystem, hw: HighestWeight) -> Character:
    if not isinstance(hw, HighestWeight):
        hw = HighestWeight(tuple(hw))
    if len(hw.weight) != rs.rank:
        raise ValueError("highest weight has wrong rank")
    mult = _multiplicities(rs, hw.weight)
    poly = InvariantPolynomial.from_orbit_coefficients(rs, mult)
    return Character(poly, hw, dict(mult))


def weyl_dimension(rs: RootSystem, hw: HighestWeight) -> int:
    """Product over positive roots of ``<lam + rho, a> / <rho, a>``."""
    if not isinstance(hw, HighestWeight):
        hw = HighestWeight(tuple(hw))
    inner = _form(rs)
    rho = (1,) * rs.rank
    lr = tuple(a + b for a, b in zip(hw.weight, rho))
    out = Fraction(1)
    for a in _positive_roots(rs):
        out *= inner(lr, a) / inner(rho, a)
    if out.denominator != 1:
        raise NonIntegral(f"dimension {out} is not an integer")
    return int(out)


def check_eigen(m, c: Character, tol: float = 1e-8):
    """Best eigenvalue fit of ``m`` on the orbit coefficients of ``c``.

    ``m`` is anything with ``basis`` (dominant doubled weights) and a square
    ``entries`` array.  Returns ``(is_eigen, eigenvalue, residual)`` where the
    residual is ``|M x - lam x|_inf / |x|_inf``.
    """
    index = {tuple(w): i for i, w in enumerate(m.basis)}
    x = np.zeros(len(index), dtype=complex)
    for w, a in c.poly.orbit_coefficients().items():
        i = index.get(w)
        if i is None:
            raise SupportOverflow(f"character weight {w} is outside the matrix basis")
        x[i] = a
    y = np.asarray(m.entries) @ x
    lam = complex(np.vdot(x, y) / np.vdot(x, x))
    residual = float(np.max(np.abs(y - lam * x)) / np.max(np.abs(x)))
    return residual <= tol, lam, residual


def product_decompose(a: Character, b: Character) -> dict:
    """Multiplicities of irreducibles in ``a * b`` by top-down subtraction."""
    rs = a.poly.rs
    rest = {w: v for w, v in multiply(a.poly, b.poly).coeffs.items() if is_dominant(w)}
    out: dict = {}
    while True:
        live = [w for w, v in rest.items() if abs(v) > 1e-9]
        if not live:
            return out
        top = max(live, key=lambda w: sort_key(rs, w))
        v = rest[top]
        n = round(v.real)
        if abs(v - n) > 1e-9 or n <= 0:
            raise NonIntegral(f"coefficient {v} at {top} is not a positive integer")
        hw = HighestWeight.from_doubled(top)
        out[hw] = n
        for w, mlt in weyl_character(rs, hw).multiplicities.items():
            rest[w] = rest.get(w, 0) - n * mlt
