"""Finite Fourier polynomials on the section.

A polynomial is a finite map from doubled weights to complex coefficients,
``f(x) = sum a_w exp(2 pi i <w, x>)``, where ``x`` is a point of the ambient
space in simple-root coordinates and ``<., .>`` is the Gram pairing.

Multiplication by ``cot(pi alpha)`` and ``tan(pi alpha)`` is done exactly on
coefficients.  Writing ``g = f cot(pi alpha)`` and using
``cot(pi z) = i (e^{2 pi i z} + 1) / (e^{2 pi i z} - 1)`` gives, along each
``alpha``-string ``w0 + k alpha``,

    b[k+1] = b[k] - i (a[k] + a[k+1])

and for ``tan(pi z) = -i (e^{2 pi i z} - 1) / (e^{2 pi i z} + 1)``

    b[k+1] = -b[k] - i (a[k] - a[k+1]).

The recursion is seeded with ``b = 0`` just below the lowest support point of
the string and must return to zero just above the highest one; a leftover
value means ``f`` does not vanish where the multiplier has its poles.
"""

from __future__ import annotations

import math
from collections import defaultdict
from functools import lru_cache

import numpy as np

from .rootsys import RootSystem, Weight, dominant_representative, weyl_orbit

__all__ = [
    "FourierPolynomial",
    "InvariantPolynomial",
    "NotSmooth",
    "orbit_sum",
    "evaluate",
    "add",
    "scale",
    "multiply",
    "laplacian",
    "directional_derivative",
    "cot_multiply",
    "tan_multiply",
    "in_support_hull",
]

CLEANUP = 1e-14
SMOOTH_TOL = 1e-12


class NotSmooth(ArithmeticError):
    """The tan/cot product has a pole: ``f`` does not vanish where it must."""


@lru_cache(maxsize=None)
def _pairing(rs: RootSystem) -> np.ndarray:
    # rows: doubled weight basis vectors; <w, x> = w @ P @ x
    fw = np.array([[float(c) for c in row] for row in rs.fundamental_weights])
    g = np.array([[float(c) for c in row] for row in rs.gram])
    return 0.5 * fw @ g


class FourierPolynomial:
    """Finite sum ``sum a_w e^{2 pi i w}`` over doubled weights."""

    __slots__ = ("rs", "coeffs")

    def __init__(self, rs: RootSystem, coeffs=None, *, clean: bool = True):
        self.rs = rs
        data = {}
        if coeffs:
            for w, a in dict(coeffs).items():
                data[tuple(int(c) for c in w)] = complex(a)
        self.coeffs = _cleaned(data) if clean else data

    # -- construction helpers ----------------------------------------------

    @classmethod
    def constant(cls, rs, value=1.0):
        return cls(rs, {(0,) * rs.rank: value})

    @classmethod
    def monomial(cls, rs, w, value=1.0):
        return cls(rs, {tuple(w): value})

    def _like(self, coeffs, *, invariant=False, clean=True):
        kind = InvariantPolynomial if invariant else FourierPolynomial
        out = kind.__new__(kind)
        out.rs = self.rs
        out.coeffs = _cleaned(coeffs) if clean else coeffs
        return out

    # -- basic queries -------------------------------------------------------

    @property
    def support(self) -> set[Weight]:
        return set(self.coeffs)

    def __getitem__(self, w) -> complex:
        return self.coeffs.get(tuple(w), 0j)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs.items())

    def __bool__(self):
        return bool(self.coeffs)

    def norm(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(a) for a in self.coeffs.values()), default=0.0)

    def __repr__(self):
        terms = ", ".join(f"{w}: {a:.6g}" for w, a in sorted(self.coeffs.items()))
        return f"{type(self).__name__}({{{terms}}})"

    def allclose(self, other, tol=1e-12) -> bool:
        keys = self.support | other.support
        return all(abs(self[w] - other[w]) <= tol for w in keys)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, FourierPolynomial):
            other = FourierPolynomial.constant(self.rs, other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FourierPolynomial):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return scale(self, 1 / c)

    def conj(self):
        """Pointwise complex conjugate: ``a_w -> conj(a_{-w})``."""
        return self._like(
            {tuple(-c for c in w): a.conjugate() for w, a in self.coeffs.items()},
            invariant=isinstance(self, InvariantPolynomial),
        )

    def real_part(self):
        return (self + self.conj()) * 0.5

    def imag_part(self):
        return (self - self.conj()) * (-0.5j)

    def is_real(self, tol=1e-12) -> bool:
        scale_ = max(self.norm(), 1.0)
        return all(
            abs(a - self[tuple(-c for c in w)].conjugate()) <= tol * scale_
            for w, a in self.coeffs.items()
        )

    def is_invariant(self, tol=1e-12) -> bool:
        scale_ = max(self.norm(), 1.0)
        for w, a in self.coeffs.items():
            d = dominant_representative(self.rs, w)
            if abs(a - self[d]) > tol * scale_:
                return False
        return True

    # -- evaluation and operators --------------------------------------------

    def __call__(self, x):
        return evaluate(self, x)

    def laplacian(self):
        return laplacian(self)

    def derivative(self, v):
        return directional_derivative(self, v)

    def cot_multiply(self, alpha):
        return cot_multiply(self, alpha)

    def tan_multiply(self, alpha):
        return tan_multiply(self, alpha)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(w), "re": a.real, "im": a.imag}
            for w, a in sorted(self.coeffs.items())
        ]

    @classmethod
    def from_json(cls, rs, items):
        return cls(rs, {tuple(t["exp"]): complex(t["re"], t["im"]) for t in items})


class InvariantPolynomial(FourierPolynomial):
    """Fourier polynomial with coefficients constant on Weyl orbits."""

    __slots__ = ()

    def __init__(self, rs, coeffs=None, *, check: bool = True, tol: float = 1e-12):
        super().__init__(rs, coeffs)
        if check and not self.is_invariant(tol):
            raise ValueError("coefficients are not constant on Weyl orbits")

    @classmethod
    def from_orbit_coefficients(cls, rs, coeffs):
        """Build ``sum c_d S(e^{2 pi i d})`` from a map on dominant weights."""
        data = {}
        for d, c in dict(coeffs).items():
            for w in weyl_orbit(rs, tuple(d)):
                data[w] = complex(c)
        return cls(rs, data, check=False)

    def orbit_coefficients(self) -> dict[Weight, complex]:
        """Coefficients in the orbit-sum basis, keyed by dominant weight."""
        return {w: a for w, a in self.coeffs.items() if all(c >= 0 for c in w)}


def _cleaned(coeffs: dict) -> dict:
    if not coeffs:
        return {}
    top = max(abs(a) for a in coeffs.values())
    if top == 0.0:
        return {}
    cut = CLEANUP * top
    return {w: a for w, a in coeffs.items() if abs(a) > cut}


def _both_invariant(*polys) -> bool:
    return all(isinstance(p, InvariantPolynomial) for p in polys)


def orbit_sum(rs: RootSystem, w: Weight) -> InvariantPolynomial:
    return InvariantPolynomial(rs, {v: 1.0 for v in weyl_orbit(rs, tuple(w))}, check=False)


def evaluate(f: FourierPolynomial, x):
    """Value of ``f`` at one point (shape ``(rank,)``) or many (``(m, rank)``)."""
    x = np.asarray(x, dtype=float)
    if not f.coeffs:
        return 0j if x.ndim == 1 else np.zeros(x.shape[0], dtype=complex)
    exps = np.array(list(f.coeffs.keys()), dtype=float)
    amps = np.array(list(f.coeffs.values()), dtype=complex)
    phase = exps @ _pairing(f.rs) @ np.atleast_2d(x).T  # (terms, points)
    vals = amps @ np.exp(2j * np.pi * phase)
    return complex(vals[0]) if x.ndim == 1 else vals


def add(f: FourierPolynomial, g: FourierPolynomial) -> FourierPolynomial:
    out = dict(f.coeffs)
    for w, a in g.coeffs.items():
        out[w] = out.get(w, 0j) + a
    return f._like(out, invariant=_both_invariant(f, g))


def scale(f: FourierPolynomial, c) -> FourierPolynomial:
    c = complex(c)
    return f._like({w: c * a for w, a in f.coeffs.items()}, invariant=_both_invariant(f))


def multiply(f: FourierPolynomial, g: FourierPolynomial) -> FourierPolynomial:
    out: dict = defaultdict(complex)
    for u, a in f.coeffs.items():
        for v, b in g.coeffs.items():
            out[tuple(x + y for x, y in zip(u, v))] += a * b
    return f._like(dict(out), invariant=_both_invariant(f, g))


def laplacian(f: FourierPolynomial) -> FourierPolynomial:
    """Positive Laplacian: ``e^{2 pi i w} -> 4 pi^2 <w, w> e^{2 pi i w}``."""
    rs = f.rs
    four_pi2 = 4 * math.pi**2
    return f._like(
        {w: four_pi2 * float(rs.inner(w, w)) * a for w, a in f.coeffs.items()},
        invariant=_both_invariant(f),
    )


def directional_derivative(f: FourierPolynomial, v) -> FourierPolynomial:
    """Derivative along the ambient vector ``v``."""
    v = np.asarray(v, dtype=float)
    if v.shape != (f.rs.rank,):
        raise ValueError(f"direction must have length {f.rs.rank}")
    pv = _pairing(f.rs) @ v
    return f._like(
        {w: 2j * math.pi * float(np.dot(w, pv)) * a for w, a in f.coeffs.items()}
    )


def _strings(coeffs: dict, alpha: Weight):
    j = next(i for i, c in enumerate(alpha) if c != 0)
    aj = alpha[j]
    strings: dict = defaultdict(dict)
    for w, a in coeffs.items():
        k = w[j] // aj
        base = tuple(x - k * y for x, y in zip(w, alpha))
        strings[base][k] = a
    return strings


def _string_multiply(f: FourierPolynomial, alpha, step, name) -> FourierPolynomial:
    alpha = tuple(int(c) for c in alpha)
    if not any(alpha):
        raise ValueError("alpha must be nonzero")
    if not f.coeffs:
        return f._like({})
    tol = SMOOTH_TOL * f.norm()
    out = {}
    for base, coeffs in _strings(f.coeffs, alpha).items():
        lo, hi = min(coeffs), max(coeffs)
        b = 0j
        prev = 0j
        for k in range(lo - 1, hi + 1):
            a_next = coeffs.get(k + 1, 0j)
            b = step(b, prev, a_next)
            prev = a_next
            if k + 1 <= hi:
                out[tuple(x + (k + 1) * y for x, y in zip(base, alpha))] = b
        if abs(b) > tol:
            raise NotSmooth(
                f"f {name}(pi alpha) has a pole on the string through {base} "
                f"(residual {abs(b):.3g})"
            )
    return f._like(out)


def cot_multiply(f: FourierPolynomial, alpha: Weight) -> FourierPolynomial:
    """Coefficients of the smooth extension of ``f * cot(pi alpha)``."""
    return _string_multiply(f, alpha, lambda b, a0, a1: b - 1j * (a0 + a1), "cot")


def tan_multiply(f: FourierPolynomial, alpha: Weight) -> FourierPolynomial:
    """Coefficients of the smooth extension of ``f * tan(pi alpha)``."""
    return _string_multiply(f, alpha, lambda b, a0, a1: -b - 1j * (a0 - a1), "tan")


# -- convex hull of a finite support ------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(a, b, p):
    return (
        _cross(a, b, p) == 0
        and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def in_support_hull(points, w) -> bool:
    """Exact test of ``w`` in the convex hull of integer ``points``.

    Exact in rank 1 and 2; higher ranks fall back to a linear program.
    """
    points = [tuple(p) for p in points]
    w = tuple(w)
    if not points:
        return False
    dim = len(w)
    if dim == 1:
        xs = [p[0] for p in points]
        return min(xs) <= w[0] <= max(xs)
    if dim == 2:
        hull = _hull_2d(points)
        if len(hull) == 1:
            return hull[0] == w
        if len(hull) == 2:
            return _on_segment(hull[0], hull[1], w)
        n = len(hull)
        return all(_cross(hull[i], hull[(i + 1) % n], w) >= 0 for i in range(n))
    from scipy.optimize import linprog

    pts = np.array(points, dtype=float).T
    a_eq = np.vstack([pts, np.ones(pts.shape[1])])
    b_eq = np.append(np.array(w, dtype=float), 1.0)
    res = linprog(np.zeros(pts.shape[1]), A_eq=a_eq, b_eq=b_eq, bounds=(0, None))
    return bool(res.status == 0)
