"""The radial operator on invariant Fourier polynomials.

For focal data ``(v_j, l_j, m_j^+, m_j^-)`` with functionals
``alpha_j(x) = <x, v_j> / (2 l_j)`` the operator is

    delta(f) = Lap(f) + sum_j pi/(2 l_j) (m_j^- tan(pi alpha_j) - m_j^+ cot(pi alpha_j)) v_j(f)

with the positive Laplacian.  On orbit sums it is triangular with respect to
the convex-hull order, so eigenfunctions come out of back substitution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .fourier import (
    FourierPolynomial,
    InvariantPolynomial,
    NotSmooth,
    cot_multiply,
    directional_derivative,
    laplacian,
    orbit_sum,
    tan_multiply,
)
from .rootsys import (
    RootSystem,
    Weight,
    dominant_representative,
    dominant_weights_in_hull,
    fundamental,
    hull_contains,
    in_root_lattice,
    is_dominant,
    pi_involution,
)

__all__ = [
    "FocalEntry",
    "FocalData",
    "RadialOperator",
    "OperatorMatrix",
    "SingularPoint",
    "DegenerateSpectrum",
    "NotSmooth",
    "group_case_focal",
    "mean_curvature_closed_form",
    "apply",
    "assemble_matrix",
    "eigenfunctions",
    "generators",
    "generator_layout",
]

UNIT_TOL = 1e-12
SINGULAR_TOL = 1e-10
COLLISION_TOL = 1e-8


class SingularPoint(ValueError):
    pass


class DegenerateSpectrum(ArithmeticError):
    def __init__(self, msg, weights=()):
        super().__init__(msg)
        self.weights = tuple(weights)


@dataclass(frozen=True)
class FocalEntry:
    direction: tuple[float, ...]
    spacing: float
    m_plus: int
    m_minus: int
    alpha: Weight

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(float(x) for x in self.direction))
        object.__setattr__(self, "alpha", tuple(int(c) for c in self.alpha))
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"spacing must be finite and positive, got {self.spacing}")
        if self.m_plus < 0 or self.m_minus < 0:
            raise ValueError("multiplicities must be nonnegative")
        if len(self.alpha) != len(self.direction):
            raise ValueError("alpha and direction have different lengths")


@dataclass(frozen=True, eq=False)
class FocalData:
    """Families of parallel focal hyperplanes on the section.

    ``gram`` is the inner product of the ambient coordinates; ``None``
    means Euclidean coordinates.
    """

    rank: int
    entries: tuple[FocalEntry, ...]
    gram: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.gram is not None:
            object.__setattr__(self, "gram", np.asarray(self.gram, dtype=float))
        g = self.metric
        for e in self.entries:
            if len(e.direction) != self.rank:
                raise ValueError("direction has wrong dimension")
            v = np.array(e.direction)
            if abs(v @ g @ v - 1.0) > UNIT_TOL:
                raise ValueError(f"direction {e.direction} is not a unit vector")
        if self.entries:
            dirs = np.array([e.direction for e in self.entries])
            if np.linalg.matrix_rank(dirs) < self.rank:
                raise ValueError("focal directions do not span the section")
        elif self.rank > 0:
            raise ValueError("focal directions do not span the section")

    @property
    def metric(self) -> np.ndarray:
        return np.eye(self.rank) if self.gram is None else self.gram

    def to_json(self) -> dict:
        out = {
            "rank": self.rank,
            "entries": [
                {
                    "direction": list(e.direction),
                    "spacing": e.spacing,
                    "m_plus": e.m_plus,
                    "m_minus": e.m_minus,
                    "alpha": list(e.alpha),
                }
                for e in self.entries
            ],
        }
        if self.gram is not None:
            out["gram"] = self.gram.tolist()
        return out

    @classmethod
    def from_json(cls, data, gram=None) -> "FocalData":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        try:
            entries = [
                FocalEntry(
                    tuple(e["direction"]),
                    float(e["spacing"]),
                    int(e["m_plus"]),
                    int(e["m_minus"]),
                    tuple(e["alpha"]),
                )
                for e in data["entries"]
            ]
            rank = int(data["rank"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed focal data: {exc}") from exc
        return cls(rank, tuple(entries), data.get("gram", gram))

    def functionals(self, q) -> np.ndarray:
        """Values ``alpha_i(q)`` for every entry."""
        q = np.asarray(q, dtype=float)
        g = self.metric
        return np.array([np.array(e.direction) @ g @ q / (2 * e.spacing) for e in self.entries])


def _check_regular(alphas):
    for a in alphas:
        if abs(2 * a - round(2 * a)) < SINGULAR_TOL:
            raise SingularPoint(f"point lies on a focal hyperplane (2 alpha = {2 * a:.12g})")


def group_case_focal(rs: RootSystem, multiplicity: int) -> FocalData:
    """Focal data of the conjugation action: one family per positive root.

    The hyperplanes of the root ``a`` are ``{a in Z}``, so the unit normal is
    ``a/|a|``, neighbours are ``1/|a|`` apart and ``alpha = a/2``.
    """
    if multiplicity < 0:
        raise ValueError("multiplicity must be nonnegative")
    entries = []
    for r in rs.positive_roots:
        norm = math.sqrt(float(rs.inner(r, r)))
        amb = np.array([float(x) for x in rs.weight_to_ambient(r)])
        entries.append(
            FocalEntry(
                tuple(amb / norm),
                1.0 / norm,
                multiplicity,
                multiplicity,
                tuple(c // 2 for c in r),
            )
        )
    gram = np.array([[float(x) for x in row] for row in rs.gram])
    return FocalData(rs.rank, tuple(entries), gram)


def mean_curvature_closed_form(fd: FocalData, q) -> np.ndarray:
    alphas = fd.functionals(q)
    _check_regular(alphas)
    out = np.zeros(fd.rank)
    for e, a in zip(fd.entries, alphas):
        t = math.pi * a
        coef = math.pi / (2 * e.spacing) * (e.m_minus * math.tan(t) - e.m_plus / math.tan(t))
        out += coef * np.array(e.direction)
    return out


@dataclass(frozen=True, eq=False)
class RadialOperator:
    root_system: RootSystem
    focal: FocalData

    def __post_init__(self):
        rs, fd = self.root_system, self.focal
        if fd.rank != rs.rank:
            raise ValueError("focal data and root system have different rank")
        g = fd.metric
        for e in fd.entries:
            amb = np.array([float(x) for x in rs.weight_to_ambient(e.alpha)])
            if not np.allclose(amb, np.array(e.direction) / (2 * e.spacing), atol=1e-9):
                raise ValueError(f"alpha {e.alpha} does not match direction/spacing")
        rsg = np.array([[float(x) for x in row] for row in rs.gram])
        if not np.allclose(g, rsg, atol=1e-12):
            raise ValueError("focal data metric differs from the root system gram")
        # W-stability of the families (up to sign, with multiplicities)
        fams = self._families
        for i in range(rs.rank):
            image = {}
            for (a, mp, mm), n in fams.items():
                key = (_unsigned(rs.reflect(a, i)), mp, mm)
                image[key] = image.get(key, 0) + n
            if image != fams:
                raise ValueError("focal data is not stable under the Weyl group")

    @cached_property
    def _families(self):
        out = {}
        for e in self.focal.entries:
            key = (_unsigned(e.alpha), e.m_plus, e.m_minus)
            out[key] = out.get(key, 0) + 1
        return out

    @cached_property
    def _alpha_norms(self):
        rs = self.root_system
        return [(e.alpha, rs.inner(e.alpha, e.alpha)) for e in self.focal.entries]

    def admits(self, w: Weight) -> bool:
        """True iff ``e^{2 pi i w}`` is periodic under the translation lattice."""
        rs = self.root_system
        for a, n in self._alpha_norms:
            if (rs.inner(w, a) / n).denominator != 1:
                return False
        return True

    def __call__(self, f):
        return apply(self, f)


def _unsigned(a: Weight) -> Weight:
    neg = tuple(-c for c in a)
    return max(tuple(a), neg)


def apply(op: RadialOperator, f: FourierPolynomial) -> InvariantPolynomial:
    out = dict(laplacian(f).coeffs)
    for e in op.focal.entries:
        if not (e.m_plus or e.m_minus):
            continue
        df = directional_derivative(f, e.direction)
        c = math.pi / (2 * e.spacing)
        terms = []
        if e.m_minus:
            terms.append((c * e.m_minus, tan_multiply(df, e.alpha)))
        if e.m_plus:
            terms.append((-c * e.m_plus, cot_multiply(df, e.alpha)))
        for k, g in terms:
            for w, b in g.coeffs.items():
                out[w] = out.get(w, 0j) + k * b
    return f._like(out, invariant=isinstance(f, InvariantPolynomial))


@dataclass(eq=False)
class OperatorMatrix:
    """Matrix of the radial operator in an orbit-sum basis.

    ``entries[r, c]`` is the coefficient of ``S(basis[r])`` in the image of
    ``S(basis[c])``.
    """

    basis: list[Weight]
    entries: np.ndarray
    root_system: RootSystem | None = None
    leakage: float = 0.0

    @property
    def size(self) -> int:
        return len(self.basis)

    def index(self, w) -> int:
        return self.basis.index(tuple(w))

    def off_hull_max(self) -> float:
        """Largest entry where the row weight is outside the column's hull."""
        rs = self.root_system
        worst = 0.0
        for c, wc in enumerate(self.basis):
            for r, wr in enumerate(self.basis):
                if not hull_contains(rs, wc, wr):
                    worst = max(worst, abs(self.entries[r, c]))
        return worst

    def above_diagonal_max(self) -> float:
        """Largest entry strictly below the diagonal, i.e. against the order."""
        if self.size < 2:
            return 0.0
        return float(np.max(np.abs(np.tril(self.entries, -1))))

    def to_json(self) -> dict:
        return {
            "basis": [list(w) for w in self.basis],
            "matrix": [[[z.real, z.imag] for z in row] for row in self.entries.tolist()],
        }

    @classmethod
    def from_json(cls, data, rs=None) -> "OperatorMatrix":
        basis = [tuple(w) for w in data["basis"]]
        entries = np.array(
            [[complex(re, im) for re, im in row] for row in data["matrix"]], dtype=complex
        ).reshape(len(basis), len(basis))
        return cls(basis, entries, rs)


def assemble_matrix(
    op: RadialOperator, top: Weight, *, root_coset: bool = False
) -> OperatorMatrix:
    """Matrix of ``op`` on the orbit sums with exponents in ``conv(W top)``.

    The basis is every dominant hull point admitted by the translation
    lattice; with ``root_coset`` only those congruent to ``top`` modulo the
    root lattice are kept.
    """
    rs = op.root_system
    top = tuple(top)
    basis = [w for w in dominant_weights_in_hull(rs, top) if op.admits(w)]
    if root_coset:
        basis = [
            w for w in basis if in_root_lattice(rs, tuple(a - b for a, b in zip(w, top)))
        ]
    index = {w: i for i, w in enumerate(basis)}
    n = len(basis)
    entries = np.zeros((n, n), dtype=complex)
    leak = 0.0
    for c, w in enumerate(basis):
        img = apply(op, orbit_sum(rs, w))
        for u, a in img.coeffs.items():
            if not is_dominant(u):
                continue
            r = index.get(u)
            if r is None:
                leak = max(leak, abs(a))
            else:
                entries[r, c] = a
    scale = max(1.0, float(np.max(np.abs(entries))) if n else 1.0)
    if leak > 1e-8 * scale:
        raise ValueError(f"operator image leaves the basis (leak {leak:.3g})")
    return OperatorMatrix(basis, entries, rs, leak)


def eigenfunctions(m: OperatorMatrix) -> list[tuple[complex, InvariantPolynomial]]:
    """One eigenpair per basis weight, by back substitution.

    The eigenfunction for ``basis[j]`` has coefficient 1 on ``S(basis[j])``
    and otherwise only lower weights.  A diagonal collision is accepted when
    the coupling that would have to be divided by zero vanishes (the block is
    already diagonal); otherwise the spectrum is defective.
    """
    a = m.entries
    n = m.size
    diag = np.diag(a)
    scale = max(1.0, float(np.max(np.abs(a)))) if n else 1.0
    tol = COLLISION_TOL * scale
    out = []
    for j in range(n):
        lam = diag[j]
        c = np.zeros(n, dtype=complex)
        c[j] = 1.0
        for i in range(j - 1, -1, -1):
            rhs = a[i, i + 1 : j + 1] @ c[i + 1 : j + 1]
            piv = diag[i] - lam
            if abs(piv) <= tol:
                if abs(rhs) > tol * max(1.0, float(np.max(np.abs(c)))):
                    raise DegenerateSpectrum(
                        f"defective eigenvalue {lam:.6g} shared by "
                        f"{m.basis[i]} and {m.basis[j]}",
                        (m.basis[i], m.basis[j]),
                    )
                c[i] = 0.0
            else:
                c[i] = -rhs / piv
        phi = InvariantPolynomial.from_orbit_coefficients(
            m.root_system, {m.basis[i]: c[i] for i in range(j + 1) if c[i] != 0}
        )
        out.append((complex(lam), phi))
    return out


def generator_layout(rs: RootSystem) -> list[tuple[int, str]]:
    """Which eigenfunction and which part each generator is taken from.

    Fixed points of the involution give real parts; each swapped pair gives
    the real and imaginary part of its first member.
    """
    perm = pi_involution(rs)
    fixed = [j for j in range(rs.rank) if perm[j] == j]
    firsts = [j for j in range(rs.rank) if perm[j] > j]
    return [(j, "re") for j in fixed + firsts] + [(j, "im") for j in firsts]


def generators(op: RadialOperator, level: int) -> list[InvariantPolynomial]:
    """Real eigenfunctions ``psi_1..psi_k`` generating the invariant algebra."""
    if level < 1:
        raise ValueError("level must be positive")
    rs = op.root_system
    top = tuple(level * c for c in rs.rho)
    m = assemble_matrix(op, top)
    pairs = eigenfunctions(m)
    out = []
    for j, part in generator_layout(rs):
        w = fundamental(rs, j)
        if w not in m.basis:
            raise ValueError(f"fundamental weight {w} is not admitted by the focal data")
        _, phi = pairs[m.index(w)]
        out.append(phi.real_part() if part == "re" else phi.imag_part())
    return out
