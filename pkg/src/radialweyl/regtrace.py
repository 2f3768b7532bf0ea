"""Regularized traces of ordered spectra.

A spectrum is split into positive values ``lam_1 >= lam_2 >= ... > 0`` and
negative values ``mu_1 <= mu_2 <= ... < 0``; the regularized trace pairs
them by index, ``sum_k (lam_k + mu_k)``, with an exhausted side read as zero.
Infinite sides are represented by prefix functions so only what is summed
is ever materialised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .radialop import FocalEntry, SingularPoint

__all__ = [
    "EigenSequence",
    "RegularizedValue",
    "FocalHit",
    "PoleProximity",
    "SingularPoint",
    "reg_trace",
    "direct_sum",
    "negate",
    "rank_one_perturbation_check",
    "secular_eigenvalues",
    "focal_spectrum",
    "parallel_transform",
    "parallel_trace_function",
    "focal_trace_gap",
]

FOCAL_HIT_TOL = 1e-12
POLE_TOL = 1e-9
SINGULAR_TOL = 1e-10

Prefix = Callable[[int], np.ndarray]


class FocalHit(ArithmeticError):
    pass


class PoleProximity(ArithmeticError):
    pass


def _empty(n: int) -> np.ndarray:
    return np.zeros(0)


class EigenSequence:
    """Ordered positive and negative eigenvalues given by prefix functions.

    ``positive(n)`` returns the first ``n`` positive values (fewer if that
    side is finite), and likewise ``negative(n)``.
    """

    __slots__ = ("_pos", "_neg")

    def __init__(self, positive: Prefix | None = None, negative: Prefix | None = None):
        self._pos = positive or _empty
        self._neg = negative or _empty

    def positive(self, n: int) -> np.ndarray:
        return np.asarray(self._pos(n), dtype=float)[:n]

    def negative(self, n: int) -> np.ndarray:
        return np.asarray(self._neg(n), dtype=float)[:n]

    @classmethod
    def empty(cls) -> "EigenSequence":
        return cls()

    @classmethod
    def finite(cls, values) -> "EigenSequence":
        """Zeros are dropped; the order of ``values`` is irrelevant."""
        v = np.asarray(values, dtype=float).ravel()
        pos = np.sort(v[v > 0])[::-1].copy()
        neg = np.sort(v[v < 0])
        return cls(lambda n: pos[:n], lambda n: neg[:n])

    @classmethod
    def from_terms(cls, positive=None, negative=None) -> "EigenSequence":
        """Infinite sides from vectorised term maps ``k -> value``, ``k >= 1``."""

        def wrap(term):
            if term is None:
                return None
            return lambda n: np.asarray(term(np.arange(1, n + 1, dtype=float)), dtype=float)

        return cls(wrap(positive), wrap(negative))

    def is_ordered(self, n: int) -> bool:
        p, q = self.positive(n), self.negative(n)
        return bool(
            np.all(p > 0) and np.all(q < 0) and np.all(np.diff(p) <= 0) and np.all(np.diff(q) >= 0)
        )

    def to_json(self, n: int) -> dict:
        """Run-length encoded prefixes as ``[value, multiplicity]`` pairs."""

        def rle(values):
            out = []
            for x in values.tolist():
                if out and out[-1][0] == x:
                    out[-1][1] += 1
                else:
                    out.append([x, 1])
            return out

        return {"positive": rle(self.positive(n)), "negative": rle(self.negative(n))}


@dataclass(frozen=True)
class RegularizedValue:
    value: float
    truncation: int
    tail_bound: float

    def __post_init__(self):
        if not self.tail_bound >= 0:
            raise ValueError("tail_bound must be nonnegative")


def _paired_partial_sums(p: np.ndarray, q: np.ndarray, n: int) -> np.ndarray:
    terms = np.zeros(n)
    terms[: len(p)] += p
    terms[: len(q)] += q
    return np.cumsum(terms)


def _regularized(p, q, n, exhausted) -> RegularizedValue:
    partial = _paired_partial_sums(p, q, n)
    value = math.fsum(p) + math.fsum(q)
    if exhausted:
        tail = 0.0
    else:
        half = max(1, (n + 1) // 2)
        tail = 10.0 * float(abs(partial[-1] - partial[half - 1]))
    return RegularizedValue(value, n, tail)


def reg_trace(s: EigenSequence, n: int) -> RegularizedValue:
    """Index-paired partial sum with a tail estimate.

    The tail estimate is ten times the change over the second half of the
    partial sums, which dominates any ``O(1/n)`` remainder; it is zero once
    both sides are exhausted.
    """
    if n < 1:
        raise ValueError("truncation must be at least 1")
    p, q = s.positive(n + 1), s.negative(n + 1)
    exhausted = len(p) <= n and len(q) <= n
    return _regularized(p[:n], q[:n], n, exhausted)


def direct_sum(a: EigenSequence, b: EigenSequence) -> EigenSequence:
    def pos(n):
        return np.sort(np.concatenate([a.positive(n), b.positive(n)]))[::-1][:n]

    def neg(n):
        return np.sort(np.concatenate([a.negative(n), b.negative(n)]))[:n]

    return EigenSequence(pos, neg)


def negate(s: EigenSequence) -> EigenSequence:
    return EigenSequence(lambda n: -s.negative(n), lambda n: -s.positive(n))


# -- rank-one perturbations ----------------------------------------------------


def _solve_secular(d: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Roots of ``1 + sum z2_j / (d_j - lam)`` for strictly increasing ``d``.

    Each root is found relative to its nearer pole, by a two-pole rational
    model matched to the split sums at the current iterate, kept inside a
    bisection bracket.
    """
    m = len(d)
    if m == 0:
        return np.zeros(0)
    total = z2.sum()
    idx = np.arange(m)
    right = np.append(d[1:], d[-1] + total)
    gap = right - d
    # choose the origin on the side of the root
    mid = 0.5 * (d + right)
    fmid = 1.0 + (z2[None, :] / (d[None, :] - mid[:, None])).sum(axis=1)
    left_origin = (fmid > 0) | (idx == m - 1)
    k = np.where(left_origin, idx, np.minimum(idx + 1, m - 1))
    origin = d[k]
    delta = d[None, :] - origin[:, None]  # exact pole offsets
    lo = np.where(left_origin, 0.0, -gap * 0.5)
    hi = np.where(left_origin, np.where(idx == m - 1, total, gap * 0.5), 0.0)
    dl = np.where(left_origin, 0.0, -gap)  # left pole relative to origin
    dr = np.where(left_origin, gap, 0.0)
    last = idx == m - 1
    tau = 0.5 * (lo + hi)
    lower = idx[None, :] <= idx[:, None]  # poles at or left of the root's interval
    eps = np.finfo(float).eps
    active = np.ones(m, dtype=bool)
    for _ in range(60):
        if not active.any():
            break
        a = np.flatnonzero(active)
        diff = delta[a] - tau[a, None]
        w = z2[None, :] / diff
        lw = lower[a]
        psi = np.where(lw, w, 0.0).sum(axis=1)
        phi = np.where(lw, 0.0, w).sum(axis=1)
        w2 = w / diff
        dpsi = np.where(lw, w2, 0.0).sum(axis=1)
        dphi = np.where(lw, 0.0, w2).sum(axis=1)
        f = 1.0 + psi + phi
        err = eps * m * (1.0 + np.abs(psi) + np.abs(phi))
        ta = tau[a]
        lo[a] = np.where(f < 0, ta, lo[a])
        hi[a] = np.where(f > 0, ta, hi[a])
        done = (np.abs(f) <= err) | (hi[a] - lo[a] <= 4 * eps * np.maximum(np.abs(ta), np.abs(origin[a])))
        # rational model c + s/(dl - x) + S/(dr - x)
        el, er = dl[a] - ta, dr[a] - ta
        s = el**2 * dpsi
        S = np.where(last[a], 0.0, er**2 * dphi)
        c = f - s / el - np.where(last[a], 0.0, S / er)
        with np.errstate(divide="ignore", invalid="ignore"):
            qa = c
            qb = -(c * (dl[a] + dr[a]) + s + S)
            qc = c * dl[a] * dr[a] + s * dr[a] + S * dl[a]
            disc = np.sqrt(np.maximum(qb**2 - 4 * qa * qc, 0.0))
            t = -0.5 * (qb + np.copysign(disc, qb))
            r1, r2 = t / qa, qc / t
            single = dl[a] + s / c
        r = np.where(last[a], single, np.where((r1 > lo[a]) & (r1 < hi[a]), r1, r2))
        ok = np.isfinite(r) & (r > lo[a]) & (r < hi[a])
        new = np.where(ok, r, 0.5 * (lo[a] + hi[a]))
        tau[a] = np.where(done, ta, new)
        active[a[done]] = False
    return origin + tau


def secular_eigenvalues(diag, v, sign: int = 1) -> np.ndarray:
    """Eigenvalues of ``diag(d) + sign * v v^T``, ascending."""
    d = np.asarray(diag, dtype=float)
    v = np.asarray(v, dtype=float)
    if d.shape != v.shape or d.ndim != 1:
        raise ValueError("diag and v must be vectors of the same length")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if sign < 0:
        return -secular_eigenvalues(-d, v, 1)[::-1]
    order = np.argsort(d, kind="stable")
    d, v = d[order], v[order]
    scale = max(np.max(np.abs(d), initial=0.0), float(v @ v))
    tol = 8 * np.finfo(float).eps * max(scale, 1e-300)
    fixed = list(d[np.abs(v) <= math.sqrt(tol) * 1e-4]) if len(d) else []
    keep = np.abs(v) > math.sqrt(tol) * 1e-4
    d, z2 = d[keep], v[keep] ** 2
    # merge coincident poles; one eigenvalue per extra copy stays put
    md, mz = [], []
    for x, w in zip(d, z2):
        if md and x - md[-1] <= tol:
            mz[-1] += w
            fixed.append(x)
        else:
            md.append(x)
            mz.append(w)
    roots = _solve_secular(np.array(md), np.array(mz))
    return np.sort(np.concatenate([roots, np.array(fixed, dtype=float)]))


def rank_one_perturbation_check(diag, v, sign: int = 1) -> tuple[float, float]:
    """Regularized sums of ``A + sign v v^T`` and of ``A`` plus ``sign |v|^2``."""
    lam = secular_eigenvalues(diag, v, sign)
    lhs = math.fsum(lam)
    rhs = math.fsum(np.asarray(diag, dtype=float)) + sign * math.fsum(np.asarray(v, float) ** 2)
    return lhs, rhs


# -- focal spectra ---------------------------------------------------------------


def _pair(a, b, metric) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a @ (np.eye(len(a)) if metric is None else np.asarray(metric)) @ b)


def focal_spectrum(e: FocalEntry, q, xi, metric=None) -> EigenSequence:
    """Shape-operator eigenvalues ``<xi,v>/(n l - <q,v>)`` over ``n`` in Z.

    Even ``n`` carry multiplicity ``m_plus`` and odd ``n`` carry ``m_minus``.
    """
    s = _pair(xi, e.direction, metric)
    c = _pair(q, e.direction, metric)
    ratio = c / e.spacing
    if abs(ratio - round(ratio)) < SINGULAR_TOL:
        raise SingularPoint(f"point lies on a focal hyperplane (2 alpha = {ratio:.12g})")
    if s == 0 or (e.m_plus == 0 and e.m_minus == 0):
        return EigenSequence.empty()
    n0 = math.floor(ratio) + 1
    l = e.spacing

    def side(start, step):
        def prefix(n):
            ns = start + step * np.arange(2 * n + 2)
            reps = np.where(ns % 2 == 0, e.m_plus, e.m_minus)
            ns = np.repeat(ns, reps)[:n]
            return s / (ns * l - c)

        return prefix

    up, down = side(n0, 1), side(n0 - 1, -1)
    return EigenSequence(up, down) if s > 0 else EigenSequence(down, up)


# -- parallel manifolds ------------------------------------------------------------


def _check_focal(values, t):
    if len(values) and np.any(np.abs(1.0 - t * values) < FOCAL_HIT_TOL):
        raise FocalHit(f"1 - t x vanishes for t = {t!r}")


def _crossing_count(s: EigenSequence, t: float) -> int:
    """Number of positive values above ``1/t`` (for ``t > 0``)."""
    n = 16
    while True:
        p = s.positive(n)
        _check_focal(p, t)
        below = np.flatnonzero(t * p < 1.0)
        if len(below):
            return int(below[0])
        if len(p) < n:
            return len(p)
        n *= 2


def parallel_transform(s: EigenSequence, t: float) -> EigenSequence:
    """Eigenvalues ``x / (1 - t x)`` of the parallel manifold, reordered.

    For ``t > 0`` the positive values beyond ``1/t`` become the most negative
    ones, in reverse order; ``t < 0`` is the mirror image.
    """
    t = float(t)
    if t == 0.0:
        return s
    if t < 0:
        return negate(parallel_transform(negate(s), -t))
    j = _crossing_count(s, t)

    def f(x):
        return x / (1.0 - t * x)

    crossed = f(s.positive(j)[::-1])

    def pos(n):
        p = s.positive(j + n)[j:]
        _check_focal(p, t)
        return f(p)

    def neg(n):
        q = s.negative(n)
        _check_focal(q, t)
        return np.concatenate([crossed, f(q)])[:n]

    return EigenSequence(pos, neg)


def parallel_trace_function(s: EigenSequence, z: float, n: int) -> RegularizedValue:
    """Truncated ``sum a/(1 - a z)`` over the index-paired spectrum."""
    if n < 1:
        raise ValueError("truncation must be at least 1")
    p, q = s.positive(n + 1), s.negative(n + 1)
    exhausted = len(p) <= n and len(q) <= n
    p, q = p[:n], q[:n]
    for a in (p, q):
        if len(a) and np.any(np.abs(a * z - 1.0) < POLE_TOL * np.abs(a)):
            raise PoleProximity(f"z = {z!r} is within {POLE_TOL} of a pole")
    return _regularized(p / (1.0 - p * z), q / (1.0 - q * z), n, exhausted)


def focal_trace_gap(fd, q, xi, n: int) -> dict:
    """Closed-form ``<eta(q), xi>`` against the summed focal regularized traces.

    The relative gap is taken against ``max(|closed|, scale)`` where
    ``scale = sum pi (m+ + m-) |<xi, v>| / (2 l)`` is the size of the
    individual tan and cot terms, so cancellation does not inflate it.
    """
    from .radialop import mean_curvature_closed_form

    g = fd.metric
    xi = np.asarray(xi, dtype=float)
    closed = float(mean_curvature_closed_form(fd, q) @ g @ xi)
    total, tail, scale = 0.0, 0.0, 0.0
    for e in fd.entries:
        r = reg_trace(focal_spectrum(e, q, xi, g), n)
        total += r.value
        tail += r.tail_bound
        s = abs(_pair(xi, e.direction, g))
        scale += math.pi * (e.m_plus + e.m_minus) * s / (2 * e.spacing)
    gap = abs(total - closed)
    denom = max(abs(closed), scale)
    return {
        "closed_form": closed,
        "truncated_sum": total,
        "truncation": n,
        "tail_bound": tail,
        "abs_gap": gap,
        "rel_gap": gap / denom if denom > 0 else 0.0,
    }
