import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radialweyl.fourier import FourierPolynomial, InvariantPolynomial, NotSmooth, evaluate, orbit_sum
from radialweyl.radialop import (
    DegenerateSpectrum,
    FocalData,
    FocalEntry,
    OperatorMatrix,
    RadialOperator,
    SingularPoint,
    apply,
    assemble_matrix,
    eigenfunctions,
    generator_layout,
    generators,
    group_case_focal,
    mean_curvature_closed_form,
)
from radialweyl.rootsys import dominant_weights_in_hull, fundamental, hull_contains, sort_key

from conftest import root_system
import oracles

GROUPS = ["A1", "A2", "B2", "G2"]


def group_op(name, mult=2):
    rs = root_system(name)
    return RadialOperator(rs, group_case_focal(rs, mult))


def random_invariant(rs, rng, level=2):
    top = tuple(level * c for c in rs.rho)
    pts = [w for w in dominant_weights_in_hull(rs, top) if all(c % 2 == 0 for c in w)]
    pick = rng.choice(len(pts), size=min(3, len(pts)), replace=False)
    return InvariantPolynomial.from_orbit_coefficients(
        rs, {pts[i]: complex(rng.normal(), rng.normal()) for i in pick}
    )


# -- focal data -------------------------------------------------------------------


def test_group_case_focal_counts():
    a1 = group_case_focal(root_system("A1"), 2)
    assert len(a1.entries) == 1
    assert a1.entries[0].m_plus == a1.entries[0].m_minus == 2
    a2 = group_case_focal(root_system("A2"), 2)
    assert len(a2.entries) == 3
    g = a2.metric
    dirs = [np.array(e.direction) for e in a2.entries]
    cosines = sorted(abs(float(u @ g @ v)) for i, u in enumerate(dirs) for v in dirs[i + 1 :])
    assert np.allclose(cosines, [0.5, 0.5, 0.5])
    b2 = group_case_focal(root_system("B2"), 2)
    assert len(b2.entries) == 4
    assert len({round(e.spacing, 12) for e in b2.entries}) == 2


def test_group_case_hyperplanes_are_integer_levels():
    # the root functional takes integer values exactly on the focal family
    rs = root_system("G2")
    fd = group_case_focal(rs, 1)
    for e, r in zip(fd.entries, rs.positive_roots):
        x = np.array(e.direction) * e.spacing  # first hyperplane along the normal
        val = np.array(r, dtype=float) @ oracles.pairing(rs) @ x
        assert val == pytest.approx(1.0)


def test_focal_validation():
    with pytest.raises(ValueError):
        FocalEntry((1.0,), 0.0, 1, 1, (2,))
    with pytest.raises(ValueError):
        FocalEntry((1.0,), 1.0, -1, 1, (2,))
    with pytest.raises(ValueError):
        FocalData(1, (FocalEntry((2.0,), 1.0, 1, 1, (2,)),))
    with pytest.raises(ValueError):
        FocalData(2, (FocalEntry((1.0, 0.0), 1.0, 1, 1, (2, 0)),))


def test_focal_json_round_trip():
    fd = group_case_focal(root_system("B2"), 2)
    back = FocalData.from_json(json.dumps(fd.to_json()))
    assert back.to_json() == fd.to_json()
    with pytest.raises(ValueError):
        FocalData.from_json({"rank": 1})


def test_operator_rejects_unstable_data():
    rs = root_system("A2")
    fd = group_case_focal(rs, 2)
    partial = FocalData(2, fd.entries[:2], fd.gram)
    with pytest.raises(ValueError):
        RadialOperator(rs, partial)
    e = fd.entries[0]
    mixed = FocalData(2, (FocalEntry(e.direction, e.spacing, 1, 2, e.alpha),) + fd.entries[1:], fd.gram)
    with pytest.raises(ValueError):
        RadialOperator(rs, mixed)


def test_mean_curvature_examples():
    fd = FocalData(1, (FocalEntry((1.0,), 0.5, 3, 3, (1,)),))
    # alpha(q) = q / (2 l) = q
    assert np.allclose(mean_curvature_closed_form(fd, [0.25]), 0.0, atol=1e-14)
    fd = FocalData(1, (FocalEntry((1.0,), 0.5, 1, 0, (1,)),))
    assert mean_curvature_closed_form(fd, [0.25])[0] == pytest.approx(-math.pi)
    with pytest.raises(SingularPoint):
        mean_curvature_closed_form(fd, [0.5])
    with pytest.raises(SingularPoint):
        mean_curvature_closed_form(fd, [1.0])


# -- the operator ----------------------------------------------------------------


@pytest.mark.parametrize("name", GROUPS)
def test_constant_is_killed(name):
    op = group_op(name)
    assert not apply(op, FourierPolynomial.constant(op.root_system))


def test_a1_single_application_against_quadrature():
    op = group_op("A1")
    rs = op.root_system
    s = orbit_sum(rs, (2,))
    got = apply(op, s)
    ref = oracles.fft_coefficients_a1(lambda x: oracles.radial_pointwise(op.focal, s, x))
    for c, a in ref.items():
        assert abs(got[(c,)] - a) < 1e-9
    assert got.support == {(2,), (-2,)}
    assert got[(2,)].real == pytest.approx(6 * math.pi**2, rel=1e-14)


@pytest.mark.parametrize("name", GROUPS + ["C3"])
def test_apply_pointwise(name):
    op = group_op(name)
    rs = op.root_system
    rng = np.random.default_rng(7)
    f = random_invariant(rs, rng)
    x = oracles.regular_points(op.focal, rng, 30)
    got = evaluate(apply(op, f), x)
    want = oracles.radial_pointwise(op.focal, f, x)
    assert np.max(np.abs(got - want)) <= 1e-9 * max(1.0, np.max(np.abs(want)))


@given(st.integers(0, 10_000), st.sampled_from(GROUPS), st.integers(0, 3))
def test_invariance_and_hull(seed, name, mult):
    op = group_op(name, mult)
    rs = op.root_system
    f = random_invariant(rs, np.random.default_rng(seed))
    g = apply(op, f)
    assert isinstance(g, InvariantPolynomial)
    assert g.is_invariant(1e-12)
    tops = [w for w in f.orbit_coefficients()]
    assert all(any(hull_contains(rs, t, w) for t in tops) for w in g.support)
    # with a single orbit the maximum is unique
    top = max(tops, key=lambda w: sort_key(rs, w))
    h = apply(op, orbit_sum(rs, top))
    assert all(hull_contains(rs, top, w) for w in h.support)


def test_tan_precondition_violation():
    # A1 with a half-weight input: derivative does not vanish where tan blows up
    op = group_op("A1")
    f = InvariantPolynomial(op.root_system, {(1,): 1, (-1,): 1})
    with pytest.raises(NotSmooth):
        apply(op, f)


def test_a1_without_tan_admits_half_weights():
    rs = root_system("A1")
    base = group_case_focal(rs, 2).entries[0]
    fd = FocalData(1, (FocalEntry(base.direction, base.spacing, 2, 0, base.alpha),), group_case_focal(rs, 2).gram)
    op = RadialOperator(rs, fd)
    f = InvariantPolynomial(rs, {(1,): 1, (-1,): 1})
    g = apply(op, f)
    x = oracles.regular_points(fd, np.random.default_rng(0), 10)
    assert np.allclose(evaluate(g, x), oracles.radial_pointwise(fd, f, x))


# -- matrices ---------------------------------------------------------------------


def test_level_zero_matrix():
    op = group_op("A2")
    m = assemble_matrix(op, (0, 0))
    assert m.basis == [(0, 0)]
    assert m.entries.shape == (1, 1) and m.entries[0, 0] == 0
    (lam, phi), = eigenfunctions(m)
    assert lam == 0 and phi.allclose(FourierPolynomial.constant(op.root_system))


def test_a1_coset_matrix():
    op = group_op("A1")
    m = assemble_matrix(op, (8,), root_coset=True)
    assert m.basis == [(0,), (4,), (8,)]
    assert m.above_diagonal_max() <= 1e-10
    assert m.off_hull_max() <= 1e-10
    full = assemble_matrix(op, (8,))
    assert full.basis == [(0,), (2,), (4,), (6,), (8,)]
    # different cosets do not couple
    even = [i for i, w in enumerate(full.basis) if w[0] % 4 == 0]
    odd = [i for i, w in enumerate(full.basis) if w[0] % 4 == 2]
    assert np.all(full.entries[np.ix_(even, odd)] == 0)
    assert np.all(full.entries[np.ix_(odd, even)] == 0)


@pytest.mark.parametrize("name", GROUPS)
def test_triangular_and_real_spectrum(name):
    op = group_op(name)
    rs = op.root_system
    m = assemble_matrix(op, tuple(3 * c for c in rs.rho))
    assert m.off_hull_max() <= 1e-10
    assert m.above_diagonal_max() <= 1e-10
    assert np.max(np.abs(np.diag(m.entries).imag)) <= 1e-8
    for lam, phi in eigenfunctions(m):
        assert (apply(op, phi) - phi * lam).norm() <= 1e-8 * phi.norm()


def test_eigenfunction_shape():
    op = group_op("B2")
    m = assemble_matrix(op, (4, 4))
    for j, (lam, phi) in enumerate(eigenfunctions(m)):
        w = m.basis[j]
        assert phi[w] == 1
        for u in phi.orbit_coefficients():
            assert u == w or (hull_contains(op.root_system, w, u) and u != w)


def test_a1_eigenvalues_increase():
    m = assemble_matrix(group_op("A1"), (16,))
    lams = [lam.real for lam, _ in eigenfunctions(m)]
    assert all(b > a for a, b in zip(lams, lams[1:]))


def test_a1_eigenfunctions_are_characters():
    # characters of SU(2): sum of e^{2 pi i k omega} for k = n, n-2, ..., -n
    op = group_op("A1")
    rs = op.root_system
    m = assemble_matrix(op, (20,))
    for j, (lam, phi) in enumerate(eigenfunctions(m)):
        n = m.basis[j][0] // 2
        chi = FourierPolynomial(rs, {(2 * k,): 1 for k in range(-n, n + 1, 2)})
        assert phi.allclose(chi, 1e-8)
        assert lam.real == pytest.approx(2 * math.pi**2 * n * (n + 2), rel=1e-12)


def test_degenerate_spectrum_detected():
    rs = root_system("A1")
    entries = np.array([[1.0, 5.0], [0.0, 1.0]], dtype=complex)
    m = OperatorMatrix([(0,), (2,)], entries, rs)
    with pytest.raises(DegenerateSpectrum) as info:
        eigenfunctions(m)
    assert set(info.value.weights) == {(0,), (2,)}
    ok = OperatorMatrix([(0,), (2,)], np.eye(2, dtype=complex), rs)
    assert len(eigenfunctions(ok)) == 2


def test_matrix_json_round_trip():
    op = group_op("A2")
    m = assemble_matrix(op, (2, 2))
    data = json.loads(json.dumps(m.to_json()))
    assert set(data) == {"basis", "matrix"}
    back = OperatorMatrix.from_json(data, op.root_system)
    assert back.basis == m.basis
    assert np.array_equal(back.entries, m.entries)


# -- generators ---------------------------------------------------------------------


def test_generator_layout():
    assert generator_layout(root_system("A2")) == [(0, "re"), (0, "im")]
    assert generator_layout(root_system("B2")) == [(0, "re"), (1, "re")]
    assert generator_layout(root_system("A3")) == [(1, "re"), (0, "re"), (0, "im")]


def test_generators_a1():
    op = group_op("A1")
    (psi,) = generators(op, 1)
    assert psi.is_real()
    assert psi[(2,)] == pytest.approx(1)
    assert max(psi.orbit_coefficients(), key=lambda w: w[0]) == (2,)


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "A3"])
def test_generators_are_real_eigenfunctions(name):
    op = group_op(name)
    rs = op.root_system
    gens = generators(op, 1)
    assert len(gens) == rs.rank
    m = assemble_matrix(op, rs.rho)
    eig = dict(zip(m.basis, eigenfunctions(m)))
    for psi, (j, part) in zip(gens, generator_layout(rs)):
        assert psi.is_real(1e-12)
        lam = eig[fundamental(rs, j)][0]
        assert (apply(op, psi) - psi * lam.real).norm() <= 1e-8 * psi.norm()


def test_generators_need_positive_level():
    with pytest.raises(ValueError):
        generators(group_op("A1"), 0)
