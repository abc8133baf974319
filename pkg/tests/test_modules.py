"""The spinor module families: dimensions, Clifford conditions, intertwiner
tables, variants, gradings and spinor squaring."""

import random
from fractions import Fraction

import pytest

from spinrep import algebras as alg
from spinrep.clifford import Multivector, Signature, euclidean
from spinrep.errors import InputError
from spinrep.kmatrix import joint_intertwiners, verify_clifford_condition
from spinrep.linalg import QMat, intertwiner_space
from spinrep.modules import (
    assemble_euclidean,
    assemble_positive,
    assemble_signature,
    base_module,
    base_module_pos,
    c4_action,
    expected_irreducible_dim,
    grading_from_volume,
    intertwiners,
    octonion_module,
    spin_metric_verify,
    spinor_square,
    split_clifford_action,
    split_signature_module,
    sqrt_space_module,
    verify_module,
)

K_DIMS = [2, 4, 4, 4, 2, 1, 1, 1]
K0_DIMS = [4, 8, 4, 4, 4, 2, 1, 1]


def _neg_identity(d):
    return QMat.identity(d).scale(-1)


# -- base modules -------------------------------------------------------------


def test_base_module_dimensions():
    assert [base_module(n).real_dim for n in (1, 2, 3, 4)] == [2, 4, 4, 8]


def test_base_module_volume_variants():
    plus = base_module(3)
    minus = base_module(3, "minus")
    assert plus.volume_operator() == _neg_identity(4)
    assert minus.volume_operator() == QMat.identity(4)
    with pytest.raises(InputError):
        base_module(2, "minus")


def test_base_module_1_squares_to_minus_one():
    m = base_module(1)
    g = m.generators[0]
    assert g * g == _neg_identity(2)


def test_c4_action_examples():
    # c4(1)(l, w) = (-w, l)
    op = c4_action(alg.one("H")).realify()
    vec = [Fraction(0)] * 8
    vec[0] = Fraction(1)  # l = 1
    out = op.apply(vec)
    assert out[4] == 1 and all(c == 0 for i, c in enumerate(out) if i != 4)
    # c4(i)(0, 1) = (i, 0)
    op_i = c4_action(alg.unit("H", 1)).realify()
    vec = [Fraction(0)] * 8
    vec[4] = Fraction(1)  # w = 1
    out = op_i.apply(vec)
    assert out[1] == 1 and all(c == 0 for i, c in enumerate(out) if i != 1)
    # c4(q)^2 = -|q|^2
    rng = random.Random(1)
    for _ in range(5):
        q = alg.kelem("H", [Fraction(rng.randint(-3, 3)) for _ in range(4)])
        sq = c4_action(q) * c4_action(q)
        assert sq.realify() == QMat.identity(8).scale(-alg.norm_sq(q))


def test_base_module_pos_examples():
    m1 = base_module_pos(1)
    assert m1.generators[0] == QMat.from_dense([[1]])
    m1m = base_module_pos(1, "minus")
    assert m1m.generators[0] == QMat.from_dense([[-1]])
    m2 = base_module_pos(2)
    eps = m2.generators[1]
    assert eps == QMat.diag([1, -1])
    m4 = base_module_pos(4)
    rng = random.Random(2)
    for _ in range(4):
        coords = [Fraction(rng.randint(-3, 3)) for _ in range(4)]
        op = QMat.zeros(8, 8)
        for i, c in enumerate(coords):
            op = op + m4.generators[i].scale(c)
        norm = sum(c * c for c in coords)
        assert op * op == QMat.identity(8).scale(norm)
    with pytest.raises(InputError):
        base_module_pos(3, "minus")


# -- assembly ------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 17))
def test_euclidean_dimensions_and_clifford(n):
    m = assemble_euclidean(n)
    assert m.real_dim == expected_irreducible_dim(0, n)
    assert verify_clifford_condition(list(m.generators), m.signature).ok


def test_euclidean_key_dimensions():
    assert assemble_euclidean(8).real_dim == 16
    m5 = assemble_euclidean(5)
    assert m5.real_dim == 8
    assert intertwiners(m5).division_algebra == "C"
    assert assemble_euclidean(9).real_dim == 32


@pytest.mark.parametrize("n", range(1, 13))
def test_intertwiner_tables(n):
    m = assemble_euclidean(n)
    idx = (n - 1) % 8
    full = intertwiners(m)
    even = intertwiners(m, even_only=True)
    assert full.real_dimension == K_DIMS[idx]
    assert even.real_dimension == K0_DIMS[idx]


def test_even_intertwiners_grow():
    m5 = assemble_euclidean(5)
    assert intertwiners(m5).division_algebra == "C"
    assert intertwiners(m5, even_only=True).division_algebra == "H"
    m7 = assemble_euclidean(7)
    assert intertwiners(m7).division_algebra == "R"


@pytest.mark.parametrize("n", [3, 7, 11])
def test_plus_minus_distinctness(n):
    plus = assemble_euclidean(n)
    minus = assemble_euclidean(n, "minus")
    d = plus.real_dim
    assert plus.volume_operator() == _neg_identity(d)
    assert minus.volume_operator() == QMat.identity(d)
    joint = joint_intertwiners(list(plus.generators), list(minus.generators))
    assert joint == []


def test_minus_variant_rejected_elsewhere():
    with pytest.raises(InputError):
        assemble_euclidean(5, "minus")
    with pytest.raises(InputError):
        assemble_signature(1, 1, "minus")


def test_positive_signature_assembly():
    for n in range(1, 11):
        m = assemble_positive(n)
        assert m.real_dim == expected_irreducible_dim(n, 0)
        assert verify_clifford_condition(list(m.generators), m.signature).ok
    p = assemble_positive(5)
    mnt = assemble_positive(5, "minus")
    assert p.volume_operator() == QMat.identity(8)
    assert mnt.volume_operator() == _neg_identity(8)


def test_signature_assembly_matches_euclidean():
    a = assemble_signature(0, 6)
    b = assemble_euclidean(6)
    assert a.generators == b.generators


def test_signature_examples():
    m11 = assemble_signature(1, 1)
    assert m11.real_dim == 2
    assert intertwiners(m11).real_dimension == 1
    m22 = assemble_signature(2, 2)
    assert m22.real_dim == 4


def test_grading_oddness_and_volume():
    for n in (4, 8, 12):
        m = assemble_euclidean(n)
        g = grading_from_volume(m)
        assert g.plus_count() == g.minus_count() == m.real_dim // 2
        assert tuple(g.grading) == m.real_grading()
        eps = QMat.diag(g.grading)
        for gen in m.generators:
            assert eps * gen == (gen * eps).scale(-1)
    with pytest.raises(InputError):
        grading_from_volume(assemble_euclidean(5))


def test_grading_from_volume_s4():
    g = grading_from_volume(base_module(4))
    assert g.plus_count() == 4 and g.minus_count() == 4
    m = base_module(4)
    vol = m.volume_operator()
    assert vol == QMat.diag(g.grading)


# -- split signature ------------------------------------------------------------


def test_split_action_example():
    # i = 1: c(x, omega)(l + m f) = (-omega m) + (x l) f
    op = split_clifford_action(1, [Fraction(2)], [Fraction(3)])
    assert op == QMat.from_dense([[0, -3], [2, 0]])
    # v = (1, 1) squares to -1 under the normalized pairing
    op = split_clifford_action(1, [1], [1])
    assert op * op == _neg_identity(2)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_split_modules(i):
    m = split_signature_module(i)
    assert m.real_dim == 1 << i
    assert verify_clifford_condition(list(m.generators), Signature(i, i)).ok
    assert intertwiners(m).real_dimension == 1
    # generators odd for the parity grading
    eps = QMat.diag(m.real_grading())
    for g in m.generators:
        assert eps * g == (g * eps).scale(-1)


# -- alternative families ---------------------------------------------------------


def test_sqrt_space_examples():
    m3 = sqrt_space_module(3)
    c1 = m3.generators[0]
    vec = [Fraction(0)] * 4
    vec[0] = Fraction(1)
    assert c1.apply(vec) == [0, 1, 0, 0]  # c(e1)(1, 0) = (0, e1)
    vec = [Fraction(0)] * 4
    vec[1] = Fraction(1)
    assert c1.apply(vec) == [-1, 0, 0, 0]  # c(e1)(0, e1) = (-1, 0)

    m4 = sqrt_space_module(4)
    v = m4.generators[0] + m4.generators[1]
    assert v * v == QMat.identity(8).scale(-2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sqrt_space_structure(n):
    m = sqrt_space_module(n)
    base = base_module(n, m.variant if n == 3 else "plus")
    assert m.real_dim == base.real_dim
    assert verify_clifford_condition(list(m.generators), m.signature).ok
    assert spin_metric_verify(m).ok
    com_sqrt = intertwiners(m)
    com_base = intertwiners(base)
    assert com_sqrt.real_dimension == com_base.real_dimension
    assert com_sqrt.division_algebra == com_base.division_algebra
    # explicit intertwiner exists once variants are matched
    joint = joint_intertwiners(list(base.generators), list(m.generators))
    assert joint


def test_sqrt_space_range():
    with pytest.raises(InputError):
        sqrt_space_module(5)


def test_octonion_examples():
    m8 = octonion_module(8)
    # c8(1)(u, v) = (-v, u)
    g1 = m8.generators[0]
    vec = [Fraction(0)] * 16
    vec[8] = Fraction(1)  # v = 1
    out = g1.apply(vec)
    assert out[0] == -1 and all(c == 0 for i, c in enumerate(out) if i != 0)
    # c8(x)^2 = -|x|^2 on random rational octonions
    rng = random.Random(8)
    for _ in range(6):
        coords = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(8)]
        op = QMat.zeros(16, 16)
        for i, c in enumerate(coords):
            op = op + m8.generators[i].scale(c)
        norm = sum(c * c for c in coords)
        assert op * op == QMat.identity(16).scale(-norm)

    m4 = octonion_module(4)
    assert m4.real_dim == 8
    assert intertwiners(m4).division_algebra == "H"


@pytest.mark.parametrize("k", [4, 5, 6, 7, 8])
def test_octonion_structure(k):
    m = octonion_module(k)
    assert m.real_dim == (8 if k <= 7 else 16)
    assert verify_clifford_condition(list(m.generators), m.signature).ok
    assert spin_metric_verify(m).ok
    with pytest.raises(InputError):
        octonion_module(3)


# -- spin metric -----------------------------------------------------------------


def test_spin_metric_passes_on_families():
    for mod in (base_module(2), base_module(4), assemble_euclidean(6), octonion_module(8)):
        assert spin_metric_verify(mod).ok


def test_spin_metric_negative_control():
    m = base_module(2)
    bad = QMat.diag([1, 2, 1, 1])
    rep = spin_metric_verify(m, metric=bad)
    assert not rep.ok


# -- spinor squaring -------------------------------------------------------------


def test_spinor_square_examples():
    m2 = assemble_euclidean(2)
    one = [1, 0, 0, 0]
    i_sp = [0, 1, 0, 0]
    assert spinor_square(m2, one, one) == Multivector.scalar(euclidean(2), 1)
    assert spinor_square(m2, i_sp, one) == Multivector.generator(euclidean(2), 0)
    zero = [0, 0, 0, 0]
    assert spinor_square(m2, zero, one).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_spinor_square_round_trip(n):
    m = assemble_euclidean(n)
    d = m.real_dim
    rng = random.Random(100 + n)
    for _ in range(6):
        s1 = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)]
        s2 = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(d)]
        omega = spinor_square(m, s1, s2)
        # reconstruct the rank-one operator exactly
        op = m.operator(omega)
        k_dim = alg.ALGEBRA_DIM[m.field]
        s1_im = [s1] + [u.apply(s1) for u in m.right_units]
        s2_im = [s2] + [u.apply(s2) for u in m.right_units]
        rows = [m.spin_metric.apply(img) for img in s2_im]
        expect = {}
        for t in range(d):
            for a in range(k_dim):
                coef = rows[a][t]
                if coef:
                    for i_row in range(d):
                        if s1_im[a][i_row]:
                            key = (i_row, t)
                            expect[key] = expect.get(key, Fraction(0)) + coef * s1_im[a][i_row]
        assert op == QMat.from_entries(d, d, {k: v for k, v in expect.items() if v})
        if n % 4 == 3:
            assert all(bin(mask).count("1") % 2 == 0 for mask in omega.terms)


# -- whole-module audits ------------------------------------------------------------


@pytest.mark.parametrize("args", [(0, 5), (4, 0), (3, 2), (2, 3), (1, 6)])
def test_verify_module_passes(args):
    m = assemble_signature(*args)
    rep = verify_module(m)
    assert rep.ok, [c for c in rep.checks if not c[1]]


def test_mixed_signature_variants_differ():
    plus = assemble_signature(2, 1)
    minus = assemble_signature(2, 1, "minus")
    assert plus.volume_operator() == minus.volume_operator().scale(-1)
