"""Reflections, twisted adjoint, rotation lifts and quaternion path lifting."""

import math
import random
from fractions import Fraction

import pytest

from conftest import random_rational_rotation

from spinrep.clifford import Multivector, Signature, euclidean
from spinrep.errors import InputError
from spinrep.modules import assemble_euclidean
from spinrep.spin import (
    SpinElement,
    double_cover_check,
    quaternion_lift_path,
    reflection,
    rotation_to_quaternion,
    spin_action,
    spin_coordinate_system,
    spin_lift,
    twisted_adjoint,
    twisted_adjoint_matrix,
    verify_spin_coordinate_system,
)


def test_reflection_examples():
    sig = euclidean(3)
    assert reflection([1, 0, 0], [1, 0, 0], sig) == [-1, 0, 0]
    assert reflection([1, 0, 0], [0, 1, 0], sig) == [0, 1, 0]
    assert reflection([1, 0, 0], [1, 1, 0], sig) == [-1, 1, 0]
    with pytest.raises(InputError):
        reflection([0, 0, 0], [1, 0, 0], sig)


def test_twisted_adjoint_examples():
    sig = euclidean(3)
    one = Multivector.scalar(sig, 1)
    for i in range(3):
        v = [Fraction(1 if t == i else 0) for t in range(3)]
        assert twisted_adjoint(one, v) == v
    # g = e1 e2: rotation by pi in the (e1, e2) plane
    g = Multivector.blade(sig, 0b011)
    mat = twisted_adjoint_matrix(g)
    assert mat == [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]
    # a unit vector acts as the reflection through its orthogonal plane
    w = Multivector.generator(sig, 0)
    v = [Fraction(1), Fraction(2), Fraction(0)]
    assert twisted_adjoint(w, v) == reflection([1, 0, 0], v, sig)


def test_twisted_adjoint_preserves_form():
    rng = random.Random(21)
    for sig in (euclidean(4), Signature(1, 2), Signature(2, 2)):
        # versors from products of non-null coordinate-ish vectors
        for _ in range(4):
            vecs = []
            while len(vecs) < 2:
                cand = [Fraction(rng.randint(-2, 2)) for _ in range(sig.n)]
                if sig.bilinear(cand, cand) != 0:
                    vecs.append(cand)
            g = Multivector.vector(sig, vecs[0]) * Multivector.vector(sig, vecs[1])
            x = [Fraction(rng.randint(-3, 3)) for _ in range(sig.n)]
            y = [Fraction(rng.randint(-3, 3)) for _ in range(sig.n)]
            gx = twisted_adjoint(g, x)
            gy = twisted_adjoint(g, y)
            assert sig.bilinear(gx, gy) == sig.bilinear(x, y)


def test_spin_lift_identity():
    n = 4
    ident = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    g = spin_lift(ident)
    assert g.value == Multivector.scalar(euclidean(n), 1)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_spin_lift_round_trip(n):
    rng = random.Random(40 + n)
    for _ in range(6):
        rot = random_rational_rotation(n, rng)
        g = spin_lift(rot)
        assert g.value.is_even()
        assert twisted_adjoint_matrix(g.value) == rot


def test_spin_lift_rejects_bad_input():
    bad = [[Fraction(1), Fraction(1)], [Fraction(0), Fraction(1)]]
    with pytest.raises(InputError):
        spin_lift(bad)
    refl = [[Fraction(-1), 0], [0, Fraction(1)]]
    with pytest.raises(InputError):
        spin_lift(refl)


def test_covering_parity_and_composition():
    rng = random.Random(77)
    n = 4
    for _ in range(5):
        r1 = random_rational_rotation(n, rng)
        r2 = random_rational_rotation(n, rng)
        g1 = spin_lift(r1)
        g2 = spin_lift(r2)
        from conftest import mat_mul

        g12 = spin_lift(mat_mul(r1, r2))
        prod = g1 * g2
        # Ad(g1 g2) = Ad(g1) Ad(g2): both lift the same rotation
        assert twisted_adjoint_matrix(prod.value) == mat_mul(r1, r2)
        assert prod.same_projective(g12) or prod.same_projective(-g12)
        # lift of R then R^-1 is +-1
        rinv = [list(col) for col in zip(*r1)]
        ginv = spin_lift(rinv)
        total = g1 * ginv
        assert total.value.is_scalar()


def test_double_cover_check():
    sig = euclidean(3)
    module = assemble_euclidean(3)
    one = SpinElement.from_multivector(Multivector.scalar(sig, 1))
    rep = double_cover_check(one, module)
    assert rep.ok
    g = SpinElement.from_multivector(Multivector.blade(sig, 0b011))
    rep = double_cover_check(g, module)
    assert rep.adjoints_equal and rep.actions_differ

    rng = random.Random(50)
    for _ in range(5):
        lift = spin_lift(random_rational_rotation(3, rng))
        assert double_cover_check(lift, module).ok


def test_spin_action_orthogonality_and_homomorphism():
    sig = euclidean(2)
    module = assemble_euclidean(2)
    g = SpinElement.from_multivector(
        Multivector.make(sig, {0: Fraction(3, 5), 0b11: Fraction(4, 5)})
    )
    assert g.is_unit()
    pi = spin_action(module, g)
    m = module.spin_metric
    assert pi.transpose() * m * pi == m

    h = SpinElement.from_multivector(
        Multivector.make(sig, {0: Fraction(5, 13), 0b11: Fraction(12, 13)})
    )
    assert spin_action(module, g) * spin_action(module, h) == spin_action(module, g * h)


@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_spin_coordinate_systems(n):
    rng = random.Random(60 + n)
    module = assemble_euclidean(n)
    g = spin_lift(random_rational_rotation(n, rng))
    system = spin_coordinate_system(module, g)
    assert verify_spin_coordinate_system(module, system) == []


# -- float path lifting -------------------------------------------------------


def _sphere_rotation(t):
    c, s = math.cos(2 * math.pi * t), math.sin(2 * math.pi * t)
    return [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]


def test_rotation_to_quaternion_branches():
    rng = random.Random(3)
    for _ in range(30):
        axis = [rng.uniform(-1, 1) for _ in range(3)]
        norm = math.sqrt(sum(a * a for a in axis))
        axis = [a / norm for a in axis]
        angle = rng.uniform(-3.0, 3.0)
        w = math.cos(angle / 2)
        x, y, z = (a * math.sin(angle / 2) for a in axis)
        # rotation matrix of (w, x, y, z)
        r = [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
        q = rotation_to_quaternion(r)
        dot = abs(q[0] * w + q[1] * x + q[2] * y + q[3] * z)
        assert abs(dot - 1.0) < 1e-12


def test_quaternion_lift_sphere_family():
    samples = 10000
    ts = [i / samples for i in range(samples + 1)]
    lifts = quaternion_lift_path([_sphere_rotation(t) for t in ts])
    worst = 0.0
    for t, q in zip(ts, lifts):
        expect = (math.cos(math.pi * t), 0.0, math.sin(math.pi * t), 0.0)
        worst = max(worst, max(abs(a - b) for a, b in zip(q, expect)))
    assert worst <= 1e-9
    # full loop flips the sign
    assert abs(lifts[-1][0] + 1.0) < 1e-12


def test_quaternion_lift_constant_and_signs():
    rots = [_sphere_rotation(0.0)] * 10
    lifts = quaternion_lift_path(rots)
    assert all(q == lifts[0] for q in lifts)
    neg = quaternion_lift_path(rots, initial_sign=-1)
    assert all(abs(a + b) < 1e-15 for q, p in zip(lifts, neg) for a, b in zip(q, p))


def test_quaternion_lift_null_homotopic_loop():
    # rotation about the z axis by an angle that rises to pi and returns to
    # zero: a contractible loop in SO(3), so the lift comes back to +1
    def rot(t):
        a = math.pi * math.sin(math.pi * t) ** 2
        c, s = math.cos(a), math.sin(a)
        return [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]

    ts = [i / 4000 for i in range(4001)]
    lifts = quaternion_lift_path([rot(t) for t in ts])
    assert max(abs(a - b) for a, b in zip(lifts[0], lifts[-1])) < 1e-9
    assert abs(lifts[0][0] - 1.0) < 1e-12


def test_quaternion_lift_rejects_ambiguous_and_nonorthogonal():
    with pytest.raises(InputError):
        quaternion_lift_path([_sphere_rotation(0.0), _sphere_rotation(0.5)])
    bad = [[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    with pytest.raises(InputError):
        quaternion_lift_path([bad])
