"""Spin groups as even multivectors: reflections, the twisted adjoint,
constructive lifts of rotation matrices, and continuous path lifting from
SO(3) to the unit quaternions.

Exactness note.  A rational rotation matrix rarely lifts to a *unit* even
multivector with rational coefficients (half-angle cosines are irrational),
so exact spin elements are stored as even versors together with the positive
scalar ``value * reversion(value)``.  Every group-level statement (twisted
adjoint, double-cover sign, action comparisons) is scale-invariant, which
keeps the whole exact path free of square roots.  Sampled geometry uses the
separate floating-point quaternion path; the two never mix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .clifford import Multivector, Signature, euclidean
from .errors import InputError, StructureError
from .linalg import QMat
from .modules import SpinorModule

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class SpinElement:
    """Even versor with rational coefficients.

    ``value * reversion(value)`` is the positive rational ``norm2``; the
    corresponding group element is value / sqrt(norm2), which is generally
    irrational and never materialized.
    """

    value: Multivector
    norm2: Fraction

    @staticmethod
    def from_multivector(x: Multivector) -> "SpinElement":
        if not x.is_even():
            raise InputError("spin elements must be even multivectors")
        t = x * x.reversion()
        if not t.is_scalar():
            raise InputError("value * reversion(value) must be scalar")
        n2 = t.scalar_part()
        if n2 <= 0:
            raise InputError("value * reversion(value) must be positive")
        return SpinElement(x, n2)

    @property
    def signature(self) -> Signature:
        return self.value.signature

    def __neg__(self) -> "SpinElement":
        return SpinElement(-self.value, self.norm2)

    def __mul__(self, other: "SpinElement") -> "SpinElement":
        return SpinElement(self.value * other.value, self.norm2 * other.norm2)

    def inverse_value(self) -> Multivector:
        """Exact inverse of the underlying versor."""
        return self.value.reversion().scale(ONE / self.norm2)

    def is_unit(self) -> bool:
        return self.norm2 == 1

    def same_projective(self, other: "SpinElement") -> bool:
        """True when both normalize to the same unit spin element, i.e. the
        same rotation with the same lift sign.  Exact: value_a/sqrt(na) =
        value_b/sqrt(nb) iff a * reversion(b) is the scalar +sqrt(na*nb)."""
        cross = self.value * other.value.reversion()
        if not cross.is_scalar():
            return False
        c = cross.scalar_part()
        return c > 0 and c * c == self.norm2 * other.norm2


def reflection(w, v, sig: Signature) -> list[Fraction]:
    """Reflect ``v`` through the hyperplane orthogonal to ``w``:
    v - 2 g(v,w)/g(w,w) w.  Exact; ``w`` need not be normalized."""
    w = [Fraction(c) for c in w]
    v = [Fraction(c) for c in v]
    ww = sig.bilinear(w, w)
    if ww == 0:
        raise InputError("reflection vector has g(w,w) = 0")
    coef = 2 * sig.bilinear(v, w) / ww
    return [a - coef * b for a, b in zip(v, w)]


def twisted_adjoint(g: Multivector, v) -> list[Fraction]:
    """g v grade_involution(g)^(-1), returned as a coordinate vector.

    Raises when the result is not a vector (g outside the Clifford group).
    """
    sig = g.signature
    if isinstance(v, Multivector):
        vec = v
    else:
        vec = Multivector.vector(sig, v)
    gi = g.grade_involution().inverse()
    out = g * vec * gi
    return out.vector_coords()


def twisted_adjoint_matrix(g: Multivector) -> list[list[Fraction]]:
    """Matrix of the twisted adjoint on basis vectors (columns are images)."""
    sig = g.signature
    cols = []
    for i in range(sig.n):
        cols.append(twisted_adjoint(g, Multivector.generator(sig, i)))
    return [[cols[j][i] for j in range(sig.n)] for i in range(sig.n)]


def _is_special_orthogonal(rows: list[list[Fraction]], sig: Signature) -> bool:
    n = sig.n
    if len(rows) != n or any(len(r) != n for r in rows):
        return False
    # R^T R = I (Euclidean) checked exactly
    for i in range(n):
        for j in range(n):
            dot = sum(rows[k][i] * rows[k][j] for k in range(n))
            if dot != (1 if i == j else 0):
                return False
    return _det(rows) == 1


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = ONE
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] != 0:
                piv = r
                break
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = ONE / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def spin_lift(rotation: list[list], sig: Signature | None = None) -> SpinElement:
    """Even versor whose twisted adjoint is the given rotation, exactly.

    Requires an exactly orthogonal rational matrix with determinant 1 over a
    Euclidean signature.  The lift is a product of reflection vectors found
    by column reduction (map column j to e_j, one reflection or none per
    column); determinant 1 forces the reflection count to be even.  The
    returned element is one of the two lifts; negate for the other.
    """
    rows = [[Fraction(c) for c in r] for r in rotation]
    n = len(rows)
    if sig is None:
        sig = euclidean(n)
    if sig.r != 0:
        raise InputError("spin_lift expects a Euclidean signature")
    if sig.n != n:
        raise InputError("matrix size does not match signature")
    if not _is_special_orthogonal(rows, sig):
        raise InputError("input is not an exact special orthogonal matrix")

    mirrors: list[list[Fraction]] = []
    work = [row[:] for row in rows]
    for j in range(n):
        col = [work[i][j] for i in range(n)]
        target = [ONE if i == j else ZERO for i in range(n)]
        if col == target:
            continue
        w = [a - b for a, b in zip(col, target)]
        mirrors.append(w)
        # apply the reflection to every remaining column
        ww = sig.bilinear(w, w)
        for c in range(n):
            column = [work[i][c] for i in range(n)]
            coef = 2 * sig.bilinear(column, w) / ww
            for i in range(n):
                work[i][c] = column[i] - coef * w[i]
    if any(work[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
        raise StructureError("reflection reduction did not reach the identity")
    if len(mirrors) % 2 != 0:
        raise StructureError("odd reflection count for a rotation")
    g = Multivector.scalar(sig, 1)
    for w in mirrors:
        g = g * Multivector.vector(sig, w)
    return SpinElement.from_multivector(g)


@dataclass
class DoubleCoverReport:
    adjoints_equal: bool
    actions_differ: bool | None

    @property
    def ok(self) -> bool:
        return self.adjoints_equal and self.actions_differ is not False

    def __bool__(self):
        return self.ok


def double_cover_check(g: SpinElement, module: SpinorModule | None = None) -> DoubleCoverReport:
    """Confirm that g and -g cover the same rotation while acting
    differently on a spinor module (when one is supplied)."""
    m_plus = twisted_adjoint_matrix(g.value)
    m_minus = twisted_adjoint_matrix((-g).value)
    adjoints_equal = m_plus == m_minus
    actions = None
    if module is not None:
        actions = spin_action(module, g) != spin_action(module, -g)
    return DoubleCoverReport(adjoints_equal, actions)


def spin_action(module: SpinorModule, g: SpinElement) -> QMat:
    """Representing matrix of the (unnormalized) even versor on the module.

    For a unit element the matrix is orthogonal for the spin metric; in
    general M^T g_S M = norm2 * g_S holds exactly.
    """
    if module.signature != g.signature:
        raise InputError("signature mismatch between module and spin element")
    return module.operator(g.value)


@dataclass
class SpinCoordinateSystem:
    """A module isometry covering a unique oriented frame.

    ``iso`` is the (scaled) action of a spin element composed with the
    identity base isomorphism; ``covered_frame`` is the rotation it induces
    on vectors through the Clifford action; ``scale2`` is the square scale
    of the isometry (1 for unit elements).
    """

    iso: QMat
    covered_frame: list[list[Fraction]]
    scale2: Fraction


def spin_coordinate_system(module: SpinorModule, g: SpinElement) -> SpinCoordinateSystem:
    return SpinCoordinateSystem(
        iso=spin_action(module, g),
        covered_frame=twisted_adjoint_matrix(g.value),
        scale2=g.norm2,
    )


def verify_spin_coordinate_system(
    module: SpinorModule, system: SpinCoordinateSystem
) -> list[str]:
    """Exact checks: the isometry intertwines the Clifford action up to the
    covered frame, is a scaled isometry of the spin metric, and commutes
    with the even commutant (the right action of K0)."""
    from .modules import intertwiners

    failures = []
    n = module.signature.n
    phi = system.iso
    frame = system.covered_frame
    for j in range(n):
        lhs = phi * module.generators[j]
        rhs = QMat.zeros(module.real_dim, module.real_dim)
        for i in range(n):
            c = frame[i][j]
            if c:
                rhs = rhs + module.generators[i].scale(c)
        if lhs != rhs * phi:
            failures.append(f"does not intertwine e_{j + 1}")
    m = module.spin_metric
    if phi.transpose() * m * phi != m.scale(system.scale2):
        failures.append("not a (scaled) spin-metric isometry")
    even = intertwiners(module, even_only=True)
    for t, b in enumerate(even.basis):
        if module.signature.n % 4 == 0:
            continue  # commutant computed on a summand; skip the full-space check
        if phi * b != b * phi:
            failures.append(f"does not commute with even intertwiner {t}")
    return failures


# ---------------------------------------------------------------------------
# Floating-point path lifting SO(3) -> S^3
# ---------------------------------------------------------------------------

ORTHO_TOL = 1e-9
LIFT_DOT_MIN = math.sqrt(0.5)  # neighbor rotation angle below pi/2


def _frobenius_orthogonality_defect(r) -> float:
    total = 0.0
    for i in range(3):
        for j in range(3):
            dot = sum(r[k][i] * r[k][j] for k in range(3))
            target = 1.0 if i == j else 0.0
            total += (dot - target) ** 2
    return math.sqrt(total)


def rotation_to_quaternion(r) -> tuple[float, float, float, float]:
    """Unit quaternion (w, x, y, z) with q v conj(q) = R v, max-diagonal
    branch for numerical stability.  The overall sign follows the branch."""
    t = r[0][0] + r[1][1] + r[2][2]
    candidates = [t, r[0][0], r[1][1], r[2][2]]
    best = max(range(4), key=lambda i: candidates[i])
    if best == 0:
        s = math.sqrt(max(t + 1.0, 0.0)) * 2.0
        w = 0.25 * s
        x = (r[2][1] - r[1][2]) / s
        y = (r[0][2] - r[2][0]) / s
        z = (r[1][0] - r[0][1]) / s
    elif best == 1:
        s = math.sqrt(max(1.0 + r[0][0] - r[1][1] - r[2][2], 0.0)) * 2.0
        w = (r[2][1] - r[1][2]) / s
        x = 0.25 * s
        y = (r[0][1] + r[1][0]) / s
        z = (r[0][2] + r[2][0]) / s
    elif best == 2:
        s = math.sqrt(max(1.0 + r[1][1] - r[0][0] - r[2][2], 0.0)) * 2.0
        w = (r[0][2] - r[2][0]) / s
        x = (r[0][1] + r[1][0]) / s
        y = 0.25 * s
        z = (r[1][2] + r[2][1]) / s
    else:
        s = math.sqrt(max(1.0 + r[2][2] - r[0][0] - r[1][1], 0.0)) * 2.0
        w = (r[1][0] - r[0][1]) / s
        x = (r[0][2] + r[2][0]) / s
        y = (r[1][2] + r[2][1]) / s
        z = 0.25 * s
    norm = math.sqrt(w * w + x * x + y * y + z * z)
    return (w / norm, x / norm, y / norm, z / norm)


def quat_mul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_conj(a):
    return (a[0], -a[1], -a[2], -a[3])


def quat_rotate(q, v):
    """Rotate the 3-vector v by the unit quaternion q (q v conj(q))."""
    p = (0.0, v[0], v[1], v[2])
    w = quat_mul(quat_mul(q, p), quat_conj(q))
    return (w[1], w[2], w[3])


def lift_residual(q, r) -> float:
    """Max deviation of q v conj(q) from R v over the three axis vectors."""
    worst = 0.0
    for axis in range(3):
        v = [1.0 if i == axis else 0.0 for i in range(3)]
        got = quat_rotate(q, v)
        want = [r[i][axis] for i in range(3)]
        worst = max(worst, max(abs(a - b) for a, b in zip(got, want)))
    return worst


def quaternion_lift_path(
    rotations, initial_sign: int = 1, strict: bool = True
):
    """Continuous lift of a sampled SO(3) path to unit quaternions.

    Consecutive samples must be close (neighbor quaternion dot above
    sqrt(1/2), i.e. rotation angle below pi/2) for the lift to be
    unambiguous; with ``strict`` a violation raises, otherwise the lift
    continues with the nonnegative-dot choice and the caller is expected to
    flag the output.  The first sample's sign is ``initial_sign`` times the
    conversion branch.
    """
    if initial_sign not in (1, -1):
        raise InputError("initial_sign must be +1 or -1")
    lifted = []
    prev = None
    ambiguous = []
    for idx, r in enumerate(rotations):
        defect = _frobenius_orthogonality_defect(r)
        if defect > ORTHO_TOL:
            raise InputError(
                f"sample {idx} is not orthogonal within {ORTHO_TOL:g} (defect {defect:g})"
            )
        q = rotation_to_quaternion(r)
        if prev is None:
            if initial_sign < 0:
                q = tuple(-c for c in q)
        else:
            dot = sum(a * b for a, b in zip(prev, q))
            if abs(dot) < LIFT_DOT_MIN:
                if strict:
                    raise InputError(
                        f"samples {idx - 1} and {idx} are too far apart for an "
                        "unambiguous lift"
                    )
                ambiguous.append(idx)
            if dot < 0:
                q = tuple(-c for c in q)
        lifted.append(q)
        prev = q
    if strict:
        return lifted
    return lifted, ambiguous
