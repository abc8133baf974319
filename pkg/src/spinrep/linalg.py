"""Exact sparse linear algebra over the rationals.

Everything in the algebraic layer of this package runs on ``Fraction``
arithmetic: module dimensions, commutant dimensions and Clifford-condition
checks are exact statements, never floating-point estimates.  Matrices are
stored sparsely (one dict per row) because nearly every operator we build is
a signed permutation matrix or close to one, and the few that are not stay
very sparse.

Two solvers live here:

* an incremental reduced-row-echelon form over Fraction entries, used for
  nullspaces and exact linear solves, and
* a union-find solver for intertwiner spaces ``{X : X A_k = B_k X}`` when
  every ``A_k`` and ``B_k`` is a signed permutation.  In that case each
  constraint relates exactly two entries of ``X`` up to sign, so the whole
  solution space falls out of a weighted union-find in near-linear time.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class QMat:
    """Sparse matrix with exact rational entries.

    Rows are dicts mapping column index to a nonzero Fraction.  Instances are
    treated as immutable by every consumer; methods return new matrices.
    """

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: list[dict[int, Fraction]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zeros(nrows: int, ncols: int) -> "QMat":
        return QMat(nrows, ncols)

    @staticmethod
    def identity(n: int) -> "QMat":
        return QMat(n, n, [{i: ONE} for i in range(n)])

    @staticmethod
    def diag(values: Iterable) -> "QMat":
        vals = [_frac(v) for v in values]
        rows = [({i: v} if v else {}) for i, v in enumerate(vals)]
        return QMat(len(vals), len(vals), rows)

    @staticmethod
    def from_dense(dense: list[list]) -> "QMat":
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        rows = []
        for r in dense:
            row = {}
            for j, v in enumerate(r):
                fv = _frac(v)
                if fv:
                    row[j] = fv
            rows.append(row)
        return QMat(nrows, ncols, rows)

    @staticmethod
    def from_entries(nrows: int, ncols: int, entries: dict[tuple[int, int], Fraction]) -> "QMat":
        rows: list[dict[int, Fraction]] = [dict() for _ in range(nrows)]
        for (i, j), v in entries.items():
            fv = _frac(v)
            if fv:
                rows[i][j] = fv
        return QMat(nrows, ncols, rows)

    # -- basic queries -----------------------------------------------------
    def get(self, i: int, j: int) -> Fraction:
        return self.rows[i].get(j, ZERO)

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def entries(self):
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                yield i, j, v

    def to_dense(self) -> list[list[Fraction]]:
        return [[self.get(i, j) for j in range(self.ncols)] for i in range(self.nrows)]

    def trace(self) -> Fraction:
        return sum((r[i] for i, r in enumerate(self.rows) if i in r), ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMat):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        raise TypeError("QMat is not hashable")

    def __repr__(self):
        return f"QMat({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "QMat") -> "QMat":
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        rows = []
        for ra, rb in zip(self.rows, other.rows):
            row = dict(ra)
            for j, v in rb.items():
                s = row.get(j, ZERO) + v
                if s:
                    row[j] = s
                elif j in row:
                    del row[j]
            rows.append(row)
        return QMat(self.nrows, self.ncols, rows)

    def __sub__(self, other: "QMat") -> "QMat":
        return self + (-other)

    def __neg__(self) -> "QMat":
        return QMat(self.nrows, self.ncols, [{j: -v for j, v in r.items()} for r in self.rows])

    def scale(self, c) -> "QMat":
        c = _frac(c)
        if not c:
            return QMat.zeros(self.nrows, self.ncols)
        return QMat(self.nrows, self.ncols, [{j: c * v for j, v in r.items()} for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, QMat):
            assert self.ncols == other.nrows, "matrix size mismatch"
            rows = []
            orows = other.rows
            for ra in self.rows:
                acc: dict[int, Fraction] = {}
                for k, a in ra.items():
                    for j, b in orows[k].items():
                        s = acc.get(j, ZERO) + a * b
                        if s:
                            acc[j] = s
                        elif j in acc:
                            del acc[j]
                rows.append(acc)
            return QMat(self.nrows, other.ncols, rows)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def transpose(self) -> "QMat":
        rows: list[dict[int, Fraction]] = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                rows[j][i] = v
        return QMat(self.ncols, self.nrows, rows)

    def apply(self, vec: list[Fraction]) -> list[Fraction]:
        out = []
        for r in self.rows:
            out.append(sum((v * vec[j] for j, v in r.items()), ZERO))
        return out

    def column(self, j: int) -> list[Fraction]:
        return [r.get(j, ZERO) for r in self.rows]

    def anticommutator(self, other: "QMat") -> "QMat":
        return self * other + other * self

    def commutator(self, other: "QMat") -> "QMat":
        return self * other - other * self

    def is_signed_perm(self):
        """Return ``(sigma, signs)`` with column j mapping to row sigma[j]
        with sign signs[j], or None if this is not a signed permutation."""
        if self.nrows != self.ncols:
            return None
        sigma = [-1] * self.ncols
        signs = [0] * self.ncols
        for i, r in enumerate(self.rows):
            if len(r) != 1:
                return None
            ((j, v),) = r.items()
            if v != 1 and v != -1:
                return None
            if sigma[j] != -1:
                return None
            sigma[j] = i
            signs[j] = 1 if v == 1 else -1
        if any(s == -1 for s in sigma):
            return None
        return sigma, signs


# ---------------------------------------------------------------------------
# Incremental RREF, nullspace and exact solve
# ---------------------------------------------------------------------------


class Rref:
    """Incremental reduced row echelon form over Fraction rows (sparse dicts)."""

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}
        # which pivot rows currently contain a given column (for eager reduction)
        self._col_uses: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = dict(row)
        pivots = self.pivots
        while True:
            hit = None
            for c in row:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                return row
            coef = row.pop(hit)
            for j, v in pivots[hit].items():
                if j == hit:
                    continue
                s = row.get(j, ZERO) - coef * v
                if s:
                    row[j] = s
                elif j in row:
                    del row[j]

    def add_row(self, row: dict[int, Fraction]) -> int | None:
        """Reduce ``row`` and install it as a new pivot; returns the pivot
        column or None if the row was dependent."""
        row = self.reduce(row)
        if not row:
            return None
        piv = min(row)
        inv = ONE / row[piv]
        row = {j: v * inv for j, v in row.items()}
        # eliminate the new pivot column from existing pivot rows
        for p in list(self._col_uses.get(piv, ())):
            prow = self.pivots[p]
            coef = prow.pop(piv)
            self._col_uses[piv].discard(p)
            for j, v in row.items():
                if j == piv:
                    continue
                s = prow.get(j, ZERO) - coef * v
                if s:
                    if j not in prow:
                        self._col_uses.setdefault(j, set()).add(p)
                    prow[j] = s
                elif j in prow:
                    del prow[j]
                    self._col_uses[j].discard(p)
        self.pivots[piv] = row
        for j in row:
            if j != piv:
                self._col_uses.setdefault(j, set()).add(piv)
        return piv

    def nullspace(self, ncols: int) -> list[dict[int, Fraction]]:
        free = [c for c in range(ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = {f: ONE}
            for p, row in self.pivots.items():
                v = row.get(f)
                if v:
                    vec[p] = -v
            basis.append(vec)
        return basis


def sparse_nullspace(rows: Iterable[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    rr = Rref()
    for row in rows:
        rr.add_row(row)
    return rr.nullspace(ncols)


def sparse_rank(rows: Iterable[dict[int, Fraction]]) -> int:
    rr = Rref()
    for row in rows:
        rr.add_row(row)
    return rr.rank


def sparse_solve(rows: list[dict[int, Fraction]], rhs: list, ncols: int):
    """Solve the linear system given by ``rows`` (each ``sum coeff*x = rhs``).

    Returns ``(solution_dict, unique)`` with free variables set to zero, or
    ``(None, False)`` when the system is inconsistent.
    """
    aug = ncols  # virtual column holding -rhs
    rr = Rref()
    for row, b in zip(rows, rhs):
        r = dict(row)
        fb = _frac(b)
        if fb:
            r[aug] = -fb
        rr.add_row(r)
    if aug in rr.pivots:
        return None, False
    sol = {}
    for p, row in rr.pivots.items():
        v = row.get(aug)
        if v:
            sol[p] = -v
    unique = rr.rank == ncols
    return sol, unique


# ---------------------------------------------------------------------------
# Signed-permutation intertwiner solver
# ---------------------------------------------------------------------------


class _SignedUnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.sign = [1] * n
        self.dead: set[int] = set()

    def find(self, x: int) -> tuple[int, int]:
        root = x
        s = 1
        while self.parent[root] != root:
            s *= self.sign[root]
            root = self.parent[root]
        # path compression; acc = sign from `node` to root
        node = x
        acc = s
        while self.parent[node] != node:
            nxt = self.parent[node]
            nsign = self.sign[node]
            self.parent[node] = root
            self.sign[node] = acc
            acc *= nsign  # signs are +-1, so 1/nsign == nsign
            node = nxt
        return root, s

    def union(self, x: int, y: int, rel: int) -> None:
        """Impose ``val[x] = rel * val[y]``."""
        rx, sx = self.find(x)
        ry, sy = self.find(y)
        if rx == ry:
            if sx != rel * sy:
                self.dead.add(rx)
            return
        # val[rx] = (rel*sy*sx) * val[ry]
        self.parent[rx] = ry
        self.sign[rx] = rel * sy * sx
        if rx in self.dead:
            self.dead.discard(rx)
            self.dead.add(ry)


def signed_perm_intertwiners(pairs: list[tuple[QMat, QMat]], d_in: int, d_out: int) -> list[QMat] | None:
    """Basis of ``{X : X A_k = B_k X}`` for signed-permutation pairs.

    ``X`` has shape ``d_out x d_in``.  Returns None when some matrix in
    ``pairs`` is not a signed permutation (caller should fall back to the
    generic solver).
    """
    decomposed = []
    for a, b in pairs:
        pa = a.is_signed_perm()
        pb = b.is_signed_perm()
        if pa is None or pb is None:
            return None
        decomposed.append((pa, pb))

    nvar = d_out * d_in
    uf = _SignedUnionFind(nvar)
    for (sigma_a, sign_a), (sigma_b, sign_b) in decomposed:
        # X[sigma_b(a), sigma_a(b)] * sign_a[b] = sign_b[a] * X[a, b]
        for a in range(d_out):
            sa = sigma_b[a]
            sgn_row = sign_b[a]
            base_to = sa * d_in
            base_from = a * d_in
            for b in range(d_in):
                uf.union(base_to + sigma_a[b], base_from + b, sgn_row * sign_a[b])

    classes: dict[int, list[tuple[int, int]]] = {}
    for v in range(nvar):
        root, s = uf.find(v)
        if root in uf.dead:
            continue
        classes.setdefault(root, []).append((v, s))
    basis = []
    for root in sorted(classes):
        entries = {}
        for v, s in classes[root]:
            entries[divmod(v, d_in)] = Fraction(s)
        basis.append(QMat.from_entries(d_out, d_in, entries))
    return basis


def intertwiner_space(pairs: list[tuple[QMat, QMat]], d_in: int, d_out: int) -> list[QMat]:
    """Exact basis of ``{X : X A_k = B_k X}`` for arbitrary rational matrices.

    Uses the union-find fast path when every matrix is a signed permutation,
    otherwise reduces the (sparse) commutation constraints directly.
    """
    fast = signed_perm_intertwiners(pairs, d_in, d_out)
    if fast is not None:
        return fast

    def var(i: int, j: int) -> int:
        return i * d_in + j

    rr = Rref()
    for a, b in pairs:
        acols: list[dict[int, Fraction]] = [dict() for _ in range(d_in)]
        for i, j, v in a.entries():
            acols[j][i] = v
        # constraint entry (i,j): sum_k X[i,k] A[k,j] - sum_k B[i,k] X[k,j] = 0
        for i in range(d_out):
            brow = b.rows[i]
            for j in range(d_in):
                row: dict[int, Fraction] = {}
                for k, v in acols[j].items():
                    row[var(i, k)] = row.get(var(i, k), ZERO) + v
                for k, v in brow.items():
                    key = var(k, j)
                    s = row.get(key, ZERO) - v
                    if s:
                        row[key] = s
                    elif key in row:
                        del row[key]
                if row:
                    rr.add_row(row)
    basis = []
    for vec in rr.nullspace(d_out * d_in):
        entries = {divmod(k, d_in): v for k, v in vec.items()}
        basis.append(QMat.from_entries(d_out, d_in, entries))
    return basis
