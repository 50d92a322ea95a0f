"""Exact integer linear algebra.

Hermite-form row lattices with online insertion, Smith normal form with
transform tracking, finitely presented abelian groups, maps between them,
tensor/Tor over Z, tensor over a finite group ring, and homology of
three-term complexes of presented groups.

Everything is exact.  Matrices are kept as int64 numpy arrays while entry
bounds allow it and silently promoted to arbitrary-precision (object dtype)
arrays the moment an operation could overflow.
"""

from __future__ import annotations

from bisect import bisect_left
from math import gcd, prod

import numpy as np

# int64 arithmetic is used only while |result| stays below this bound.
_I64_SAFE = 2**62


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _as_array(vec, n, big=False):
    dtype = object if big else np.int64
    a = np.zeros(n, dtype=dtype)
    if isinstance(vec, dict):
        for j, c in vec.items():
            a[j] = c
    else:
        for j, c in enumerate(vec):
            if c:
                a[j] = c
    return a


def _maxabs(row):
    if len(row) == 0:
        return 0
    return int(np.abs(row).max())


class Lattice:
    """A sublattice of Z^n stored as a row basis in canonical Hermite form.

    Rows are kept echelonized online (one pivot per column, pivots
    positive); ``canonicalize`` additionally reduces every entry above a
    pivot into [0, pivot), which makes the basis unique so that lattice
    equality is basis equality.
    """

    __slots__ = ("n", "rows", "pivot_cols", "col_to_row", "big", "_canonical")

    def __init__(self, n):
        self.n = n
        self.rows = []          # sorted by pivot column
        self.pivot_cols = []    # pivot column of rows[i]
        self.col_to_row = {}
        self.big = False
        self._canonical = True

    # -- representation switching -------------------------------------

    def _promote(self):
        if not self.big:
            self.rows = [r.astype(object) for r in self.rows]
            self.big = True

    def _check_headroom(self, bound):
        if not self.big and bound >= _I64_SAFE:
            self._promote()

    def _prepare(self, vec):
        vals = vec.values() if isinstance(vec, dict) else vec
        m = max((abs(int(c)) for c in vals), default=0)
        if not self.big and m >= _I64_SAFE:
            self._promote()
        return _as_array(vec, self.n, big=self.big)

    # -- insertion ------------------------------------------------------

    @property
    def rank(self):
        return len(self.rows)

    def add(self, vec):
        """Insert a vector, updating the echelon basis."""
        v = self._prepare(vec)
        while True:
            nz = np.nonzero(v)[0]
            if len(nz) == 0:
                return
            j = int(nz[0])
            k = self.col_to_row.get(j)
            if k is None:
                if v[j] < 0:
                    v = -v
                pos = bisect_left(self.pivot_cols, j)
                self.rows.insert(pos, v)
                self.pivot_cols.insert(pos, j)
                for col, idx in self.col_to_row.items():
                    if idx >= pos:
                        self.col_to_row[col] = idx + 1
                self.col_to_row[j] = pos
                self._canonical = False
                return
            row = self.rows[k]
            a = int(row[j])
            b = int(v[j])
            if b % a == 0:
                q = b // a
                self._check_headroom(_maxabs(v) + abs(q) * _maxabs(row))
                if self.big:
                    v = v.astype(object) if v.dtype != object else v
                    row = self.rows[k]
                v = v - q * row
            else:
                g, x, y = xgcd(a, b)
                bound = (abs(x) + abs(y) + abs(a // g) + abs(b // g)) * (
                    _maxabs(row) + _maxabs(v)
                )
                self._check_headroom(bound)
                if self.big and v.dtype != object:
                    v = v.astype(object)
                row = self.rows[k]
                new_row = x * row + y * v
                v = (a // g) * v - (b // g) * row
                if new_row[j] < 0:
                    new_row = -new_row
                self.rows[k] = new_row
                self._canonical = False

    def add_rows(self, rows):
        for r in rows:
            self.add(r)

    # -- canonical form ---------------------------------------------------

    def canonicalize(self):
        """Reduce above-pivot entries so the basis is the canonical HNF."""
        if self._canonical:
            return self
        for k in range(len(self.rows)):
            j = self.pivot_cols[k]
            p = int(self.rows[k][j])
            for i in range(k):
                row = self.rows[i]
                c = int(row[j])
                q = c // p
                if q:
                    self._check_headroom(_maxabs(row) + abs(q) * _maxabs(self.rows[k]))
                    self.rows[i] = self.rows[i] - q * self.rows[k]
        self._canonical = True
        return self

    def basis(self):
        self.canonicalize()
        return self.rows

    def basis_matrix(self):
        self.canonicalize()
        if not self.rows:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.array([list(map(int, r)) for r in self.rows], dtype=object if self.big else np.int64)

    # -- membership and coordinates --------------------------------------

    def reduce(self, vec):
        """Subtract basis rows to push vec's pivot-column entries into
        [0, pivot); the result is the canonical coset representative."""
        self.canonicalize()
        v = self._prepare(vec)
        for k, j in enumerate(self.pivot_cols):
            c = int(v[j])
            if c:
                p = int(self.rows[k][j])
                q = c // p
                if q:
                    if not self.big and _maxabs(v) + abs(q) * _maxabs(self.rows[k]) >= _I64_SAFE:
                        v = v.astype(object)
                        v = v - q * self.rows[k].astype(object)
                        continue
                    v = v - q * self.rows[k]
        return v

    def contains(self, vec):
        return not np.any(self.reduce(vec))

    def coordinates(self, vec):
        """Express vec in the canonical basis rows; None if not in the lattice."""
        self.canonicalize()
        v = self._prepare(vec)
        coords = [0] * len(self.rows)
        while True:
            nz = np.nonzero(v)[0]
            if len(nz) == 0:
                return coords
            j = int(nz[0])
            k = self.col_to_row.get(j)
            if k is None:
                return None
            p = int(self.rows[k][j])
            c = int(v[j])
            if c % p != 0:
                return None
            q = c // p
            coords[k] = q
            if not self.big and _maxabs(v) + abs(q) * _maxabs(self.rows[k]) >= _I64_SAFE:
                v = v.astype(object) - q * self.rows[k].astype(object)
            else:
                v = v - q * self.rows[k]

    def copy(self):
        other = Lattice(self.n)
        other.rows = [r.copy() for r in self.rows]
        other.pivot_cols = self.pivot_cols.copy()
        other.col_to_row = self.col_to_row.copy()
        other.big = self.big
        other._canonical = self._canonical
        return other

    def __eq__(self, other):
        if not isinstance(other, Lattice) or self.n != other.n:
            return NotImplemented
        a = self.basis_matrix()
        b = other.basis_matrix()
        return a.shape == b.shape and bool(np.array_equal(a, b))

    def __hash__(self):
        raise TypeError("Lattice is unhashable (mutable)")

    def __repr__(self):
        return f"Lattice(n={self.n}, rank={self.rank})"


def lattice_from_rows(n, rows):
    lat = Lattice(n)
    lat.add_rows(rows)
    lat.canonicalize()
    return lat


def lattice_sum(a, b):
    assert a.n == b.n
    out = a.copy()
    out.add_rows(b.basis())
    out.canonicalize()
    return out


def kernel_of_matrix(rows, ncols):
    """Basis of the left kernel {x : x . M = 0} for M given by `rows`."""
    m = len(rows)
    aug = Lattice(ncols + m)
    for i, r in enumerate(rows):
        v = [0] * (ncols + m)
        if isinstance(r, dict):
            for j, c in r.items():
                v[j] = int(c)
        else:
            for j in range(ncols):
                v[j] = int(r[j])
        v[ncols + i] = 1
        aug.add(v)
    aug.canonicalize()
    out = []
    for k, j in enumerate(aug.pivot_cols):
        if j >= ncols:
            out.append([int(c) for c in aug.rows[k][ncols:]])
    return out


def lattice_intersection(a, b):
    """Intersection of two lattices in the same ambient Z^n."""
    assert a.n == b.n
    rows_a = a.basis()
    rows_b = b.basis()
    stacked = [list(map(int, r)) for r in rows_a] + [list(map(int, r)) for r in rows_b]
    kern = kernel_of_matrix(stacked, a.n)
    out = Lattice(a.n)
    na = len(rows_a)
    for x in kern:
        vec = np.zeros(a.n, dtype=object)
        for i in range(na):
            if x[i]:
                vec = vec + x[i] * rows_a[i].astype(object)
        out.add([int(c) for c in vec])
    out.canonicalize()
    return out


# -- Smith normal form -------------------------------------------------------


def _snf_core(mat):
    """Diagonalize a dense list-of-lists integer matrix in place.

    Returns (diag, row_ops, col_ops) where the ops are the elementary
    operations applied, for optional transform reconstruction.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    row_ops = []
    col_ops = []

    def swap_rows(i, j):
        if i != j:
            mat[i], mat[j] = mat[j], mat[i]
            row_ops.append(("swap", i, j))

    def swap_cols(i, j):
        if i != j:
            for r in mat:
                r[i], r[j] = r[j], r[i]
            col_ops.append(("swap", i, j))

    def addmul_row(dst, src, q):
        if q:
            rd, rs = mat[dst], mat[src]
            for k in range(n):
                rd[k] += q * rs[k]
            row_ops.append(("addmul", dst, src, q))

    def addmul_col(dst, src, q):
        if q:
            for r in mat:
                r[dst] += q * r[src]
            col_ops.append(("addmul", dst, src, q))

    def negate_row(i):
        mat[i] = [-x for x in mat[i]]
        row_ops.append(("neg", i))

    t = 0
    while t < min(m, n):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            row = mat[i]
            for j in range(t, n):
                v = row[j]
                if v:
                    if best is None or abs(v) < best[0]:
                        best = (abs(v), i, j)
                        if abs(v) == 1:
                            break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                v = mat[i][t]
                if v:
                    q = v // mat[t][t]
                    addmul_row(i, t, -q)
                    if mat[i][t]:
                        # remainder became the smaller pivot
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                v = mat[t][j]
                if v:
                    q = v // mat[t][t]
                    addmul_col(j, t, -q)
                    if mat[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if mat[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [mat[i][i] for i in range(min(m, n))]
    # enforce the divisibility chain
    k = len(diag)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = diag[i], diag[j]
            if a and b % a != 0:
                # standard 2x2 gcd/lcm fix, as column+row ops on the diagonal
                g = gcd(a, b)
                lcm = a // g * b
                diag[i], diag[j] = g, lcm
                row_ops.append(("pairfix", i, j, a, b))
            elif a == 0 and b != 0:
                diag[i], diag[j] = b, 0
                row_ops.append(("zswap", i, j))
    return diag, row_ops, col_ops


def smith_normal_form(matrix, check=True):
    """Smith normal form with transforms: returns (U, D, V), U M V = D.

    U and V are unimodular; D is diagonal with a divisibility chain.
    The factorization is verified exactly on every call unless check=False.
    """
    rows = [list(map(int, r)) for r in matrix]
    m = len(rows)
    n = len(rows[0]) if m else 0
    work = [r.copy() for r in rows]
    _snf_core_with_transforms(work, U := _identity(m), V := _identity(n))
    D = work
    if check:
        UM = _matmul_lists(U, rows)
        UMV = _matmul_lists(UM, V)
        if UMV != D:
            raise AssertionError("SNF verification failed: U M V != D")
    Ua = np.array(U, dtype=object)
    Da = np.array(D, dtype=object) if D else np.zeros((0, n), dtype=object)
    Va = np.array(V, dtype=object)
    return Ua, Da, Va


def _identity(n):
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        out[i][i] = 1
    return out


def _matmul_lists(a, b):
    if not a:
        return []
    n = len(b[0]) if b else 0
    k = len(b)
    out = []
    for row in a:
        acc = [0] * n
        for t in range(k):
            c = row[t]
            if c:
                brow = b[t]
                for j in range(n):
                    acc[j] += c * brow[j]
        out.append(acc)
    return out


def _snf_core_with_transforms(mat, U, V):
    """Full SNF on a list-of-lists matrix, tracking U (rows) and V (cols)."""
    m = len(mat)
    n = len(mat[0]) if m else 0

    def addmul_row(dst, src, q):
        rd, rs = mat[dst], mat[src]
        for k in range(n):
            rd[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(len(ud)):
            ud[k] += q * us[k]

    def addmul_col(dst, src, q):
        for r in mat:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def swap_rows(i, j):
        if i != j:
            mat[i], mat[j] = mat[j], mat[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in mat:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def negate_row(i):
        mat[i] = [-x for x in mat[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = mat[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if abs(v) == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            dirty = False
            for i in range(t + 1, m):
                v = mat[i][t]
                if v:
                    q = v // mat[t][t]
                    addmul_row(i, t, -q)
                    if mat[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, n):
                v = mat[t][j]
                if v:
                    q = v // mat[t][t]
                    addmul_col(j, t, -q)
                    if mat[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if mat[t][t] < 0:
            negate_row(t)
        t += 1

    # divisibility chain: move gcd up with explicit row/col ops
    k = min(m, n)
    for i in range(k):
        for j in range(i + 1, k):
            a, b = mat[i][i], mat[j][j]
            if b == 0:
                continue
            if a == 0:
                # swapping both row and column pairs exchanges the diagonal
                swap_rows(i, j)
                swap_cols(i, j)
                continue
            if b % a == 0:
                continue
            # classical trick: add col j to col i, then clear
            addmul_col(i, j, 1)
            while True:
                dirty = False
                v = mat[j][i]
                if v:
                    q = v // mat[i][i]
                    addmul_row(j, i, -q)
                    if mat[j][i]:
                        swap_rows(i, j)
                        dirty = True
                if not dirty:
                    break
            v = mat[i][j]
            if v:
                q = v // mat[i][i]
                addmul_col(j, i, -q)
            if mat[i][i] < 0:
                negate_row(i)
            if mat[j][j] < 0:
                negate_row(j)


def smith_diagonal(matrix):
    """Invariant-factor diagonal of an integer matrix (no transforms).

    Unit pivots are stripped with vectorized row operations before the
    dense bignum core runs on whatever small block remains.
    """
    rows = [list(map(int, r)) for r in matrix]
    if not rows:
        return []
    n = len(rows[0])
    if n == 0:
        return []
    maxentry = max((abs(c) for r in rows for c in r), default=0)
    big = maxentry >= _I64_SAFE
    M = np.array(rows, dtype=object if big else np.int64)
    units = 0
    while True:
        hits = np.argwhere(np.abs(M) == 1)
        if len(hits) == 0:
            break
        i, j = int(hits[0][0]), int(hits[0][1])
        s = int(M[i, j])
        pivot = M[i].copy()
        factor = M[:, j] * s  # c / s == c * s for s in {1, -1}
        factor[i] = 0
        nz = np.nonzero(factor)[0]
        if len(nz):
            if not big:
                bound = int(np.abs(factor[nz]).max()) * (_maxabs(pivot) or 1) + _maxabs(M)
                if bound >= _I64_SAFE:
                    M = M.astype(object)
                    pivot = pivot.astype(object)
                    factor = factor.astype(object)
                    big = True
            M[nz] = M[nz] - np.outer(factor[nz], pivot)
        # zeroing row i and column j stands in for deleting them; the
        # implicit column ops clearing row i touch nothing else
        M[i, :] = 0
        M[:, j] = 0
        units += 1
    keep_rows = [i for i in range(M.shape[0]) if np.any(M[i])]
    keep_cols = [j for j in range(M.shape[1]) if np.any(M[:, j])]
    diag = [1] * units
    if keep_rows:
        core = [[int(M[i, j]) for j in keep_cols] for i in keep_rows]
        diag += _snf_core(core)[0]
    return diag


def invariant_factors(matrix, ngens):
    """(torsion_factors, free_rank) of Z^ngens / rowspace(matrix)."""
    lat = Lattice(ngens)
    lat.add_rows(matrix)
    diag = smith_diagonal([list(map(int, r)) for r in lat.basis()])
    nz = [d for d in diag if d != 0]
    torsion = tuple(d for d in nz if d > 1)
    free_rank = ngens - len(nz)
    return torsion, free_rank


# -- finitely presented abelian groups ---------------------------------------


class FinPresAb:
    """A finitely generated abelian group Z^ngens / relations.

    Groups are compared only by invariant factors and free rank (abstract
    isomorphism); the presentation is kept so elements and maps can be
    manipulated in the original coordinates.
    """

    __slots__ = ("ngens", "relations", "_inv")

    def __init__(self, ngens, relations=None):
        self.ngens = ngens
        if isinstance(relations, Lattice):
            self.relations = relations
        else:
            lat = Lattice(ngens)
            if relations is not None:
                lat.add_rows(relations)
            lat.canonicalize()
            self.relations = lat
        self._inv = None

    @classmethod
    def free(cls, rank):
        return cls(rank, [])

    @classmethod
    def zero(cls):
        return cls(0, [])

    @classmethod
    def cyclic(cls, m):
        return cls(1, [[m]])

    @classmethod
    def from_invariants(cls, torsion, rank):
        n = len(torsion) + rank
        rels = []
        for i, d in enumerate(torsion):
            row = [0] * n
            row[i] = d
            rels.append(row)
        return cls(n, rels)

    def invariants(self):
        """(torsion_factors d1 | d2 | ..., free_rank)."""
        if self._inv is None:
            basis = [list(map(int, r)) for r in self.relations.basis()]
            self._inv = invariant_factors(basis, self.ngens) if basis else ((), self.ngens)
        return self._inv

    @property
    def torsion(self):
        return self.invariants()[0]

    @property
    def rank(self):
        return self.invariants()[1]

    def is_trivial(self):
        t, r = self.invariants()
        return not t and r == 0

    def order(self):
        """Group order, or None if infinite."""
        t, r = self.invariants()
        if r:
            return None
        return prod(t) if t else 1

    def torsion_order(self):
        t, _ = self.invariants()
        return prod(t) if t else 1

    def iso_eq(self, other):
        return self.invariants() == other.invariants()

    def describe(self):
        """Serialize as e.g. 'Z^2 + Z/2 + Z/6', '0' for the trivial group."""
        t, r = self.invariants()
        parts = []
        if r == 1:
            parts.append("Z")
        elif r > 1:
            parts.append(f"Z^{r}")
        parts.extend(f"Z/{d}" for d in t)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FinPresAb({self.describe()})"


def describe_invariants(torsion, rank):
    return FinPresAb.from_invariants(torsion, rank).describe()


class AbMap:
    """Map of presented abelian groups, as a generator matrix (row convention:
    image of domain generator i is matrix[i] in codomain generator coords)."""

    __slots__ = ("dom", "cod", "matrix")

    def __init__(self, dom, cod, matrix):
        self.dom = dom
        self.cod = cod
        mat = np.asarray(matrix)
        if mat.size == 0:
            mat = np.zeros((dom.ngens, cod.ngens), dtype=np.int64)
        self.matrix = mat

    @classmethod
    def zero(cls, dom, cod):
        return cls(dom, cod, np.zeros((dom.ngens, cod.ngens), dtype=np.int64))

    @classmethod
    def identity(cls, g):
        return cls(g, g, np.eye(g.ngens, dtype=np.int64))

    def is_well_defined(self):
        """Domain relations must land in the codomain relation lattice."""
        for r in self.dom.relations.basis():
            img = _vec_mat(list(map(int, r)), self.matrix)
            if not self.cod.relations.contains(img):
                return False
        return True

    def compose(self, other):
        """self o other (apply other first)."""
        assert other.cod.ngens == self.dom.ngens
        return AbMap(other.dom, self.cod, safe_matmul(other.matrix, self.matrix))

    def __add__(self, other):
        return AbMap(self.dom, self.cod, _safe_add(self.matrix, other.matrix))

    def __sub__(self, other):
        return AbMap(self.dom, self.cod, _safe_add(self.matrix, -_promote_if(other.matrix)))

    def __neg__(self):
        return AbMap(self.dom, self.cod, -_promote_if(self.matrix))

    def equals_as_map(self, other):
        """Equality as maps of presented groups (difference lands in relations)."""
        if self.dom.ngens != other.dom.ngens or self.cod.ngens != other.cod.ngens:
            return False
        diff = _safe_add(self.matrix, -_promote_if(other.matrix))
        return all(
            self.cod.relations.contains([int(c) for c in row]) for row in diff
        )

    def is_zero_map(self):
        return all(self.cod.relations.contains([int(c) for c in row]) for row in self.matrix)


def _promote_if(mat):
    if mat.dtype == np.int64 and mat.size and int(np.abs(mat).max()) >= _I64_SAFE // 2:
        return mat.astype(object)
    return mat


def _safe_add(a, b):
    if a.dtype == np.int64 and b.dtype == np.int64:
        ma = int(np.abs(a).max()) if a.size else 0
        mb = int(np.abs(b).max()) if b.size else 0
        if ma + mb < _I64_SAFE:
            return a + b
    return a.astype(object) + b.astype(object)


def safe_matmul(a, b):
    """Exact matrix product, int64 when provably safe, bigint otherwise."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.dtype == np.int64 and b.dtype == np.int64:
        ma = int(np.abs(a).max())
        mb = int(np.abs(b).max())
        if ma and mb and ma * mb * a.shape[1] < _I64_SAFE or (not ma or not mb):
            return a @ b
    return a.astype(object) @ b.astype(object)


def _vec_mat(vec, mat):
    out = [0] * mat.shape[1]
    for i, c in enumerate(vec):
        if c:
            row = mat[i]
            for j in range(mat.shape[1]):
                v = row[j]
                if v:
                    out[j] += c * int(v)
    return out


# -- homology of presented complexes ------------------------------------------


def _kernel_lattice(g):
    """Lattice of {b in Z^{ngens(B)} : g(b) = 0 in C} for g: B -> C.

    Computed as the b-projection of the kernel of the stacked matrix
    [Mg; R_C]: b Mg = -y R_C exactly says that g(b) dies in C.
    """
    B = g.dom
    C = g.cod
    nb = B.ngens
    nc = C.ngens
    crel = C.relations.basis()
    nrows = nb + len(crel)
    aug = Lattice(nc + nrows)
    for i in range(nb):
        row = [0] * (nc + nrows)
        for j in range(nc):
            row[j] = int(g.matrix[i][j])
        row[nc + i] = 1
        aug.add(row)
    for k, r in enumerate(crel):
        row = [0] * (nc + nrows)
        for j in range(nc):
            row[j] = int(r[j])
        row[nc + nb + k] = 1
        aug.add(row)
    aug.canonicalize()
    kernel = Lattice(nb)
    for k, piv in enumerate(aug.pivot_cols):
        if piv >= nc:
            kernel.add([int(c) for c in aug.rows[k][nc : nc + nb]])
    kernel.canonicalize()
    return kernel


def homology_at(f, g):
    """ker(g)/im(f) for presented maps A --f--> B --g--> C with g o f = 0."""
    B = f.cod
    C = g.cod
    assert g.dom.ngens == B.ngens
    comp = safe_matmul(f.matrix, g.matrix)
    for row in comp:
        if not C.relations.contains([int(c) for c in row]):
            raise ValueError("homology_at: composite g o f is not zero")

    kernel = _kernel_lattice(g)
    # relations: images of A generators plus B's own relations, in kernel coords
    rel_rows = []
    for row in f.matrix:
        coords = kernel.coordinates([int(c) for c in row])
        if coords is None:
            raise AssertionError("image of f escapes ker(g)")
        rel_rows.append(coords)
    for row in B.relations.basis():
        coords = kernel.coordinates([int(c) for c in row])
        if coords is None:
            raise AssertionError("relations of B escape ker(g)")
        rel_rows.append(coords)
    return FinPresAb(kernel.rank, rel_rows)


def kernel_subgroup(g):
    """ker(g: B -> C) as (lattice in Z^{ngens(B)}, FinPresAb of the kernel)."""
    kernel = _kernel_lattice(g)
    rel_rows = []
    for row in g.dom.relations.basis():
        coords = kernel.coordinates([int(c) for c in row])
        if coords is None:
            raise AssertionError("relations escape the kernel")
        rel_rows.append(coords)
    return kernel, FinPresAb(kernel.rank, rel_rows)


def cokernel(f):
    """coker(f: A -> B) as FinPresAb in B's generators."""
    rels = [list(map(int, r)) for r in f.cod.relations.basis()]
    rels += [[int(c) for c in row] for row in f.matrix]
    return FinPresAb(f.cod.ngens, rels)


# -- tensor and Tor over Z ----------------------------------------------------


def tensor_Z(a, b):
    """A (x) B over Z, from invariant factors."""
    ta, ra = a.invariants()
    tb, rb = b.invariants()
    torsion = []
    for d in ta:
        for e in tb:
            torsion.append(gcd(d, e))
        torsion.extend([d] * rb)
    for e in tb:
        torsion.extend([e] * ra)
    torsion = [d for d in torsion if d > 1]
    return FinPresAb.from_invariants(_sorted_chain(torsion), ra * rb)


def tor_Z(a, b):
    """Tor_1^Z(A, B): Tor(Z/a, Z/b) = Z/gcd(a, b), free parts contribute 0."""
    ta, _ = a.invariants()
    tb, _ = b.invariants()
    torsion = [gcd(d, e) for d in ta for e in tb]
    torsion = [d for d in torsion if d > 1]
    return FinPresAb.from_invariants(_sorted_chain(torsion), 0)


def direct_sum(groups):
    torsion = []
    rank = 0
    for g in groups:
        t, r = g.invariants()
        torsion.extend(t)
        rank += r
    return FinPresAb.from_invariants(_sorted_chain(torsion), rank)


def _sorted_chain(torsion):
    """Rewrite a multiset of cyclic orders as a divisibility chain."""
    if not torsion:
        return ()
    # factor each, rebuild elementary divisors, then recombine
    primes = {}
    for d in torsion:
        for p, e in _factorint(d).items():
            primes.setdefault(p, []).append(e)
    slots = max(len(v) for v in primes.values())
    chain = [1] * slots
    for p, exps in primes.items():
        exps.sort(reverse=True)
        for i, e in enumerate(exps):
            chain[i] *= p**e
    chain.sort()
    return tuple(chain)


def _factorint(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- tensor over a finite group ring ------------------------------------------


def tensor_over_group_ring(gens_a, rels_a, gens_b, rels_b, mul_table):
    """A (x)_{Z[G]} B for finite G with given multiplication table.

    A is a right Z[G]-module and B a left one, each presented over Z[G]:
    a relation is a list of group-ring elements (length-|G| integer
    vectors), one per generator.  Expansion goes through the regular
    representation: Z-generators are triples (i, x, j) standing for
    e_i (x) x.e_j, relations are imposed for every x in G.
    """
    order = len(mul_table)

    def idx(i, x, j):
        return (i * order + x) * gens_b + j

    n = gens_a * order * gens_b
    rows = []
    for rel in rels_a:
        for x in range(order):
            for j in range(gens_b):
                row = {}
                for i in range(gens_a):
                    coeffs = rel[i]
                    for z in range(order):
                        c = coeffs[z]
                        if c:
                            y = mul_table[z][x]
                            k = idx(i, y, j)
                            row[k] = row.get(k, 0) + c
                rows.append(row)
    for rel in rels_b:
        for x in range(order):
            for i in range(gens_a):
                row = {}
                for j in range(gens_b):
                    coeffs = rel[j]
                    for z in range(order):
                        c = coeffs[z]
                        if c:
                            y = mul_table[x][z]
                            k = idx(i, y, j)
                            row[k] = row.get(k, 0) + c
                rows.append(row)
    return FinPresAb(n, rows)
