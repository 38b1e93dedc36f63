"""Exact dense linear algebra over Z, Q, and prime fields.

Rank, kernel, solve, and Smith normal form back every cohomology
computation.  All arithmetic is arbitrary precision; no floats anywhere.
Large integer matrices get their rank from elimination modulo two
independent ~30-bit primes, cross-checked against each other, with an
exact fraction-free fallback on disagreement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import InputError, PreconditionError, ResourceError

# matrices with at least this many entries use the modular rank path
MODULAR_RANK_THRESHOLD = 10_000

DEFAULT_SNF_BIT_CAP = 200_000


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64-bit inputs."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# coefficient rings


class Ring:
    """Stateless coefficient ring tag; subclasses normalise entries."""

    name: str
    is_field = False
    characteristic = 0

    def coerce(self, x):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise InputError(f"{x} is not an integer")
            return int(x)
        if isinstance(x, int):
            return x
        raise InputError(f"cannot coerce {x!r} into Z")

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ring:Z")


class RationalRing(Ring):
    name = "Q"
    is_field = True

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise InputError(f"cannot coerce {x!r} into Q")

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("ring:Q")


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise InputError(f"prime field modulus must be prime, got {p!r}")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p

    def coerce(self, x):
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise InputError(f"{x} has no image in {self.name}")
            return x.numerator % self.p * pow(den, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        raise InputError(f"cannot coerce {x!r} into {self.name}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 is not invertible in {self.name}")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("ring:F", self.p))


ZZ = IntegerRing()
QQ = RationalRing()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Dense matrix with exact, ring-normalised entries.

    Instances are treated as immutable once built; construction helpers
    may assemble `data` in place but must not mutate a published matrix.
    """

    __slots__ = ("rows", "cols", "ring", "data", "_np_cache")

    def __init__(self, rows: int, cols: int, ring: Ring, data=None):
        if rows < 0 or cols < 0:
            raise InputError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self.ring = ring
        if data is None:
            zero = ring.coerce(0)
            self.data = [[zero] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise InputError("matrix data does not match declared shape")
            self.data = [[ring.coerce(x) for x in row] for row in data]
        self._np_cache = None

    # -- construction ------------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols, ring):
        return cls(rows, cols, ring)

    @classmethod
    def identity(cls, n, ring):
        m = cls(n, n, ring)
        one = ring.coerce(1)
        for i in range(n):
            m.data[i][i] = one
        return m

    @classmethod
    def from_rows(cls, rows, ring):
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(r, c, ring, rows)

    @classmethod
    def from_entries(cls, rows, cols, ring, entries):
        """Build from a {(i, j): value} mapping; unmentioned entries are zero."""
        m = cls(rows, cols, ring)
        for (i, j), v in entries.items():
            m.data[i][j] = ring.coerce(v)
        return m

    @classmethod
    def from_columns(cls, columns, rows, ring):
        m = cls(rows, len(columns), ring)
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                m.data[i][j] = ring.coerce(x)
        return m

    def copy(self):
        return ExactMatrix(self.rows, self.cols, self.ring,
                           [row[:] for row in self.data])

    # -- basic queries -----------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.ring == other.ring and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.ring,
                     tuple(tuple(r) for r in self.data)))

    def is_zero(self):
        return all(all(x == 0 for x in row) for row in self.data)

    def column(self, j):
        return [row[j] for row in self.data]

    def transpose(self):
        if self.rows == 0:
            return ExactMatrix(self.cols, 0, self.ring,
                               [[] for _ in range(self.cols)])
        return ExactMatrix(self.cols, self.rows, self.ring,
                           [list(col) for col in zip(*self.data)])

    def hstack(self, other):
        if other.rows != self.rows or other.ring != self.ring:
            raise InputError("hstack needs matching row count and ring")
        return ExactMatrix(self.rows, self.cols + other.cols, self.ring,
                           [a + b for a, b in zip(self.data, other.data)])

    def to_ring(self, ring: Ring) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, ring, self.data)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, self.ring,
                           [[a + b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        self._check_same_shape(other)
        return ExactMatrix(self.rows, self.cols, self.ring,
                           [[a - b for a, b in zip(r1, r2)]
                            for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        return ExactMatrix(self.rows, self.cols, self.ring,
                           [[-a for a in row] for row in self.data])

    def scaled(self, c):
        c = self.ring.coerce(c)
        return ExactMatrix(self.rows, self.cols, self.ring,
                           [[c * a for a in row] for row in self.data])

    def _check_same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols) or self.ring != other.ring:
            raise InputError("shape or ring mismatch")

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows or self.ring != other.ring:
                raise InputError("matmul shape or ring mismatch")
            bt = list(zip(*other.data)) if other.cols else []
            zero = self.ring.coerce(0)
            out = []
            for arow in self.data:
                nz = [(j, a) for j, a in enumerate(arow) if a != 0]
                orow = []
                for bcol in bt:
                    s = zero
                    for j, a in nz:
                        b = bcol[j]
                        if b:
                            s = s + a * b
                    orow.append(s)
                out.append(orow)
            return ExactMatrix(self.rows, other.cols, self.ring, out)
        return self.matvec(other)

    def matvec(self, vec):
        if len(vec) != self.cols:
            raise InputError("vector length mismatch")
        if self.ring == ZZ and self.cols and self._fits_int64(vec):
            a = self._np()
            v = np.array([int(x) for x in vec], dtype=np.int64)
            return [int(x) for x in a @ v]
        zero = self.ring.coerce(0)
        out = []
        for row in self.data:
            s = zero
            for a, x in zip(row, vec):
                if a and x:
                    s = s + a * x
            out.append(self.ring.coerce(s))
        return out

    def _fits_int64(self, vec):
        if not all(isinstance(x, int) for x in vec):
            return False
        vmax = max((abs(x) for x in vec), default=0)
        amax = max((abs(x) for row in self.data for x in row), default=0)
        return amax * vmax * max(self.cols, 1) < 2**62

    def _np(self):
        if self._np_cache is None:
            self._np_cache = np.array(
                [[int(x) for x in row] for row in self.data], dtype=np.int64)
        return self._np_cache

    # -- integer normalisation ----------------------------------------------

    def _int_rows(self):
        """Rows scaled to integers (row scaling preserves rank)."""
        if self.ring == ZZ:
            return [row[:] for row in self.data]
        if self.ring == QQ:
            out = []
            for row in self.data:
                den = 1
                for x in row:
                    den = den * x.denominator // gcd(den, x.denominator)
                out.append([int(x * den) for x in row])
            return out
        raise InputError("integer normalisation needs a Z or Q matrix")

    # -- rank ----------------------------------------------------------------

    def rank(self, method: str = "auto") -> int:
        """Rank over the matrix ring.

        method: "auto" picks modular cross-checked elimination for large
        Z/Q matrices and exact fraction-free elimination otherwise;
        "exact" and "modular" force the respective path.
        """
        if self.rows == 0 or self.cols == 0:
            return 0
        if isinstance(self.ring, PrimeField):
            return _rank_mod_p([[int(x) for x in row] for row in self.data],
                               self.ring.p)
        ints = self._int_rows()
        if method == "exact":
            return _bareiss_rank(ints)
        if method == "modular" or (method == "auto"
                                   and self.rows * self.cols >= MODULAR_RANK_THRESHOLD):
            return _rank_modular_crosscheck(ints)
        return _bareiss_rank(ints)

    # -- field elimination ----------------------------------------------------

    def kernel_basis(self):
        """Basis of the right kernel; field rings only."""
        if not self.ring.is_field:
            raise PreconditionError("kernel_basis needs a field ring (Q or Fp)")
        p = self.ring.p if isinstance(self.ring, PrimeField) else None
        rref = _IncrementalRREF(self.cols, p)
        for row in self.data:
            rref.feed(row)
        return rref.kernel_basis(self.ring)

    def kernel_matrix(self):
        return ExactMatrix.from_columns(self.kernel_basis(), self.cols, self.ring)

    def solve(self, rhs):
        """Some solution x of self @ x = rhs, or None; field rings only."""
        sol = self.solve_columns(
            ExactMatrix(self.rows, 1, self.ring, [[v] for v in rhs]))
        return None if sol is None else sol.column(0)

    def solve_columns(self, rhs: "ExactMatrix"):
        """Solve self @ X = rhs column-wise; returns X or None if inconsistent."""
        if not self.ring.is_field:
            raise PreconditionError("solve needs a field ring (Q or Fp)")
        if rhs.rows != self.rows:
            raise InputError("rhs row count mismatch")
        p = self.ring.p if isinstance(self.ring, PrimeField) else None
        rref = _IncrementalRREF(self.cols + rhs.cols, p)
        for row, rrow in zip(self.data, rhs.data):
            rref.feed(row + rrow)
        if any(c >= self.cols for c in rref.pivot_cols):
            return None
        sol = ExactMatrix(self.cols, rhs.cols, self.ring)
        for row, c in zip(rref.pivot_rows, rref.pivot_cols):
            for k in range(rhs.cols):
                sol.data[c][k] = self.ring.coerce(row[self.cols + k])
        return sol

    def inverse(self):
        """Inverse matrix; InputError when singular (Z needs a unimodular input)."""
        if self.rows != self.cols:
            raise InputError("only square matrices can be inverted")
        if self.ring == ZZ:
            inv_q = self.to_ring(QQ).inverse()
            if any(x.denominator != 1 for row in inv_q.data for x in row):
                raise InputError("matrix is not invertible over Z")
            return inv_q.to_ring(ZZ)
        sol = self.solve_columns(ExactMatrix.identity(self.rows, self.ring))
        if sol is None:
            raise InputError("matrix is singular")
        return sol

    # -- Smith normal form ------------------------------------------------------

    def smith_normal_form(self, transforms: bool = False,
                          bit_cap: int = DEFAULT_SNF_BIT_CAP) -> "SmithForm":
        if self.ring != ZZ:
            raise PreconditionError("Smith normal form needs an integer matrix")
        return _smith(self, transforms, bit_cap)

    def integer_kernel_basis(self) -> "ExactMatrix":
        """Basis of the saturated kernel lattice (columns); Z matrices only."""
        if self.ring != ZZ:
            raise PreconditionError("integer kernel needs a Z matrix")
        if self.rows == 0:
            return ExactMatrix.identity(self.cols, ZZ)
        sf = self.smith_normal_form(transforms=True)
        r = sf.rank
        basis = ExactMatrix(self.cols, self.cols - r, ZZ)
        for j in range(r, self.cols):
            for i in range(self.cols):
                basis.data[i][j - r] = sf.V.data[i][j]
        return basis

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.ring})"


# ---------------------------------------------------------------------------
# elimination kernels


class _IncrementalRREF:
    """Reduced row echelon form built one row at a time.

    Pivot rows are kept mutually reduced, so feeding a row costs one pass
    over the current pivots; well suited to the tall thin matrices that
    show up as restricted differentials.  Entries are Fractions (p=None)
    or ints mod p.
    """

    def __init__(self, width, p=None):
        self.width = width
        self.p = p
        self.pivot_rows = []
        self.pivot_cols = []

    def _reduce(self, row, other, factor):
        if self.p is None:
            return [a - factor * b for a, b in zip(row, other)]
        return [(a - factor * b) % self.p for a, b in zip(row, other)]

    def feed(self, src):
        p = self.p
        row = [Fraction(x) for x in src] if p is None else [int(x) % p for x in src]
        for r, c in zip(self.pivot_rows, self.pivot_cols):
            f = row[c]
            if f:
                row = self._reduce(row, r, f)
        lead = next((j for j in range(self.width) if row[j]), None)
        if lead is None:
            return False
        head = row[lead]
        if p is None:
            row = [a / head for a in row]
        else:
            inv = pow(head, -1, p)
            row = [a * inv % p for a in row]
        for i, r in enumerate(self.pivot_rows):
            f = r[lead]
            if f:
                self.pivot_rows[i] = self._reduce(r, row, f)
        pos = 0
        while pos < len(self.pivot_cols) and self.pivot_cols[pos] < lead:
            pos += 1
        self.pivot_rows.insert(pos, row)
        self.pivot_cols.insert(pos, lead)
        return True

    @property
    def rank(self):
        return len(self.pivot_rows)

    def kernel_basis(self, ring):
        pivot_set = set(self.pivot_cols)
        free_cols = [j for j in range(self.width) if j not in pivot_set]
        basis = []
        for f in free_cols:
            vec = [ring.coerce(0)] * self.width
            vec[f] = ring.coerce(1)
            for r, c in zip(self.pivot_rows, self.pivot_cols):
                v = r[f]
                if v:
                    vec[c] = ring.coerce(-v if self.p is None else (-v) % self.p)
            basis.append(vec)
        return basis


def _bareiss_rank(rows):
    """Fraction-free (Bareiss) row echelon rank of integer rows; destructive."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv, best = None, None
        for i in range(r, m):
            v = rows[i][c]
            if v:
                a = abs(v)
                if best is None or a < best:
                    piv, best = i, a
                    if a == 1:
                        break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        pv = prow[c]
        for i in range(r + 1, m):
            ri = rows[i]
            fv = ri[c]
            for j in range(c + 1, n):
                ri[j] = (pv * ri[j] - fv * prow[j]) // prev
            ri[c] = 0
        prev = pv
        r += 1
    return r


def _rank_mod_p(rows, p):
    if p < 2**31:
        a = np.array(rows, dtype=np.int64) % p
        return _rank_mod_p_numpy(a, p)
    work = [[x % p for x in row] for row in rows]
    r = 0
    m = len(work)
    n = len(work[0]) if work else 0
    for c in range(n):
        piv = next((i for i in range(r, m) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, p)
        work[r] = [v * inv % p for v in work[r]]
        for i in range(r + 1, m):
            f = work[i][c]
            if f:
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
        r += 1
        if r == m:
            break
    return r


def _rank_mod_p_numpy(a, p):
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        rest = a[r + 1:, c]
        nzr = np.nonzero(rest)[0]
        if nzr.size:
            idx = nzr + r + 1
            a[idx, c:] = (a[idx, c:] - a[idx, c, None] * a[r, c:]) % p
        r += 1
    return r


def _modular_primes(rows, cols):
    """Two distinct ~30-bit primes, chosen deterministically from the shape."""
    rng = random.Random(0x5ACC0 ^ (rows * 2654435761) ^ cols)
    primes = []
    while len(primes) < 2:
        cand = rng.randrange(2**29, 2**30) | 1
        if is_prime(cand) and cand not in primes:
            primes.append(cand)
    return primes


def _rank_modular_crosscheck(int_rows):
    """Rank mod two independent primes; exact fallback on disagreement.

    rank_Q >= rank mod p always, so two agreeing residue ranks pin the
    rational rank unless both primes divide the same maximal minor.
    """
    amax = max((abs(x) for row in int_rows for x in row), default=0)
    if amax >= 2**31:
        return _bareiss_rank([row[:] for row in int_rows])
    p1, p2 = _modular_primes(len(int_rows), len(int_rows[0]) if int_rows else 0)
    r1 = _rank_mod_p(int_rows, p1)
    r2 = _rank_mod_p(int_rows, p2)
    if r1 == r2:
        return r1
    return _bareiss_rank([row[:] for row in int_rows])


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d1 | d2 | ... | dr of an integer matrix."""

    invariant_factors: tuple
    rank: int
    U: ExactMatrix | None = None
    V: ExactMatrix | None = None

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d != 1)


def _smith(matrix: ExactMatrix, transforms: bool, bit_cap: int) -> SmithForm:
    d = [[int(x) for x in row] for row in matrix.data]
    m, n = matrix.rows, matrix.cols
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    v = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def row_op(i, k, q):
        # row_i -= q * row_k
        d[i] = [a - q * b for a, b in zip(d[i], d[k])]
        if u is not None:
            u[i] = [a - q * b for a, b in zip(u[i], u[k])]

    def col_op(j, k, q):
        # col_j -= q * col_k
        for row in d:
            row[j] -= q * row[k]
        if v is not None:
            for row in v:
                row[j] -= q * row[k]

    def swap_rows(i, k):
        d[i], d[k] = d[k], d[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in d:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    def negate_row(i):
        d[i] = [-a for a in d[i]]
        if u is not None:
            u[i] = [-a for a in u[i]]

    s = 0
    while s < min(m, n):
        piv, best, maxabs = None, None, 0
        for i in range(s, m):
            for j in range(s, n):
                a = abs(d[i][j])
                if a > maxabs:
                    maxabs = a
                if a and (best is None or a < best):
                    piv, best = (i, j), a
        if piv is None:
            break
        if maxabs.bit_length() > bit_cap:
            raise ResourceError(f"Smith form entries exceeded {bit_cap} bits")
        if piv[0] != s:
            swap_rows(s, piv[0])
        if piv[1] != s:
            swap_cols(s, piv[1])
        if d[s][s] < 0:
            negate_row(s)

        while True:
            dirty = False
            for i in range(s + 1, m):
                if d[i][s]:
                    q = d[i][s] // d[s][s]
                    row_op(i, s, q)
                    if d[i][s]:
                        swap_rows(s, i)
                        dirty = True
            for j in range(s + 1, n):
                if d[s][j]:
                    q = d[s][j] // d[s][s]
                    col_op(j, s, q)
                    if d[s][j]:
                        swap_cols(s, j)
                        dirty = True
            if d[s][s] < 0:
                negate_row(s)
            if not dirty and all(d[i][s] == 0 for i in range(s + 1, m)) \
                    and all(d[s][j] == 0 for j in range(s + 1, n)):
                break

        # make the pivot divide every trailing entry (gives the factor chain)
        fix = None
        for i in range(s + 1, m):
            if any(d[i][j] % d[s][s] for j in range(s + 1, n)):
                fix = i
                break
        if fix is not None:
            row_op(s, fix, -1)  # adds the offending row to the pivot row
            continue
        s += 1

    factors = []
    for i in range(min(m, n)):
        if d[i][i]:
            factors.append(abs(d[i][i]))
        else:
            break
    rank = len(factors)

    um = vm = None
    if transforms:
        um = ExactMatrix.from_rows(u, ZZ) if m else ExactMatrix(0, 0, ZZ)
        vm = ExactMatrix.from_rows(v, ZZ) if n else ExactMatrix(n, n, ZZ)
        if m and n:
            check = um @ matrix @ vm
            for i in range(m):
                for j in range(n):
                    want = factors[i] if i == j and i < rank else 0
                    if check.data[i][j] != want:
                        raise RuntimeError("Smith transform verification failed")
    return SmithForm(tuple(factors), rank, um, vm)


# ---------------------------------------------------------------------------
# finitely generated abelian groups as lattice quotients


@dataclass(frozen=True)
class AbelianGroup:
    """Isomorphism type Z^free_rank + sum of Z/d for d in torsion."""

    free_rank: int
    torsion: tuple

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def describe(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def lattice_quotient(kernel_of: ExactMatrix, image_of: ExactMatrix,
                     modulus: int = 0) -> AbelianGroup:
    """Invariants of ker(kernel_of) / im(image_of) over Z, or mod `modulus`.

    With modulus q > 0 the numerator is {v : kernel_of @ v = 0 mod q}, the
    denominator additionally contains q * (ambient lattice), and the result
    is a finite group of exponent dividing q.  For prime q this reduces to
    plain F_q linear algebra; for prime powers the kernel lattice is
    extracted from a Smith form of the stacked matrix [A | qI].
    """
    if kernel_of.ring != ZZ or image_of.ring != ZZ:
        raise PreconditionError("lattice_quotient works on integer matrices")
    ambient = kernel_of.cols
    if image_of.rows != ambient:
        raise InputError("image generators live in the wrong ambient space")

    if modulus and is_prime(modulus):
        # mod a prime the quotient is the F_p cohomology: ker/im of reductions
        fp = GF(modulus)
        ker_dim = ambient - kernel_of.to_ring(fp).rank()
        im_rank = image_of.to_ring(fp).rank()
        return AbelianGroup(0, (modulus,) * (ker_dim - im_rank))

    if modulus:
        stacked = kernel_of.hstack(
            ExactMatrix.identity(kernel_of.rows, ZZ).scaled(modulus))
        full_kernel = stacked.integer_kernel_basis()
        basis = ExactMatrix(ambient, full_kernel.cols, ZZ,
                            full_kernel.data[:ambient])
        gens = image_of.hstack(ExactMatrix.identity(ambient, ZZ).scaled(modulus))
    else:
        basis = kernel_of.integer_kernel_basis()
        gens = image_of

    k = basis.cols
    if k == 0:
        return AbelianGroup(0, ())
    if gens.cols == 0:
        return AbelianGroup(k, ())

    coords = basis.to_ring(QQ).solve_columns(gens.to_ring(QQ))
    if coords is None:
        raise ArithmeticError("image does not lie in the kernel lattice")
    for row in coords.data:
        for x in row:
            if x.denominator != 1:
                raise ArithmeticError("image is not integral in the kernel basis")
    rel = coords.to_ring(ZZ)
    sf = rel.smith_normal_form()
    free = k - sf.rank
    if modulus:
        if free:
            raise ArithmeticError("quotient mod a modulus must be finite")
        for dfac in sf.torsion:
            if modulus % dfac:
                raise ArithmeticError("invariant factor does not divide the modulus")
    return AbelianGroup(free, sf.torsion)
