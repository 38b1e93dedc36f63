"""Finite racks as n x n operation tables.

The table convention is table[x][y] = x |> y, a left action: row x is the
translation permutation attached to x.  Elements are always the indices
0..n-1; display labels belong to the I/O layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _all_permutations

from .errors import InputError

AXIOM_BIJECTIVE = "row_bijective"
AXIOM_SELF_DISTRIBUTIVE = "self_distributive"


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple


@dataclass(frozen=True)
class RackValidation:
    valid: bool
    violations: tuple

    def witness(self, axiom):
        for v in self.violations:
            if v.axiom == axiom:
                return v.witness
        return None


def _check_shape(candidate):
    n = len(candidate)
    if n == 0:
        raise InputError("a rack needs at least one element")
    for x, row in enumerate(candidate):
        if not isinstance(row, (list, tuple)) or len(row) != n:
            raise InputError(f"row {x} must be a sequence of length {n}")
        for y, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise InputError(f"entry ({x},{y}) = {v!r} is not an index in [0,{n})")
    return n


def verify_rack(candidate) -> RackValidation:
    """Check the two rack axioms on a raw table.

    Malformed input (shape, entry range) raises InputError; axiom failures
    are reported with the first witness found per axiom, scanning in
    lexicographic order.
    """
    n = _check_shape(candidate)
    violations = []
    for x in range(n):
        if len(set(candidate[x])) != n:
            violations.append(AxiomViolation(AXIOM_BIJECTIVE, (x,)))
            break
    done = False
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs = candidate[x][candidate[y][z]]
                rhs = candidate[candidate[x][y]][candidate[x][z]]
                if lhs != rhs:
                    violations.append(
                        AxiomViolation(AXIOM_SELF_DISTRIBUTIVE, (x, y, z)))
                    done = True
                    break
            if done:
                break
        if done:
            break
    return RackValidation(not violations, tuple(violations))


@dataclass(frozen=True)
class RackTable:
    """A validated finite rack; construct through from_table only."""

    size: int
    table: tuple

    @classmethod
    def from_table(cls, candidate) -> "RackTable":
        report = verify_rack(candidate)
        if not report.valid:
            v = report.violations[0]
            raise InputError(f"not a rack: axiom {v.axiom} fails at {v.witness}")
        return cls(len(candidate), tuple(tuple(row) for row in candidate))

    def op(self, x, y):
        return self.table[x][y]

    def translation(self, x):
        """The permutation y -> x |> y as an image tuple."""
        return self.table[x]

    def inverse_op(self, x, z):
        """The unique y with x |> y = z."""
        return self.table[x].index(z)

    def __repr__(self):
        return f"RackTable(size={self.size})"


def verify_yang_baxter(rack: RackTable) -> bool:
    """Exhaustive braid-relation check for the map (x, y) -> (x, x |> y).

    Redundant for a valid rack, kept as an independent consistency check.
    """
    t = rack.table
    n = rack.size
    for x in range(n):
        for y in range(n):
            for z in range(n):
                # apply factors right to left on (x, y, z)
                a, b, c = x, y, t[y][z]
                a, b, c = a, b, t[a][c]
                lhs = (a, t[a][b], c)
                a, b, c = x, t[x][y], z
                a, b, c = a, b, t[a][c]
                rhs = (a, b, t[b][c])
                if lhs != rhs:
                    return False
    return True


def is_quandle(rack: RackTable) -> bool:
    return all(rack.table[x][x] == x for x in range(rack.size))


# ---------------------------------------------------------------------------
# standard constructions


def trivial_rack(n: int) -> RackTable:
    if n < 1:
        raise InputError("trivial rack needs n >= 1")
    return RackTable.from_table([[y for y in range(n)] for _ in range(n)])


def dihedral_rack(n: int) -> RackTable:
    """x |> y = 2x - y mod n."""
    if n < 1:
        raise InputError("dihedral rack needs n >= 1")
    return RackTable.from_table(
        [[(2 * x - y) % n for y in range(n)] for x in range(n)])


def cyclic_rack(n: int) -> RackTable:
    """x |> y = y + 1 mod n (a rack that is not a quandle for n > 1)."""
    if n < 1:
        raise InputError("cyclic rack needs n >= 1")
    return RackTable.from_table(
        [[(y + 1) % n for y in range(n)] for _ in range(n)])


def conjugation_rack(group_table, subset=None) -> RackTable:
    """Conjugation rack x |> y = x y x^-1 on a group or a closed subset.

    `group_table` is the multiplication table of a finite group; `subset`
    (optional, sorted element list) must be closed under conjugation.
    """
    n = len(group_table)
    _check_shape(group_table)
    identity = None
    for e in range(n):
        if all(group_table[e][x] == x and group_table[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise InputError("multiplication table has no identity element")
    inverse = [None] * n
    for a in range(n):
        for b in range(n):
            if group_table[a][b] == identity:
                inverse[a] = b
                break
        if inverse[a] is None:
            raise InputError(f"element {a} has no inverse")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if group_table[group_table[a][b]][c] != group_table[a][group_table[b][c]]:
                    raise InputError("multiplication table is not associative")

    def conj(x, y):
        return group_table[group_table[x][y]][inverse[x]]

    if subset is None:
        elements = list(range(n))
    else:
        elements = sorted(set(subset))
        if any(not 0 <= e < n for e in elements):
            raise InputError("subset contains invalid element indices")
        in_subset = set(elements)
        for x in range(n):
            for y in elements:
                if conj(x, y) not in in_subset:
                    raise InputError(
                        f"subset is not closed under conjugation: {x} |> {y}")
    pos = {e: i for i, e in enumerate(elements)}
    table = [[pos[conj(x, y)] for y in elements] for x in elements]
    return RackTable.from_table(table)


def symmetric_group_table(k: int):
    """Multiplication table of S_k; elements are image tuples in lex order."""
    elems = sorted(_all_permutations(range(k)))
    index = {p: i for i, p in enumerate(elems)}
    table = []
    for p in elems:
        # (p * q)(i) = p(q(i))
        table.append([index[tuple(p[q[i]] for i in range(k))] for q in elems])
    return table


def cyclic_group_table(k: int):
    return [[(a + b) % k for b in range(k)] for a in range(k)]


def make_standard(kind: str, n: int | None = None, *,
                  group_table=None, subset=None) -> RackTable:
    """Dispatcher for the built-in rack families."""
    if kind == "trivial":
        return trivial_rack(_require_n(kind, n))
    if kind == "dihedral":
        return dihedral_rack(_require_n(kind, n))
    if kind == "cyclic":
        return cyclic_rack(_require_n(kind, n))
    if kind == "conjugation":
        if group_table is None:
            raise InputError("conjugation rack needs a group multiplication table")
        return conjugation_rack(group_table, subset)
    raise InputError(f"unknown rack kind {kind!r}")


def _require_n(kind, n):
    if n is None:
        raise InputError(f"{kind} rack needs a size parameter")
    return n


def make_semidirect(rack: RackTable, module) -> RackTable:
    """Extension rack on X x N for a module N over a finite prime field.

    (x, a) |> (y, b) = (x |> y, a - a.(x|>y)^-1 + b.x^-1), the twisted
    product whose first projection is a rack homomorphism onto `rack`.
    """
    ring = module.ring
    p = getattr(ring, "p", None)
    if p is None:
        raise InputError("semidirect products need a finite prime-field module")
    k = module.dim
    inv = [module.action_inverse(x) for x in range(rack.size)]

    def vec_mat(vec, mat):
        # right action on row vectors, entries mod p
        return tuple(sum(vec[i] * mat.data[i][j] for i in range(k)) % p
                     for j in range(k))

    n_elems = []

    def gen(prefix, depth):
        if depth == 0:
            n_elems.append(tuple(prefix))
            return
        for v in range(p):
            gen(prefix + [v], depth - 1)

    gen([], k)
    n_index = {v: i for i, v in enumerate(n_elems)}
    size = rack.size * len(n_elems)
    table = [[0] * size for _ in range(size)]
    for x in range(rack.size):
        for ai, a in enumerate(n_elems):
            row = table[x * len(n_elems) + ai]
            for y in range(rack.size):
                z = rack.op(x, y)
                a_twist = vec_mat(a, inv[z])
                for bi, b in enumerate(n_elems):
                    b_twist = vec_mat(b, inv[x])
                    c = tuple((a[i] - a_twist[i] + b_twist[i]) % p for i in range(k))
                    row[y * len(n_elems) + bi] = z * len(n_elems) + n_index[c]
    return RackTable.from_table(table)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitPartition:
    """Connected components of the edge relation y ~ x |> y."""

    size: int
    orbit_of: tuple
    orbit_count: int

    def classes(self):
        out = [[] for _ in range(self.orbit_count)]
        for x, o in enumerate(self.orbit_of):
            out[o].append(x)
        return out


def orbits(rack: RackTable) -> OrbitPartition:
    """Orbit decomposition by union-find over the edges {y, x |> y}."""
    n = rack.size
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(n):
        row = rack.table[x]
        for y in range(n):
            ra, rb = find(y), find(row[y])
            if ra != rb:
                parent[rb] = ra
    labels = {}
    orbit_of = []
    for x in range(n):
        root = find(x)
        if root not in labels:
            labels[root] = len(labels)
        orbit_of.append(labels[root])
    return OrbitPartition(n, tuple(orbit_of), len(labels))


# ---------------------------------------------------------------------------
# JSON interchange


def rack_to_json(rack: RackTable, labels=None) -> dict:
    doc = {"size": rack.size, "table": [list(row) for row in rack.table]}
    if labels is not None:
        if len(labels) != rack.size:
            raise InputError("label list length must match rack size")
        doc["labels"] = list(labels)
    return doc


def rack_from_json(doc) -> tuple:
    """Parse {"size": n, "table": [[..]], "labels"?: [..]} -> (rack, labels)."""
    if not isinstance(doc, dict) or "table" not in doc:
        raise InputError("rack JSON needs a 'table' field")
    table = doc["table"]
    if not isinstance(table, list):
        raise InputError("rack JSON 'table' must be a list of rows")
    rack = RackTable.from_table(table)
    if "size" in doc and doc["size"] != rack.size:
        raise InputError("rack JSON 'size' does not match the table")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != rack.size:
            raise InputError("rack JSON 'labels' must list one label per element")
        labels = [str(x) for x in labels]
    return rack, labels
