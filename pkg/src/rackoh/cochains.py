"""The rack cochain complex and its structural operators.

Basis convention, used everywhere: the degree-n space has one coordinate
per pair (tuple, module index), flattened as lex(x_1..x_n) * dim + j with
the module index innermost.  Cochain values are column vectors and every
operator is a matrix acting by left multiplication; since the module
action is a right action on row vectors, action matrices enter operator
blocks transposed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import InputError, PreconditionError, ResourceError
from .linalg import QQ, ZZ, ExactMatrix, PrimeField, _IncrementalRREF
from .modules import CoeffModule, function_module, tensor_with_trivial
from .racks import RackTable

DEFAULT_ACTION_GROUP_CAP = 1_000_000


def memory_budget_bytes() -> int:
    mb = os.environ.get("RACKOH_BUDGET_MB", "512")
    try:
        return max(1, int(mb)) * 1024 * 1024
    except ValueError:
        raise InputError(f"RACKOH_BUDGET_MB must be an integer, got {mb!r}")


def _guard(rows, cols):
    need = rows * cols * 8
    budget = memory_budget_bytes()
    if need > budget:
        raise ResourceError(
            f"a {rows}x{cols} matrix exceeds the memory budget "
            f"({need >> 20} MiB > {budget >> 20} MiB); lower the degree or "
            f"raise RACKOH_BUDGET_MB")


@dataclass(frozen=True)
class CochainSpace:
    rack: RackTable
    module: CoeffModule
    degree: int

    @property
    def dimension(self):
        return self.rack.size ** self.degree * self.module.dim

    def flat(self, xs, j=0):
        idx = 0
        for x in xs:
            idx = idx * self.rack.size + x
        return idx * self.module.dim + j

    def unflat(self, flat):
        j = flat % self.module.dim
        idx = flat // self.module.dim
        xs = []
        for _ in range(self.degree):
            xs.append(idx % self.rack.size)
            idx //= self.rack.size
        return tuple(reversed(xs)), j


def cochain_space(rack, module, degree) -> CochainSpace:
    if degree < 0:
        raise InputError("cochain degree must be >= 0")
    return CochainSpace(rack, module, degree)


# ---------------------------------------------------------------------------
# differentials


def differential(rack: RackTable, module: CoeffModule, n: int) -> ExactMatrix:
    """Matrix of the degree-n coboundary map C^n -> C^(n+1).

    Row (y_1..y_(n+1), l), column (z_1..z_n, j); the i-th term deletes y_i
    (identity block) and twists the later arguments by y_i while acting by
    y_i on the value (transposed action block), with sign (-1)^(i-1).
    """
    if n < 0:
        raise InputError("differential degree must be >= 0")
    size, k = rack.size, module.dim
    rows = size ** (n + 1) * k
    cols = size ** n * k
    _guard(rows, cols)
    entries: dict = {}
    for ys in product(range(size), repeat=n + 1):
        base = 0
        for y in ys:
            base = base * size + y
        base *= k
        for i in range(n + 1):
            sign = 1 if i % 2 == 0 else -1
            yi = ys[i]
            z1 = ys[:i] + ys[i + 1:]
            flat1 = 0
            for z in z1:
                flat1 = flat1 * size + z
            flat1 *= k
            for j in range(k):
                key = (base + j, flat1 + j)
                entries[key] = entries.get(key, 0) + sign
            z2 = ys[:i] + tuple(rack.op(yi, y) for y in ys[i + 1:])
            flat2 = 0
            for z in z2:
                flat2 = flat2 * size + z
            flat2 *= k
            act = module.action(yi)
            for j in range(k):
                arow = act.data[j]
                for l in range(k):
                    a = arow[l]
                    if a:
                        key = (base + l, flat2 + j)
                        entries[key] = entries.get(key, 0) - sign * a
    return ExactMatrix.from_entries(rows, cols, module.ring, entries)


def differential_prime(rack: RackTable, module: CoeffModule, n: int) -> ExactMatrix:
    """The companion coboundary map that twists the deleted-argument term.

    Term i acts on the value by the inverse of w_i = y_1 |> (y_2 |> (... y_i))
    instead of twisting it by y_i; chain_isomorphism intertwines the two.
    """
    if n < 0:
        raise InputError("differential degree must be >= 0")
    size, k = rack.size, module.dim
    rows = size ** (n + 1) * k
    cols = size ** n * k
    _guard(rows, cols)
    inverses = [module.action_inverse(x) for x in range(size)]
    entries: dict = {}
    for ys in product(range(size), repeat=n + 1):
        base = 0
        for y in ys:
            base = base * size + y
        base *= k
        for i in range(n + 1):
            sign = 1 if i % 2 == 0 else -1
            yi = ys[i]
            w = yi
            for j in range(i - 1, -1, -1):
                w = rack.op(ys[j], w)
            z1 = ys[:i] + ys[i + 1:]
            flat1 = 0
            for z in z1:
                flat1 = flat1 * size + z
            flat1 *= k
            winv = inverses[w]
            for j in range(k):
                wrow = winv.data[j]
                for l in range(k):
                    a = wrow[l]
                    if a:
                        key = (base + l, flat1 + j)
                        entries[key] = entries.get(key, 0) + sign * a
            z2 = ys[:i] + tuple(rack.op(yi, y) for y in ys[i + 1:])
            flat2 = 0
            for z in z2:
                flat2 = flat2 * size + z
            flat2 *= k
            for j in range(k):
                key = (base + j, flat2 + j)
                entries[key] = entries.get(key, 0) - sign
    return ExactMatrix.from_entries(rows, cols, module.ring, entries)


def chain_isomorphism(rack: RackTable, module: CoeffModule, n: int) -> ExactMatrix:
    """Block-diagonal map f(x..) -> f(x..) . (x_1 ... x_n)^-1 linking the
    two differentials: chain_isomorphism . d == d' . chain_isomorphism."""
    size, k = rack.size, module.dim
    dim = size ** n * k
    _guard(dim, dim)
    out = ExactMatrix(dim, dim, module.ring)
    cache: dict = {}
    for idx, xs in enumerate(product(range(size), repeat=n)):
        if xs not in cache:
            prod_mat = ExactMatrix.identity(k, module.ring)
            for x in xs:
                prod_mat = prod_mat @ module.action(x)
            cache[xs] = prod_mat.inverse()
        block = cache[xs]
        base = idx * k
        for j in range(k):
            for l in range(k):
                out.data[base + l][base + j] = block.data[j][l]
    return out


# ---------------------------------------------------------------------------
# the diagonal action on cochains


def _action_entries(rack, module, n, perm_images, mat, entries=None, weight=1):
    """Entries of the cochain action of one (permutation, matrix) pair."""
    size, k = rack.size, module.dim
    if entries is None:
        entries = {}
    for idx, xs in enumerate(product(range(size), repeat=n)):
        tgt = 0
        for x in xs:
            tgt = tgt * size + perm_images[x]
        tgt *= k
        base = idx * k
        for j in range(k):
            mrow = mat.data[j]
            for l in range(k):
                a = mrow[l]
                if a:
                    key = (base + l, tgt + j)
                    entries[key] = entries.get(key, 0) + weight * a
    return entries


def group_action_on_cochains(rack: RackTable, module: CoeffModule,
                             n: int, y: int) -> ExactMatrix:
    """Matrix of f -> f.y, (f.y)(x_1..x_n) = f(y|>x_1 .. y|>x_n).y."""
    if not 0 <= y < rack.size:
        raise InputError(f"rack element {y} out of range")
    size, k = rack.size, module.dim
    dim = size ** n * k
    _guard(dim, dim)
    entries = _action_entries(rack, module, n, rack.translation(y), module.action(y))
    return ExactMatrix.from_entries(dim, dim, module.ring, entries)


def apply_group_action(rack, module, n, perm_images, mat, vec):
    """f -> f.g for a closure pair g = (permutation, matrix), vector form."""
    size, k = rack.size, module.dim
    out = [module.ring.coerce(0)] * len(vec)
    for idx, xs in enumerate(product(range(size), repeat=n)):
        tgt = 0
        for x in xs:
            tgt = tgt * size + perm_images[x]
        tgt *= k
        base = idx * k
        for l in range(k):
            s = 0
            for j in range(k):
                a = mat.data[j][l]
                if a:
                    v = vec[tgt + j]
                    if v:
                        s += a * v
            out[base + l] = module.ring.coerce(s)
    return out


def apply_rack_element(rack, module, n, y, vec):
    return apply_group_action(rack, module, n, rack.translation(y),
                              module.action(y), vec)


def slice_first(rack: RackTable, module: CoeffModule, n: int, y: int, vec):
    """f -> f_y with f_y(x_2..x_n) = f(y, x_2..x_n); degree drops by one."""
    if n < 1:
        raise InputError("slice_first needs degree >= 1")
    size, k = rack.size, module.dim
    tail = size ** (n - 1) * k
    base = y * tail
    return list(vec[base:base + tail])


@dataclass(frozen=True)
class FiniteActionGroup:
    """Closure of the pairs (translation of x, action matrix of x)."""

    elements: tuple  # of (perm_images, ExactMatrix)

    @property
    def order(self):
        return len(self.elements)


def finite_action_group(rack: RackTable, module: CoeffModule,
                        cap: int = DEFAULT_ACTION_GROUP_CAP) -> FiniteActionGroup:
    """Materialise the finite group through which the action factors.

    Raises ResourceError when the closure passes `cap`, which means the
    finiteness hypothesis (the kernel of the action has finite index) is
    violated or cannot be certified for this module.
    """
    size = rack.size
    gens = [(rack.translation(x), module.action(x)) for x in range(size)]
    ident = (tuple(range(size)), ExactMatrix.identity(module.dim, module.ring))

    def key(pair):
        return (pair[0], tuple(tuple(row) for row in pair[1].data))

    seen = {key(ident)}
    elements = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for cur_perm, cur_mat in frontier:
            for g_perm, g_mat in gens:
                perm = tuple(cur_perm[g_perm[i]] for i in range(size))
                mat = cur_mat @ g_mat
                pair = (perm, mat)
                pk = key(pair)
                if pk not in seen:
                    seen.add(pk)
                    elements.append(pair)
                    nxt.append(pair)
                    if len(elements) > cap:
                        raise ResourceError(
                            f"action group closure exceeded cap {cap}: the "
                            "finiteness hypothesis (finite-index action "
                            "kernel) is violated or unverifiable for this "
                            "module")
        frontier = nxt
    return FiniteActionGroup(tuple(elements))


def averaging_projector(rack: RackTable, module: CoeffModule, n: int,
                        group: FiniteActionGroup | None = None) -> ExactMatrix:
    """The idempotent (1/|G|) sum of the cochain action over the closure.

    Needs |G| invertible in the coefficient ring; its image is the
    invariant subcomplex and it commutes with the differential.
    """
    if group is None:
        group = finite_action_group(rack, module)
    order = group.order
    ring = module.ring
    if ring == ZZ and order != 1:
        raise PreconditionError(f"|G| = {order} is not invertible over Z")
    if isinstance(ring, PrimeField) and order % ring.p == 0:
        raise PreconditionError(
            f"|G| = {order} is not invertible in characteristic {ring.p}")
    size, k = rack.size, module.dim
    dim = size ** n * k
    _guard(dim, dim)
    entries: dict = {}
    for perm, mat in group.elements:
        _action_entries(rack, module, n, perm, mat, entries)
    if ring == QQ:
        scale = Fraction(1, order)
    elif ring == ZZ:
        scale = 1
    else:
        scale = ring.inv(order)
    out = ExactMatrix(dim, dim, ring)
    for (i, j), v in entries.items():
        out.data[i][j] = ring.coerce(v * scale)
    return out


def invariant_basis(rack: RackTable, module: CoeffModule, n: int,
                    group: FiniteActionGroup | None = None,
                    via: str = "auto") -> ExactMatrix:
    """Columns spanning the invariant cochains in degree n.

    via="auto": orbit indicators for trivial modules (the image of the
    averaging projector, computed combinatorially), the projector image
    when |G| is invertible, the simultaneous fixed space otherwise.
    """
    size, k = rack.size, module.dim
    dim = size ** n * k
    ring = module.ring

    if via == "auto" and module.is_trivial:
        count = size ** n
        parent = list(range(count))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        tuples = list(product(range(size), repeat=n))
        for y in range(size):
            tr = rack.translation(y)
            for idx, xs in enumerate(tuples):
                tgt = 0
                for x in xs:
                    tgt = tgt * size + tr[x]
                ra, rb = find(idx), find(tgt)
                if ra != rb:
                    parent[rb] = ra
        roots = {}
        for idx in range(count):
            r = find(idx)
            roots.setdefault(r, []).append(idx)
        cols = []
        one = ring.coerce(1)
        for r in sorted(roots):
            for j in range(k):
                col = [ring.coerce(0)] * dim
                for idx in roots[r]:
                    col[idx * k + j] = one
                cols.append(col)
        return ExactMatrix.from_columns(cols, dim, ring)

    if group is None:
        group = finite_action_group(rack, module)
    use_projector = via == "projector" or (
        via == "auto" and ring.is_field and
        (not isinstance(ring, PrimeField) or group.order % ring.p))
    if use_projector:
        proj = averaging_projector(rack, module, n, group)
        p = ring.p if isinstance(ring, PrimeField) else None
        rref = _IncrementalRREF(dim, p)
        for row in proj.data:
            rref.feed(row)
        return ExactMatrix.from_columns(
            [proj.column(c) for c in rref.pivot_cols], dim, ring)

    # simultaneous fixed space of the generator actions
    if not ring.is_field:
        raise PreconditionError("fixed-space computation needs a field ring")
    stacked_rows = []
    ident = ExactMatrix.identity(dim, ring)
    for y in range(size):
        act = group_action_on_cochains(rack, module, n, y)
        diff_rows = (act - ident).data
        stacked_rows.extend(diff_rows)
    stacked = ExactMatrix.from_rows(stacked_rows, ring) if stacked_rows else \
        ExactMatrix(0, dim, ring)
    return stacked.kernel_matrix()


# ---------------------------------------------------------------------------
# degree shift and products


@dataclass(frozen=True)
class ShiftIso:
    """Reindexing C^n(X, A) = C^(n-1)(X, Fun(X, A)) for trivial A.

    Under the flat basis convention the two coordinate systems agree, so
    the matrix is the identity; the content is that the function-module
    differential in degree n-1 equals the trivial-coefficient differential
    in degree n.
    """

    rack: RackTable
    degree: int
    fun_module: CoeffModule
    matrix: ExactMatrix


def degree_shift(rack: RackTable, n: int, module: CoeffModule) -> ShiftIso:
    if n < 1:
        raise InputError("degree shift needs degree >= 1")
    if not module.is_trivial:
        raise PreconditionError("degree shift requires a trivial coefficient action")
    fun = function_module(rack, module.ring, module.dim)
    dim = rack.size ** n * module.dim
    return ShiftIso(rack, n, fun, ExactMatrix.identity(dim, module.ring))


def is_invariant_cochain(rack, module, n, vec) -> bool:
    for y in range(rack.size):
        if apply_rack_element(rack, module, n, y, vec) != list(vec):
            return False
    return True


def cochain_product(rack: RackTable, module_a: CoeffModule, a: int, f,
                    module_n: CoeffModule, b: int, g,
                    require_invariant: bool = True):
    """Concatenation product (f (x) g)(x_1..x_(a+b)) = f(front) (x) g(back).

    f lives in degree a with trivial coefficients, g in degree b; for the
    Leibniz identity to hold g must be an invariant cochain, which is
    enforced unless require_invariant is False (used to exhibit the
    failure on non-invariant inputs).
    """
    if not module_a.is_trivial:
        raise PreconditionError("the left factor needs trivial coefficients")
    if module_a.ring != module_n.ring:
        raise InputError("both factors must share a coefficient ring")
    if require_invariant and not is_invariant_cochain(rack, module_n, b, g):
        raise PreconditionError(
            "the right factor must be an invariant cochain; the Leibniz "
            "identity fails otherwise")
    size = rack.size
    ka, kn = module_a.dim, module_n.dim
    tensor = tensor_with_trivial(module_n, ka)
    dim = size ** (a + b) * tensor.dim
    out = [tensor.ring.coerce(0)] * dim
    back_count = size ** b
    for fa in range(size ** a):
        for i in range(ka):
            fv = f[fa * ka + i]
            if not fv:
                continue
            for gb in range(back_count):
                for j in range(kn):
                    gv = g[gb * kn + j]
                    if gv:
                        flat = ((fa * back_count + gb) * tensor.dim) + i * kn + j
                        out[flat] = tensor.ring.coerce(fv * gv)
    return out, tensor


def orbit_indicator_cocycle(rack: RackTable, ring, orbit_index: int):
    """The degree-1 characteristic function of an orbit (always a cocycle)."""
    from .racks import orbits as rack_orbits
    part = rack_orbits(rack)
    if not 0 <= orbit_index < part.orbit_count:
        raise InputError(f"orbit index {orbit_index} out of range")
    return [ring.coerce(1 if part.orbit_of[x] == orbit_index else 0)
            for x in range(rack.size)]
