"""Coefficient modules: a ring, a dimension, and one matrix per rack element.

A module is a right action: v -> v @ A_x on coordinate row vectors, so the
matrices must satisfy A_x A_y = A_{x|>y} A_x, the matrix shadow of the
structure-group relation.  Builders validate this compatibility and the
invertibility of every matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .linalg import GF, QQ, ZZ, ExactMatrix, Ring
from .racks import RackTable

TAG_TRIVIAL = "trivial"
TAG_JORDAN = "jordan"
TAG_CUSTOM = "custom"
TAG_FUNCTIONS = "functions"


@dataclass(frozen=True)
class CoeffModule:
    ring: Ring
    dim: int
    matrices: tuple  # one invertible dim x dim ExactMatrix per rack element
    tag: str = TAG_CUSTOM
    params: tuple = ()

    def action(self, x: int) -> ExactMatrix:
        return self.matrices[x]

    def action_inverse(self, x: int) -> ExactMatrix:
        return self.matrices[x].inverse()

    @property
    def is_trivial(self) -> bool:
        ident = ExactMatrix.identity(self.dim, self.ring)
        return all(m == ident for m in self.matrices)

    def describe(self) -> dict:
        ring = {"Z": {"ring": "Z"}, "Q": {"ring": "Q"}}.get(
            self.ring.name, {"ring": "Fp", "p": getattr(self.ring, "p", None)})
        out = {"dim": self.dim, "action": {"type": self.tag}, **ring}
        if self.tag == TAG_JORDAN:
            out["action"]["t"] = str(self.params[0])
        return out


def check_module(rack: RackTable, module: CoeffModule):
    """Validate shapes, invertibility, and the structure-group relation."""
    n = rack.size
    if len(module.matrices) != n:
        raise InputError(f"module provides {len(module.matrices)} matrices "
                         f"for a rack of size {n}")
    for x, m in enumerate(module.matrices):
        if m.rows != module.dim or m.cols != module.dim or m.ring != module.ring:
            raise InputError(f"action matrix for element {x} has the wrong shape or ring")
        m.inverse()  # raises InputError when singular
    for x in range(n):
        ax = module.matrices[x]
        for y in range(n):
            lhs = ax @ module.matrices[y]
            rhs = module.matrices[rack.op(x, y)] @ ax
            if lhs != rhs:
                raise InputError(
                    f"action matrices violate A_x A_y = A_(x|>y) A_x at ({x},{y})")
    return module


def trivial_module(rack: RackTable, ring: Ring, dim: int = 1) -> CoeffModule:
    ident = ExactMatrix.identity(dim, ring)
    return CoeffModule(ring, dim, (ident,) * rack.size, TAG_TRIVIAL)


def jordan_module(rack: RackTable, t, k: int, ring: Ring = QQ) -> CoeffModule:
    """Every element acts by the same Jordan block with eigenvalue t.

    Basis convention: v_i -> t*v_i + v_{i-1} (with v_0 = 0), so for t = 1
    this is the unipotent shift-by-one action.
    """
    t = ring.coerce(Fraction(t) if not isinstance(t, (int, Fraction)) else t)
    if t == 0:
        raise InputError("jordan eigenvalue must be nonzero")
    if k < 1:
        raise InputError("jordan block size must be >= 1")
    block = ExactMatrix(k, k, ring)
    for i in range(k):
        block.data[i][i] = t
        if i > 0:
            block.data[i][i - 1] = ring.coerce(1)
    mod = CoeffModule(ring, k, (block,) * rack.size, TAG_JORDAN, (t, k))
    return check_module(rack, mod)


def constant_module(rack: RackTable, matrix: ExactMatrix) -> CoeffModule:
    """Every element acts by the same invertible matrix."""
    if matrix.rows != matrix.cols:
        raise InputError("constant action matrix must be square")
    mod = CoeffModule(matrix.ring, matrix.rows, (matrix,) * rack.size, TAG_CUSTOM)
    return check_module(rack, mod)


def function_module(rack: RackTable, ring: Ring, base_dim: int = 1) -> CoeffModule:
    """Functions X -> ring^base_dim with the action (h.y)(x) = h(y |> x).

    The matrices are block permutation matrices of the translations, so
    the compatibility relation is exactly self-distributivity.
    """
    n = rack.size
    dim = n * base_dim
    mats = []
    for y in range(n):
        m = ExactMatrix(dim, dim, ring)
        one = ring.coerce(1)
        for x in range(n):
            z = rack.op(y, x)  # row index z = phi_y(x), column index x
            for b in range(base_dim):
                m.data[z * base_dim + b][x * base_dim + b] = one
        mats.append(m)
    return CoeffModule(ring, dim, tuple(mats), TAG_FUNCTIONS, (base_dim,))


def custom_module(rack: RackTable, ring: Ring, matrices) -> CoeffModule:
    mats = tuple(m if isinstance(m, ExactMatrix) else
                 ExactMatrix.from_rows(m, ring) for m in matrices)
    dim = mats[0].rows if mats else 0
    return check_module(rack, CoeffModule(ring, dim, mats, TAG_CUSTOM))


def tensor_with_trivial(module: CoeffModule, trivial_dim: int) -> CoeffModule:
    """Tensor A (x) N for trivial A: the action is I_A (x) A_x^N."""
    k = module.dim
    dim = trivial_dim * k
    mats = []
    for m in module.matrices:
        big = ExactMatrix(dim, dim, module.ring)
        for a in range(trivial_dim):
            for i in range(k):
                for j in range(k):
                    big.data[a * k + i][a * k + j] = m.data[i][j]
        mats.append(big)
    return CoeffModule(module.ring, dim, tuple(mats), TAG_CUSTOM)


def ring_from_spec(doc: dict) -> Ring:
    name = doc.get("ring")
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name == "Fp":
        if "p" not in doc:
            raise InputError("ring Fp needs a field 'p'")
        return GF(doc["p"])
    raise InputError(f"unknown ring {name!r}")


def module_from_spec(rack: RackTable, doc: dict) -> CoeffModule:
    """Parse the module JSON: ring, dim, action type trivial|jordan|custom."""
    ring = ring_from_spec(doc)
    dim = doc.get("dim", 1)
    if not isinstance(dim, int) or dim < 0:
        raise InputError("module dim must be a non-negative integer")
    action = doc.get("action", {"type": "trivial"})
    kind = action.get("type", "trivial")
    if kind == "trivial":
        return trivial_module(rack, ring, dim)
    if kind == "jordan":
        t = action.get("t", 1)
        if isinstance(t, str):
            t = Fraction(t)
        return jordan_module(rack, t, dim, ring)
    if kind == "custom":
        matrices = action.get("matrices")
        if matrices is None:
            raise InputError("custom action needs 'matrices'")
        parsed = [[[Fraction(v) if isinstance(v, str) else v for v in row]
                   for row in mat] for mat in matrices]
        return custom_module(rack, ring, parsed)
    raise InputError(f"unknown action type {kind!r}")
