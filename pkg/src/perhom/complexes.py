"""Bounded cochain complexes over a field.

Cohomological conventions: upper indices, degree-raising differentials
``d^i : X^i -> X^(i+1)``.  A complex is stored on a closed window
``[lo, hi]``; every term outside the window is zero.  Binary operations
take the union window.  Direct sums order the X part before the Y part,
and tensor bases are ordered with the left factor major, so equality of
complexes is a meaningful assertion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    BlockSystem,
    Field,
    FieldMismatch,
    Matrix,
    ShapeError,
    assemble_blocks,
    identity,
    kron,
    rank,
    solve_linear,
    zeros,
)

__all__ = [
    "BoundedComplex",
    "ChainMap",
    "Cone",
    "HomReport",
    "Homotopy",
    "Violation",
    "chain_map",
    "cohomology_dims",
    "complex_from",
    "compose",
    "cone",
    "degree_shift",
    "euler_characteristic",
    "find_null_homotopy",
    "hom_space_dims",
    "homotopy_defect",
    "identity_chain_map",
    "is_acyclic",
    "shift",
    "single",
    "tensor_complex",
    "two_term",
    "validate",
    "validate_chain_map",
    "zero_chain_map",
    "zero_complex",
]


@dataclass(frozen=True)
class Violation:
    """A failed structural check; data, not an exception."""

    kind: str
    degree: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at degree {self.degree}: {self.detail}"


@dataclass(frozen=True)
class BoundedComplex:
    """Finite window of dimensions plus degree-raising differentials.

    ``dims[k]`` is the dimension in degree ``lo + k``; ``diffs[k]`` maps
    degree ``lo + k`` to ``lo + k + 1``.  ``dims`` may be empty (the zero
    complex).
    """

    field: Field
    lo: int
    dims: tuple[int, ...]
    diffs: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if len(self.diffs) != max(0, len(self.dims) - 1):
            raise ShapeError("expected one differential per adjacent pair of degrees")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return self.dims[i - self.lo]
        return 0

    def diff(self, i: int) -> Matrix:
        """The differential out of degree i (zero outside the window)."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return zeros(self.field, self.dim(i + 1), self.dim(i))

    def is_zero_object(self) -> bool:
        return all(d == 0 for d in self.dims)

    def total_dim(self) -> int:
        return sum(self.dims)


def complex_from(field: Field, lo: int, dims, diffs) -> BoundedComplex:
    """Build a complex, coercing the differentials to matrices over `field`."""
    dims = tuple(int(d) for d in dims)
    fixed = []
    for k, m in enumerate(diffs):
        if not isinstance(m, Matrix):
            raise TypeError("differentials must be Matrix values")
        if m.field != field:
            raise FieldMismatch("differential over the wrong field")
        if m.shape != (dims[k + 1], dims[k]):
            raise ShapeError(
                f"differential at degree {lo + k} has shape {m.shape}, expected "
                f"({dims[k + 1]}, {dims[k]})"
            )
        fixed.append(m)
    return BoundedComplex(field, lo, dims, tuple(fixed))


def zero_complex(field: Field, lo: int = 0) -> BoundedComplex:
    return BoundedComplex(field, lo, (), ())


def single(field: Field, degree: int = 0, dim: int = 1) -> BoundedComplex:
    """The complex with one term of the given dimension."""
    return BoundedComplex(field, degree, (dim,), ())


def two_term(field: Field, degree: int, matrix: Matrix) -> BoundedComplex:
    """The complex ``matrix : X^degree -> X^(degree+1)``."""
    return BoundedComplex(field, degree, (matrix.cols, matrix.rows), (matrix,))


def validate(c: BoundedComplex) -> Violation | None:
    """Check shapes and d after d = 0; returns the first offending degree."""
    for k, m in enumerate(c.diffs):
        if m.shape != (c.dims[k + 1], c.dims[k]):
            return Violation("shape", c.lo + k, f"differential has shape {m.shape}")
        if m.field != c.field:
            return Violation("field", c.lo + k, "differential over the wrong field")
    for i in range(c.lo, c.hi - 1):
        if not (c.diff(i + 1) @ c.diff(i)).is_zero():
            return Violation("square", i, "composite of consecutive differentials is nonzero")
    return None


def _require_valid(c: BoundedComplex) -> None:
    v = validate(c)
    if v is not None:
        raise ValueError(f"invalid complex: {v}")


def shift(c: BoundedComplex, l: int) -> BoundedComplex:
    """Suspension: term i becomes the old term i+l, differentials pick up (-1)^l."""
    if not c.dims:
        return BoundedComplex(c.field, c.lo - l, (), ())
    sign = 1 if l % 2 == 0 else -1
    diffs = c.diffs if sign == 1 else tuple(-m for m in c.diffs)
    return BoundedComplex(c.field, c.lo - l, c.dims, diffs)


def degree_shift(c: BoundedComplex, l: int) -> BoundedComplex:
    """Index translation without signs: term i becomes the old term i+l."""
    return BoundedComplex(c.field, c.lo - l, c.dims, c.diffs)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise components of a map of complexes.

    Components are stored for exactly the degrees where source and target
    are both nonzero; `component` pads with zero matrices elsewhere.
    """

    source: BoundedComplex
    target: BoundedComplex
    components: tuple[tuple[int, Matrix], ...]

    def component(self, i: int) -> Matrix:
        for d, m in self.components:
            if d == i:
                return m
        return zeros(self.source.field, self.target.dim(i), self.source.dim(i))


def chain_map(source: BoundedComplex, target: BoundedComplex, components: dict[int, Matrix]) -> ChainMap:
    """Normalize a components dict into a ChainMap (shapes checked strictly)."""
    if source.field != target.field:
        raise FieldMismatch("chain map across fields")
    out = []
    for i in sorted(set(source.degrees()) & set(target.degrees())):
        if source.dim(i) == 0 or target.dim(i) == 0:
            continue
        m = components.get(i)
        if m is None:
            m = zeros(source.field, target.dim(i), source.dim(i))
        if m.shape != (target.dim(i), source.dim(i)):
            raise ShapeError(f"component at degree {i} has shape {m.shape}")
        out.append((i, m))
    for i, m in components.items():
        if (source.dim(i) == 0 or target.dim(i) == 0) and not m.is_zero():
            raise ShapeError(f"nonzero component at degree {i} outside both supports")
    return ChainMap(source, target, tuple(out))


def identity_chain_map(c: BoundedComplex) -> ChainMap:
    return chain_map(c, c, {i: identity(c.field, c.dim(i)) for i in c.degrees() if c.dim(i)})


def zero_chain_map(source: BoundedComplex, target: BoundedComplex) -> ChainMap:
    return chain_map(source, target, {})


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g after f, degreewise G @ F."""
    if f.target != g.source:
        raise ShapeError("middle complexes do not match")
    comps = {}
    for i, _ in f.components:
        comps[i] = g.component(i) @ f.component(i)
    return chain_map(f.source, g.target, comps)


def validate_chain_map(f: ChainMap) -> Violation | None:
    x, y = f.source, f.target
    vx, vy = validate(x), validate(y)
    if vx is not None:
        return vx
    if vy is not None:
        return vy
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    for i in range(lo, hi):
        lhs = f.component(i + 1) @ x.diff(i)
        rhs = y.diff(i) @ f.component(i)
        if lhs != rhs:
            return Violation("chain-map", i, "f d != d f")
    return None


def _require_chain_map(f: ChainMap) -> None:
    v = validate_chain_map(f)
    if v is not None:
        raise ValueError(f"invalid chain map: {v}")


@dataclass(frozen=True)
class Cone:
    """Mapping cone with its canonical inclusion and projection.

    The projection family sends the cone in degree i onto X^(i+1); it is a
    chain map into shift(X, 1).
    """

    complex: BoundedComplex
    inclusion: ChainMap
    projection: tuple[tuple[int, Matrix], ...]


def _union_window(*complexes: BoundedComplex) -> tuple[int, int] | None:
    windows = [(c.lo, c.hi) for c in complexes if c.dims]
    if not windows:
        return None
    return min(w[0] for w in windows), max(w[1] for w in windows)


def cone(f: ChainMap) -> Cone:
    """C(f)^i = X^(i+1) (+) Y^i with differential ((-dX, 0), (f, dY))."""
    _require_chain_map(f)
    x, y = f.source, f.target
    field = x.field
    xs = shift(x, 1)
    w = _union_window(xs, y)
    if w is None:
        c = zero_complex(field)
        return Cone(c, zero_chain_map(y, c), ())
    lo, hi = w
    dims = tuple(x.dim(i + 1) + y.dim(i) for i in range(lo, hi + 1))
    diffs = []
    for i in range(lo, hi):
        row_sizes = (x.dim(i + 2), y.dim(i + 1))
        col_sizes = (x.dim(i + 1), y.dim(i))
        blocks = {
            (0, 0): -x.diff(i + 1),
            (1, 0): f.component(i + 1),
            (1, 1): y.diff(i),
        }
        diffs.append(assemble_blocks(field, row_sizes, col_sizes, blocks))
    c = BoundedComplex(field, lo, dims, tuple(diffs))
    incl = {}
    for i in y.degrees():
        if y.dim(i) == 0:
            continue
        blocks = {(1, 0): identity(field, y.dim(i))}
        incl[i] = assemble_blocks(field, (x.dim(i + 1), y.dim(i)), (y.dim(i),), blocks)
    inclusion = chain_map(y, c, incl)
    projection = []
    for i in range(lo, hi + 1):
        if x.dim(i + 1) == 0 or c.dim(i) == 0:
            continue
        blocks = {(0, 0): identity(field, x.dim(i + 1))}
        projection.append((i, assemble_blocks(field, (x.dim(i + 1),), (x.dim(i + 1), y.dim(i)), blocks)))
    return Cone(c, inclusion, tuple(projection))


def cohomology_dims(c: BoundedComplex) -> tuple[tuple[int, int], ...]:
    """dim H^i = dim X^i - rank d^i - rank d^(i-1) for every window degree."""
    _require_valid(c)
    out = []
    ranks = {i: rank(c.diff(i)) for i in range(c.lo - 1, c.hi + 1)}
    for i in c.degrees():
        out.append((i, c.dim(i) - ranks[i] - ranks[i - 1]))
    return tuple(out)


def is_acyclic(c: BoundedComplex) -> bool:
    return all(h == 0 for _, h in cohomology_dims(c))


def euler_characteristic(c: BoundedComplex) -> int:
    return sum((-1) ** (i % 2) * c.dim(i) for i in c.degrees())


@dataclass(frozen=True)
class HomReport:
    """Dimensions of the chain-map space, its null-homotopic subspace, and
    the quotient (the Hom space in the homotopy category)."""

    chain_maps: int
    null_homotopic: int
    homotopy_classes: int


def _chain_map_system(x: BoundedComplex, y: BoundedComplex) -> BlockSystem:
    sys = BlockSystem(x.field)
    lo = min(x.lo, y.lo) if x.dims and y.dims else 0
    hi = max(x.hi, y.hi) if x.dims and y.dims else -1
    for i in range(lo, hi + 1):
        if x.dim(i) and y.dim(i):
            sys.add_unknown(i, y.dim(i), x.dim(i))
    for i in range(lo, hi + 1):
        if x.dim(i) and y.dim(i + 1):
            sys.add_equation(i, y.dim(i + 1), x.dim(i))
    for i in range(lo, hi + 1):
        if not (x.dim(i) and y.dim(i + 1)):
            continue
        if x.dim(i + 1) and y.dim(i + 1):
            sys.add_term(i, i + 1, right=x.diff(i))
        if x.dim(i) and y.dim(i):
            sys.add_term(i, i, left=y.diff(i), sign=-1)
    return sys


def _homotopy_system(x: BoundedComplex, y: BoundedComplex) -> BlockSystem:
    # Unknowns are degree -1 maps s^i : X^i -> Y^(i-1); the operator lands in
    # degree 0 maps via s -> d s + s d.
    sys = BlockSystem(x.field)
    lo = min(x.lo, y.lo) if x.dims and y.dims else 0
    hi = max(x.hi, y.hi) if x.dims and y.dims else -1
    for i in range(lo, hi + 2):
        if x.dim(i) and y.dim(i - 1):
            sys.add_unknown(i, y.dim(i - 1), x.dim(i))
    for i in range(lo, hi + 1):
        if x.dim(i) and y.dim(i):
            sys.add_equation(i, y.dim(i), x.dim(i))
    for i in range(lo, hi + 1):
        if not (x.dim(i) and y.dim(i)):
            continue
        if x.dim(i + 1) and y.dim(i):
            sys.add_term(i, i + 1, right=x.diff(i))
        if x.dim(i) and y.dim(i - 1):
            sys.add_term(i, i, left=y.diff(i - 1))
    return sys


def hom_space_dims(x: BoundedComplex, y: BoundedComplex) -> HomReport:
    """Z, B and Z - B for the homotopy category Hom space.

    Z is the kernel dimension of f -> d f - f d on degree 0 graded maps,
    B the rank of s -> d s + s d from degree -1 maps; the image of the
    latter consists of chain maps, so B <= Z.
    """
    if x.field != y.field:
        raise FieldMismatch("hom across fields")
    _require_valid(x)
    _require_valid(y)
    tsys = _chain_map_system(x, y)
    z = tsys.unknown_dim - rank(tsys.matrix())
    b = rank(_homotopy_system(x, y).matrix())
    return HomReport(z, b, z - b)


@dataclass(frozen=True)
class Homotopy:
    """Degree -1 components s^i : X^i -> Y^(i-1) relating f and g.

    Plain data; `homotopy_defect` checks the identity
    f - g = s d + d s degree by degree.
    """

    f: ChainMap
    g: ChainMap
    components: tuple[tuple[int, Matrix], ...]

    def component(self, i: int) -> Matrix:
        for d, m in self.components:
            if d == i:
                return m
        x, y = self.f.source, self.f.target
        return zeros(x.field, y.dim(i - 1), x.dim(i))


def homotopy_defect(h: Homotopy) -> Violation | None:
    """First degree where f - g != s d + d s, if any."""
    x, y = h.f.source, h.f.target
    w = _union_window(x, y)
    if w is None:
        return None
    lo, hi = w
    for i in range(lo, hi + 1):
        want = h.f.component(i) - h.g.component(i)
        got = h.component(i + 1) @ x.diff(i) + y.diff(i - 1) @ h.component(i)
        if want != got:
            return Violation("homotopy", i, "f - g != s d + d s")
    return None


def find_null_homotopy(f: ChainMap) -> Homotopy | None:
    """A homotopy from f to zero, when the linear system is solvable."""
    _require_chain_map(f)
    x, y = f.source, f.target
    sys = _homotopy_system(x, y)
    for i, m in f.components:
        if x.dim(i) and y.dim(i):
            sys.set_rhs(i, m)
        elif not m.is_zero():
            return None
    solution = solve_linear(sys.matrix(), sys.rhs_vector())
    if solution is None:
        return None
    parts = sys.split_solution(solution)
    h = Homotopy(f, zero_chain_map(x, y), tuple(sorted(parts.items())))
    if homotopy_defect(h) is not None:
        raise AssertionError("solver returned a non-homotopy")
    return h


def tensor_complex(x: BoundedComplex, y: BoundedComplex) -> BoundedComplex:
    """Tensor product over the base field with the Koszul sign.

    Degree l is the sum of X^i (x) Y^(l-i) over increasing i, bases ordered
    with the X factor major.  The differential is dx (x) 1 + (-1)^i 1 (x) dy.
    """
    if x.field != y.field:
        raise FieldMismatch("tensor across fields")
    _require_valid(x)
    _require_valid(y)
    field = x.field
    if not x.dims or not y.dims:
        return zero_complex(field)
    lo = x.lo + y.lo
    hi = x.hi + y.hi
    summands = {l: [i for i in x.degrees() if y.lo <= l - i <= y.hi] for l in range(lo, hi + 1)}
    dims = tuple(sum(x.dim(i) * y.dim(l - i) for i in summands[l]) for l in range(lo, hi + 1))
    diffs = []
    for l in range(lo, hi):
        src = summands[l]
        dst = summands[l + 1]
        row_sizes = [x.dim(i) * y.dim(l + 1 - i) for i in dst]
        col_sizes = [x.dim(i) * y.dim(l - i) for i in src]
        blocks: dict[tuple[int, int], Matrix] = {}
        for sj, i in enumerate(src):
            j = l - i
            if x.dim(i) * y.dim(j) == 0:
                continue
            if i + 1 in dst and x.dim(i + 1) * y.dim(j):
                blocks[(dst.index(i + 1), sj)] = kron(x.diff(i), identity(field, y.dim(j)))
            if i in dst and x.dim(i) * y.dim(j + 1):
                m = kron(identity(field, x.dim(i)), y.diff(j))
                blocks[(dst.index(i), sj)] = m if i % 2 == 0 else -m
        diffs.append(assemble_blocks(field, row_sizes, col_sizes, blocks))
    return BoundedComplex(field, lo, dims, tuple(diffs))
