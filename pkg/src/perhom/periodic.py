"""n-periodic complexes and their interaction with bounded ones.

A period-n complex is stored as n terms and n cyclically composed
differentials ``d^i : X^i -> X^((i+1) mod n)``.  Folding a bounded complex
into residue classes mod n (`compress`) orders the summands of each term by
increasing original degree; unrolling a periodic complex onto a finite
window (`expand_window`) truncates the outgoing differential at the top of
the window, so statements about the unrolled complex are made on window
interiors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import (
    BoundedComplex,
    ChainMap,
    HomReport,
    Homotopy,
    Violation,
    chain_map,
    cone,
    hom_space_dims,
    shift,
    degree_shift,
    validate,
    zero_complex,
)
from .linalg import (
    BlockSystem,
    Field,
    FieldMismatch,
    Matrix,
    ShapeError,
    assemble_blocks,
    identity,
    permute_cols,
    permute_rows,
    rank,
    solve_linear,
    zeros,
)

__all__ = [
    "PeriodicChainMap",
    "PeriodicComplex",
    "PeriodicHomotopy",
    "compress",
    "compress_map",
    "compression_cone_square",
    "expand_window",
    "find_periodic_homotopy",
    "hom_report_for",
    "identity_periodic_map",
    "is_acyclic_periodic",
    "periodic_cohomology",
    "periodic_cone",
    "periodic_homotopy_defect",
    "periodic_hom_dims",
    "periodize_null_homotopy",
    "residue_degrees",
    "shift_periodic",
    "twist_iso",
    "unit_and_retraction",
    "unrolled_identity_contraction",
    "validate_periodic",
    "validate_periodic_map",
]


@dataclass(frozen=True)
class PeriodicComplex:
    """n terms with cyclically indexed differentials d^i : i -> (i+1) mod n."""

    field: Field
    n: int
    dims: tuple[int, ...]
    diffs: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("period must be at least 1")
        if len(self.dims) != self.n or len(self.diffs) != self.n:
            raise ShapeError("expected exactly n dimensions and n differentials")

    def dim(self, i: int) -> int:
        return self.dims[i % self.n]

    def diff(self, i: int) -> Matrix:
        return self.diffs[i % self.n]

    def total_dim(self) -> int:
        return sum(self.dims)


def validate_periodic(p: PeriodicComplex) -> Violation | None:
    for i in range(p.n):
        if p.diffs[i].shape != (p.dim(i + 1), p.dims[i]):
            return Violation("shape", i, f"differential has shape {p.diffs[i].shape}")
        if p.diffs[i].field != p.field:
            return Violation("field", i, "differential over the wrong field")
    for i in range(p.n):
        if not (p.diff(i + 1) @ p.diff(i)).is_zero():
            return Violation("square", i, "composite of consecutive differentials is nonzero")
    return None


def _require_valid(p: PeriodicComplex) -> None:
    v = validate_periodic(p)
    if v is not None:
        raise ValueError(f"invalid periodic complex: {v}")


@dataclass(frozen=True)
class PeriodicChainMap:
    """n components f^i compatible with the cyclic differentials."""

    source: PeriodicComplex
    target: PeriodicComplex
    components: tuple[Matrix, ...]

    def component(self, i: int) -> Matrix:
        return self.components[i % self.source.n]


def periodic_chain_map(source: PeriodicComplex, target: PeriodicComplex, components) -> PeriodicChainMap:
    if source.field != target.field:
        raise FieldMismatch("periodic map across fields")
    if source.n != target.n:
        raise ShapeError("periodic map across different periods")
    comps = tuple(components)
    if len(comps) != source.n:
        raise ShapeError("expected one component per residue")
    for i, m in enumerate(comps):
        if m.shape != (target.dims[i], source.dims[i]):
            raise ShapeError(f"component {i} has shape {m.shape}")
    return PeriodicChainMap(source, target, comps)


def identity_periodic_map(p: PeriodicComplex) -> PeriodicChainMap:
    return periodic_chain_map(p, p, tuple(identity(p.field, d) for d in p.dims))


def validate_periodic_map(f: PeriodicChainMap) -> Violation | None:
    x, y = f.source, f.target
    vx, vy = validate_periodic(x), validate_periodic(y)
    if vx is not None:
        return vx
    if vy is not None:
        return vy
    for i in range(x.n):
        if f.component(i + 1) @ x.diff(i) != y.diff(i) @ f.component(i):
            return Violation("chain-map", i, "f d != d f")
    return None


def _require_valid_map(f: PeriodicChainMap) -> None:
    v = validate_periodic_map(f)
    if v is not None:
        raise ValueError(f"invalid periodic chain map: {v}")


@dataclass(frozen=True)
class PeriodicHomotopy:
    """n components s^i : X^i -> Y^((i-1) mod n) relating f and g."""

    f: PeriodicChainMap
    g: PeriodicChainMap
    components: tuple[Matrix, ...]

    def component(self, i: int) -> Matrix:
        return self.components[i % self.f.source.n]


def periodic_homotopy_defect(h: PeriodicHomotopy) -> Violation | None:
    """First residue where f - g != s d + d s, if any."""
    x, y = h.f.source, h.f.target
    for i in range(x.n):
        want = h.f.component(i) - h.g.component(i)
        got = h.component(i + 1) @ x.diff(i) + y.diff(i - 1) @ h.component(i)
        if want != got:
            return Violation("homotopy", i, "f - g != s d + d s")
    return None


def residue_degrees(x: BoundedComplex, n: int, r: int) -> list[int]:
    """Window degrees of x congruent to r mod n, in increasing order."""
    return [j for j in x.degrees() if (j - r) % n == 0]


def compress(x: BoundedComplex, n: int) -> PeriodicComplex:
    """Fold a bounded complex into residue classes mod n.

    Term r is the direct sum of the X^j with j = r mod n, summands in
    increasing j; the differential has the blocks of d_X between adjacent
    degrees and zero elsewhere.
    """
    v = validate(x)
    if v is not None:
        raise ValueError(f"invalid complex: {v}")
    if n < 1:
        raise ValueError("period must be at least 1")
    field = x.field
    classes = [residue_degrees(x, n, r) for r in range(n)]
    dims = tuple(sum(x.dim(j) for j in classes[r]) for r in range(n))
    diffs = []
    for r in range(n):
        src = classes[r]
        dst = classes[(r + 1) % n]
        blocks = {}
        for sj, j in enumerate(src):
            if j + 1 in dst and x.dim(j) and x.dim(j + 1):
                blocks[(dst.index(j + 1), sj)] = x.diff(j)
        diffs.append(
            assemble_blocks(field, [x.dim(j) for j in dst], [x.dim(j) for j in src], blocks)
        )
    return PeriodicComplex(field, n, dims, tuple(diffs))


def compress_map(f: ChainMap, n: int) -> PeriodicChainMap:
    """Fold a chain map block-diagonally into residue classes."""
    from .complexes import validate_chain_map

    v = validate_chain_map(f)
    if v is not None:
        raise ValueError(f"invalid chain map: {v}")
    x, y = f.source, f.target
    px, py = compress(x, n), compress(y, n)
    comps = []
    for r in range(n):
        src = residue_degrees(x, n, r)
        dst = residue_degrees(y, n, r)
        blocks = {}
        for sj, j in enumerate(src):
            if j in dst and x.dim(j) and y.dim(j):
                blocks[(dst.index(j), sj)] = f.component(j)
        comps.append(
            assemble_blocks(f.source.field, [y.dim(j) for j in dst], [x.dim(j) for j in src], blocks)
        )
    return periodic_chain_map(px, py, comps)


def expand_window(p: PeriodicComplex, lo: int, hi: int) -> BoundedComplex:
    """Unroll a periodic complex onto the window [lo, hi].

    The outgoing differential at the top degree is truncated to zero; the
    restriction to [lo, hi-1] agrees with the unrolled complex.
    """
    if lo > hi:
        return zero_complex(p.field, lo)
    dims = tuple(p.dim(i) for i in range(lo, hi + 1))
    diffs = tuple(p.diff(i) for i in range(lo, hi))
    return BoundedComplex(p.field, lo, dims, diffs)


def unit_and_retraction(x: BoundedComplex, n: int, window: tuple[int, int]) -> tuple[ChainMap, ChainMap]:
    """The canonical summand inclusion into the unrolled compression and the
    projection back; their composite is the identity of x.

    The window must contain the support of x with at least one full period
    of slack on each side.
    """
    lo, hi = window
    if x.dims and not (lo <= x.lo - n and hi >= x.hi + n):
        raise ValueError("window must exceed the support by a full period on each side")
    e = expand_window(compress(x, n), lo, hi)
    eta = {}
    rho = {}
    field = x.field
    for i in x.degrees():
        if x.dim(i) == 0 or e.dim(i) == 0:
            continue
        degrees = residue_degrees(x, n, i % n)
        pos = degrees.index(i)
        sizes = [x.dim(j) for j in degrees]
        eta[i] = assemble_blocks(field, sizes, [x.dim(i)], {(pos, 0): identity(field, x.dim(i))})
        rho[i] = assemble_blocks(field, [x.dim(i)], sizes, {(0, pos): identity(field, x.dim(i))})
    return chain_map(x, e, eta), chain_map(e, x, rho)


def periodic_cone(f: PeriodicChainMap) -> PeriodicComplex:
    """Cyclic mapping cone: term i is X^(i+1) (+) Y^i with the usual blocks."""
    _require_valid_map(f)
    x, y = f.source, f.target
    n = x.n
    field = x.field
    dims = tuple(x.dim(i + 1) + y.dims[i] for i in range(n))
    diffs = []
    for i in range(n):
        row_sizes = (x.dim(i + 2), y.dim(i + 1))
        col_sizes = (x.dim(i + 1), y.dims[i])
        blocks = {
            (0, 0): -x.diff(i + 1),
            (1, 0): f.component(i + 1),
            (1, 1): y.diffs[i],
        }
        diffs.append(assemble_blocks(field, row_sizes, col_sizes, blocks))
    return PeriodicComplex(field, n, dims, tuple(diffs))


def periodic_cohomology(p: PeriodicComplex) -> tuple[int, ...]:
    """dim H^i = dims_i - rank d^i - rank d^(i-1), cyclically."""
    _require_valid(p)
    ranks = [rank(m) for m in p.diffs]
    return tuple(p.dims[i] - ranks[i] - ranks[(i - 1) % p.n] for i in range(p.n))


def is_acyclic_periodic(p: PeriodicComplex) -> bool:
    return all(h == 0 for h in periodic_cohomology(p))


def _cyclic_chain_map_system(x: PeriodicComplex, y: PeriodicComplex) -> BlockSystem:
    sys = BlockSystem(x.field)
    n = x.n
    for r in range(n):
        if x.dims[r] and y.dims[r]:
            sys.add_unknown(r, y.dims[r], x.dims[r])
    for r in range(n):
        if x.dims[r] and y.dim(r + 1):
            sys.add_equation(r, y.dim(r + 1), x.dims[r])
    for r in range(n):
        if not (x.dims[r] and y.dim(r + 1)):
            continue
        if x.dim(r + 1) and y.dim(r + 1):
            sys.add_term(r, (r + 1) % n, right=x.diff(r))
        if x.dims[r] and y.dims[r]:
            sys.add_term(r, r, left=y.diff(r), sign=-1)
    return sys


def _cyclic_homotopy_system(x: PeriodicComplex, y: PeriodicComplex) -> BlockSystem:
    sys = BlockSystem(x.field)
    n = x.n
    for r in range(n):
        if x.dims[r] and y.dim(r - 1):
            sys.add_unknown(r, y.dim(r - 1), x.dims[r])
    for r in range(n):
        if x.dims[r] and y.dims[r]:
            sys.add_equation(r, y.dims[r], x.dims[r])
    for r in range(n):
        if not (x.dims[r] and y.dims[r]):
            continue
        if x.dim(r + 1) and y.dims[r]:
            sys.add_term(r, (r + 1) % n, right=x.diff(r))
        if x.dims[r] and y.dim(r - 1):
            sys.add_term(r, r, left=y.diff(r - 1))
    return sys


def periodic_hom_dims(x: PeriodicComplex, y: PeriodicComplex) -> HomReport:
    """Z, B and Z - B for the cyclic chain-map and homotopy operators."""
    if x.field != y.field:
        raise FieldMismatch("hom across fields")
    if x.n != y.n:
        raise ShapeError("hom across different periods")
    _require_valid(x)
    _require_valid(y)
    tsys = _cyclic_chain_map_system(x, y)
    z = tsys.unknown_dim - rank(tsys.matrix())
    b = rank(_cyclic_homotopy_system(x, y).matrix())
    return HomReport(z, b, z - b)


def hom_report_for(x, y) -> HomReport:
    """Dispatch Hom dimensions over two bounded or two periodic complexes."""
    if isinstance(x, BoundedComplex) and isinstance(y, BoundedComplex):
        return hom_space_dims(x, y)
    if isinstance(x, PeriodicComplex) and isinstance(y, PeriodicComplex):
        return periodic_hom_dims(x, y)
    raise TypeError("expected two complex documents or two periodic documents")


def find_periodic_homotopy(f: PeriodicChainMap, g: PeriodicChainMap) -> PeriodicHomotopy | None:
    """A periodic homotopy from f to g, or None when none exists."""
    if f.source != g.source or f.target != g.target:
        raise ShapeError("homotopy endpoints must share source and target")
    _require_valid_map(f)
    _require_valid_map(g)
    x, y = f.source, f.target
    n = x.n
    sys = _cyclic_homotopy_system(x, y)
    for r in range(n):
        if x.dims[r] and y.dims[r]:
            sys.set_rhs(r, f.components[r] - g.components[r])
        elif not (f.components[r] - g.components[r]).is_zero():
            return None
    solution = solve_linear(sys.matrix(), sys.rhs_vector())
    if solution is None:
        return None
    parts = sys.split_solution(solution)
    comps = tuple(
        parts.get(r, zeros(x.field, y.dim(r - 1), x.dims[r])) for r in range(n)
    )
    h = PeriodicHomotopy(f, g, comps)
    if periodic_homotopy_defect(h) is not None:
        raise AssertionError("solver returned a non-homotopy")
    return h


def unrolled_identity_contraction(p: PeriodicComplex) -> Homotopy | None:
    """Degree -1 maps s^0..s^n on the window [-1, n] with
    ``id = s^(i+1) d^i + d^(i-1) s^i`` for 0 <= i <= n-1, if they exist.

    This is the windowed input consumed by `periodize_null_homotopy`; it is
    weaker than a contraction of the truncated unrolled complex, whose
    identity at the window edges is perturbed by the truncation.
    """
    _require_valid(p)
    n = p.n
    e = expand_window(p, -1, n)
    sys = BlockSystem(p.field)
    for i in range(0, n + 1):
        if p.dim(i) and p.dim(i - 1):
            sys.add_unknown(i, p.dim(i - 1), p.dim(i))
    for i in range(0, n):
        if p.dim(i):
            sys.add_equation(i, p.dim(i), p.dim(i))
            sys.set_rhs(i, identity(p.field, p.dim(i)))
            if p.dim(i + 1):
                sys.add_term(i, i + 1, right=p.diff(i))
            if p.dim(i - 1):
                sys.add_term(i, i, left=p.diff(i - 1))
    solution = solve_linear(sys.matrix(), sys.rhs_vector())
    if solution is None:
        return None
    parts = sys.split_solution(solution)
    from .complexes import identity_chain_map, zero_chain_map

    return Homotopy(
        identity_chain_map(e), zero_chain_map(e, e), tuple(sorted(parts.items()))
    )


def periodize_null_homotopy(p: PeriodicComplex, s: Homotopy) -> PeriodicHomotopy:
    """Fold a windowed contraction into a periodic one.

    Expects s^0..s^n on the window [-1, n] satisfying
    ``id = s^(i+1) d^i + d^(i-1) s^i`` for 0 <= i <= n-1 (checked).  The
    periodic components are s^n d^(-1) s^0 at residue 0 and s^j at residue
    j for 1 <= j <= n-1; the output is checked against the periodic
    homotopy identity before being returned.
    """
    _require_valid(p)
    n = p.n
    for i in range(0, n):
        if p.dim(i) == 0:
            continue
        got = s.component(i + 1) @ p.diff(i) + p.diff(i - 1) @ s.component(i)
        if got != identity(p.field, p.dim(i)):
            raise ValueError(f"input homotopy fails its defining identity at degree {i}")
    comps = [s.component(n) @ p.diff(-1) @ s.component(0)]
    for j in range(1, n):
        comps.append(s.component(j))
    ident = identity_periodic_map(p)
    zero = periodic_chain_map(p, p, tuple(zeros(p.field, d, d) for d in p.dims))
    out = PeriodicHomotopy(ident, zero, tuple(comps))
    defect = periodic_homotopy_defect(out)
    if defect is not None:
        raise AssertionError(f"periodized homotopy failed its invariant: {defect}")
    return out


def shift_periodic(p: PeriodicComplex, l: int) -> PeriodicComplex:
    """Rotate the indexing by l and twist the differentials by (-1)^l."""
    _require_valid(p)
    n = p.n
    dims = tuple(p.dim(i + l) for i in range(n))
    sign = 1 if l % 2 == 0 else -1
    diffs = tuple(p.diff(i + l) if sign == 1 else -p.diff(i + l) for i in range(n))
    return PeriodicComplex(p.field, n, dims, diffs)


def twist_iso(x: BoundedComplex, n: int) -> ChainMap:
    """The chain isomorphism from the signed shift by n to the plain index
    translation by n, acting on an original degree-i vector by (-1)^(n*i)."""
    v = validate(x)
    if v is not None:
        raise ValueError(f"invalid complex: {v}")
    src = shift(x, n)
    dst = degree_shift(x, n)
    comps = {}
    for i in src.degrees():
        d = src.dim(i)
        if d == 0:
            continue
        sign = 1 if (n * (i + n)) % 2 == 0 else -1
        m = identity(x.field, d)
        comps[i] = m if sign == 1 else -m
    return chain_map(src, dst, comps)


def _cone_reorder_permutation(f: ChainMap, n: int, r: int) -> list[int]:
    # Source order: compress(cone(f)) groups by cone degree l = r mod n,
    # inside each l the X^(l+1) part precedes the Y^l part.  Target order:
    # periodic_cone(compress_map(f)) lists all X summands (degree = r+1 mod
    # n, increasing) and then all Y summands (degree = r mod n, increasing).
    x, y = f.source, f.target
    c = cone(f).complex
    src_labels: list[tuple] = []
    for l in residue_degrees(c, n, r):
        src_labels.extend(("x", l + 1, t) for t in range(x.dim(l + 1)))
        src_labels.extend(("y", l, t) for t in range(y.dim(l)))
    dst_labels: list[tuple] = []
    xs = shift(x, 1)
    for j in residue_degrees(xs, n, r):
        dst_labels.extend(("x", j + 1, t) for t in range(x.dim(j + 1)))
    for j in residue_degrees(y, n, r):
        dst_labels.extend(("y", j, t) for t in range(y.dim(j)))
    pos = {label: k for k, label in enumerate(src_labels)}
    return [pos[label] for label in dst_labels]


def compression_cone_square(f: ChainMap, n: int) -> bool:
    """Exact matrix equality of compress(cone(f)) and the periodic cone of
    the compressed map, after the documented reordering of summands."""
    folded_cone = compress(cone(f).complex, n)
    cone_of_folded = periodic_cone(compress_map(f, n))
    perms = [_cone_reorder_permutation(f, n, r) for r in range(n)]
    for r in range(n):
        if len(perms[r]) != folded_cone.dims[r] or folded_cone.dims[r] != cone_of_folded.dims[r]:
            return False
    for r in range(n):
        # Conjugation by the relabeling: entry (i, j) in the reordered basis
        # is entry (perm[i], perm[j]) of the compressed cone differential.
        lhs = permute_cols(permute_rows(folded_cone.diffs[r], perms[(r + 1) % n]), perms[r])
        if lhs != cone_of_folded.diffs[r]:
            return False
    return True
