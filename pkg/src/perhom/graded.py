"""Graded modules over a polynomial or exterior algebra, projective flags,
and the periodic tensor functor.

A module is a finite window of graded pieces together with one matrix per
generator and adjacent degree pair.  Polynomial generators raise the
internal degree by one and must commute; exterior generators lower it by
one, anticommute, and square to zero.  Relations are only checked where
both composites stay inside the window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import BoundedComplex, Violation, tensor_complex, validate
from .linalg import (
    Field,
    FieldMismatch,
    Matrix,
    ShapeError,
    assemble_blocks,
    identity,
    kron,
    permute_cols,
    permute_rows,
    zeros,
)
from .periodic import PeriodicComplex, compress, residue_degrees, validate_periodic

__all__ = [
    "Algebra",
    "FlagData",
    "FlagError",
    "FlagStage",
    "GradedModule",
    "ModuleComplex",
    "PeriodicModuleComplex",
    "compress_modules",
    "direct_sum_modules",
    "exterior_algebra",
    "flag_assemble",
    "flag_filtration",
    "free_module",
    "polynomial_algebra",
    "tensor_compression_square",
    "tensor_periodic",
    "validate_module",
    "validate_module_complex",
    "validate_periodic_module_complex",
]


@dataclass(frozen=True)
class Algebra:
    """Ambient graded algebra: 'poly' generators of degree +1 or 'ext'
    generators of degree -1."""

    kind: str
    generators: int

    def __post_init__(self) -> None:
        if self.kind not in ("poly", "ext"):
            raise ValueError(f"unknown algebra kind {self.kind!r}")
        if self.generators < 1:
            raise ValueError("at least one generator required")

    @property
    def step(self) -> int:
        return 1 if self.kind == "poly" else -1


def polynomial_algebra(c: int) -> Algebra:
    return Algebra("poly", c)


def exterior_algebra(c: int) -> Algebra:
    return Algebra("ext", c)


@dataclass(frozen=True)
class GradedModule:
    """Finite degree window of graded pieces with generator actions.

    ``actions[j][k]`` bridges the adjacent degrees ``lo+k`` and ``lo+k+1``:
    for a polynomial algebra it maps degree lo+k up to lo+k+1, for an
    exterior algebra it maps degree lo+k+1 down to lo+k.
    """

    field: Field
    algebra: Algebra
    lo: int
    dims: tuple[int, ...]
    actions: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self) -> None:
        if len(self.actions) != self.algebra.generators:
            raise ShapeError("expected one action family per generator")
        want = max(0, len(self.dims) - 1)
        for family in self.actions:
            if len(family) != want:
                raise ShapeError("expected one action matrix per adjacent degree pair")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        if self.lo <= i <= self.hi:
            return self.dims[i - self.lo]
        return 0

    def action(self, j: int, i: int) -> Matrix:
        """Action of generator j on the piece of degree i (padded with zero
        maps outside the window)."""
        if self.algebra.kind == "poly":
            if self.lo <= i < self.hi:
                return self.actions[j][i - self.lo]
            return zeros(self.field, self.dim(i + 1), self.dim(i))
        if self.lo < i <= self.hi:
            return self.actions[j][i - self.lo - 1]
        return zeros(self.field, self.dim(i - 1), self.dim(i))


def validate_module(m: GradedModule) -> Violation | None:
    """Shape checks plus the commutation laws of the ambient algebra.

    Violations name the generator pair and the source degree.
    """
    step = m.algebra.step
    for j, family in enumerate(m.actions):
        for k, mx in enumerate(family):
            src = m.lo + k if step == 1 else m.lo + k + 1
            want = (m.dim(src + step), m.dim(src))
            if mx.shape != want:
                return Violation("shape", src, f"action {j} has shape {mx.shape}, expected {want}")
            if mx.field != m.field:
                return Violation("field", src, f"action {j} over the wrong field")
    c = m.algebra.generators
    for i in m.degrees():
        if not (m.lo <= i + 2 * step <= m.hi):
            continue
        if m.algebra.kind == "poly":
            for j in range(c):
                for l in range(j + 1, c):
                    if m.action(j, i + 1) @ m.action(l, i) != m.action(l, i + 1) @ m.action(j, i):
                        return Violation("commute", i, f"generators ({j}, {l}) do not commute")
        else:
            for j in range(c):
                if not (m.action(j, i - 1) @ m.action(j, i)).is_zero():
                    return Violation("square", i, f"generator {j} does not square to zero")
                for l in range(j + 1, c):
                    lhs = m.action(j, i - 1) @ m.action(l, i)
                    rhs = m.action(l, i - 1) @ m.action(j, i)
                    if lhs != -rhs:
                        return Violation("anticommute", i, f"generators ({j}, {l}) do not anticommute")
    return None


def _require_valid_module(m: GradedModule) -> None:
    v = validate_module(m)
    if v is not None:
        raise ValueError(f"invalid graded module: {v}")


def free_module(field: Field, algebra: Algebra, generator_degree: int, window: tuple[int, int]) -> GradedModule:
    """The free rank-one module on a generator, truncated to the window.

    Pieces carry the monomial basis in lexicographic exponent order.
    """
    lo, hi = window
    c = algebra.generators
    if algebra.kind != "poly":
        raise ValueError("free exterior modules are not needed here")

    def monomials(total: int) -> list[tuple[int, ...]]:
        if total < 0:
            return []
        out = []

        def rec(prefix, remaining, slots):
            if slots == 1:
                out.append(prefix + (remaining,))
                return
            for e in range(remaining + 1):
                rec(prefix + (e,), remaining - e, slots - 1)

        rec((), total, c)
        return sorted(out)

    basis = {i: monomials(i - generator_degree) for i in range(lo, hi + 1)}
    dims = tuple(len(basis[i]) for i in range(lo, hi + 1))
    actions = []
    for j in range(c):
        family = []
        for i in range(lo, hi):
            src = basis[i]
            dst = {mono: t for t, mono in enumerate(basis[i + 1])}
            mx = [[field.zero] * len(src) for _ in range(len(dst))]
            for s, mono in enumerate(src):
                bumped = tuple(e + (1 if t == j else 0) for t, e in enumerate(mono))
                mx[dst[bumped]][s] = field.one
            family.append(Matrix(field, len(dst), len(src), tuple(tuple(r) for r in mx)))
        actions.append(tuple(family))
    return GradedModule(field, algebra, lo, dims, tuple(actions))


def direct_sum_modules(mods: list[GradedModule]) -> GradedModule:
    """Degreewise direct sum; all summands must share window and algebra."""
    if not mods:
        raise ValueError("nothing to sum")
    first = mods[0]
    for m in mods:
        if (m.field, m.algebra, m.lo, len(m.dims)) != (first.field, first.algebra, first.lo, len(first.dims)):
            raise ShapeError("direct sum needs matching windows and algebras")
    dims = tuple(sum(m.dims[k] for m in mods) for k in range(len(first.dims)))
    actions = []
    for j in range(first.algebra.generators):
        family = []
        for k in range(max(0, len(dims) - 1)):
            if first.algebra.kind == "poly":
                rows = [m.dims[k + 1] for m in mods]
                cols = [m.dims[k] for m in mods]
            else:
                rows = [m.dims[k] for m in mods]
                cols = [m.dims[k + 1] for m in mods]
            blocks = {(t, t): m.actions[j][k] for t, m in enumerate(mods)}
            family.append(assemble_blocks(first.field, rows, cols, blocks))
        actions.append(tuple(family))
    return GradedModule(first.field, first.algebra, first.lo, dims, tuple(actions))


@dataclass(frozen=True)
class ModuleComplex:
    """Bounded complex of graded modules with degree-preserving maps.

    All terms share one internal window; ``maps[k]`` has one matrix per
    internal degree and sends term ``jlo+k`` to term ``jlo+k+1``.
    """

    jlo: int
    modules: tuple[GradedModule, ...]
    maps: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self) -> None:
        if len(self.maps) != max(0, len(self.modules) - 1):
            raise ShapeError("expected one map per adjacent pair of terms")

    @property
    def jhi(self) -> int:
        return self.jlo + len(self.modules) - 1

    def homological_degrees(self) -> range:
        return range(self.jlo, self.jhi + 1)

    def module(self, j: int) -> GradedModule:
        return self.modules[j - self.jlo]

    def map_at(self, j: int, i: int) -> Matrix:
        """Component of the map out of term j in internal degree i."""
        m = self.module(j)
        if self.jlo <= j < self.jhi and m.lo <= i <= m.hi:
            return self.maps[j - self.jlo][i - m.lo]
        tgt_dim = self.module(j + 1).dim(i) if self.jlo <= j + 1 <= self.jhi else 0
        return zeros(m.field, tgt_dim, m.dim(i))


def validate_module_complex(mc: ModuleComplex) -> Violation | None:
    if not mc.modules:
        return None
    first = mc.modules[0]
    for m in mc.modules:
        if (m.field, m.algebra, m.lo, len(m.dims)) != (first.field, first.algebra, first.lo, len(first.dims)):
            return Violation("window", m.lo, "terms must share window and algebra")
        v = validate_module(m)
        if v is not None:
            return v
    for j in mc.homological_degrees():
        if j >= mc.jhi:
            continue
        src, dst = mc.module(j), mc.module(j + 1)
        for i in src.degrees():
            if mc.map_at(j, i).shape != (dst.dim(i), src.dim(i)):
                return Violation("shape", i, f"map out of term {j} has the wrong shape")
        for g in range(first.algebra.generators):
            for i in src.degrees():
                step = first.algebra.step
                if not (src.lo <= i + step <= src.hi):
                    continue
                lhs = mc.map_at(j, i + step) @ src.action(g, i)
                rhs = dst.action(g, i) @ mc.map_at(j, i)
                if lhs != rhs:
                    return Violation("linearity", i, f"map out of term {j} is not equivariant for generator {g}")
        if j + 2 <= mc.jhi:
            for i in src.degrees():
                if not (mc.map_at(j + 1, i) @ mc.map_at(j, i)).is_zero():
                    return Violation("square", i, f"composite of maps {j}, {j + 1} is nonzero")
    return None


@dataclass(frozen=True)
class PeriodicModuleComplex:
    """n-periodic complex of graded modules; maps wrap cyclically."""

    n: int
    modules: tuple[GradedModule, ...]
    maps: tuple[tuple[Matrix, ...], ...]

    def __post_init__(self) -> None:
        if len(self.modules) != self.n or len(self.maps) != self.n:
            raise ShapeError("expected n modules and n maps")

    def module(self, j: int) -> GradedModule:
        return self.modules[j % self.n]

    def map_at(self, j: int, i: int) -> Matrix:
        m = self.module(j)
        if m.lo <= i <= m.hi:
            return self.maps[j % self.n][i - m.lo]
        return zeros(m.field, self.module(j + 1).dim(i), m.dim(i))


def validate_periodic_module_complex(pm: PeriodicModuleComplex) -> Violation | None:
    first = pm.modules[0]
    for m in pm.modules:
        if (m.field, m.algebra, m.lo, len(m.dims)) != (first.field, first.algebra, first.lo, len(first.dims)):
            return Violation("window", m.lo, "terms must share window and algebra")
        v = validate_module(m)
        if v is not None:
            return v
    for j in range(pm.n):
        src, dst = pm.module(j), pm.module(j + 1)
        for i in src.degrees():
            if pm.map_at(j, i).shape != (dst.dim(i), src.dim(i)):
                return Violation("shape", i, f"map out of term {j} has the wrong shape")
            step = first.algebra.step
            for g in range(first.algebra.generators):
                if not (src.lo <= i + step <= src.hi):
                    continue
                if pm.map_at(j, i + step) @ src.action(g, i) != dst.action(g, i) @ pm.map_at(j, i):
                    return Violation("linearity", i, f"map out of term {j} is not equivariant for generator {g}")
            if not (pm.map_at(j + 1, i) @ pm.map_at(j, i)).is_zero():
                return Violation("square", i, f"composite of maps {j}, {j + 1} is nonzero")
    return None


def compress_modules(mc: ModuleComplex, n: int) -> PeriodicModuleComplex:
    """Fold a bounded complex of modules into residue classes mod n.

    Term r is the direct sum of the terms with homological degree r mod n,
    in increasing degree, with the block maps of the original complex.
    """
    v = validate_module_complex(mc)
    if v is not None:
        raise ValueError(f"invalid module complex: {v}")
    if not mc.modules:
        raise ValueError("cannot fold an empty module complex")
    first = mc.modules[0]
    field = first.field
    window_len = len(first.dims)
    classes = [[j for j in mc.homological_degrees() if (j - r) % n == 0] for r in range(n)]
    terms = []
    for r in range(n):
        mods = [mc.module(j) for j in classes[r]]
        if mods:
            terms.append(direct_sum_modules(mods))
        else:
            empty_actions = tuple(
                tuple(zeros(field, 0, 0) for _ in range(max(0, window_len - 1)))
                for _ in range(first.algebra.generators)
            )
            terms.append(GradedModule(field, first.algebra, first.lo, (0,) * window_len, empty_actions))
    maps = []
    for r in range(n):
        src = classes[r]
        dst = classes[(r + 1) % n]
        family = []
        for k in range(window_len):
            i = first.lo + k
            rows = [mc.module(j).dim(i) for j in dst]
            cols = [mc.module(j).dim(i) for j in src]
            blocks = {}
            for sj, j in enumerate(src):
                if j + 1 in dst:
                    blocks[(dst.index(j + 1), sj)] = mc.map_at(j, i)
            family.append(assemble_blocks(field, rows, cols, blocks))
        maps.append(tuple(family))
    return PeriodicModuleComplex(n, tuple(terms), tuple(maps))


@dataclass(frozen=True)
class FlagData:
    """Summand dimensions plus strictly upper-triangular blocks.

    ``blocks`` holds triples (src, dst, matrix) with dst < src; the block
    maps part src into part dst.  Square-zero of the assembled differential
    is a hypothesis, checked by `flag_assemble`.
    """

    field: Field
    parts: tuple[int, ...]
    blocks: tuple[tuple[int, int, Matrix], ...]

    def __post_init__(self) -> None:
        for src, dst, m in self.blocks:
            if not 0 <= dst < src < len(self.parts):
                raise ShapeError(f"block ({src}, {dst}) is not strictly upper triangular")
            if m.shape != (self.parts[dst], self.parts[src]):
                raise ShapeError(f"block ({src}, {dst}) has shape {m.shape}")

    def block(self, src: int, dst: int) -> Matrix:
        for s, d, m in self.blocks:
            if (s, d) == (src, dst):
                return m
        return zeros(self.field, self.parts[dst], self.parts[src])


class FlagError(ValueError):
    """The assembled flag differential is not square-zero."""


def flag_assemble(f: FlagData) -> PeriodicComplex:
    """Assemble the block differential and return it as a period-1 complex.

    Raises FlagError when the square of the assembled matrix is nonzero;
    upper-triangular shape alone does not force it.
    """
    sizes = list(f.parts)
    blocks = {(dst, src): m for src, dst, m in f.blocks}
    delta = assemble_blocks(f.field, sizes, sizes, blocks)
    if not (delta @ delta).is_zero():
        raise FlagError("assembled differential does not square to zero")
    return PeriodicComplex(f.field, 1, (sum(sizes),), (delta,))


@dataclass(frozen=True)
class FlagStage:
    """One filtration step: the submodule on the first parts and the
    subquotient carried by the next part (always with zero differential)."""

    sub: PeriodicComplex
    subquotient: PeriodicComplex


def flag_filtration(f: FlagData) -> tuple[FlagStage, ...]:
    """Filtration by the first i+1 parts; subquotients are (P_i, 0)."""
    assembled = flag_assemble(f)
    delta = assembled.diffs[0]
    offsets = [0]
    for s in f.parts:
        offsets.append(offsets[-1] + s)
    stages = []
    for i in range(len(f.parts)):
        cut = offsets[i + 1]
        sub_delta = Matrix(
            f.field, cut, cut, tuple(tuple(row[:cut]) for row in delta.entries[:cut])
        )
        sub = PeriodicComplex(f.field, 1, (cut,), (sub_delta,))
        v = validate_periodic(sub)
        if v is not None:
            raise FlagError(f"filtration stage {i} is not a differential module: {v}")
        quotient_block = tuple(
            tuple(row[offsets[i] : cut]) for row in delta.entries[offsets[i] : cut]
        )
        induced = Matrix(f.field, f.parts[i], f.parts[i], quotient_block)
        stages.append(
            FlagStage(sub, PeriodicComplex(f.field, 1, (f.parts[i],), (induced,)))
        )
    return tuple(stages)


def tensor_periodic(x: BoundedComplex, y: PeriodicComplex) -> PeriodicComplex:
    """Tensor of a bounded complex with a periodic one, over the base field.

    Term r is the sum over increasing x-degrees j of X^j (x) Y^((r-j) mod
    n); the Y differential picks up the Koszul sign (-1)^j.
    """
    if x.field != y.field:
        raise FieldMismatch("tensor across fields")
    v = validate(x)
    if v is not None:
        raise ValueError(f"invalid complex: {v}")
    v = validate_periodic(y)
    if v is not None:
        raise ValueError(f"invalid periodic complex: {v}")
    field = x.field
    n = y.n
    xdegs = list(x.degrees())
    dims = tuple(sum(x.dim(j) * y.dim(r - j) for j in xdegs) for r in range(n))
    diffs = []
    for r in range(n):
        rows = [x.dim(j) * y.dim(r + 1 - j) for j in xdegs]
        cols = [x.dim(j) * y.dim(r - j) for j in xdegs]
        blocks: dict[tuple[int, int], Matrix] = {}
        for sj, j in enumerate(xdegs):
            if x.dim(j) * y.dim(r - j) == 0:
                continue
            if j + 1 in xdegs and x.dim(j + 1) * y.dim(r - j):
                blocks[(xdegs.index(j + 1), sj)] = kron(x.diff(j), identity(field, y.dim(r - j)))
            if x.dim(j) * y.dim(r + 1 - j):
                m = kron(identity(field, x.dim(j)), y.diff(r - j))
                blocks[(sj, sj)] = m if j % 2 == 0 else -m
        diffs.append(assemble_blocks(field, rows, cols, blocks))
    return PeriodicComplex(field, n, dims, tuple(diffs))


def _tensor_labels_folded(x: BoundedComplex, y0: BoundedComplex, n: int, r: int) -> list[tuple]:
    t = tensor_complex(x, y0)
    labels = []
    for l in residue_degrees(t, n, r):
        for i in x.degrees():
            j = l - i
            if x.dim(i) and y0.dim(j):
                labels.extend((i, j, a, b) for a in range(x.dim(i)) for b in range(y0.dim(j)))
    return labels


def _tensor_labels_periodic(x: BoundedComplex, y0: BoundedComplex, n: int, r: int) -> list[tuple]:
    labels = []
    for i in x.degrees():
        if x.dim(i) == 0:
            continue
        for a in range(x.dim(i)):
            for j in residue_degrees(y0, n, (r - i) % n):
                labels.extend((i, j, a, b) for b in range(y0.dim(j)))
    return labels


def tensor_compression_square(x: BoundedComplex, y0: BoundedComplex, n: int) -> bool:
    """Exact equality of fold(x tensor y0) and x tensor fold(y0) after the
    canonical matching of summands."""
    folded = compress(tensor_complex(x, y0), n)
    periodic_side = tensor_periodic(x, compress(y0, n))
    perms = []
    for r in range(n):
        src = _tensor_labels_folded(x, y0, n, r)
        dst = _tensor_labels_periodic(x, y0, n, r)
        if len(src) != folded.dims[r] or len(dst) != periodic_side.dims[r] or len(src) != len(dst):
            return False
        pos = {label: k for k, label in enumerate(src)}
        perms.append([pos[label] for label in dst])
    for r in range(n):
        lhs = permute_cols(permute_rows(folded.diffs[r], perms[(r + 1) % n]), perms[r])
        if lhs != periodic_side.diffs[r]:
            return False
    return True
