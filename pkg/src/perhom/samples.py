"""Seeded random instances for the verification suites and tests.

Everything here is deterministic given a `random.Random` instance.  Random
complexes are assembled from contractible two-term pieces and one-term
homology pieces, then conjugated by random basis changes, so the square
of every differential vanishes exactly.  Random graded modules are sums
of shifted truncated free modules, conjugated degreewise, which preserves
the commutation laws on the nose.
"""

from __future__ import annotations

from random import Random

from .complexes import (
    BoundedComplex,
    ChainMap,
    _chain_map_system,
    chain_map,
)
from .graded import (
    Algebra,
    FlagData,
    GradedModule,
    ModuleComplex,
    direct_sum_modules,
    free_module,
    polynomial_algebra,
)
from .linalg import (
    BlockSystem,
    Field,
    Matrix,
    assemble_blocks,
    identity,
    kernel_basis,
    mat,
    rank,
    solve_linear,
    zeros,
)
from .periodic import PeriodicComplex, compress, identity_periodic_map, periodic_cone

__all__ = [
    "rand_invertible",
    "rand_matrix",
    "random_bounded_complex",
    "random_chain_map",
    "random_contractible_periodic",
    "random_flag",
    "random_graded_module",
    "random_module_complex",
    "random_module_map",
    "random_periodic",
]


def rand_matrix(rng: Random, field: Field, rows: int, cols: int, bound: int = 2) -> Matrix:
    if field.p is not None:
        return mat(field, [[rng.randrange(field.p) for _ in range(cols)] for _ in range(rows)], rows=rows, cols=cols)
    return mat(field, [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], rows=rows, cols=cols)


def rand_invertible(rng: Random, field: Field, n: int) -> Matrix:
    if n == 0:
        return identity(field, 0)
    for _ in range(30):
        cand = rand_matrix(rng, field, n, n)
        if rank(cand) == n:
            return cand
    # Unit upper-triangular fallback, invertible by construction.
    body = [
        [field.one if i == j else (field.coerce(rng.randint(-2, 2)) if j > i else field.zero) for j in range(n)]
        for i in range(n)
    ]
    return Matrix(field, n, n, tuple(tuple(r) for r in body))


def _inverse(m: Matrix) -> Matrix:
    inv = solve_linear(m, identity(m.field, m.rows))
    if inv is None:
        raise ValueError("matrix is not invertible")
    return inv


def random_bounded_complex(
    rng: Random,
    field: Field,
    max_dim: int = 4,
    max_width: int = 4,
    lo_range: tuple[int, int] = (-2, 1),
) -> BoundedComplex:
    """A random complex built from split pieces plus basis changes."""
    width = rng.randint(1, max_width)
    lo = rng.randint(*lo_range)
    degs = list(range(lo, lo + width))
    heads = {i: rng.randint(0, 2) for i in degs[:-1]}
    singles = {i: rng.randint(0, 1) for i in degs}
    for _ in range(10 * width):
        oversized = [i for i in degs if heads.get(i - 1, 0) + heads.get(i, 0) + singles[i] > max_dim]
        if not oversized:
            break
        i = oversized[0]
        if heads.get(i - 1, 0) >= heads.get(i, 0) and heads.get(i - 1, 0) > 0:
            heads[i - 1] -= 1
        elif heads.get(i, 0) > 0:
            heads[i] -= 1
        else:
            singles[i] -= 1
    dims = tuple(heads.get(i - 1, 0) + heads.get(i, 0) + singles[i] for i in degs)
    diffs = []
    for i in degs[:-1]:
        rows = dims[i + 1 - lo]
        cols = dims[i - lo]
        # Degree-i basis order: tails of pieces from i-1, heads of pieces at
        # i, then the one-term summands; the identity block links heads at i
        # to tails at i+1.
        block = [[field.zero] * cols for _ in range(rows)]
        for t in range(heads.get(i, 0)):
            block[t][heads.get(i - 1, 0) + t] = field.one
        diffs.append(Matrix(field, rows, cols, tuple(tuple(r) for r in block)))
    basis = {i: rand_invertible(rng, field, dims[i - lo]) for i in degs}
    conjugated = []
    for k, i in enumerate(degs[:-1]):
        conjugated.append(basis[i + 1] @ diffs[k] @ _inverse(basis[i]))
    return BoundedComplex(field, lo, dims, tuple(conjugated))


def random_chain_map(rng: Random, x: BoundedComplex, y: BoundedComplex) -> ChainMap:
    """A uniform-ish random element of the chain-map space."""
    sys = _chain_map_system(x, y)
    basis = kernel_basis(sys.matrix())
    if basis.cols == 0:
        return chain_map(x, y, {})
    coeffs = rand_matrix(rng, x.field, basis.cols, 1)
    parts = sys.split_solution(basis @ coeffs)
    return chain_map(x, y, parts)


def random_periodic(
    rng: Random,
    field: Field,
    n: int,
    max_dim: int = 3,
    max_width: int = 4,
    conjugate: bool = True,
) -> PeriodicComplex:
    p = compress(random_bounded_complex(rng, field, max_dim=max_dim, max_width=max_width), n)
    if not conjugate:
        return p
    return conjugate_periodic(rng, p)


def conjugate_periodic(rng: Random, p: PeriodicComplex) -> PeriodicComplex:
    basis = [rand_invertible(rng, p.field, d) for d in p.dims]
    diffs = tuple(
        basis[(i + 1) % p.n] @ p.diffs[i] @ _inverse(basis[i]) for i in range(p.n)
    )
    return PeriodicComplex(p.field, p.n, p.dims, diffs)


def random_contractible_periodic(rng: Random, field: Field, n: int, max_dim: int = 2) -> PeriodicComplex:
    """A cone of an identity map, disguised by a random basis change."""
    while True:
        q = random_periodic(rng, field, n, max_dim=max_dim, max_width=min(n + 1, 3), conjugate=False)
        if q.total_dim() > 0:
            break
    return conjugate_periodic(rng, periodic_cone(identity_periodic_map(q)))


def random_flag(rng: Random, field: Field, max_parts: int = 3, max_part_dim: int = 3) -> FlagData:
    """Strictly upper-triangular square-zero data with full off-diagonal.

    Adjacent blocks come from a random complex read backwards, so their
    composites vanish; conjugating by a unit block-upper-triangular change
    fills the rest of the upper triangle without breaking square-zero, and
    block-diagonal changes scramble the part bases.
    """
    x = random_bounded_complex(rng, field, max_dim=max_part_dim, max_width=max_parts, lo_range=(0, 0))
    count = len(x.dims)
    parts = tuple(reversed(x.dims))
    adjacent = {j: x.diffs[count - 1 - j] for j in range(1, count)}
    delta = assemble_blocks(field, parts, parts, {(j - 1, j): adjacent[j] for j in adjacent})
    if not (delta @ delta).is_zero():
        raise AssertionError("adjacent construction must square to zero")
    upper = {
        (i, j): rand_matrix(rng, field, parts[i], parts[j])
        for i in range(count)
        for j in range(i + 1, count)
    }
    diag = {(i, i): identity(field, parts[i]) for i in range(count)}
    u = assemble_blocks(field, parts, parts, {**diag, **upper})
    v = assemble_blocks(field, parts, parts, {(i, i): rand_invertible(rng, field, parts[i]) for i in range(count)})
    g = v @ u
    delta = g @ delta @ _inverse(g)
    offs = [0]
    for s in parts:
        offs.append(offs[-1] + s)
    out_blocks = []
    for jj in range(count):
        for ii in range(jj):
            body = tuple(
                tuple(delta.entries[offs[ii] + a][offs[jj] + b] for b in range(parts[jj]))
                for a in range(parts[ii])
            )
            m = Matrix(field, parts[ii], parts[jj], body)
            if not m.is_zero():
                out_blocks.append((jj, ii, m))
    return FlagData(field, parts, tuple(out_blocks))


def conjugate_module(rng: Random, m: GradedModule) -> tuple[GradedModule, list[Matrix]]:
    """Reskin a module by degreewise basis changes; returns the changes."""
    changes = [rand_invertible(rng, m.field, d) for d in m.dims]
    actions = []
    for j in range(m.algebra.generators):
        family = []
        for k in range(max(0, len(m.dims) - 1)):
            if m.algebra.kind == "poly":
                family.append(changes[k + 1] @ m.actions[j][k] @ _inverse(changes[k]))
            else:
                family.append(changes[k] @ m.actions[j][k] @ _inverse(changes[k + 1]))
        actions.append(tuple(family))
    return GradedModule(m.field, m.algebra, m.lo, m.dims, tuple(actions)), changes


def random_graded_module(
    rng: Random,
    field: Field,
    c: int,
    window: tuple[int, int],
    max_gens: int = 2,
) -> GradedModule:
    """A sum of shifted truncated free modules in a random basis."""
    lo, hi = window
    algebra = polynomial_algebra(c)
    count = rng.randint(1, max_gens)
    slack = 2 if c <= 2 else 1
    gens = [hi - rng.randint(0, min(slack, hi - lo)) for _ in range(count)]
    m = direct_sum_modules([free_module(field, algebra, g, window) for g in gens])
    return conjugate_module(rng, m)[0]


def _module_map_system(src: GradedModule, dst: GradedModule) -> BlockSystem:
    sys = BlockSystem(src.field)
    for i in src.degrees():
        if src.dim(i) and dst.dim(i):
            sys.add_unknown(i, dst.dim(i), src.dim(i))
    step = src.algebra.step
    for g in range(src.algebra.generators):
        for i in src.degrees():
            if not (src.lo <= i + step <= src.hi):
                continue
            if src.dim(i) and dst.dim(i + step):
                sys.add_equation((g, i), dst.dim(i + step), src.dim(i))
    for g in range(src.algebra.generators):
        for i in src.degrees():
            if ((g, i)) not in sys._equations:
                continue
            if src.dim(i + step) and dst.dim(i + step):
                sys.add_term((g, i), i + step, right=src.action(g, i))
            if src.dim(i) and dst.dim(i):
                sys.add_term((g, i), i, left=dst.action(g, i), sign=-1)
    return sys


def random_module_map(rng: Random, src: GradedModule, dst: GradedModule) -> tuple[Matrix, ...]:
    """Random equivariant degree-0 map, one matrix per window degree."""
    sys = _module_map_system(src, dst)
    basis = kernel_basis(sys.matrix())
    if basis.cols:
        parts = sys.split_solution(basis @ rand_matrix(rng, src.field, basis.cols, 1))
    else:
        parts = {}
    return tuple(
        parts.get(i, zeros(src.field, dst.dim(i), src.dim(i))) for i in src.degrees()
    )


def random_module_complex(
    rng: Random,
    field: Field,
    c: int,
    window: tuple[int, int],
    length: int | None = None,
    jlo: int = 0,
) -> ModuleComplex:
    """A complex of graded modules of one, two, or three terms."""
    length = length if length is not None else rng.randint(1, 3)
    if length == 1:
        return ModuleComplex(jlo, (random_graded_module(rng, field, c, window),), ())
    if length == 2:
        a = random_graded_module(rng, field, c, window)
        b = random_graded_module(rng, field, c, window)
        return ModuleComplex(jlo, (a, b), (random_module_map(rng, a, b),))
    a = random_graded_module(rng, field, c, window, max_gens=1)
    b = random_graded_module(rng, field, c, window, max_gens=1)
    middle = direct_sum_modules([a, b])
    include = tuple(
        assemble_blocks(field, [a.dim(i), b.dim(i)], [a.dim(i)], {(0, 0): identity(field, a.dim(i))})
        for i in a.degrees()
    )
    project = tuple(
        assemble_blocks(field, [b.dim(i)], [a.dim(i), b.dim(i)], {(0, 1): identity(field, b.dim(i))})
        for i in a.degrees()
    )
    skin_a, ua = conjugate_module(rng, a)
    skin_m, um = conjugate_module(rng, middle)
    skin_b, ub = conjugate_module(rng, b)
    maps0 = tuple(
        um[k] @ include[k] @ _inverse(ua[k]) for k in range(len(a.dims))
    )
    maps1 = tuple(
        ub[k] @ project[k] @ _inverse(um[k]) for k in range(len(a.dims))
    )
    return ModuleComplex(jlo, (skin_a, skin_m, skin_b), (maps0, maps1))
