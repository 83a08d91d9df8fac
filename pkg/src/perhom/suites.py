"""Seed-deterministic verification suites.

Each suite checks one acceptance property on a fixed number of seeded
random instances and returns a JSON-able report; identical seeds give
byte-identical reports.  Suite names are the `verify` subcommand surface.
"""

from __future__ import annotations

from random import Random

from .complexes import (
    chain_map,
    cohomology_dims,
    compose,
    identity_chain_map,
    validate_chain_map,
)
from .documents import canonical_json_bytes
from .graded import (
    flag_assemble,
    flag_filtration,
    free_module,
    polynomial_algebra,
    tensor_compression_square,
)
from .koszul import bgg_complex, bgg_module, validate_bgg, verify_bgg_square
from .linalg import GF, QQ
from .orbit import embedding_certificate
from .periodic import (
    compression_cone_square,
    periodic_homotopy_defect,
    periodize_null_homotopy,
    twist_iso,
    unit_and_retraction,
    unrolled_identity_contraction,
)
from .samples import (
    random_bounded_complex,
    random_chain_map,
    random_contractible_periodic,
    random_flag,
    random_graded_module,
    random_module_complex,
)

__all__ = ["SUITES", "available_suites", "run_suite", "report_bytes"]

F5 = GF(5)
F7 = GF(7)


def _finish(name: str, seed: int, cases: list[dict]) -> dict:
    failed = sum(1 for c in cases if not c["ok"])
    return {
        "suite": name,
        "seed": seed,
        "cases": cases,
        "passed": len(cases) - failed,
        "failed": failed,
        "ok": failed == 0,
    }


def suite_embedding(seed: int) -> dict:
    """Orbit Hom dimensions agree with the periodic computation, pairwise
    over seeded corpora of five complexes per period."""
    cases = []
    for n in (1, 2, 3):
        rng = Random((seed, "embedding", n).__repr__())
        corpus = [random_bounded_complex(rng, F5, max_dim=4, max_width=4) for _ in range(5)]
        cert = embedding_certificate(corpus, n)
        for xi, yi, total, periodic in cert.pairs:
            cases.append(
                {
                    "case": f"n={n} pair=({xi},{yi})",
                    "ok": total == periodic,
                    "detail": f"orbit={total} periodic={periodic}",
                }
            )
    return _finish("embedding", seed, cases)


def suite_periodize(seed: int) -> dict:
    """Folding a windowed contraction yields an exact periodic one on
    contractible complexes over both fields."""
    rng = Random((seed, "periodize").__repr__())
    cases = []
    for k in range(50):
        n = 1 + k % 3
        field = QQ if k % 2 else F5
        p = random_contractible_periodic(rng, field, n, max_dim=1 if field.p is None else 2)
        s = unrolled_identity_contraction(p)
        if s is None:
            cases.append({"case": f"k={k} n={n}", "ok": False, "detail": "no windowed contraction"})
            continue
        try:
            sigma = periodize_null_homotopy(p, s)
            ok = periodic_homotopy_defect(sigma) is None
            detail = f"dims={list(p.dims)} field={field!r}"
        except (ValueError, AssertionError) as exc:
            ok = False
            detail = str(exc)
        cases.append({"case": f"k={k} n={n}", "ok": ok, "detail": detail})
    return _finish("periodize", seed, cases)


def suite_cone_compress(seed: int) -> dict:
    """Folding commutes with mapping cones up to the documented reordering,
    as an exact matrix identity."""
    cases = []
    for n in (1, 2, 3):
        rng = Random((seed, "cone-compress", n).__repr__())
        for k in range(25):
            field = QQ if k % 3 == 0 else F5
            dim = 2 if field.p is None else 3
            x = random_bounded_complex(rng, field, max_dim=dim, max_width=3)
            y = random_bounded_complex(rng, field, max_dim=dim, max_width=3)
            f = random_chain_map(rng, x, y)
            ok = compression_cone_square(f, n)
            cases.append({"case": f"n={n} k={k}", "ok": ok, "detail": f"field={field!r}"})
    return _finish("cone-compress", seed, cases)


def suite_unit_splitting(seed: int) -> dict:
    """The unit into the unrolled fold is a split monomorphism: the
    canonical projection retracts it exactly."""
    cases = []
    for n in (1, 2, 3):
        rng = Random((seed, "unit-splitting", n).__repr__())
        for k in range(25):
            field = QQ if k % 2 else F5
            x = random_bounded_complex(rng, field, max_dim=3, max_width=4)
            pad = rng.randint(0, 1)
            eta, rho = unit_and_retraction(x, n, (x.lo - n - pad, x.hi + n + pad))
            ok = (
                validate_chain_map(eta) is None
                and validate_chain_map(rho) is None
                and compose(rho, eta) == identity_chain_map(x)
            )
            cases.append({"case": f"n={n} k={k}", "ok": ok, "detail": f"window_pad={pad}"})
    return _finish("unit-splitting", seed, cases)


def suite_twist(seed: int) -> dict:
    """The signed-shift to plain-translation comparison map is a chain
    isomorphism with its own components as inverse."""
    cases = []
    for n in (1, 2, 3):
        rng = Random((seed, "twist", n).__repr__())
        for k in range(25):
            field = QQ if k % 2 else F5
            x = random_bounded_complex(rng, field, max_dim=4, max_width=4)
            t = twist_iso(x, n)
            inv = chain_map(t.target, t.source, dict(t.components))
            ok = (
                validate_chain_map(t) is None
                and validate_chain_map(inv) is None
                and compose(inv, t) == identity_chain_map(t.source)
                and compose(t, inv) == identity_chain_map(t.target)
            )
            cases.append({"case": f"n={n} k={k}", "ok": ok, "detail": ""})
    return _finish("twist", seed, cases)


def suite_tensor_square(seed: int) -> dict:
    """Folding commutes with the tensor functor, entrywise after the
    canonical matching of summands, over both fields."""
    cases = []
    for n in (1, 2, 3):
        rng = Random((seed, "tensor-square", n).__repr__())
        for k in range(25):
            field = QQ if k % 2 else F5
            dim = 2 if field.p is None else 3
            width = 3
            x = random_bounded_complex(rng, field, max_dim=dim, max_width=width)
            y0 = random_bounded_complex(rng, field, max_dim=dim, max_width=width)
            ok = tensor_compression_square(x, y0, n)
            cases.append({"case": f"n={n} k={k}", "ok": ok, "detail": f"field={field!r}"})
    return _finish("tensor-square", seed, cases)


def suite_bgg_wellformed(seed: int) -> dict:
    """Every constructed dual-exterior complex squares to zero and its
    differential commutes with the exterior action, exactly."""
    rng = Random((seed, "bgg-wellformed").__repr__())
    cases = []
    for k in range(50):
        c = 1 + k % 3
        field = F5 if k % 2 else QQ
        width = 4 if c <= 2 else 2
        window = (0, width)
        if k % 3 == 0 or c == 3:
            m = random_graded_module(rng, field, c, window)
            b = bgg_module(m)
            tag = "module"
        else:
            mc = random_module_complex(rng, field, c, window, length=1 + k % 2)
            b = bgg_complex(mc)
            tag = "complex"
        bad = validate_bgg(b)
        dims_ok = all(d % (2**c) == 0 for d in b.complex.dims)
        cases.append(
            {
                "case": f"k={k} c={c} {tag}",
                "ok": bad is None and dims_ok,
                "detail": "" if bad is None else str(bad),
            }
        )
    return _finish("bgg-wellformed", seed, cases)


def suite_bgg_square(seed: int) -> dict:
    """Folding commutes with the duality functor: exact equality, or at
    worst one global diagonal sign change."""
    rng = Random((seed, "bgg-square").__repr__())
    cases = []
    for k in range(50):
        c = 1 + k % 2
        n = 1 + k % 3
        field = F5 if k % 2 else QQ
        mc = random_module_complex(rng, field, c, (0, 2 + k % 2))
        rep = verify_bgg_square(mc, n)
        cases.append(
            {
                "case": f"k={k} c={c} n={n}",
                "ok": rep.ok,
                "detail": rep.detail,
            }
        )
    return _finish("bgg-square", seed, cases)


def suite_bgg_cohomology(seed: int) -> dict:
    """The free rank-one module has one-dimensional cohomology at the
    bottom of the window and none in the interior."""
    cases = []
    for field, tag in ((QQ, "QQ"), (F5, "GF(5)")):
        s = free_module(field, polynomial_algebra(1), 0, (0, 6))
        coh = dict(cohomology_dims(bgg_module(s).complex))
        ok = coh.get(0) == 1 and all(coh.get(i) == 0 for i in range(1, 6))
        cases.append(
            {
                "case": f"free module over {tag}, window [0, 6]",
                "ok": ok,
                "detail": f"h={[coh.get(i, 0) for i in range(0, 7)]}",
            }
        )
    return _finish("bgg-cohomology", seed, cases)


def suite_flags(seed: int) -> dict:
    """Every filtration subquotient of a seeded flag carries the zero
    differential."""
    rng = Random((seed, "flags").__repr__())
    cases = []
    for k in range(25):
        field = QQ if k % 3 == 0 else F7
        flag = random_flag(rng, field)
        flag_assemble(flag)
        stages = flag_filtration(flag)
        ok = all(stage.subquotient.diffs[0].is_zero() for stage in stages)
        cases.append(
            {
                "case": f"k={k} parts={list(flag.parts)}",
                "ok": ok,
                "detail": f"field={field!r}",
            }
        )
    return _finish("flags", seed, cases)


def suite_determinism(seed: int) -> dict:
    """Two runs of every other suite with one seed are byte-identical."""
    cases = []
    for name in sorted(SUITES):
        if name == "determinism":
            continue
        first = report_bytes(SUITES[name](seed))
        second = report_bytes(SUITES[name](seed))
        cases.append(
            {
                "case": name,
                "ok": first == second,
                "detail": f"bytes={len(first)}",
            }
        )
    return _finish("determinism", seed, cases)


SUITES = {
    "embedding": suite_embedding,
    "periodize": suite_periodize,
    "cone-compress": suite_cone_compress,
    "unit-splitting": suite_unit_splitting,
    "twist": suite_twist,
    "tensor-square": suite_tensor_square,
    "bgg-wellformed": suite_bgg_wellformed,
    "bgg-square": suite_bgg_square,
    "bgg-cohomology": suite_bgg_cohomology,
    "flags": suite_flags,
    "determinism": suite_determinism,
}


def available_suites() -> list[str]:
    return sorted(SUITES)


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(available_suites())}")
    return SUITES[name](seed)


def report_bytes(report: dict) -> bytes:
    return canonical_json_bytes(report)
