"""Command line front end: run job files and print reports.

Exit codes: 0 success, 2 parse/validation error, 3 resource budget
exhausted, 4 the main result is only an advisory (unstabilized series or
unknown complexity).
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .algebra import ExteriorAlgebra
from .bgg import bgg_homology_hilbert, bgg_transform
from .dgmodules import algebra_module, residue_field
from .exactlin import FieldSpec
from .invariants import (DEFAULT_WINDOW, SeriesWindowError, ci_check, default_exponents,
                         level_bracket, loewy_length, reconstruct_series, sequence_complexity)
from .jobs import JobError, JobSpec, emit, parse_job, build_algebra, build_field, build_module
from .polynomials import format_polynomial
from .report import Report, provenance
from .resolve import (DEFAULT_BUDGET, DEFAULT_CUTOFF, ExtGroup, ResourceLimitError, ext_dims,
                      graded_ext_dims, minimal_resolution, prop51_resolution, resolve_dg,
                      yoneda_compose)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_ADVISORY = 4


def _pick(which: str, module, A):
    if which == "module":
        return module
    if which == "residue-field":
        return residue_field(A)
    return algebra_module(A)


def _series_items(rep: Report, prefix: str, s) -> None:
    rep.add(f"{prefix}.numerator", s.numerator_text() if s.exact else "unstabilized")
    rep.add(f"{prefix}.denominator", s.denominator_text())
    rep.add(f"{prefix}.status", s.status)


def _complexity_items(rep: Report, prefix: str, c) -> bool:
    rep.add(prefix, c.value)
    if c.series is not None:
        _series_items(rep, f"{prefix}.series", c.series)
    if c.value is None:
        if c.advisory is not None:
            rep.add(f"{prefix}.advisory", f"{c.advisory:.2f} (least-squares growth fit, not exact)")
        return False
    return True


def run(spec: JobSpec, cutoff: int | None = None, window: int | None = None, budget: int | None = None,
        field: FieldSpec | None = None) -> tuple[Report, int]:
    """Execute a validated job; returns the report and the exit code."""
    if field is not None:
        sec = {"kind": field.kind}
        if field.kind == "prime":
            sec["p"] = field.p
        spec = JobSpec({**spec.sections, "field": sec}, spec.positions, spec.name, spec.lines)
    cutoff = cutoff if cutoff is not None else spec.get("command", "cutoff", DEFAULT_CUTOFF)
    window = window if window is not None else spec.get("command", "window", DEFAULT_WINDOW)
    budget = budget if budget is not None else spec.get("command", "budget", DEFAULT_BUDGET)
    F = build_field(spec)
    A = build_algebra(spec)
    M = build_module(spec, A)
    cmd = spec.command
    rep = Report(spec.name or "job", cmd, emit(spec))
    rep.provenance = provenance(F, cutoff, window, budget)
    code = EXIT_OK
    try:
        ok = _COMMANDS[cmd](spec, rep, A, M, cutoff, window, budget)
        if ok is False:
            code = EXIT_ADVISORY
    except ResourceLimitError as e:
        reached = e.degree - 1
        rep.add("error", f"generator budget {e.budget} exhausted in degree {e.degree}")
        rep.add("partial_cutoff", reached)
        if e.partial is not None and reached >= 0:
            try:
                rep.table("betti_partial", ("n", "b_n"), sorted(_partial_betti(e.partial, reached).items()))
            except Exception:  # partial data is best effort
                pass
        code = EXIT_RESOURCE
    except SeriesWindowError as e:
        rep.add("error", str(e))
        code = EXIT_INVALID
    return rep, code


def _partial_betti(res, reached: int) -> dict:
    if hasattr(res, "gen_degrees") and res.gen_degrees and isinstance(res.gen_degrees[0], list):
        return {n: len(res.gen_degrees[n]) for n in range(min(reached + 1, len(res.gen_degrees)))}
    counts: dict = {}
    for d in res.gen_degrees:
        if d <= reached:
            counts[d] = counts.get(d, 0) + 1
    return counts


# -- commands -------------------------------------------------------------------

def _cmd_betti(spec, rep, A, M, cutoff, window, budget):
    if spec.get("command", "method") == "closed-form":
        res = prop51_resolution(A.gen_degree_list[0], cutoff, A.field)
        rep.add("method", "closed form e_n, d(e_n) = xi e_(n-1)")
    else:
        res = minimal_resolution(M, cutoff, budget)
    b = res.betti(cutoff)
    rep.add("betti", list(b.values))
    rep.add("start", b.start)
    rep.table("betti", ("n", "b_n"), sorted(b.as_dict().items()))
    if isinstance(A, ExteriorAlgebra):
        rep.add("minimal", res.is_minimal())
        if spec.get("command", "dump"):
            rows = []
            for g, deg, terms in res.describe():
                d = " + ".join(f"{c}*{lab}*g{h}" for h, lab, c in terms) or "0"
                rows.append((g, deg, d))
            rep.table("generators", ("g", "degree", "d(g)"), rows)
    else:
        rep.add("minimal", res.is_minimal())
        rep.table("graded_betti", ("n", "internal_degree", "count"),
                  [(n, j, c) for (n, j), c in sorted(res.graded_betti().items())])
    return True


def _cmd_ext(spec, rep, A, M, cutoff, window, budget):
    u = _pick(spec.get("command", "source", "module"), M, A)
    v = _pick(spec.get("command", "target", "residue-field"), M, A)
    e = ext_dims(u, v, cutoff, budget=budget)
    rep.add("ext", list(e.values))
    rep.add("start", e.start)
    rep.table("ext", ("n", "dim"), sorted(e.as_dict().items()))
    if not isinstance(A, ExteriorAlgebra):
        g = graded_ext_dims(u, v, cutoff, budget)
        rep.table("graded_ext", ("n", "internal_degree", "dim"), [(n, j, d) for (n, j), d in sorted(g.items())])
    return True


def _exponents(spec, A):
    ex = spec.get("command", "exponents")
    return tuple(ex) if ex is not None else default_exponents(A)


def _cmd_complexity(spec, rep, A, M, cutoff, window, budget):
    exps = _exponents(spec, A)
    k = residue_field(A)
    if spec.get("command", "target") is not None or spec.get("command", "source") is not None:
        u = _pick(spec.get("command", "source", "module"), M, A)
        v = _pick(spec.get("command", "target", "module"), M, A)
        c = sequence_complexity(ext_dims(u, v, cutoff, budget=budget), exps, window)
        return _complexity_items(rep, "pair_cx", c)
    b = minimal_resolution(M, cutoff, budget).betti(cutoff)
    ok = _complexity_items(rep, "cx", sequence_complexity(b, exps, window))
    inj = sequence_complexity(ext_dims(k, M, cutoff, budget=budget), exps, window)
    ok2 = _complexity_items(rep, "injcx", inj)
    return ok and ok2


def _cmd_poincare(spec, rep, A, M, cutoff, window, budget):
    exps = _exponents(spec, A)
    b = minimal_resolution(M, cutoff, budget).betti(cutoff)
    rep.add("betti", list(b.values))
    s = reconstruct_series(b, exps, window)
    _series_items(rep, "poincare", s)
    if s.exact:
        rep.add("pole_order", s.pole_order())
        return True
    c = sequence_complexity(b, exps, window)
    rep.add("advisory_growth", f"{c.advisory:.2f} (least-squares growth fit, not exact)")
    return False


def _cmd_loewy(spec, rep, A, M, cutoff, window, budget):
    if isinstance(A, ExteriorAlgebra):
        H = M.homology()
        rows = [(n, H.dims[n], 1) for n in H.support]
        rep.table("loewy", ("n", "dim_H_n", "lol"), rows)
        rep.add("sum", len(rows))
    else:
        rep.add("loewy_length", loewy_length(M))
    return True


def _cmd_level(spec, rep, A, M, cutoff, window, budget):
    exps = _exponents(spec, A)
    b = minimal_resolution(M, cutoff, budget).betti(cutoff)
    c = sequence_complexity(b, exps, window)
    br = level_bracket(M, cutoff, window, budget, cx_value=c)
    rep.add("cx", c.value)
    rep.add("level_lower", br.lower)
    rep.add("level_upper", br.upper)
    rep.add("tight", br.tight)
    if br.warning:
        rep.warn(br.warning)
    return br.lower is not None


def _cmd_bgg(spec, rep, A, M, cutoff, window, budget):
    b = bgg_transform(M)
    rep.add("delta_squared_zero", b.square_is_zero())
    rep.add("weights", list(b.over.weights))
    h = bgg_homology_hilbert(b, cutoff)
    rep.table("homology", ("homological", "cohomological", "dim"), h.rows())
    if spec.get("command", "dump"):
        rep.table("delta", ("row", "col", "entry"), b.describe())
    if not any(h.dims.values):
        rep.add("krull_dim", "homology vanishes through the cutoff")
        return True
    c = sequence_complexity(h.dims, b.over.weights, window)
    ok = _complexity_items(rep, "krull_dim", c)
    return ok


def _cmd_ci(spec, rep, A, M, cutoff, window, budget):
    v = ci_check(A)
    rep.add("verdict", str(v))
    rep.add("complete_intersection", v.is_ci)
    rep.add("edim", v.edim)
    rep.add("relations", v.relations)
    return True


def _cmd_yoneda(spec, rep, A, M, cutoff, window, budget):
    m, n = spec.get("command", "degrees")
    # Ext^n(U, k) is acted on by Ext^m(k, k); Hom into k needs F_U through degree m + n + 1
    res_u = resolve_dg(M, m + n + 1, budget)
    if spec.get("module", "kind") == "residue-field" and M.degrees == (0,):
        k, res_k = M, res_u
    else:
        k = residue_field(A)
        res_k = resolve_dg(k, m + 1, budget)
    alphas = ExtGroup(res_u, k, n)
    betas = ExtGroup(res_k, k, m)
    prods = ExtGroup(res_u, k, m + n)
    rep.add("dim_ext_n", len(alphas))
    rep.add("dim_ext_m_kk", len(betas))
    rep.add("dim_ext_m_plus_n", len(prods))
    rows = []
    for i, b in enumerate(betas):
        for j, a in enumerate(alphas):
            coords = prods.coordinates(yoneda_compose(b, a))
            rows.append((f"b{i}*a{j}", " ".join(A.field.to_int_str(c) for c in coords) or "-"))
    rep.table("products", ("product", "coordinates"), rows)
    return True


def _cmd_normal_form(spec, rep, A, M, cutoff, window, budget):
    poly = spec.get("command", "poly")
    rep.add("input", poly)
    rep.add("normal_form", format_polynomial(A.field, A.normal_form(poly)))
    rep.add("basis", list(A.labels))
    return True


def _cmd_homology(spec, rep, A, M, cutoff, window, budget):
    H = M.homology()
    rep.add("dim", M.dim)
    rep.add("degrees", sorted(M.degrees))
    rep.table("homology", ("n", "dim"), sorted(H.dims.items()))
    rep.add("support", H.support)
    rep.add("card_support", len(H.support))
    rep.add("total", H.total)
    return True


_COMMANDS = {
    "betti": _cmd_betti,
    "ext": _cmd_ext,
    "complexity": _cmd_complexity,
    "poincare": _cmd_poincare,
    "loewy": _cmd_loewy,
    "level-bounds": _cmd_level,
    "bgg": _cmd_bgg,
    "ci-check": _cmd_ci,
    "yoneda": _cmd_yoneda,
    "normal-form": _cmd_normal_form,
    "homology": _cmd_homology,
}


# -- entry point -------------------------------------------------------------------

def run_file(path: str, fmt: str | None = None, cutoff=None, window=None, budget=None,
             field: str | None = None) -> tuple[str, int]:
    p = Path(path)
    try:
        spec = parse_job(p.read_text(encoding="utf-8"), name=p.stem)
        F = FieldSpec.parse(field) if field else None
        rep, code = run(spec, cutoff, window, budget, F)
    except JobError as e:
        return f"{p.name}: {e}\n", EXIT_INVALID
    except ValueError as e:
        return f"{p.name}: {e}\n", EXIT_INVALID
    fmt = fmt or spec.get("command", "report", "table")
    return rep.render(fmt), code


def _run_one(args):
    return run_file(*args)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cicohom", description="Resolutions, Ext and complexity over exterior algebras "
                                                           "and Artinian quotient rings.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--job", help="job file to run")
    src.add_argument("--jobs", help="directory of *.job files, run concurrently")
    ap.add_argument("--cutoff", type=int)
    ap.add_argument("--window", type=int)
    ap.add_argument("--field", help="prime:P or rational; overrides the job's [field]")
    ap.add_argument("--report", choices=("table", "records"))
    ap.add_argument("--budget", type=int, help="maximum number of resolution generators")
    ap.add_argument("--out", help="with --jobs: write <name>.report files here instead of printing")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--version", action="version", version=f"cicohom {__version__}")
    a = ap.parse_args(argv)
    if a.field:
        try:
            FieldSpec.parse(a.field)
        except ValueError as e:
            print(f"cicohom: {e}", file=sys.stderr)
            return EXIT_INVALID
    common = (a.report, a.cutoff, a.window, a.budget, a.field)
    if a.job:
        text, code = run_file(a.job, *common)
        (sys.stdout if code != EXIT_INVALID else sys.stderr).write(text)
        return code
    files = sorted(Path(a.jobs).glob("*.job"))
    if not files:
        print(f"cicohom: no .job files in {a.jobs}", file=sys.stderr)
        return EXIT_INVALID
    with ProcessPoolExecutor(max_workers=a.workers) as ex:
        results = list(ex.map(_run_one, [(str(f),) + common for f in files]))
    worst = 0
    outdir = Path(a.out) if a.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    for f, (text, code) in zip(files, results):
        worst = max(worst, code)
        if outdir:
            (outdir / f"{f.stem}.report").write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(f"==> {f.name} <==\n{text}\n")
    return worst


if __name__ == "__main__":
    sys.exit(main())
