"""Command-line front end.

Subcommands: gen, spectral, hom, check, prune, partition, rowcover,
regularize, pipeline, sweep.  Single runs emit JSON (versioned schema,
sorted keys, no timestamps); sweeps emit CSV with a pinned header.  All
output is deterministic given flags + seed, independent of SSLAB_THREADS.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import graphs, homcounts, regularize, sidorenko, spectra, supersat

SCHEMA = "sslab.report.v1"
CSV_SCHEMA = "sslab.sweep.v1"
CSV_HEADER = (
    "schema,family,pattern,t,m,sample,seed,n,lambda,split_lambda,"
    "above_threshold,count,count_over_mt,sharp_constant,expected"
)


class UsageError(Exception):
    pass


def _f(x) -> float:
    """Round to 12 significant digits for stable serialization."""
    return float(f"{float(x):.12g}")


def _fs(x) -> str:
    return f"{float(x):.12g}"


def _emit(obj: dict, args) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(args) -> graphs.Graph:
    if not getattr(args, "infile", None):
        raise UsageError("--in is required")
    with open(args.infile) as fh:
        return graphs.read_edge_list(fh.read())


def _pattern_graph(name: str, t: int | None, pn: int | None) -> graphs.Graph:
    if name == "c2t":
        if t is None:
            raise UsageError("--t required for pattern c2t")
        return graphs.cycle(2 * t)
    if name == "ktt":
        if t is None:
            raise UsageError("--t required for pattern ktt")
        return graphs.complete_bipartite(t, t)
    if name == "path":
        return graphs.path(pn if pn is not None else 3)
    raise UsageError(f"unknown pattern {name!r}")


# -- subcommands -----------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "split":
        g = graphs.split_graph(args.k, args.m)
    elif fam == "gnm":
        if args.seed is None:
            raise UsageError("gnm requires --seed")
        g = graphs.sample_gnm(args.n, args.m, args.seed)
    elif fam in {"cycle", "path", "clique", "empty"}:
        g = graphs.make_family(graphs.FamilyRequest(fam, (args.n,)))
    elif fam == "star":
        g = graphs.star(args.n)
    elif fam == "complete-bipartite":
        g = graphs.complete_bipartite(args.a, args.b)
    else:
        raise UsageError(f"unknown family {fam!r}")
    text = graphs.write_edge_list(g)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_spectral(args) -> int:
    g = _load_graph(args)
    pd = spectra.perron(g, tol=args.tol)
    _emit(
        {
            "schema": SCHEMA,
            "kind": "spectral",
            "n": g.n,
            "m": g.edge_count,
            "lambda": _f(pd.lam),
            "component": pd.component_id,
            "residual_below_tol": pd.residual <= args.tol,
            "sup_norm": _f(max(pd.x)),
            "g_loc": _f(supersat.localization_g(pd, g.edge_count)),
        },
        args,
    )
    return 0


def cmd_hom(args) -> int:
    g = _load_graph(args)
    h = _pattern_graph(args.pattern, args.t, args.pn)
    res = homcounts.hom_count(h, g)
    inj = homcounts.inj_count(h, g)
    aut = homcounts.aut_order(h)
    _emit(
        {
            "schema": SCHEMA,
            "kind": "hom",
            "pattern": args.pattern,
            "pattern_vertices": h.n,
            "pattern_edges": h.edge_count,
            "hom": res.value,
            "inj": inj.value,
            "aut": aut,
            "copies": inj.value // aut,
            "method": res.method,
        },
        args,
    )
    return 0


def cmd_check(args) -> int:
    g = _load_graph(args)
    if args.pattern == "custom":
        if not args.pattern_file:
            raise UsageError("--pattern-file required for custom pattern")
        with open(args.pattern_file) as fh:
            h = graphs.read_edge_list(fh.read())
    else:
        h = _pattern_graph(args.pattern, args.t, args.pn)
    rep = sidorenko.check_suite(h, g, tol=args.tol)
    obj = {
        "schema": SCHEMA,
        "kind": "check",
        "pattern": args.pattern,
        "hom": rep.hom,
        "lambda": _f(rep.lam),
        "rhs_i": _f(rep.rhs_i),
        "holds_i": rep.holds_i,
        "spectral_forms_applicable": rep.spectral_forms_applicable,
    }
    if rep.spectral_forms_applicable:
        obj.update(
            {
                "rhs_ii": _f(rep.rhs_ii),
                "rhs_iii": _f(rep.rhs_iii),
                "rhs_cert": _f(rep.rhs_cert),
                "holds_ii": rep.holds_ii,
                "holds_iii": rep.holds_iii,
                "holds_cert": rep.holds_cert,
                "chain_slack": _f(rep.chain_slack),
            }
        )
    _emit(obj, args)
    applicable = [rep.holds_i]
    if rep.spectral_forms_applicable:
        applicable += [rep.holds_ii, rep.holds_iii, rep.holds_cert]
    return 0 if all(applicable) else 1


def _trace_dict(trace: supersat.PruneTrace) -> dict:
    return {
        "eta": _f(trace.eta),
        "t": trace.t,
        "initial_m": trace.initial_m,
        "initial_lambda": _f(trace.initial_lambda),
        "final_m": trace.final_graph.edge_count,
        "alpha": _f(trace.alpha),
        "gap_ratio": _f(trace.gap_ratio) if trace.gap_ratio is not None else None,
        "emptied": trace.emptied,
        "steps": [
            {
                "edge": list(s.edge),
                "m_i": s.m_i,
                "lambda_i": _f(s.lambda_i),
                "split_ref": _f(s.split_ref),
                "delta_i": _f(s.delta_i),
                "product": _f(s.product),
            }
            for s in trace.steps
        ],
    }


def cmd_prune(args) -> int:
    g = _load_graph(args)
    trace = supersat.heavy_prune(g, args.t, eta=args.eta)
    _emit({"schema": SCHEMA, "kind": "prune", **_trace_dict(trace)}, args)
    return 0


def _acd_dict(acd: supersat.AcdPartition) -> dict:
    return {
        "a_size": len(acd.a_set),
        "c_size": len(acd.c_set),
        "d_size": len(acd.d_set),
        "a_set": list(acd.a_set),
        "sup_norm": _f(acd.sup_norm),
        "g_loc": _f(acd.g_loc),
        "g_tilde": _f(acd.g_tilde),
        "k_levels": acd.k_levels,
        "ell": acd.ell,
        "index_set": list(acd.index_set),
        "s_sums": {str(i): v for i, v in sorted(acd.s_sums.items())},
        "i_star": acd.i_star,
        "s_threshold": _f(acd.s_threshold),
        "r_threshold": _f(acd.r_threshold),
        "e_ac": acd.e_ac,
        "e_core": acd.e_core,
        "t1_ok": acd.t1_ok,
        "t2_ok": acd.t2_ok,
        "t3_ok": acd.t3_ok,
    }


def cmd_partition(args) -> int:
    g = _load_graph(args)
    eta = args.eta if args.eta is not None else 1.0 / (16 * args.t)
    trace = supersat.heavy_prune(g, args.t, eta=eta)
    if trace.emptied:
        _emit({"schema": SCHEMA, "kind": "partition", "error": "emptied"}, args)
        return 0
    try:
        acd = supersat.acd_partition(
            trace.final_graph, eta, pd=trace.final_perron
        )
    except supersat.TooDelocalizedError as exc:
        _emit(
            {
                "schema": SCHEMA,
                "kind": "partition",
                "error": "too-delocalized",
                "k_levels": exc.k_levels,
                "index_set": list(exc.index_set),
            },
            args,
        )
        return 0
    _emit({"schema": SCHEMA, "kind": "partition", **_acd_dict(acd)}, args)
    return 0


def _rowcover_dict(rc: supersat.RowCoverOutcome) -> dict:
    obj = {
        "variant": rc.variant,
        "r_set": list(rc.r_set),
        "theta": _f(rc.theta),
        "epsilon": _f(rc.epsilon),
        "sigma1": _f(rc.sigma1),
        "e_ad": rc.e_ad,
        "e_uncovered": rc.e_uncovered,
        "degenerate": rc.degenerate,
    }
    if rc.variant == "many-copies":
        obj.update(
            {"d_star": rc.d_star, "floor_l": rc.floor_l, "copy_bound": rc.copy_bound}
        )
    else:
        obj.update(
            {
                "b_size": len(rc.b_set),
                "e_ar_b": rc.e_ar_b,
                "e_r_dnb": rc.e_r_dnb,
            }
        )
    return obj


def _parse_vertex_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip() != ""]


def cmd_rowcover(args) -> int:
    g = _load_graph(args)
    if args.a_side and args.d_side:
        a_set = _parse_vertex_list(args.a_side)
        d_set = _parse_vertex_list(args.d_side)
    else:
        eta = args.eta if args.eta is not None else 1.0 / (16 * args.t)
        trace = supersat.heavy_prune(g, args.t, eta=eta)
        if trace.emptied:
            _emit({"schema": SCHEMA, "kind": "rowcover", "error": "emptied"}, args)
            return 0
        acd = supersat.acd_partition(trace.final_graph, eta, pd=trace.final_perron)
        g = trace.final_graph
        a_set, d_set = list(acd.a_set), list(acd.d_set)
    rc = supersat.row_cover_analyze(g, a_set, d_set, args.t)
    _emit({"schema": SCHEMA, "kind": "rowcover", **_rowcover_dict(rc)}, args)
    return 0


def cmd_regularize(args) -> int:
    g = _load_graph(args)
    bundle = regularize.build_regular(g, args.k)
    dist = regularize.edge_distribution(g)
    obj = {
        "schema": SCHEMA,
        "kind": "regularize",
        "k": bundle.k,
        "component_size": len(bundle.vertices),
        "n_vec": list(bundle.n_vec),
        "n_mat": [[int(x) for x in row] for row in bundle.n_mat],
        "d_k": bundle.d_k,
        "t_k_size": bundle.t_k_size,
        "lambda_k": _f(bundle.lambda_k),
        "entropy_gap": _f(regularize.entropy_gap(dist)),
        "log_lambda": _f(math.log(dist.lam)),
    }
    if args.materialize:
        fk = regularize.materialize_fk(bundle, g, cap=args.cap)
        obj["fk_vertices"] = fk.n
        obj["fk_edges"] = fk.edge_count
    _emit(obj, args)
    return 0


def _pipeline_dict(rep: supersat.PipelineReport) -> dict:
    obj = {
        "schema": SCHEMA,
        "kind": "pipeline",
        "t": rep.t,
        "pattern": rep.pattern,
        "n": rep.n,
        "m": rep.m,
        "lambda": _f(rep.lam),
        "split_threshold": _f(rep.split_threshold),
        "above_threshold": rep.above_threshold,
        "branch": rep.branch,
        "sharp_constant": _f(rep.sharp_constant),
        "notes": list(rep.notes),
    }
    if rep.trace is not None:
        obj["trace"] = _trace_dict(rep.trace)
    if rep.g_loc is not None:
        obj["g_loc"] = _f(rep.g_loc)
    if rep.acd is not None:
        obj["acd"] = _acd_dict(rep.acd)
    if rep.rowcover is not None:
        obj["rowcover"] = _rowcover_dict(rep.rowcover)
    if rep.count is not None:
        obj["count"] = rep.count
        obj["count_method"] = rep.count_method
        obj["ratio"] = _f(rep.ratio)
    if rep.copy_lower_bound is not None:
        obj["copy_lower_bound"] = _f(rep.copy_lower_bound)
    return obj


def cmd_pipeline(args) -> int:
    g = _load_graph(args)
    cfg = supersat.SupersatConfig(eta=args.eta, budget=args.budget)
    rep = supersat.supersat_count(g, args.t, args.pattern, cfg)
    _emit(_pipeline_dict(rep), args)
    return 0


# -- sweep -----------------------------------------------------------------


def _sweep_host(family: str, t: int, m: int, sample: int, seed: int):
    row_seed = (seed * 1_000_003 + m * 101 + sample * 7919) & (2**63 - 1)
    if family == "gnm-balanced":
        n = math.floor(2 * math.sqrt(m)) - t
        return graphs.sample_gnm(n, m, row_seed), row_seed
    if family == "split-t":
        return graphs.split_graph(t, m), row_seed
    if family == "split-t-minus-1-perturbed":
        base = graphs.split_graph(t - 1, m - 1)
        # add one seeded edge between independent vertices
        import random as _random

        rng = _random.Random(row_seed)
        spec = graphs.SplitSpec(t - 1, m - 1)
        lo = spec.k + (1 if spec.r > 0 else 0)
        indep = list(range(lo, base.n))
        if len(indep) < 2:
            raise UsageError("perturbed family needs >= 2 independent vertices")
        u, v = sorted(rng.sample(indep, 2))
        return graphs.Graph.from_edges(base.n, list(base.edges) + [(u, v)]), row_seed
    raise UsageError(f"unknown sweep family {family!r}")


def _estimate_work(family: str, pattern: str, t: int, m: int) -> int:
    if family == "gnm-balanced":
        n = math.floor(2 * math.sqrt(m)) - t
    elif family == "split-t":
        n = graphs.SplitSpec(t, m).n
    else:
        n = graphs.SplitSpec(t - 1, m - 1).n + 1
    if pattern == "ktt":
        return math.comb(max(n, t), t)
    return n * n if t >= 3 else n * (n - 1) // 2


def _sweep_row(family: str, pattern: str, t: int, m: int, sample: int, seed: int):
    g, row_seed = _sweep_host(family, t, m, sample, seed)
    pd = spectra.perron(g)
    thr = spectra.split_lambda(t - 1, m)
    if pattern == "ktt":
        count = homcounts.count_ktt(g, t).value
    else:
        count = homcounts.count_c2t(g, t).value
    sharp = supersat._sharp_constant(t, pattern)
    expected = ""
    if pattern == "ktt" and family == "gnm-balanced":
        try:
            expected = _fs(sidorenko.gnm_expected_ktt(g.n, m, t))
        except sidorenko.SidorenkoError:
            expected = ""
    return (
        family,
        m,
        sample,
        f"{CSV_SCHEMA},{family},{pattern},{t},{m},{sample},{row_seed},{g.n},"
        f"{_fs(pd.lam)},{_fs(thr)},{int(pd.lam > thr + 1e-12)},{count},"
        f"{_fs(count / float(m) ** t)},{_fs(sharp)},{expected}",
    )


def cmd_sweep(args) -> int:
    try:
        start, stop, step = (int(x) for x in args.m_range.split(":"))
    except ValueError:
        raise UsageError("--m-range must be start:stop:step")
    if step <= 0:
        raise UsageError("sweep step must be > 0")
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    ms = list(range(start, stop + 1, step))
    tasks = [
        (fam, args.pattern, args.t, m, s, args.seed)
        for fam in families
        for m in ms
        for s in range(args.samples)
    ]
    work = sum(_estimate_work(fam, pat, t, m) for fam, pat, t, m, _, _ in tasks)
    sys.stderr.write(f"estimated work: {work} elementary steps\n")
    if work > 10**9 and not args.force:
        sys.stderr.write("budget exceeded; re-run with --force\n")
        return 2
    threads = int(os.environ.get("SSLAB_THREADS", "0")) or (os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda a: _sweep_row(*a), tasks))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    lines = [CSV_HEADER] + [r[3] for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- argument parsing ------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sslab")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, t_flag=True):
        sp.add_argument("--in", dest="infile")
        sp.add_argument("--out")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--json", action="store_true", help="JSON output (default)")
        if t_flag:
            sp.add_argument("--t", type=int)

    sp = sub.add_parser("gen")
    common(sp, t_flag=False)
    sp.add_argument("--family", required=True)
    sp.add_argument("--k", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--b", type=int)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("spectral")
    common(sp)
    sp.set_defaults(func=cmd_spectral)

    sp = sub.add_parser("hom")
    common(sp)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--pn", type=int)
    sp.set_defaults(func=cmd_hom)

    sp = sub.add_parser("check")
    common(sp)
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--pn", type=int)
    sp.add_argument("--pattern-file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("prune")
    common(sp)
    sp.add_argument("--eta", type=float)
    sp.set_defaults(func=cmd_prune)

    sp = sub.add_parser("partition")
    common(sp)
    sp.add_argument("--eta", type=float)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("rowcover")
    common(sp)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--a-side")
    sp.add_argument("--d-side")
    sp.set_defaults(func=cmd_rowcover)

    sp = sub.add_parser("regularize")
    common(sp, t_flag=False)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--materialize", action="store_true")
    sp.add_argument("--cap", type=int, default=5000)
    sp.set_defaults(func=cmd_regularize)

    sp = sub.add_parser("pipeline")
    common(sp)
    sp.add_argument("--pattern", required=True, choices=["ktt", "c2t"])
    sp.add_argument("--eta", type=float)
    sp.add_argument("--budget", type=int, default=10**9)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("sweep")
    common(sp)
    sp.add_argument("--pattern", required=True, choices=["ktt", "c2t"])
    sp.add_argument("--m-range", required=True)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--families", default="gnm-balanced")
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        needs_t = args.command in {
            "hom",
            "check",
            "prune",
            "partition",
            "rowcover",
            "pipeline",
            "sweep",
        }
        if needs_t and getattr(args, "t", None) is None:
            if args.command in {"prune", "partition", "rowcover", "pipeline", "sweep"}:
                raise UsageError("--t is required")
        if args.command == "sweep" and args.seed is None:
            raise UsageError("--seed is required for sweep")
        return args.func(args)
    except (UsageError, OSError, graphs.GraphError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (
        spectra.SpectraError,
        homcounts.CountError,
        sidorenko.SidorenkoError,
        regularize.RegularizeError,
        supersat.SupersatError,
    ) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
