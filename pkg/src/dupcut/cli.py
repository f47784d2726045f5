"""``dupcut`` command-line interface.

Every command builds one output document (a dict) and renders it either as
JSON (``--json``) or as ``key: value`` text, so both carry the same values.
Wall-clock timings are left out unless ``--timing`` is given, which keeps
reruns byte-identical.

Exit codes: 0 ok, 1 property failure, 2 parse error, 3 size limit,
4 genome mismatch, 5 I/O error, 6 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .cutgraph import build_H, build_I, element_space, export_dot, f_H, h_table, i_table
from .kernels import available as available_backends
from .labels import LabelSet
from .newick import NewickError
from .sfm import HypergraphCutOracle, LimitExceeded, check_submodular
from .simgen import SimConfig, random_forest_uniform, random_gene_forest, random_species_tree
from .solver import (
    COLLECT_LIMIT,
    EXACT_LIMIT,
    all_optimal_bipartition_partition,
    all_optimal_prefix_partition,
    approx_mdbp,
    edge_in_some_min_cut,
    exact_mdbp,
    exact_mdpp,
    greedy_species_tree,
    vertex_in_some_min_prefix,
)
from .trees import (
    Bipartition,
    GeneForest,
    GenomeMismatchError,
    d1_cost,
    duplication_vertices,
    parse_newick_forest,
    parse_species_tree,
    serialize_newick,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_LIMIT = 3
EXIT_GENOMES = 4
EXIT_IO = 5
EXIT_USAGE = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.format_usage().rstrip()}\nerror: {message}", EXIT_USAGE)


# ---------------------------------------------------------------------------
# helpers


def _read_bytes(path: str) -> bytes:
    try:
        return sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _decode(data: bytes, path: str) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not UTF-8 ({exc.reason} at byte {exc.start})", EXIT_PARSE) from None


def _load_forest(path: str) -> tuple[GeneForest, dict]:
    data = _read_bytes(path)
    text = _decode(data, path)
    try:
        forest = parse_newick_forest(text)
    except NewickError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    return forest, _digest(forest, data, path)


def _digest(forest: GeneForest, data: bytes, path: str | None = None) -> dict:
    out = {
        "bytes": len(data),
        "sha256": hashlib.sha256(data).hexdigest(),
        "trees": len(forest.trees),
        "k": forest.k,
        "m": forest.m,
    }
    if path is not None:
        out = {"path": path, **out}
    return out


def _names(forest: GeneForest, labels: LabelSet) -> list[str]:
    return forest.genomes.names_of(labels)


def _bip(forest: GeneForest, b: Bipartition) -> dict:
    left, right = b.describe(forest.genomes)
    return {"left": left, "right": right}


def _write_text(path: str, text: str, stdout=None) -> None:
    try:
        if path == "-":
            (stdout or sys.stdout).write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _render_text(doc: dict) -> str:
    lines: list[str] = []

    def emit(prefix: str, value) -> None:
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
            if not value:
                lines.append(f"{prefix}: []")
            for i, v in enumerate(value):
                emit(f"{prefix}[{i}]", v)
        elif isinstance(value, list):
            lines.append(f"{prefix}: {' '.join(str(v) for v in value) if value else '[]'}")
        elif value is None:
            lines.append(f"{prefix}: -")
        elif isinstance(value, bool):
            lines.append(f"{prefix}: {'yes' if value else 'no'}")
        else:
            lines.append(f"{prefix}: {value}")

    emit("", doc)
    return "\n".join(lines) + "\n"


def render(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return _render_text(doc)


# ---------------------------------------------------------------------------
# commands; each returns (input digest or None, result payload, exit code)


def cmd_approx(args):
    forest, digest = _load_forest(args.input)
    _need_two(forest)
    res = approx_mdbp(forest, certify=args.certify, limit=args.limit, threads=args.threads)
    result = {
        "bipartition": _bip(forest, res.bipartition),
        "relaxed_value": res.relaxed_value,
        "realized_cost": res.realized_cost,
        "evaluations": res.evaluations,
        "disconnected": res.disconnected,
    }
    code = EXIT_OK
    if args.certify:
        d = res.bound_certificate
        result["certificate"] = {
            "exact_cost": d,
            "bound_2d_plus_1": 2 * d + 1,
            "bound_2d_plus_1_holds": res.bound_holds(),
            "spanning_trees": res.spanning_trees,
            "forest_bound": 2 * d + res.spanning_trees,
            "forest_bound_holds": res.forest_bound_holds(),
            "exact_le_realized": d <= res.realized_cost,
        }
        if not (res.forest_bound_holds() and d <= res.realized_cost):
            code = EXIT_PROPERTY
    return digest, result, code


def cmd_exact(args):
    forest, digest = _load_forest(args.input)
    _need_two(forest)
    res = exact_mdbp(forest, collect_all=args.all, limit=args.limit, collect_limit=args.collect_limit, threads=args.threads)
    result = {
        "bipartition": _bip(forest, res.bipartition),
        "cost": res.cost,
        "evaluations": res.evaluations,
    }
    if res.optimal_cuts is not None:
        result["optimal_cuts"] = [_bip(forest, b) for b in res.optimal_cuts]
    return digest, result, EXIT_OK


def cmd_mdpp(args):
    forest, digest = _load_forest(args.input)
    _need_two(forest)
    res = exact_mdpp(forest)
    result = {
        "size": res.size,
        "prefix": sorted(res.prefix.vertices),
        "partition": res.induced_partition.named(forest.genomes),
    }
    return digest, result, EXIT_OK


def cmd_partition(args):
    forest, digest = _load_forest(args.input)
    _need_two(forest)
    pb = all_optimal_bipartition_partition(forest, limit=args.limit, collect_limit=args.collect_limit, threads=args.threads)
    pp = all_optimal_prefix_partition(forest)
    equal = pb == pp
    result = {"PB": pb.named(forest.genomes), "PP": pp.named(forest.genomes), "equal": equal}
    return digest, result, EXIT_OK if equal else EXIT_PROPERTY


def cmd_decide(args):
    forest, digest = _load_forest(args.input)
    _need_two(forest)
    try:
        if args.edge:
            u_name, v_name, label = args.edge
            try:
                u, v = forest.genomes.index[u_name], forest.genomes.index[v_name]
                label = int(label)
            except (KeyError, ValueError):
                raise CliError(f"bad edge {args.edge!r}: expected two genome names and a vertex label", EXIT_USAGE)
            answer = edge_in_some_min_cut(forest, u, v, label, limit=args.limit, collect_limit=args.collect_limit, threads=args.threads)
            result = {"problem": "edge", "edge": [u_name, v_name, label], "in_some_minimum_cut": answer}
        else:
            answer = vertex_in_some_min_prefix(forest, args.vertex)
            result = {"problem": "vertex", "vertex": args.vertex, "in_some_minimum_prefix": answer}
    except (KeyError, ValueError) as exc:
        if isinstance(exc, LimitExceeded):
            raise
        raise CliError(str(exc).strip("'\""), EXIT_USAGE) from None
    return digest, result, EXIT_OK


def cmd_dupcost(args):
    forest, digest = _load_forest(args.forest)
    data = _read_bytes(args.species)
    try:
        species = parse_species_tree(_decode(data, args.species))
    except NewickError as exc:
        raise CliError(f"{args.species}: {exc}", EXIT_PARSE) from None
    except ValueError as exc:
        raise CliError(f"{args.species}: {exc}", EXIT_PARSE) from None
    try:
        dups = duplication_vertices(forest, species)
    except GenomeMismatchError as exc:
        raise CliError(str(exc), EXIT_GENOMES) from None
    result = {"species": serialize_newick(species), "duplications": len(dups), "duplication_vertices": dups}
    return digest, result, EXIT_OK


def cmd_greedy(args):
    forest, digest = _load_forest(args.input)
    res = greedy_species_tree(forest, method=args.method, limit=args.limit, threads=args.threads)
    steps = []
    for s in res.steps:
        steps.append({
            "genomes": list(s.genomes),
            "left": list(s.left),
            "right": list(s.right),
            "cost": s.cost,
            "relaxed_value": s.relaxed_value,
            "flags": list(s.flags),
        })
    result = {
        "species_tree": serialize_newick(res.species),
        "total_duplications": res.total_duplications,
        "unconstrained_steps": len(res.unconstrained),
        "steps": steps,
    }
    return digest, result, EXIT_OK


def cmd_graph(args):
    forest, digest = _load_forest(args.input)
    g = build_H(forest) if args.which == "H" else build_I(forest)
    result = {
        "graph": args.which,
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "distinct_pairs": len({(e.u, e.v) for e in g.edges}),
        "labels": len(g.labels),
    }
    if args.dot:
        _write_text(args.dot, export_dot(g, forest.genomes, graph_name=args.which), args.stdout)
        result["dot"] = args.dot
    return digest, result, EXIT_OK


def cmd_gen(args):
    if args.mode == "uniform":
        if args.p_dup is not None or args.p_loss is not None or args.species_out:
            raise CliError("--p-dup/--p-loss/--species-out apply to --mode sim only", EXIT_USAGE)
        if args.leaves is None:
            raise CliError("--mode uniform needs --leaves", EXIT_USAGE)
        try:
            forest = random_forest_uniform(args.k, args.trees, args.leaves, args.seed)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        report = {"trees": len(forest.trees)}
        species_text = None
    else:
        if args.leaves is not None:
            raise CliError("--leaves applies to --mode uniform only", EXIT_USAGE)
        try:
            cfg = SimConfig(args.k, args.trees, args.p_dup or 0.0, args.p_loss or 0.0, args.seed)
            species = random_species_tree(args.k, args.seed)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        forest, rep = random_gene_forest(species, cfg)
        species_text = serialize_newick(species)
        report = {
            "surviving_families": rep.surviving_families,
            "dropped_families": rep.dropped_families,
            "planted_root_duplications": list(rep.planted_root_duplications),
        }
    forest_text = serialize_newick(forest) + "\n" if forest.trees else ""
    if args.out:
        _write_text(args.out, forest_text, args.stdout)
    if args.species_out and species_text is not None:
        _write_text(args.species_out, species_text + "\n", args.stdout)
    data = forest_text.encode()
    result = {"mode": args.mode, "seed": args.seed, "report": report}
    if species_text is not None:
        result["species_tree"] = species_text
    if not args.out:
        result["forest"] = forest_text.splitlines()
    digest = _digest(forest, data) if forest.trees else {"bytes": 0, "trees": 0, "k": 0, "m": 0}
    result["forest_digest"] = digest
    if args.report_out:
        _write_text(args.report_out, render(result, True), args.stdout)
    return None, result, EXIT_OK


# -- check


def _instance_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def _random_instances(count: int, seed: int, max_k: int):
    for i in range(count):
        s = _instance_seed(seed, i)
        rng = np.random.default_rng(s)
        k = int(rng.integers(2, max_k + 1))
        trees = int(rng.integers(1, 7))
        leaves = int(rng.integers(2, 9))
        yield f"random[{i}]", random_forest_uniform(k, trees, leaves, s), s


def _check_instance(forest: GeneForest, seed: int, samples: int, limit: int) -> dict[str, object]:
    """Run the invariant suite on one forest; each value is True or a failure note."""
    out: dict[str, object] = {}
    space = element_space(forest)
    if space.n < 2:
        return out
    if space.n <= limit:
        ok = True
        for j in range((1 << (space.n - 1)) - 1):
            left = space.decode(1 | (j << 1))
            b = Bipartition.from_left(left, forest.ground)
            if f_H(forest, left) != d1_cost(forest, b):
                ok = f"f_H != d1 on left side {_names(forest, left)}"
                break
        out["f_H_d1_equivalence"] = ok
    oracle = HypergraphCutOracle.from_table(i_table(forest)[0])
    viol = check_submodular(oracle, samples, seed)
    out["f_I_submodular"] = True if not viol else f"{len(viol)} violations"
    if space.n <= limit:
        exact = exact_mdbp(forest, limit=limit)
        mdpp = exact_mdpp(forest)
        out["cut_prefix_duality"] = True if mdpp.size == exact.cost else f"prefix {mdpp.size} != cut {exact.cost}"
        approx = approx_mdbp(forest)
        d, c, r = exact.cost, approx.relaxed_value, approx.realized_cost
        t = sum(1 for tr in forest.trees if len(tr.labels) >= 2)
        ok = d <= r <= c <= 2 * d + t
        if t == 1:
            ok = ok and c <= 2 * d + 1
        out["approximation_bound"] = True if ok else f"d={d} realized={r} relaxed={c} spanning_trees={t}"
        out["exceeds_2d_plus_1"] = c > 2 * d + 1 or r > 2 * d + 1
        if space.n <= COLLECT_LIMIT:
            pb = all_optimal_bipartition_partition(forest, limit=limit)
            pp = all_optimal_prefix_partition(forest)
            out["pb_equals_pp"] = True if pb == pp else "PB != PP"
    return out


def _counterexample() -> dict:
    forest = parse_newick_forest("((a,b),(c,d));")
    g = forest.genomes
    a, b = g.ids("ac"), g.ids("ab")
    oracle = HypergraphCutOracle.from_table(h_table(forest)[0])
    space = element_space(forest)
    viol = check_submodular(oracle, 1, 0, pairs=[(space.encode(a), space.encode(b))])
    forced = [v for v in viol if (v.a, v.b) == (space.encode(a), space.encode(b))]
    values = {
        "f(A)": f_H(forest, a),
        "f(B)": f_H(forest, b),
        "f(A|B)": f_H(forest, a | b),
        "f(A&B)": f_H(forest, a & b),
    }
    return {
        "forest": "((a,b),(c,d));",
        "A": ["a", "c"],
        "B": ["a", "b"],
        "values": values,
        "deficit": forced[0].deficit if forced else 0,
        "reproduced": bool(forced) and forced[0].deficit == 1,
    }


def cmd_check(args):
    if args.input is None and args.random is None:
        raise CliError("check needs an input file or --random N", EXIT_USAGE)
    if args.input is not None and args.random is not None:
        raise CliError("give either an input file or --random N, not both", EXIT_USAGE)
    if args.input is not None:
        data = _read_bytes(args.input)
        text = _decode(data, args.input)
        if not text.strip():
            raise CliError(f"{args.input}: empty input", EXIT_USAGE)
        try:
            forest = parse_newick_forest(text)
        except NewickError as exc:
            raise CliError(f"{args.input}: {exc}", EXIT_PARSE) from None
        digest = _digest(forest, data, args.input)
        instances = [(args.input, forest, args.seed)]
    else:
        if args.random < 1 or args.max_k < 2:
            raise CliError("--random must be >= 1 and --max-k >= 2", EXIT_USAGE)
        digest = None
        instances = list(_random_instances(args.random, args.seed, args.max_k))
    passed: dict[str, int] = {}
    failures = []
    exceed = 0
    for name, forest, seed in instances:
        for prop, outcome in _check_instance(forest, seed, args.samples, args.limit).items():
            if prop == "exceeds_2d_plus_1":
                exceed += bool(outcome)
                continue
            if outcome is True:
                passed[prop] = passed.get(prop, 0) + 1
            else:
                failures.append({"instance": name, "property": prop, "detail": outcome})
    cx = _counterexample()
    if not cx["reproduced"]:
        failures.append({"instance": "counterexample", "property": "f_H_violation", "detail": "not reproduced"})
    result = {
        "instances": len(instances),
        "passed": dict(sorted(passed.items())),
        "failures": failures,
        "multi_tree_instances_exceeding_2d_plus_1": exceed,
        "f_H_counterexample": cx,
        "ok": not failures,
    }
    return digest, result, EXIT_OK if not failures else EXIT_PROPERTY


# -- bench


def cmd_bench(args):
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise CliError(f"bad --sizes {args.sizes!r}", EXIT_USAGE) from None
    if not sizes or min(sizes) < 2:
        raise CliError("--sizes needs integers >= 2", EXIT_USAGE)
    if max(sizes) > min(args.limit, 22):
        raise CliError(f"size {max(sizes)} exceeds the exact limit {args.limit}", EXIT_LIMIT)
    rows = []
    for k in sizes:
        for rep in range(args.per_size):
            s = _instance_seed(args.seed, k * 1000 + rep)
            forest = random_forest_uniform(k, args.trees, args.leaves, s)
            text = serialize_newick(forest)
            if forest.k < 2:
                continue
            t0 = time.perf_counter()
            approx = approx_mdbp(forest)
            t1 = time.perf_counter()
            exact = exact_mdbp(forest, limit=args.limit, threads=args.threads)
            t2 = time.perf_counter()
            n = forest.k
            row = {
                "k": n,
                "digest": hashlib.sha256(text.encode()).hexdigest()[:16],
                "approx_evaluations": approx.evaluations,
                "evaluation_budget": 4 * n**3 + 4 * n**2,
                "within_budget": approx.evaluations <= 4 * n**3 + 4 * n**2,
                "exact_evaluations": exact.evaluations,
                "relaxed_value": approx.relaxed_value,
                "realized_cost": approx.realized_cost,
                "exact_cost": exact.cost,
                "ratio": round(approx.realized_cost / max(1, exact.cost), 6),
            }
            if args.timing:
                row["approx_ms"] = round((t1 - t0) * 1000, 3)
                row["exact_ms"] = round((t2 - t1) * 1000, 3)
            rows.append(row)
    # growth is judged on exact evaluation counts, which are reproducible
    per_size = []
    for k in sorted({r["k"] for r in rows}):
        mine = [r for r in rows if r["k"] == k]
        entry = {"k": k, "instances": len(mine),
                 "mean_exact_evaluations": round(sum(r["exact_evaluations"] for r in mine) / len(mine), 3)}
        if args.timing:
            entry["mean_exact_ms"] = round(sum(r["exact_ms"] for r in mine) / len(mine), 3)
        per_size.append(entry)
    means = [e["mean_exact_evaluations"] for e in per_size]
    result = {
        "backends": available_backends(),
        "instances": rows,
        "sizes": per_size,
        "exact_growth_monotone": all(a < b for a, b in zip(means, means[1:])),
    }
    code = EXIT_OK if all(r["within_budget"] for r in rows) else EXIT_PROPERTY
    return None, result, code


def _need_two(forest: GeneForest) -> None:
    if forest.k < 2:
        raise CliError(f"forest has {forest.k} genome(s); at least two are needed", EXIT_USAGE)


# ---------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    # a fresh parent per subcommand: parent actions are shared objects, so
    # per-command defaults would otherwise leak between commands
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the structured JSON document")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing (not reproducible)")
    common.add_argument("--threads", type=int, default=1, help="workers for exact enumerations")
    common.add_argument("--limit", type=int, default=EXACT_LIMIT, help="max genomes for exact enumeration")
    common.add_argument("--collect-limit", type=int, default=COLLECT_LIMIT,
                        help="max genomes when collecting all optimal bipartitions")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dupcut", description="Minimum-duplication first speciation toolkit.")
    parser.add_argument("--version", action="version", version=f"dupcut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("approx", parents=[_common()], help="approximate bipartition via the submodular relaxation")
    p.add_argument("input")
    p.add_argument("--certify", action="store_true", help="also solve exactly and check the bound")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("exact", parents=[_common()], help="exact minimum-duplication bipartition")
    p.add_argument("input")
    p.add_argument("--all", action="store_true", help="list every optimal bipartition")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("mdpp", parents=[_common()], help="minimum prefix splitting H(F)")
    p.add_argument("input")
    p.set_defaults(func=cmd_mdpp)

    p = sub.add_parser("partition", parents=[_common()], help="meet partitions PB(F) and PP(F)")
    p.add_argument("input")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("decide", parents=[_common()], help="edge / vertex decision problems")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--edge", nargs=3, metavar=("U", "V", "LABEL"))
    g.add_argument("--vertex", type=int, metavar="LABEL")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("dupcost", parents=[_common()], help="duplication cost against a species tree")
    p.add_argument("forest")
    p.add_argument("species")
    p.set_defaults(func=cmd_dupcost)

    p = sub.add_parser("greedy", parents=[_common()], help="greedy species tree by recursive first speciations")
    p.add_argument("input")
    p.add_argument("--method", choices=("approx", "exact"), default="approx")
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("graph", parents=[_common()], help="H(F) / I(F) statistics and DOT export")
    p.add_argument("input")
    p.add_argument("--which", choices=("H", "I"), default="H")
    p.add_argument("--dot", metavar="OUT", help="write DOT here ('-' for stdout)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("gen", parents=[_common()], help="generate random forests")
    p.add_argument("--mode", choices=("sim", "uniform"), default="sim")
    p.add_argument("--k", type=int, required=True, help="number of genomes")
    p.add_argument("--trees", type=int, default=10, help="families (sim) or trees (uniform)")
    p.add_argument("--leaves", type=int, help="leaves per tree (uniform)")
    p.add_argument("--p-dup", type=float, help="per-branch duplication probability (sim)")
    p.add_argument("--p-loss", type=float, help="per-branch loss probability (sim)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="forest Newick output path")
    p.add_argument("--species-out", help="species tree output path (sim)")
    p.add_argument("--report-out", help="JSON report output path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[_common()], help="run the invariant suite")
    p.add_argument("input", nargs="?")
    p.add_argument("--random", type=int, metavar="N", help="check N generated forests instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--samples", type=int, default=2000, help="random pairs per submodularity audit")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", parents=[_common()], help="approximate vs exact timing and evaluation counts")
    p.add_argument("--sizes", default="6,8,10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-size", type=int, default=3)
    p.add_argument("--trees", type=int, default=5)
    p.add_argument("--leaves", type=int, default=8)
    p.add_argument("--no-timing", dest="timing", action="store_false",
                   help="omit timings so reruns are byte-identical")
    p.set_defaults(func=cmd_bench, timing=True)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.stdout = stdout
        if args.threads < 1:
            raise CliError("--threads must be >= 1", EXIT_USAGE)
        t0 = time.perf_counter()
        digest, result, code = args.func(args)
        elapsed = (time.perf_counter() - t0) * 1000
    except CliError as exc:
        print(f"dupcut: {exc}", file=stderr)
        return exc.code
    except LimitExceeded as exc:
        print(f"dupcut: {exc}", file=stderr)
        return EXIT_LIMIT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    doc = {
        "tool": "dupcut",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "command": args.command,
        # --json only picks the rendering, so both renderings echo the same argv
        "argv": [a for a in argv if a != "--json"],
    }
    if digest is not None:
        doc["input"] = digest
    doc["result"] = result
    if args.timing:
        doc["timing_ms"] = round(elapsed, 3)
    stdout.write(render(doc, args.json))
    return code


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
