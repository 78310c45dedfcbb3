"""Command-line interface.

Words use lowercase letters for generators and uppercase for their
inverses; ``1`` is the identity.  Subgroups are comma-separated generator
lists, systems are ``;``-separated subgroups, and endomorphisms are either
JSON files or comma-separated image lists such as ``a,ab``.  JSON paths
that do not exist are looked up by file name in the bundled corpus.

Exit status: 0 success, 1 a property or verification failed, 2 bad usage
or input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import constructions, factor_systems, fixed_points, morphisms, stallings
from .constructions import ConstructionError, DecompositionCertificate, MainconnexCase
from .factor_systems import FreeFactorSystem
from .fixed_points import FixedSearchBudget
from .morphisms import Endomorphism, MorphismError
from .stallings import PreconditionError, basis_of, fold, rank_of
from .words import Word, WordError, cyclic_reduce, parse_letters, root

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(ValueError):
    pass


class Outcome:
    """What a subcommand produced: a JSON-able object, its text rendering and the exit code."""

    def __init__(self, data, text: str | list[str], code: int = EXIT_OK):
        self.data = data
        self.text = text if isinstance(text, str) else "\n".join(text)
        self.code = code


# --- input parsing ---------------------------------------------------------------------


def corpus_dir() -> Path:
    return Path(str(resources.files("freefix") / "corpus"))


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = corpus_dir() / p.name
    if bundled.exists():
        return bundled
    raise InputError(f"no such file: {path}")


def read_json(path: str) -> dict:
    with open(resolve(path)) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from None


def _max_letter(texts) -> int:
    return max((abs(x) for t in texts for x in parse_letters(t)), default=0)


def infer_rank(args, *texts) -> int:
    if getattr(args, "rank", None):
        return args.rank
    return max(_max_letter(texts), 1)


def split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def load_map(spec: str) -> tuple[Endomorphism, dict]:
    """Endomorphism from a JSON file or an inline image list; also returns the file's data."""
    if spec.endswith(".json"):
        data = read_json(spec)
        return Endomorphism.from_json(data), data
    images = split_list(spec)
    if not images:
        raise InputError("empty image list")
    return Endomorphism.parse(images), {}


def budget_of(args, data: dict | None = None, default_len: int = 12) -> FixedSearchBudget:
    """Flags override the corpus budget, which overrides the defaults."""
    stored = (data or {}).get("budget", {})
    max_len = args.max_len if args.max_len is not None else stored.get("max_len", default_len)
    cap = args.disp_cap if args.disp_cap is not None else stored.get("displacement_cap")
    eig = args.eig_len if args.eig_len is not None else stored.get("eigenvalue_len", 2)
    return FixedSearchBudget(int(max_len), cap, int(eig))


def words(texts, rank: int) -> list[Word]:
    return [Word.parse(t, rank) for t in texts]


def parse_system(text: str, rank: int) -> FreeFactorSystem:
    if text.endswith(".json"):
        return FreeFactorSystem.from_json(read_json(text))
    classes = [split_list(part) for part in text.split(";") if part.strip()]
    return FreeFactorSystem.from_generators(rank, classes)


def progress_printer(label: str):
    def report(done: int, total: int) -> None:
        if done == total or done % 25 == 0:
            print(f"[{label}] {done}/{total}", file=sys.stderr, flush=True)
    return report


def gens_str(g) -> list[str]:
    return [str(b) for b in basis_of(g)]


def angle(ws) -> str:
    return "<" + ", ".join(str(w) for w in ws) + ">"


# --- word and graph commands -------------------------------------------------------------


def cmd_reduce(args) -> Outcome:
    rank = infer_rank(args, args.word)
    w = Word.parse(args.word, rank)
    core, conj = cyclic_reduce(w)
    r, k = root(w) if not w.is_identity() else (w, 1)
    data = {"word": str(w), "length": len(w), "cyclic_core": str(core), "conjugator": str(conj),
            "root": str(r), "exponent": k}
    return Outcome(data, [f"{w}", f"cyclic core {core} conjugated by {conj}", f"root {r}^{k}"])


def cmd_fold(args) -> Outcome:
    gens = split_list(args.generators)
    rank = infer_rank(args, *gens)
    g = fold(words(gens, rank), rank)
    if args.dot:
        return Outcome(g.to_json(), g.to_dot())
    data = {"rank": rank, "subgroup_rank": rank_of(g), "vertices": g.n_vertices, "basis": gens_str(g),
            "graph": g.to_json()}
    return Outcome(data, [f"{g.n_vertices} vertices, {g.n_edges} edges, rank {rank_of(g)}",
                          f"basis {angle(basis_of(g))}"])


def cmd_member(args) -> Outcome:
    gens = split_list(args.generators)
    rank = infer_rank(args, args.word, *gens)
    g = fold(words(gens, rank), rank)
    w = Word.parse(args.word, rank)
    ok, spelled = stallings.member(g, w, spell=True)
    data = {"word": str(w), "member": ok}
    text = f"{w} {'is' if ok else 'is not'} in {angle(gens)}"
    if ok:
        data["spelling"] = str(spelled)
        text += f" (spelled {spelled} in the basis {angle(basis_of(g))})"
    return Outcome(data, text, EXIT_OK if ok else EXIT_FAIL)


def cmd_intersect(args) -> Outcome:
    g1, g2 = split_list(args.first), split_list(args.second)
    rank = infer_rank(args, *g1, *g2)
    h, k = fold(words(g1, rank), rank), fold(words(g2, rank), rank)
    comps = stallings.pullback(h, k)
    based = stallings.intersection(h, k)
    others = [{"conjugator": str(c.coset_witness), "rank": c.rank, "generators": gens_str(c.graph)}
              for c in comps if not c.based and c.rank > 0]
    data = {"intersection": gens_str(based), "rank": rank_of(based), "conjugate_intersections": others}
    lines = [f"H ∩ K = {angle(basis_of(based))} (rank {rank_of(based)})"]
    for o in others:
        lines.append(f"  with conjugator {o['conjugator']}: {angle(o['generators'])}")
    return Outcome(data, lines)


def cmd_apply(args) -> Outcome:
    f, _ = load_map(args.map)
    w = Word.parse(args.word, f.rank)
    out = morphisms.apply(f, w)
    return Outcome({"word": str(w), "image": str(out)}, str(out))


def cmd_invert_auto(args) -> Outcome:
    f, _ = load_map(args.map)
    if not morphisms.is_automorphism(f):
        return Outcome({"automorphism": False}, f"{f} is not an automorphism", EXIT_FAIL)
    g = morphisms.invert_automorphism(f)
    return Outcome({"automorphism": True, "inverse": g.to_json()}, ", ".join(g.to_json()["images"]))


# --- fixed subgroups and eigengroups --------------------------------------------------------


def cmd_fix(args) -> Outcome:
    f, data = load_map(args.map)
    budget = budget_of(args, data)
    g, verdict = fixed_points.fixed_subgroup(f, budget)
    d = verdict.details
    print(f"[fix] {d['nodes']} prefixes, {d['states']} displacements, {d['pruned']} pruned",
          file=sys.stderr, flush=True)
    out = {"map": f.to_json(), "fix": gens_str(g), "rank": rank_of(g), "verdict": verdict.verdict,
           "budget": budget.to_json(), "cap": d["cap"], "graph": g.to_json()}
    code = EXIT_OK
    lines = [f"Fix = {angle(basis_of(g)) if rank_of(g) else '1'}", f"rank {rank_of(g)}, {verdict.verdict}",
             f"budget max_len={budget.max_len} displacement_cap={d['cap']}"]
    if "expected_fix" in data:
        expected = fold(words(data["expected_fix"], f.rank), f.rank)
        match = expected == g
        out["matches_expected"] = match
        lines.append(f"expected {angle(data['expected_fix']) if data['expected_fix'] else '1'}: "
                     f"{'match' if match else 'MISMATCH'}")
        code = EXIT_OK if match else EXIT_FAIL
    return Outcome(out, lines, code)


def cmd_eigengroups(args) -> Outcome:
    f, data = load_map(args.map)
    budget = budget_of(args, data, default_len=8)
    records = fixed_points.eigengroup_scan(f, budget, progress_printer("eigengroups"))
    lines = [f"{len(records)} eigengroups, eigenvalues up to length {budget.eigenvalue_len}"]
    for rec in records:
        lines.append(f"  y = {rec.eigenvalue}: rank {rec.rank} {angle(basis_of(rec.fixed_graph))} ({rec.status})")
    return Outcome({"budget": budget.to_json(), "eigengroups": [r.to_json() for r in records]}, lines)


def cmd_isogredience(args) -> Outcome:
    f, data = load_map(args.map)
    budget = budget_of(args, data, default_len=8)
    records = fixed_points.eigengroup_scan(f, budget, progress_printer("eigengroups"))
    part = fixed_points.isogredience_partition(records, f)
    lines = [f"{len(part.classes)} non-cyclic isogredience classes"]
    for i, cls in enumerate(part.classes):
        rep = cls.representative
        lines.append(f"  class {i}: rank {rep.rank}, representative y = {rep.eigenvalue}")
        for rec, c in cls.members:
            lines.append(f"    y = {rec.eigenvalue} via c = {c}")
    lines.append(f"{len(part.cyclic)} cyclic eigengroups left unclassified")
    return Outcome({"budget": budget.to_json(), **part.to_json()}, lines)


def cmd_bh_check(args) -> Outcome:
    f, data = load_map(args.map)
    budget = budget_of(args, data, default_len=8)
    rep = fixed_points.bh_report(f, budget, progress_printer("eigengroups"))
    lines = [f"rank(F) = {rep.rank}, rank(Fix) = {rep.fix_rank}, non-cyclic class ranks {rep.class_ranks}",
             "OK" if rep.ok else "VIOLATIONS: " + "; ".join(rep.violations)]
    return Outcome(rep.to_json(), lines, EXIT_OK if rep.ok else EXIT_FAIL)


# --- subgroup property checks ----------------------------------------------------------------


def cmd_check(args) -> Outcome:
    gens = split_list(args.generators)
    extra = [args.h] + split_list(args.conjugators) if args.check == "coset-bound" else []
    rank = infer_rank(args, *gens, *extra)
    g = fold(words(gens, rank), rank)
    if args.check == "pure":
        v = stallings.purity_check(g, args.bound)
        ok = v.verdict != "impure"
        text = f"{v.verdict} (bound {args.bound})" + ("" if ok else f": root {v.witness}")
        return Outcome(v.to_json(), text, EXIT_OK if ok else EXIT_FAIL)
    if args.check == "inert":
        seed = args.seed if args.seed is not None else 0
        rep = stallings.inertia_sample(g, args.trials, args.gen_len, seed)
        text = f"{len(rep.violations)} violations of r(H ∩ K) <= r(K) in {args.trials} samples (seed {seed})"
        return Outcome(rep.to_json(), text, EXIT_OK if rep.ok else EXIT_FAIL)
    h = Word.parse(args.h, rank)
    us = words(split_list(args.conjugators), rank)
    ok = stallings.coset_displacement_check(g, h, us)
    dists = {str(u): stallings.coset_distance(g, u) for u in us}
    return Outcome({"ok": ok, "distances": dists, "half_length": len(h) / 2},
                   f"{'ok' if ok else 'FAIL'}: distances {dists}, bound {len(h) / 2}", EXIT_OK if ok else EXIT_FAIL)


# --- free factor systems -----------------------------------------------------------------------


def _ffs_rank(args, *texts) -> int:
    if args.rank:
        return args.rank
    letters = [t for text in texts if not text.endswith(".json") for t in text.replace(";", ",").split(",")]
    return max(_max_letter(letters), 1)


def cmd_ffs(args) -> Outcome:
    op = args.op
    if op == "cx":
        rank = _ffs_rank(args, args.system)
        s = parse_system(args.system, rank)
        cx = factor_systems.complexity_of(s)
        return Outcome({"system": s.to_json(), "cx": list(cx)}, f"cx = ({factor_systems.format_cx(cx)})")
    if op in ("leq", "wedge"):
        rank = _ffs_rank(args, args.first, args.second)
        s1, s2 = parse_system(args.first, rank), parse_system(args.second, rank)
        if op == "leq":
            ok = factor_systems.system_leq(s1, s2)
            c = factor_systems.cx_compare(factor_systems.complexity_of(s1), factor_systems.complexity_of(s2))
            return Outcome({"leq": ok, "cx_compare": c}, f"{'yes' if ok else 'no'} (cx comparison {c})",
                           EXIT_OK if ok else EXIT_FAIL)
        w = factor_systems.wedge(s1, s2)
        return Outcome({"wedge": w.to_json(), "cx": list(factor_systems.complexity_of(w))}, repr(w))
    if op == "invariant":
        f, _ = load_map(args.map)
        s = parse_system(args.system, f.rank)
        ok = factor_systems.invariant_check(s, f)
        return Outcome({"invariant": ok}, "invariant" if ok else "not invariant", EXIT_OK if ok else EXIT_FAIL)
    gens = split_list(args.generators)
    rank = infer_rank(args, *gens)
    v = factor_systems.free_factor_test(fold(words(gens, rank), rank), args.depth)
    data = v.to_json()
    if v.witness is not None:
        data["witness"] = v.witness.to_json()
    text = v.verdict + (f" via {v.witness}" if v.witness is not None else "") \
        + (f" ({v.details['reason']})" if "reason" in v.details else "")
    return Outcome(data, text, EXIT_FAIL if v.verdict == "NO" else EXIT_OK)


# --- constructions -------------------------------------------------------------------------------


def cmd_construct(args) -> Outcome:
    f, _ = load_map(args.map)
    if args.kind == "extend":
        extra = split_list(args.extra) if args.extra else None
        g = constructions.extend_trivially(f, args.n, extra)
    elif args.kind == "product":
        g2, _ = load_map(args.other)
        g = constructions.free_product_auto(f, g2)
    elif args.kind == "stable":
        g = constructions.stable_letter_extend(f, args.h, args.h_prime, args.r)
    else:
        budget = budget_of(args, None, default_len=10)
        rows = constructions.find_good_r(f, args.h, args.h_prime, range(args.r_min, args.r_max + 1), budget)
        lines = [f"r = {row.r:+d}: {'good' if row.good else 'bad'} ({row.verdict})"
                 + (" degenerate h' h^r = 1" if row.degenerate else "") + f"  Fix {angle(row.fix_generators)}"
                 for row in rows]
        return Outcome({"budget": budget.to_json(), "r": [row.to_json() for row in rows]}, lines)
    return Outcome(g.to_json(), ", ".join(g.to_json()["images"]))


# --- verifiers ---------------------------------------------------------------------------------


def _report(rep: constructions.Report) -> Outcome:
    code = EXIT_OK if rep.status in ("PASS", "VACUOUS") else EXIT_FAIL
    return Outcome(rep.to_json(), rep.render(), code)


def cmd_verify(args) -> Outcome:
    f, data = load_map(args.map)
    if args.kind == "mainconnex":
        case = MainconnexCase.from_json(read_json(args.case))
        return _report(constructions.verify_mainconnex(f, case, budget_of(args, data)))
    if args.kind == "cormain":
        cert = DecompositionCertificate.from_json(read_json(args.cert))
        return _report(constructions.verify_cormain(f, cert, budget_of(args, data)))
    if args.kind == "collins-turner":
        rep = constructions.collins_turner_check(f, split_list(args.H), args.y, args.h, args.r,
                                                 budget_of(args, data))
        return _report(rep)
    hg = fold(words(split_list(args.H), f.rank), f.rank)
    res = constructions.imagey_solve(f, hg, Word.parse(args.y, f.rank), Word.parse(args.h, f.rank),
                                     assume_fixed=args.assume_fixed)
    text = f"{res.status}" + (f": h' = {res.h_prime}" if res.h_prime is not None else "") \
        + (f" ({res.reason})" if res.reason else "")
    return Outcome(res.to_json(), text, EXIT_OK if res.status == "solved" else EXIT_FAIL)


# --- corpus ------------------------------------------------------------------------------------


def corpus_checks(directory: Path, args):
    """Yield ``(name, ok, detail)`` for every bundled example and construction round-trip."""

    def entry(name):
        with open(directory / name) as fh:
            data = json.load(fh)
        return Endomorphism.from_json(data), data

    def fix_check(name):
        f, data = entry(name)
        budget = budget_of(args, data)
        g, v = fixed_points.fixed_subgroup(f, budget)
        expected = fold(words(data["expected_fix"], f.rank), f.rank)
        return g == expected and (rank_of(g) == 0 or v.verdict == "bounded-complete"), \
            f"Fix = {angle(gens_str(g)) if rank_of(g) else '1'} ({v.verdict})"

    for name in ("ex1.json", "ex1_abcde.json", "ex1_abcd.json", "ex1_ab.json", "ex1_cd.json",
                 "ex2.json", "inversion.json"):
        yield (f"fix {name}", *fix_check(name))

    f5, _ = entry("ex1_abcde.json")
    m = morphisms.ab_matrix(f5)
    shifted = [[m[i][j] - (i == j) for j in range(5)] for i in range(5)]
    sol = morphisms.ab_solve(shifted, [0, 1, 0, 0, 0])
    yield ("abelianized b outside the image of M - I", sol is None, f"solution {sol}")

    for mapfile, casefile in (("ex1.json", "ex1.case_i.json"), ("ex1_abcde.json", "ex1_abcde.case_iii.json"),
                              ("ex1_abcd.json", "ex1_abcd.case_ii.json"), ("ex1_ab.json", "ex1_ab.case_iii.json")):
        f, data = entry(mapfile)
        case = MainconnexCase.from_json(json.loads((directory / casefile).read_text()))
        rep = constructions.verify_mainconnex(f, case, budget_of(args, data))
        yield (f"mainconnex {casefile}", rep.passed, rep.status)

    for mapfile, certfile in (("ex1.json", "ex1.cert.json"), ("ex2.json", "ex2.cert.json")):
        f, data = entry(mapfile)
        cert = DecompositionCertificate.from_json(json.loads((directory / certfile).read_text()))
        rep = constructions.verify_cormain(f, cert, budget_of(args, data))
        yield (f"cormain {certfile}", rep.passed, rep.status)
        if mapfile == "ex2.json":
            ys = words(cert.y_letters, f.rank)
            unfixed = [h for h in words(cert.h_elements, f.rank) if morphisms.apply(f, h) != h]
            yield ("ex2 certificate has an h-element that is not fixed", bool(unfixed),
                   f"unfixed {angle(unfixed)}; y {angle(ys)}")

    with open(directory / "ex3.json") as fh:
        ex3 = json.load(fh)
    scan = constructions.scan_fixing_endomorphisms(ex3["subgroup"], ex3["rank"], ex3["max_image_len"])
    yield ("ex3 no automorphism has Fix = H", scan.refuted,
           f"{scan.candidates} candidates, {len(scan.automorphisms)} automorphisms fix H, all fix more")
    fam = constructions.parametric_family_refutation(ex3["imagey"]["r_values"])
    yield ("ex3 parametric family contradicts y^-1 h y fixed", all(res.status == "refuted" for _, res in fam),
           ", ".join(f"r={r}: {res.status}" for r, res in fam))

    # construction round-trips
    fab, _ = entry("ex1_ab.json")
    fcd, _ = entry("ex1_cd.json")
    fabcd, _ = entry("ex1_abcd.json")
    budget = budget_of(args, {"budget": {"max_len": 10}})
    ext = constructions.extend_trivially(fab, 4)
    rep = constructions.verify_mainconnex(ext, MainconnexCase("i", ["a", "b"]), budget)
    yield ("extend_trivially satisfies case i", rep.passed, rep.status)
    prod = constructions.free_product_auto(fab, fcd)
    rep = constructions.verify_mainconnex(prod, MainconnexCase("ii", ["a", "b"], ["c", "d"]), budget)
    yield ("free_product_auto satisfies case ii", rep.passed, rep.status)
    h = "BabCDcd"
    st = constructions.stable_letter_extend(fabcd, h, h, 0)
    rep = constructions.verify_mainconnex(st, MainconnexCase("iii", ["a", "b", "c", "d"], None, "e", h, h),
                                          budget_of(args, {"budget": {"max_len": 12}}))
    yield ("stable_letter_extend satisfies case iii", rep.passed, rep.status)


def cmd_corpus(args) -> Outcome:
    directory = Path(args.dir) if args.dir else corpus_dir()
    if not directory.is_dir():
        raise InputError(f"no corpus directory {directory}")
    results = []
    for name, ok, detail in corpus_checks(directory, args):
        print(f"[corpus] {'ok  ' if ok else 'FAIL'} {name}", file=sys.stderr, flush=True)
        results.append({"check": name, "ok": bool(ok), "detail": detail})
    failed = [r for r in results if not r["ok"]]
    lines = [f"{'PASS' if r['ok'] else 'FAIL'} {r['check']}: {r['detail']}" for r in results]
    lines.append(f"{len(results) - len(failed)}/{len(results)} corpus checks passed")
    return Outcome({"results": results, "passed": not failed}, lines, EXIT_FAIL if failed else EXIT_OK)


# --- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--max-len", type=int, default=None, help="fixed-word length horizon")
    common.add_argument("--disp-cap", type=int, default=None, help="displacement length cap")
    common.add_argument("--eig-len", type=int, default=None, help="eigenvalue length horizon")
    common.add_argument("--depth", type=int, default=3, help="Whitehead search depth")
    common.add_argument("--seed", type=int, default=None, help="random seed for sampling checks")
    common.add_argument("--rank", type=int, default=None, help="ambient rank (default: largest letter used)")

    parser = argparse.ArgumentParser(prog="freefix", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, parent=sub):
        p = parent.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("reduce", cmd_reduce, "reduce a word, with cyclic core and root").add_argument("word")
    p = add("fold", cmd_fold, "Stallings graph of a subgroup")
    p.add_argument("generators")
    p.add_argument("--dot", action="store_true", help="print Graphviz source")
    p = add("member", cmd_member, "membership of a word in a subgroup")
    p.add_argument("generators")
    p.add_argument("word")
    p = add("intersect", cmd_intersect, "intersection of two subgroups")
    p.add_argument("first")
    p.add_argument("second")
    p = add("apply", cmd_apply, "image of a word")
    p.add_argument("map")
    p.add_argument("word")
    add("invert-auto", cmd_invert_auto, "inverse of an automorphism").add_argument("map")
    add("fix", cmd_fix, "fixed subgroup within the length horizon").add_argument("map")
    add("eigengroups", cmd_eigengroups, "eigengroups for short eigenvalues").add_argument("map")
    add("isogredience", cmd_isogredience, "isogredience classes of non-cyclic eigengroups").add_argument("map")
    add("bh-check", cmd_bh_check, "rank bounds on fixed subgroup and eigengroups").add_argument("map")

    p = sub.add_parser("check", help="subgroup property checks")
    csub = p.add_subparsers(dest="check", required=True)
    q = add("pure", cmd_check, "search for roots outside H", csub)
    q.add_argument("generators")
    q.add_argument("--bound", type=int, default=6)
    q = add("inert", cmd_check, "sample r(H ∩ K) <= r(K)", csub)
    q.add_argument("generators")
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--gen-len", type=int, default=6)
    q = add("coset-bound", cmd_check, "cosets carrying h-loops lie near the core", csub)
    q.add_argument("generators")
    q.add_argument("h")
    q.add_argument("conjugators", help="comma-separated u with h^u in H")

    p = sub.add_parser("ffs", help="free factor systems; systems are ';'-separated subgroups")
    fsub = p.add_subparsers(dest="op", required=True)
    add("cx", cmd_ffs, "complexity", fsub).add_argument("system")
    for name, text in (("leq", "is the first system below the second"), ("wedge", "wedge of two systems")):
        q = add(name, cmd_ffs, text, fsub)
        q.add_argument("first")
        q.add_argument("second")
    q = add("invariant", cmd_ffs, "invariance under an automorphism", fsub)
    q.add_argument("system")
    q.add_argument("map")
    add("is-free-factor", cmd_ffs, "bounded free factor test", fsub).add_argument("generators")

    p = sub.add_parser("construct", help="build automorphisms from smaller ones")
    ksub = p.add_subparsers(dest="kind", required=True)
    q = add("extend", cmd_construct, "add generators sent to their inverses", ksub)
    q.add_argument("map")
    q.add_argument("n", type=int)
    q.add_argument("--extra", default=None, help="comma-separated images for the new generators")
    q = add("product", cmd_construct, "free product of two automorphisms", ksub)
    q.add_argument("map")
    q.add_argument("other")
    for name, text in (("stable", "add y -> h' h^r y"), ("good-r", "which r give the expected Fix")):
        q = add(name, cmd_construct, text, ksub)
        q.add_argument("map")
        q.add_argument("--h", required=True)
        q.add_argument("--h-prime", required=True)
        if name == "stable":
            q.add_argument("--r", type=int, required=True)
        else:
            q.add_argument("--r-min", type=int, default=-5)
            q.add_argument("--r-max", type=int, default=5)

    p = sub.add_parser("verify", help="check decompositions of fixed subgroups")
    vsub = p.add_subparsers(dest="kind", required=True)
    q = add("mainconnex", cmd_verify, "case i, ii or iii of the local decomposition", vsub)
    q.add_argument("map")
    q.add_argument("case")
    q = add("cormain", cmd_verify, "global decomposition certificate", vsub)
    q.add_argument("map")
    q.add_argument("cert")
    q = add("collins-turner", cmd_verify, "maximal-rank decomposition", vsub)
    q.add_argument("map")
    q.add_argument("--H", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--h", default=None)
    q.add_argument("--r", type=int, default=None)
    q = add("imagey", cmd_verify, "solve y f = h' y, h f = h' h h'^-1", vsub)
    q.add_argument("map")
    q.add_argument("--H", required=True)
    q.add_argument("--y", required=True)
    q.add_argument("--h", required=True)
    q.add_argument("--assume-fixed", action="store_true")

    p = sub.add_parser("corpus", help="bundled examples")
    osub = p.add_subparsers(dest="op", required=True)
    add("run", cmd_corpus, "run every example and round-trip", osub).add_argument("--dir", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except (InputError, WordError, MorphismError, ConstructionError, PreconditionError, ValueError, OSError) as exc:
        print(f"freefix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(out.data, indent=2))
    else:
        print(out.text)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
