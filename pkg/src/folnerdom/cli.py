"""Configuration-driven command line: census, chain, dominate, simulate, sweep.

Every run is a pure function of (config, seed): outputs are byte-identical
across repeats.  Exit codes: 0 all checks pass, 2 a certified check failed,
3 a size/budget cap stopped the run.  Certificate fields serialize
rationals as {"num": ..., "den": ...} string pairs; floats never appear in
them.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from typing import Sequence

from .actions import (
    FiniteAction,
    Observable,
    check_dominance,
    convergence_diagnostics,
    ergodic_average,
    heisenberg_mod_action,
    kadison_check,
    lamplighter_mod_action,
    weak11_probe,
    zd_mod_action,
)
from .chains import Chain, build_chain, chain_manifest, lamplighter_folner
from .dominance import dominance_report, report_to_dict
from .errors import SizeCapExceeded
from .groups import Group, group_from_token, word_ball
from .measures import FinSupMeasure
from .schedules import Schedule, fn_size, ftilde_size
from .sets import FiniteSubset, extract_subsequence

EXIT_PASS = 0
EXIT_FAIL = 2
EXIT_BUDGET = 3


def _rat(q: Fraction) -> dict:
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _parse_rat(s) -> Fraction:
    return Fraction(s)


def atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if cfg.get("schema") != 1:
        raise ValueError("config schema must be 1")
    return cfg


def _schedule_from(cfg: dict, depth_flag: int | None) -> Schedule:
    s = cfg.get("schedule", {})
    return Schedule(
        tail_base=s.get("tail_base", 2),
        length_base=s.get("length_base", 2),
        depth=depth_flag or s.get("depth", 2),
    )


def _folner_sets(cfg: dict, group: Group, cap: int | None) -> list[FiniteSubset]:
    fol = cfg.get("folner", {})
    kind = fol.get("kind", "balls")
    if kind == "balls":
        radii = fol.get("radii")
        if not radii:
            raise ValueError("folner.radii required for kind=balls")
        return [FiniteSubset(group, word_ball(group, r, cap)) for r in radii]
    if kind == "lamplighter":
        indices = fol.get("indices")
        if not indices:
            raise ValueError("folner.indices required for kind=lamplighter")
        return [lamplighter_folner(n, cap)[1] for n in indices]
    if kind == "custom":
        return [FiniteSubset.deserialize(open(p).read()) for p in fol.get("files", [])]
    raise ValueError(f"unknown folner kind {kind!r}")


def _build_chain(cfg: dict, cap: int | None, depth_flag: int | None) -> Chain:
    group = group_from_token(cfg["group"])
    sched = _schedule_from(cfg, depth_flag)
    Fsub = _folner_sets(cfg, group, cap)
    if len(Fsub) < sched.depth:
        raise ValueError("fewer Folner sets than schedule depth")
    return build_chain(Fsub, sched, sched.depth, cap)


def _action_from(cfg: dict) -> FiniteAction:
    a = cfg.get("action", {})
    m = a.get("modulus", 4)
    group = group_from_token(cfg["group"])
    if group.kind == "zd":
        return zd_mod_action(group.d, m)
    if group.kind == "heisenberg":
        return heisenberg_mod_action(m)
    return lamplighter_mod_action(m)


def _observable_from(spec: dict, act: FiniteAction) -> Observable:
    kind = spec.get("kind", "indicator")
    if kind == "indicator":
        return Observable.indicator(act.size, spec.get("states", [0]))
    if kind == "function":
        return Observable.function(_parse_rat(v) for v in spec["values"])
    if kind == "matrix":
        return Observable.matrix([[_parse_rat(v) for v in row] for row in spec["rows"]])
    raise ValueError(f"unknown observable kind {kind!r}")


# -- subcommands -----------------------------------------------------------


def cmd_census(cfg: dict, out: str, cap: int | None, depth: int | None, seed: int) -> int:
    """Lamplighter cardinalities vs closed forms; ball growth otherwise."""
    group = group_from_token(cfg["group"])
    nmax = depth or cfg.get("census", {}).get("max_index", 6)
    rows = ["n,card_ftilde,formula_ftilde,card_f,formula_f,match"]
    all_match = True
    try:
        if group.kind == "lamplighter":
            for n in range(1, nmax + 1):
                ft, f = lamplighter_folner(n, cap)
                m = len(ft) == ftilde_size(n) and len(f) == fn_size(n)
                all_match = all_match and m
                rows.append(
                    f"{n},{len(ft)},{ftilde_size(n)},{len(f)},{fn_size(n)},{str(m).lower()}"
                )
        else:
            rows = ["n,card_ball"]
            for n in range(0, nmax + 1):
                rows.append(f"{n},{len(word_ball(group, n, cap))}")
    except SizeCapExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    atomic_write(os.path.join(out, "census.csv"), "\n".join(rows) + "\n")
    return EXIT_PASS if all_match else EXIT_FAIL


def cmd_chain(cfg: dict, out: str, cap: int | None, depth: int | None, seed: int) -> int:
    """Optionally extract a subsequence, then build E_n, omega, manifest."""
    group = group_from_token(cfg["group"])
    sched = _schedule_from(cfg, depth)
    try:
        Fsub = _folner_sets(cfg, group, cap)
        ex = cfg.get("extract")
        if ex:
            res = extract_subsequence(
                enumerate(Fsub, 1),
                sched.N,
                sched.eps,
                depth=sched.depth,
                budget=ex.get("budget", 64),
                cap=cap,
            )
            if res.status != "ok":
                best = "none" if res.best_ratio is None else str(res.best_ratio)
                atomic_write(
                    os.path.join(out, "chain.json"),
                    json.dumps(
                        {"schema": 1, "status": "budget", "best_ratio": best},
                        indent=2,
                        sort_keys=True,
                    )
                    + "\n",
                )
                return EXIT_BUDGET
            Fsub = [s.folner_set for s in res.steps]
        chain = build_chain(Fsub, sched, sched.depth, cap)
    except SizeCapExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    set_files = {}
    for n in range(1, chain.depth + 1):
        Fn, En = chain.level(n)
        for tag, S in (("F", Fn), ("E", En)):
            name = f"{tag}_{n}.set"
            atomic_write(os.path.join(out, name), S.serialize())
            set_files[f"{tag}_{n}"] = name
    atomic_write(os.path.join(out, "omega.csv"), chain.omega.serialize_csv())
    atomic_write(os.path.join(out, "chain.json"), chain_manifest(chain, set_files))
    return EXIT_PASS


def cmd_dominate(cfg: dict, out: str, cap: int | None, depth: int | None, seed: int) -> int:
    """Per-level dominance certificates; nonzero exit if any level fails."""
    try:
        chain = _build_chain(cfg, cap, depth)
    except SizeCapExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    levels = []
    csv = ["n,card_F,card_E,N,min_scaled,bound,c_emp,verdict,taint"]
    worst = EXIT_PASS
    for n in range(2, chain.depth + 1):
        rep = dominance_report(chain, n, cap)
        levels.append(report_to_dict(rep))
        c = "inf" if rep.c_emp is None else f"{rep.c_emp.numerator}/{rep.c_emp.denominator}"
        csv.append(
            f"{n},{rep.card_F},{rep.card_E},{rep.N},"
            f"{rep.min_scaled.numerator}/{rep.min_scaled.denominator},"
            f"{rep.bound.numerator}/{rep.bound.denominator},{c},{rep.verdict},"
            f"{str(rep.tainted).lower()}"
        )
        if rep.verdict != "pass":
            worst = EXIT_FAIL
    doc = {
        "schema": 1,
        "group": chain.group.token(),
        "depth": chain.depth,
        "omega_total_mass": _rat(chain.omega.total_mass),
        "levels": levels,
    }
    atomic_write(os.path.join(out, "dominance.json"), json.dumps(doc, indent=2, sort_keys=True) + "\n")
    atomic_write(os.path.join(out, "dominance.csv"), "\n".join(csv) + "\n")
    return worst


def cmd_simulate(cfg: dict, out: str, cap: int | None, depth: int | None, seed: int) -> int:
    """Convergence, dominance transfer, weak (1,1) probe, Kadison battery."""
    sim = cfg.get("simulate", {})
    act = _action_from(cfg)
    rng = random.Random(seed)
    failures = 0
    try:
        chain = _build_chain(cfg, cap, depth)
        rep = dominance_report(chain, chain.depth, cap)
    except SizeCapExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if rep.c_emp is None or rep.verdict != "pass":
        print("dominance certificate failed; cannot transfer", file=sys.stderr)
        return EXIT_FAIL

    x = _observable_from(sim.get("observable", {}), act)

    group = group_from_token(cfg["group"])
    conv_sets: list[tuple[int, FiniteSubset]] = []
    if group.kind == "lamplighter":
        for n in sim.get("convergence_indices", [2, 5, 8]):
            conv_sets.append((n, lamplighter_folner(n, cap)[0]))
    else:
        for n in sim.get("convergence_radii", [1, 4, 16, 64]):
            conv_sets.append((n, FiniteSubset(group, word_ball(group, n, cap))))

    rows = ["check,n,value_num,value_den,ok"]
    tol = Fraction(sim.get("tolerance", "1/1000"))
    diag = convergence_diagnostics(act, conv_sets, x)
    final_ok = diag[-1][1] <= tol
    failures += 0 if final_ok else 1
    for n, d in diag:
        rows.append(f"convergence,{n},{d.numerator},{d.denominator},{str(d <= tol).lower()}")

    ok, slack = check_dominance(act, chain, chain.depth, x, rep.c_emp, cap)
    failures += 0 if ok else 1
    rows.append(f"dominance_transfer,{chain.depth},{slack.numerator},{slack.denominator},{str(ok).lower()}")

    eps = Fraction(sim.get("eps", "1/8"))
    if x.kind == "function":
        _, mass, bound, wok = weak11_probe(act, conv_sets, x, eps, rep.c_emp)
        failures += 0 if wok else 1
        rows.append(f"weak11_mass,0,{mass.numerator},{mass.denominator},{str(wok).lower()}")

    trials = sim.get("kadison_trials", 25)
    dim = sim.get("kadison_dim", 3)
    kact = zd_mod_action(1, dim)
    kf = FiniteSubset.of(kact.group, ((i,) for i in range(dim)))
    kad_fail = 0
    for _ in range(trials):
        raw = [[Fraction(rng.randint(-9, 9)) for _ in range(dim)] for _ in range(dim)]
        sym = [[(raw[i][j] + raw[j][i]) / 2 for j in range(dim)] for i in range(dim)]
        kok, _ = kadison_check(kact, kf, Observable.matrix(sym))
        kad_fail += 0 if kok else 1
    failures += kad_fail
    rows.append(f"kadison_failures,{trials},{kad_fail},1,{str(kad_fail == 0).lower()}")

    atomic_write(os.path.join(out, "simulate.csv"), "\n".join(rows) + "\n")
    return EXIT_PASS if failures == 0 else EXIT_FAIL


def cmd_sweep(cfg: dict, out: str, cap: int | None, depth: int | None, seed: int) -> int:
    """Dominance constants across a grid of tail bases."""
    bases = cfg.get("sweep", {}).get("tail_bases", [2, 3, 4])
    rows = ["tail_base,n,min_scaled,bound,c_emp,verdict"]
    worst = EXIT_PASS
    for c in bases:
        local = dict(cfg)
        local["schedule"] = dict(cfg.get("schedule", {}), tail_base=c)
        try:
            chain = _build_chain(local, cap, depth)
        except SizeCapExceeded as exc:
            print(f"budget: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        for n in range(2, chain.depth + 1):
            rep = dominance_report(chain, n, cap)
            ce = "inf" if rep.c_emp is None else f"{rep.c_emp.numerator}/{rep.c_emp.denominator}"
            rows.append(
                f"{c},{n},{rep.min_scaled.numerator}/{rep.min_scaled.denominator},"
                f"{rep.bound.numerator}/{rep.bound.denominator},{ce},{rep.verdict}"
            )
            if rep.verdict != "pass":
                worst = EXIT_FAIL
    atomic_write(os.path.join(out, "sweep.csv"), "\n".join(rows) + "\n")
    return worst


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="folnerdom",
        description="Exact certificates for ergodic-average dominance on discrete amenable groups",
    )
    parser.add_argument("command", choices=["census", "chain", "dominate", "simulate", "sweep"])
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--cap", type=int, default=None, help="set/support size cap")
    parser.add_argument("--depth", type=int, default=None, help="override chain depth")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized batteries")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    handler = {
        "census": cmd_census,
        "chain": cmd_chain,
        "dominate": cmd_dominate,
        "simulate": cmd_simulate,
        "sweep": cmd_sweep,
    }[args.command]
    return handler(cfg, args.out, args.cap, args.depth, args.seed)


if __name__ == "__main__":
    sys.exit(main())
