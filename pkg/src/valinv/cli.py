"""Command-line front end.

Every command reads one JSON document (``--input`` path or stdin) and writes
one JSON document (``--output`` path or stdout).  Exit codes: 0 success,
2 invalid input, 3 search exhausted (with the partial trace).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Any, Callable

from . import blowup, extension, lattice, oracle
from .errors import SearchExhausted, UnstableCount, ValidationError, ValinvError

JSON_SAFE_INT = 2**53 - 1


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > JSON_SAFE_INT else obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _need(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"input needs {key!r}")
    return doc[key]


def _subgroup(doc) -> lattice.Subgroup:
    if isinstance(doc, dict) and "subgroup" in doc:
        doc = doc["subgroup"]
    return lattice.Subgroup.from_json(doc)


def _frame(doc) -> blowup.Frame:
    return blowup.Frame.from_json(_need(doc, "frame"))


def _box(args, n: int) -> oracle.Box:
    return oracle.Box(args.bound or oracle.default_bound(n))


# -- group -------------------------------------------------------------------

def group_index(doc, args):
    delta = _subgroup(doc)
    return {"index": lattice.group_index(delta), "subgroup": delta.to_json()}


def group_epsilon(doc, args):
    delta = _subgroup(doc)
    return {
        "epsilon": lattice.initial_index(delta),
        "index": lattice.group_index(delta),
        "subgroup": delta.to_json(),
    }


def group_cosets(doc, args):
    delta = _subgroup(doc)
    cover = lattice.semigroup_cover(delta)
    return {
        "cover": None if cover is None else [list(r) for r in cover.representatives],
        "epsilon": lattice.initial_index(delta),
        "index": lattice.group_index(delta),
        "subgroup": delta.to_json(),
    }


def group_criterion(doc, args):
    delta = _subgroup(doc)
    return {
        "criterion": lattice.unit_triangular_criterion(delta),
        "hnf": [list(r) for r in delta.hnf],
        "subgroup": delta.to_json(),
    }


def group_quotient(doc, args):
    delta = _subgroup(doc)
    q = lattice.quotient_invariants(delta)
    return {
        "invariant_factors": list(q.invariant_factors),
        "order": q.order,
        "cyclic": q.is_cyclic,
        "subgroup": delta.to_json(),
    }


def group_chain(doc, args):
    delta, sigma = _subgroup(_need(doc, "delta")), _subgroup(_need(doc, "sigma"))
    ch = lattice.epsilon_chain(delta, sigma)
    return {
        "epsilon": {"gamma_sigma": ch.gamma_sigma, "sigma_delta": ch.sigma_delta,
                    "gamma_delta": ch.gamma_delta},
        "index": {"gamma_sigma": ch.index_gamma_sigma, "sigma_delta": ch.index_sigma_delta,
                  "gamma_delta": ch.index_gamma_delta},
        "multiplicative": ch.multiplicative,
        "equality_transfers": ch.equality_transfers,
    }


# -- blowup ------------------------------------------------------------------

def _steps(doc) -> list[blowup.PmtStep]:
    if "step" in doc:
        return [blowup.PmtStep.from_json(doc["step"])]
    raw = _need(doc, "steps")
    if not isinstance(raw, list):
        raise ValidationError("'steps' must be a list")
    return [blowup.PmtStep.from_json(s) for s in raw]


def blowup_pmt(doc, args):
    frame = _frame(doc)
    steps = _steps(doc)
    monos = doc.get("monomials", [])
    final, rewritten = blowup.replay(frame, steps, monos)
    return {
        "frame": final.to_json(),
        "monomials": [list(m) for m in rewritten],
        "values": [list(blowup.monomial_value(final, m)) for m in rewritten],
    }


def blowup_divide(doc, args):
    frame = _frame(doc)
    m1, m2 = _need(doc, "m1"), _need(doc, "m2")
    res = blowup.make_divisible(frame, m1, m2, args.budget)
    out = res.to_json()
    out["input"] = {"frame": frame.to_json(), "m1": list(m1), "m2": list(m2)}
    return out


def blowup_normalize2(doc, args):
    rel = blowup.Relation2.from_json(doc.get("relation", doc))
    res = blowup.rank2_normalize(rel)
    return {"r": res.r, "s": res.s, "relation": res.relation.to_json()}


def blowup_reduce_fraction(doc, args):
    frame = _frame(doc)
    cert = blowup.reduce_fraction_supports(
        frame, _need(doc, "e"), _need(doc, "ms"), _need(doc, "ns"), args.budget
    )
    return cert.to_json()


# -- ext ---------------------------------------------------------------------

def _record(doc) -> extension.ExtensionRecord:
    return extension.ExtensionRecord.from_json(doc.get("record", doc))


def ext_profile(doc, args):
    rec = _record(doc)
    out = extension.statement_profile(rec).to_json()
    out["degree_chain"] = extension.degree_chain(rec)
    return out


def ext_defect(doc, args):
    rec = _record(doc)
    return {
        "d": extension.defect(rec),
        "e": extension.ramification_index(rec),
        "f": rec.f,
        "hensel_degree": rec.hensel_degree,
    }


def _family(doc) -> list[extension.ExtensionRecord]:
    raw = doc["records"] if isinstance(doc, dict) and "records" in doc else doc
    if not isinstance(raw, list):
        raise ValidationError("family input must be a list of records or {'records': [...]}")
    return [extension.ExtensionRecord.from_json(r) for r in raw]


def ext_family(doc, args):
    return extension.family_check(_family(doc)).to_json()


# -- verify ------------------------------------------------------------------

def verify_epsilon(doc, args):
    delta = _subgroup(doc)
    brute = oracle.stable_brute_epsilon(delta, _box(args, delta.n))
    claimed = doc.get("epsilon", lattice.initial_index(delta))
    return {"epsilon": brute, "claimed": claimed, "ok": brute == int(claimed)}


def verify_cover(doc, args):
    """Check a cover, or with ``"cover": null`` confirm that none exists.

    Without a cover the candidate shifts ``k e_n`` for ``k`` below the
    brute-force epsilon are tested; a counterexample confirms the claim.
    """
    delta = _subgroup(doc)
    box = _box(args, delta.n)
    if "cover" not in doc and "representatives" not in doc:
        raise ValidationError("input needs 'cover'")
    reps = doc.get("cover", doc.get("representatives"))
    claims_cover = reps is not None
    if not claims_cover:
        eps = oracle.stable_brute_epsilon(delta, box)
        reps = [[0] * (delta.n - 1) + [k] for k in range(eps)]
    check = oracle.brute_cover_verify(delta, reps, box)
    return {
        "claims_cover": claims_cover,
        "covered": check.ok,
        "counterexample": None if check.counterexample is None else list(check.counterexample),
        "bound": box.bound,
        "ok": check.ok == claims_cover,
    }


def verify_bfs(doc, args):
    src = doc.get("input", doc)
    frame, m1, m2 = _frame(src), _need(src, "m1"), _need(src, "m2")
    depth = args.bound or oracle.BFS_DEPTH
    out: dict = {"depth": depth}
    try:
        path = oracle.pmt_bfs(frame, m1, m2, depth)
    except SearchExhausted:
        path = None
    out["shortest"] = None if path is None else [{"i": i, "j": j} for i, j in path]
    if "steps" in doc:
        steps = [blowup.PmtStep.from_json(s) for s in doc["steps"]]
        final, (a, b) = blowup.replay(frame, steps, [m1, m2])
        out["replay_divides"] = blowup.divides(a, b)
        out["ok"] = out["replay_divides"] and (path is None or len(path) <= len(steps))
    else:
        out["ok"] = path is not None
    return out


# -- fixtures ----------------------------------------------------------------

def _fixture_dir():
    return resources.files("valinv") / "data" / "fixtures"


def load_fixture(name: str) -> dict:
    path = _fixture_dir() / f"{name}.json"
    if not path.is_file():
        raise ValidationError(f"unknown fixture {name!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def fixture_names() -> list[str]:
    return sorted(p.name[:-5] for p in _fixture_dir().iterdir() if p.name.endswith(".json"))


def fixtures_list(doc, args):
    return {"fixtures": [
        {"name": n, "description": load_fixture(n).get("description", "")} for n in fixture_names()
    ]}


def fixtures_run(doc, args):
    fx = load_fixture(args.name)
    out = extension.family_check(_family(fx)).to_json()
    out["name"] = args.name
    return out


COMMANDS: dict[str, dict[str, Callable]] = {
    "group": {
        "index": group_index, "epsilon": group_epsilon, "cosets": group_cosets,
        "criterion": group_criterion, "quotient": group_quotient, "chain": group_chain,
    },
    "blowup": {
        "pmt": blowup_pmt, "divide": blowup_divide, "normalize2": blowup_normalize2,
        "reduce-fraction": blowup_reduce_fraction,
    },
    "ext": {"profile": ext_profile, "defect": ext_defect, "family": ext_family},
    "verify": {"epsilon": verify_epsilon, "cover": verify_cover, "bfs": verify_bfs},
    "fixtures": {"list": fixtures_list, "run": fixtures_run},
}
NO_INPUT = {fixtures_list, fixtures_run}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON input file (default: stdin)")
    common.add_argument("--output", "-o", help="write the JSON result here instead of stdout")
    common.add_argument("--budget", type=int, default=blowup.DEFAULT_BUDGET,
                        help="maximum number of PMT steps")
    common.add_argument("--bound", type=int, default=None,
                        help="oracle box bound (verify epsilon/cover) or BFS depth (verify bfs)")

    parser = argparse.ArgumentParser(prog="valinv", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for gname, cmds in COMMANDS.items():
        gp = groups.add_parser(gname)
        sub = gp.add_subparsers(dest="command", required=True)
        for cname, fn in cmds.items():
            cp = sub.add_parser(cname, parents=[common])
            if fn is fixtures_run:
                cp.add_argument("name")
            cp.set_defaults(func=fn)
    return parser


def _read_input(args):
    try:
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc}") from exc


def _execute(args) -> tuple[int, str]:
    try:
        if args.budget < 1:
            raise ValidationError("--budget must be positive")
        if args.bound is not None and args.bound < 1:
            raise ValidationError("--bound must be positive")
        doc = None if args.func in NO_INPUT else _read_input(args)
        return 0, dumps(args.func(doc, args))
    except SearchExhausted as exc:
        trace = [{"i": s[0], "j": s[1]} for s in exc.trace]
        return 3, dumps({"error": exc.code, "detail": str(exc), "trace": trace})
    except UnstableCount as exc:
        return 3, dumps({"error": exc.code, "detail": str(exc), "trace": []})
    except ValinvError as exc:
        return 2, dumps({"error": exc.code, "detail": str(exc)})
    except (TypeError, KeyError, ValueError, AttributeError) as exc:
        return 2, dumps({"error": "MalformedInput", "detail": str(exc)})


def run(argv=None) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, json_text)`` without writing anything."""
    return _execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, text = _execute(args)
    if args.output and code == 0:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
