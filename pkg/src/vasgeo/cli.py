"""Command-line front end.

Every verb reads JSON descriptors and prints one JSON document:
{"schema": "vasgeo/1", "verb": ..., "budget": ..., "seed": ..., "result": ...}.
Exit status: 0 for a definite answer, 2 when the answer is unknown
(budget exhausted, unclassified cells), 1 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional

from .errors import BudgetExceeded, InputError, VasgeoError
from .jsonio import SCHEMA, field, linear_from_json, periodic_from_json, semilinear_from_json

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2
DEFAULT_BUDGET = 100_000


class Unknown(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("reason", "unknown"))
        self.payload = payload


def load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON in {path}: {e.msg} at line {e.lineno}") from None


def provider_from_json(d, box: int = 12):
    """The set X behind a descriptor: rep, smooth model, semilinear set, catalog entry or vas."""
    from .decompose import AnnotatedProvider, BoxHeuristicProvider
    from .periodic import GeneratorPeriodic
    from .smooth import GeneratorModel, model_from_json, rep_from_json
    from .vas import bounded_reach, catalog_entry, vas_from_json

    t = field(d, "type", "$")
    if t == "rep":
        return AnnotatedProvider.of_rep(rep_from_json(d))
    if t == "smooth":
        m = model_from_json(d)
        return AnnotatedProvider([((0,) * m.dim, m)])
    if t == "catalog":
        e = catalog_entry(field(d, "name", "$"))
        p = e.provider()
        if p is None:
            return provider_from_json(e.vas.to_json(), box)
        return p
    if t == "vas":
        v = vas_from_json(d)
        reach = bounded_reach(v, box)
        return BoxHeuristicProvider(reach.member, v.dim, box)
    s = semilinear_from_json(d)
    parts = [(c.base, GeneratorModel(GeneratorPeriodic.make(s.dim_ambient, c.periodic.generators)))
             for c in s.components]
    if not parts:
        return BoxHeuristicProvider(lambda x: False, s.dim_ambient, box)
    return AnnotatedProvider(parts)


def _region(args, n: int):
    from .semilinear import Semilinear
    if args.region:
        s = semilinear_from_json(load(args.region))
        if s.dim_ambient != n:
            raise InputError(f"region has dimension {s.dim_ambient}, the set {n}")
        return s
    return Semilinear.universe(n)


def _point(text: Optional[str]) -> tuple:
    if text is None:
        raise InputError("missing --point")
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"bad point '{text}'") from None


def _partition_payload(res) -> dict:
    from .decompose import UNCLASSIFIED
    out = res.to_json()
    if any(c.kind == UNCLASSIFIED or (c.second is not None and c.second.kind == UNCLASSIFIED) for c in res.cells):
        raise Unknown({"verdict": "unknown", "reason": "unclassified cells", "partition": out})
    return out


# --- verbs ---------------------------------------------------------------------------

def cmd_fill(args):
    return periodic_from_json(load(args.input)).to_json()


def cmd_intersect(args):
    from .semilinear import linear_intersect
    a, b = load(args.input), load(args.other)
    if field(a, "type", "$") == "linear" and field(b, "type", "$") == "linear":
        return linear_intersect(linear_from_json(a), linear_from_json(b), args.budget).to_json()
    sa, sb = semilinear_from_json(a), semilinear_from_json(b)
    return sa.intersect(sb, args.budget).to_json()


def cmd_complement(args):
    from .semilinear import Semilinear, complement_decompose
    l = linear_from_json(load(args.input))
    s = _region(args, l.dim_ambient)
    cells = complement_decompose(l, s, args.budget)
    return Semilinear.of(l.dim_ambient, cells).to_json()


def cmd_member(args):
    from .smooth import model_from_json, rep_from_json
    from .vas import member_bounded, vas_from_json
    d = load(args.input)
    x = _point(args.point)
    t = field(d, "type", "$")
    if t == "rep":
        obj = rep_from_json(d)
    elif t == "smooth":
        obj = model_from_json(d)
    elif t == "vas":
        return {"member": member_bounded(vas_from_json(d), x, args.box), "box": args.box}
    else:
        obj = semilinear_from_json(d)
    return {"member": obj.member(x)}


def cmd_partition(args):
    from .decompose import partition
    p = provider_from_json(load(args.model), args.box)
    return _partition_payload(partition(p, _region(args, p.dim), args.budget))


def cmd_refine(args):
    from .decompose import full_linear_partition
    p = provider_from_json(load(args.model), args.box)
    return _partition_payload(full_linear_partition(p, _region(args, p.dim), args.budget))


def cmd_reducible(args):
    from .extraction import Unknown as ExtractionUnknown, reducibility, verdict_json
    from .smooth import rep_from_json
    v = reducibility(rep_from_json(load(args.input)), args.budget, args.box)
    if isinstance(v, ExtractionUnknown):
        raise Unknown(verdict_json(v))
    return verdict_json(v)


def cmd_semilinear(args):
    from .decompose import UnknownResult, result_json, semilinearity_decide
    p = provider_from_json(load(args.model), args.box)
    v = semilinearity_decide(p, _region(args, p.dim), args.budget)
    if isinstance(v, UnknownResult):
        raise Unknown(result_json(v))
    return result_json(v)


def cmd_line(args):
    from .decompose import UnknownResult, find_infinite_line, result_json
    p = provider_from_json(load(args.model), args.box)
    v = find_infinite_line(p, _region(args, p.dim), args.budget)
    if isinstance(v, UnknownResult):
        raise Unknown(result_json(v))
    return result_json(v)


def cmd_common(args):
    from .decompose import common_partition
    p1 = provider_from_json(load(args.model), args.box)
    if not args.model2:
        raise InputError("missing --model2")
    p2 = provider_from_json(load(args.model2), args.box)
    if p1.dim != p2.dim:
        raise InputError("the two sets live in different dimensions")
    return _partition_payload(common_partition(p1, p2, _region(args, p1.dim), args.budget))


def cmd_vas_reach(args):
    from .vas import bounded_reach, vas_from_json
    if not args.vas:
        raise InputError("missing --vas")
    return bounded_reach(vas_from_json(load(args.vas)), args.box, args.budget).to_json()


def cmd_enumerate(args):
    d = load(args.input)
    if field(d, "type", "$") in ("rep", "smooth", "catalog", "vas"):
        import itertools
        p = provider_from_json(d, args.box)
        pts = [x for x in itertools.product(range(args.box + 1), repeat=p.dim) if p.membership(x)]
    else:
        pts = semilinear_from_json(d).enumerate_box(args.box)
    return {"box": args.box, "count": len(pts), "points": [list(x) for x in pts]}


VERBS = {
    "fill": cmd_fill,
    "intersect": cmd_intersect,
    "complement": cmd_complement,
    "member": cmd_member,
    "partition": cmd_partition,
    "refine": cmd_refine,
    "reducible": cmd_reducible,
    "semilinear": cmd_semilinear,
    "line-in-complement": cmd_line,
    "common-partition": cmd_common,
    "vas-reach": cmd_vas_reach,
    "enumerate": cmd_enumerate,
}

NEEDS_INPUT = {"fill", "intersect", "complement", "member", "reducible", "enumerate"}
NEEDS_MODEL = {"partition", "refine", "semilinear", "line-in-complement", "common-partition"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vasgeo", description="Exact geometry of periodic and Petri sets.")
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("input", nargs="?", help="descriptor file")
    ap.add_argument("other", nargs="?", help="second descriptor (intersect)")
    ap.add_argument("--model", help="set X: rep, smooth model, semilinear set, catalog entry or vas")
    ap.add_argument("--model2", help="second set for common-partition")
    ap.add_argument("--region", help="semilinear region (default: the whole orthant)")
    ap.add_argument("--vas", help="vas descriptor for vas-reach")
    ap.add_argument("--point", help="comma-separated point for member")
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ap.add_argument("--box", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    if args.verb in NEEDS_MODEL and not args.model:
        args.model = args.input
    doc = {"schema": SCHEMA, "verb": args.verb, "budget": args.budget, "seed": args.seed, "box": args.box}
    code = EXIT_OK
    try:
        if args.verb in NEEDS_INPUT and not args.input:
            raise InputError("missing input file")
        if args.verb in NEEDS_MODEL and not args.model:
            raise InputError("missing --model")
        if args.verb == "intersect" and not args.other:
            raise InputError("intersect needs two input files")
        doc["result"] = VERBS[args.verb](args)
    except Unknown as u:
        doc["result"] = u.payload
        code = EXIT_UNKNOWN
    except BudgetExceeded as e:
        doc["result"] = {"verdict": "unknown", "reason": "budget exhausted", "expended": e.expended}
        code = EXIT_UNKNOWN
    except InputError as e:
        doc["error"] = {"path": e.path, "message": str(e)}
        code = EXIT_INPUT
    except VasgeoError as e:
        doc["error"] = {"path": "$", "message": f"{type(e).__name__}: {e}"}
        code = EXIT_INPUT
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out and code != EXIT_INPUT:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        (sys.stderr if code == EXIT_INPUT else sys.stdout).write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
