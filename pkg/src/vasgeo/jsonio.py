"""JSON descriptors for the geometric value types.

Parsers raise InputError carrying the JSON path of the offending node, so
command-line users see where a file went wrong.
"""

from __future__ import annotations

from typing import Any

from .cones import ConeH, ConeV, DefinableCone
from .errors import InputError
from .periodic import FullPeriodic, GeneratorPeriodic, Lattice
from .semilinear import HybridLinear, LinearSet, Semilinear

SCHEMA = "vasgeo/1"


def expect(obj: Any, kind, path: str):
    if not isinstance(obj, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise InputError(f"expected {name}, got {type(obj).__name__}", path)
    return obj


def field(obj: dict, key: str, path: str, default=...):
    expect(obj, dict, path)
    if key not in obj:
        if default is ...:
            raise InputError(f"missing field '{key}'", path)
        return default
    return obj[key]


def check_keys(obj: dict, allowed, path: str) -> None:
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise InputError(f"unknown field '{extra[0]}'", path)


def int_vec(v: Any, path: str, dim: int | None = None) -> tuple:
    expect(v, list, path)
    out = []
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, int):
            raise InputError("expected integer", f"{path}[{i}]")
        out.append(x)
    if dim is not None and len(out) != dim:
        raise InputError(f"expected length {dim}, got {len(out)}", path)
    return tuple(out)


def int_rows(v: Any, path: str, dim: int | None = None) -> list:
    expect(v, list, path)
    return [int_vec(r, f"{path}[{i}]", dim) for i, r in enumerate(v)]


def nat(v: Any, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise InputError("expected non-negative integer", path)
    return v


def cone_from_json(d: dict, path: str = "$") -> ConeH:
    t = field(d, "type", path)
    n = nat(field(d, "dim", path), f"{path}.dim")
    if t == "cone_h":
        check_keys(d, {"type", "dim", "eq", "geq"}, path)
        return ConeH.make(n, int_rows(d.get("eq", []), f"{path}.eq", n), int_rows(d.get("geq", []), f"{path}.geq", n))
    if t == "cone_v":
        check_keys(d, {"type", "dim", "generators"}, path)
        return ConeV.make(n, int_rows(field(d, "generators", path), f"{path}.generators", n)).hrep
    raise InputError(f"unknown cone type '{t}'", f"{path}.type")


def definable_from_json(d: dict, path: str = "$") -> DefinableCone:
    t = field(d, "type", path)
    if t != "cone_def":
        return DefinableCone.from_cone(cone_from_json(d, path))
    check_keys(d, {"type", "dim", "eq", "gt", "geq"}, path)
    n = nat(field(d, "dim", path), f"{path}.dim")
    return DefinableCone.make(n, int_rows(d.get("eq", []), f"{path}.eq", n),
                              int_rows(d.get("gt", []), f"{path}.gt", n),
                              int_rows(d.get("geq", []), f"{path}.geq", n))


def lattice_from_json(v: Any, dim: int, path: str = "$") -> Lattice:
    if v == "full":
        return Lattice.full(dim)
    return Lattice.from_generators(dim, int_rows(v, path, dim))


def periodic_from_json(d: dict, path: str = "$"):
    """A full periodic set; generator descriptors are filled."""
    t = field(d, "type", path)
    if t == "full_periodic":
        check_keys(d, {"type", "cone", "lattice"}, path)
        cone = cone_from_json(field(d, "cone", path), f"{path}.cone")
        lat = lattice_from_json(field(d, "lattice", path), cone.dim, f"{path}.lattice")
        return FullPeriodic.make(cone, lat)
    if t == "gen_periodic":
        from .periodic import fill
        return fill(gen_periodic_from_json(d, path))
    raise InputError(f"unknown periodic type '{t}'", f"{path}.type")


def gen_periodic_from_json(d: dict, path: str = "$") -> GeneratorPeriodic:
    check_keys(d, {"type", "dim", "generators"}, path)
    n = nat(field(d, "dim", path), f"{path}.dim")
    gens = int_rows(field(d, "generators", path), f"{path}.generators", n)
    for i, g in enumerate(gens):
        if any(x < 0 for x in g):
            raise InputError("generators must be non-negative", f"{path}.generators[{i}]")
    return GeneratorPeriodic.make(n, gens)


def linear_from_json(d: dict, path: str = "$") -> LinearSet:
    check_keys(d, {"type", "base", "periodic"}, path)
    q = periodic_from_json(field(d, "periodic", path), f"{path}.periodic")
    base = int_vec(field(d, "base", path), f"{path}.base", q.dim_ambient)
    if any(x < 0 for x in base):
        raise InputError("base must be non-negative", f"{path}.base")
    return LinearSet(base, q)


def semilinear_from_json(d: dict, path: str = "$") -> Semilinear:
    t = field(d, "type", path)
    if t == "linear":
        l = linear_from_json(d, path)
        return Semilinear.of(l.dim_ambient, [l])
    if t == "hybrid":
        check_keys(d, {"type", "bases", "periodic"}, path)
        q = periodic_from_json(field(d, "periodic", path), f"{path}.periodic")
        bases = int_rows(field(d, "bases", path), f"{path}.bases", q.dim_ambient)
        return HybridLinear(q.dim_ambient, tuple(bases), q).to_semilinear()
    if t == "semilinear":
        check_keys(d, {"type", "dim", "components"}, path)
        n = nat(field(d, "dim", path), f"{path}.dim")
        comps = [linear_from_json(c, f"{path}.components[{i}]")
                 for i, c in enumerate(expect(field(d, "components", path), list, f"{path}.components"))]
        for i, c in enumerate(comps):
            if c.dim_ambient != n:
                raise InputError("component dimension differs", f"{path}.components[{i}]")
        return Semilinear.of(n, comps)
    raise InputError(f"unknown region type '{t}'", f"{path}.type")
