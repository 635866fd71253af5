"""JSON (de)serialization for rings, modules, maps, complexes and reports.

Problem files are plain JSON with the polynomial text grammar for all ring
elements; parsing is deterministic and round-trips to identical structure.
"""

from __future__ import annotations

from .complexes import ChainComplex, ShortSPSequence
from .closures import TestElementSpec, Verdict
from .errors import InputError
from .modules import ModuleMap, PresentedModule
from .ring import Ring


def ring_from_json(data, *, degree_budget=None, basis_budget=None):
    if not isinstance(data, dict):
        raise InputError("ring spec must be an object")
    try:
        p = data["p"]
        variables = data["vars"]
    except KeyError as exc:
        raise InputError(f"ring spec missing field {exc}")
    kwargs = {}
    if degree_budget is not None or "degree_budget" in data:
        kwargs["degree_budget"] = degree_budget if degree_budget is not None \
            else data["degree_budget"]
    if basis_budget is not None or "basis_budget" in data:
        kwargs["basis_budget"] = basis_budget if basis_budget is not None \
            else data["basis_budget"]
    return Ring(p, variables, data.get("order", "grevlex"),
                data.get("ideal", ()), regular=data.get("regular", False),
                **kwargs)


def ring_to_json(ring):
    return {"p": ring.p, "vars": list(ring.variables), "order": ring.order,
            "ideal": [str(g) for g in ring.defining], "regular": ring.regular}


def spec_from_json(data, ring):
    if data is None:
        return None
    return TestElementSpec(ring, data["c"], data.get("q0", 1),
                           data.get("locally_stable", False),
                           data.get("provenance", ""))


def module_from_json(data, ring):
    if not isinstance(data, dict) or "rank" not in data:
        raise InputError("module spec must be an object with a rank")
    rels = data.get("relations", [])
    return PresentedModule(ring, data["rank"], rels)


def module_to_json(module):
    return {"ring": ring_to_json(module.ring), "rank": module.rank,
            "relations": [[str(f) for f in col] for col in module.relations]}


def map_from_json(data, ring, source=None, target=None):
    src = source if source is not None else module_from_json(data["source"], ring)
    tgt = target if target is not None else module_from_json(data["target"], ring)
    return ModuleMap(src, tgt, data["matrix"], check=data.get("check", True))


def map_to_json(m):
    return {"source": module_to_json(m.source), "target": module_to_json(m.target),
            "matrix": [[str(a) for a in row] for row in m.matrix]}


def complex_from_json(data, ring):
    lo, hi = data["range"]
    modules = {}
    for offset, mdata in enumerate(data["modules"]):
        modules[lo + offset] = module_from_json(mdata, ring)
    diffs = {}
    for offset, matrix in enumerate(data.get("differentials", [])):
        i = lo + 1 + offset
        diffs[i] = ModuleMap(modules[i], modules[i - 1], matrix)
    return ChainComplex(lo, hi, modules, diffs)


def complex_to_json(C):
    return {"range": [C.lo, C.hi],
            "modules": [module_to_json(C.module(i)) for i in range(C.lo, C.hi + 1)],
            "differentials": [[[str(a) for a in row] for row in C.diffs[i].matrix]
                              for i in range(C.lo + 1, C.hi + 1)]}


def sequence_from_json(data, ring):
    L = complex_from_json(data["L"], ring)
    M = complex_from_json(data["M"], ring)
    N = complex_from_json(data["N"], ring)
    alpha = {}
    beta = {}
    for offset in range(L.hi - L.lo + 1):
        i = L.lo + offset
        alpha[i] = ModuleMap(L.module(i), M.module(i), data["alpha"][offset])
        beta[i] = ModuleMap(M.module(i), N.module(i), data["beta"][offset],
                            check=False)
    return ShortSPSequence(L, M, N, alpha, beta)


def jsonable(obj):
    """Recursively convert reports (with Verdict leaves) into JSON data."""
    if isinstance(obj, Verdict):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
