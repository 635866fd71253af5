"""Built-in verification corpus: small instances plus consistency harnesses.

Each harness exercises one family of statements from the closure calculus at
desk scale and reports *flags* only for certified contradictions: bounded or
witnessed verdicts never flag.  Rings here follow the graded-local
convention (local at the irrelevant ideal); declared multipliers carry a
provenance note and every certified-negative verdict downstream is
conditional on those declarations.

Filters select harnesses by tag.  The full run is deterministic: random
instances come from fixed seeds, and verdict joins are order-independent.
"""

from __future__ import annotations

import itertools
import random

from . import depth, dimension, groebner
from .closures import (FAILS, HOLDS, MEMBER, NONMEMBER, WITNESSED,
                       TestElementSpec, frobenius_closure_member,
                       nakayama_family_check, nakayama_generic_check,
                       default_family, reduced_frobenius, tight_closure_member,
                       zero_star_member)
from .complexes import (ChainComplex, ShortSPSequence, connecting_delta,
                        criteria_equivalence_check, finf_exact_at,
                        ge_injectivity_check, homology_classes_equal, koszul,
                        koszul_block_decomposition, snake_connecting,
                        sp_sequence_checks, stably_phantom_at)
from .depth import CERTIFIED_NO
from .modules import (ModuleMap, PresentedModule, Submodule, frobenius_matrix,
                      matrix_columns, matrix_q_power, quotient_by_sequence,
                      tensor, tensor_map, vec_q_power, vec_scale, vec_str,
                      vec_sub)
from .ring import Ring

BUDGET = dict(degree_budget=2_000_000, basis_budget=20000)


def corpus_rings():
    """Named rings with declared multipliers (see each provenance note)."""
    out = {}

    def add(name, ring, c, q0, provenance):
        out[name] = (ring, TestElementSpec(ring, c, q0, locally_stable=True,
                                           provenance=provenance))

    add("poly2_p2", Ring(2, ["x", "y"], regular=True, **BUDGET), 1, 1,
        "regular ring: the unit works at every exponent")
    add("poly2_p3", Ring(3, ["x", "y"], regular=True, **BUDGET), 1, 1,
        "regular ring: the unit works at every exponent")
    add("poly1_p2", Ring(2, ["x"], regular=True, **BUDGET), 1, 1,
        "regular ring: the unit works at every exponent")
    add("node_p2", Ring(2, ["x", "y"], defining=["x y"], **BUDGET), "x+y", 1,
        "node: the multiplier ideal of the coordinate cross contains x+y")
    add("node_p3", Ring(3, ["x", "y"], defining=["x y"], **BUDGET), "x+y", 1,
        "node: the multiplier ideal of the coordinate cross contains x+y")
    add("cubic_cone_p2",
        Ring(2, ["x", "y", "z"], defining=["x^3+y^3+z^3"], **BUDGET), "x", 1,
        "cone over a smooth plane cubic: declared, multiplier taken from the "
        "irrelevant ideal")
    add("double_line_p2", Ring(2, ["x", "y"], defining=["x^2"], **BUDGET), 1, 2,
        "non-reduced line: nilpotents vanish from the second power on")
    add("two_planes_p2",
        Ring(2, ["x", "y", "z"], defining=["x y", "x z"], **BUDGET), "x+y", 1,
        "plane plus line: declared, avoids both minimal components")
    return out


def ring_module(ring):
    return PresentedModule.ring_as_module(ring)


def sequence_instances():
    """(name, ring, spec, module, sequence) tuples for the sequence suites."""
    rings = corpus_rings()
    out = []

    def add(ring_name, module_builder, xs):
        ring, spec = rings[ring_name]
        M = module_builder(ring)
        name = f"{ring_name}:{'|'.join(xs)}"
        out.append((name, ring, spec, M, [ring.poly(x) for x in xs]))

    R = ring_module
    quot = lambda gens: (lambda ring: PresentedModule(ring, 1, [(g,) for g in gens]))

    add("poly2_p2", R, ["x"])
    add("poly2_p2", R, ["y"])
    add("poly2_p2", R, ["x", "y"])
    add("poly2_p2", R, ["y", "x"])
    add("poly2_p2", R, ["x+y", "y"])
    add("poly2_p2", quot(["x"]), ["y"])
    add("poly2_p2", quot(["x"]), ["x", "y"])
    add("poly2_p3", R, ["x", "y"])
    add("poly2_p3", R, ["x+y", "x+2y"])
    add("node_p2", R, ["x"])
    add("node_p2", R, ["y"])
    add("node_p2", R, ["x", "y"])
    add("node_p2", R, ["x+y"])
    add("node_p2", R, ["x+y", "x"])
    add("node_p2", quot(["x"]), ["y"])
    add("node_p3", R, ["x+y"])
    add("node_p3", R, ["x", "y"])
    add("cubic_cone_p2", R, ["x"])
    add("cubic_cone_p2", R, ["x", "y"])
    add("cubic_cone_p2", R, ["y", "x"])
    add("cubic_cone_p2", R, ["x+y", "z"])
    add("double_line_p2", R, ["y"])
    add("double_line_p2", R, ["x"])
    add("double_line_p2", R, ["y", "x"])
    add("two_planes_p2", R, ["x"])
    add("two_planes_p2", R, ["y", "z"])
    return out


class HarnessResult:
    __slots__ = ("name", "tags", "flags", "checks", "details")

    def __init__(self, name, tags, flags, checks, details=None):
        self.name = name
        self.tags = tags
        self.flags = flags
        self.checks = checks
        self.details = details or {}

    def to_json(self):
        return {"name": self.name, "tags": sorted(self.tags),
                "flags": self.flags, "checks": self.checks,
                "details": self.details}


# ---------------------------------------------------------------------------
# functor laws


def _random_poly(rng, ring, max_degree=2, terms=3):
    f = ring.zero()
    for _ in range(rng.randrange(1, terms + 1)):
        exps = [0] * ring.nvars
        for _ in range(rng.randrange(0, max_degree + 1)):
            exps[rng.randrange(ring.nvars)] += 1
        f = f + ring.monomial(exps, rng.randrange(1, ring.p))
    return f


def harness_functor_laws(e_max=2, count=200, seed=20260810):
    rng = random.Random(seed)
    rings = [r for r, _ in corpus_rings().values()]
    flags = []
    checks = 0
    for k in range(count):
        ring = rings[k % len(rings)]
        rows = rng.randrange(1, 3)
        cols = rng.randrange(1, 3)
        mat = tuple(tuple(_random_poly(rng, ring) for _ in range(cols))
                    for _ in range(rows))
        if matrix_q_power(mat, 0) != mat:
            flags.append(f"identity law fails on matrix #{k}")
        e1 = rng.randrange(0, e_max + 1)
        e2 = rng.randrange(0, e_max + 1)
        if matrix_q_power(matrix_q_power(mat, e1), e2) != matrix_q_power(mat, e1 + e2):
            flags.append(f"composition law fails on matrix #{k}")
        checks += 2
        if k % 25 == 0:
            F = PresentedModule.free(ring, rows)
            if F.frobenius(e1).relations != ():
                flags.append("free module gained relations under the functor")
            M = PresentedModule(ring, rows, matrix_columns(mat, cols))
            FM = M.frobenius(e1).frobenius(e2)
            if FM.key() != M.frobenius(e1 + e2).key():
                flags.append(f"module functor law fails on #{k}")
            surj = ModuleMap(M, M.frobenius(e1),
                             ModuleMap.identity(M).matrix, check=False)
            if not surj.frobenius(0).is_surjective():
                flags.append("right-exactness spot check failed")
            checks += 3
    return HarnessResult("functor_laws", {"frobenius"}, flags, checks)


def harness_facts(e_max=2, count=50, seed=31415):
    """Image-of-power and kernel-of-power identities on random maps."""
    rng = random.Random(seed)
    rings = corpus_rings()
    pool = [rings["poly2_p2"], rings["poly2_p3"], rings["node_p2"],
            rings["node_p3"]]
    flags = []
    checks = 0
    for k in range(count):
        ring, _spec = pool[k % len(pool)]
        F2 = PresentedModule.free(ring, 2)
        mat = tuple(tuple(_random_poly(rng, ring) for _ in range(2))
                    for _ in range(2))
        beta = ModuleMap(F2, F2, mat, check=False)
        cols = matrix_columns(mat, 2)
        # a different generating set for the same image
        alt = [cols[0], vec_sub(cols[1], vec_scale(_random_poly(rng, ring),
                                                   cols[0]))]
        for e in range(e_max + 1):
            im_pow = Submodule(F2.frobenius(e),
                               matrix_columns(matrix_q_power(mat, e), 2))
            bracket = Submodule(F2, alt).bracket_power(e)
            if not im_pow.same_as(bracket):
                flags.append(f"image identity fails on map #{k} at level {e}")
            checks += 1
            fe = beta.frobenius(e)
            for z in beta.kernel_gens():
                if not fe.target.is_zero_elem(fe.apply(vec_q_power(z, e))):
                    flags.append(f"kernel containment fails on map #{k} level {e}")
                checks += 1
    return HarnessResult("facts", {"facts"}, flags, checks)


# ---------------------------------------------------------------------------
# membership oracles


def _gf_solve(columns, rhs, p):
    """Is rhs in the span of the columns over F_p?  Dense elimination."""
    if not any(rhs):
        return True
    nrows = len(rhs)
    mat = [list(col) for col in columns]
    piv_rows = []
    reduced = []
    target = list(rhs)
    for col in mat:
        col = col[:]
        for r, pr in zip(reduced, piv_rows):
            c = col[pr]
            if c:
                col = [(a - c * b) % p for a, b in zip(col, r)]
        lead = next((i for i, a in enumerate(col) if a), None)
        if lead is None:
            continue
        inv = pow(col[lead], p - 2, p)
        col = [a * inv % p for a in col]
        reduced.append(col)
        piv_rows.append(lead)
    for r, pr in zip(reduced, piv_rows):
        c = target[pr]
        if c:
            target = [(a - c * b) % p for a, b in zip(target, r)]
    return not any(target)


def dense_membership(f, gens, ring, slack=4):
    """Bounded-degree linear-algebra ideal membership, Groebner-free."""
    degs = [g.total_degree() for g in gens if not g.is_zero()]
    if not degs:
        return f.is_zero()
    D = max(f.total_degree(), max(degs)) + slack
    monos = []

    def walk(prefix, left):
        if len(prefix) == ring.nvars - 1:
            monos.append(tuple(prefix + [left]))
            return
        for e in range(left + 1):
            walk(prefix + [e], left - e)

    for d in range(D + 1):
        walk([], d)
    index = {m: i for i, m in enumerate(monos)}
    columns = []
    for g in gens:
        if g.is_zero():
            continue
        gd = g.total_degree()
        for m in monos:
            if sum(m) + gd > D:
                continue
            prod = g.shift(m)
            col = [0] * len(monos)
            for mm, c in prod.terms.items():
                col[index[mm]] = c
            columns.append(col)
    rhs = [0] * len(monos)
    for mm, c in f.terms.items():
        if mm not in index:
            return False
        rhs[index[mm]] = c
    return _gf_solve(columns, rhs, ring.p)


def harness_membership_oracle(count=100, seed=97531):
    rng = random.Random(seed)
    flags = []
    checks = 0
    rings = [Ring(p, ["x", "y", "z"], **BUDGET) for p in (2, 3, 5)]
    for k in range(count):
        ring = rings[k % 3]
        gens = [_random_poly(rng, ring, max_degree=3, terms=3)
                for _ in range(rng.randrange(1, 4))]
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            continue
        if k % 2 == 0:
            f = sum((_random_poly(rng, ring, max_degree=1, terms=2) * g
                     for g in gens), ring.zero())
        else:
            f = _random_poly(rng, ring, max_degree=4, terms=4)
        basis = groebner.groebner(gens, ring)
        via_gb = groebner.nf(f, basis, ring).is_zero()
        via_la = dense_membership(f, gens, ring)
        if via_gb != via_la:
            flags.append(f"membership disagreement on instance #{k}")
        checks += 1
    return HarnessResult("membership_oracle", {"oracle"}, flags, checks)


def harness_regular_oracle(e_max=2, count=100, seed=1234):
    rng = random.Random(seed)
    rings = corpus_rings()
    flags = []
    checks = 0
    for k in range(count):
        ring, spec = rings["poly2_p2"] if k % 2 == 0 else rings["poly2_p3"]
        M = ring_module(ring)
        gens = [(_random_poly(rng, ring, max_degree=2, terms=2),)
                for _ in range(rng.randrange(1, 3))]
        N = Submodule(M, gens)
        if k % 3 == 0:
            z = M.element((sum((_random_poly(rng, ring, 1, 1) * g[0]
                                for g in gens), ring.zero()),))
        else:
            z = M.element((_random_poly(rng, ring, max_degree=3, terms=3),))
        plain = N.contains(z.coords)
        vt = tight_closure_member(z, N, spec, e_max)
        vf = frobenius_closure_member(z, N, e_max)
        want = MEMBER if plain else NONMEMBER
        if vt.status != want or vf.status != want:
            flags.append(f"regular-ring oracle mismatch on instance #{k}: "
                         f"plain={plain} tight={vt.status} frob={vf.status}")
        checks += 2
    return HarnessResult("regular_oracle", {"oracle"}, flags, checks)


# ---------------------------------------------------------------------------
# distinguished instances


def harness_fermat(e_max=3):
    ring, spec = corpus_rings()["cubic_cone_p2"]
    M = ring_module(ring)
    N = Submodule(M, [("x",), ("y",)])
    z2 = M.element(("z^2",))
    flags = []
    plain = N.contains(z2.coords)
    vf = frobenius_closure_member(z2, N, e_max)
    vt = tight_closure_member(z2, N, spec, e_max)
    if plain:
        flags.append("the square generator reduced into the ideal")
    if vf.status != MEMBER or vf.certificate.get("q") != 2:
        flags.append(f"expected a power witness at q=2, got {vf.to_json()}")
    if vt.status != MEMBER:
        flags.append(f"expected certified membership, got {vt.status}")
    return HarnessResult("fermat_instance", {"fermat"}, flags, 3,
                         {"frobenius": vf.to_json(), "tight": vt.to_json()})


def harness_negative_instance(e_max=2):
    ring, spec = corpus_rings()["node_p2"]
    M = ring_module(ring)
    flags = []
    g = depth.ghost_regular_element(ring.var("x"), M, spec, e_max)
    if g.status != CERTIFIED_NO:
        flags.append(f"expected a certified-no ghost verdict, got {g.status}")
    elif ring.normal(ring.poly(g.certificate["element"].strip("()"))) != \
            ring.normal(ring.var("y")):
        flags.append(f"expected certificate element y, got {g.certificate}")
    K = koszul([ring.var("x"), ring.var("y")], M)
    v = stably_phantom_at(K, 1, spec, e_max)
    if v.status != FAILS:
        flags.append(f"expected certified failure at spot 1, got {v.status}")
    elif "(y, 0)" not in v.certificate.get("elements", []):
        flags.append(f"expected certificate (y, 0), got {v.certificate}")
    return HarnessResult("negative_instance", {"negative"}, flags, 2,
                         {"ghost": g.to_json(), "spot1": v.to_json()})


# ---------------------------------------------------------------------------
# sequence suites


def harness_equivalence_suite(e_max=2):
    """Ghost, arbitrary-exponent, and Koszul spot-1 verdicts must agree."""
    flags = []
    checks = 0
    details = []
    for name, ring, spec, M, xs in sequence_instances():
        t_max = ring.p ** e_max
        sv_g = depth.ghost_regular_sequence(xs, M, spec, e_max)
        sv_p = depth.phantom_regular_sequence(xs, M, spec, e_max, t_max=t_max)
        K = koszul(xs, M)
        spot1 = stably_phantom_at(K, 1, spec, e_max)
        checks += 3
        if sv_g.certified_no and sv_p.status != CERTIFIED_NO:
            flags.append(f"{name}: ghost certified-no but arbitrary-exponent "
                         f"scan returned {sv_p.status}")
        if sv_g.certified_no and spot1.status == HOLDS:
            flags.append(f"{name}: ghost certified-no but spot 1 certified-holds")
        if spot1.status == FAILS and sv_g.certified_clean():
            flags.append(f"{name}: spot 1 certified-fails but the ghost run "
                         "was certified-clean")
        # top-spot consistency when a clean run of full length exists
        if sv_g.status == WITNESSED and sv_g.certified_clean():
            n = len(xs)
            for j in range(n):
                vj = stably_phantom_at(K, n - j, spec, e_max)
                checks += 1
                if vj.status == FAILS:
                    flags.append(f"{name}: clean ghost run of length {n} but "
                                 f"certified failure at spot {n - j}")
        details.append({"instance": name, "ghost": sv_g.status,
                        "phantom": sv_p.status, "spot1": spot1.status})
    return HarnessResult("equivalence_suite", {"ghseq"}, flags, checks,
                         {"instances": details})


def harness_ge_regularity(e_max=1):
    """Clean ghost elements act injectively on the certified reduced powers."""
    flags = []
    checks = 0
    for name, ring, spec, M, xs in sequence_instances():
        if len(xs) != 1:
            continue
        x = xs[0]
        v = depth.ghost_regular_element(x, M, spec, e_max)
        if v.status == CERTIFIED_NO or not v.bounds.get("clean"):
            continue
        for e in range(e_max + 1):
            G, qual = reduced_frobenius(M, e, spec, e_max)
            if qual["witnessed"]:
                continue
            q = ring.p ** e
            mult = ModuleMap.multiplication(G, x ** q)
            FM = M.frobenius(e)
            for w in mult.kernel_gens():
                checks += 1
                zv = zero_star_member(FM.element(w), spec, e_max)
                if zv.status == NONMEMBER:
                    flags.append(f"{name}: certified kernel element outside the "
                                 f"closure of zero at level {e}")
    return HarnessResult("ge_regularity", {"ghseq"}, flags, checks)


def harness_rigidity(e_max=2):
    flags = []
    checks = 0
    for name, ring, spec, M, xs in sequence_instances():
        if len(xs) < 2:
            continue
        K = koszul(xs, M)
        n = len(xs)
        verdicts = {i: stably_phantom_at(K, i, spec, e_max)
                    for i in range(1, n + 1)}
        checks += n
        for i in range(1, n):
            if verdicts[i].status == HOLDS and verdicts[i + 1].status == FAILS:
                flags.append(f"{name}: holds at {i} but fails at {i + 1}")
        # dropping the last element can only improve the spots
        Kshort = koszul(xs[:-1], M)
        for i in range(1, n):
            vs = stably_phantom_at(Kshort, i, spec, e_max)
            checks += 1
            if vs.status == FAILS and verdicts[i].status == HOLDS:
                flags.append(f"{name}: shorter sequence certified-fails at {i} "
                             "while the longer one certified-holds")
    return HarnessResult("rigidity", {"rigidity"}, flags, checks)


def harness_permutability(e_max=2):
    flags = []
    checks = 0
    for name, ring, spec, M, xs in sequence_instances():
        if len(xs) != 2:
            continue
        rep = depth.permutability_check(xs, M, spec, e_max)
        checks += 1
        if rep["flagged"]:
            flags.append(f"{name}: certified asymmetry between the two orders")
    return HarnessResult("permutability", {"permutability"}, flags, checks)


def harness_criteria_agreement(e_max=2):
    flags = []
    checks = 0
    for name, ring, spec, M, xs in sequence_instances():
        K = koszul(xs, M)
        for i in range(1, len(xs) + 1):
            rep = criteria_equivalence_check(K, i, spec, e_max)
            checks += 1
            if not rep["agree"]:
                flags.append(f"{name}: certified disagreement at spot {i}")
    return HarnessResult("criteria_agreement", {"prop22"}, flags, checks)


def harness_depth_chain(e_max=2):
    flags = []
    checks = 0
    details = []
    primes_by_ring = {"cubic_cone_p2": [[]]}
    for name, ring, spec, M, xs in sequence_instances():
        if M.relations:
            continue  # chain harness runs on the ring module
        ring_name = name.split(":")[0]
        primes = primes_by_ring.get(ring_name)
        try:
            rep = depth.depth_chain_report(xs, M, spec, e_max, primes=primes)
        except Exception as exc:  # IM = M and similar degenerate pairs
            details.append({"instance": name, "skipped": str(exc)})
            continue
        checks += 1
        flags.extend(f"{name}: {f}" for f in rep["flags"])
        if rep["all_certified"] and rep["minheight"] > rep["phantom_depth"]:
            flags.append(f"{name}: minheight exceeds certified phantom depth "
                         "on the ring module")
        details.append({"instance": name,
                        "tuple": [rep["depth"], rep["phantom_depth"],
                                  rep["minheight"], rep["height"]]})
    return HarnessResult("depth_chain", {"depth"}, flags, checks,
                         {"instances": details})


# ---------------------------------------------------------------------------
# Nakayama harnesses


def harness_nakayama(e_max=2):
    flags = []
    checks = 0
    rings = corpus_rings()

    # trivial: L = N
    ring, spec = rings["poly2_p2"]
    M = ring_module(ring)
    L = Submodule(M, [("x",)])
    rep = nakayama_generic_check(L, L, M, spec, e_max)
    checks += 1
    if rep["flagged"]:
        flags.append("trivial equal-submodule instance flagged")

    # vacuous: L = N = 0
    rep = nakayama_generic_check(Submodule(M, []), Submodule(M, []), M, spec,
                                 e_max)
    checks += 1
    if rep["flagged"]:
        flags.append("vacuous zero instance flagged")

    # closure-heavy instance on the cubic cone
    ring, spec = rings["cubic_cone_p2"]
    M = ring_module(ring)
    L = Submodule(M, [("x",), ("y",)])
    N = Submodule(M, [("x",), ("y",), ("z^2",)])
    rep = nakayama_generic_check(L, N, M, spec, e_max)
    checks += 1
    if rep["flagged"]:
        flags.append("cubic-cone instance flagged")

    # node instance
    ring, spec = rings["node_p2"]
    M = ring_module(ring)
    L = Submodule(M, [("x^2+y^2",)])
    N = Submodule(M, [("x^2+y^2",), ("x^2",)])
    rep = nakayama_generic_check(L, N, M, spec, e_max)
    checks += 1
    if rep["flagged"]:
        flags.append("node instance flagged")

    # family version: trivial bracket family
    ring, spec = rings["poly2_p2"]
    M = ring_module(ring)
    L = Submodule(M, [("x",)])
    fam = default_family(L, M, e_max)
    rep = nakayama_family_check(L, M, fam, spec, e_max)
    checks += 1
    if rep["flagged"] or not rep["hypothesis_all_hold"]:
        flags.append("bracket family of the submodule itself misbehaved")

    # single-submodule default where the hypothesis must fail
    L2 = Submodule(M, [("x^2",)])
    N2 = Submodule(M, [("x",)])
    fam2 = default_family(N2, M, e_max)
    rep2 = nakayama_family_check(L2, M, fam2, spec, e_max)
    checks += 1
    if rep2["hypothesis_all_hold"]:
        flags.append("expected the displayed containment to fail for the "
                     "strict inclusion instance")
    if rep2["flagged"]:
        flags.append("strict inclusion instance flagged despite failing "
                     "hypothesis")

    # colon-kernel family on the node, with the composed multiplier
    ring, spec = rings["node_p2"]
    M = ring_module(ring)
    spec_c1 = TestElementSpec(ring, spec.cn(1), spec.q0,
                              provenance="composed multiplier")
    fam3 = []
    for e in range(e_max + 1):
        FM = M.frobenius(e)
        mult = ModuleMap.multiplication(FM, ring.var("y") ** (ring.p ** e))
        fam3.append(Submodule(FM, mult.kernel_gens()))
    rep3 = nakayama_family_check(Submodule(M, []), M, fam3, spec_c1, e_max)
    checks += 1
    if rep3["flagged"]:
        flags.append("colon-kernel family instance flagged")

    return HarnessResult("nakayama", {"nakayama"}, flags, checks)


# ---------------------------------------------------------------------------
# sequence-of-complexes harnesses


def multiplication_sequence(ring, spec, M, xs, y1):
    """The standard surjection diagram built from multiplication by y1."""
    KM = koszul(xs, M)
    Q, _ = quotient_by_sequence(M, [y1])
    KQ = koszul(xs, Q)
    alpha = {i: ModuleMap.multiplication(KM.module(i), y1)
             for i in range(KM.lo, KM.hi + 1)}
    beta = {i: ModuleMap(KM.module(i), KQ.module(i),
                         ModuleMap.identity(KM.module(i)).matrix, check=False)
            for i in range(KM.lo, KM.hi + 1)}
    return ShortSPSequence(KM, KM, KQ, alpha, beta)


def power_map_sequence(ring, spec, k=2):
    """Two-term complexes: multiplication towers over a one-variable ring."""
    R = ring_module(ring)
    Rx = PresentedModule(ring, 1, [("x",)])
    d = ModuleMap.multiplication(R, ring.var("x") ** k)
    dN = ModuleMap(Rx, Rx, [[str(ring.var("x") ** k)]], check=False)
    L = ChainComplex(0, 1, {1: R, 0: R}, {1: d})
    M = ChainComplex(0, 1, {1: R, 0: R}, {1: d})
    N = ChainComplex(0, 1, {1: Rx, 0: Rx}, {1: dN})
    alpha = {i: ModuleMap.multiplication(R, "x") for i in (0, 1)}
    beta = {i: ModuleMap(R, Rx, [["1"]], check=False) for i in (0, 1)}
    return ShortSPSequence(L, M, N, alpha, beta)


def sp_sequence_corpus():
    rings = corpus_rings()
    out = []
    ring, spec = rings["poly2_p2"]
    out.append(("poly2:mult-x", spec,
                multiplication_sequence(ring, spec, ring_module(ring),
                                        ["x", "y"], ring.var("x"))))
    ring, spec = rings["node_p2"]
    out.append(("node:mult-x+y", spec,
                multiplication_sequence(ring, spec, ring_module(ring),
                                        ["x", "y"], ring.poly("x+y"))))
    ring, spec = rings["cubic_cone_p2"]
    out.append(("cone:mult-x", spec,
                multiplication_sequence(ring, spec, ring_module(ring),
                                        ["x", "y"], ring.var("x"))))
    ring, spec = rings["poly1_p2"]
    out.append(("tower:x^2", spec, power_map_sequence(ring, spec, 2)))
    return out


def harness_sp_sequences(e_max=1):
    flags = []
    checks = 0
    for name, spec, S in sp_sequence_corpus():
        degrees = list(range(S.L.lo + 1, S.L.hi + 1))
        rep = sp_sequence_checks(S, degrees, spec, e_max)
        checks += len(degrees)
        flags.extend(f"{name}: {f}" for f in rep["flags"])
    return HarnessResult("sp_sequences", {"spseq"}, flags, checks)


def harness_delta(e_max=1):
    """Lift independence, the classical comparison, and the zero criterion."""
    flags = []
    checks = 0
    rings = corpus_rings()
    ring, spec_x = rings["poly1_p2"]
    spec_1 = TestElementSpec(ring, 1, 1, provenance="unit in a regular ring")
    instances = []
    for k in (2, 3):
        for spec in (spec_1, spec_x):
            instances.append((f"tower:x^{k}:c={spec.c}", spec,
                              power_map_sequence(ring, spec, k)))
    nring, nspec = rings["node_p2"]
    instances.append(("node:mult", nspec,
                      multiplication_sequence(nring, nspec, ring_module(nring),
                                              ["x", "y"], nring.poly("x+y"))))
    pring, pspec = rings["poly2_p2"]
    instances.append(("poly2:mult", pspec,
                      multiplication_sequence(pring, pspec, ring_module(pring),
                                              ["x", "y"], pring.var("x"))))
    for k in (4, 5):
        instances.append((f"tower:x^{k}", spec_x,
                          power_map_sequence(ring, spec_x, k)))
    for j, (name, spec, S) in enumerate(instances):
        i = S.N.hi
        cycles = S.N.cycle_gens(i, 0)
        if not cycles:
            continue
        z = cycles[0]
        mults = [1, "x", "x+1"] if S.ring.nvars == 1 else [1, "x", "y"]
        dcl = connecting_delta(S, i, z, 0, spec.e0, spec.e0, spec,
                               max_alternates=2, lift_multipliers=mults)
        checks += 1 + len(dcl.alternates)
        if not all(a["class_equal"] for a in dcl.alternates):
            flags.append(f"{name}: lift-dependent connecting class")
        if len(dcl.alternates) < 3:
            flags.append(f"{name}: fewer than three distinct lifts exercised")
        if S.is_right_exact_at(i, 0) and all(
                not S.alpha[d].kernel_gens() for d in (i, i - 1)):
            # classical comparison on honestly exact instances
            x_cl = snake_connecting(S, i, z, 0)
            for e1 in (spec.e0, spec.e0 + 1):
                for e2 in (spec.e0, spec.e0 + 1):
                    d2 = connecting_delta(S, i, z, 0, e1, e2, spec,
                                          max_alternates=0)
                    q2 = S.ring.p ** e2
                    twisted = vec_scale(spec.c ** (q2 + 1),
                                        vec_q_power(x_cl, e1 + e2))
                    checks += 1
                    if not homology_classes_equal(S.L, i - 1, e1 + e2,
                                                  d2.rep, twisted):
                        flags.append(f"{name}: mismatch with the classical "
                                     f"construction at ({e1},{e2})")
        # zero criterion: all outputs phantom forces all outputs zero
        outputs = []
        all_phantom = True
        for e1 in (spec.e0, spec.e0 + 1):
            for e2 in (spec.e0, spec.e0 + 1):
                d2 = connecting_delta(S, i, z, 0, e1, e2, spec, max_alternates=0)
                B = S.L.boundary_sub(i - 1, e1 + e2)
                v = tight_closure_member(B.ambient.element(d2.rep), B, spec, 1)
                outputs.append((d2, B))
                if v.status != MEMBER:
                    all_phantom = False
        if all_phantom:
            for d2, B in outputs:
                checks += 1
                if not B.contains(d2.rep):
                    flags.append(f"{name}: phantom outputs that are not zero "
                                 "in homology")
    return HarnessResult("delta", {"delta"}, flags, checks)


def harness_ge_injectivity(e_max=1):
    flags = []
    checks = 0
    rings = corpus_rings()
    ring, spec = rings["poly1_p2"]
    R = ring_module(ring)
    Rx = PresentedModule(ring, 1, [("x",)])
    rep = ge_injectivity_check(ModuleMap.multiplication(R, "x"),
                               ModuleMap(R, Rx, [["1"]], check=False),
                               spec, e_max)
    checks += 1
    if rep["stable_phantom_middle"].status != HOLDS or not rep["all_injective"]:
        flags.append("exact instance did not certify on both sides")
    if not rep["agree"]:
        flags.append("exact instance disagreement")
    zero_map = ModuleMap(R, R, [["0"]], check=False)
    rep2 = ge_injectivity_check(zero_map, zero_map, spec, e_max)
    checks += 1
    if rep2["stable_phantom_middle"].status != FAILS or rep2["all_injective"]:
        flags.append("zero-map instance did not fail on both sides")
    ring, spec = rings["node_p2"]
    Rn = ring_module(ring)
    Rnx = PresentedModule(ring, 1, [("x",)])
    rep3 = ge_injectivity_check(ModuleMap.multiplication(Rn, "x"),
                                ModuleMap(Rn, Rnx, [["1"]], check=False),
                                spec, e_max)
    checks += 1
    if not rep3["agree"]:
        flags.append("node instance certified disagreement")
    return HarnessResult("ge_injectivity", {"geinject"}, flags, checks)


def harness_finf(e_max=2):
    flags = []
    checks = 0
    rings = corpus_rings()
    ring, _ = rings["poly1_p2"]
    R = ring_module(ring)
    exact_count = 0
    for k in range(1, 6):
        d = ModuleMap.multiplication(R, ring.var("x") ** k)
        C = ChainComplex(0, 1, {1: R, 0: R}, {1: d})
        v = finf_exact_at(C, 1, e_max)
        honest = C.homology_is_zero_exact(1, 0)
        checks += 1
        exact_count += 1
        if not honest or v.status != HOLDS:
            flags.append(f"multiplication tower x^{k} mismatched: {v.status}")
    ring2, _ = rings["poly2_p2"]
    M2 = ring_module(ring2)
    for xs in (["x"], ["y"], ["x", "y"], ["x+y", "y"], ["x", "x+y"]):
        K = koszul(xs, M2)
        for i in range(1, len(xs) + 1):
            v = finf_exact_at(K, i, e_max)
            honest = K.homology_is_zero_exact(i, 0)
            checks += 1
            if honest != (v.status == HOLDS):
                flags.append(f"Koszul on {xs} spot {i}: honest={honest} "
                             f"verdict={v.status}")
        exact_count += 1
    zero_d = ModuleMap(R, R, [["0"]], check=False)
    C0 = ChainComplex(0, 1, {1: R, 0: R}, {1: zero_d})
    v0 = finf_exact_at(C0, 1, e_max)
    C3 = ChainComplex(0, 2, {2: R, 1: R, 0: R}, {2: zero_d, 1: zero_d})
    v3 = finf_exact_at(C3, 1, e_max)
    checks += 2
    if v0.status != FAILS:
        flags.append(f"zero-differential two-term case gave {v0.status}")
    if v3.status != FAILS:
        flags.append(f"zero-differential three-term case gave {v3.status}")
    # the cubic-cone witness instance
    ring3, spec3 = rings["cubic_cone_p2"]
    R3 = ring_module(ring3)
    d1 = ModuleMap(PresentedModule.free(ring3, 2), R3, [["x", "y"]], check=False)
    top = ModuleMap(PresentedModule(ring3, 1, [("z^2",)]), R3, [["0"]],
                    check=False)
    C = ChainComplex(0, 1, {1: PresentedModule.free(ring3, 2), 0: R3},
                     {1: d1}, check=False)
    B = C.boundary_sub(0, 0)
    v = frobenius_closure_member(B.ambient.element(("z^2",)), B, e_max)
    checks += 1
    if v.status != MEMBER or v.certificate.get("q") != 2:
        flags.append(f"cubic-cone closure witness missing: {v.to_json()}")
    return HarnessResult("finf", {"finf"}, flags, checks,
                         {"exact_instances": exact_count})


def harness_tensor_lemmas(e_max=1):
    """Right exactness and quotienting interact with the closure checks."""
    flags = []
    checks = 0
    rings = corpus_rings()
    for rname in ("poly2_p2", "node_p2"):
        ring, spec = rings[rname]
        R = ring_module(ring)
        Rx = PresentedModule(ring, 1, [("x",)])
        alpha = ModuleMap.multiplication(R, "x")
        beta = ModuleMap(R, Rx, [["1"]], check=False)
        base = ge_injectivity_check(alpha, beta, spec, e_max)
        N = PresentedModule(ring, 1, [("y",)])
        alpha_t = tensor_map(alpha, N)
        beta_t = tensor_map(beta, N)
        tensored = ge_injectivity_check(alpha_t, beta_t, spec, e_max)
        checks += 1
        if (base["stable_phantom_middle"].status == HOLDS
                and tensored["stable_phantom_middle"].status == FAILS):
            flags.append(f"{rname}: tensoring broke certified middle exactness")
        # quotient by a sequence regular on the quotient module
        Q_A, _ = quotient_by_sequence(R, ["y"])
        Q_B, _ = quotient_by_sequence(R, ["y"])
        Q_C, _ = quotient_by_sequence(Rx, ["y"])
        alpha_q = ModuleMap(Q_A, Q_B, alpha.matrix, check=False)
        beta_q = ModuleMap(Q_B, Q_C, beta.matrix, check=False)
        quot = ge_injectivity_check(alpha_q, beta_q, spec, e_max)
        checks += 1
        kernel_verdicts = []
        for e in range(e_max + 1):
            fa = alpha_q.frobenius(e)
            for z in fa.kernel_gens():
                v = zero_star_member(fa.source.element(z), spec, e_max)
                kernel_verdicts.append(v.status)
        if (base["stable_phantom_middle"].status == HOLDS
                and NONMEMBER in kernel_verdicts):
            flags.append(f"{rname}: quotient sequence has a certified "
                         "non-phantom kernel at the leftmost spot")
        if (base["stable_phantom_middle"].status == HOLDS
                and quot["stable_phantom_middle"].status == FAILS):
            flags.append(f"{rname}: quotienting broke certified middle exactness")
    return HarnessResult("tensor_lemmas", {"tensor"}, flags, checks)


# ---------------------------------------------------------------------------
# aggregation


HARNESSES = [
    ("functor_laws", {"frobenius"}, harness_functor_laws),
    ("facts", {"facts"}, harness_facts),
    ("regular_oracle", {"oracle"}, harness_regular_oracle),
    ("membership_oracle", {"oracle"}, harness_membership_oracle),
    ("fermat_instance", {"fermat"}, harness_fermat),
    ("negative_instance", {"negative"}, harness_negative_instance),
    ("equivalence_suite", {"ghseq"}, harness_equivalence_suite),
    ("ge_regularity", {"ghseq"}, harness_ge_regularity),
    ("rigidity", {"rigidity"}, harness_rigidity),
    ("permutability", {"permutability"}, harness_permutability),
    ("criteria_agreement", {"prop22"}, harness_criteria_agreement),
    ("depth_chain", {"depth"}, harness_depth_chain),
    ("nakayama", {"nakayama"}, harness_nakayama),
    ("sp_sequences", {"spseq"}, harness_sp_sequences),
    ("delta", {"delta"}, harness_delta),
    ("ge_injectivity", {"geinject"}, harness_ge_injectivity),
    ("finf", {"finf"}, harness_finf),
    ("tensor_lemmas", {"tensor"}, harness_tensor_lemmas),
]


def run_corpus(filter_tag=None):
    """Run every harness (optionally filtered by tag or name substring)."""
    results = []
    for name, tags, fn in HARNESSES:
        if filter_tag and filter_tag not in tags and filter_tag not in name:
            continue
        results.append(fn())
    total_flags = [f"{r.name}: {f}" for r in results for f in r.flags]
    return {"harnesses": [r.to_json() for r in results],
            "checks": sum(r.checks for r in results),
            "flags": total_flags,
            "violations": len(total_flags)}
