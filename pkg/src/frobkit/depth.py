"""Ghost/phantom regular sequences, phantom depth, and the depth chain.

A sequence verdict is never a certified yes (the defining quantifier ranges
over all Frobenius levels); it is CertifiedNo when some scanned kernel
element is certified outside the closure of zero, and WitnessedUpTo
otherwise.  The empty sequence is vacuously regular on a nonzero module.
Candidate scans are independent per grid point and joins are
order-independent.
"""

from __future__ import annotations

import itertools

from . import dimension
from .closures import (FAILS, HOLDS, MEMBER, NONMEMBER, WITNESSED, Verdict,
                       zero_star_member)
from .complexes import koszul, stably_phantom_at
from .errors import InputError
from .modules import ModuleMap, quotient_by_sequence, vec_str

CERTIFIED_NO = "CertifiedNo"


class SequenceVerdict:
    """Aggregate outcome of a ghost/phantom sequence scan."""

    __slots__ = ("xs", "status", "steps", "xm_check", "certificate", "bounds")

    def __init__(self, xs, status, steps, xm_check, certificate, bounds):
        self.xs = xs
        self.status = status
        self.steps = steps
        self.xm_check = xm_check
        self.certificate = certificate
        self.bounds = bounds

    @property
    def certified_no(self):
        return self.status == CERTIFIED_NO

    def certified_clean(self):
        """Every scanned kernel element had an unconditional membership."""
        return self.status != CERTIFIED_NO and all(
            step.get("clean", False) for step in self.steps)

    def to_json(self):
        return {"sequence": [str(x) for x in self.xs], "status": self.status,
                "xm_not_equal_m": self.xm_check, "steps": self.steps,
                "certificate": self.certificate, "bounds": self.bounds}

    def __repr__(self):
        return f"<sequence verdict {self.status} for ({', '.join(map(str, self.xs))})>"


def _element_scan(x, M, spec, e_max, powers=None):
    """Scan kernels of multiplication by x^q (or the given powers) on F^e(M).

    Returns (status, info): CertifiedNo with a certificate when a kernel
    element is certified outside 0^*; otherwise WitnessedUpTo with a
    cleanliness flag (all kernel members certified inside).
    """
    ring = M.ring
    clean = True
    for e in range(e_max + 1):
        FM = M.frobenius(e)
        ts = powers if powers is not None else [ring.p ** e]
        for t in ts:
            mult = ModuleMap.multiplication(FM, x ** t)
            for z in mult.kernel_gens():
                v = zero_star_member(FM.element(z), spec, e_max)
                if v.status == NONMEMBER:
                    cert = {"level": e, "t": t, "element": vec_str(z),
                            "q": v.certificate.get("q"), "c": str(spec.c)}
                    return CERTIFIED_NO, {"certificate": cert, "clean": False}
                if v.status != MEMBER:
                    clean = False
    return WITNESSED, {"certificate": None, "clean": clean}


def ghost_regular_element(x, M, spec, e_max):
    """Ghost-regularity verdict for one element: kernels of q-th powers."""
    ring = M.ring
    x = ring.require_in_maximal(ring.poly(x), "candidate element")
    if M.is_zero_module():
        raise InputError("module is zero; regularity is undefined")
    Q, _ = quotient_by_sequence(M, [x])
    bounds = {"e_max": e_max, "q0": spec.q0}
    if Q.is_zero_module():
        return Verdict(CERTIFIED_NO, {"reason": "xM=M"}, bounds)
    status, info = _element_scan(x, M, spec, e_max)
    if status == CERTIFIED_NO:
        return Verdict(CERTIFIED_NO, info["certificate"], bounds,
                       conditional_on="declared test element")
    v = Verdict(WITNESSED, None, bounds, e=e_max)
    v.bounds["clean"] = info["clean"]
    return v


def ghost_regular_sequence(xs, M, spec, e_max):
    """Fold the element verdict over successive quotients."""
    ring = M.ring
    xs = [ring.require_in_maximal(ring.poly(x), "sequence element") for x in xs]
    if M.is_zero_module():
        raise InputError("module is zero; regularity is undefined")
    bounds = {"e_max": e_max, "q0": spec.q0}
    Q_all, _ = quotient_by_sequence(M, xs)
    xm_ok = not Q_all.is_zero_module() if xs else True
    steps = []
    if not xm_ok:
        return SequenceVerdict(xs, CERTIFIED_NO, steps, xm_ok,
                               {"reason": "xM=M"}, bounds)
    current = M
    for k, x in enumerate(xs):
        status, info = _element_scan(x, current, spec, e_max)
        steps.append({"index": k, "element": str(x), "status": status,
                      "clean": info["clean"], "certificate": info["certificate"]})
        if status == CERTIFIED_NO:
            return SequenceVerdict(xs, CERTIFIED_NO, steps, xm_ok,
                                   dict(info["certificate"], step=k), bounds)
        current, _ = quotient_by_sequence(current, [x])
    return SequenceVerdict(xs, WITNESSED, steps, xm_ok, None, bounds)


def phantom_regular_sequence(xs, M, spec, e_max, t_max=None):
    """Scan with arbitrary exponents on the quotients and on the colon.

    Steps quotient by x_j^{u_j} for all tuples with entries up to t_max, and
    test exponents t up to t_max at every level; a ghost-scan certificate is
    in particular a phantom-scan certificate (the t = q case).
    """
    ring = M.ring
    xs = [ring.require_in_maximal(ring.poly(x), "sequence element") for x in xs]
    if M.is_zero_module():
        raise InputError("module is zero; regularity is undefined")
    if t_max is None:
        t_max = ring.p ** e_max
    bounds = {"e_max": e_max, "q0": spec.q0, "t_max": t_max}
    Q_all, _ = quotient_by_sequence(M, xs)
    xm_ok = not Q_all.is_zero_module() if xs else True
    steps = []
    if not xm_ok:
        return SequenceVerdict(xs, CERTIFIED_NO, steps, xm_ok,
                               {"reason": "xM=M"}, bounds)
    ts = list(range(1, t_max + 1))
    for i in range(len(xs)):
        clean_i = True
        for u in itertools.product(ts, repeat=i):
            Q = M
            if i:
                Q, _ = quotient_by_sequence(
                    M, [x ** e for x, e in zip(xs[:i], u)])
            status, info = _element_scan(xs[i], Q, spec, e_max, powers=ts)
            clean_i = clean_i and info["clean"]
            if status == CERTIFIED_NO:
                cert = dict(info["certificate"], step=i, u_tuple=list(u))
                steps.append({"index": i, "element": str(xs[i]),
                              "status": CERTIFIED_NO, "clean": False,
                              "certificate": cert})
                return SequenceVerdict(xs, CERTIFIED_NO, steps, xm_ok, cert,
                                       bounds)
        steps.append({"index": i, "element": str(xs[i]), "status": WITNESSED,
                      "clean": clean_i, "certificate": None})
    return SequenceVerdict(xs, WITNESSED, steps, xm_ok, None, bounds)


# -- phantom depth ----------------------------------------------------------------


def phantom_depth(I_gens, M, spec, e_max):
    """Count stable-phantom Koszul spots from the top downward.

    Returns (d, qualifier): the largest d such that the scan holds at spots
    n, n-1, ..., n-d+1, all spots re-verified (the single-spot acceleration
    is a statement under test in corpus mode, so it is not assumed).  The
    qualifier records each spot's verdict and whether the boundary below is a
    certified failure or only a scan limit.
    """
    ring = M.ring
    I_gens = [ring.require_in_maximal(ring.poly(g), "ideal generator")
              for g in I_gens]
    if M.is_zero_module():
        raise InputError("module is zero; depth is undefined")
    Q, _ = quotient_by_sequence(M, I_gens)
    if Q.is_zero_module():
        raise InputError("IM = M; depth is undefined for this pair")
    n = len(I_gens)
    K = koszul(I_gens, M)
    spots = {}
    d = 0
    boundary = "full"
    for j in range(n):
        v = stably_phantom_at(K, n - j, spec, e_max)
        spots[n - j] = v
        if v.status == FAILS:
            boundary = "certified"
            break
        d += 1
    qualifier = {
        "spots": {i: v.status for i, v in spots.items()},
        "boundary": boundary,
        "all_counted_certified": all(
            v.status == HOLDS for i, v in spots.items() if i > n - d),
        "bounds": {"e_max": e_max, "q0": spec.q0},
    }
    return d, qualifier


def classical_depth(I_gens, M):
    """Depth via exact Koszul homology vanishing from the top spot down."""
    ring = M.ring
    I_gens = [ring.poly(g) for g in I_gens]
    n = len(I_gens)
    K = koszul(I_gens, M)
    depth = 0
    for i in range(n):
        if not K.homology_is_zero_exact(n - i, 0):
            break
        depth += 1
    return depth


# -- minheight and the chain -------------------------------------------------------


def _derived_primes(ring):
    """Minimal primes of the ring: the zero prime, or monomial vertex covers."""
    if not ring.defining:
        return [[]]
    basis = ring.defining_basis()
    if all(g.is_monomial() for g in basis):
        covers = dimension.monomial_minimal_primes(list(basis), ring)
        return [[ring.var(ring.variables[i]) for i in cover] for cover in covers]
    raise InputError(
        "minimal primes are derived only for monomial defining ideals; "
        "supply the minimal primes explicitly")


def _validate_primes(ring, primes):
    checked = []
    for pr in primes:
        gens = [ring.poly(g) for g in pr]
        from . import groebner
        basis = groebner.groebner(gens + list(ring.defining), ring)
        for g in ring.defining:
            if not groebner.nf(g, basis, ring).is_zero():
                raise InputError("a supplied prime does not contain the "
                                 "defining ideal")
        checked.append(gens)
    return checked


def minimal_primes_for(ring, primes=None):
    if primes is None:
        return _derived_primes(ring)
    return _validate_primes(ring, primes)


def minheight(I_gens, ring, primes=None):
    """min over minimal primes of the height of (I + p)/p, via dimensions."""
    return _height_over_primes(I_gens, ring, primes, min)


def height_on_module(I_gens, ring, primes=None):
    """Prime-wise height, taking the largest value over the minimal primes."""
    return _height_over_primes(I_gens, ring, primes, max)


def _height_over_primes(I_gens, ring, primes, combine):
    I_gens = [ring.poly(g) for g in I_gens]
    values = []
    for pr in minimal_primes_for(ring, primes):
        dim_rp = dimension.krull_dimension(pr, ring)
        dim_quot = dimension.krull_dimension(pr + I_gens, ring)
        values.append(dim_rp - dim_quot)
    if not values:
        raise InputError("no minimal primes available")
    return combine(values)


def depth_chain_report(I_gens, M, spec, e_max, primes=None):
    """Classical depth, phantom depth, minheight and height, with the chain flag."""
    ring = M.ring
    if M.rank != 1 or M.relations:
        if primes is None:
            raise InputError("for a module other than the ring itself, supply "
                             "its minimal primes explicitly")
    depth = classical_depth(I_gens, M)
    pd, qualifier = phantom_depth(I_gens, M, spec, e_max)
    mn = minheight(I_gens, ring, primes)
    ht = height_on_module(I_gens, ring, primes)
    pd_certified = (qualifier["boundary"] in ("certified", "full")
                    and qualifier["all_counted_certified"])
    chain_holds = None
    flags = []
    if pd_certified:
        chain_holds = depth <= pd <= mn <= ht
        if not chain_holds:
            flags.append("certified violation of the depth chain")
    return {"depth": depth, "phantom_depth": pd,
            "phantom_qualifier": qualifier, "minheight": mn, "height": ht,
            "all_certified": pd_certified, "chain_holds": chain_holds,
            "flags": flags, "bounds": {"e_max": e_max, "q0": spec.q0}}


# -- permutability and maximal-sequence scans ----------------------------------------


def permutability_check(xs, M, spec, e_max):
    """Run both orders of a length-2 sequence and flag certified asymmetry.

    A certified yes being impossible, the flaggable asymmetry is one order
    CertifiedNo while the other is witnessed-clean with certified step data
    at the same bounds.
    """
    if len(xs) != 2:
        raise InputError("permutability check expects a length-2 sequence")
    fwd = ghost_regular_sequence(xs, M, spec, e_max)
    rev = ghost_regular_sequence(list(reversed(xs)), M, spec, e_max)
    flag = ((fwd.certified_no and rev.certified_clean())
            or (rev.certified_no and fwd.certified_clean()))
    return {"forward": fwd.to_json(), "reverse": rev.to_json(),
            "symmetric_statuses": fwd.status == rev.status,
            "flagged": flag}


def default_candidate_pool(I_gens, ring, max_pool=8):
    """Small pool of elements of the ideal: generators and pairwise sums."""
    pool = []
    seen = set()
    cands = list(I_gens) + [a + b for a, b in itertools.combinations(I_gens, 2)]
    for f in cands:
        g = ring.normal(ring.poly(f))
        if g.is_zero() or g.constant_term() != 0:
            continue
        if g.key() in seen:
            continue
        seen.add(g.key())
        pool.append(g)
        if len(pool) >= max_pool:
            break
    return pool


def maximal_sequence_scan(I_gens, M, spec, e_max, pool=None, max_orders=6):
    """Greedily extend ghost sequences from a pool, in several orders.

    Reports the multiset of maximal lengths found, each tagged
    certified-extension-impossible (every remaining candidate CertifiedNo on
    the final quotient) or bound-limited, and flags length disagreement among
    the certified-maximal runs.
    """
    ring = M.ring
    I_gens = [ring.poly(g) for g in I_gens]
    if pool is None:
        pool = default_candidate_pool(I_gens, ring)
    orders = list(itertools.permutations(range(len(pool))))[:max_orders]
    runs = []
    for order in orders:
        current = M
        seq = []
        for idx in order:
            x = pool[idx]
            Q, _ = quotient_by_sequence(current, [x])
            if Q.is_zero_module():
                continue
            v = ghost_regular_element(x, current, spec, e_max)
            if v.status == CERTIFIED_NO:
                continue
            seq.append(x)
            current = Q
        exhausted = all(
            ghost_regular_element(x, current, spec, e_max).status == CERTIFIED_NO
            for x in pool)
        runs.append({"order": list(order), "sequence": [str(x) for x in seq],
                     "length": len(seq),
                     "maximality": "certified-extension-impossible" if exhausted
                     else "bound-limited"})
    certified_lengths = {r["length"] for r in runs
                         if r["maximality"] == "certified-extension-impossible"}
    return {"runs": runs,
            "lengths": sorted(r["length"] for r in runs),
            "flagged": len(certified_lengths) > 1,
            "bounds": {"e_max": e_max, "q0": spec.q0}}
