"""Verdict engine for Frobenius-closure and tight-closure membership.

Semi-decidable questions get five-valued answers:

* ``CertifiedMember`` -- trivial membership or a witness exponent q with
  z^q inside the q-th bracket power (unconditional certificates);
* ``CertifiedNonMember`` -- a checked exponent q' >= q0 where the declared
  multiplier fails the containment (conditional on the declaration);
* ``WitnessedUpTo`` / ``NoWitnessUpTo`` -- every / no scanned level passed,
  nothing certified;
* ``Unknown`` -- nothing scanned.

Test elements are user-declared, never derived, and every certified-negative
status is conditional on the declaration.  All "for all large powers"
quantifiers are scanned from q0 up to the stated bound, and the bounds used
appear verbatim in every verdict.  Scan grids are embarrassingly parallel and
verdict joins are order-independent, so results are schedule-independent.
"""

from __future__ import annotations

from .errors import InputError
from .modules import (ModuleElement, PresentedModule, Submodule, vec_is_zero,
                      vec_q_power, vec_scale, vec_str)

MEMBER = "CertifiedMember"
NONMEMBER = "CertifiedNonMember"
WITNESSED = "WitnessedUpTo"
NO_WITNESS = "NoWitnessUpTo"
UNKNOWN = "Unknown"

# property-flavoured statuses used by the complex-level checks
HOLDS = "CertifiedHolds"
FAILS = "CertifiedFails"
PHANTOM = "CertifiedPhantom"
NOT_PHANTOM = "CertifiedNotPhantom"

CONDITIONAL = "declared test element"


class Verdict:
    """Outcome of a bounded closure scan, with a replayable certificate."""

    __slots__ = ("status", "certificate", "bounds", "conditional_on", "e")

    def __init__(self, status, certificate=None, bounds=None, conditional_on=None,
                 e=None):
        self.status = status
        self.certificate = certificate
        self.bounds = dict(bounds or {})
        self.conditional_on = conditional_on
        self.e = e

    @property
    def certified_positive(self):
        return self.status in (MEMBER, HOLDS, PHANTOM)

    @property
    def certified_negative(self):
        return self.status in (NONMEMBER, FAILS, NOT_PHANTOM)

    @property
    def certified(self):
        return self.certified_positive or self.certified_negative

    def with_status(self, status):
        return Verdict(status, self.certificate, self.bounds, self.conditional_on,
                       self.e)

    def to_json(self):
        out = {"status": self.status}
        if self.e is not None:
            out["e"] = self.e
        out["certificate"] = self.certificate
        out["bounds"] = self.bounds
        if self.conditional_on:
            out["conditional_on"] = self.conditional_on
        return out

    def __repr__(self):
        extra = f"({self.e})" if self.e is not None else ""
        return f"<Verdict {self.status}{extra} cert={self.certificate}>"


class TestElementSpec:
    """A declared weak test element: multiplier c, starting power q0.

    The declaration is trusted, not derived; c must reduce to a nonzero
    element of the ring and q0 must be a power of the characteristic.
    """

    __slots__ = ("ring", "c", "q0", "e0", "locally_stable", "provenance")

    def __init__(self, ring, c, q0=1, locally_stable=False, provenance=""):
        self.ring = ring
        self.c = ring.poly(c)
        if ring.normal(self.c).is_zero():
            raise InputError("invalid test element declaration: c reduces to 0")
        e0 = 0
        q = 1
        while q < q0:
            q *= ring.p
            e0 += 1
        if q != q0:
            raise InputError(f"q0={q0} is not a power of p={ring.p}")
        self.q0 = q0
        self.e0 = e0
        self.locally_stable = bool(locally_stable)
        self.provenance = provenance

    def cn(self, n):
        """The composed multiplier c_n: c_{-1}=1 and c_{n+1} = c * c_n^{q0}."""
        if n < -1:
            raise InputError("n must be >= -1")
        if n == -1:
            return self.ring.one()
        if self.q0 == 1:
            return self.c ** (n + 1)
        exponent = (self.q0 ** (n + 1) - 1) // (self.q0 - 1)
        return self.c ** exponent

    def to_json(self):
        return {"c": str(self.c), "q0": self.q0,
                "locally_stable": self.locally_stable,
                "provenance": self.provenance}

    def __repr__(self):
        return f"<test element c={self.c}, q0={self.q0}>"


def cn_multiplier(spec, n):
    return spec.cn(n)


def _scan_exponents(spec, e_max):
    top = max(e_max, spec.e0)
    return list(range(spec.e0, top + 1))


def frobenius_closure_member(z, N, e_max):
    """Membership of z in the Frobenius closure of N inside its ambient module.

    Positive certificates are unconditional.  A certified negative needs the
    ring's user-declared regular flag (flat Frobenius: z^q in the bracket
    power iff z in N).
    """
    _check_pair(z, N)
    ring = z.parent.ring
    bounds = {"e_max": e_max}
    if N.contains(z.coords):
        return Verdict(MEMBER, {"kind": "trivial", "q": 1}, bounds)
    for e in range(1, e_max + 1):
        q = ring.p ** e
        if N.bracket_power(e).contains(vec_q_power(z.coords, e)):
            return Verdict(MEMBER, {"kind": "frobenius_witness", "q": q,
                                    "element": vec_str(z.coords)}, bounds)
    if ring.regular:
        return Verdict(NONMEMBER,
                       {"kind": "flat_frobenius", "q": 1,
                        "element": vec_str(z.coords)},
                       bounds, conditional_on="declared regular ring")
    return Verdict(NO_WITNESS, None, bounds, e=e_max)


def tight_closure_member(z, N, spec, e_max):
    """Membership of z in the tight closure of N inside its ambient module.

    Certified membership comes from trivial membership or a Frobenius-closure
    witness; certified non-membership from a failed scan point (conditional on
    the declared test element); otherwise the passing scan range is reported.
    """
    _check_pair(z, N)
    ring = z.parent.ring
    scan = _scan_exponents(spec, e_max)
    bounds = {"e_max": e_max, "q0": spec.q0,
              "scan_q": [ring.p ** e for e in scan]}
    if N.contains(z.coords):
        return Verdict(MEMBER, {"kind": "trivial", "q": 1}, bounds)
    for e in range(1, e_max + 1):
        q = ring.p ** e
        if N.bracket_power(e).contains(vec_q_power(z.coords, e)):
            return Verdict(MEMBER, {"kind": "frobenius_witness", "q": q,
                                    "element": vec_str(z.coords)}, bounds)
    for e1 in scan:
        q1 = ring.p ** e1
        cz = vec_scale(spec.c, vec_q_power(z.coords, e1))
        if not N.bracket_power(e1).contains(cz):
            return Verdict(NONMEMBER,
                           {"kind": "scan_failure", "q": q1,
                            "element": vec_str(z.coords), "c": str(spec.c)},
                           bounds, conditional_on=CONDITIONAL)
    return Verdict(WITNESSED, None, bounds, e=e_max)


def zero_submodule(M):
    return Submodule(M, [])


def zero_star_member(z, spec, e_max):
    """tight_closure_member specialized to N = 0."""
    return tight_closure_member(z, zero_submodule(z.parent), spec, e_max)


def zero_frobenius_member(z, e_max):
    return frobenius_closure_member(z, zero_submodule(z.parent), e_max)


def zero_star_members(zs, spec, e_max):
    return [zero_star_member(z, spec, e_max) for z in zs]


def verify_certificate(verdict, z, N, spec=None):
    """Replay a verdict's certificate using only normal forms."""
    cert = verdict.certificate
    if cert is None:
        return verdict.status in (WITNESSED, NO_WITNESS, UNKNOWN)
    kind = cert.get("kind")
    ring = z.parent.ring
    if kind == "trivial":
        return N.contains(z.coords)
    if kind == "frobenius_witness":
        e = _log_q(cert["q"], ring.p)
        return N.bracket_power(e).contains(vec_q_power(z.coords, e))
    if kind == "scan_failure":
        e = _log_q(cert["q"], ring.p)
        cz = vec_scale(spec.c, vec_q_power(z.coords, e))
        return not N.bracket_power(e).contains(cz)
    if kind == "flat_frobenius":
        return ring.regular and not N.contains(z.coords)
    return False


def _log_q(q, p):
    e = 0
    while p ** e < q:
        e += 1
    if p ** e != q:
        raise InputError(f"{q} is not a power of {p}")
    return e


def _check_pair(z, N):
    if not isinstance(z, ModuleElement):
        raise InputError("expected a module element")
    if z.parent != N.ambient:
        raise InputError("element and submodule live in different modules")


# -- reduced Frobenius powers ---------------------------------------------------


def candidate_pool(M, degree=None):
    """Monomial multiples of the standard generators, up to a degree bound."""
    ring = M.ring
    if degree is None:
        degree = max(1, M.max_relation_degree())
    monos = _monomials_up_to(ring, degree)
    out = []
    seen = set()
    for i in range(M.rank):
        for m in monos:
            v = M.reduce(vec_scale(m, M.std_gen(i)))
            if vec_is_zero(v):
                continue
            k = tuple(f.key() for f in v)
            if k in seen:
                continue
            seen.add(k)
            out.append(v)
    return out


def _monomials_up_to(ring, degree):
    out = []

    def walk(prefix, left):
        if len(prefix) == ring.nvars - 1:
            out.append(ring.monomial(tuple(prefix + [left])))
            return
        for e in range(left + 1):
            walk(prefix + [e], left - e)

    for d in range(degree + 1):
        walk([], d)
    return out


def reduced_frobenius(M, e, spec, e_max, candidate_degree=None):
    """Approximation of the e-th reduced Frobenius power F^e(M)/0^*.

    The quotient is by the span of pool candidates whose 0^*-membership is
    CertifiedMember, plus those only WitnessedUpTo; the returned qualifier
    records which quotient generators were certified and which were merely
    witnessed, so the result is sandwiched by the certified data.
    """
    FM = M.frobenius(e)
    certified, witnessed = [], []
    for v in candidate_pool(FM, candidate_degree):
        verdict = zero_star_member(FM.element(v), spec, e_max)
        if verdict.status == MEMBER:
            certified.append(v)
        elif verdict.status == WITNESSED:
            witnessed.append(v)
    G = PresentedModule(M.ring, FM.rank,
                        list(FM.relations) + certified + witnessed)
    qualifier = {
        "certified": [vec_str(v) for v in certified],
        "witnessed": [vec_str(v) for v in witnessed],
        "bounds": {"e_max": e_max, "q0": spec.q0},
    }
    return G, qualifier


# -- Nakayama-style checks ---------------------------------------------------------


def nakayama_generic_check(L, N, M, spec, e_max):
    """Evaluate one instance of the generic tight-closure Nakayama implication.

    Hypothesis: every generator of N lies in (L + m N)^* inside M.
    Conclusion: every generator of N lies in L^* inside M.
    A certified-negative conclusion paired with a hypothesis that held at
    witnessed-or-better is flagged for human review, never auto-asserted.
    """
    ring = M.ring
    L_sub = L if isinstance(L, Submodule) else Submodule(M, L)
    N_sub = N if isinstance(N, Submodule) else Submodule(M, N)
    for g in L_sub.gens:
        if not N_sub.contains(g):
            raise InputError("containment L <= N fails at construction")
    hyp_gens = list(L_sub.gens)
    for x in ring.gens():
        for w in N_sub.gens:
            hyp_gens.append(vec_scale(x, w))
    hyp_sub = Submodule(M, hyp_gens)
    report = {"hypothesis": [], "conclusion": [], "flagged": False,
              "bounds": {"e_max": e_max, "q0": spec.q0}}
    hyp_ok = True
    for w in N_sub.gens:
        hv = tight_closure_member(M.element(w), hyp_sub, spec, e_max)
        report["hypothesis"].append({"generator": vec_str(w), "verdict": hv.to_json()})
        if hv.status not in (MEMBER, WITNESSED):
            hyp_ok = False
    for w in N_sub.gens:
        cv = tight_closure_member(M.element(w), L_sub, spec, e_max)
        report["conclusion"].append({"generator": vec_str(w), "verdict": cv.to_json()})
        if hyp_ok and cv.status == NONMEMBER:
            report["flagged"] = True
            report["flag_note"] = ("potential counterexample for review: "
                                   "hypothesis only witnessed, not certified")
    return report


def nakayama_family_check(L, M, family, spec, e_max=None):
    """Evaluate the nuts-and-bolts Nakayama instance for a submodule family.

    ``family[e]`` is a submodule of F^e(M) containing the e-th bracket power
    of L.  The displayed hypothesis containment is checked exactly for every
    pair (e, e') with e' >= e0 inside the supplied family, then the
    conclusion (each N_e inside the tight closure of the bracket power of L)
    is reported per level.
    """
    ring = M.ring
    L_sub = L if isinstance(L, Submodule) else Submodule(M, L)
    E = len(family) - 1
    if e_max is None:
        e_max = E
    pairs = [(e, e1) for e in range(E + 1) for e1 in range(spec.e0, E + 1 - e)
             if e1 >= spec.e0]
    if not pairs:
        raise InputError("family too short to test any (e, e') pair with e' >= e0")
    for e in range(E + 1):
        Lq = L_sub.bracket_power(e)
        if not all(family[e].contains(g) for g in Lq.gens):
            raise InputError(f"family member at e={e} does not contain the "
                             "bracket power of L")
    report = {"hypothesis": [], "conclusion": [], "hypothesis_all_hold": True,
              "flagged": False, "bounds": {"e_max": e_max, "q0": spec.q0}}
    for e, e1 in pairs:
        q1 = ring.p ** e1
        FeM = M.frobenius(e + e1)
        target_gens = list(L_sub.bracket_power(e + e1).gens)
        for x in ring.gens():
            xq = x.q_power(e + e1)
            for w in family[e + e1].gens:
                target_gens.append(vec_scale(xq, w))
        target = Submodule(FeM, target_gens)
        ok = True
        for nu in family[e].gens:
            cnu = vec_scale(spec.c, vec_q_power(nu, e1))
            if not target.contains(cnu):
                ok = False
                break
        report["hypothesis"].append({"e": e, "e_prime": e1, "holds": ok})
        if not ok:
            report["hypothesis_all_hold"] = False
    for e in range(E + 1):
        FeM = M.frobenius(e)
        Lq = Submodule(FeM, L_sub.bracket_power(e).gens)
        verdicts = []
        for nu in family[e].gens:
            v = tight_closure_member(FeM.element(nu), Lq, spec, e_max)
            verdicts.append({"generator": vec_str(nu), "verdict": v.to_json()})
            if report["hypothesis_all_hold"] and v.status == NONMEMBER:
                report["flagged"] = True
                report["flag_note"] = ("potential counterexample for review: "
                                       "hypothesis held only on the scanned grid")
        report["conclusion"].append({"e": e, "generators": verdicts})
    return report


def default_family(N, M, up_to_e):
    """The single-submodule default: N_e is the e-th bracket power of N."""
    N_sub = N if isinstance(N, Submodule) else Submodule(M, N)
    return [N_sub.bracket_power(e) for e in range(up_to_e + 1)]
