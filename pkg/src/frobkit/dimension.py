"""Krull dimension and minimal primes of monomial ideals.

Dimension goes through maximal independent variable sets of the initial
ideal; minimal primes of a monomial ideal are the minimal vertex covers of
the supports of its generators.
"""

from __future__ import annotations

from . import groebner
from .errors import InputError, UnsupportedInputError


def krull_dimension(I_gens, ring):
    """Krull dimension of (ring / I).

    The defining ideal is folded in, so over a quotient ring this is the
    dimension of the full quotient.  The zero ring has dimension -1.
    """
    I_gens = [ring.poly(g) for g in I_gens]
    basis = groebner.groebner(I_gens + list(ring.defining), ring)
    supports = []
    for g in basis:
        lead, _ = g.lead()
        if not any(lead):
            return -1  # unit ideal
        supports.append(frozenset(i for i, e in enumerate(lead) if e))
    return _max_independent(supports, ring.nvars)


def _max_independent(supports, nvars):
    """Largest #vars whose induced set misses every support entirely."""
    supports = [s for s in supports if s]
    best = 0

    def rec(idx, chosen):
        nonlocal best
        if idx == nvars:
            best = max(best, len(chosen))
            return
        if len(chosen) + (nvars - idx) <= best:
            return
        chosen.add(idx)
        if all(not s <= chosen for s in supports):
            rec(idx + 1, chosen)
        chosen.remove(idx)
        rec(idx + 1, chosen)

    rec(0, set())
    return best


def monomial_minimal_primes(gens, ring):
    """Minimal primes of a monomial ideal, as tuples of variable indices.

    Each prime is generated by variables; they are exactly the minimal
    vertex covers of the generators' supports.  Non-monomial input is
    rejected: supply the primes explicitly in that case.
    """
    supports = []
    for g in gens:
        g = ring.poly(g)
        if g.is_zero():
            continue
        if not g.is_monomial():
            raise UnsupportedInputError(
                f"generator {g} is not a monomial; minimal primes of general "
                "ideals are unsupported, supply them explicitly")
        (exps, _), = g.terms.items()
        supports.append(frozenset(i for i, e in enumerate(exps) if e))
    if any(not s for s in supports):
        raise InputError("the unit ideal has no minimal primes")
    if not supports:
        return [()]
    covers = _minimal_covers(supports)
    return [tuple(sorted(c)) for c in sorted(covers, key=lambda c: (len(c), sorted(c)))]


def _minimal_covers(supports):
    """All minimal hitting sets of a small hypergraph, by branching."""
    found = []

    def covers_all(cand):
        return all(cand & s for s in supports)

    def rec(idx, chosen):
        uncovered = [s for s in supports if not (chosen & s)]
        if not uncovered:
            found.append(frozenset(chosen))
            return
        edge = min(uncovered, key=lambda s: (len(s), sorted(s)))
        for v in sorted(edge):
            rec(idx + 1, chosen | {v})

    rec(0, frozenset())
    minimal = []
    for c in found:
        if not any(other < c for other in found):
            if c not in minimal:
                minimal.append(c)
    return minimal
