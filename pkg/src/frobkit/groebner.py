"""Buchberger machinery for ideals and submodules of free modules.

Vectors are handled internally as dicts mapping (position, exponents) to
nonzero coefficients mod p; an ideal is the rank-1 case.  The module order is
position-over-term: lower positions dominate, ties are broken by the ring's
monomial order.  Pair selection uses the normal strategy (minimal lcm total
degree first) with deterministic tie-breaking by generator index, so bases
are reproducible run to run.

Reduced bases are memoized in-process keyed by (ring, rank, generators).  An
optional persistent store can be attached with :func:`set_store`; loaded
entries are re-validated and recomputed when corrupt, never trusted.  Cache
fills are deterministic, so concurrent fills of one key converge and
last-write-wins is safe.
"""

from __future__ import annotations

import heapq

from .errors import BudgetError, FrobkitError, InputError
from .ring import Poly

_CACHE = {}
_STATS = {"hits": 0, "misses": 0, "store_hits": 0}
_STORE = None


def set_store(store):
    """Attach (or detach with None) a persistent basis store."""
    global _STORE
    _STORE = store


def cache_stats():
    return dict(_STATS)


def clear_cache():
    _CACHE.clear()
    for k in _STATS:
        _STATS[k] = 0


# -- internal representation ---------------------------------------------------


def _vec_to_dict(vec, ring):
    """tuple-of-Poly -> {(pos, exps): coeff}; a bare Poly is a rank-1 vector."""
    if isinstance(vec, Poly):
        vec = (vec,)
    out = {}
    for pos, f in enumerate(vec):
        if f.ring != ring:
            raise InputError("vector entry from a different ring")
        for m, c in f.terms.items():
            out[(pos, m)] = c
    return out


def _dict_to_vec(d, ring, rank):
    coords = [{} for _ in range(rank)]
    for (pos, m), c in d.items():
        coords[pos][m] = c
    return tuple(Poly(ring, t) for t in coords)


def _vkey(d):
    return tuple(sorted(d.items()))


def _term_key(ring):
    ok = ring.order_key
    return lambda t: (-t[0], ok(t[1]))


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _monic(d, lt, p):
    c = d[lt]
    if c == 1:
        return d
    inv = pow(c, p - 2, p)
    return {t: v * inv % p for t, v in d.items()}


class _Basis:
    """Groebner basis with a per-position reducer index."""

    __slots__ = ("ring", "rank", "elems", "index", "tk")

    def __init__(self, ring, rank):
        self.ring = ring
        self.rank = rank
        self.elems = []           # list of (lead_term, dict, maxdeg)
        self.index = {}           # pos -> list of element indices
        self.tk = _term_key(ring)

    def add(self, d):
        lt = max(d, key=self.tk)
        maxdeg = max(sum(t[1]) for t in d)
        self.elems.append((lt, d, maxdeg))
        self.index.setdefault(lt[0], []).append(len(self.elems) - 1)

    def find_reducer(self, t):
        for i in self.index.get(t[0], ()):
            lt, d, maxdeg = self.elems[i]
            if _divides(lt[1], t[1]):
                return i
        return None


def _reduce_full(h, basis, ring, quotients=None):
    """Full normal form of dict-vector h against basis (monic elements).

    When ``quotients`` is a dict it accumulates, per basis index, the
    monomial combination used, so callers can reconstruct h = sum q_i g_i + r.
    """
    p = ring.p
    budget = ring.degree_budget
    tk = basis.tk
    h = dict(h)
    out = {}
    while h:
        t = max(h, key=tk)
        i = basis.find_reducer(t)
        if i is None:
            out[t] = h.pop(t)
            continue
        lt, g, gmaxdeg = basis.elems[i]
        c = h[t]
        shift = tuple(a - b for a, b in zip(t[1], lt[1]))
        if budget is not None and sum(shift) + gmaxdeg > budget:
            raise BudgetError(
                f"normal-form step needs degree {sum(shift) + gmaxdeg} "
                f"> budget {budget}")
        if quotients is not None:
            q = quotients.setdefault(i, {})
            q[shift] = (q.get(shift, 0) + c) % p
        for (gp, gm), gc in g.items():
            nt = (gp, tuple(a + b for a, b in zip(gm, shift)))
            v = (h.get(nt, 0) - c * gc) % p
            if v:
                h[nt] = v
            else:
                h.pop(nt, None)
    return out


def _spair_data(e1, e2):
    (p1, m1), d1, _ = e1
    (p2, m2), d2, _ = e2
    lcm = tuple(max(a, b) for a, b in zip(m1, m2))
    return lcm


def _spair(e1, e2, lcm, p):
    (p1, m1), d1, _ = e1
    (p2, m2), d2, _ = e2
    s1 = tuple(a - b for a, b in zip(lcm, m1))
    s2 = tuple(a - b for a, b in zip(lcm, m2))
    out = {}
    for (gp, gm), gc in d1.items():
        nt = (gp, tuple(a + b for a, b in zip(gm, s1)))
        out[nt] = gc
    for (gp, gm), gc in d2.items():
        nt = (gp, tuple(a + b for a, b in zip(gm, s2)))
        v = (out.get(nt, 0) - gc) % p
        if v:
            out[nt] = v
        else:
            out.pop(nt, None)
    return out, s1, s2


def _buchberger(gens, ring, rank, track=False):
    """Reduced Groebner basis of the span of gens (dict-vectors).

    With ``track`` also returns, per basis element, its representation as a
    combination of the input generators (a dict gen_index -> coeff dict).
    """
    p = ring.p
    tk = _term_key(ring)
    basis = _Basis(ring, rank)
    reps = []

    def rep_combine(target, factor_shift, factor_c, source_rep):
        for j, poly in source_rep.items():
            acc = target.setdefault(j, {})
            for m, c in poly.items():
                nm = tuple(a + b for a, b in zip(m, factor_shift))
                v = (acc.get(nm, 0) + factor_c * c) % p
                if v:
                    acc[nm] = v
                else:
                    acc.pop(nm, None)
            if not acc:
                target.pop(j, None)

    def reduce_tracked(h, hrep):
        quotients = {}
        r = _reduce_full(h, basis, ring, quotients)
        for i, q in quotients.items():
            for shift, c in q.items():
                rep_combine(hrep, shift, (-c) % p, reps[i])
        return r

    def add_elem(h, hrep):
        lt = max(h, key=tk)
        c = h[lt]
        if c != 1:
            inv = pow(c, p - 2, p)
            h = {t: v * inv % p for t, v in h.items()}
            if track:
                hrep = {j: {m: v * inv % p for m, v in poly.items()}
                        for j, poly in hrep.items()}
        idx = len(basis.elems)
        basis.add(h)
        if track:
            reps.append(hrep)
        zero_shift = (0,) * ring.nvars
        for i, (lt2, _, _) in enumerate(basis.elems[:-1]):
            if lt2[0] != lt[0]:
                continue
            lcm = tuple(max(a, b) for a, b in zip(lt2[1], lt[1]))
            heapq.heappush(pairs, (sum(lcm), i, idx, lcm))
        return idx

    pairs = []
    for j, g in enumerate(gens):
        if not g:
            continue
        grep = {j: {(0,) * ring.nvars: 1}} if track else None
        h = reduce_tracked(dict(g), grep) if track else _reduce_full(g, basis, ring)
        if h:
            add_elem(h, grep)

    while pairs:
        if len(basis.elems) > ring.basis_budget:
            raise BudgetError(
                f"basis size exceeded the budget {ring.basis_budget}")
        _, i, j, lcm = heapq.heappop(pairs)
        e1, e2 = basis.elems[i], basis.elems[j]
        if rank == 1:
            # product criterion: coprime leads, valid for ideals only
            m1, m2 = e1[0][1], e2[0][1]
            if all(a + b == c for a, b, c in zip(m1, m2, lcm)):
                continue
        s, s1, s2 = _spair(e1, e2, lcm, p)
        if track:
            srep = {}
            rep_combine(srep, s1, 1, reps[i])
            rep_combine(srep, s2, p - 1, reps[j])
            h = reduce_tracked(s, srep)
        else:
            srep = None
            h = _reduce_full(s, basis, ring)
        if h:
            add_elem(h, srep)

    return _autoreduce(basis, reps if track else None, ring, rank, track)


def _autoreduce(basis, reps, ring, rank, track):
    """Minimalize and tail-reduce, returning a canonical reduced basis."""
    p = ring.p
    tk = _term_key(ring)
    order = sorted(range(len(basis.elems)), key=lambda i: tk(basis.elems[i][0]))
    kept = []
    kept_leads = []
    for i in order:
        lt = basis.elems[i][0]
        if any(klt[0] == lt[0] and _divides(klt[1], lt[1]) for klt in kept_leads):
            continue
        kept.append(i)
        kept_leads.append(lt)

    final = _Basis(ring, rank)
    final_reps = []
    for pos_in_kept, i in enumerate(kept):
        lt, d, _ = basis.elems[i]
        others = _Basis(ring, rank)
        for jj in kept:
            if jj != i:
                others.add(basis.elems[jj][1])
        if track:
            quotients = {}
            r = _reduce_full(d, others, ring, quotients)
            rep = {j: dict(poly) for j, poly in reps[i].items()}
            other_ids = [jj for jj in kept if jj != i]
            for oi, q in quotients.items():
                src = reps[other_ids[oi]]
                for shift, c in q.items():
                    for j, poly in src.items():
                        acc = rep.setdefault(j, {})
                        for m, cc in poly.items():
                            nm = tuple(a + b for a, b in zip(m, shift))
                            v = (acc.get(nm, 0) - c * cc) % p
                            if v:
                                acc[nm] = v
                            else:
                                acc.pop(nm, None)
                        if not acc:
                            rep.pop(j, None)
            final_reps.append(rep)
        else:
            r = _reduce_full(d, others, ring)
        final.add(r)

    order2 = sorted(range(len(final.elems)), key=lambda i: tk(final.elems[i][0]))
    elems = [final.elems[i][1] for i in order2]
    if track:
        return elems, [final_reps[i] for i in order2]
    return elems


# -- public API (tuples of Poly; a bare Poly is a rank-1 vector) -----------------


def _normalize_gens(gens, ring, rank):
    dicts = []
    seen = set()
    for g in gens:
        d = _vec_to_dict(g, ring)
        if not d:
            continue
        k = _vkey(d)
        if k in seen:
            continue
        seen.add(k)
        dicts.append(d)
    dicts.sort(key=_vkey)
    return dicts


def module_groebner(gens, ring, rank, use_cache=True):
    """Reduced Groebner basis of the submodule of R^rank spanned by gens."""
    dicts = _normalize_gens(gens, ring, rank)
    key = (ring.key(), rank, tuple(_vkey(d) for d in dicts))
    if use_cache:
        hit = _CACHE.get(key)
        if hit is not None:
            _STATS["hits"] += 1
            return [_dict_to_vec(d, ring, rank) for d in hit]
        if _STORE is not None:
            stored = _STORE.load(key, ring, rank)
            if stored is not None:
                _STATS["store_hits"] += 1
                _CACHE[key] = stored
                return [_dict_to_vec(d, ring, rank) for d in stored]
        _STATS["misses"] += 1
    out = _buchberger(dicts, ring, rank)
    if use_cache:
        _CACHE[key] = out
        if _STORE is not None:
            _STORE.store(key, out, ring, rank)
    return [_dict_to_vec(d, ring, rank) for d in out]


def groebner(gens, ring, use_cache=True):
    """Reduced Groebner basis of an ideal, as a list of Poly."""
    basis = module_groebner([(g,) for g in gens], ring, 1, use_cache)
    return [v[0] for v in basis]


def _basis_from_vecs(basis_vecs, ring, rank):
    b = _Basis(ring, rank)
    for v in basis_vecs:
        d = _vec_to_dict(v, ring)
        if d:
            b.add(_monic(d, max(d, key=b.tk), ring.p))
    return b


def module_nf(vec, basis_vecs, ring, rank):
    """Full normal form of a vector against a (Groebner) basis."""
    b = _basis_from_vecs(basis_vecs, ring, rank)
    d = _vec_to_dict(vec, ring)
    return _dict_to_vec(_reduce_full(d, b, ring), ring, rank)


def nf(f, basis, ring):
    """Normal form of a polynomial against a list of Poly."""
    return module_nf((f,), [(g,) for g in basis], ring, 1)[0]


def reduces_to_zero(vec, basis_vecs, ring, rank):
    b = _basis_from_vecs(basis_vecs, ring, rank)
    return not _reduce_full(_vec_to_dict(vec, ring), b, ring)


def syzygies(gens, ring, rank):
    """Generators of the syzygy module of gens inside R^len(gens).

    Computed by eliminating the leading block: each generator is tagged with
    a unit vector in an auxiliary block, a Groebner basis is computed under
    the position-over-term order (real positions dominate the tags), and the
    basis elements supported only on tags are the syzygies.
    """
    gens = [(_vec_to_dict(g, ring)) for g in gens]
    k = len(gens)
    ckey = ("syz", ring.key(), rank, tuple(_vkey(d) for d in gens))
    hit = _CACHE.get(ckey)
    if hit is not None:
        _STATS["hits"] += 1
        return [_dict_to_vec(d, ring, k) for d in hit]
    _STATS["misses"] += 1
    zero = (0,) * ring.nvars
    embedded = []
    for j, g in enumerate(gens):
        d = dict(g)
        d[(rank + j, zero)] = 1
        embedded.append(d)
    basis = _buchberger(embedded, ring, rank + k)
    syz = []
    for d in basis:
        if all(pos >= rank for pos, _ in d):
            syz.append({(pos - rank, m): c for (pos, m), c in d.items()})
    reduced = _buchberger(syz, ring, k) if syz else []
    _CACHE[ckey] = reduced
    return [_dict_to_vec(d, ring, k) for d in reduced]


def solve(vec, gens, ring, rank):
    """Coefficients expressing vec in the span of gens, or None.

    Returns a list of Poly (one per generator) with
    ``sum coeff_j * gens[j] == vec`` exactly; the choice is deterministic.
    """
    dicts = [_vec_to_dict(g, ring) for g in gens]
    live = [(j, d) for j, d in enumerate(dicts) if d]
    basis, reps = _buchberger([d for _, d in live], ring, rank, track=True)
    b = _Basis(ring, rank)
    for d in basis:
        b.add(d)
    quotients = {}
    r = _reduce_full(_vec_to_dict(vec, ring), b, ring, quotients)
    if r:
        return None
    p = ring.p
    coeffs = [{} for _ in gens]
    for i, q in quotients.items():
        rep = reps[i]
        for shift, c in q.items():
            for jlive, poly in rep.items():
                j = live[jlive][0]
                acc = coeffs[j]
                for m, cc in poly.items():
                    nm = tuple(a + b for a, b in zip(m, shift))
                    v = (acc.get(nm, 0) + c * cc) % p
                    if v:
                        acc[nm] = v
                    else:
                        acc.pop(nm, None)
    out = [Poly(ring, t) for t in coeffs]
    # paranoia: replay the combination
    acc = {}
    for j, g in enumerate(dicts):
        cj = out[j].terms
        for m, c in cj.items():
            for (gp, gm), gc in g.items():
                nt = (gp, tuple(a + b for a, b in zip(gm, m)))
                v = (acc.get(nt, 0) + c * gc) % p
                if v:
                    acc[nt] = v
                else:
                    acc.pop(nt, None)
    if acc != _vec_to_dict(vec, ring):
        raise FrobkitError("internal error: solve verification failed")
    return out


def is_reduced_groebner(basis_vecs, ring, rank):
    """Full check: monic, pairwise reduced, and all S-vectors reduce to zero."""
    p = ring.p
    tk = _term_key(ring)
    dicts = []
    for v in basis_vecs:
        d = _vec_to_dict(v, ring)
        if not d:
            return False
        dicts.append(d)
    leads = [max(d, key=tk) for d in dicts]
    for d, lt in zip(dicts, leads):
        if d[lt] != 1:
            return False
    for i, d in enumerate(dicts):
        for t in d:
            for j, lt in enumerate(leads):
                if i == j and t == leads[i]:
                    continue
                if lt[0] == t[0] and _divides(lt[1], t[1]):
                    return False
    b = _Basis(ring, rank)
    for d in dicts:
        b.add(d)
    for i in range(len(dicts)):
        for j in range(i + 1, len(dicts)):
            if leads[i][0] != leads[j][0]:
                continue
            lcm = tuple(max(a, c) for a, c in zip(leads[i][1], leads[j][1]))
            s, _, _ = _spair(b.elems[i], b.elems[j], lcm, p)
            if _reduce_full(s, b, ring):
                return False
    return True
