"""Finitely presented modules, module maps, and the Frobenius functor.

A module is the cokernel of a presentation matrix over the ambient
polynomial ring; columns are relations.  Over a quotient ring, defining-ideal
columns are appended lazily at computation time and are never stored in the
presentation, so Frobenius powers act on the stored matrix literally while
the result stays a module over the same ring (defining columns are not
raised).

Submodules are always carried as lifted generators inside R^rank.
Presentations are never minimized automatically; module comparisons go
through mutual reduction, not presentation equality.
"""

from __future__ import annotations

import itertools

from . import groebner
from .errors import InputError
from .ring import Poly


def as_vector(ring, rank, entries):
    """Coerce a list of strings/ints/Polys into a rank-length tuple of Poly."""
    entries = tuple(ring.poly(e) for e in entries)
    if len(entries) != rank:
        raise InputError(f"expected a vector of length {rank}, got {len(entries)}")
    return entries


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def vec_q_power(v, e):
    return tuple(a.q_power(e) for a in v)


def vec_is_zero(v):
    return all(a.is_zero() for a in v)


def vec_str(v):
    return "(" + ", ".join(str(a) for a in v) + ")"


def matrix_apply(matrix, vec, ring):
    """matrix (rows x cols) times a cols-vector, over the ambient ring."""
    if not matrix:
        return ()
    out = []
    for row in matrix:
        acc = ring.zero()
        for a, x in zip(row, vec):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return tuple(out)


def matrix_columns(matrix, ncols):
    if not matrix:
        return []
    return [tuple(row[j] for row in matrix) for j in range(ncols)]


def matrix_q_power(matrix, e):
    """Entrywise p^e-th power of a matrix."""
    return tuple(tuple(a.q_power(e) for a in row) for row in matrix)


def matrix_product(a, b, ring):
    """Matrix product over the ambient ring (a: m x k, b: k x n)."""
    if not a or not b:
        return tuple(tuple() for _ in a)
    n = len(b[0])
    out = []
    for row in a:
        new = []
        for j in range(n):
            acc = ring.zero()
            for t, entry in enumerate(row):
                if entry and b[t][j]:
                    acc = acc + entry * b[t][j]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


class PresentedModule:
    """Cokernel of a presentation matrix, given by its relation columns."""

    __slots__ = ("ring", "rank", "relations", "_with_ideal", "_basis", "_key")

    def __init__(self, ring, rank, relations=()):
        if rank < 0:
            raise InputError("rank must be a natural number")
        self.ring = ring
        self.rank = rank
        rels = []
        for col in relations:
            v = as_vector(ring, rank, col)
            if not vec_is_zero(v):
                rels.append(v)
        self.relations = tuple(rels)
        self._with_ideal = None
        self._basis = None
        self._key = (ring.key(), rank,
                     tuple(sorted(tuple(f.key() for f in col) for col in self.relations)))

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, ())

    @classmethod
    def ring_as_module(cls, ring):
        return cls(ring, 1, ())

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, PresentedModule) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (f"<module of rank {self.rank} with {len(self.relations)} relations "
                f"over {self.ring!r}>")

    # -- membership ------------------------------------------------------------

    def relation_gens_with_ideal(self):
        """Presentation columns plus defining-ideal columns per coordinate."""
        if self._with_ideal is None:
            cols = list(self.relations)
            zero = self.ring.zero()
            for g in self.ring.defining_basis():
                for i in range(self.rank):
                    col = [zero] * self.rank
                    col[i] = g
                    cols.append(tuple(col))
            self._with_ideal = cols
        return self._with_ideal

    def relation_basis(self):
        if self._basis is None:
            self._basis = groebner.module_groebner(
                self.relation_gens_with_ideal(), self.ring, self.rank)
        return self._basis

    def reduce(self, vec):
        """Canonical representative of a vector modulo the relations."""
        if self.rank == 0:
            return ()
        return groebner.module_nf(vec, self.relation_basis(), self.ring, self.rank)

    def is_zero_elem(self, vec):
        return vec_is_zero(self.reduce(vec))

    def is_zero_module(self):
        if self.rank == 0:
            return True
        return all(self.is_zero_elem(self.std_gen(i)) for i in range(self.rank))

    def std_gen(self, i):
        col = [self.ring.zero()] * self.rank
        col[i] = self.ring.one()
        return tuple(col)

    def std_gens(self):
        return [self.std_gen(i) for i in range(self.rank)]

    def element(self, coords):
        return ModuleElement(self, as_vector(self.ring, self.rank, coords))

    def zero_elem(self):
        return ModuleElement(self, tuple(self.ring.zero() for _ in range(self.rank)))

    # -- functorial structure ----------------------------------------------------

    def frobenius(self, e):
        """Raise each relation entrywise to the p^e-th power.

        Defining-ideal columns are appended at computation time and are not
        raised: the result is a module over the same ring.
        """
        if e == 0:
            return self
        return PresentedModule(
            self.ring, self.rank, [vec_q_power(col, e) for col in self.relations])

    def max_relation_degree(self):
        degs = [f.total_degree() for col in self.relations for f in col]
        degs += [g.total_degree() for g in self.ring.defining]
        degs = [d for d in degs if d >= 0]
        return max(degs, default=0)


class ModuleElement:
    """An element of a presented module, carried by a lifted representative."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        self.parent = parent
        self.coords = coords

    def __eq__(self, other):
        return (isinstance(other, ModuleElement) and self.parent == other.parent
                and self.parent.is_zero_elem(vec_sub(self.coords, other.coords)))

    def __hash__(self):
        raise TypeError("module elements are unhashable (equality is modulo relations)")

    def is_zero(self):
        return self.parent.is_zero_elem(self.coords)

    def __add__(self, other):
        self._check(other)
        return ModuleElement(self.parent, vec_add(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        return ModuleElement(self.parent, vec_sub(self.coords, other.coords))

    def __rmul__(self, c):
        c = self.parent.ring.poly(c)
        return ModuleElement(self.parent, vec_scale(c, self.coords))

    def _check(self, other):
        if not isinstance(other, ModuleElement) or other.parent != self.parent:
            raise InputError("elements of different modules")

    def power(self, e):
        """The p^e-th power, an element of the e-th Frobenius power module.

        The parent module is named explicitly here: entrywise powering of the
        representative, independent of the representative chosen.
        """
        return ModuleElement(self.parent.frobenius(e), vec_q_power(self.coords, e))

    def reduce(self):
        return ModuleElement(self.parent, self.parent.reduce(self.coords))

    def __str__(self):
        return vec_str(self.coords)

    def __repr__(self):
        return f"<element {self} of {self.parent!r}>"


class Submodule:
    """A submodule of a presented module, carried by lifted generators."""

    __slots__ = ("ambient", "gens", "_basis")

    def __init__(self, ambient, gens):
        self.ambient = ambient
        self.gens = tuple(as_vector(ambient.ring, ambient.rank, g) for g in gens)
        self._basis = None

    def membership_basis(self):
        if self._basis is None:
            self._basis = groebner.module_groebner(
                list(self.gens) + list(self.ambient.relation_gens_with_ideal()),
                self.ambient.ring, self.ambient.rank)
        return self._basis

    def reduce(self, vec):
        if self.ambient.rank == 0:
            return ()
        return groebner.module_nf(vec, self.membership_basis(),
                                  self.ambient.ring, self.ambient.rank)

    def contains(self, vec):
        return vec_is_zero(self.reduce(vec))

    def contains_submodule(self, other):
        return all(self.contains(g) for g in other.gens)

    def same_as(self, other):
        return self.contains_submodule(other) and other.contains_submodule(self)

    def bracket_power(self, e):
        """Entrywise p^e-th powers of the lifted generators, inside F^e(ambient)."""
        if e == 0:
            return self
        return Submodule(self.ambient.frobenius(e),
                         [vec_q_power(g, e) for g in self.gens])

    def quotient_module(self):
        """The ambient module modulo this submodule."""
        return PresentedModule(self.ambient.ring, self.ambient.rank,
                               list(self.ambient.relations) + list(self.gens))

    def __repr__(self):
        return f"<submodule with {len(self.gens)} generators of {self.ambient!r}>"


class ModuleMap:
    """A map of presented modules given by a matrix on generators.

    Construction checks the well-definedness certificate: the matrix must
    carry every source relation column into the target relations.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix, check=True):
        if source.ring != target.ring:
            raise InputError("source and target over different rings")
        ring = source.ring
        matrix = tuple(tuple(ring.poly(a) for a in row) for row in matrix)
        if len(matrix) != target.rank or any(len(r) != source.rank for r in matrix):
            raise InputError(
                f"matrix shape {len(matrix)}x{len(matrix[0]) if matrix else 0} "
                f"does not match {target.rank}x{source.rank}")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            for col in source.relations:
                img = matrix_apply(matrix, col, ring)
                if not target.is_zero_elem(img):
                    raise InputError(
                        "matrix does not carry source relations into target "
                        f"relations (offending column {vec_str(col)})")

    @classmethod
    def identity(cls, module):
        ring = module.ring
        m = [[ring.one() if i == j else ring.zero() for j in range(module.rank)]
             for i in range(module.rank)]
        return cls(module, module, m, check=False)

    @classmethod
    def multiplication(cls, module, scalar, target=None):
        ring = module.ring
        scalar = ring.poly(scalar)
        tgt = target if target is not None else module
        m = [[scalar if i == j else ring.zero() for j in range(module.rank)]
             for i in range(tgt.rank)]
        return cls(module, tgt, m)

    def apply(self, vec):
        return matrix_apply(self.matrix, vec, self.source.ring)

    def apply_element(self, elem):
        if elem.parent != self.source:
            raise InputError("element not in the source module")
        return ModuleElement(self.target, self.apply(elem.coords))

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise InputError("maps not composable")
        return ModuleMap(other.source, self.target,
                         matrix_product(self.matrix, other.matrix, self.source.ring),
                         check=False)

    def frobenius(self, e):
        """Entrywise p^e-th power on source, target and matrix."""
        if e == 0:
            return self
        return ModuleMap(self.source.frobenius(e), self.target.frobenius(e),
                         matrix_q_power(self.matrix, e), check=False)

    def image(self):
        return Submodule(self.target, matrix_columns(self.matrix, self.source.rank))

    def is_surjective(self):
        img = self.image()
        return all(img.contains(g) for g in self.target.std_gens())

    def kernel_gens(self):
        """Lifted generators of the kernel, as vectors in R^source.rank.

        Syzygies are taken among the matrix columns together with the target
        relations (defining-ideal columns included), then projected to the
        column coordinates and normalized against the source relations.
        """
        ring = self.source.ring
        ncols = self.source.rank
        if ncols == 0:
            return []
        cols = matrix_columns(self.matrix, ncols)
        extra = list(self.target.relation_gens_with_ideal())
        if not self.target.rank:
            # kernel of the zero map is everything
            return self.source.std_gens()
        syz = groebner.syzygies(cols + extra, ring, self.target.rank)
        out = []
        seen = set()
        for s in syz:
            v = self.source.reduce(s[:ncols])
            if vec_is_zero(v):
                continue
            k = tuple(f.key() for f in v)
            if k in seen:
                continue
            seen.add(k)
            out.append(v)
        out.sort(key=lambda v: tuple(f.key() for f in v))
        return out

    def __repr__(self):
        return f"<map {self.source.rank} -> {self.target.rank} over {self.source.ring!r}>"


def module_kernel(matrix, ring):
    """Kernel generators of the free-module map given by a matrix over ring.

    Over a quotient ring the defining-ideal columns are appended per target
    coordinate, so this is the kernel of the induced map of ring modules.
    """
    matrix = tuple(tuple(ring.poly(a) for a in row) for row in matrix)
    if not matrix:
        raise InputError("empty matrix")
    m, n = len(matrix), len(matrix[0])
    if any(len(r) != n for r in matrix):
        raise InputError("ragged matrix")
    phi = ModuleMap(PresentedModule.free(ring, n), PresentedModule.free(ring, m),
                    matrix, check=False)
    return phi.kernel_gens()


def frobenius_matrix(matrix, ring, e):
    matrix = tuple(tuple(ring.poly(a) for a in row) for row in matrix)
    return matrix_q_power(matrix, e)


def tensor(M, N):
    """Standard presentation of the tensor product of two presented modules.

    Generators are pairs (i, j) |-> i * N.rank + j; relations are the two
    blocks (relations of M) x identity and identity x (relations of N).
    """
    if M.ring != N.ring:
        raise InputError("tensor of modules over different rings")
    ring = M.ring
    rank = M.rank * N.rank
    zero = ring.zero()
    rels = []
    for col in M.relations:
        for j in range(N.rank):
            v = [zero] * rank
            for i in range(M.rank):
                v[i * N.rank + j] = col[i]
            rels.append(tuple(v))
    for col in N.relations:
        for i in range(M.rank):
            v = [zero] * rank
            for j in range(N.rank):
                v[i * N.rank + j] = col[j]
            rels.append(tuple(v))
    return PresentedModule(ring, rank, rels)


def tensor_map(phi, N, side="left"):
    """phi tensor identity on N (side='left'), or identity on N tensor phi."""
    ring = phi.source.ring
    zero = ring.zero()
    if side == "left":
        src, tgt = tensor(phi.source, N), tensor(phi.target, N)
        rows = []
        for i2 in range(phi.target.rank):
            for j in range(N.rank):
                row = [zero] * src.rank
                for i1 in range(phi.source.rank):
                    row[i1 * N.rank + j] = phi.matrix[i2][i1]
                rows.append(tuple(row))
    else:
        src, tgt = tensor(N, phi.source), tensor(N, phi.target)
        rows = []
        for j in range(N.rank):
            for i2 in range(phi.target.rank):
                row = [zero] * src.rank
                for i1 in range(phi.source.rank):
                    row[j * phi.source.rank + i1] = phi.matrix[i2][i1]
                rows.append(tuple(row))
    return ModuleMap(src, tgt, rows, check=False)


def quotient_by_sequence(M, xs, require_in_maximal=True):
    """M / (x_1, ..., x_k)M together with the canonical surjection.

    With ``require_in_maximal`` each x must have zero constant term, so the
    quotient-by-nothing test xM != M is meaningful under the graded-local
    convention.
    """
    ring = M.ring
    xs = [ring.poly(x) for x in xs]
    if require_in_maximal:
        for x in xs:
            ring.require_in_maximal(x, "sequence element")
    rels = list(M.relations)
    for x in xs:
        for i in range(M.rank):
            col = [ring.zero()] * M.rank
            col[i] = x
            rels.append(tuple(col))
    Q = PresentedModule(ring, M.rank, rels)
    return Q, ModuleMap(M, Q, ModuleMap.identity(M).matrix, check=False)


def modules_isomorphic_as_quotients(M, N):
    """Same-rank comparison by mutual reduction of relation submodules."""
    if M.ring != N.ring or M.rank != N.rank:
        return False
    a = Submodule(PresentedModule.free(M.ring, M.rank), M.relations or [])
    b = Submodule(PresentedModule.free(M.ring, M.rank), N.relations or [])
    return a.same_as(b)
