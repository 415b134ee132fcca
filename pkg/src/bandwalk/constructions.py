"""The worked family of left-regular bands.

free_lrb(n)              injective tuples over {1..n}, concatenate and
                         drop repeats; support = underlying set
free_lrb_bar(n)          ordered partitions of {1..n} with every block a
                         singleton except possibly the last; the image
                         of free_lrb(n) under forgetting order inside
                         the final block
ordered_partitions(n)    all ordered set partitions of {1..n}; blockwise
                         intersection product; support = unordered
                         partition
q_free_lrb(n, q)         linearly independent tuples of vectors in
                         GF(q)^n; support = span
q_free_lrb(n, q, True)   chains of subspaces 0 = X_0 < ... < X_l = V
                         with dim X_i = i below the last step
matroid_lrb(M, kind)     ordered independent tuples of a matroid
                         ("ordered-bases") or chains of flats with full
                         ranks below the last step ("flag-chains")
distributive_chain_lrb   chains from bottom to top of a finite
                         distributive lattice, multiplied by refining
                         each step of the left factor through the right

Every constructor attaches the generating set it is usually driven by
and an ExpectedLattice describing what the derived support lattice must
be isomorphic to.
"""

import itertools

from . import fields, posets
from .core import ExpectedLattice, Semigroup
from .errors import MalformedInputError, SizeGuardError
from .guards import DEFAULT_GUARDS
from .matroid import Matroid, build_matroid


# ---------------------------------------------------------------- free


def _tuple_key(t):
    return ",".join(map(str, t)) if t else "e"


def free_lrb(n, guards=DEFAULT_GUARDS):
    """Injective tuples over {1..n} under concatenation with repeats
    dropped.  Chambers are the n! full-length tuples; the support
    lattice is the boolean lattice of subsets."""
    if not 1 <= n <= guards.free_n_cap:
        raise SizeGuardError(f"free_lrb needs 1 <= n <= {guards.free_n_cap}")
    universe = range(1, n + 1)
    elements = [tuple(t) for r in range(n + 1)
                for t in itertools.permutations(universe, r)]

    def mult(a, b):
        seen = set(a)
        out = list(a)
        for x in b:
            if x not in seen:
                seen.add(x)
                out.append(x)
        return tuple(out)

    def set_label(t):
        return "{" + ",".join(map(str, sorted(t))) + "}"

    subsets = [set_label(c) for r in range(n + 1)
               for c in itertools.combinations(universe, r)]
    expected = ExpectedLattice(
        labels=tuple(subsets),
        label_of=lambda t: set_label(t),
        leq=lambda a, b: _set_of(a) <= _set_of(b),
    )
    return Semigroup.from_objects(
        f"free_lrb({n})", elements, mult, _tuple_key, (),
        generators=[(x,) for x in universe],
        expected=_wrap_expected(expected, elements),
        family="free_lrb", meta={"n": n}, guards=guards)


def _set_of(label):
    inner = label.strip("{}")
    return frozenset(int(x) for x in inner.split(",") if x)


def _wrap_expected(expected, elements):
    """Adapt an object-level label_of to element ids at build time."""
    labels_by_id = [expected.label_of(o) for o in elements]
    return ExpectedLattice(
        labels=expected.labels,
        label_of=lambda i: labels_by_id[i],
        leq=expected.leq,
    )


# ------------------------------------------------- ordered partitions


def _op_key(blocks):
    return "|".join(",".join(map(str, b)) for b in blocks)


def _op_mult(a, b):
    out = []
    for blk in a:
        s = set(blk)
        for other in b:
            piece = tuple(x for x in other if x in s)
            if piece:
                out.append(piece)
    return tuple(out)


def _partition_label(blocks):
    return "/".join(",".join(map(str, sorted(b)))
                    for b in sorted(blocks, key=lambda blk: min(blk)))


def _refines(fine, coarse):
    """fine refines coarse (both are '/'-joined block labels)."""
    coarse_of = {}
    for i, blk in enumerate(coarse.split("/")):
        for x in blk.split(","):
            coarse_of[x] = i
    for blk in fine.split("/"):
        xs = blk.split(",")
        if len({coarse_of[x] for x in xs}) != 1:
            return False
    return True


def _all_set_partitions(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for part in _all_set_partitions(rest):
        yield ((first,),) + part
        for i, blk in enumerate(part):
            yield part[:i] + ((first,) + blk,) + part[i + 1:]


def ordered_partitions(n, guards=DEFAULT_GUARDS):
    """All ordered set partitions of {1..n}.  The product intersects the
    right factor's blocks into the left factor's blocks in lexicographic
    order and drops empties.  Chambers are the n! all-singleton
    partitions; the support lattice is the lattice of unordered
    partitions ordered by 'is refined by'."""
    if not 1 <= n <= guards.partitions_n_cap:
        raise SizeGuardError(
            f"ordered_partitions needs 1 <= n <= {guards.partitions_n_cap}")
    universe = tuple(range(1, n + 1))
    elements = []
    for part in _all_set_partitions(universe):
        blocks = [tuple(sorted(b)) for b in part]
        for order in itertools.permutations(blocks):
            elements.append(tuple(order))
    elements = sorted(set(elements))

    partition_labels = sorted(
        {_partition_label(p) for p in _all_set_partitions(universe)})
    expected = ExpectedLattice(
        labels=tuple(partition_labels),
        label_of=_partition_label,
        leq=lambda a, b: _refines(b, a),
    )
    generators = [(tuple(sorted(c)),
                   tuple(sorted(set(universe) - set(c))))
                  for r in range(1, n)
                  for c in itertools.combinations(universe, r)]
    return Semigroup.from_objects(
        f"ordered_partitions({n})", elements, _op_mult, _op_key,
        (universe,), generators=generators,
        expected=_wrap_expected(expected, elements),
        family="ordered_partitions", meta={"n": n}, guards=guards)


def free_lrb_bar(n, guards=DEFAULT_GUARDS):
    """Ordered partitions of {1..n} whose blocks are singletons except
    possibly the last.  This is the quotient of free_lrb(n) that forgets
    the order inside the final block; each (n-1)-tuple is identified
    with its unique full extension.  Support lattice: subsets of size
    different from n-1."""
    if not 1 <= n <= guards.free_n_cap:
        raise SizeGuardError(
            f"free_lrb_bar needs 1 <= n <= {guards.free_n_cap}")
    universe = tuple(range(1, n + 1))
    elements = []
    for r in range(n - 1):
        for t in itertools.permutations(universe, r):
            rest = tuple(sorted(set(universe) - set(t)))
            elements.append(tuple((x,) for x in t) + (rest,))
    for t in itertools.permutations(universe):
        elements.append(tuple((x,) for x in t))

    def label_of(blocks):
        head = [b[0] for b in blocks[:-1]]
        if len(blocks[-1]) == 1:
            head.append(blocks[-1][0])
        return "{" + ",".join(map(str, sorted(head))) + "}"

    size_ok = [r for r in range(n + 1) if r != n - 1]
    labels = ["{" + ",".join(map(str, c)) + "}"
              for r in size_ok for c in itertools.combinations(universe, r)]
    expected = ExpectedLattice(
        labels=tuple(labels),
        label_of=label_of,
        leq=lambda a, b: _set_of(a) <= _set_of(b),
    )
    generators = [((x,), tuple(sorted(set(universe) - {x})))
                  for x in universe]
    if n == 1:
        generators = []
    return Semigroup.from_objects(
        f"free_lrb_bar({n})", elements, _op_mult, _op_key,
        (universe,), generators=generators,
        expected=_wrap_expected(expected, elements),
        family="free_lrb_bar", meta={"n": n}, guards=guards)


# ------------------------------------------------------- vector spaces


def _space_key(rref_rows):
    if not rref_rows:
        return "0"
    return "+".join("".join(map(str, r)) for r in rref_rows)


def _chain_key(chain):
    return "<".join(_space_key(s) for s in chain)


def q_free_lrb(n, q, reduced=False, guards=DEFAULT_GUARDS):
    """Vector-space analogue of the free constructions over GF(q).

    reduced=False: tuples of linearly independent vectors in GF(q)^n,
    concatenation dropping vectors already in the span of the prefix.
    Support = span; lattice = all subspaces.

    reduced=True: chains of subspaces 0 = X_0 < ... < X_l = V with
    dim X_i = i for i < l.  The product of X by Y refines the last step
    of X through Y's members: X_0 < ... < X_{l-1} <= X_{l-1}+Y_1 <= ...
    with repeats dropped.  Lattice = subspaces of dimension != n-1.
    """
    if n < 1:
        raise MalformedInputError("q_free_lrb needs n >= 1")
    fld = fields.field(q)
    nonzero = [v for v in fields.all_vectors(fld, n) if any(v)]

    if not reduced:
        elements = []
        stack = [((), ())]          # (tuple of vectors, rref of prefix)
        while stack:
            tup, basis = stack.pop()
            elements.append(tup)
            for v in nonzero:
                if not fields.in_span(fld, basis, v):
                    stack.append((tup + (v,), fields.rref(fld, basis + (v,))))
        if len(elements) > guards.elements_cap:
            raise SizeGuardError("q_free_lrb too large")
        elements = sorted(elements)

        def mult(a, b):
            basis = fields.rref(fld, a)
            out = list(a)
            for v in b:
                if not fields.in_span(fld, basis, v):
                    out.append(v)
                    basis = fields.rref(fld, basis + (v,))
            return tuple(out)

        def key_of(tup):
            return ",".join("".join(map(str, v)) for v in tup) if tup else "e"

        spaces = _all_subspaces(fld, n)
        expected = ExpectedLattice(
            labels=tuple(_space_key(s) for s in spaces),
            label_of=lambda tup: _space_key(fields.rref(fld, tup)),
            leq=lambda a, b: _space_leq(fld, n, a, b),
        )
        return Semigroup.from_objects(
            f"q_free_lrb({n},{q})", elements, mult, key_of, (),
            generators=[(v,) for v in nonzero],
            expected=_wrap_expected(expected, elements),
            family="q_free_lrb", meta={"n": n, "q": q}, guards=guards)

    # reduced: subspace chains
    spaces = _all_subspaces(fld, n)
    by_dim = {}
    for s in spaces:
        by_dim.setdefault(len(s), []).append(s)
    full = by_dim[n][0]
    elements = []

    def extend(chain, dim):
        if chain[-1] == full:
            elements.append(tuple(chain))
            return
        elements.append(tuple(chain) + (full,))
        for s in by_dim.get(dim + 1, ()):
            if s != full and _space_contains(fld, s, chain[-1]):
                extend(chain + [s], dim + 1)

    extend([()], 0)
    elements = sorted(set(elements), key=_chain_key)

    def mult(a, b):
        last = a[-2] if len(a) > 1 else a[-1]
        out = list(a[:-1]) if len(a) > 1 else list(a)
        for s in b[1:]:
            joined = fields.rref(fld, last + s)
            if joined != out[-1]:
                out.append(joined)
        return tuple(out)

    sub_labels = [_space_key(s) for s in spaces if len(s) != n - 1]
    expected = ExpectedLattice(
        labels=tuple(sub_labels),
        label_of=lambda ch: _space_key(ch[-1] if len(ch) == n + 1
                                       else ch[-2]),
        leq=lambda a, b: _space_leq(fld, n, a, b),
    )
    lines = [s for s in by_dim.get(1, ())]
    gens = [((), ln, full) for ln in lines if ln != full]
    if n == 1:
        gens = []
    return Semigroup.from_objects(
        f"q_free_lrb_bar({n},{q})", elements, mult, _chain_key,
        ((), full) if n >= 1 else ((),),
        generators=gens,
        expected=_wrap_expected(expected, elements),
        family="q_free_lrb_bar", meta={"n": n, "q": q}, guards=guards)


def _all_subspaces(fld, n):
    zero = ()
    seen = {zero}
    frontier = [zero]
    vectors = [v for v in fields.all_vectors(fld, n) if any(v)]
    while frontier:
        nxt = []
        for s in frontier:
            for v in vectors:
                if not fields.in_span(fld, s, v):
                    t = fields.rref(fld, s + (v,))
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), s))


def _space_contains(fld, big, small):
    return all(fields.in_span(fld, big, v) for v in small)


def _space_leq(fld, n, label_a, label_b):
    def rows(label):
        if label == "0":
            return ()
        return tuple(tuple(int(c) for c in part)
                     for part in label.split("+"))
    return _space_contains(fld, rows(label_b), rows(label_a))


# ------------------------------------------------------------ matroids


def matroid_lrb(m, kind, guards=DEFAULT_GUARDS):
    """The two semigroups of a matroid.

    kind="ordered-bases": tuples of distinct elements with independent
    underlying set; products append and drop elements falling in the
    closure of the prefix; chambers are the ordered bases; the support
    lattice is the lattice of flats.

    kind="flag-chains": chains of flats bottom = X_0 < ... < X_l = top
    with rank(X_i) = i for i < l; products refine the last step through
    joins; chambers are complete flag chains; the support lattice is
    the flats of rank != r-1 (r = matroid rank).
    """
    if not isinstance(m, Matroid):
        raise MalformedInputError("matroid_lrb needs a Matroid")
    if kind == "ordered-bases":
        return _matroid_tuples(m, guards)
    if kind == "flag-chains":
        return _matroid_flags(m, guards)
    raise MalformedInputError(f"unknown matroid_lrb kind {kind!r}")


def _matroid_tuples(m, guards):
    elements = []
    stack = [()]
    while stack:
        tup = stack.pop()
        elements.append(tup)
        cl = m.closure(frozenset(tup))
        for x in range(m.n):
            if x not in cl:
                stack.append(tup + (x,))
    if len(elements) > guards.elements_cap:
        raise SizeGuardError("matroid_lrb too large")
    elements = sorted(elements)

    def mult(a, b):
        out = list(a)
        cl = m.closure(frozenset(a))
        for x in b:
            if x not in cl:
                out.append(x)
                cl = m.closure(frozenset(out))
        return tuple(out)

    def key_of(tup):
        return ",".join(m.ground[i] for i in tup) if tup else "e"

    expected = ExpectedLattice(
        labels=tuple(m.flat_label(f) for f in m.flats()),
        label_of=lambda tup: m.flat_label(m.closure(frozenset(tup))),
        leq=lambda a, b: _flat_set(a) <= _flat_set(b),
    )
    nonloops = [x for x in range(m.n)
                if m.is_independent(frozenset([x]))]
    return Semigroup.from_objects(
        f"matroid_lrb({m.kind},ordered-bases)", elements, mult, key_of, (),
        generators=[(x,) for x in nonloops],
        expected=_wrap_expected(expected, elements),
        family="matroid_lrb", meta={"matroid": m, "kind": "ordered-bases"},
        guards=guards)


def _flat_set(label):
    inner = label.strip("{}")
    return frozenset(x for x in inner.split(",") if x)


def _matroid_flags(m, guards):
    flats = m.flats()
    rank_of = {f: m.rank(f) for f in flats}
    r = m.full_rank
    by_rank = {}
    for f in flats:
        by_rank.setdefault(rank_of[f], []).append(f)
    bottom = by_rank[0][0]
    top = by_rank[r][0]
    elements = []

    def extend(chain, k):
        if chain[-1] == top:
            elements.append(tuple(chain))
            return
        elements.append(tuple(chain) + (top,))
        for f in by_rank.get(k + 1, ()):
            if f != top and chain[-1] <= f:
                extend(chain + [f], k + 1)

    extend([bottom], 0)
    elements = sorted(set(elements),
                      key=lambda ch: tuple(m.flat_label(f) for f in ch))

    def join(a, b):
        return m.closure(a | b)

    def mult(a, b):
        last = a[-2] if len(a) > 1 else a[-1]
        out = list(a[:-1]) if len(a) > 1 else list(a)
        for f in b[1:]:
            j = join(last, f)
            if j != out[-1]:
                out.append(j)
        return tuple(out)

    def key_of(chain):
        return "<".join(m.flat_label(f) for f in chain)

    sub = [f for f in flats if rank_of[f] != r - 1]
    expected = ExpectedLattice(
        labels=tuple(m.flat_label(f) for f in sub),
        label_of=lambda ch: m.flat_label(
            ch[-1] if len(ch) == r + 1 else ch[-2]),
        leq=lambda a, b: _flat_set(a) <= _flat_set(b),
    )
    gens = [(bottom, f, top) for f in by_rank.get(1, ()) if f != top]
    return Semigroup.from_objects(
        f"matroid_lrb({m.kind},flag-chains)", elements, mult, key_of,
        (bottom, top) if bottom != top else (bottom,),
        generators=gens,
        expected=_wrap_expected(expected, elements),
        family="matroid_flags", meta={"matroid": m, "kind": "flag-chains"},
        guards=guards)


# ------------------------------------------- distributive chain bands


class DistributiveLattice:
    """Finite distributive lattice over labeled elements.

    Built from an explicit order; checks boundedness, the lattice
    property and distributivity over all triples.
    """

    def __init__(self, labels, leq):
        self.labels = list(labels)
        self.n = len(labels)
        self.leq = leq
        posets.check_partial_order(leq)
        self.join = posets.join_table(leq)
        self.meet = posets.meet_table(leq)
        self.bottom = posets.bottom_of(leq)
        self.top = posets.top_of(leq)
        if self.bottom is None or self.top is None:
            raise MalformedInputError("lattice must be bounded")
        for a in range(self.n):
            for b in range(self.n):
                for c in range(self.n):
                    lhs = self.meet[a][self.join[b][c]]
                    rhs = self.join[self.meet[a][b]][self.meet[a][c]]
                    if lhs != rhs:
                        raise MalformedInputError(
                            f"not distributive at "
                            f"({self.labels[a]},{self.labels[b]},"
                            f"{self.labels[c]})")

    @classmethod
    def from_covers(cls, labels, cover_pairs):
        n = len(labels)
        pos = {lab: i for i, lab in enumerate(labels)}
        leq = [[a == b for b in range(n)] for a in range(n)]
        try:
            edges = [(pos[str(a)], pos[str(b)]) for a, b in cover_pairs]
        except KeyError as exc:
            raise MalformedInputError(f"unknown cover label {exc}") from exc
        for a, b in edges:
            leq[a][b] = True
        for k in range(n):
            for a in range(n):
                if leq[a][k]:
                    row_k = leq[k]
                    row_a = leq[a]
                    for b in range(n):
                        if row_k[b]:
                            row_a[b] = True
        return cls([str(x) for x in labels], leq)

    @classmethod
    def grid(cls, p, q):
        """Divisor-style grid {0..p} x {0..q} under componentwise order."""
        pts = [(i, j) for i in range(p + 1) for j in range(q + 1)]
        labels = [f"({i},{j})" for i, j in pts]
        leq = [[a[0] <= b[0] and a[1] <= b[1] for b in pts] for a in pts]
        return cls(labels, leq)

    @classmethod
    def boolean(cls, n):
        subs = [frozenset(c) for r in range(n + 1)
                for c in itertools.combinations(range(1, n + 1), r)]
        labels = ["{" + ",".join(map(str, sorted(s))) + "}" for s in subs]
        leq = [[a <= b for b in subs] for a in subs]
        return cls(labels, leq)


def distributive_chain_lrb(lattice, guards=DEFAULT_GUARDS):
    """Chains bottom = x_0 < ... < x_l = top of a distributive lattice.

    The product of E = (x_0..x_l) by F = (y_0..y_m) refines every step
    [x_{i-1}, x_i] of E through the values x_{i-1} v (y_j ^ x_i) and
    drops repeats.  Chambers are the maximal chains.  No expected
    support lattice is attached: two chains share a support when they
    absorb each other, and the resulting lattice is coarser than the
    input lattice in general (for a Boolean lattice the chain band is
    the band of ordered set partitions, whose support lattice is the
    partition lattice).
    """
    if not isinstance(lattice, DistributiveLattice):
        raise MalformedInputError("needs a DistributiveLattice")
    D = lattice
    chains = []

    def grow(chain):
        if chain[-1] == D.top:
            chains.append(tuple(chain))
            return
        for x in range(D.n):
            if D.leq[chain[-1]][x] and x != chain[-1]:
                grow(chain + [x])

    grow([D.bottom])
    if D.bottom == D.top:
        chains = [(D.bottom,)]
    if len(chains) > guards.elements_cap:
        raise SizeGuardError("distributive_chain_lrb too large")
    chains = sorted(set(chains),
                    key=lambda ch: tuple(D.labels[x] for x in ch))

    def mult(a, b):
        out = [a[0]]
        for i in range(1, len(a)):
            lo, hi = a[i - 1], a[i]
            for y in b:
                g = D.join[lo][D.meet[y][hi]]
                if g != out[-1]:
                    out.append(g)
        return tuple(out)

    def key_of(chain):
        return "<".join(D.labels[x] for x in chain)

    interior = [x for x in range(D.n) if x != D.bottom and x != D.top]
    gens = [(D.bottom, x, D.top) for x in interior]
    identity = (D.bottom, D.top) if D.bottom != D.top else (D.bottom,)
    return Semigroup.from_objects(
        "distributive_chain_lrb", chains, mult, key_of, identity,
        generators=gens,
        family="dist_chain", meta={"lattice": D}, guards=guards)


# ---------------------------------------------------------- dispatch


def construction_from_spec(spec, guards=DEFAULT_GUARDS):
    """Build a semigroup from a construction spec dict.

    {"type": "free_lrb", "n": 3}
    {"type": "free_lrb_bar", "n": 3}
    {"type": "q_free", "n": 2, "q": 2}
    {"type": "q_free_bar", "n": 3, "q": 2}
    {"type": "ordered_partitions", "n": 3}
    {"type": "matroid", "matroid": {...}}          (ordered-bases)
    {"type": "matroid_flags", "matroid": {...}}    (flag-chains)
    {"type": "dist_chain", "grid": [p, q]}
    {"type": "dist_chain", "elements": [...], "covers": [[a, b], ...]}
    {"type": "table", "label": ..., "elements": [...], "identity": i,
     "table": [[...]]}
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise MalformedInputError("construction spec needs a 'type' field")
    kind = spec["type"]
    try:
        if kind == "free_lrb":
            return free_lrb(int(spec["n"]), guards)
        if kind == "free_lrb_bar":
            return free_lrb_bar(int(spec["n"]), guards)
        if kind == "q_free":
            return q_free_lrb(int(spec["n"]), int(spec["q"]), False, guards)
        if kind == "q_free_bar":
            return q_free_lrb(int(spec["n"]), int(spec["q"]), True, guards)
        if kind == "ordered_partitions":
            return ordered_partitions(int(spec["n"]), guards)
        if kind == "matroid":
            return matroid_lrb(build_matroid(spec["matroid"], guards),
                               "ordered-bases", guards)
        if kind == "matroid_flags":
            return matroid_lrb(build_matroid(spec["matroid"], guards),
                               "flag-chains", guards)
        if kind == "dist_chain":
            if "grid" in spec:
                p, q = spec["grid"]
                lat = DistributiveLattice.grid(int(p), int(q))
            else:
                lat = DistributiveLattice.from_covers(
                    spec["elements"], spec["covers"])
            return distributive_chain_lrb(lat, guards)
        if kind == "table":
            return Semigroup.from_json_dict(spec)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInputError(f"bad construction spec: {exc}") from exc
    raise MalformedInputError(f"unknown construction type {kind!r}")
