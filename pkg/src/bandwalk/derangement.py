"""Generalized derangement numbers of bounded posets.

Every finite poset with a bottom and a top carries an integer d(L)
pinned down by the recurrence

    sum over X of d([X, top]) = number of maximal chains of L.

On the Boolean lattice d(L) is the classical derangement number, on
the subspace lattice it is the q-analogue, and on the lattice of
contractions of a graph it is a graph invariant.  For the lattice of
flats of a matroid the interval values d([X, top]) are exactly the
eigenvalue multiplicities of the maximal-chain random walk, which is
why the module exposes them separately.

Three independent computations of d(L) are run on every call: the
defining recurrence, the Moebius-inversion sum, and the sign-free
cover recurrence d(L) = sum over X < top of (c(X) - 1) d([bottom, X]).
They are provably equal, so any disagreement is raised as a
falsification rather than returned.

The flag-vector half of the module (flag f and h vectors, the descent
family identity d(L) = sum of h_J over the family J whose first gap is
even, and the rank-profile refinement) requires a graded poset.
"""

from dataclasses import dataclass
from itertools import combinations, permutations, product

from . import fields, posets
from .errors import (FalsificationError, MalformedInputError,
                     PreconditionError, SizeGuardError)


# ---------------------------------------------------------------- poset type


@dataclass
class GradedPoset:
    """Finite poset with bottom and top, plus derived structure.

    rank is None when the poset is not graded; the chain-count and
    derangement routines accept that, the flag-vector ones do not.
    """

    name: str
    labels: tuple
    leq: list
    bottom: int
    top: int
    rank: list
    covers: list

    @property
    def size(self):
        return len(self.labels)

    @property
    def n(self):
        if self.rank is None:
            raise PreconditionError(f"{self.name} is not graded")
        return self.rank[self.top]

    def index_of(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise MalformedInputError(
                f"{self.name} has no element {label!r}") from None


def graded_poset(name, labels, leq):
    """Validate and package a poset given by labels and a leq matrix."""
    posets.check_partial_order(leq)
    bottom = posets.bottom_of(leq)
    top = posets.top_of(leq)
    if bottom is None or top is None:
        raise MalformedInputError(f"{name} lacks a unique bottom or top")
    rank = posets.rank_function(leq, bottom)
    return GradedPoset(name, tuple(labels), leq, bottom, top, rank,
                       posets.covers_of(leq))


def interval(p, lo, hi):
    """The subposet [lo, hi], with lo and hi given as element indices."""
    if not p.leq[lo][hi]:
        raise PreconditionError(
            f"{p.labels[lo]} is not below {p.labels[hi]} in {p.name}")
    inside = [c for c in range(p.size) if p.leq[lo][c] and p.leq[c][hi]]
    leq = [[p.leq[a][b] for b in inside] for a in inside]
    name = f"{p.name}[{p.labels[lo]},{p.labels[hi]}]"
    return graded_poset(name, [p.labels[c] for c in inside], leq)


def from_support_structure(structure):
    """The support lattice of a band, as a poset for interval queries."""
    leq = [list(row) for row in structure.leq]
    return graded_poset(structure.semigroup.label + " lattice",
                        structure.labels, leq)


# ---------------------------------------------------------------- factories


def boolean_lattice(n):
    if n < 0:
        raise MalformedInputError("boolean_lattice needs n >= 0")
    if n > 12:
        raise SizeGuardError(f"boolean_lattice({n}) has 2^{n} elements")
    masks = list(range(1 << n))
    labels = ["{" + ",".join(str(i + 1) for i in range(n) if m >> i & 1) + "}"
              for m in masks]
    leq = [[a & b == a for b in masks] for a in masks]
    return graded_poset(f"boolean({n})", labels, leq)


def subspace_lattice(n, q):
    """All subspaces of GF(q)^n ordered by inclusion.

    Elements carry their reduced row-echelon basis as the label, the
    zero space being "0".
    """
    if n < 0:
        raise MalformedInputError("subspace_lattice needs n >= 0")
    fld = fields.field(q)
    seen = {()}
    frontier = [()]
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
    spaces = sorted(seen, key=lambda s: (len(s), s))

    def contains(big, small):
        return all(fields.in_span(fld, big, r) for r in small)

    labels = ["0" if not s else "+".join("".join(map(str, r)) for r in s)
              for s in spaces]
    leq = [[contains(b, a) for b in spaces] for a in spaces]
    return graded_poset(f"subspace({n},{q})", labels, leq)


def _set_partitions(items):
    """All partitions of a list, each a tuple of tuples."""
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield ((head,),) + part
        for i, block in enumerate(part):
            yield part[:i] + ((head,) + block,) + part[i + 1:]


def _partition_label(part):
    blocks = sorted(tuple(sorted(b, key=str)) for b in part)
    return "|".join(",".join(str(v) for v in b) for b in blocks) or "?"


def _refines(finer, coarser):
    lookup = {}
    for i, block in enumerate(coarser):
        for v in block:
            lookup[v] = i
    for block in finer:
        if len({lookup[v] for v in block}) != 1:
            return False
    return True


def partition_lattice(n, guards=None):
    """Partitions of {1..n} ordered by refinement, singletons at bottom."""
    from .guards import DEFAULT_GUARDS
    guards = guards or DEFAULT_GUARDS
    if n < 1:
        raise MalformedInputError("partition_lattice needs n >= 1")
    if n > guards.partitions_n_cap:
        raise SizeGuardError(f"partition_lattice({n}) over the cap")
    parts = [tuple(sorted(tuple(sorted(b)) for b in p))
             for p in _set_partitions(list(range(1, n + 1)))]
    parts = sorted(set(parts), key=lambda p: (-len(p), p))
    labels = [_partition_label(p) for p in parts]
    leq = [[_refines(a, b) for b in parts] for a in parts]
    return graded_poset(f"partitions({n})", labels, leq)


def contraction_lattice(edges, vertices=None, guards=None):
    """Partitions of the vertex set whose blocks induce connected
    subgraphs, ordered by refinement.

    The top is the partition into connected components, so a
    disconnected graph is fine; a discrete graph gives the one-element
    poset.
    """
    from .guards import DEFAULT_GUARDS
    guards = guards or DEFAULT_GUARDS
    adj = {}
    for v in vertices or ():
        adj.setdefault(str(v), set())
    pairs = set()
    for e in edges:
        if len(e) != 2:
            raise MalformedInputError(f"edge {e!r} is not a pair")
        a, b = str(e[0]), str(e[1])
        if a == b:
            raise MalformedInputError(f"loop at {a!r}; the graph must be simple")
        if (min(a, b), max(a, b)) in pairs:
            raise MalformedInputError(f"repeated edge {a!r}-{b!r}")
        pairs.add((min(a, b), max(a, b)))
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    verts = sorted(adj)
    if len(verts) > guards.partitions_n_cap:
        raise SizeGuardError("contraction_lattice vertex count over the cap")

    def connected(block):
        block = set(block)
        seen = {next(iter(block))}
        frontier = list(seen)
        while frontier:
            nxt = [u for v in frontier for u in adj[v]
                   if u in block and u not in seen]
            seen.update(nxt)
            frontier = nxt
        return seen == block

    parts = []
    for p in _set_partitions(verts):
        canon = tuple(sorted(tuple(sorted(b)) for b in p))
        if all(connected(b) for b in canon):
            parts.append(canon)
    parts = sorted(set(parts), key=lambda p: (-len(p), p))
    labels = [_partition_label(p) for p in parts]
    leq = [[_refines(a, b) for b in parts] for a in parts]
    name = f"contractions({len(verts)}v,{len(pairs)}e)"
    return graded_poset(name, labels, leq)


def matroid_flats_lattice(m):
    """Lattice of flats of a matroid, ordered by inclusion.

    The flag-chain band's support lattice omits the flats of rank
    r - 1, so interval derangement numbers must be taken here, in the
    full lattice, to reproduce the walk multiplicities.
    """
    flats = m.flats()
    labels = [m.flat_label(f) for f in flats]
    leq = [[a <= b for b in flats] for a in flats]
    return graded_poset(f"flats({m.n})", labels, leq)


def chain_product(lengths):
    """Product of chains of the given lengths, e.g. (1,)*n is Boolean."""
    lengths = tuple(int(l) for l in lengths)
    if not lengths or min(lengths) < 1:
        raise MalformedInputError("chain_product needs positive lengths")
    points = sorted(product(*(range(l + 1) for l in lengths)))
    labels = [",".join(map(str, pt)) for pt in points]
    leq = [[all(x <= y for x, y in zip(a, b)) for b in points]
           for a in points]
    return graded_poset(f"chains{lengths}", labels, leq)


def poset_from_json(obj):
    """Poset from {"elements": [...], "covers": [[a, b], ...]}."""
    if not isinstance(obj, dict) or "elements" not in obj \
            or "covers" not in obj:
        raise MalformedInputError("poset JSON needs elements and covers")
    labels = [str(e) for e in obj["elements"]]
    if len(set(labels)) != len(labels):
        raise MalformedInputError("duplicate poset elements")
    index = {lab: i for i, lab in enumerate(labels)}
    size = len(labels)
    up = [set() for _ in range(size)]
    for pair in obj["covers"]:
        if len(pair) != 2:
            raise MalformedInputError(f"cover {pair!r} is not a pair")
        a, b = str(pair[0]), str(pair[1])
        if a not in index or b not in index:
            raise MalformedInputError(f"cover {pair!r} names a non-element")
        up[index[a]].add(index[b])
    leq = [[a == b for b in range(size)] for a in range(size)]
    for a in range(size):
        frontier = list(up[a])
        while frontier:
            c = frontier.pop()
            if not leq[a][c]:
                leq[a][c] = True
                frontier.extend(up[c])
    for a in range(size):
        for b in range(size):
            if a != b and leq[a][b] and leq[b][a]:
                raise MalformedInputError(
                    f"cover cycle through {labels[a]} and {labels[b]}")
    return graded_poset("poset", labels, leq)


# ------------------------------------------------------------ chain counts


def maximal_chain_count(p):
    """Number of maximal chains of a graded poset."""
    if p.rank is None:
        raise PreconditionError(f"{p.name} is not graded")
    return posets.count_saturated_chains(p.leq, p.bottom, p.top)


def _chains_to_top(p):
    """f([X, top]) for every X, by one pass over a linear extension."""
    cnt = [0] * p.size
    cnt[p.top] = 1
    for a in reversed(posets.linear_extension(p.leq)):
        if a != p.top:
            cnt[a] = sum(cnt[b] for b in p.covers[a])
    return cnt


def upper_derangements(p):
    """d([X, top]) for every X, via the defining recurrence.

    For the lattice of flats of a matroid these are the eigenvalue
    multiplicities m_X of the maximal-chain walk.
    """
    cnt = _chains_to_top(p)
    order = posets.linear_extension(p.leq)
    d = [0] * p.size
    for a in reversed(order):
        above = sum(d[b] for b in range(p.size) if p.leq[a][b] and b != a)
        d[a] = cnt[a] - above
    if sum(d) != cnt[p.bottom]:
        raise FalsificationError(
            f"{p.name}: interval derangements do not resum to the "
            "maximal-chain count")
    return d


def derangement_number(p):
    """d(L) by three provably equal routes, which must agree.

    Accepts any bounded poset; gradedness is not required here.
    """
    cnt = _chains_to_top(p)
    via_recurrence = upper_derangements(p)[p.bottom]

    mu = posets.moebius_table(p.leq)
    via_moebius = sum(mu.get((p.bottom, x), 0) * cnt[x]
                      for x in range(p.size))

    order = posets.linear_extension(p.leq)
    low = [0] * p.size
    low[p.bottom] = 1
    for x in order:
        if x == p.bottom:
            continue
        total = 0
        for y in range(p.size):
            if p.leq[y][x] and y != x:
                c = sum(1 for z in p.covers[y] if p.leq[z][x])
                total += (c - 1) * low[y]
        low[x] = total
    via_covers = low[p.top]

    if not via_recurrence == via_moebius == via_covers:
        raise FalsificationError(
            f"{p.name}: derangement routes disagree "
            f"(recurrence {via_recurrence}, moebius {via_moebius}, "
            f"covers {via_covers})")
    atoms = len(p.covers[p.bottom])
    if (via_recurrence == 0) != (atoms == 1) or via_recurrence < 0:
        raise FalsificationError(
            f"{p.name}: d={via_recurrence} with {atoms} atoms breaks the "
            "one-atom criterion")
    return via_recurrence


# ------------------------------------------------------------ flag vectors


@dataclass
class FlagVectors:
    """Flag f and h vectors, keyed by sorted rank subsets of [n-1]."""

    n: int
    f: dict
    h: dict


def _subsets(pool):
    for r in range(len(pool) + 1):
        yield from combinations(pool, r)


def flag_vectors(p):
    """Count rank-selected flags and invert to the flag h-vector.

    f_J is the number of chains hitting exactly the ranks in J (the
    bottom and top are not part of the flag); h is the inclusion-
    exclusion transform, re-checked against f before returning.
    """
    if p.rank is None:
        raise PreconditionError(f"{p.name} is not graded")
    n = p.rank[p.top]
    by_rank = {}
    for x in range(p.size):
        by_rank.setdefault(p.rank[x], []).append(x)

    f = {}
    for j_set in _subsets(range(1, n)):
        if not j_set:
            f[j_set] = 1
            continue
        acc = {x: 1 for x in by_rank.get(j_set[0], ())}
        for j in j_set[1:]:
            acc = {y: sum(c for x, c in acc.items() if p.leq[x][y])
                   for y in by_rank.get(j, ())}
        f[j_set] = sum(acc.values())

    h = {}
    for j_set in f:
        h[j_set] = sum((-1) ** (len(j_set) - len(k)) * f[k]
                       for k in _subsets(j_set))
    for j_set in f:
        if f[j_set] != sum(h[k] for k in _subsets(j_set)):
            raise FalsificationError(
                f"{p.name}: flag h-vector fails to invert at {j_set}")
    return FlagVectors(n, f, h)


def first_gap(j_set):
    """Smallest l >= 1 outside the set."""
    l = 1
    inside = set(j_set)
    while l in inside:
        l += 1
    return l


def stanley_identity_check(p):
    """(d(L), sum of h_J over J with even first gap, agreement flag)."""
    fv = flag_vectors(p)
    total = sum(hv for j_set, hv in fv.h.items()
                if first_gap(j_set) % 2 == 0)
    d = derangement_number(p)
    return d, total, d == total


def gamma_of(j_set, n):
    """Rank label of a subset: i or i-1 by the parity of the initial
    run i, i+1, ..., i+l-1; the empty set has i=n, l=0."""
    if not j_set:
        return n
    i = j_set[0]
    inside = set(j_set)
    l = 1
    while i + l in inside:
        l += 1
    return i if l % 2 == 0 else i - 1


@dataclass
class MahajanRow:
    r: int
    d_sum: int
    h_sum: int
    ok: bool


def mahajan_profile(p):
    """Per rank r: sum of d([X, top]) over rank-r elements against the
    gamma-filtered flag h-sum, plus the two forced edge values."""
    fv = flag_vectors(p)
    ups = upper_derangements(p)
    n = fv.n
    rows = []
    for r in range(n + 1):
        d_sum = sum(ups[x] for x in range(p.size) if p.rank[x] == r)
        h_sum = sum(hv for j_set, hv in fv.h.items()
                    if gamma_of(j_set, n) == r)
        ok = d_sum == h_sum
        if r == n - 1:
            ok = ok and d_sum == 0
        if r == n:
            ok = ok and d_sum == 1
        rows.append(MahajanRow(r, d_sum, h_sum, ok))
    return rows


# ----------------------------------------------------- q-analogue helpers

# Dense integer polynomials in q, ascending degree.


def poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return poly_trim(out)


def poly_sub(a, b):
    return poly_add(a, [-c for c in b])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def q_int(n):
    return [1] * n


def q_factorial(n):
    out = [1]
    for i in range(1, n + 1):
        out = poly_mul(out, q_int(i))
    return out


def q_binomial(n, k):
    """Gaussian binomial via the q-Pascal recurrence."""
    if k < 0 or k > n:
        return []
    row = [[1]]
    for m in range(1, n + 1):
        nxt = [[1]]
        for i in range(1, m):
            nxt.append(poly_add(row[i - 1], [0] * i + row[i]))
        nxt.append([1])
        row = nxt
    return row[k]


def q_derangement(n):
    """d_n(q) from the subspace-lattice recurrence
    sum over i of qbinom(n, i) d_i = [n]!."""
    d = [[1]]
    for m in range(1, n + 1):
        rest = []
        for i in range(m):
            rest = poly_add(rest, poly_mul(q_binomial(m, i), d[i]))
        d.append(poly_sub(q_factorial(m), rest))
    return d[n]


def desarrangements(n):
    """Permutations whose maximal initial descending run has even
    length, as tuples."""
    out = []
    for perm in permutations(range(1, n + 1)):
        l = 1
        while l < n and perm[l - 1] > perm[l]:
            l += 1
        if l % 2 == 0:
            out.append(perm)
    if n == 0:
        out.append(())
    return out


def inversion_count(perm):
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
               if perm[i] > perm[j])


def wachs_polynomial(n):
    """Inversion generating function of the desarrangements."""
    out = []
    for perm in desarrangements(n):
        k = inversion_count(perm)
        if len(out) <= k:
            out.extend([0] * (k + 1 - len(out)))
        out[k] += 1
    return poly_trim(out)
