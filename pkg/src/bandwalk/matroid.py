"""Finite matroids given by an independence oracle, with the closure
and flat machinery required to build the two matroid semigroups.

Matroids can be specified by explicit independent sets, by vector
configurations over GF(q), by multigraphs (edge sets, forests
independent) or as uniform matroids U_{k,m}.
"""

import itertools
from functools import lru_cache

from . import fields
from .errors import AxiomViolationError, MalformedInputError, SizeGuardError
from .guards import DEFAULT_GUARDS


class Matroid:
    """ground: canonical labels of the ground set (ids 0..n-1),
    indep: callable frozenset[int] -> bool, cached per subset."""

    def __init__(self, ground, indep, kind="oracle", guards=DEFAULT_GUARDS,
                 check=True):
        if len(ground) > guards.matroid_ground_cap:
            raise SizeGuardError(
                f"ground set of {len(ground)} exceeds cap "
                f"{guards.matroid_ground_cap}")
        if len(set(ground)) != len(ground):
            raise MalformedInputError("ground labels are not unique")
        self.ground = list(ground)
        self.n = len(ground)
        self.kind = kind
        self._indep_fn = indep
        self._cache = {}
        if check:
            self._check_axioms()
        self.full_rank = self.rank(frozenset(range(self.n)))

    def is_independent(self, subset):
        subset = frozenset(subset)
        got = self._cache.get(subset)
        if got is None:
            got = bool(self._indep_fn(subset))
            self._cache[subset] = got
        return got

    def _check_axioms(self):
        if not self.is_independent(frozenset()):
            raise AxiomViolationError("empty set is not independent")
        universe = list(range(self.n))
        indep_sets = [frozenset(c)
                      for r in range(self.n + 1)
                      for c in itertools.combinations(universe, r)
                      if self.is_independent(frozenset(c))]
        indep = set(indep_sets)
        for a in indep_sets:
            for x in a:
                if a - {x} not in indep:
                    raise AxiomViolationError(
                        "independence is not downward closed",
                        witness=(sorted(a), x))
        by_size = {}
        for a in indep_sets:
            by_size.setdefault(len(a), []).append(a)
        for i in indep_sets:
            bigger = by_size.get(len(i) + 1, ())
            for j in bigger:
                if not any(i | {x} in indep for x in j - i):
                    raise AxiomViolationError(
                        "exchange axiom fails",
                        witness=(sorted(i), sorted(j)))

    def rank(self, subset):
        r = 0
        acc = frozenset()
        for x in sorted(subset):
            if self.is_independent(acc | {x}):
                acc = acc | {x}
                r += 1
        return r

    def closure(self, subset):
        subset = frozenset(subset)
        r = self.rank(subset)
        return frozenset(x for x in range(self.n)
                         if self.rank(subset | {x}) == r)

    @lru_cache(maxsize=None)
    def flats(self):
        """All flats, sorted by (rank, labels)."""
        seen = {self.closure(frozenset())}
        frontier = list(seen)
        while frontier:
            nxt = []
            for f in frontier:
                for x in range(self.n):
                    if x not in f:
                        g = self.closure(f | {x})
                        if g not in seen:
                            seen.add(g)
                            nxt.append(g)
            frontier = nxt
        return sorted(seen, key=lambda f: (self.rank(f), sorted(f)))

    def flat_label(self, flat):
        return "{" + ",".join(self.ground[i] for i in sorted(flat)) + "}"

    # constructors -----------------------------------------------------

    @classmethod
    def from_independent_sets(cls, ground, independent, guards=DEFAULT_GUARDS):
        labels = [str(g) for g in ground]
        pos = {g: i for i, g in enumerate(labels)}
        try:
            sets = {frozenset(pos[str(x)] for x in s) for s in independent}
        except KeyError as exc:
            raise MalformedInputError(f"unknown ground element {exc}") from exc
        return cls(labels, lambda a: a in sets, kind="sets", guards=guards)

    @classmethod
    def from_vectors(cls, q, columns, guards=DEFAULT_GUARDS):
        fld = fields.field(q)
        cols = [tuple(int(c) % q for c in col) for col in columns]
        if len({len(c) for c in cols}) > 1:
            raise MalformedInputError("vector columns have mixed lengths")
        labels = ["".join(map(str, c)) for c in cols]
        # disambiguate repeated columns
        seen = {}
        for i, lab in enumerate(labels):
            seen[lab] = seen.get(lab, 0) + 1
            if seen[lab] > 1:
                labels[i] = f"{lab}#{seen[lab]}"

        def indep(subset):
            rows = [cols[i] for i in sorted(subset)]
            return len(fields.rref(fld, rows)) == len(rows)

        m = cls(labels, indep, kind="vectors", guards=guards)
        m.columns = cols
        m.q = q
        return m

    @classmethod
    def from_graph(cls, edges, guards=DEFAULT_GUARDS):
        """Edges as (u, v) pairs; loops and parallel edges allowed."""
        pairs = [(str(u), str(v)) for u, v in edges]
        labels = []
        seen = {}
        for u, v in pairs:
            base = f"{u}-{v}"
            seen[base] = seen.get(base, 0) + 1
            labels.append(base if seen[base] == 1 else f"{base}#{seen[base]}")

        def indep(subset):
            parent = {}

            def find(a):
                while parent.get(a, a) != a:
                    parent[a] = parent.get(parent[a], parent[a])
                    a = parent[a]
                return a

            for i in sorted(subset):
                u, v = pairs[i]
                ru, rv = find(u), find(v)
                if ru == rv:
                    return False
                parent[ru] = rv
            return True

        m = cls(labels, indep, kind="graph", guards=guards)
        m.edges = pairs
        return m

    @classmethod
    def uniform(cls, k, m, guards=DEFAULT_GUARDS):
        if not 0 <= k <= m:
            raise MalformedInputError("uniform matroid needs 0 <= k <= m")
        labels = [str(i + 1) for i in range(m)]
        return cls(labels, lambda a: len(a) <= k, kind="uniform",
                   guards=guards)

    @classmethod
    def free(cls, n, guards=DEFAULT_GUARDS):
        return cls.uniform(n, n, guards=guards)


def build_matroid(spec, guards=DEFAULT_GUARDS):
    """Matroid from a spec dict: {"kind": "sets"|"vectors"|"graph"|
    "uniform"|"free", ...}."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise MalformedInputError("matroid spec needs a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "sets":
            return Matroid.from_independent_sets(
                spec["ground"], spec["independent"], guards=guards)
        if kind == "vectors":
            return Matroid.from_vectors(int(spec["q"]), spec["columns"],
                                        guards=guards)
        if kind == "graph":
            return Matroid.from_graph(spec["edges"], guards=guards)
        if kind == "uniform":
            return Matroid.uniform(int(spec["k"]), int(spec["m"]),
                                   guards=guards)
        if kind == "free":
            return Matroid.free(int(spec["n"]), guards=guards)
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"bad matroid spec: {exc}") from exc
    raise MalformedInputError(f"unknown matroid kind {kind!r}")
