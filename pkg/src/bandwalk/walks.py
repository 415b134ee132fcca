"""Running and analyzing the chamber walk.

Two product orders matter and are easy to confuse.  The walk itself
multiplies each new draw on the LEFT of the current chamber (c goes to
xc).  The stationary distribution is realized by the a.s. limit of the
infinite product x1 x2 x3 ..., which grows by multiplying new draws on
the RIGHT of the accumulator; the accumulator becomes a chamber at the
first time T its support hits the top flat.  Both directions are
implemented separately below.

Exact paths (power distributions, stationary solve, total variation,
the coatom bound) stay in Fractions; empirical paths use the seeded
standard generator and report floats.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (
    MalformedInputError,
    NonUniqueStationaryError,
    PreconditionError,
    StagnationError,
)
from .guards import DEFAULT_GUARDS


# --------------------------------------------------------- trajectory


@dataclass
class WalkTrajectory:
    start: int
    seed: int
    steps: list            # (drawn element id, resulting chamber id)

    @property
    def final(self):
        return self.steps[-1][1] if self.steps else self.start


def _sampler(w, rng):
    ids = w.support_ids()
    cum = []
    acc = 0.0
    for i in ids:
        acc += float(w[i])
        cum.append(acc)

    def draw():
        u = rng.random() * acc
        for i, c in zip(ids, cum):
            if u <= c:
                return i
        return ids[-1]

    return draw


def simulate(structure, w, c0, steps, seed):
    """Seeded left-multiplication walk from chamber c0."""
    sg = structure.semigroup
    if c0 not in structure.chambers:
        raise MalformedInputError(f"start {c0} is not a chamber")
    rng = random.Random(seed)
    draw = _sampler(w, rng)
    prod = sg.product
    out = []
    cur = c0
    for _ in range(steps):
        x = draw()
        cur = prod(x, cur)
        out.append((x, cur))
    return WalkTrajectory(c0, seed, out)


# ------------------------------------------------------ distributions


@dataclass
class DistributionOnChambers:
    chamber_keys: list
    probs: list
    provenance: str

    def __len__(self):
        return len(self.probs)


def total_variation(p, q):
    """(1/2) L1 distance; exact when both sides are exact."""
    if len(p) != len(q):
        raise MalformedInputError("distributions over different chamber sets")
    diff = sum(abs(a - b) for a, b in zip(p, q))
    return diff / 2


def exact_power_distribution(P, start_index, m):
    """Row `start_index` of P^m as exact rationals."""
    if m < 0:
        raise MalformedInputError("negative power")
    row = [Fraction(0)] * P.size
    row[start_index] = Fraction(1)
    for _ in range(m):
        row = linalg.vec_mat(row, P.rows)
    return DistributionOnChambers(list(P.chamber_keys), row, "exact-power")


def stationary_exact(P):
    """The unique solution of pi P = pi, sum pi = 1, exact.

    Solved as the kernel of (P transposed minus I); a kernel of
    dimension other than one is reported, which is the symptom of a
    walk whose weights do not reach every chamber.
    """
    n = P.size
    tr = [[P.rows[j][i] - (1 if i == j else 0) for j in range(n)]
          for i in range(n)]
    basis = linalg.kernel_basis(tr)
    if len(basis) != 1:
        raise NonUniqueStationaryError(
            f"stationary space has dimension {len(basis)}")
    v = basis[0]
    total = sum(v, Fraction(0))
    if total == 0:
        raise NonUniqueStationaryError("kernel vector has zero mass")
    pi = [x / total for x in v]
    if any(x < 0 for x in pi):
        raise NonUniqueStationaryError("stationary solve went negative")
    return DistributionOnChambers(list(P.chamber_keys), pi,
                                  "stationary-exact")


def sample_stationary(structure, w, seed, samples,
                      guards=DEFAULT_GUARDS, want_times=True):
    """Empirical pi via Theorem-0 right-accumulation.

    Each sample draws from w until the accumulated product x1 x2 ...
    carries top support, then records the chamber it landed on and the
    stopping time T.  Returns (distribution, stopping time counts).
    """
    sg = structure.semigroup
    prod = sg.product
    supp = structure.supp
    join = structure.join
    top = structure.top
    rng = random.Random(seed)
    draw = _sampler(w, rng)
    pos = {c: i for i, c in enumerate(structure.chambers)}
    counts = [0] * len(structure.chambers)
    times = {}
    cap = guards.sample_step_cap
    for _ in range(samples):
        acc = sg.identity
        flat = structure.bottom
        t = 0
        while flat != top:
            x = draw()
            acc = prod(acc, x)
            flat = join[flat][supp[x]]
            t += 1
            if t > cap:
                raise StagnationError(
                    f"support never reached the top flat within {cap} draws; "
                    "the weights likely cannot reach a chamber")
        counts[pos[acc]] += 1
        if want_times:
            times[t] = times.get(t, 0) + 1
    probs = [c / samples for c in counts]
    dist = DistributionOnChambers(list(sg.keys[c] for c in structure.chambers),
                                  probs, "stationary-sampled")
    return dist, dict(sorted(times.items()))


def sample_stopping_times(structure, w, seed, samples,
                          guards=DEFAULT_GUARDS):
    """Stopping-time counts only: tracks support joins, never products."""
    supp = structure.supp
    join = structure.join
    top = structure.top
    rng = random.Random(seed)
    draw = _sampler(w, rng)
    times = {}
    cap = guards.sample_step_cap
    for _ in range(samples):
        flat = structure.bottom
        t = 0
        while flat != top:
            flat = join[flat][supp[draw()]]
            t += 1
            if t > cap:
                raise StagnationError(
                    f"support never reached the top flat within {cap} draws")
        times[t] = times.get(t, 0) + 1
    return dict(sorted(times.items()))


# --------------------------------------------------------- convergence


def generated_ids(sg, ids):
    """Closure of `ids` (plus the identity) under the product."""
    seen = {sg.identity}
    frontier = sorted(set(ids))
    seen.update(frontier)
    prod = sg.product
    while frontier:
        nxt = []
        for a in list(seen):
            for b in frontier:
                for c in (prod(a, b), prod(b, a)):
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return sorted(seen)


def support_generates(structure, w):
    return len(generated_ids(structure.semigroup, w.support_ids())) \
        == structure.semigroup.size


@dataclass
class ConvergenceRow:
    m: int
    exact_tv: Fraction
    coatom_bound: Fraction
    empirical_tail: float = None


@dataclass
class ConvergenceReport:
    start_key: str
    rows: list
    coatom_lambdas: list
    bound_holds: bool


def coatom_eigenvalues(structure, w):
    """lambda_H over the coatoms H of the support lattice."""
    supp = structure.supp
    leq = structure.leq
    out = []
    for h in structure.coatoms():
        out.append(sum((v for y, v in w.items() if leq[supp[y]][h]),
                       Fraction(0)))
    return out


def convergence_report(structure, w, c0, m_max, samples=0, seed=0,
                       guards=DEFAULT_GUARDS):
    """Exact TV distance vs the Theorem-0 coatom bound, per step.

    exactTV(m) = TV(row c0 of P^m, pi); bound(m) = sum over coatoms H
    of lambda_H^m.  When `samples` > 0 the empirical tail Pr{T > m} of
    the stopping time joins the table.  The claim checked is
    exactTV <= bound for every m; the empirical tail sits between the
    two only up to Monte Carlo noise, so it is reported, not asserted.
    """
    if not w.is_probability:
        raise PreconditionError("convergence analysis needs a probability")
    from .spectral import transition_matrix
    P = transition_matrix(structure, w)
    start = structure.chambers.index(c0) if c0 in structure.chambers else -1
    if start < 0:
        raise MalformedInputError("start must be a chamber")
    pi = stationary_exact(P)
    lams = coatom_eigenvalues(structure, w)

    tail_counts = None
    total = 0
    if samples:
        times = sample_stopping_times(structure, w, seed, samples, guards)
        total = samples
        tail_counts = times

    rows = []
    ok = True
    row = [Fraction(0)] * P.size
    row[start] = Fraction(1)
    powers = [Fraction(1)] * len(lams)
    for m in range(m_max + 1):
        if m:
            row = linalg.vec_mat(row, P.rows)
            powers = [p * l for p, l in zip(powers, lams)]
        tv = total_variation(row, pi.probs)
        bound = sum(powers, Fraction(0))
        emp = None
        if tail_counts is not None:
            above = sum(c for t, c in tail_counts.items() if t > m)
            emp = above / total
        if tv > bound:
            ok = False
        rows.append(ConvergenceRow(m, tv, bound, emp))
    return ConvergenceReport(P.chamber_keys[start], rows, lams, ok)
