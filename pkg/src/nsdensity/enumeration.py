"""Exhaustive sweeps over all numerical sets with a fixed Frobenius number.

There are 2^(f-1) numerical sets with Frobenius number f, one per subset of
[1, f-1].  Every counter in this module visits all of them (optionally
restricted to sets avoiding a prefix [1, l]) and reduces with exact integer
arithmetic, so results are independent of chunking and worker count.

The kernels operate on numpy uint64 arrays of "full masks": bit x is set
exactly when x is a member, bit 0 is always set, and bits >= f are zero.
Membership of s in A(T) for s in [1, f] is a single masked comparison,

    full & ~(full >> s) & low_bits(f - s + 1) == 0

which scans all x in [0, f-s] for the violation "x in T but x+s not in T".
The zero bits above position f-1 make x + s > f count as a member for free,
and force s in [1, f-1] to fail whenever f - s is missing (x = f - s would
land on f, which is never a member).  A full A(T) image therefore costs f-1
vector passes, and a width-w suffix window costs w.

Word size limits these kernels to f <= 63; the pure-python routines in
``core`` remain valid for arbitrary f.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .core import DSet, NumericalSet, Semigroup, n_of

CHUNK = 1 << 20
DEFAULT_ENUM_BUDGET = 30
WORD_LIMIT = 63

_U1 = np.uint64(1)


class BudgetError(Exception):
    """A sweep would visit more sets than the configured budget allows."""


def _check_budget(f: int, budget: int) -> None:
    if f < 1:
        raise ValueError(f"Frobenius number must be >= 1, got {f}")
    if f > budget:
        raise BudgetError(
            f"enumeration over f={f} exceeds budget f<={budget} "
            f"(2^{f - 1} sets); raise the budget explicitly to proceed"
        )
    if f > WORD_LIMIT:
        raise BudgetError(f"vectorized kernels require f <= {WORD_LIMIT}, got {f}")


def iter_numerical_sets(
    f: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> Iterator[NumericalSet]:
    """Yield every numerical set with Frobenius number f exactly once."""
    _check_budget(f, budget)
    for mask in range(1 << (f - 1)):
        yield NumericalSet(f, mask)


def for_each_numerical_set(
    f: int,
    visitor: Callable[[NumericalSet], None],
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> None:
    """Call ``visitor`` on each of the 2^(f-1) sets; order unspecified.

    This is the python-object path, intended for small f and for oracle
    tests.  The bulk counters below use vectorized sweeps instead and
    reduce deterministically regardless of partitioning.
    """
    for t in iter_numerical_sets(f, budget=budget):
        visitor(t)


# ---------------------------------------------------------------------------
# chunked mask production and the two elementary kernels


def _map_chunks(
    f: int,
    func: Callable[[np.ndarray], object],
    *,
    prefix_zeros: int = 0,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
    chunk: int = CHUNK,
) -> list:
    """Apply ``func`` to full-mask chunks covering the whole sweep.

    Results are returned in ascending mask order, so any reduction that is
    associative and commutative over exact integers is deterministic for
    every worker count.
    """
    _check_budget(f, budget)
    if not 0 <= prefix_zeros <= f - 1:
        raise ValueError(f"prefix [1,{prefix_zeros}] does not fit below f={f}")
    total = 1 << (f - 1 - prefix_zeros)
    ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]

    shift = np.uint64(prefix_zeros)

    def run(bounds: tuple[int, int]):
        lo, hi = bounds
        gaps = np.arange(lo, hi, dtype=np.uint64) << shift
        return func((gaps << _U1) | _U1)

    if workers <= 1 or len(ranges) == 1:
        return [run(r) for r in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, ranges))


def _amask_chunk(full: np.ndarray, f: int) -> np.ndarray:
    """Gap mask of A(T) for every full mask: bit s-1 set iff s in A(T)."""
    out = np.zeros(full.shape, dtype=np.uint64)
    for s in range(1, f):
        lim = np.uint64((1 << (f - s + 1)) - 1)
        viol = full & ~(full >> np.uint64(s)) & lim
        out |= (viol == 0).astype(np.uint64) << np.uint64(s - 1)
    return out


def _window_chunk(full: np.ndarray, f: int, width: int) -> np.ndarray:
    """Suffix pattern of A(T) as a mask: bit y-1 set iff f-y in A(T)."""
    out = np.zeros(full.shape, dtype=np.uint64)
    for y in range(1, width + 1):
        lim = np.uint64((1 << (y + 1)) - 1)
        viol = full & ~(full >> np.uint64(f - y)) & lim
        out |= (viol == 0).astype(np.uint64) << np.uint64(y - 1)
    return out


def _mult_chunk(amask: np.ndarray, f: int) -> np.ndarray:
    """m(A(T)) for every A-gap-mask; equals f+1 when A(T) = N_f."""
    low = amask & (~amask + _U1)
    m = np.bitwise_count(low - _U1).astype(np.uint64) + _U1
    return np.where(amask == 0, np.uint64(f + 1), m)


def _extract_window(amask: np.ndarray, f: int, width: int) -> np.ndarray:
    """Suffix pattern of width ``width`` read out of precomputed A-masks."""
    out = np.zeros(amask.shape, dtype=np.uint64)
    for y in range(1, width + 1):
        out |= ((amask >> np.uint64(f - y - 1)) & _U1) << np.uint64(y - 1)
    return out


# ---------------------------------------------------------------------------
# density tables


@dataclass(frozen=True)
class DensityTable:
    """Exact preimage counts P(S) for every semigroup S with f(S) = f."""

    f: int
    entries: Mapping[Semigroup, int]

    def __post_init__(self):
        total = 0
        for s, p in self.entries.items():
            if s.f != self.f:
                raise ValueError(f"entry {s!s} has f={s.f}, table has f={self.f}")
            if p < 1:
                # every semigroup is its own preimage
                raise ValueError(f"P({s!s}) = {p} < 1")
            total += p
        if total != 1 << (self.f - 1):
            raise ValueError(
                f"sum of P(S) is {total}, expected 2^{self.f - 1}"
            )

    def preimages(self, s: Semigroup) -> int:
        return self.entries[s]

    def mu(self, s: Semigroup) -> Fraction:
        return Fraction(self.entries[s], 1 << (self.f - 1))

    def sorted_entries(self) -> list[tuple[Semigroup, int]]:
        """Entries by descending P, ties by ascending gap mask."""
        return sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0].gaps_mask))

    def __len__(self) -> int:
        return len(self.entries)


def density_table(
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> DensityTable:
    """Map every T with f(T) = f through A and tally preimages per semigroup."""
    counts: dict[int, int] = {}
    for masks, tallies in _map_chunks(
        f,
        lambda full: np.unique(_amask_chunk(full, f), return_counts=True),
        budget=budget,
        workers=workers,
    ):
        for a, c in zip(masks.tolist(), tallies.tolist()):
            counts[a] = counts.get(a, 0) + c
    entries = {Semigroup(f, a): c for a, c in sorted(counts.items())}
    return DensityTable(f, entries)


def preimage_counts(
    f: int,
    targets: Sequence[Semigroup],
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> dict[Semigroup, int]:
    """P(S) for selected semigroups only, without building the full table."""
    targets = list(dict.fromkeys(targets))  # tolerate duplicates
    for s in targets:
        if s.f != f:
            raise ValueError(f"target {s!s} has f={s.f}, sweep has f={f}")
    goals = [np.uint64(s.gaps_mask) for s in targets]

    def tally(full: np.ndarray) -> list[int]:
        amask = _amask_chunk(full, f)
        return [int(np.count_nonzero(amask == g)) for g in goals]

    out = dict.fromkeys(targets, 0)
    for partial in _map_chunks(f, tally, budget=budget, workers=workers):
        for s, c in zip(targets, partial):
            out[s] += c
    return out


# ---------------------------------------------------------------------------
# window counters: B(D,f), B_l(k,f), G_l(f), S(D,f)


def window_counts(
    f: int,
    width: int,
    *,
    prefix_zeros: int = 0,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> np.ndarray:
    """Histogram of width-``width`` suffix patterns of A(T) over the sweep.

    Entry p counts the sets T (with T ∩ [1, prefix_zeros] empty) whose
    pattern {y in [1, width] : f-y in A(T)} encodes to p.  Pattern p is the
    width-``width`` window of D(A(T)), so for Max(D) = width exactly,
    counts[D.mask] = |B(D, f)| restricted to the prefix constraint.
    """
    if not 0 <= width <= (f - 1) // 2:
        raise ValueError(f"window width {width} invalid for f={f}")

    def tally(full: np.ndarray) -> np.ndarray:
        w = _window_chunk(full, f, width)
        return np.bincount(w.astype(np.int64), minlength=1 << width)

    parts = _map_chunks(
        f, tally, prefix_zeros=prefix_zeros, budget=budget, workers=workers
    )
    total = np.zeros(1 << width, dtype=np.int64)
    for p in parts:
        total += p
    return total


def window_restrict(buckets: np.ndarray, width: int, t: int) -> np.ndarray:
    """Aggregate width-``width`` pattern counts down to width t <= width."""
    if not 0 <= t <= width:
        raise ValueError(f"cannot restrict width {width} to {t}")
    return buckets.reshape(1 << (width - t), 1 << t).sum(axis=0)


def count_B(
    d: DSet,
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> int:
    """|B(D,f)|: sets whose A(T) suffix window of width Max(D) matches D.

    Requires f > 2 Max(D).  This is the direct counter; the constant-time
    route A_D * 2^(f-2t-1) is what it validates.
    """
    t = d.max_element
    if f <= 2 * t:
        raise ValueError(f"B({d!s},{f}) needs f > 2*Max(D) = {2 * t}")
    if t == 0:
        _check_budget(f, budget)
        return 1 << (f - 1)
    return int(window_counts(f, t, budget=budget, workers=workers)[d.mask])


def count_B_l(
    l: int,
    k: int,
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> int:
    """|B_l(k,f)|: members of B({k},f) avoiding [1,l] entirely."""
    if l < 1 or k < 1:
        raise ValueError("l and k must be positive")
    if k >= l and f < 2 * k + 1:
        raise ValueError(f"B_{l}({k},{f}) with k >= l needs f >= {2 * k + 1}")
    if k < l and f < l + k + 1:
        raise ValueError(f"B_{l}({k},{f}) with k < l needs f >= {l + k + 1}")
    # both branches leave f > 2k, so the width-k window is well defined
    buckets = window_counts(
        f, k, prefix_zeros=l, budget=budget, workers=workers
    )
    return int(buckets[1 << (k - 1)])


def count_G_l(
    l: int,
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> int:
    """|G_l(f)|: sets avoiding [1,l] whose associated semigroup is N_f."""
    if l < 0:
        raise ValueError("l must be >= 0")
    if f <= 2 * l:
        raise ValueError(f"G_{l}({f}) needs f > 2l = {2 * l}")

    def tally(full: np.ndarray) -> int:
        return int(np.count_nonzero(_amask_chunk(full, f) == 0))

    parts = _map_chunks(f, tally, prefix_zeros=l, budget=budget, workers=workers)
    return sum(parts)


def count_S(
    d: DSet,
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> int:
    """|S(D,f)|: the high-k residue of B(D,f) in the preimage partition.

    B(D,f) splits disjointly into {T : A(T) = N(D,f)} and the sets whose
    smallest window element beyond Max(D) is some k; pieces with 2k < f are
    B(D∪{k},f) and obey the window factorization, and S(D,f) collects the
    rest: window agreement with D through width floor((f-1)/2) plus at
    least one element at k with 2k >= f, i.e. 2 m(A(T)) <= f.  Testing
    2m <= f inside B(D,f) alone would overcount, since a set can carry both
    a middle extra element and a high one and such sets already sit in some
    B(D∪{k},f) with 2k < f.
    """
    t = d.max_element
    if f <= 2 * t:
        raise ValueError(f"S({d!s},{f}) needs f > 2*Max(D) = {2 * t}")
    wide = (f - 1) // 2
    goal = np.uint64(d.mask)
    half = np.uint64(f // 2)

    def tally(full: np.ndarray) -> int:
        amask = _amask_chunk(full, f)
        ew = _extract_window(amask, f, wide)
        hit = (ew == goal) & (_mult_chunk(amask, f) <= half)
        return int(np.count_nonzero(hit))

    return sum(_map_chunks(f, tally, budget=budget, workers=workers))


# ---------------------------------------------------------------------------
# one-pass census for the exact finite-f preimage identity


@dataclass(frozen=True)
class SuffixCensus:
    """Per-D counters needed by the exact identity

    P(N(D,f)) = A_D 2^(f-2t-1) - sum_{k=t+1}^{floor((f-1)/2)} A_{D∪{k}} 2^(f-2k-1)
                - |S(D,f)|

    gathered in a single sweep for every D with Max(D) <= width.
    """

    f: int
    width: int
    buckets: np.ndarray  # width-`width` window histogram
    p_counts: Mapping[DSet, int]  # D -> P(N(D,f))
    s_counts: Mapping[DSet, int]  # D -> |S(D,f)|

    def b_count(self, d: DSet) -> int:
        """|B(D,f)| for Max(D) <= width, from the shared histogram."""
        t = d.max_element
        return int(window_restrict(self.buckets, self.width, t)[d.mask])


def suffix_census(
    f: int,
    max_t: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> SuffixCensus:
    if not 0 <= max_t <= (f - 1) // 2:
        raise ValueError(f"max_t={max_t} invalid for f={f}")
    wide = (f - 1) // 2
    half = np.uint64(f // 2)
    dsets = [DSet.from_mask(m) for m in range(1 << max_t)]
    targets = [np.uint64(n_of(d, f, warn_uncertified=False).gaps_mask) for d in dsets]
    low_t = np.uint64((1 << max_t) - 1)

    def tally(full: np.ndarray):
        amask = _amask_chunk(full, f)
        ew = _extract_window(amask, f, wide)
        small = _mult_chunk(amask, f) <= half
        buckets = np.bincount(
            (ew & low_t).astype(np.int64), minlength=1 << max_t
        )
        p = [int(np.count_nonzero(amask == g)) for g in targets]
        s = [
            int(np.count_nonzero((ew == np.uint64(d.mask)) & small)) for d in dsets
        ]
        return buckets, p, s

    buckets = np.zeros(1 << max_t, dtype=np.int64)
    p_tot = [0] * len(dsets)
    s_tot = [0] * len(dsets)
    for b, p, s in _map_chunks(f, tally, budget=budget, workers=workers):
        buckets += b
        p_tot = [a + x for a, x in zip(p_tot, p)]
        s_tot = [a + x for a, x in zip(s_tot, s)]
    return SuffixCensus(
        f,
        max_t,
        buckets,
        dict(zip(dsets, p_tot)),
        dict(zip(dsets, s_tot)),
    )


# ---------------------------------------------------------------------------
# multiplicity statistics of A(T)


def multiplicity_counts(
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> dict[int, int]:
    """#{T : f(T)=f, m(A(T)) = m} for every attained m.

    Attainable m lie in [2, f-1] plus f+1 (for A(T) = N_f); m = f would put
    f itself in the semigroup and m = 1 would force 1, 2, ... all in.
    """

    def tally(full: np.ndarray) -> np.ndarray:
        m = _mult_chunk(_amask_chunk(full, f), f)
        return np.bincount(m.astype(np.int64), minlength=f + 2)

    total = np.zeros(f + 2, dtype=np.int64)
    for part in _map_chunks(f, tally, budget=budget, workers=workers):
        total += part
    return {m: int(c) for m, c in enumerate(total) if c}


def count_small_multiplicity(
    f: int,
    bound: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> int:
    """#{T : f(T)=f, m(A(T)) <= bound}."""
    if not 1 <= bound <= f:
        raise ValueError(f"bound must lie in [1, f], got {bound}")
    return sum(c for m, c in multiplicity_counts(
        f, budget=budget, workers=workers
    ).items() if m <= bound)


def alpha_empirical_all(
    f: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> dict[int, Fraction]:
    """alpha_n(f) = #{T : R(A(T)) = n} / 2^(f-1) for every attained n."""
    denom = 1 << (f - 1)
    return {
        f - m if m <= f else -1: Fraction(c, denom)
        for m, c in sorted(
            multiplicity_counts(f, budget=budget, workers=workers).items(),
            reverse=True,
        )
    }


def alpha_empirical(
    f: int,
    n: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    workers: int = 1,
) -> Fraction:
    if n < -1:
        raise ValueError(f"R(S) is never below -1, got n={n}")
    return alpha_empirical_all(f, budget=budget, workers=workers).get(
        n, Fraction(0)
    )
