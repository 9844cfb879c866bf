"""Exact integer constants A_D and C_{l,k}, computed once and cached.

A_D = |B(D, 2t+1)| with t = Max(D) is the window count at the smallest
Frobenius number where the width-t window factorizes, and C_{l,k} is the
prefix-constrained analogue |B_l(k, 2k+1)| (or |B_l(k, l+k+1)| for k <= l,
where it is 1 by a short argument, as it is for all k <= 2l+1).

One sweep at f = 2t+1 buckets all 4^t sets by their width-t window, so the
batch route yields A_D for every D with Max(D) = t at once.  Each batch is
cross-checked three ways before anything is cached:

  * the buckets sum to 4^t (every set has exactly one window);
  * the buckets with window maximum t sum to 3^(t-1).  Proof: t+1 is in
    A(T) iff t+1 in T, t not in T, and x in T implies x+t+1 in T for
    x in [1, t-1]; positions t and t+1 are forced and each residual pair
    (x, x+t+1) admits 3 of 4 states, giving exactly 3^(t-1) such sets;
  * for every D with Max(D) = s < t, the bucket equals
    A_D 4^(t-s) - sum_{k=s+1}^{t} A_{D∪{k}} 4^(t-k), the finite truncation
    identity evaluated with previously computed constants.

The cache file is line-delimited ``A|<D-key>|<int>`` / ``C|<l>,<k>|<int>``
records, UTF-8 with LF endings, sorted for reproducible diffs; ``#`` lines
carry provenance (``# key: value``).  Conflicting values for one key are a
correctness bug somewhere and always a hard error, never a silent merge.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import DSet
from .enumeration import BudgetError, window_counts

DEFAULT_DEPTH_BUDGET = 15
CACHE_ENV = "NSDENSITY_CACHE"
DEFAULT_CACHE_NAME = "nsdensity.cache"


class CacheConflictError(ValueError):
    """Two sources disagree on an exact constant."""


@dataclass
class ConstantCache:
    a_entries: dict[str, int] = field(default_factory=dict)
    c_entries: dict[tuple[int, int], int] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)

    def a(self, d: DSet) -> int | None:
        if d.max_element == 0:
            return 1
        return self.a_entries.get(d.key)

    def c(self, l: int, k: int) -> int | None:
        return self.c_entries.get((l, k))

    def set_a(self, d: DSet, value: int) -> None:
        old = self.a_entries.get(d.key)
        if old is not None and old != value:
            raise CacheConflictError(
                f"A[{d.key}] recomputed as {value}, cached {old}"
            )
        self.a_entries[d.key] = value

    def set_c(self, l: int, k: int, value: int) -> None:
        old = self.c_entries.get((l, k))
        if old is not None and old != value:
            raise CacheConflictError(
                f"C[{l},{k}] recomputed as {value}, cached {old}"
            )
        self.c_entries[(l, k)] = value

    def a_depth(self) -> int:
        """Largest t with every Max(D) = t entry present."""
        by_max: dict[int, int] = {}
        for key in self.a_entries:
            m = DSet.parse(key).max_element
            by_max[m] = by_max.get(m, 0) + 1
        t = 0
        while by_max.get(t + 1, 0) == 1 << t:  # 2^t sets have maximum t+1
            t += 1
        return t

    def merge(self, other: "ConstantCache") -> None:
        for key, value in other.a_entries.items():
            self.set_a(DSet.parse(key), value)
        for (l, k), value in other.c_entries.items():
            self.set_c(l, k, value)
        self.provenance.update(other.provenance)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConstantCache):
            return NotImplemented
        return (
            self.a_entries == other.a_entries
            and self.c_entries == other.c_entries
        )


def cache_load(path: str | os.PathLike) -> ConstantCache:
    cache = ConstantCache()
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    cache.provenance[key.strip()] = val.strip()
                continue
            parts = line.split("|")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: malformed record {line!r}")
            kind, key, val = parts
            try:
                value = int(val)
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: non-integer value {val!r}"
                ) from None
            if value < 0:
                raise ValueError(f"{path}:{lineno}: negative count {value}")
            if kind == "A":
                cache.set_a(DSet.parse(key), value)
            elif kind == "C":
                try:
                    l, k = (int(p) for p in key.split(","))
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad C key {key!r}"
                    ) from None
                cache.set_c(l, k, value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown record kind {kind!r}")
    return cache


def cache_store(cache: ConstantCache, path: str | os.PathLike) -> None:
    """Write sorted records; atomic via rename so readers never see a torn file."""
    lines = [f"# {k}: {v}" for k, v in sorted(cache.provenance.items())]
    records = sorted(
        [f"A|{key}|{value}" for key, value in cache.a_entries.items()]
        + [f"C|{l},{k}|{value}" for (l, k), value in cache.c_entries.items()]
    )
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines + records:
            fh.write(line + "\n")
    os.replace(tmp, path)


def resolve_cache_path(flag: str | None = None) -> str:
    """--cache flag, then NSDENSITY_CACHE, then ./nsdensity.cache."""
    if flag:
        return flag
    env = os.environ.get(CACHE_ENV)
    if env:
        return env
    return os.path.join(os.curdir, DEFAULT_CACHE_NAME)


# ---------------------------------------------------------------------------
# A_D


def a_consts_batch(
    t: int,
    cache: ConstantCache | None = None,
    *,
    budget: int = DEFAULT_DEPTH_BUDGET,
    workers: int = 1,
) -> dict[DSet, int]:
    """All A_D with Max(D) = t from one bucketed sweep at f = 2t+1.

    Stores results into ``cache`` when given, after the consistency checks
    described in the module docstring.  Buckets for smaller window maxima
    are validated against cached constants whenever those are present.
    """
    if t < 1:
        raise ValueError("batch needs t >= 1; A over the empty set is 1")
    if t > budget:
        raise BudgetError(
            f"A_D at Max(D)={t} needs a 4^{t}-set sweep at f={2 * t + 1}; "
            f"depth budget is {budget}"
        )
    f = 2 * t + 1
    buckets = window_counts(f, t, budget=f, workers=workers)

    if int(buckets.sum()) != 4**t:
        raise AssertionError(f"window buckets at t={t} sum to {buckets.sum()}")
    top = {
        DSet.from_mask(m): int(buckets[m])
        for m in range(1 << t)
        if m >> (t - 1)
    }
    if sum(top.values()) != 3 ** (t - 1):
        raise AssertionError(
            f"sets with {t + 1} in A(T) at f={f} number {sum(top.values())}, "
            f"expected 3^{t - 1}"
        )

    if cache is not None:
        known = dict(top)
        for m in range(1 << (t - 1)):  # window maxima below t
            d = DSet.from_mask(m)
            value = _truncation_bucket(d, t, cache, known)
            if value is not None and value != int(buckets[m]):
                raise CacheConflictError(
                    f"bucket[{d.key}] at t={t} is {int(buckets[m])}, cached "
                    f"constants predict {value}"
                )
        for d, value in top.items():
            cache.set_a(d, value)
    return top


def _truncation_bucket(
    d: DSet, t: int, cache: ConstantCache, top: Mapping[DSet, int]
) -> int | None:
    """A_D 4^(t-s) - sum_{k=s+1}^t A_{D∪{k}} 4^(t-k), None if inputs missing."""
    s = d.max_element
    a_d = cache.a(d)
    if a_d is None:
        return None
    value = a_d * 4 ** (t - s)
    for k in range(s + 1, t + 1):
        e = d.with_added(k)
        a_e = top.get(e) if k == t else cache.a(e)
        if a_e is None:
            return None
        value -= a_e * 4 ** (t - k)
    return value


def a_const(
    d: DSet,
    cache: ConstantCache | None = None,
    *,
    budget: int = DEFAULT_DEPTH_BUDGET,
    workers: int = 1,
) -> int:
    """A_D = |B(D, 2 Max(D) + 1)|, from cache when possible."""
    t = d.max_element
    if t == 0:
        return 1
    if cache is not None:
        hit = cache.a(d)
        if hit is not None:
            return hit
    batch = a_consts_batch(t, cache, budget=budget, workers=workers)
    value = batch[d]
    if value > 3 ** (t - 1):
        raise AssertionError(f"A[{d.key}] = {value} exceeds 3^{t - 1}")
    return value


def build_a_constants(
    depth: int,
    cache: ConstantCache | None = None,
    *,
    budget: int | None = None,
    workers: int = 1,
) -> ConstantCache:
    """Fill a cache with every A_D for Max(D) <= depth, in increasing t.

    Increasing order lets each batch validate all its lower-window buckets
    against the constants already computed.
    """
    if cache is None:
        cache = ConstantCache()
    if budget is None:
        budget = max(depth, DEFAULT_DEPTH_BUDGET)
    for t in range(1, depth + 1):
        if any(
            cache.a(DSet.from_mask(m | (1 << (t - 1)))) is None
            for m in range(1 << (t - 1))
        ):
            a_consts_batch(t, cache, budget=budget, workers=workers)
    prov_depth = int(cache.provenance.get("a-depth", "0"))
    cache.provenance["a-depth"] = str(max(depth, prov_depth))
    return cache


# ---------------------------------------------------------------------------
# C_{l,k}


def c_const(
    l: int,
    k: int,
    cache: ConstantCache | None = None,
    *,
    budget: int = DEFAULT_DEPTH_BUDGET,
    workers: int = 1,
) -> int:
    """C_{l,k}: prefix-avoiding window constant.

    1 in closed form for k <= 2l+1.  For k >= 2l+2 it is |B_l(k, 2k+1)| by
    enumeration, checked against the bound 2^l 3^(k-2l-1).
    """
    if l < 1 or k < 1:
        raise ValueError("l and k must be positive")
    if k <= 2 * l + 1:
        # k <= l: only {f-k} ∪ N_f qualifies at f = l+k+1; l < k <= 2l+1:
        # the prefix gap empties [1, k-1] too and the same set remains
        return 1
    if cache is not None:
        hit = cache.c(l, k)
        if hit is not None:
            return hit
    if k > budget:
        raise BudgetError(
            f"C[{l},{k}] needs a sweep at f={2 * k + 1}; depth budget is {budget}"
        )
    f = 2 * k + 1
    buckets = window_counts(f, k, prefix_zeros=l, budget=f, workers=workers)
    value = int(buckets[1 << (k - 1)])
    limit = 2**l * 3 ** (k - 2 * l - 1)
    if value > limit:
        raise AssertionError(
            f"C[{l},{k}] = {value} exceeds 2^{l} 3^{k - 2 * l - 1} = {limit}"
        )
    if cache is not None:
        cache.set_c(l, k, value)
    return value
