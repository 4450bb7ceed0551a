"""Bipartition enumeration, double negativity, MEBD, and its lower estimators.

The central quantity is the double negativity N_{A,B}: twice the absolute sum
of the negative eigenvalues of rho^{T_A}.  MEBD is the minimum of N over all
2^(N-1)-1 bipartitions of the chain; the single-node witness and the recursive
level-k estimators bracket it from above and below.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadLevel, BadPartition, BadSize
from .hilbert import (
    MAX_SITES,
    Bipartition,
    SiteSet,
    index_mask,
    n_sites_of,
    partial_trace,
    partial_transpose,
)

# Off-block leakage above this disables the sector-blocked eigensolve.
BLOCK_LEAK_TOL = 1e-12


@dataclass(frozen=True)
class PartitionFamily:
    n_sites: int
    partitions: tuple[Bipartition, ...]


@dataclass(frozen=True)
class MebdResult:
    value: float
    argmin: Bipartition
    per_partition: dict[Bipartition, float]


def enumerate_bipartitions(n_sites: int) -> PartitionFamily:
    """All canonical bipartitions: site 1 in part_a, A<->B duplicates removed.

    Ordered by ascending part_a mask, which fixes argmin tie-breaking.
    """
    if not 2 <= n_sites <= MAX_SITES:
        raise BadSize(f"n_sites must be 2..{MAX_SITES}, got {n_sites}")
    full = (1 << n_sites) - 1
    parts = tuple(
        Bipartition.from_masks(n_sites, mask)
        for mask in range(1, full)
        if mask & 1
    )
    assert len(parts) == (1 << (n_sites - 1)) - 1
    return PartitionFamily(n_sites=n_sites, partitions=parts)


def _block_eigvalsh(block: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    if n == 1:
        return block.real.reshape(1)
    if n == 2:
        half_tr = 0.5 * (block[0, 0].real + block[1, 1].real)
        disc = math.hypot(0.5 * (block[0, 0].real - block[1, 1].real), abs(block[0, 1]))
        return np.array([half_tr - disc, half_tr + disc])
    return np.linalg.eigvalsh(block)


def _blocked_spectrum(mat: np.ndarray, labels: np.ndarray) -> np.ndarray | None:
    """Eigenvalues of a matrix that is block-diagonal under the given labels.

    Returns None when off-block entries exceed BLOCK_LEAK_TOL (the caller then
    falls back to the dense path).  All-zero rows carry eigenvalue 0 and are
    skipped.
    """
    support = np.flatnonzero(np.abs(mat).max(axis=0) > 0)
    if support.size == 0:
        return np.zeros(0)
    sub = mat[np.ix_(support, support)]
    order = np.argsort(labels[support], kind="stable")
    sub = sub[np.ix_(order, order)]
    lab = labels[support][order]
    bounds = np.flatnonzero(np.diff(lab)) + 1
    starts = np.concatenate(([0], bounds))
    ends = np.concatenate((bounds, [lab.size]))
    leak = np.abs(sub)
    for s, e in zip(starts, ends):
        leak[s:e, s:e] = 0.0
    if leak.max(initial=0.0) > BLOCK_LEAK_TOL:
        return None
    return np.concatenate([_block_eigvalsh(sub[s:e, s:e]) for s, e in zip(starts, ends)])


_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << MAX_SITES)], dtype=np.int64)


@functools.lru_cache(maxsize=4096)
def _sector_labels_for_mask(n_sites: int, mask: int) -> np.ndarray:
    idx = np.arange(1 << n_sites)
    m_a = index_mask(SiteSet(n_sites, mask))
    m_b = m_a ^ ((1 << n_sites) - 1)
    labels = _POPCOUNT[idx & m_a] - _POPCOUNT[idx & m_b]
    labels.setflags(write=False)
    return labels


def _sector_labels(n_sites: int, subset: SiteSet) -> np.ndarray:
    """Per-basis-index value of (excitations in subset) - (excitations outside).

    For rho commuting with total I_z, rho^{T_subset} is block diagonal in
    these labels, which is what the blocked eigensolve exploits.
    """
    return _sector_labels_for_mask(n_sites, subset.mask)


def double_negativity(rho: np.ndarray, p: Bipartition, method: str = "auto") -> float:
    """2 |sum of negative eigenvalues| of rho^{T_A} for the split p = A|B.

    method: 'dense' always eigensolves the full matrix; 'blocked' exploits
    I_z conservation (block-diagonal partial transpose); 'auto' tries the
    blocked path and falls back to dense when the block structure is absent.
    """
    if method not in ("auto", "dense", "blocked"):
        raise ValueError(f"unknown method {method!r}")
    pt = partial_transpose(rho, p.part_a)
    if method != "dense":
        w = _blocked_spectrum(pt, _sector_labels(p.n_sites, p.part_a))
        if w is not None:
            return linalg.negative_sum_of_eigenvalues(w)
        if method == "blocked":
            raise BadPartition("state does not conserve I_z; blocked path unavailable")
    return linalg.negative_sum(pt)


def pairwise_negativity(rho: np.ndarray, parts: list[SiteSet], i: int, j: int,
                        method: str = "auto") -> float:
    """Double negativity between parts[i] and parts[j] after tracing out the rest."""
    n = n_sites_of(rho)
    if i == j:
        raise BadPartition("i and j must differ")
    union = 0
    for k, p in enumerate(parts):
        if p.n_sites != n:
            raise BadPartition("part lives on a different register")
        if union & p.mask:
            raise BadPartition("parts overlap")
        union |= p.mask
    if union != (1 << n) - 1:
        raise BadPartition("parts do not cover the register")
    a, b = parts[i], parts[j]
    keep = SiteSet(n, a.mask | b.mask)
    reduced = partial_trace(rho, keep)
    # Relabel a's sites inside the reduced register (kept sites stay ordered).
    kept = keep.sites()
    local_a = SiteSet.from_sites(len(kept), (kept.index(s) + 1 for s in a.sites()))
    p = Bipartition(local_a, local_a.complement())
    return double_negativity(reduced, p, method=method)


def mebd(rho: np.ndarray, method: str = "auto", workers: int | None = None) -> MebdResult:
    """Minimum double negativity over every bipartition of the register."""
    n = n_sites_of(rho)
    family = enumerate_bipartitions(n)

    def neg(p: Bipartition) -> float:
        return double_negativity(rho, p, method=method)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(neg, family.partitions))
    else:
        values = [neg(p) for p in family.partitions]
    per = dict(zip(family.partitions, values))
    best = min(range(len(values)), key=lambda k: values[k])
    return MebdResult(value=values[best], argmin=family.partitions[best], per_partition=per)


def single_node_witness(rho: np.ndarray, method: str = "auto") -> float:
    """Min over sites of the one-site-versus-rest double negativity (upper bound on MEBD)."""
    n = n_sites_of(rho)
    if n < 2:
        raise BadSize("need at least 2 sites")
    vals = []
    for s in range(1, n + 1):
        a = SiteSet.from_sites(n, [s])
        vals.append(double_negativity(rho, Bipartition(a, a.complement()), method=method))
    return min(vals)


def _sub_bipartitions(sites: tuple[int, ...]):
    """Canonical splits of an explicit site tuple into two nonempty halves."""
    first = sites[0]
    rest = sites[1:]
    for mask in range(1 << len(rest)):
        a = (first,) + tuple(s for k, s in enumerate(rest) if mask >> k & 1)
        b = tuple(s for k, s in enumerate(rest) if not mask >> k & 1)
        if b:
            yield a, b


def _cross_negativity(rho: np.ndarray, sites_a: tuple[int, ...], sites_b: tuple[int, ...],
                      method: str) -> float:
    """Negativity between two site groups after reducing onto their union."""
    n = n_sites_of(rho)
    parts = [SiteSet.from_sites(n, sites_a), SiteSet.from_sites(n, sites_b)]
    leftover = SiteSet(n, (1 << n) - 1 - parts[0].mask - parts[1].mask)
    if leftover.mask:
        parts.append(leftover)
    return pairwise_negativity(rho, parts, 0, 1, method=method)


def mebd_of_subsystem(rho: np.ndarray, sites: tuple[int, ...], method: str = "auto") -> float:
    """MEBD of the reduced state on the given sites of the full register."""
    n = n_sites_of(rho)
    reduced = partial_trace(rho, SiteSet.from_sites(n, sites))
    return mebd(reduced, method=method).value


def lower_estimate_1(rho: np.ndarray, j: Bipartition, method: str = "auto") -> float:
    """min(E(A), E(B), N_{A,B}) for the fixed split j.

    Single-site parts have no internal decomposition; their MEBD term is
    omitted from the min.
    """
    sa, sb = j.part_a.sites(), j.part_b.sites()
    terms = [_cross_negativity(rho, sa, sb, method)]
    if len(sa) >= 2:
        terms.append(mebd_of_subsystem(rho, sa, method))
    if len(sb) >= 2:
        terms.append(mebd_of_subsystem(rho, sb, method))
    return min(terms)


def max_level(n_sites: int) -> int:
    """Deepest meaningful estimator level: recursion bottoms out at 2-site parts."""
    return max(1, n_sites - 2)


def lower_estimate_level(rho: np.ndarray, level: int, method: str = "auto") -> float:
    """Level-k lower estimator of MEBD.

    Level 0 is exact MEBD; level k replaces each subsystem MEBD by that
    subsystem's level-(k-1) estimate and maximizes over all decomposition
    choices.  Non-increasing in k.
    """
    n = n_sites_of(rho)
    if not 1 <= level <= max_level(n):
        raise BadLevel(f"level must be 1..{max_level(n)} for {n} sites, got {level}")

    reduced_cache: dict[tuple[int, ...], np.ndarray] = {}
    value_cache: dict[tuple[tuple[int, ...], int], float] = {}

    def reduced(sites: tuple[int, ...]) -> np.ndarray:
        if sites not in reduced_cache:
            reduced_cache[sites] = partial_trace(rho, SiteSet.from_sites(n, sites))
        return reduced_cache[sites]

    def estimate(sites: tuple[int, ...], lev: int) -> float:
        # E^(lev) of the reduced state on `sites`; +inf for single sites.
        if len(sites) == 1:
            return math.inf
        key = (sites, lev)
        if key in value_cache:
            return value_cache[key]
        if lev == 0:
            val = mebd(reduced(sites), method=method).value
        else:
            val = 0.0
            for sa, sb in _sub_bipartitions(sites):
                cross = _cross_negativity(rho, sa, sb, method)
                cand = min(estimate(sa, lev - 1), estimate(sb, lev - 1), cross)
                val = max(val, cand)
        value_cache[key] = val
        return val

    return estimate(tuple(range(1, n + 1)), level)
