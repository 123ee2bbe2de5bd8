"""Brute-force ground truth for zero-forcing delivery.

Enumerates carrier configurations to find the largest deliverable message
set for a realization, independently of the greedy scheduler, and sums
over all erasure patterns for exact expected delivery counts. Generic
gains make feasibility purely combinatorial: a lone carrier must disturb
no active receiver, a carrier pair has one free relative scale and can
null exactly one receiver that both of them reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .assignment import MessageAssignment, remove_transmitter
from .network import NetworkRealization
from .scheduler import schedule_network

ORACLE_K_LIMIT = 10  # exhaustive carrier search
EXACT_SCHEDULER_K_LIMIT = 12  # 2^(2k-1) patterns through the scheduler
EXACT_ORACLE_K_LIMIT = 7  # 2^(2k-1) patterns through the oracle


@dataclass(frozen=True)
class CarrierConfig:
    """Candidate scheme: a delivered set plus, per message, the carriers.

    ``carriers[m-1]`` holds the transmitters actually emitting a signal
    derived from message m. Undelivered messages carry nothing: their
    emissions could only add interference.
    """

    k: int
    carriers: tuple[frozenset[int], ...]
    delivered: frozenset[int]

    def __post_init__(self):
        if len(self.carriers) != self.k:
            raise ValueError(f"expected {self.k} carrier sets, got {len(self.carriers)}")
        if any(m < 1 or m > self.k for m in self.delivered):
            raise ValueError("delivered messages must lie in 1..k")
        for m, c in enumerate(self.carriers, start=1):
            if len(c) > 2:
                raise ValueError(f"message {m}: at most two carriers allowed")
            if c and m not in self.delivered:
                raise ValueError(f"message {m} is undelivered but has carriers")


def _link_present(r: NetworkRealization, t: int, receiver: int) -> bool:
    if t == receiver:
        return r.has_direct(t)
    if t == receiver - 1:
        return r.has_cross(t)
    return False


def _reach(r: NetworkRealization, t: int) -> frozenset[int]:
    """Receivers transmitter t can still touch."""
    reached = set()
    if r.has_direct(t):
        reached.add(t)
    if t < r.k and r.has_cross(t):
        reached.add(t + 1)
    return frozenset(reached)


def feasible(cfg: CarrierConfig, r: NetworkRealization) -> bool:
    """Can this configuration deliver its whole set under generic gains?

    Requires, for every delivered message m: (a) some carrier holds a
    surviving link into receiver m; (b) the other active receivers its
    carriers touch number at most one, and any such receiver is touched
    by both carriers so the pair's free scale can null it there.
    """
    if cfg.k != r.k:
        raise ValueError(f"config has k={cfg.k} but realization has k={r.k}")
    for m in cfg.delivered:
        carriers = cfg.carriers[m - 1]
        if not any(t in (m - 1, m) and _link_present(r, t, m) for t in carriers):
            return False
        reaches = [_reach(r, t) for t in carriers]
        touched = frozenset().union(*reaches) if reaches else frozenset()
        conflicts = {rr for rr in cfg.delivered if rr != m and rr in touched}
        if not conflicts:
            continue
        if len(conflicts) > 1 or len(carriers) < 2:
            return False
        if not conflicts <= reaches[0] & reaches[1]:
            return False
    return True


def _carrier_options(
    r: NetworkRealization, a: MessageAssignment, m: int
) -> list[tuple[int, int]]:
    """(reach, both-reach) bitmasks for every workable carrier choice of m.

    A choice is a non-empty subset of the transmit set containing at
    least one carrier with a surviving link into receiver m. Receiver
    bits are 1 << (receiver - 1).
    """
    ts = sorted(a.transmit_sets[m - 1])
    subsets = [(t,) for t in ts]
    if len(ts) == 2:
        subsets.append(tuple(ts))
    options = []
    for subset in subsets:
        if not any(t in (m - 1, m) and _link_present(r, t, m) for t in subset):
            continue
        masks = []
        for t in subset:
            mask = 0
            for receiver in _reach(r, t):
                mask |= 1 << (receiver - 1)
            masks.append(mask)
        reach = 0
        for mask in masks:
            reach |= mask
        both = masks[0] & masks[1] if len(masks) == 2 else 0
        options.append((reach, both))
    return options


def optimal_zero_forcing_dof(
    r: NetworkRealization,
    a: MessageAssignment,
    *,
    k_limit: int = ORACLE_K_LIMIT,
) -> int:
    """Largest |delivered set| over all feasible carrier configurations.

    The feasibility predicate couples each message's carriers only with
    the delivered set, never with other messages' carriers, so a set D
    works iff every member has some workable choice against D. Candidate
    sets are scanned by decreasing size with that per-message test; the
    first hit is the optimum.
    """
    if r.k != a.k:
        raise ValueError(f"realization has k={r.k} but assignment has k={a.k}")
    if r.k > k_limit:
        raise ValueError(f"exhaustive search limited to k <= {k_limit}, got k={r.k}")
    deliverable = []
    options = []
    for m in range(1, r.k + 1):
        opts = _carrier_options(r, a, m)
        if opts:
            deliverable.append(m)
            options.append(opts)
    for size in range(len(deliverable), 0, -1):
        for combo in combinations(range(len(deliverable)), size):
            d_mask = 0
            for idx in combo:
                d_mask |= 1 << (deliverable[idx] - 1)
            ok = True
            for idx in combo:
                self_bit = 1 << (deliverable[idx] - 1)
                for reach, both in options[idx]:
                    z = reach & d_mask & ~self_bit
                    if z & ~both == 0 and z.bit_count() <= 1:
                        break
                else:
                    ok = False
                    break
            if ok:
                return size
    return 0


def exact_expected_dof(
    k: int,
    p: float,
    a: MessageAssignment,
    engine: str = "scheduler",
    deactivate_last: bool = False,
) -> float:
    """Expected delivered count, summed exactly over all erasure patterns.

    Adds DoF(pattern) * p^(#erased) * (1-p)^(#survived) over the
    2^(2k-1) patterns. With `deactivate_last` the last transmitter is
    removed from every transmit set and its direct link forced dead,
    mirroring the Monte Carlo harness. The result is a polynomial in p
    evaluated by compensated summation, so it is order-independent.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must lie in [0, 1], got {p}")
    if a.k != k:
        raise ValueError(f"assignment has k={a.k}, expected {k}")
    if engine == "scheduler":
        if k > EXACT_SCHEDULER_K_LIMIT:
            raise ValueError(
                f"scheduler engine limited to k <= {EXACT_SCHEDULER_K_LIMIT}, got k={k}"
            )
    elif engine == "oracle":
        if k > EXACT_ORACLE_K_LIMIT:
            raise ValueError(
                f"oracle engine limited to k <= {EXACT_ORACLE_K_LIMIT}, got k={k}"
            )
    else:
        raise ValueError(f"unknown engine {engine!r}, use 'scheduler' or 'oracle'")
    if deactivate_last:
        a = remove_transmitter(a, k)

    def compute(r: NetworkRealization) -> int:
        if engine == "scheduler":
            return len(schedule_network(r, a).delivered)
        return optimal_zero_forcing_dof(r, a)

    links = 2 * k - 1
    counts: dict[tuple[int, int], int] = {}
    for bits in range(1 << links):
        direct = tuple(bool(bits >> i & 1) for i in range(k))
        cross = tuple(bool(bits >> (k + i) & 1) for i in range(k - 1))
        erased = links - bits.bit_count()
        if deactivate_last:
            direct = direct[:-1] + (False,)
        d = compute(NetworkRealization(k, direct, cross))
        key = (erased, d)
        counts[key] = counts.get(key, 0) + 1
    return math.fsum(
        n * d * p**e * (1.0 - p) ** (links - e)
        for (e, d), n in sorted(counts.items())
    )
