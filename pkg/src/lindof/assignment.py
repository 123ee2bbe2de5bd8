"""Message-to-transmitter assignments under the two-transmitter budget.

Message i may be known at up to two transmitters (its transmit set T_i).
The parameterized family built here trades off two uses of the second
transmitter: as a redundant connected sender, or as a pure-cancellation
helper that is not connected to the message's own receiver.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .network import Cluster


class RuleOverlapWarning(UserWarning):
    """Two assignment-family rules claimed the same message index."""


@dataclass(frozen=True)
class MessageAssignment:
    """Transmit sets: ``transmit_sets[i-1]`` holds the transmitters knowing message i."""

    k: int
    transmit_sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"need at least one user, got k={self.k}")
        if len(self.transmit_sets) != self.k:
            raise ValueError(f"expected {self.k} transmit sets, got {len(self.transmit_sets)}")
        for i, ts in enumerate(self.transmit_sets, start=1):
            if len(ts) > 2:
                raise ValueError(f"message {i}: at most two transmitters allowed, got {sorted(ts)}")
            if any(t < 1 or t > self.k for t in ts):
                raise ValueError(f"message {i}: transmitter indices must lie in 1..{self.k}")

    def transmit_set(self, i: int) -> frozenset[int]:
        return self.transmit_sets[i - 1]


def build_assignment(k: int, f: Fraction | int) -> MessageAssignment:
    """Assignment family parameterized by the helper fraction f.

    A fraction f of the messages get one transmitter connected to their
    receiver plus one helper used purely for cancellation; the rest get
    both connected transmitters. All index rules are evaluated in exact
    rational arithmetic. Rules are applied in order; if two ever claim
    the same message the earlier one wins and a RuleOverlapWarning is
    issued. Rule ranges {1..x} are empty whenever x < 1.
    """
    f = Fraction(f)
    if k < 3:
        raise ValueError(f"assignment family needs k >= 3, got {k}")
    if not 0 <= f <= 1:
        raise ValueError(f"helper fraction must lie in [0, 1], got {f}")

    claimed: dict[int, tuple[str, frozenset[int]]] = {}

    def claim(i: int, rule: str, transmitters: frozenset[int]) -> None:
        if i in claimed:
            warnings.warn(
                f"message {i}: rule {rule!r} also matches (keeping {claimed[i][0]!r})",
                RuleOverlapWarning,
            )
            return
        claimed[i] = (rule, transmitters)

    claim(1, "first", frozenset({1, 2}))
    claim(k, "last", frozenset({k - 2, k - 1}))

    fk = f * k
    # Strided forward rows {i, i+1}. The stride divisor is only evaluated
    # once the range is known non-empty, which needs fk >= 3 > 1.
    hi = min(fk - 2, k // 2 - 1)
    if hi >= 1:
        stride = max(2, math.floor(Fraction(k) / (fk - 1)))
        for n in range(1, math.floor(hi) + 1):
            i = 1 + n * stride
            claim(i, "stride", frozenset({i, i + 1}))
    # Even-indexed forward rows, used once more than half the messages
    # carry a helper.
    hi = math.ceil((f - Fraction(1, 2)) * k) - 1
    for n in range(1, hi + 1):
        claim(2 * n, "even", frozenset({2 * n, 2 * n + 1}))

    sets = tuple(
        claimed[i][1] if i in claimed else frozenset({i - 1, i})
        for i in range(1, k + 1)
    )
    return MessageAssignment(k, sets)


def helper_fraction(a: MessageAssignment) -> Fraction:
    """Fraction of messages paired with a pure-cancellation helper.

    Counts messages whose transmit set holds exactly one transmitter
    connected to the message's receiver plus one that is not (the
    helper). Messages with both connected transmitters, a lone connected
    transmitter, or no connected transmitter at all do not count.
    """
    helpers = 0
    for i in range(1, a.k + 1):
        ts = a.transmit_sets[i - 1]
        connected = sum(1 for t in ts if t in (i - 1, i))
        if connected == 1 and len(ts) == 2:
            helpers += 1
    return Fraction(helpers, a.k)


def restrict_to_cluster(a: MessageAssignment, cluster: Cluster) -> MessageAssignment:
    """Project an assignment onto one cluster, re-indexed locally from 1.

    Transmitters outside the cluster are dropped: the boundary cross link
    is erased, so they cannot reach any receiver inside the cluster.
    """
    offset = cluster.start - 1
    sets = tuple(
        frozenset(t - offset for t in a.transmit_sets[i - 1] if cluster.start <= t <= cluster.end)
        for i in range(cluster.start, cluster.end + 1)
    )
    return MessageAssignment(cluster.size, sets)


def remove_transmitter(a: MessageAssignment, t: int) -> MessageAssignment:
    """Strip transmitter t from every transmit set (deactivating it)."""
    return MessageAssignment(a.k, tuple(ts - {t} for ts in a.transmit_sets))


def random_assignment(k: int, rng: np.random.Generator) -> MessageAssignment:
    """Random transmit sets with |T_i| <= 2 and unrestricted placement.

    Placement is uniform over all transmitters, so far-away helpers that
    cannot possibly serve their message do occur; empty sets occur too.
    """
    sets = []
    for _ in range(k):
        size = min(int(rng.choice(3, p=(0.05, 0.30, 0.65))), k)
        members = rng.choice(k, size=size, replace=False) + 1
        sets.append(frozenset(int(t) for t in members))
    return MessageAssignment(k, tuple(sets))


def assignment_label(k: int, f: Fraction) -> str:
    """Canonical report identifier for a family member."""
    return f"K={k},f={f.numerator}/{f.denominator}"


def format_assignment(a: MessageAssignment) -> str:
    """One line per message: ``i: t1[,t2]`` (bare ``i:`` for an empty set)."""
    lines = []
    for i, ts in enumerate(a.transmit_sets, start=1):
        body = ",".join(str(t) for t in sorted(ts))
        lines.append(f"{i}: {body}" if body else f"{i}:")
    return "\n".join(lines)
