"""Greedy zero-forcing scheduler and beamforming-weight construction.

Users are visited in ascending order, once per cluster. A message is sent
whenever it can reach its own receiver without disturbing a receiver that
was already won, preferring delivery from the preceding transmitter; a
neighbouring transmitter that knows the message may be enlisted to null
the one receiver the delivery would disturb. Decisions are never revised.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .assignment import MessageAssignment
from .network import NetworkRealization, partition_into_clusters

# Verification thresholds: desired coefficients are bounded away from
# zero by the gain floor, interference must vanish to rounding noise.
MIN_DESIRED_MAGNITUDE = 1e-6
MAX_INTERFERENCE_RATIO = 1e-9


@dataclass(frozen=True)
class Schedule:
    """Send decisions as (message i, transmitter j) pairs, j in {i-2..i+1}.

    Message i is delivered iff it is sent from transmitter i-1 or i
    (never both); the pairs (i, i-2) and (i, i+1) are cancellation-only
    emissions that always accompany a delivery.
    """

    k: int
    entries: frozenset[tuple[int, int]]
    delivered: frozenset[int]

    def b(self, i: int, j: int) -> bool:
        """Decision variable; out-of-range indices read as 0."""
        return (i, j) in self.entries


def _delivered(entries: set[tuple[int, int]]) -> frozenset[int]:
    return frozenset(i for i, j in entries if j in (i - 1, i))


def _decision_pass(
    direct: Sequence[bool],
    tsets: Sequence[frozenset[int]],
    start: int,
    end: int,
) -> set[tuple[int, int]]:
    """Run the greedy pass over the span start..end (one cluster).

    Indices are global; cross links strictly inside the span are taken to
    be present (cluster property) and transmitters before `start` belong
    to another cluster, hence are ignored. With every decision variable
    outside the span reading as 0, the first two users of a span need no
    special treatment: the general rules already reduce to the right
    boundary behaviour.
    """
    b: set[tuple[int, int]] = set()
    for i in range(start, end + 1):
        ts = tsets[i - 1]
        # Try the preceding transmitter first: its signal can only disturb
        # receiver i-1, and only when that receiver is active through its
        # own direct link; a helper at transmitter i-2 may null that.
        if i - 1 >= start and i - 1 in ts and (i - 1, i - 1) not in b:
            if not direct[i - 2] or (i - 1, i - 2) not in b:
                b.add((i, i - 1))
            elif (
                i - 2 >= start
                and i - 2 in ts
                and (
                    not direct[i - 3]
                    or ((i - 2, i - 2) not in b and (i - 2, i - 3) not in b)
                )
            ):
                b.add((i, i - 1))
                b.add((i, i - 2))
        # Otherwise send from the own transmitter. Receiver i must not
        # already be burdened by an uncancellable emission at transmitter
        # i-1; interference from a self-delivering transmitter i-1 can be
        # nulled from transmitter i when it also knows message i-1.
        if (
            direct[i - 1]
            and i in ts
            and (i, i - 1) not in b
            and (i - 2, i - 1) not in b
        ):
            if (i - 1, i - 1) not in b:
                b.add((i, i))
            elif i in tsets[i - 2]:
                b.add((i, i))
                b.add((i - 1, i))
    return b


def schedule_cluster(
    n: int,
    direct: Sequence[bool],
    transmit_sets: Sequence[frozenset[int]],
) -> Schedule:
    """Decision pass for a single cluster, in local indices 1..n.

    Cross links inside a cluster are present by definition and are not
    passed in; `direct[i-1]` is the survival of local direct link i.
    """
    if n < 1:
        raise ValueError(f"need at least one user, got n={n}")
    if len(direct) != n:
        raise ValueError(f"expected {n} direct flags, got {len(direct)}")
    if len(transmit_sets) != n:
        raise ValueError(f"expected {n} transmit sets, got {len(transmit_sets)}")
    for i, ts in enumerate(transmit_sets, start=1):
        if len(ts) > 2:
            raise ValueError(f"message {i}: at most two transmitters allowed")
        if any(t < 1 or t > n for t in ts):
            raise ValueError(f"message {i}: transmitter indices must lie in 1..{n}")
    entries = _decision_pass(tuple(direct), tuple(transmit_sets), 1, n)
    return Schedule(n, frozenset(entries), _delivered(entries))


def schedule_network(r: NetworkRealization, a: MessageAssignment) -> Schedule:
    """Schedule a whole realization cluster by cluster.

    Clusters cannot interfere with each other, so the pass runs once per
    cluster with out-of-cluster transmitters ignored, and the decisions
    are merged on global indices.
    """
    if r.k != a.k:
        raise ValueError(f"realization has k={r.k} but assignment has k={a.k}")
    entries: set[tuple[int, int]] = set()
    for cluster in partition_into_clusters(r):
        entries |= _decision_pass(r.direct, a.transmit_sets, cluster.start, cluster.end)
    return Schedule(r.k, frozenset(entries), _delivered(entries))


def dof(s: Schedule) -> int:
    """Messages delivered interference-free in one block."""
    return len(s.delivered)


@dataclass(frozen=True)
class BeamformingPlan:
    """Per-transmitter complex weight for every message it emits."""

    k: int
    weights: tuple[dict[int, complex], ...]

    def transmitter(self, t: int) -> dict[int, complex]:
        return self.weights[t - 1]


def build_transmit_signals(s: Schedule, r: NetworkRealization) -> BeamformingPlan:
    """Turn decisions into transmit weights.

    Deliveries transmit at unit weight. A cancellation emission carries
    the exact gain ratio that nulls the message at the one receiver it
    would otherwise disturb: transmitter t nulls message t-1 at receiver
    t, and message t+2 at receiver t+1.
    """
    if r.k != s.k:
        raise ValueError(f"realization has k={r.k} but schedule has k={s.k}")
    if not r.has_gains:
        raise ValueError("realization has no gains attached")
    weights = []
    for t in range(1, r.k + 1):
        w: dict[int, complex] = {}
        if (t, t) in s.entries:
            w[t] = 1 + 0j
        if (t + 1, t) in s.entries:
            w[t + 1] = 1 + 0j
        if (t - 1, t) in s.entries:
            if not (r.has_cross(t - 1) and r.has_direct(t)):
                raise RuntimeError(
                    f"transmitter {t}: cancelling message {t - 1} needs links that are erased"
                )
            w[t - 1] = -r.gain_cross(t - 1) / r.gain_direct(t)
        if t + 2 <= r.k and (t + 2, t) in s.entries:
            if not (r.has_direct(t + 1) and r.has_cross(t)):
                raise RuntimeError(
                    f"transmitter {t}: cancelling message {t + 2} needs links that are erased"
                )
            w[t + 2] = -r.gain_direct(t + 1) / r.gain_cross(t)
        weights.append(w)
    return BeamformingPlan(r.k, tuple(weights))


@dataclass(frozen=True)
class ReceiverCheck:
    receiver: int
    desired_magnitude: float
    interference_ratio: float
    ok: bool


@dataclass(frozen=True)
class ZeroForcingReport:
    passed: bool
    checks: tuple[ReceiverCheck, ...]
    failures: tuple[str, ...]


def verify_zero_forcing(
    plan: BeamformingPlan,
    s: Schedule,
    r: NetworkRealization,
) -> ZeroForcingReport:
    """Numerically confirm the zero-forcing contract under attached gains.

    For every active (delivered-to) receiver the net coefficient of each
    message is accumulated over the two incoming links. The check passes
    iff the receiver's own message survives with magnitude at least
    MIN_DESIRED_MAGNITUDE and every other message is suppressed below
    MAX_INTERFERENCE_RATIO relative to it. Inactive receivers may see
    anything.
    """
    if not r.has_gains:
        raise ValueError("realization has no gains attached")
    if r.k != s.k or plan.k != s.k:
        raise ValueError("plan, schedule and realization sizes disagree")
    checks = []
    failures = []
    for i in sorted(s.delivered):
        net: dict[int, complex] = {}
        incoming = [(i, r.gain_direct(i))]
        if i >= 2:
            incoming.append((i - 1, r.gain_cross(i - 1)))
        for t, gain in incoming:
            if gain == 0:
                continue
            for m, w in plan.transmitter(t).items():
                net[m] = net.get(m, 0j) + gain * w
        desired = abs(net.get(i, 0j))
        interference = max((abs(c) for m, c in net.items() if m != i), default=0.0)
        if desired > 0:
            ratio = interference / desired
        else:
            ratio = float("inf") if interference > 0 else 0.0
        ok = desired >= MIN_DESIRED_MAGNITUDE and ratio <= MAX_INTERFERENCE_RATIO
        checks.append(ReceiverCheck(i, desired, ratio, ok))
        if desired < MIN_DESIRED_MAGNITUDE:
            failures.append(
                f"receiver {i}: desired coefficient {desired:.3e} below {MIN_DESIRED_MAGNITUDE:g}"
            )
        elif ratio > MAX_INTERFERENCE_RATIO:
            failures.append(
                f"receiver {i}: relative interference {ratio:.3e} above {MAX_INTERFERENCE_RATIO:g}"
            )
    return ZeroForcingReport(not failures, tuple(checks), tuple(failures))
