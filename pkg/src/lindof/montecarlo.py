"""Seeded Monte Carlo estimation of the delivered fraction per user.

Each trial draws an erasure pattern from a seed derived from (point seed,
trial index), schedules it, and records the delivered count. Sums are
kept as exact integers, so results are bit-identical no matter how the
trial range is split across workers, and probability-zero/one endpoints
come out exact.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from .assignment import (
    MessageAssignment,
    assignment_label,
    build_assignment,
    remove_transmitter,
)
from .network import derive_seed, sample_realization
from .scheduler import schedule_network

CSV_HEADER = (
    "p",
    "assignment",
    "k",
    "f_num",
    "f_den",
    "trials",
    "seed",
    "pudof_mean",
    "pudof_stderr",
)


@dataclass(frozen=True)
class AssignmentSpec:
    """(network size, helper fraction) naming one family member."""

    k: int
    f: Fraction

    @property
    def label(self) -> str:
        return assignment_label(self.k, self.f)

    def build(self) -> MessageAssignment:
        return build_assignment(self.k, self.f)


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: an erasure-probability grid crossed with assignments.

    `k` is the default network size (the CLI builds every descriptor with
    it); each AssignmentSpec still carries its own size so one sweep can
    mix sizes. With `share_realizations` all assignments at a grid point
    reuse the same trial seeds (common random numbers), sharpening
    comparisons between them.
    """

    k: int
    assignments: tuple[AssignmentSpec, ...]
    p_start: float = 0.0
    p_end: float = 1.0
    p_step: float = 0.01
    trials: int = 6000
    master_seed: int = 0
    deactivate_last: bool = True
    share_realizations: bool = False
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p_start <= self.p_end <= 1.0:
            raise ValueError(
                f"p grid must lie in [0, 1] with start <= end, got [{self.p_start}, {self.p_end}]"
            )
        if self.p_step <= 0:
            raise ValueError(f"p step must be positive, got {self.p_step}")
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if not self.assignments:
            raise ValueError("at least one assignment is required")
        if self.workers < 1:
            raise ValueError(f"need at least one worker, got {self.workers}")

    def p_grid(self) -> tuple[float, ...]:
        n = int(math.floor((self.p_end - self.p_start) / self.p_step + 1e-9))
        return tuple(round(self.p_start + i * self.p_step, 10) for i in range(n + 1))


@dataclass(frozen=True)
class SweepRow:
    p: float
    label: str
    k: int
    f: Fraction
    trials: int
    seed: int
    mean: float
    stderr: float


def _dof_sums(
    k: int,
    p: float,
    assignment: MessageAssignment,
    master_seed: int,
    t_first: int,
    t_last: int,
    deactivate_last: bool,
) -> tuple[int, int]:
    """Sum and sum-of-squares of delivered counts over a trial range."""
    total = 0
    total_sq = 0
    for t in range(t_first, t_last):
        r = sample_realization(k, p, derive_seed(master_seed, t))
        if deactivate_last and r.direct[-1]:
            r = replace(r, direct=r.direct[:-1] + (False,))
        d = len(schedule_network(r, assignment).delivered)
        total += d
        total_sq += d * d
    return total, total_sq


def _dof_sums_star(args) -> tuple[int, int]:
    return _dof_sums(*args)


def estimate_pudof(
    k: int,
    p: float,
    assignment: MessageAssignment,
    trials: int,
    master_seed: int,
    deactivate_last: bool = True,
    workers: int = 1,
) -> tuple[float, float]:
    """Sample mean and standard error of the delivered fraction.

    Trial t draws its realization from derive_seed(master_seed, t);
    `deactivate_last` silences the last transmitter (dropped from every
    transmit set, direct link forced dead) so the measured value survives
    concatenating copies of the network. Integer accumulation makes the
    result independent of `workers`.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if k != assignment.k:
        raise ValueError(f"assignment has k={assignment.k}, expected {k}")
    if deactivate_last:
        assignment = remove_transmitter(assignment, k)
    blocks = _blocks(trials, workers)
    if workers <= 1 or len(blocks) == 1:
        sums = [
            _dof_sums(k, p, assignment, master_seed, t0, t1, deactivate_last)
            for t0, t1 in blocks
        ]
    else:
        jobs = [
            (k, p, assignment, master_seed, t0, t1, deactivate_last)
            for t0, t1 in blocks
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(_dof_sums_star, jobs))
    total = sum(s for s, _ in sums)
    total_sq = sum(q for _, q in sums)
    mean = total / (trials * k)
    if trials > 1:
        dof_var = (total_sq - total * total / trials) / (trials - 1)
        stderr = math.sqrt(max(0.0, dof_var) / trials) / k
    else:
        stderr = 0.0
    return mean, stderr


def _blocks(trials: int, workers: int) -> list[tuple[int, int]]:
    chunk = max(1, math.ceil(trials / max(1, workers * 4)))
    return [(t0, min(t0 + chunk, trials)) for t0 in range(0, trials, chunk)]


def sweep(
    cfg: SweepConfig,
    progress: Callable[[SweepRow], None] | None = None,
) -> tuple[SweepRow, ...]:
    """Estimate every grid point for every assignment, reproducibly.

    Point seeds derive from (master seed, grid index, assignment index),
    or from (master seed, grid index) alone under shared realizations.
    """
    specs = [(spec, spec.build()) for spec in cfg.assignments]
    rows = []
    for pi, p in enumerate(cfg.p_grid()):
        for ai, (spec, assignment) in enumerate(specs):
            if cfg.share_realizations:
                seed = derive_seed(cfg.master_seed, pi)
            else:
                seed = derive_seed(cfg.master_seed, pi, ai)
            mean, stderr = estimate_pudof(
                spec.k,
                p,
                assignment,
                cfg.trials,
                seed,
                deactivate_last=cfg.deactivate_last,
                workers=cfg.workers,
            )
            row = SweepRow(p, spec.label, spec.k, spec.f, cfg.trials, seed, mean, stderr)
            rows.append(row)
            if progress is not None:
                progress(row)
    return tuple(rows)


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [
                    f"{r.p:.6g}",
                    r.label,
                    r.k,
                    r.f.numerator,
                    r.f.denominator,
                    r.trials,
                    r.seed,
                    f"{r.mean:.6g}",
                    f"{r.stderr:.6g}",
                ]
            )


def read_sweep_csv(path) -> tuple[SweepRow, ...]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(CSV_HEADER):
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
        for lineno, rec in enumerate(reader, start=2):
            if len(rec) != len(CSV_HEADER):
                raise ValueError(
                    f"{path} row {lineno}: expected {len(CSV_HEADER)} fields, got {len(rec)}"
                )
            try:
                rows.append(
                    SweepRow(
                        p=float(rec[0]),
                        label=rec[1],
                        k=int(rec[2]),
                        f=Fraction(int(rec[3]), int(rec[4])),
                        trials=int(rec[5]),
                        seed=int(rec[6]),
                        mean=float(rec[7]),
                        stderr=float(rec[8]),
                    )
                )
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"{path} row {lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return tuple(rows)


@dataclass(frozen=True)
class TableRow:
    p: float
    best: str
    mean: float
    stderr: float
    ties: tuple[str, ...]


def best_assignment_table(rows) -> tuple[TableRow, ...]:
    """Winning assignment per erasure probability.

    Assignments must cover a common p grid. Runners-up whose mean lies
    within two combined standard errors of the winner are reported as
    statistical ties.
    """
    rows = tuple(rows)
    if not rows:
        raise ValueError("no sweep rows given")
    by_label: dict[str, dict[float, SweepRow]] = {}
    for row in rows:
        per_p = by_label.setdefault(row.label, {})
        if row.p in per_p:
            raise ValueError(f"duplicate row for p={row.p:g}, assignment {row.label}")
        per_p[row.p] = row
    grids = {label: frozenset(per_p) for label, per_p in by_label.items()}
    common = next(iter(grids.values()))
    if any(grid != common for grid in grids.values()):
        raise ValueError("assignments cover different p grids")
    table = []
    for p in sorted(common):
        candidates = [by_label[label][p] for label in sorted(by_label)]
        best = max(candidates, key=lambda r: r.mean)
        ties = tuple(
            r.label
            for r in candidates
            if r is not best and best.mean - r.mean <= 2.0 * math.hypot(best.stderr, r.stderr)
        )
        table.append(TableRow(p, best.label, best.mean, best.stderr, ties))
    return tuple(table)
