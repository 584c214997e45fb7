"""Simulated annealing driver: schedules, sample sets, summary statistics.

Each readout is an independent Metropolis chain swept through an inverse
temperature ladder. Determinism contract: for a fixed (instance, schedule,
seed, random_order), the returned sample set is identical no matter how many
threads execute the kernel, and the first R readouts of a longer run equal
the R-readout run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import qubo
from ._sa import run_readouts
from .qubo import QuboInstance

DEFAULT_BETA_START = 0.1
DEFAULT_BETA_END = 10.0
# 1000 sweeps leaves single-puzzle solves too flaky (roughly 1 readout in 700
# reaches the ground state on a 24-clue instance); 2000 roughly doubles the
# per-readout hit rate and makes 1000-readout solves dependable.
DEFAULT_SWEEPS = 2000

INTERPOLATIONS = ("geometric", "linear")


@dataclass(frozen=True)
class AnnealSchedule:
    """Inverse-temperature ladder, one value per sweep.

    The geometric ramp spends many sweeps at high temperature where the
    chain mixes and compresses the cold tail; it is the default because
    constraint problems mostly need the early exploration.
    """

    beta_start: float = DEFAULT_BETA_START
    beta_end: float = DEFAULT_BETA_END
    sweeps: int = DEFAULT_SWEEPS
    interpolation: str = "geometric"

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be at least 1, got {self.sweeps}")
        if self.interpolation not in INTERPOLATIONS:
            raise ValueError(
                f"interpolation must be one of {INTERPOLATIONS}, got {self.interpolation!r}"
            )
        if not (np.isfinite(self.beta_start) and np.isfinite(self.beta_end)):
            raise ValueError("beta endpoints must be finite")
        if self.beta_start <= 0 or self.beta_end <= 0:
            raise ValueError("beta endpoints must be positive")
        if self.beta_end < self.beta_start:
            raise ValueError(
                f"beta_end ({self.beta_end}) must not be below beta_start ({self.beta_start})"
            )

    def beta_values(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.beta_start])
        if self.interpolation == "geometric":
            return np.geomspace(self.beta_start, self.beta_end, self.sweeps)
        return np.linspace(self.beta_start, self.beta_end, self.sweeps)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Readout bits with their exactly recomputable energies.

    ``energies[r]`` is produced by the same accumulation as
    ``qubo.energy(instance, bits[r])``, so the equality is exact, not
    approximate.
    """

    bits: np.ndarray
    energies: np.ndarray
    instance_n: int
    seed: int

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        energies = np.asarray(self.energies, dtype=np.float64)
        if bits.ndim != 2 or bits.shape[1] != self.instance_n:
            raise ValueError(f"bits must have shape (*, {self.instance_n}), got {bits.shape}")
        if energies.shape != (bits.shape[0],):
            raise ValueError(
                f"energies must have shape ({bits.shape[0]},), got {energies.shape}"
            )
        bits.setflags(write=False)
        energies.setflags(write=False)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "energies", energies)

    def __len__(self):
        return self.bits.shape[0]

    def __iter__(self):
        for r in range(len(self)):
            yield self.bits[r], float(self.energies[r])


def anneal(
    q: QuboInstance,
    readouts: int,
    schedule: AnnealSchedule | None = None,
    seed: int = 0,
    random_order: bool = False,
) -> SampleSet:
    """Run ``readouts`` independent chains and collect their final states.

    ``random_order`` shuffles the within-sweep visit order per sweep;
    the default visits variables sequentially, which is faster and performs
    the same on the placement problems this package targets.
    """
    if readouts < 1:
        raise ValueError(f"readouts must be at least 1, got {readouts}")
    if schedule is None:
        schedule = AnnealSchedule()
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    if q.n == 0:
        bits = np.zeros((readouts, 0), dtype=np.uint8)
        energies = np.full(readouts, q.offset)
        return SampleSet(bits, energies, 0, seed)
    diag, indptr, nbr, coup = q._neighbors
    bits = run_readouts(
        diag,
        indptr,
        nbr,
        coup,
        schedule.beta_values(),
        readouts,
        np.uint64(seed),
        random_order,
    )
    return SampleSet(bits, qubo.energies(q, bits), q.n, seed)


@dataclass(frozen=True)
class SummaryStats:
    count: int
    minimum: float
    maximum: float
    median: float
    mean: float
    stddev: float
    # Sample stddev needs two points; flagged rather than NaN for JSON friendliness.
    stddev_defined: bool
    count_at_min: int
    target: float | None = None
    fraction_at_target: float | None = None

    def as_dict(self) -> dict:
        out = {
            "count": self.count,
            "min": self.minimum,
            "max": self.maximum,
            "median": self.median,
            "mean": self.mean,
            "stddev": self.stddev,
            "stddev_defined": self.stddev_defined,
            "count_at_min": self.count_at_min,
        }
        if self.target is not None:
            out["target"] = self.target
            out["fraction_at_target"] = self.fraction_at_target
        return out


def summarize(samples: SampleSet, target: float | None = None) -> SummaryStats:
    e = samples.energies
    minimum = float(e.min())
    if e.size > 1:
        stddev = float(e.std(ddof=1))
        defined = True
    else:
        stddev = 0.0
        defined = False
    fraction = float((e <= target).mean()) if target is not None else None
    return SummaryStats(
        count=int(e.size),
        minimum=minimum,
        maximum=float(e.max()),
        median=float(np.median(e)),
        mean=float(e.mean()),
        stddev=stddev,
        stddev_defined=defined,
        count_at_min=int((e == minimum).sum()),
        target=target,
        fraction_at_target=fraction,
    )


def best(samples: SampleSet) -> tuple[np.ndarray, float]:
    """Lowest-energy readout; ties break to the earliest readout index."""
    r = int(np.argmin(samples.energies))
    return samples.bits[r].copy(), float(samples.energies[r])


def write_samples_csv(samples: SampleSet, dest) -> None:
    """Write readout_index,energy,bits rows; bits are hex of the little-endian
    packed vector (bit i lives in byte i // 8 at position i % 8)."""
    path = Path(dest)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["readout_index", "energy", "bits"])
        for r in range(len(samples)):
            packed = np.packbits(samples.bits[r], bitorder="little")
            writer.writerow([r, repr(float(samples.energies[r])), packed.tobytes().hex()])


def read_samples_csv(source, instance_n: int, seed: int = 0) -> SampleSet:
    """Inverse of :func:`write_samples_csv` for a known variable count."""
    path = Path(source)
    rows = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        for record in reader:
            packed = np.frombuffer(bytes.fromhex(record["bits"]), dtype=np.uint8)
            bits = np.unpackbits(packed, bitorder="little")[:instance_n]
            rows.append((int(record["readout_index"]), float(record["energy"]), bits))
    rows.sort()
    bits = np.array([b for _, _, b in rows], dtype=np.uint8).reshape(len(rows), instance_n)
    energies = np.array([e for _, e, _ in rows])
    return SampleSet(bits, energies, instance_n, seed)
