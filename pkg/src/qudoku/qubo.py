"""Upper-triangular QUBO instances: evaluation, clamping, exact minimization.

An instance stores an n x n upper-triangular weight matrix W plus a constant
offset c; the objective over binary vectors x is

    f(x) = sum_{i <= j} W[i, j] * x[i] * x[j] + c.

Variables can be eliminated by fixing ("clamping") a subset of them to 0 or 1.
Fixed-to-zero variables simply drop out; fixed-to-one variables fold their
couplings into the diagonal of the survivors and their internal terms into the
offset, so energies of the reduced instance match the original exactly on
re-expanded vectors (bit-exact for integer weights).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

# Exhaustive search is O(2^n); refuse anything bigger than this.
MAX_BRUTE_FORCE_VARS = 25


def as_bit_vector(x, expected_length: int | None = None) -> np.ndarray:
    """Coerce to a uint8 0/1 vector, checking entries and (optionally) length."""
    bits = np.asarray(x)
    if bits.ndim != 1:
        raise ValueError(f"bit vector must be one-dimensional, got shape {bits.shape}")
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("bit vector entries must all be 0 or 1")
    if expected_length is not None and bits.shape[0] != expected_length:
        raise ValueError(
            f"bit vector has length {bits.shape[0]}, expected {expected_length}"
        )
    return bits.astype(np.uint8)


@dataclass(frozen=True, eq=False)
class QuboInstance:
    """Immutable QUBO instance with upper-triangular weights and an offset.

    Entries below the diagonal must be exactly zero; inputs that carry weight
    there are rejected rather than symmetrized silently (use ``fold_to_upper``
    for an explicit conversion). An empty instance (n = 0) is permitted and
    represents a fully clamped problem whose energy is just the offset.
    """

    weights: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be a square matrix, got shape {w.shape}")
        if not np.isfinite(w).all():
            raise ValueError("weights must be finite")
        if np.tril(w, -1).any():
            raise ValueError(
                "weights carry entries below the diagonal; "
                "convert explicitly with fold_to_upper()"
            )
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QuboInstance):
            return NotImplemented
        return (
            self.offset == other.offset
            and self.weights.shape == other.weights.shape
            and np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        nnz = int(np.count_nonzero(self.weights))
        return f"QuboInstance(n={self.n}, nonzeros={nnz}, offset={self.offset})"

    @cached_property
    def _terms(self):
        """Nonzero entries as (rows, cols, values) in row-major order."""
        rows, cols = np.nonzero(self.weights)
        return rows, cols, self.weights[rows, cols]

    @cached_property
    def _neighbors(self):
        """Symmetrized coupling adjacency in CSR form: (diag, indptr, index, value).

        For i != j the coupling between i and j is the single stored entry
        W[min(i,j), max(i,j)]; it appears once in each direction here.
        """
        upper_i, upper_j = np.nonzero(np.triu(self.weights, 1))
        w = self.weights[upper_i, upper_j]
        src = np.concatenate([upper_i, upper_j])
        dst = np.concatenate([upper_j, upper_i])
        val = np.concatenate([w, w])
        order = np.argsort(src, kind="stable")
        src, dst, val = src[order], dst[order], val[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(np.bincount(src, minlength=self.n))
        diag = np.ascontiguousarray(self.weights.diagonal(), dtype=np.float64)
        for arr in (diag, indptr, dst, val):
            arr.setflags(write=False)
        return diag, indptr, dst.astype(np.int64), val.astype(np.float64)


def _term_energy(q: QuboInstance, bits: np.ndarray) -> float:
    rows, cols, vals = q._terms
    active = (bits[rows] & bits[cols]).astype(np.float64)
    return float(np.dot(active, vals)) + q.offset


def energy(q: QuboInstance, x) -> float:
    """Objective value sum_{i<=j} W_ij x_i x_j + offset.

    The accumulation order is fixed, so repeated evaluation of the same
    vector is bit-identical; with integer weights the result is exact.
    """
    return _term_energy(q, as_bit_vector(x, q.n))


def energies(q: QuboInstance, bit_rows: np.ndarray) -> np.ndarray:
    """Row-wise energies of a (num_samples, n) bit matrix.

    Each row goes through the same arithmetic as :func:`energy`, so the
    results agree exactly with per-row evaluation.
    """
    rows = np.asarray(bit_rows, dtype=np.uint8)
    if rows.ndim != 2 or rows.shape[1] != q.n:
        raise ValueError(f"expected shape (*, {q.n}), got {rows.shape}")
    return np.array([_term_energy(q, rows[r]) for r in range(rows.shape[0])])


def flip_delta(q: QuboInstance, x, i: int) -> float:
    """Energy change from flipping bit i: (1 - 2 x_i) * (W_ii + sum_j c_ij x_j)."""
    bits = as_bit_vector(x, q.n)
    if not 0 <= i < q.n:
        raise ValueError(f"variable index {i} out of range [0, {q.n})")
    diag, indptr, nbr, coup = q._neighbors
    lo, hi = indptr[i], indptr[i + 1]
    field = diag[i] + float(np.dot(bits[nbr[lo:hi]].astype(np.float64), coup[lo:hi]))
    return field if bits[i] == 0 else -field


@dataclass(frozen=True)
class PartialAssignment:
    """Fixes the variables in ``zeros`` to 0 and those in ``ones`` to 1.

    Surviving variables keep their relative order: ``survivors[r]`` is the
    original index of reduced variable r, which makes :func:`clamp` and
    :func:`expand` mutually consistent.
    """

    n: int
    zeros: frozenset = frozenset()
    ones: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")
        zeros = frozenset(int(i) for i in self.zeros)
        ones = frozenset(int(i) for i in self.ones)
        for name, idx in (("zeros", zeros), ("ones", ones)):
            bad = [i for i in idx if not 0 <= i < self.n]
            if bad:
                raise ValueError(f"{name} indices out of range [0, {self.n}): {sorted(bad)}")
        overlap = zeros & ones
        if overlap:
            raise ValueError(f"indices fixed to both 0 and 1: {sorted(overlap)}")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "ones", ones)

    @property
    def m(self) -> int:
        """Number of surviving (free) variables."""
        return self.n - len(self.zeros) - len(self.ones)

    @cached_property
    def survivors(self) -> np.ndarray:
        fixed = self.zeros | self.ones
        surv = np.array([i for i in range(self.n) if i not in fixed], dtype=np.int64)
        surv.setflags(write=False)
        return surv

    @cached_property
    def _ones_array(self) -> np.ndarray:
        arr = np.array(sorted(self.ones), dtype=np.int64)
        arr.setflags(write=False)
        return arr


def expand(pa: PartialAssignment, x_reduced) -> np.ndarray:
    """Re-insert the fixed bits around a reduced vector of length ``pa.m``."""
    bits = as_bit_vector(x_reduced, pa.m)
    full = np.zeros(pa.n, dtype=np.uint8)
    full[pa._ones_array] = 1
    full[pa.survivors] = bits
    return full


def clamp(q: QuboInstance, pa: PartialAssignment) -> QuboInstance:
    """Eliminate the fixed variables of ``pa`` from ``q``.

    Couplings between a surviving variable and a one-fixed variable become
    diagonal terms; terms internal to the one-fixed set accumulate into the
    offset; anything touching a zero-fixed variable vanishes. For every
    reduced vector x', energy(clamp(q, pa), x') equals
    energy(q, expand(pa, x')), exactly so for integer weights.
    """
    if pa.n != q.n:
        raise ValueError(f"assignment is over {pa.n} variables, instance has {q.n}")
    surv = pa.survivors
    ones = pa._ones_array
    w = q.weights
    core = w[np.ix_(surv, surv)].copy()
    extra = 0.0
    if ones.size:
        diag_add = w[np.ix_(ones, surv)].sum(axis=0) + w[np.ix_(surv, ones)].sum(axis=1)
        core[np.diag_indices(surv.size)] += diag_add
        extra = float(w[np.ix_(ones, ones)].sum())
    return QuboInstance(core, q.offset + extra)


def brute_force_min(q: QuboInstance) -> tuple[np.ndarray, float]:
    """Global minimizer and its energy by exhaustive enumeration.

    Ties resolve to the lexicographically smallest bit vector (0 before 1,
    index 0 most significant). Refuses instances with more than
    ``MAX_BRUTE_FORCE_VARS`` variables.
    """
    n = q.n
    if n > MAX_BRUTE_FORCE_VARS:
        raise ValueError(
            f"exhaustive enumeration refused for n={n}; "
            f"the limit is {MAX_BRUTE_FORCE_VARS} variables"
        )
    if n == 0:
        return np.zeros(0, dtype=np.uint8), q.offset
    w = np.ascontiguousarray(q.weights)
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    total = 1 << n
    step = 1 << min(n, 17)
    best_value = np.inf
    best_code = 0
    for start in range(0, total, step):
        codes = np.arange(start, min(start + step, total), dtype=np.uint64)
        block = ((codes[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.float64)
        values = ((block @ w) * block).sum(axis=1)
        k = int(np.argmin(values))
        if values[k] < best_value:
            best_value = values[k]
            best_code = start + k
    bits = ((np.uint64(best_code) >> shifts) & np.uint64(1)).astype(np.uint8)
    return bits, energy(q, bits)


def fold_to_upper(matrix, offset: float = 0.0) -> QuboInstance:
    """Fold an arbitrary square matrix into upper-triangular form.

    Off-diagonal mass moves to the upper triangle (U_ij = M_ij + M_ji for
    i < j), which leaves the energy of every binary vector unchanged.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    return QuboInstance(np.triu(m) + np.triu(m.T, 1), offset)


def symmetric_matrix(q: QuboInstance) -> np.ndarray:
    """Dense symmetric view 0.5 * (W + W^T), useful for visualization only."""
    return (q.weights + q.weights.T) / 2.0


# ---------------------------------------------------------------------------
# Plain-text serialization
#
# Format: one header line "n <count> offset <value>", then one line "i j w"
# per nonzero entry (0-based, i <= j). Lines starting with '#' and blank
# lines are ignored. Values are written with repr(), so reading the file
# back reproduces every weight bit-exactly.
# ---------------------------------------------------------------------------


def instance_to_text(q: QuboInstance) -> str:
    rows, cols, vals = q._terms
    lines = [f"n {q.n} offset {float(q.offset)!r}"]
    for i, j, w in zip(rows, cols, vals):
        lines.append(f"{i} {j} {float(w)!r}")
    return "\n".join(lines) + "\n"


def instance_from_text(text: str) -> QuboInstance:
    header = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            tokens = line.split()
            if len(tokens) != 4 or tokens[0] != "n" or tokens[2] != "offset":
                raise ValueError(
                    f"line {lineno}: expected header 'n <count> offset <value>', got {line!r}"
                )
            header = (int(tokens[1]), float(tokens[3]))
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise ValueError(f"line {lineno}: expected 'i j w', got {line!r}")
        entries.append((lineno, int(tokens[0]), int(tokens[1]), float(tokens[2])))
    if header is None:
        raise ValueError("missing header line 'n <count> offset <value>'")
    n, offset = header
    weights = np.zeros((n, n), dtype=np.float64)
    seen = set()
    for lineno, i, j, w in entries:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"line {lineno}: index ({i}, {j}) out of range for n={n}")
        if i > j:
            raise ValueError(
                f"line {lineno}: entry ({i}, {j}) lies below the diagonal; "
                "store couplings as i <= j"
            )
        if (i, j) in seen:
            raise ValueError(f"line {lineno}: duplicate entry for ({i}, {j})")
        seen.add((i, j))
        weights[i, j] = w
    return QuboInstance(weights, offset)


def save_instance(q: QuboInstance, path) -> None:
    Path(path).write_text(instance_to_text(q))


def load_instance(path) -> QuboInstance:
    return instance_from_text(Path(path).read_text())
