"""Compiled single-bit-flip Metropolis kernel.

Readouts are independent chains distributed over threads with prange. Each
chain draws randomness from its own counter-based splitmix64 stream keyed by
(seed, readout index), so results are identical regardless of thread count
and readout r of an R-readout run matches readout r of any longer run with
the same seed.

Energy changes are tracked through local fields: h[i] = W_ii + sum_j c_ij x_j
over the symmetrized couplings c, so flipping bit i costs (1 - 2 x_i) h[i]
and an accepted flip touches only the O(deg) neighboring fields. The kernel
returns raw bits; energies are recomputed outside in one canonical pass.
"""

import math

import numba
import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2^-53


@numba.njit(numba.uint64(numba.uint64), cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True, inline="always")
def _next(state):
    state = state + _GAMMA
    return state, _mix(state)


@numba.njit(numba.uint64(numba.uint64, numba.uint64), cache=True)
def _chain_seed(seed, readout):
    # Decorrelate per-readout streams from sequential readout indices.
    return _mix(seed ^ _mix(readout + _GAMMA))


@numba.njit(cache=True, parallel=True)
def run_readouts(diag, indptr, nbr, coup, betas, readouts, seed, random_order):
    n = diag.shape[0]
    sweeps = betas.shape[0]
    bits = np.zeros((readouts, n), dtype=np.uint8)
    for r in numba.prange(readouts):
        state = _chain_seed(seed, np.uint64(r))
        x = np.empty(n, dtype=np.uint8)
        for i in range(n):
            state, z = _next(state)
            x[i] = np.uint8(z >> np.uint64(63))
        field = diag.copy()
        for i in range(n):
            if x[i] == 1:
                for p in range(indptr[i], indptr[i + 1]):
                    field[nbr[p]] += coup[p]
        order = np.arange(n)
        for s in range(sweeps):
            beta = betas[s]
            if random_order:
                for t in range(n - 1, 0, -1):
                    state, z = _next(state)
                    u = int(z % np.uint64(t + 1))
                    order[t], order[u] = order[u], order[t]
            for t in range(n):
                i = order[t]
                delta = field[i] if x[i] == 0 else -field[i]
                accept = delta <= 0.0
                if not accept:
                    state, z = _next(state)
                    accept = (z >> np.uint64(11)) * _U53 < math.exp(-beta * delta)
                if accept:
                    if x[i] == 0:
                        x[i] = 1
                        for p in range(indptr[i], indptr[i + 1]):
                            field[nbr[p]] += coup[p]
                    else:
                        x[i] = 0
                        for p in range(indptr[i], indptr[i + 1]):
                            field[nbr[p]] -= coup[p]
        bits[r] = x
    return bits
