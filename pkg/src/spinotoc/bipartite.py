"""Bipartite OTOC: swap operators on a doubled Hilbert space, closed- and
open-system closed forms, and a Monte Carlo Haar-average oracle.

Factor order on the doubled space is (A, B, A', B') throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import QuantumChannelRep, tensor_square_apply
from .linalg import haar_unitary

MC_BLOCK = 64  # fixed-width accumulation blocks keep reductions order-independent


@dataclass(frozen=True)
class Bipartition:
    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 2 or self.d_b < 2:
            raise ValueError("both partitions need dimension >= 2")

    @property
    def d(self) -> int:
        return self.d_a * self.d_b


@dataclass(frozen=True)
class SwapOps:
    s_full: np.ndarray
    s_aa: np.ndarray
    s_bb: np.ndarray


def _permutation_swap(p: Bipartition, swap_a: bool, swap_b: bool) -> np.ndarray:
    """Operator |a b a' b'> -> permuted bra indices, as a 0/1 matrix."""
    da, db = p.d_a, p.d_b
    d2 = (da * db) ** 2
    out = np.zeros((d2, d2), dtype=np.complex128)
    idx = np.arange(d2)
    a, rem = np.divmod(idx, db * da * db)
    b, rem = np.divmod(rem, da * db)
    ap, bp = np.divmod(rem, db)
    ra = np.where(swap_a, ap, a)
    rap = np.where(swap_a, a, ap)
    rb = np.where(swap_b, bp, b)
    rbp = np.where(swap_b, b, bp)
    cols = ((ra * db + rb) * da + rap) * db + rbp
    out[idx, cols] = 1.0
    return out


def build_swaps(p: Bipartition) -> SwapOps:
    """S, S_AA', S_BB' on H_A (x) H_B (x) H_A' (x) H_B'."""
    return SwapOps(
        s_full=_permutation_swap(p, True, True),
        s_aa=_permutation_swap(p, True, False),
        s_bb=_permutation_swap(p, False, True),
    )


def bipartite_otoc_closed(u_t: np.ndarray, p: Bipartition) -> float:
    """G = 1 - (1/d^2) Tr(S_AA' U^(x)2 S_AA' U^dag(x)2), clamped to [0, 1]."""
    d = p.d
    if u_t.shape != (d, d):
        raise ValueError("unitary dimension does not match bipartition")
    if np.max(np.abs(u_t @ u_t.conj().T - np.eye(d))) > 1e-8:
        raise ValueError("input is not unitary")
    s_aa = build_swaps(p).s_aa
    u2 = np.kron(u_t, u_t)
    val = 1.0 - np.trace(s_aa @ u2 @ s_aa @ u2.conj().T).real / d**2
    return float(np.clip(val, 0.0, 1.0))


def bipartite_otoc_open(rep: QuantumChannelRep, p: Bipartition) -> float:
    """G = (1/d^2) Tr{(S d_B - S_AA') (map (x) map)(S_AA')} for an adjoint
    (unital) channel representation."""
    d = p.d
    if rep.dim != d:
        raise ValueError("channel dimension does not match bipartition")
    swaps = build_swaps(p)
    evolved = tensor_square_apply(rep, swaps.s_aa)
    val = np.trace((swaps.s_full * p.d_b - swaps.s_aa) @ evolved).real / d**2
    return float(val)


def _embed_a(op: np.ndarray, p: Bipartition) -> np.ndarray:
    return np.kron(op, np.eye(p.d_b, dtype=np.complex128))


def _embed_b(op: np.ndarray, p: Bipartition) -> np.ndarray:
    return np.kron(np.eye(p.d_a, dtype=np.complex128), op)


def bipartite_otoc_haar_mc(
    adjoint_applier,
    p: Bipartition,
    samples: int,
    rng: np.random.Generator | int,
    threads: int = 1,
) -> tuple[float, float]:
    """Monte Carlo estimate of (1/2d) E_{A,B} ||[map(A (x) I), I (x) B]||_2^2
    over independent Haar unitaries A on H_A, B on H_B.

    Returns (mean, standard error).  Per-sample RNG substreams are spawned
    deterministically from the seed and partial sums are accumulated in
    fixed-width blocks, so the result is identical for any thread count.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    if isinstance(rng, np.random.SeedSequence):
        seed_seq = rng
    elif isinstance(rng, (int, np.integer)):
        seed_seq = np.random.SeedSequence(int(rng))
    else:
        seed_seq = np.random.SeedSequence(int(rng.integers(2**63)))
    child_seeds = seed_seq.spawn(samples)

    def one(seed) -> float:
        sub = np.random.default_rng(seed)
        op_a = _embed_a(haar_unitary(p.d_a, sub), p)
        op_b = _embed_b(haar_unitary(p.d_b, sub), p)
        evolved = adjoint_applier(op_a)
        comm = evolved @ op_b - op_b @ evolved
        return float(np.linalg.norm(comm) ** 2 / (2 * p.d))

    blocks = [child_seeds[i : i + MC_BLOCK] for i in range(0, samples, MC_BLOCK)]

    def block_sums(block) -> tuple[float, float]:
        s = s2 = 0.0
        for seed in block:
            v = one(seed)
            s += v
            s2 += v * v
        return s, s2

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(block_sums, blocks))
    else:
        results = [block_sums(b) for b in blocks]

    total = sum(r[0] for r in results)
    total_sq = sum(r[1] for r in results)
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    stderr = float(np.sqrt(var / samples))
    return float(mean), stderr


def haar_identity_check(dim: int, samples: int, rng: np.random.Generator) -> float:
    """Max entrywise error of the sample mean of U (x) U^dag against S/d,
    S the swap on the doubled space.  Expected O(1/sqrt(samples))."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    acc = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for _ in range(samples):
        u = haar_unitary(dim, rng)
        acc += np.kron(u, u.conj().T)
    acc /= samples
    swap = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            swap[i * dim + j, j * dim + i] = 1.0
    return float(np.max(np.abs(acc - swap / dim)))
