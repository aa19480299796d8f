"""Dense operator-algebra kernel: Pauli embeddings, tensor products,
partial traces, Hermitian propagators, Gibbs states, vectorization and
Haar-random unitaries.

All matrices are numpy complex128 arrays. Units: hbar = k_B = 1.
Vectorization is row-major, vec(|i><j|) -> e_{i*d+j}; the whole package
relies on this single convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "i": np.eye(2, dtype=np.complex128),
}


@dataclass(frozen=True)
class TensorLayout:
    """Fixed tensor-factor order: system sites first (ascending), then bath.

    ``dims`` are the local dimensions (all 2 for spins); ``n_system`` marks
    how many leading factors belong to the system.
    """

    dims: tuple[int, ...]
    n_system: int = field(default=0)

    def __post_init__(self):
        if any(d < 1 for d in self.dims):
            raise ValueError("local dimensions must be >= 1")
        if not 0 <= self.n_system <= len(self.dims):
            raise ValueError("n_system out of range")

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @property
    def n_bath(self) -> int:
        return len(self.dims) - self.n_system

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    @property
    def system_sites(self) -> tuple[int, ...]:
        return tuple(range(self.n_system))

    @property
    def bath_sites(self) -> tuple[int, ...]:
        return tuple(range(self.n_system, len(self.dims)))

    @staticmethod
    def spins(n_system: int, n_bath: int = 0) -> "TensorLayout":
        return TensorLayout(dims=(2,) * (n_system + n_bath), n_system=n_system)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(ops: list[np.ndarray]) -> np.ndarray:
    out = np.asarray(ops[0], dtype=np.complex128)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3e})")


def pauli_at(layout: TensorLayout, site: int, axis: str) -> np.ndarray:
    """Embed a single-site Pauli at ``site``, identity elsewhere."""
    if not 0 <= site < layout.n_sites:
        raise IndexError(f"site {site} out of range for {layout.n_sites} sites")
    ops = [np.eye(d, dtype=np.complex128) for d in layout.dims]
    ops[site] = PAULI[axis]
    return kron_all(ops)


def collective_j(layout: TensorLayout, sites, axis: str) -> np.ndarray:
    """Collective angular momentum: half the sum of Paulis over ``sites``."""
    sites = tuple(sites)
    if not sites:
        raise ValueError("site set must be nonempty")
    out = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for s in sites:
        out += pauli_at(layout, s, axis)
    return 0.5 * out


def eig_hermitian(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, ascending eigenvalues.

    Returns (eigenvalues, V) with columns of V orthonormal and
    h = V diag(w) V^dag.
    """
    require_hermitian(h)
    w, v = np.linalg.eigh(h)
    return w, v


def propagator_from_spectrum(w: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def propagator(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) via eigendecomposition; exact for Hermitian h."""
    w, v = eig_hermitian(h)
    return propagator_from_spectrum(w, v, t)


def thermal_state(h: np.ndarray, temperature: float) -> np.ndarray:
    """Gibbs state exp(-h/T)/Z, computed with a spectral shift so large
    negative energies never overflow."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    w, v = eig_hermitian(h)
    weights = np.exp(-(w - w.min()) / temperature)
    weights /= weights.sum()
    return (v * weights) @ v.conj().T


def partial_trace(m: np.ndarray, layout: TensorLayout, keep) -> np.ndarray:
    """Trace out every factor not in ``keep``; kept factors stay in layout order."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if any(k < 0 or k >= layout.n_sites for k in keep):
        raise IndexError("keep index out of range")
    dims = layout.dims
    if m.shape != (layout.dim, layout.dim):
        raise ValueError("matrix does not match layout dimension")
    n = layout.n_sites
    tensor = m.reshape(dims + dims)
    traced = [s for s in range(n) if s not in keep]
    for offset, s in enumerate(traced):
        # each trace removes one row and one column axis
        tensor = np.trace(tensor, axis1=s - offset, axis2=s - offset + n - offset)
    d_keep = int(np.prod([dims[k] for k in keep], dtype=np.int64))
    return tensor.reshape(d_keep, d_keep)


def vectorize(m: np.ndarray) -> np.ndarray:
    """Row-major vectorization: |i><j| -> index i*d + j."""
    return np.asarray(m, dtype=np.complex128).reshape(-1)


def devectorize(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.size != rows * cols:
        raise ValueError("vector length does not match target shape")
    return v.reshape(rows, cols)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix with the
    diagonal phase fix that makes the distribution exact."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
