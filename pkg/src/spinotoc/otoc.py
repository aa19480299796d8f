"""Interferometric OTOC family.

Closed systems: F(t) = Re Tr[A^dag(t) B^dag A(t) B rho] with
A(t) = U_t^dag A U_t, plus the explicit control-qubit protocol that
realizes the same number through interference.

Open systems: F(t) = Re Tr[(xi_b^dag(t) B^dag) A (xi_f(t) (B rho)) A^dag]
with the forward/backward reduced maps of the dilation, plus the modified
five-step control-qubit scheme as a cross-check path.

The corrected variant divides out the purely dissipative part:
F_c(t) = F(t, A, B) / F(t, I, B).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import BACKWARD, FORWARD, ReducedDynamics
from .linalg import PAULI, eig_hermitian, propagator_from_spectrum

DENOMINATOR_FLOOR = 1e-8


@dataclass(frozen=True)
class OtocRequest:
    """One OTOC computation: local operators, where they sit, the initial
    system state and the time grid."""

    op_a: np.ndarray
    op_b: np.ndarray
    site_a: int
    site_b: int
    initial_system_state: np.ndarray
    time_grid: np.ndarray
    corrected: bool = False


@dataclass
class SeriesResult:
    """A labeled time series; ``sites`` is set for (time x site) grids.

    ``max_imag`` records the largest imaginary part discarded when taking
    the real part, as a numerical sanity witness.
    """

    label: str
    times: np.ndarray
    values: np.ndarray
    sites: np.ndarray | None = None
    max_imag: float = 0.0
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sites is None and len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")


def _real_series(label: str, times, raw: list[complex]) -> SeriesResult:
    raw = np.asarray(raw)
    return SeriesResult(
        label=label,
        times=np.asarray(times, dtype=float),
        values=raw.real.astype(float),
        max_imag=float(np.max(np.abs(raw.imag))) if len(raw) else 0.0,
    )


def fotoc_closed(
    h_system: np.ndarray,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    times,
    label: str = "F",
) -> SeriesResult:
    """Re Tr[A^dag(t) B^dag A(t) B rho] under unitary evolution."""
    w, v = eig_hermitian(h_system)
    b_rho = op_b @ rho
    raw = []
    for t in times:
        u = propagator_from_spectrum(w, v, t)
        a_t = u.conj().T @ op_a @ u
        raw.append(np.trace(a_t.conj().T @ op_b.conj().T @ a_t @ b_rho))
    return _real_series(label, times, raw)


def _plus_projector() -> np.ndarray:
    plus = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2)
    return np.outer(plus, plus.conj())


def _ctrl(op0: np.ndarray, op1: np.ndarray) -> np.ndarray:
    """op0 on the |0> control branch, op1 on the |1> branch (control last)."""
    p0 = np.diag([1.0, 0.0]).astype(np.complex128)
    p1 = np.diag([0.0, 1.0]).astype(np.complex128)
    return np.kron(op0, p0) + np.kron(op1, p1)


def fotoc_protocol_closed(
    h_system: np.ndarray,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    times,
    label: str = "F",
) -> SeriesResult:
    """The interferometric five-unitary sequence on system + control qubit;
    agrees with fotoc_closed pointwise."""
    d = h_system.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    w, v = eig_hermitian(h_system)
    u1 = _ctrl(eye, op_b)
    u3 = np.kron(op_a, np.eye(2, dtype=np.complex128))
    u5 = _ctrl(op_b, eye)
    sx_c = np.kron(eye, PAULI["x"])
    rho0 = np.kron(rho, _plus_projector())
    raw = []
    for t in times:
        u_t = propagator_from_spectrum(w, v, t)
        u2 = np.kron(u_t, np.eye(2, dtype=np.complex128))
        u4 = np.kron(u_t.conj().T, np.eye(2, dtype=np.complex128))
        total = u5 @ u4 @ u3 @ u2 @ u1
        rho_f = total @ rho0 @ total.conj().T
        raw.append(np.trace(sx_c @ rho_f))
    return _real_series(label, times, raw)


def fotoc_open_multi(
    dyn: ReducedDynamics,
    ops_a: dict[str, np.ndarray],
    op_b: np.ndarray,
    rho_system: np.ndarray,
    times,
) -> list[SeriesResult]:
    """Open-system F-OTOC for several probe operators A sharing one B and
    one set of propagator spectra: the two channel applications per grid
    point are reused across all A."""
    fwd = dyn.schrodinger_applier(op_b @ rho_system, FORWARD)
    badj = dyn.adjoint_applier(op_b.conj().T, BACKWARD)
    raws = {label: [] for label in ops_a}
    for t in times:
        evolved = fwd(t)
        b_heis = badj(t)
        for label, op_a in ops_a.items():
            raws[label].append(np.trace(b_heis @ op_a @ evolved @ op_a.conj().T))
    return [_real_series(label, times, raws[label]) for label in ops_a]


def fotoc_open(
    dyn: ReducedDynamics,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho_system: np.ndarray,
    times,
    label: str = "F",
) -> SeriesResult:
    """Re Tr[(xi_b^dag B^dag) A (xi_f (B rho)) A^dag] from the dilation."""
    series = fotoc_open_multi(dyn, {label: op_a}, op_b, rho_system, times)
    return series[0]


def fotoc_corrected_multi(
    dyn: ReducedDynamics,
    ops_a: dict[str, np.ndarray],
    op_b: np.ndarray,
    rho_system: np.ndarray,
    times,
) -> list[SeriesResult]:
    """F_c(t) = F(t, A, B) / F(t, I, B); grid points where the denominator
    underflows are emitted as nan rather than raised."""
    eye = np.eye(op_b.shape[0], dtype=np.complex128)
    denom = fotoc_open(dyn, eye, op_b, rho_system, times, label="denom")
    out = []
    for series in fotoc_open_multi(dyn, ops_a, op_b, rho_system, times):
        values = np.where(
            np.abs(denom.values) < DENOMINATOR_FLOOR,
            np.nan,
            series.values / np.where(np.abs(denom.values) < DENOMINATOR_FLOOR, 1.0, denom.values),
        )
        out.append(
            SeriesResult(
                label=series.label,
                times=series.times,
                values=values,
                max_imag=series.max_imag,
            )
        )
    return out


def fotoc_corrected(
    dyn: ReducedDynamics,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho_system: np.ndarray,
    times,
    label: str = "Fc",
) -> SeriesResult:
    return fotoc_corrected_multi(dyn, {label: op_a}, op_b, rho_system, times)[0]


def _apply_map_first_factor(superop: np.ndarray, rho: np.ndarray, d_first: int) -> np.ndarray:
    """Apply a superoperator to the first tensor factor of a two-factor
    density matrix, leaving the trailing factor untouched."""
    d_rest = rho.shape[0] // d_first
    r4 = rho.reshape(d_first, d_rest, d_first, d_rest)
    y = r4.transpose(0, 2, 1, 3).reshape(d_first * d_first, d_rest * d_rest)
    z = superop @ y
    return z.reshape(d_first, d_first, d_rest, d_rest).transpose(0, 2, 1, 3).reshape(
        rho.shape
    )


def fotoc_protocol_open(
    dyn: ReducedDynamics,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho_system: np.ndarray,
    times,
    label: str = "F",
) -> SeriesResult:
    """The modified five-step control-qubit scheme for open dynamics: the
    forward and backward reduced maps act on the system register while the
    control qubit rides along untouched.  Cross-check path for fotoc_open."""
    d = op_a.shape[0]
    eye = np.eye(d, dtype=np.complex128)
    w1 = _ctrl(eye, op_b)
    w3 = np.kron(op_a, np.eye(2, dtype=np.complex128))
    w5 = _ctrl(op_b, eye)
    sx_c = np.kron(eye, PAULI["x"])
    rho0 = np.kron(rho_system, _plus_projector())
    raw = []
    for t in times:
        m_f = dyn.superoperator(t, "schrodinger", FORWARD).matrix
        m_b = dyn.superoperator(t, "schrodinger", BACKWARD).matrix
        rho_c = w1 @ rho0 @ w1.conj().T
        rho_c = _apply_map_first_factor(m_f, rho_c, d)
        rho_c = w3 @ rho_c @ w3.conj().T
        rho_c = _apply_map_first_factor(m_b, rho_c, d)
        rho_c = w5 @ rho_c @ w5.conj().T
        raw.append(np.trace(sx_c @ rho_c))
    return _real_series(label, times, raw)


def commutator_square_closed(
    h_system: np.ndarray,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    times,
    label: str = "C",
) -> SeriesResult:
    """C(t) = (1/2) Tr([A_t, B]^dag [A_t, B] rho); for unitary A, B this
    equals 1 - Re F(t)."""
    w, v = eig_hermitian(h_system)
    raw = []
    for t in times:
        u = propagator_from_spectrum(w, v, t)
        a_t = u.conj().T @ op_a @ u
        comm = a_t @ op_b - op_b @ a_t
        raw.append(0.5 * np.trace(comm.conj().T @ comm @ rho))
    return _real_series(label, times, raw)


def commutator_square_open(
    dyn: ReducedDynamics,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    times,
    label: str = "C",
) -> SeriesResult:
    """Open variant with A evolved by the adjoint forward map."""
    heis = dyn.adjoint_applier(op_a, FORWARD)
    raw = []
    for t in times:
        a_t = heis(t)
        comm = a_t @ op_b - op_b @ a_t
        raw.append(0.5 * np.trace(comm.conj().T @ comm @ rho))
    return _real_series(label, times, raw)


def commutator_square(
    evolution,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    times,
    label: str = "C",
) -> SeriesResult:
    """Dispatch on the evolution carrier: a Hamiltonian matrix gives the
    closed variant, anything exposing adjoint_applier the open one."""
    if hasattr(evolution, "adjoint_applier"):
        return commutator_square_open(evolution, op_a, op_b, rho, times, label)
    return commutator_square_closed(evolution, op_a, op_b, rho, times, label)


def shortest_period(series: SeriesResult, significance: float = 0.05) -> float:
    """Shortest oscillation period with spectral amplitude at least
    ``significance`` of the dominant one, from an FFT of the series."""
    vals = series.values - series.values.mean()
    dt = series.times[1] - series.times[0]
    freqs = np.fft.rfftfreq(len(series.times), dt)
    amp = np.abs(np.fft.rfft(vals))
    if amp.max() == 0:
        return float("inf")
    keep = freqs[amp >= significance * amp.max()]
    keep = keep[keep > 0]
    return float(1.0 / keep.max()) if len(keep) else float("inf")


def recurrence_report(
    h_system: np.ndarray,
    op_a: np.ndarray,
    op_b: np.ndarray,
    rho: np.ndarray,
    probe_t_max: float = 40.0,
    probe_steps: int = 2000,
    depart_level: float = 0.99,
) -> dict:
    """Periodicity diagnostics for a closed F-OTOC.

    Probes a long window to detect the shortest significant oscillation
    period, then re-evaluates on a window 10x that period and reports the
    deepest dip and the highest value reached after F first departs below
    ``depart_level``.
    """
    probe = fotoc_closed(
        h_system, op_a, op_b, rho, np.linspace(0.0, probe_t_max, probe_steps)
    )
    period = shortest_period(probe)
    window = 10.0 * period
    times = np.linspace(0.0, window, probe_steps)
    series = fotoc_closed(h_system, op_a, op_b, rho, times)
    departed = np.nonzero(series.values < depart_level)[0]
    if len(departed):
        recurrence_max = float(series.values[departed[0] :].max())
    else:
        recurrence_max = float("nan")
    return {
        "shortest_period": period,
        "window": window,
        "min_f": float(series.values.min()),
        "recurrence_max": recurrence_max,
        "series": series,
    }


def onset_time(series: SeriesResult, threshold: float = 0.98) -> float:
    """First grid time where the series drops below ``threshold``; nan if
    it never does.  Used for light-cone front extraction."""
    below = np.nonzero(series.values < threshold)[0]
    return float(series.times[below[0]]) if len(below) else float("nan")
