"""Scenario runner: turns a validated config into model builders, OTOC
computations and result series.

Dense full-tensor dynamics is the default; the collective-sector fast path
is opt-in and only meaningful for LMG-bath scenarios.  Dense runs refuse
Hilbert dimensions above DIMENSION_BUDGET rather than thrash.
"""

from __future__ import annotations

import itertools
import time as _time
from dataclasses import dataclass, field

import numpy as np

from .bipartite import (
    Bipartition,
    bipartite_otoc_haar_mc,
    bipartite_otoc_open,
    build_swaps,
    haar_identity_check,
)
from .config import ScenarioConfig
from .dynamics import (
    FORWARD,
    ReducedDynamics,
    apply_adjoint_channel,
    apply_channel,
)
from .fastpath import BlockedDynamics
from .linalg import TensorLayout, haar_unitary, pauli_at, thermal_state
from .models import (
    IsingLMGParams,
    LMGClosedParams,
    TFIMParams,
    build_aniso_bath,
    build_edge_coupling,
    build_ising_chain,
    build_lmg_bath,
    build_lmg_closed,
    build_lmg_coupling,
    build_tfim,
)
from .otoc import (
    SeriesResult,
    fotoc_closed,
    fotoc_corrected_multi,
    fotoc_open,
    fotoc_open_multi,
    fotoc_protocol_closed,
    fotoc_protocol_open,
    onset_time,
)

DIMENSION_BUDGET = 4096


class DimensionBudgetError(RuntimeError):
    def __init__(self, dim: int, hint: str = ""):
        msg = f"dense Hilbert dimension {dim} exceeds the budget of {DIMENSION_BUDGET}"
        if hint:
            msg += f"; {hint}"
        super().__init__(msg)


@dataclass
class RunResult:
    series: list[SeriesResult]
    metadata: dict
    wall_time: float = 0.0
    heatmap: dict | None = None  # {"times", "sites", "values"} for t x site grids
    tables: dict = field(default_factory=dict)  # name -> (header, rows)
    checks: list = field(default_factory=list)  # (name, error, tol, passed)

    @property
    def all_passed(self) -> bool:
        return all(passed for *_, passed in self.checks)


def tilted_product_state(n: int) -> np.ndarray:
    """(sqrt(3)/2 |0> + 1/2 |1>) per site, as a density matrix."""
    psi = np.array([np.sqrt(3) / 2, 0.5], dtype=np.complex128)
    vec = psi
    for _ in range(n - 1):
        vec = np.kron(vec, psi)
    return np.outer(vec, vec.conj())


def initial_system_state(kind: str, n: int) -> np.ndarray:
    if kind == "product-tilted":
        return tilted_product_state(n)
    if kind == "maximally-mixed":
        return np.eye(2**n, dtype=np.complex128) / 2**n
    raise ValueError(f"unknown initial state {kind!r}")


def _lmg_params(model: dict) -> IsingLMGParams:
    return IsingLMGParams(
        n_system=model["n_system"],
        n_bath=model["n_bath"],
        omega=model["omega"],
        j_coupling=model["j_coupling"],
        lambda_=model["lambda"],
        lambda_tilde=model["lambda_tilde"],
        omega_c=model["omega_c"],
        temperature=model["temperature"],
    )


def _tfim_params(model: dict) -> TFIMParams:
    return TFIMParams(
        n_system=model["n_system"],
        n_bath=model["n_bath"],
        b_field=model["b_field"],
        j_coupling=model["j_coupling"],
        theta=model["theta"],
        g=model["g"],
        gamma=model["gamma"],
        lambda_z=model["lambda_z"],
        temperature=model["temperature"],
    )


def bath_density(h_bath_only: np.ndarray, kind: str, temperature: float) -> np.ndarray:
    if kind == "thermal":
        return thermal_state(h_bath_only, temperature)
    if kind == "maximally-mixed":
        d = h_bath_only.shape[0]
        return np.eye(d, dtype=np.complex128) / d
    raise ValueError(f"unknown bath state {kind!r}")


def lmg_bath_dynamics(params: IsingLMGParams, fast_path: bool, bath_state: str):
    """ReducedDynamics (dense) or BlockedDynamics (collective sectors)."""
    if fast_path:
        return BlockedDynamics(params, bath_state=bath_state)
    dim = 2 ** (params.n_system + params.n_bath)
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(dim, "set fast_path: true to use collective bath sectors")
    layout = params.layout()
    bath_only = TensorLayout(dims=(2,) * params.n_bath, n_system=0)
    h_s = build_ising_chain(params, layout)
    h_e = build_lmg_bath(params, layout)
    h_se = build_lmg_coupling(params, layout)
    rho_bath = bath_density(
        build_lmg_bath(params, bath_only), bath_state, params.temperature
    )
    return ReducedDynamics(h_s, h_e, h_se, layout, rho_bath)


def tfim_dynamics(params: TFIMParams, bath_state: str) -> ReducedDynamics:
    dim = 2 ** (params.n_system + params.n_bath)
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(dim)
    layout = params.layout()
    bath_only = TensorLayout(dims=(2,) * params.n_bath, n_system=0)
    h_s = build_tfim(params, layout)
    h_e = build_aniso_bath(params, layout)
    h_se = build_edge_coupling(params, layout)
    rho_bath = bath_density(
        build_aniso_bath(params, bath_only), bath_state, params.temperature
    )
    return ReducedDynamics(h_s, h_e, h_se, layout, rho_bath)


def _probe_operators(operators: dict, n_sys: int) -> tuple[dict, np.ndarray, list[int]]:
    """A operators keyed by label, the B operator, and the target site list."""
    sys_layout = TensorLayout.spins(n_sys)
    sites = (
        list(range(n_sys)) if operators["sites_a"] == "all" else list(operators["sites_a"])
    )
    ops_a = {
        f"site{j + 1}": pauli_at(sys_layout, j, operators["axis_a"]) for j in sites
    }
    op_b = pauli_at(sys_layout, operators["site_b"], operators["axis_b"])
    return ops_a, op_b, sites


def _time_grid(time_cfg: dict) -> np.ndarray:
    return np.linspace(0.0, float(time_cfg["t_max"]), int(time_cfg["steps"]))


def run_scenario(cfg: ScenarioConfig, threads: int = 1) -> RunResult:
    start = _time.perf_counter()
    runner = _RUNNERS[cfg.scenario]
    result = runner(cfg, threads)
    result.wall_time = _time.perf_counter() - start
    result.metadata = {"config": cfg.as_dict(), "wall_time_s": result.wall_time}
    return result


def _run_fotoc_lmg(cfg: ScenarioConfig, threads: int, corrected: bool = False) -> RunResult:
    params = _lmg_params(cfg.model)
    dyn = lmg_bath_dynamics(params, cfg.fast_path, cfg.bath_state)
    ops_a, op_b, _ = _probe_operators(cfg.operators, params.n_system)
    rho = initial_system_state(cfg.initial_state, params.n_system)
    times = _time_grid(cfg.time)
    if corrected:
        series = fotoc_corrected_multi(dyn, ops_a, op_b, rho, times)
    else:
        series = fotoc_open_multi(dyn, ops_a, op_b, rho, times)
    return RunResult(series=series, metadata={})


def _run_compare_two_spin(cfg: ScenarioConfig, threads: int) -> RunResult:
    sweep_keys = [k for k in ("lambda", "omega_c", "temperature") if isinstance(cfg.model[k], list)]
    sweep_values = [cfg.model[k] for k in sweep_keys]
    times = _time_grid(cfg.time)
    part = Bipartition(2, 2)
    series: list[SeriesResult] = []
    for combo in itertools.product(*sweep_values) if sweep_keys else [()]:
        model = dict(cfg.model)
        for k, v in zip(sweep_keys, combo):
            model[k] = v
        tag = ",".join(f"{k}={v:g}" for k, v in zip(sweep_keys, combo))
        suffix = f"[{tag}]" if tag else ""
        params = _lmg_params(model)
        if params.n_system != 2:
            raise ValueError("compare-two-spin requires n_system = 2")
        dyn = lmg_bath_dynamics(params, cfg.fast_path, cfg.bath_state)
        ops_a, op_b, _ = _probe_operators(cfg.operators, 2)
        rho = initial_system_state(cfg.initial_state, 2)
        # F between the two spins: probe operator on the second spin
        op_a = ops_a.get("site2", next(iter(ops_a.values())))
        series.append(fotoc_open(dyn, op_a, op_b, rho, times, label=f"F{suffix}"))
        g_vals = [
            bipartite_otoc_open(dyn.superoperator(t, "adjoint", FORWARD), part)
            for t in times
        ]
        series.append(
            SeriesResult(label=f"G{suffix}", times=times, values=np.asarray(g_vals))
        )
    return RunResult(series=series, metadata={})


def _run_tfim_lightcone(cfg: ScenarioConfig, threads: int) -> RunResult:
    params = _tfim_params(cfg.model)
    dyn = tfim_dynamics(params, cfg.bath_state)
    ops_a, op_b, sites = _probe_operators(cfg.operators, params.n_system)
    rho = initial_system_state(cfg.initial_state, params.n_system)
    times = _time_grid(cfg.time)
    series = fotoc_open_multi(dyn, ops_a, op_b, rho, times)
    onsets = [(site + 1, onset_time(s, cfg.threshold)) for site, s in zip(sites, series)]
    heatmap = {
        "times": times,
        "sites": np.asarray([s + 1 for s in sites]),
        "values": np.vstack([s.values for s in series]),
    }
    return RunResult(
        series=series,
        metadata={},
        heatmap=heatmap,
        tables={"onsets": (("site", "onset_time"), onsets)},
    )


def _run_lmg_closed(cfg: ScenarioConfig, threads: int) -> RunResult:
    params = LMGClosedParams(
        n_spins=cfg.model["n_spins"],
        lambda_=cfg.model["lambda"],
        gamma=cfg.model["gamma"],
        omega_c=cfg.model["omega_c"],
    )
    dim = 2**params.n_spins
    if dim > DIMENSION_BUDGET:
        raise DimensionBudgetError(dim)
    h = build_lmg_closed(params)
    ops_a, op_b, _ = _probe_operators(cfg.operators, params.n_spins)
    rho = initial_system_state(cfg.initial_state, params.n_spins)
    times = _time_grid(cfg.time)
    series = [
        fotoc_closed(h, op_a, op_b, rho, times, label=label)
        for label, op_a in ops_a.items()
    ]
    return RunResult(series=series, metadata={})


def _run_haar_check(cfg: ScenarioConfig, threads: int) -> RunResult:
    rows = []
    series = []
    for dim in cfg.dims:
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, dim)))
        err = haar_identity_check(dim, cfg.samples, rng)
        rows.append((dim, cfg.samples, err))
        series.append(
            SeriesResult(
                label=f"haar_error_dim{dim}",
                times=np.array([0.0]),
                values=np.array([err]),
            )
        )
    return RunResult(
        series=series,
        metadata={},
        tables={"haar": (("dim", "samples", "max_error"), rows)},
    )


def _run_validate(cfg: ScenarioConfig, threads: int) -> RunResult:
    checks = validation_suite(seed=cfg.seed, threads=threads)
    series = [
        SeriesResult(
            label=name, times=np.array([0.0]), values=np.array([error])
        )
        for name, error, _tol, _ok in checks
    ]
    return RunResult(series=series, metadata={}, checks=checks)


def validation_suite(seed: int = 1234, threads: int = 1) -> list:
    """Oracle/invariant suite behind the `validate` scenario.

    Returns (name, measured_error, tolerance, passed) per check.
    """
    rng = np.random.default_rng(seed)
    checks = []

    def record(name, error, tol):
        checks.append((name, float(error), tol, bool(error <= tol)))

    # 1. closed protocol vs direct trace formula, random 2-qubit instances
    err = 0.0
    layout2 = TensorLayout.spins(2)
    times = np.linspace(0.0, 2.0, 7)
    for _ in range(5):
        h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (h + h.conj().T) / 2
        a = np.kron(haar_unitary(2, rng), np.eye(2))
        b = np.kron(np.eye(2), haar_unitary(2, rng))
        rho = tilted_product_state(2)
        direct = fotoc_closed(h, a, b, rho, times)
        proto = fotoc_protocol_closed(h, a, b, rho, times)
        err = max(err, np.max(np.abs(direct.values - proto.values)))
    record("closed protocol vs formula", err, 1e-10)

    # 2. open protocol vs trace expression, 1 system + 2 bath spins
    params = IsingLMGParams(n_system=1, n_bath=2, lambda_=0.5)
    dyn = lmg_bath_dynamics(params, fast_path=False, bath_state="thermal")
    a = haar_unitary(2, rng)
    b = haar_unitary(2, rng)
    rho = tilted_product_state(1)
    direct = fotoc_open(dyn, a, b, rho, times)
    proto = fotoc_protocol_open(dyn, a, b, rho, times)
    record(
        "open protocol vs formula",
        np.max(np.abs(direct.values - proto.values)),
        1e-10,
    )

    # 3. adjoint duality Tr[A xi(rho)] = Tr[xi^dag(A) rho]
    jp = dyn.propagators(0.7)
    err = 0.0
    for _ in range(5):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho_r = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        rho_r = rho_r @ rho_r.conj().T
        rho_r /= np.trace(rho_r)
        lhs = np.trace(a @ apply_channel(jp, rho_r, dyn.rho_bath, FORWARD))
        rhs = np.trace(apply_adjoint_channel(jp, a, dyn.rho_bath, FORWARD) @ rho_r)
        err = max(err, abs(lhs - rhs))
    record("adjoint channel duality", err, 1e-10)

    # 4. swap operator algebra
    err = 0.0
    for da, db in ((2, 2), (2, 4), (4, 2)):
        p = Bipartition(da, db)
        sw = build_swaps(p)
        eye = np.eye((da * db) ** 2)
        err = max(
            err,
            np.max(np.abs(sw.s_full @ sw.s_full - eye)),
            np.max(np.abs(sw.s_aa @ sw.s_aa - eye)),
            np.max(np.abs(sw.s_bb @ sw.s_bb - eye)),
            np.max(np.abs(sw.s_full - sw.s_aa @ sw.s_bb)),
            np.max(np.abs(sw.s_aa @ sw.s_bb - sw.s_bb @ sw.s_aa)),
        )
    record("swap operator algebra", err, 1e-12)

    # 5. Haar identity at dim 2
    err = haar_identity_check(2, 2000, np.random.default_rng(seed + 1))
    record("haar identity (dim 2, 2000 samples)", err, 5 / np.sqrt(2000))

    # 6. MC vs swap-formula bipartite OTOC for the two-spin LMG channel
    params2 = IsingLMGParams(n_system=2, n_bath=2, lambda_=1.0)
    dyn2 = lmg_bath_dynamics(params2, fast_path=False, bath_state="thermal")
    part = Bipartition(2, 2)
    rep = dyn2.superoperator(1.0, "adjoint", FORWARD)
    g_formula = bipartite_otoc_open(rep, part)
    mean, se = bipartite_otoc_haar_mc(rep.apply, part, 2000, seed + 2, threads=threads)
    record("MC vs formula bipartite OTOC (z-score/3)", abs(mean - g_formula) / (3 * se), 1.0)

    # 7. fast path vs dense reduced dynamics
    params3 = IsingLMGParams(n_system=1, n_bath=4, lambda_=0.8)
    dense = lmg_bath_dynamics(params3, fast_path=False, bath_state="thermal")
    blocked = lmg_bath_dynamics(params3, fast_path=True, bath_state="thermal")
    sz = pauli_at(TensorLayout.spins(1), 0, "z")
    rho1 = tilted_product_state(1)
    f_dense = fotoc_open(dense, sz, sz, rho1, times)
    f_blocked = fotoc_open(blocked, sz, sz, rho1, times)
    record(
        "collective fast path vs dense",
        np.max(np.abs(f_dense.values - f_blocked.values)),
        1e-8,
    )

    return checks


_RUNNERS = {
    "fotoc-lmg-bath": lambda cfg, th: _run_fotoc_lmg(cfg, th, corrected=False),
    "fotoc-corrected-lmg-bath": lambda cfg, th: _run_fotoc_lmg(cfg, th, corrected=True),
    "compare-two-spin": _run_compare_two_spin,
    "tfim-lightcone": _run_tfim_lightcone,
    "lmg-closed": _run_lmg_closed,
    "haar-check": _run_haar_check,
    "validate": _run_validate,
}
