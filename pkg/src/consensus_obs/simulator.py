"""
Consensus dynamics with leader inputs and observation outputs.

    continuous:  x' = -L x + B u,   y = C x      (fixed-step RK4)
    discrete:    x+ = P x + B u,    P = I - eps L

Inputs are piecewise constant over each step.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from .config import DEFAULT_SETTINGS
from .errors import HorizonTooShortError, SimulationError
from .graphs import GraphTopology, NodeSet, input_matrix, laplacian, output_matrix
from .oracle import unobservable_eigenspace


class SimMode(str, Enum):
    CONTINUOUS_RK4 = "rk4"
    DISCRETE_EPSILON = "discrete"


@dataclass(frozen=True)
class SimConfig:
    topology: GraphTopology
    nodes: NodeSet
    mode: SimMode = SimMode.CONTINUOUS_RK4
    epsilon: float = DEFAULT_SETTINGS.simulation.epsilon
    dt: float = DEFAULT_SETTINGS.simulation.dt
    horizon: float = DEFAULT_SETTINGS.simulation.horizon

    def __post_init__(self):
        object.__setattr__(self, 'mode', SimMode(self.mode))
        if self.nodes.n != self.topology.n:
            raise SimulationError(f"Node set built for n={self.nodes.n} used on {self.topology}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise SimulationError(f"Step dt must be positive, got {self.dt}")
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise SimulationError(f"Horizon must be positive, got {self.horizon}")
        if self.mode is SimMode.DISCRETE_EPSILON:
            check_epsilon(self.topology, self.epsilon)

    @classmethod
    def from_settings(cls, topology, nodes, mode=SimMode.CONTINUOUS_RK4, settings=DEFAULT_SETTINGS, **overrides):
        sim = settings.simulation
        params = {"epsilon": sim.epsilon, "dt": sim.dt, "horizon": sim.horizon, **overrides}
        return cls(topology, nodes, mode, **params)

    @property
    def steps(self):
        """RK4 steps over the horizon; in discrete mode the horizon is a step count."""
        if self.mode is SimMode.DISCRETE_EPSILON:
            return max(1, int(round(self.horizon)))
        return max(1, int(round(self.horizon / self.dt)))

    def times(self):
        unit = 1.0 if self.mode is SimMode.DISCRETE_EPSILON else self.dt
        return np.arange(self.steps + 1) * unit


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray   # (T, n)
    outputs: np.ndarray  # (T, m)

    def to_frame(self):
        """Columns t, x_1..x_n, y_1..y_m."""
        n, m = self.states.shape[1], self.outputs.shape[1]
        frame = pd.DataFrame(self.states, columns=[f"x_{i}" for i in range(1, n + 1)])
        frame.insert(0, "t", self.times)
        for j in range(m):
            frame[f"y_{j + 1}"] = self.outputs[:, j]
        return frame

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)
        logging.info(f"Trajectory with {len(self.times)} samples written to {path}")
        return path


def check_epsilon(topology, epsilon):
    limit = 1.0 / max(topology.max_degree(), 1)
    if not (0.0 < epsilon < limit):
        raise SimulationError(f"epsilon must lie in (0, {limit:g}) for {topology}, got {epsilon}")


def transition_matrix(topology, epsilon):
    """P = I - eps L; nonnegative and doubly stochastic for admissible eps."""
    check_epsilon(topology, epsilon)
    P = np.eye(topology.n) - epsilon * laplacian(topology)
    ones = np.ones(topology.n)
    if np.min(P) < 0 or np.max(np.abs(P @ ones - 1)) > 1e-12 or np.max(np.abs(ones @ P - 1)) > 1e-12:
        raise SimulationError(f"P = I - {epsilon} L is not doubly stochastic")
    return P


def rk4_matrices(L, B, dt):
    """
    One RK4 step for x' = A x + B u with u held constant is exactly
    x+ = Phi x + Gamma u, with A = -L.
    """
    n = L.shape[0]
    hA = -dt * L
    I = np.eye(n)
    hA2 = hA @ hA
    hA3 = hA2 @ hA
    Phi = I + hA + hA2 / 2 + hA3 / 6 + hA3 @ hA / 24
    Gamma = dt * (I + hA / 2 + hA2 / 6 + hA3 / 24) @ B
    return Phi, Gamma


def _input_samples(u, steps, m, times):
    if u is None:
        return np.zeros((steps, m))
    if callable(u):
        samples = np.array([np.atleast_1d(u(t)) for t in times[:steps]], dtype=float)
    else:
        samples = np.asarray(u, dtype=float)
    samples = samples.reshape(steps, m) if samples.size == steps * m else samples
    if samples.shape != (steps, m):
        raise SimulationError(f"Input must have shape ({steps}, {m}), got {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise SimulationError("Input signal contains non-finite values")
    return samples


def simulate(cfg, x0, u=None, check_invariants=True):
    """
    Integrate from x0. u may be None (zero input), a callable u(t) -> m-vector,
    or an array of per-step samples of shape (steps, m).
    """
    g = cfg.topology
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (g.n,):
        raise SimulationError(f"Initial state must have length {g.n}, got shape {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise SimulationError("Initial state contains non-finite values")

    L = laplacian(g)
    B = input_matrix(g, cfg.nodes)
    C = output_matrix(g, cfg.nodes)
    times = cfg.times()
    steps = cfg.steps
    samples = _input_samples(u, steps, len(cfg.nodes), times)

    if cfg.mode is SimMode.DISCRETE_EPSILON:
        Phi, Gamma = transition_matrix(g, cfg.epsilon), B
    else:
        Phi, Gamma = rk4_matrices(L, B, cfg.dt)

    states = np.empty((steps + 1, g.n))
    states[0] = x0
    for k in range(steps):
        states[k + 1] = Phi @ states[k] + Gamma @ samples[k]

    if check_invariants and u is None:
        _check_free_response(states, times)

    logging.info(f"Simulated {g} with {cfg.nodes} for {steps} {cfg.mode.value} steps")
    return Trajectory(times, states, states @ C.T)


def _check_free_response(states, times):
    """With u = 0 the state sum is conserved and the norm never grows."""
    scale = max(1.0, float(np.max(np.abs(states[0]))))
    drift = abs(states[-1].sum() - states[0].sum())
    if drift > 1e-8 * max(1.0, times[-1]) * scale * states.shape[1]:
        raise SimulationError(f"State sum drifted by {drift:.2e}")
    norms = np.linalg.norm(states, axis=1)
    if np.any(np.diff(norms) > 1e-12 * scale):
        raise SimulationError("State norm increased under zero input")


# --- demonstrations -----------------------------------------------------

def unobservable_basis(topology, nodes):
    """Orthonormal basis (n x k) of X_no for the pair (L, C)."""
    L = laplacian(topology)
    C = output_matrix(topology, nodes)
    bases = [basis for _, basis in unobservable_eigenspace(L, C)]
    if not bases:
        return np.zeros((topology.n, 0))
    Q, _ = np.linalg.qr(np.hstack(bases))
    return Q


@dataclass(frozen=True, eq=False)
class IndistinguishabilityResult:
    first: Trajectory
    second: Trajectory
    witness: np.ndarray
    output_gap: float
    tolerance: float

    @property
    def passed(self):
        return self.output_gap <= self.tolerance


def indistinguishability_demo(topology, observers, witness=None, x0=None,
                              mode=SimMode.CONTINUOUS_RK4, settings=DEFAULT_SETTINGS):
    """
    Simulate x0 and x0 + witness with zero input and compare the outputs.
    The witness must lie in the unobservable subspace.
    """
    tol = settings.tolerances
    basis = unobservable_basis(topology, observers)
    if basis.shape[1] == 0:
        raise SimulationError(f"{topology} is observable from {observers}: no witness exists")
    if witness is None:
        witness = basis[:, 0]
    witness = np.asarray(witness, dtype=float)
    if witness.shape != (topology.n,) or not np.all(np.isfinite(witness)) or not np.any(witness):
        raise SimulationError("Witness must be a finite nonzero n-vector")
    outside = witness - basis @ (basis.T @ witness)
    if np.max(np.abs(outside)) > tol.residual * max(1.0, np.max(np.abs(witness))):
        raise SimulationError(f"Witness is not unobservable (component {np.max(np.abs(outside)):.2e} outside X_no)")

    if x0 is None:
        x0 = np.random.default_rng(settings.simulation.seed).standard_normal(topology.n)
    cfg = SimConfig.from_settings(topology, observers, mode, settings)
    first = simulate(cfg, x0)
    second = simulate(cfg, np.asarray(x0, dtype=float) + witness)
    gap = float(np.max(np.abs(first.outputs - second.outputs)))
    result = IndistinguishabilityResult(first, second, witness, gap, tol.output_gap)
    if not result.passed:
        raise SimulationError(f"Outputs differ by {gap:.2e} > {tol.output_gap:g}")
    logging.info(f"Indistinguishable initial states on {topology} {observers}: gap {gap:.2e}")
    return result


@dataclass(frozen=True, eq=False)
class SteeringResult:
    target: np.ndarray
    reached: bool
    unreachable_component: np.ndarray
    inputs: np.ndarray | None = None
    trajectory: Trajectory | None = None
    terminal_error: float | None = field(default=None)


def steering_demo(topology, leaders, target, x0=None, settings=DEFAULT_SETTINGS):
    """
    Minimum-energy open-loop steering from x0 (default 0) to target over the
    Gramian horizon. The Gramian is that of the RK4-discretised system
    restricted to X_r, so the computed input is exact for the integrator.
    """
    tol = settings.tolerances
    target = np.asarray(target, dtype=float)
    if target.shape != (topology.n,) or not np.all(np.isfinite(target)):
        raise SimulationError(f"Target must be a finite vector of length {topology.n}")
    x0 = np.zeros(topology.n) if x0 is None else np.asarray(x0, dtype=float)

    cfg = SimConfig.from_settings(topology, leaders, SimMode.CONTINUOUS_RK4, settings,
                                  horizon=settings.simulation.gramian_horizon)
    L = laplacian(topology)
    B = input_matrix(topology, leaders)
    Phi, Gamma = rk4_matrices(L, B, cfg.dt)
    steps = cfg.steps

    # reachability of (L, B) is observability of (L, B^T)
    unreachable = unobservable_basis(topology, leaders)
    free_end = np.linalg.matrix_power(Phi, steps) @ x0
    demand = target - free_end
    component = unreachable @ (unreachable.T @ demand)
    if np.linalg.norm(component) > tol.reachable_projection:
        logging.info(f"Target not reachable on {topology} from {leaders}: |component| {np.linalg.norm(component):.2e}")
        return SteeringResult(target, False, component)

    Vr = _complement(unreachable, topology.n)
    W = np.zeros((topology.n, topology.n))
    powers = [np.eye(topology.n)]
    for _ in range(steps - 1):
        powers.append(Phi @ powers[-1])
    for P in powers:
        G = P @ Gamma
        W += G @ G.T
    Wr = Vr.T @ W @ Vr
    eig = np.linalg.eigvalsh(Wr)
    if eig.size == 0 or eig[0] <= eig[-1] * 1e-14:
        raise HorizonTooShortError(f"Restricted Gramian is singular over horizon {cfg.horizon}")

    eta = np.linalg.solve(Wr, Vr.T @ demand)
    costate = Vr @ eta
    inputs = np.array([(powers[steps - 1 - k] @ Gamma).T @ costate for k in range(steps)])
    trajectory = simulate(cfg, x0, inputs, check_invariants=False)
    error = float(np.max(np.abs(trajectory.states[-1] - target)))
    if error > tol.steering_error:
        raise SimulationError(f"Terminal error {error:.2e} exceeds {tol.steering_error:g}")
    logging.info(f"Steered {topology} from {leaders}: terminal error {error:.2e}")
    return SteeringResult(target, True, component, inputs, trajectory, error)


def _complement(basis, n):
    """Orthonormal basis of the orthogonal complement of span(basis)."""
    if basis.shape[1] == 0:
        return np.eye(n)
    Q, _ = np.linalg.qr(basis, mode='complete')
    return Q[:, basis.shape[1]:]
