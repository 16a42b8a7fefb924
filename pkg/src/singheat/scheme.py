"""Mild-solution marching: windowed Picard iteration on graded quadrature,
and the decreasing ladder of Lipschitz-regularized approximations.

The equation is solved in integral form,

    u(t) = S(t - a) u(a) + integral_a^t S_gamma(t - sigma) g(u(sigma)) d sigma,

window by window.  Within one window the fixed-point map is a sup-norm
contraction provided the window is short against the nonlinearity's Lipschitz
constant (contraction_window), so plain Jacobi sweeps over the stored time
nodes converge geometrically.  The Duhamel integrand blows up like
(t - sigma)^{-gamma/2} at the upper limit; the quadrature absorbs that
exactly by the grading substitution t - sigma = s^p with p = 2/(2 - gamma).

The sublinear power r^q itself is not Lipschitz at 0.  The scheme of record
replaces it by the regularized g_n (linear of matching slope below 1/(2n)),
shifts the data up by 1/n, and lets n run through a schedule: the resulting
solutions decrease in n, and the pointwise infimum is the distinguished
(maximal) solution the package's checks are about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import constants
from .errors import ConvergenceError, ParameterError
from .fields import Grid, GridFunction, Params
from .semigroup import HeatPropagator

__all__ = [
    "Nonlinearity",
    "SolveConfig",
    "TimeMesh",
    "Trajectory",
    "contraction_window",
    "duhamel_rule",
    "g_n",
    "monotone_solve",
    "picard_solve",
    "pointwise_positive_diff",
    "positive_part",
    "power_lipschitz",
    "subsolution_coefficient",
    "subsolution_w",
]


# ---------------------------------------------------------------------------
# Pointwise operations
# ---------------------------------------------------------------------------

def g_n(values, n: int, q: float) -> np.ndarray:
    """Lipschitz regularization of r -> r^q.

    Linear with slope (2n)^{1-q} on [0, 1/(2n)], equal to r^q beyond; the two
    branches meet at the knee, so g_n is continuous, non-decreasing, and
    globally Lipschitz with constant at most (1+q)(2n)^{1-q}.  Requires
    non-negative input and an integer n >= 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"regularization index n must be an integer >= 1 (got {n})")
    if not (0.0 < q < 1.0):
        raise ParameterError(f"q must lie in (0, 1) (got {q})")
    arr = np.asarray(values, dtype=float)
    if arr.size and float(arr.min()) < 0.0:
        raise ParameterError("g_n expects non-negative input")
    knee = 0.5 / n
    slope = (2.0 * n) ** (1.0 - q)
    return np.where(arr <= knee, slope * arr, np.maximum(arr, knee) ** q)


def positive_part(values) -> np.ndarray:
    """max(r, 0), elementwise."""
    return np.maximum(np.asarray(values, dtype=float), 0.0)


def pointwise_positive_diff(a, b) -> np.ndarray:
    """[a - b]_+ elementwise; the quantity contraction arguments run on."""
    return positive_part(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


@dataclass(frozen=True)
class Nonlinearity:
    """Source nonlinearity applied pointwise to non-negative fields.

    kind "regularized" is g_n, "power" the raw r^q, "zero" the null source.
    ``lipschitz`` reports a global sup-norm Lipschitz constant, or None for
    the pure power (not Lipschitz at 0).
    """

    kind: str
    q: float = 0.5
    n: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("regularized", "power", "zero"):
            raise ParameterError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind != "zero" and not (0.0 < self.q < 1.0):
            raise ParameterError(f"q must lie in (0, 1) (got {self.q})")
        if self.kind == "regularized" and (not isinstance(self.n, (int, np.integer)) or self.n < 1):
            raise ParameterError(f"regularized nonlinearity needs integer n >= 1 (got {self.n})")

    def __call__(self, values) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros_like(np.asarray(values, dtype=float))
        if self.kind == "power":
            arr = np.asarray(values, dtype=float)
            if arr.size and float(arr.min()) < 0.0:
                raise ParameterError("power nonlinearity expects non-negative input")
            return arr**self.q
        return g_n(values, self.n, self.q)

    @property
    def lipschitz(self) -> float | None:
        if self.kind == "zero":
            return 0.0
        if self.kind == "regularized":
            return (1.0 + self.q) * (2.0 * self.n) ** (1.0 - self.q)
        return None

    @staticmethod
    def regularized(q: float, n: int) -> "Nonlinearity":
        return Nonlinearity(kind="regularized", q=q, n=int(n))

    @staticmethod
    def power(q: float) -> "Nonlinearity":
        return Nonlinearity(kind="power", q=q)

    @staticmethod
    def zero() -> "Nonlinearity":
        return Nonlinearity(kind="zero")


def power_lipschitz(u0: GridFunction, q: float) -> float:
    """Sup-norm Lipschitz scale for the pure power on uniformly positive data.

    Along the evolution from data with floor m = min u0 > 0, fields stay
    above m/2 over the horizons the windowing uses (the box-truncated heat
    flow can halve the floor near the boundary but not more), and on
    [m/2, inf) the power has Lipschitz constant q (m/2)^{q-1}.
    """
    m = float(np.min(u0.values))
    if m <= 0.0:
        raise ParameterError(
            "pure-power marching requires data with a strictly positive floor; "
            "use the regularized scheme for degenerate data"
        )
    return q * (0.5 * m) ** (q - 1.0)


# ---------------------------------------------------------------------------
# Explicit sub-solution
# ---------------------------------------------------------------------------

def subsolution_coefficient(params: Params) -> float:
    """Coefficient lambda = [(1-q) eta0]^{1/(1-q)} of the explicit barrier."""
    e0 = constants.eta0(params.q, params.gamma, params.n_dim)
    return ((1.0 - params.q) * e0) ** (1.0 / (1.0 - params.q))


def subsolution_w(grid: Grid, params: Params, t: float) -> GridFunction:
    """Explicit sub-solution w(x, t) = lambda t^{1/(1-q)} (|x| + sqrt t)^{-gamma/(1-q)}.

    Vanishes identically at t = 0 and is radially non-increasing; every
    non-negative solution of the integral equation dominates it.
    """
    if not math.isfinite(t) or t < 0.0:
        raise ParameterError(f"time must be >= 0 (got {t})")
    if t == 0.0:
        return GridFunction(grid, np.zeros(grid.shape))
    lam = subsolution_coefficient(params)
    expo = params.gamma / (1.0 - params.q)
    r = grid.radius_values()
    vals = lam * t ** (1.0 / (1.0 - params.q)) * (r + math.sqrt(t)) ** (-expo)
    return GridFunction(grid, vals)


# ---------------------------------------------------------------------------
# Time discretization
# ---------------------------------------------------------------------------

def duhamel_rule(t_left: float, t_target: float, gamma: float, n_nodes: int):
    """Quadrature in sigma for Duhamel integrals with a (t_target - sigma)^{-gamma/2}
    endpoint singularity on [t_left, t_target].

    The substitution t_target - sigma = s^p, p = 2/(2 - gamma), turns the
    singular factor times the Jacobian into the constant p, so Gauss-Legendre
    in s converges at its full rate for smooth remaining factors.  Returns
    (sigma_nodes, weights): nodes ascending and strictly interior, weights
    positive, to be applied directly to integrand values (the weights carry
    the Jacobian, not the singular factor; the integrand keeps its own
    singularity, which the node clustering resolves).
    """
    if not (math.isfinite(t_left) and math.isfinite(t_target)) or t_target <= t_left:
        raise ParameterError(f"need t_left < t_target (got {t_left}, {t_target})")
    if not (0.0 <= gamma < 2.0):
        raise ParameterError(f"gamma must lie in [0, 2) (got {gamma})")
    if n_nodes < 1:
        raise ParameterError(f"n_nodes must be >= 1 (got {n_nodes})")
    p = 2.0 / (2.0 - gamma)
    span = t_target - t_left
    s_hi = span ** (1.0 / p)
    x, w = leggauss(n_nodes)
    s = 0.5 * s_hi * (x + 1.0)
    ws = 0.5 * s_hi * w
    # strong grading (p large) can shrink s^p below the ulp of t_target, which
    # would cancel the node onto the window end; floor the gap and merge any
    # nodes that still collapse to the same float (same evaluation point, so
    # summing their weights leaves the rule's value unchanged)
    gap = np.maximum(s**p, max(span * 1e-14, abs(t_target) * 1e-15))
    sig = t_target - gap
    wq = ws * p * s ** (p - 1.0)
    order = np.argsort(sig)
    sig, wq = sig[order], wq[order]
    keep_s = [float(sig[0])]
    keep_w = [float(wq[0])]
    for s_i, w_i in zip(sig[1:], wq[1:]):
        if s_i == keep_s[-1]:
            keep_w[-1] += float(w_i)
        else:
            keep_s.append(float(s_i))
            keep_w.append(float(w_i))
    return np.array(keep_s), np.array(keep_w)


def contraction_window(gamma: float, lipschitz: float, eta1_value: float, theta: float = 0.5) -> float:
    """Window length making one Picard sweep a theta-contraction in sup norm.

    One sweep amplifies sup-norm differences by at most
    lipschitz * eta1 * W^{1 - gamma/2} / (1 - gamma/2); solve that = theta
    for W.  Returns inf for a zero Lipschitz constant.
    """
    if not (0.0 < theta < 1.0):
        raise ParameterError(f"theta must lie in (0, 1) (got {theta})")
    if lipschitz < 0.0 or eta1_value <= 0.0:
        raise ParameterError("need lipschitz >= 0 and eta1_value > 0")
    if lipschitz == 0.0:
        return math.inf
    e = 1.0 - 0.5 * gamma
    return (theta * e / (lipschitz * eta1_value)) ** (1.0 / e)


@dataclass(frozen=True)
class TimeMesh:
    """Partition of [0, t_end] into contraction windows, with the graded
    endpoint quadrature of each window precomputed."""

    t_end: float
    gamma: float
    nodes_per_window: int
    boundaries: tuple[float, ...]
    window_nodes: tuple[np.ndarray, ...]
    window_weights: tuple[np.ndarray, ...]

    @classmethod
    def build(
        cls,
        t_end: float,
        gamma: float,
        window_length: float,
        nodes_per_window: int = 8,
        must_include: Iterable[float] = (),
    ) -> "TimeMesh":
        if not (math.isfinite(t_end) and t_end > 0.0):
            raise ParameterError(f"t_end must be positive (got {t_end})")
        if not (0.0 <= gamma < 2.0):
            raise ParameterError(f"gamma must lie in [0, 2) (got {gamma})")
        if nodes_per_window < 2:
            raise ParameterError(f"nodes_per_window must be >= 2 (got {nodes_per_window})")
        if not (window_length > 0.0):
            raise ParameterError(f"window_length must be positive (got {window_length})")
        w_len = min(window_length, t_end)
        tol = 1e-12 * max(1.0, t_end)
        anchors = sorted(set(float(s) for s in must_include) | {float(t_end)})
        clean: list[float] = []
        for s in anchors:
            if s <= tol or s > t_end + tol:
                raise ParameterError(f"record time {s} outside (0, t_end]")
            s = min(s, float(t_end))
            if clean and s - clean[-1] <= tol:
                clean[-1] = s
            else:
                clean.append(s)
        clean[-1] = float(t_end)
        bounds = [0.0]
        prev = 0.0
        for s in clean:
            span = s - prev
            pieces = max(1, math.ceil(span / w_len - 1e-9))
            if len(bounds) + pieces > 2_000_000:
                raise ParameterError("time mesh would exceed 2e6 windows; enlarge the window length")
            bounds.extend(prev + span * j / pieces for j in range(1, pieces))
            bounds.append(s)
            prev = s
        nodes = []
        weights = []
        for a, b in zip(bounds, bounds[1:]):
            sig, wq = duhamel_rule(a, b, gamma, nodes_per_window)
            nodes.append(sig)
            weights.append(wq)
        return cls(
            t_end=float(t_end),
            gamma=float(gamma),
            nodes_per_window=int(nodes_per_window),
            boundaries=tuple(bounds),
            window_nodes=tuple(nodes),
            window_weights=tuple(weights),
        )

    def __post_init__(self) -> None:
        bs = self.boundaries
        if len(bs) < 2 or bs[0] != 0.0 or bs[-1] != self.t_end:
            raise ParameterError("boundaries must run from 0 to t_end")
        if any(b1 <= b0 for b0, b1 in zip(bs, bs[1:])):
            raise ParameterError("boundaries must be strictly increasing")
        for (a, b, sig, wq) in zip(bs, bs[1:], self.window_nodes, self.window_weights):
            # extreme grading can merge ulp-colliding nodes, so a window may
            # carry fewer than nodes_per_window points, never more
            if not (1 <= sig.size <= self.nodes_per_window) or wq.size != sig.size:
                raise ParameterError("per-window rule size mismatch")
            if not (np.all(sig > a) and np.all(sig < b)):
                raise ParameterError("quadrature nodes must lie strictly inside their window")
            if not np.all(wq > 0.0):
                raise ParameterError("quadrature weights must be positive")

    @property
    def window_count(self) -> int:
        return len(self.boundaries) - 1


# ---------------------------------------------------------------------------
# Solver configuration and trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveConfig:
    """Numerical knobs of the marching scheme."""

    eps_fp: float = 1e-8
    max_picard_sweeps: int = 80
    nodes_per_window: int = 8
    n_schedule: tuple[int, ...] = (1, 2, 4, 8, 16, 32, 64)
    eps_tail: float = 1e-10
    window_cap: float = 0.25
    contraction_theta: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 < self.eps_fp < 1.0):
            raise ParameterError(f"eps_fp must lie in (0, 1) (got {self.eps_fp})")
        if self.max_picard_sweeps < 1:
            raise ParameterError("max_picard_sweeps must be >= 1")
        if self.nodes_per_window < 2:
            raise ParameterError("nodes_per_window must be >= 2")
        sched = tuple(int(n) for n in self.n_schedule)
        if not sched or any(n < 1 for n in sched) or any(
            b <= a for a, b in zip(sched, sched[1:])
        ):
            raise ParameterError(
                f"n_schedule must be a strictly increasing tuple of positive integers "
                f"(got {self.n_schedule})"
            )
        object.__setattr__(self, "n_schedule", sched)
        if not (0.0 < self.eps_tail < 1.0):
            raise ParameterError("eps_tail must lie in (0, 1)")
        if not (self.window_cap > 0.0):
            raise ParameterError("window_cap must be positive")
        if not (0.0 < self.contraction_theta < 1.0):
            raise ParameterError("contraction_theta must lie in (0, 1)")


@dataclass
class Trajectory:
    """Snapshots of one run at increasing times (t = 0 included)."""

    grid: Grid
    params: Params
    times: tuple[float, ...]
    snapshots: tuple[GridFunction, ...]
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.times) != len(self.snapshots):
            raise ParameterError("times and snapshots must align")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ParameterError("snapshot times must be strictly increasing")
        for snap in self.snapshots:
            if snap.grid != self.grid:
                raise ParameterError("all snapshots must live on the trajectory grid")

    def snapshot_at(self, t: float) -> GridFunction:
        for tt, snap in zip(self.times, self.snapshots):
            if abs(tt - t) <= 1e-9 * max(1.0, abs(t)):
                return snap
        raise ParameterError(f"no snapshot recorded at t = {t} (have {self.times})")

    def to_csv_text(self) -> str:
        n = self.grid.n_dim
        header = "t,node_index," + ",".join(f"coord_{i + 1}" for i in range(n)) + ",u"
        coords = np.stack([m.ravel() for m in self.grid.node_mesh()], axis=1)
        lines = [header]
        for t, snap in zip(self.times, self.snapshots):
            flat = snap.values.ravel()
            t_txt = repr(float(t))
            for idx in range(flat.size):
                cs = ",".join(repr(float(c)) for c in coords[idx])
                lines.append(f"{t_txt},{idx},{cs},{repr(float(flat[idx]))}")
        return "\n".join(lines) + "\n"

    def metadata(self) -> dict:
        diag = {k: v for k, v in self.diagnostics.items() if _json_safe(v)}
        return {
            "params": {
                "q": self.params.q,
                "gamma": self.params.gamma,
                "n_dim": self.params.n_dim,
            },
            "grid": {
                "n_dim": self.grid.n_dim,
                "half_width": self.grid.half_width,
                "points_per_axis": self.grid.points_per_axis,
            },
            "times": list(self.times),
            "node_order": "C order over the axis meshes, axis 1 slowest",
            "diagnostics": diag,
        }


def _json_safe(v) -> bool:
    if isinstance(v, (bool, int, float, str)) or v is None:
        return True
    if isinstance(v, (list, tuple)):
        return all(_json_safe(x) for x in v)
    if isinstance(v, dict):
        return all(isinstance(k, str) and _json_safe(x) for k, x in v.items())
    return False


# ---------------------------------------------------------------------------
# Picard marching
# ---------------------------------------------------------------------------

def _interp_stack(knots: np.ndarray, stack: list[np.ndarray], t: float) -> np.ndarray:
    """Linear interpolation between stored fields; exact at the knots."""
    i = int(np.searchsorted(knots, t))
    if i <= 0:
        return stack[0]
    if i >= knots.size:
        return stack[-1]
    t0, t1 = knots[i - 1], knots[i]
    if t >= t1:
        return stack[i]
    if t <= t0:
        return stack[i - 1]
    th = (t - t0) / (t1 - t0)
    return (1.0 - th) * stack[i - 1] + th * stack[i]


def picard_solve(
    u0: GridFunction,
    nonlinearity: Nonlinearity,
    params: Params,
    mesh: TimeMesh,
    config: SolveConfig = SolveConfig(),
    record_times: "Sequence[float] | None" = None,
) -> Trajectory:
    """March the integral equation over the mesh windows by Jacobi sweeps.

    Within each window [a, b] the unknowns are the fields at the window's
    quadrature nodes and at b.  Each sweep recomputes every unknown from the
    free term S(tau - a) u(a) plus the graded quadrature of
    S_gamma(tau - sigma) g(u(sigma)), interpolating the previous sweep's
    fields linearly in time between stored nodes.  Sweeps stop when the
    largest nodewise update falls below config.eps_fp; exceeding the sweep
    budget raises ConvergenceError.

    record_times selects which window boundaries are kept as snapshots
    (default: all of them).  Fields stay non-negative throughout; values are
    clipped at 0 before the nonlinearity only to absorb FFT rounding dust.
    """
    grid = u0.grid
    if float(u0.values.min()) < 0.0:
        raise ParameterError("initial data must be non-negative")
    if abs(mesh.gamma - params.gamma) > 1e-12:
        raise ParameterError(
            f"mesh was graded for gamma = {mesh.gamma}, params carry {params.gamma}"
        )
    prop = HeatPropagator.shared(grid, config.eps_tail)
    gam = params.gamma
    tolb = 1e-9 * max(1.0, mesh.t_end)
    bset = list(mesh.boundaries)
    if record_times is None:
        records = set(bset[1:])
    else:
        records = set()
        for t in record_times:
            hits = [b for b in bset if abs(b - float(t)) <= tolb]
            if not hits:
                raise ParameterError(f"record time {t} is not a mesh boundary")
            records.add(hits[0])
    times_out = [0.0]
    snaps_out = [GridFunction(grid, u0.values)]
    u_left = np.array(u0.values, dtype=float)
    total_sweeps = 0
    worst_resid = 0.0
    for widx in range(mesh.window_count):
        a = mesh.boundaries[widx]
        b = mesh.boundaries[widx + 1]
        sig = mesh.window_nodes[widx]
        targets = np.append(sig, b)
        free = [prop.apply_heat_values(u_left, tau - a) for tau in targets]
        rules = [duhamel_rule(a, tau, gam, mesh.nodes_per_window) for tau in targets]
        state = [f.copy() for f in free]
        knots = np.concatenate(([a], targets))
        converged = False
        resid = math.inf
        for _ in range(config.max_picard_sweeps):
            stack = [u_left] + state
            new_state = []
            for i, tau in enumerate(targets):
                sigs, wts = rules[i]
                acc = free[i].copy()
                for s_val, w_val in zip(sigs, wts):
                    f_at = positive_part(_interp_stack(knots, stack, s_val))
                    acc += w_val * prop.apply_weighted_values(
                        nonlinearity(f_at), tau - s_val, gam
                    )
                new_state.append(acc)
            resid = max(
                float(np.max(np.abs(nv - ov))) for nv, ov in zip(new_state, state)
            )
            state = new_state
            total_sweeps += 1
            if resid <= config.eps_fp:
                converged = True
                break
        if not converged:
            raise ConvergenceError(
                f"Picard window [{a:.6g}, {b:.6g}] stalled at residual {resid:.3g} "
                f"after {config.max_picard_sweeps} sweeps (eps_fp = {config.eps_fp})"
            )
        worst_resid = max(worst_resid, resid)
        u_left = state[-1]
        if b in records:
            times_out.append(b)
            snaps_out.append(GridFunction(grid, u_left))
    diag = {
        "windows": mesh.window_count,
        "total_sweeps": total_sweeps,
        "max_residual": worst_resid,
        "nonlinearity": nonlinearity.kind,
        "n": nonlinearity.n,
    }
    return Trajectory(
        grid=grid,
        params=params,
        times=tuple(times_out),
        snapshots=tuple(snaps_out),
        diagnostics=diag,
    )


def monotone_solve(
    u0: GridFunction,
    params: Params,
    t_end: float,
    config: SolveConfig = SolveConfig(),
    record_times: "Sequence[float] | None" = None,
    keep_history: bool = False,
) -> Trajectory:
    """Run the regularized scheme along the n-schedule and return the last run.

    For each n the data is shifted up by 1/n and the source replaced by g_n;
    successive runs must decrease pointwise at every recorded time, up to a
    fixed 1e-8 rounding slack (violation raises ConvergenceError).  The
    diagnostics carry the inter-level sup gaps; with keep_history=True the
    per-level snapshot arrays are attached (not serialized) so callers can
    inspect the whole ladder.
    """
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise ParameterError(f"t_end must be positive (got {t_end})")
    records = tuple(float(t) for t in (record_times if record_times else (t_end,)))
    e1 = constants.eta1(params.gamma, params.n_dim)
    prev_snaps: "list[np.ndarray] | None" = None
    last_traj: "Trajectory | None" = None
    gaps: list[float] = []
    worst_violation = 0.0
    history: list[tuple[int, tuple[np.ndarray, ...]]] = []
    for n in config.n_schedule:
        nl = Nonlinearity.regularized(params.q, n)
        w_len = min(
            config.window_cap,
            contraction_window(params.gamma, nl.lipschitz, e1, config.contraction_theta),
        )
        mesh = TimeMesh.build(
            t_end,
            params.gamma,
            w_len,
            nodes_per_window=config.nodes_per_window,
            must_include=records,
        )
        shifted = GridFunction(u0.grid, u0.values + 1.0 / n)
        traj = picard_solve(shifted, nl, params, mesh, config, record_times=records)
        cur_snaps = [s.values for s in traj.snapshots]
        if prev_snaps is not None:
            viol = max(
                float(np.max(cur - prev)) for cur, prev in zip(cur_snaps, prev_snaps)
            )
            worst_violation = max(worst_violation, viol)
            if viol > 1e-8:
                raise ConvergenceError(
                    f"regularized solutions failed to decrease between levels "
                    f"(n = {n}): worst pointwise increase {viol:.3g} > 1e-8"
                )
            gaps.append(
                max(float(np.max(np.abs(prev - cur))) for cur, prev in zip(cur_snaps, prev_snaps))
            )
        if keep_history:
            history.append((n, tuple(cur_snaps)))
        prev_snaps = cur_snaps
        last_traj = traj
        if gaps and gaps[-1] < config.eps_fp:
            break
    assert last_traj is not None
    last_traj.diagnostics.update(
        {
            "n_used": [n for n, *_ in history] if history else list(
                config.n_schedule[: len(gaps) + 1]
            ),
            "inter_level_gaps": gaps,
            "monotone_violation": worst_violation,
        }
    )
    if keep_history:
        last_traj.diagnostics["history"] = history
    return last_traj
