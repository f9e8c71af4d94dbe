"""Numeric verification of the reduced shallow-water submodel.

The two-step reduction of the shallow-water equations by the pair
(translation in x, x-boost) and then by the time projective combination
leaves one implicit first-order ODE.  With lam = y/sqrt(t^2+1) and
V = d(lam)/d(mu), the chain is

    V^3 cos(mu) + (lam^2 - b0) V cos(mu) + 2 m = 0     (implicit ODE)
    K = -tan(mu),   H = m / (V cos(mu))                (first integrals)
    V^2 + lam^2 + 2 H = b0                             (Bernoulli form)

and the physical fields are reconstructed as

    u = k x + U,  k = (K + t)/(t^2+1),  U = g(mu - arctan t)/(cos(mu) sqrt(t^2+1)),
    v = (V + t lam)/sqrt(t^2+1),  h = H/(t^2+1).

The coefficients 2m and 2H are forced by the reduced system
VV' + H' = -lam, VK' + K^2 + 1 = 0, VH' + HV' = -KH: integrating the first
equation gives the Bernoulli form above, and eliminating H through the
first integral gives the cubic.  The end-to-end check is the
finite-difference residual of the original PDE system on the reconstructed
fields, which is truncation-dominated only for this consistent chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "SubmodelError",
    "NoRealRootError",
    "BranchCollisionError",
    "GridRangeError",
    "SubmodelParams",
    "Trajectory",
    "FieldSampler",
    "ResidualReport",
    "VerificationReport",
    "DEFAULT_TOLERANCES",
    "preset",
    "preset_names",
    "solve_lambda_prime",
    "integrate_submodel",
    "reconstruct_fields",
    "pde_residual",
    "verify",
]


class SubmodelError(ValueError):
    pass


class NoRealRootError(SubmodelError):
    pass


class BranchCollisionError(SubmodelError):
    pass


class GridRangeError(SubmodelError):
    pass


@dataclass(frozen=True)
class SubmodelParams:
    name: str
    b0: float
    m_const: float
    lam0: float
    mu0: float
    v0: float  # selects the root branch at the first node
    step: float
    mu_end: float
    g: Callable[[float], float]
    g_label: str
    grid_t: tuple
    grid_x: tuple
    grid_y: tuple

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "b0": self.b0,
            "m": self.m_const,
            "lam0": self.lam0,
            "mu0": self.mu0,
            "v0": self.v0,
            "step": self.step,
            "mu_end": self.mu_end,
            "g": self.g_label,
            "grid_t": list(self.grid_t),
            "grid_x": list(self.grid_x),
            "grid_y": list(self.grid_y),
        }


def _g_default(s: float) -> float:
    return math.sin(s) / 20.0


def _g_zero(s: float) -> float:
    return 0.0


_PRESETS = {
    # branch root near V = 1.26 at the initial node; run stops well before
    # the root collision that occurs past lam ~ 1.1
    "default": SubmodelParams(
        name="default",
        b0=2.0,
        m_const=0.1,
        lam0=0.5,
        mu0=0.1,
        v0=1.0,
        step=1e-3,
        mu_end=0.45,
        g=_g_default,
        g_label="sin(s)/20",
        grid_t=(0.1, 0.1667, 0.2333, 0.3),
        grid_x=(-0.4, 0.0, 0.4),
        grid_y=(0.56, 0.6533, 0.7467, 0.84),
    ),
    # m = 0 factors the cubic; the nonzero branch has the exact solution
    # lam = sqrt(b0) * sin(mu), V = sqrt(b0) * cos(mu), H = 0
    "degenerate": SubmodelParams(
        name="degenerate",
        b0=1.0,
        m_const=0.0,
        lam0=0.0,
        mu0=0.0,
        v0=1.0,
        step=1e-3,
        mu_end=0.8,
        g=_g_zero,
        g_label="0",
        grid_t=(0.1, 0.2, 0.3),
        grid_x=(-0.4, 0.0, 0.4),
        grid_y=(0.12, 0.36, 0.6),
    ),
}


def preset_names() -> tuple:
    return tuple(_PRESETS)


def preset(name: str) -> SubmodelParams:
    try:
        return _PRESETS[name]
    except KeyError:
        raise SubmodelError(
            f"unknown preset {name!r}; have {', '.join(_PRESETS)}"
        ) from None


_COLLISION_DF = 1e-8


def _cubic(lam: float, mu: float, params: SubmodelParams):
    """f(V) and f'(V) coefficient closures of the implicit ODE cubic."""
    c = math.cos(mu)
    p = (lam * lam - params.b0) * c
    q = 2.0 * params.m_const

    def f(v: float) -> float:
        return v * v * v * c + p * v + q

    def df(v: float) -> float:
        return 3.0 * v * v * c + p

    return f, df, c


def solve_lambda_prime(
    lam: float, mu: float, params: SubmodelParams, ref: float | None = None
) -> float:
    """Real root of the implicit ODE cubic, chosen by branch continuity.

    ref is the previous value of lambda' (the preset's v0 at the first
    call); the root nearest to it is polished by Newton iteration.  A root
    where the derivative of the cubic nearly vanishes means two branches
    are colliding and integration cannot continue through it.
    """
    f, df, c = _cubic(lam, mu, params)
    if abs(c) < 1e-12:
        raise SubmodelError(f"cos(mu) vanishes at mu={mu!r}")
    if ref is None:
        ref = params.v0
    # Newton from the reference is enough once a branch is established;
    # fall back to the full root set when it strays or stalls.
    v = ref
    ok = False
    for _ in range(40):
        d = df(v)
        if abs(d) < _COLLISION_DF:
            break
        step = f(v) / d
        v -= step
        if abs(step) < 1e-14 * max(1.0, abs(v)):
            ok = True
            break
    if not ok or abs(v - ref) > 0.5 * max(1.0, abs(ref)):
        roots = np.roots([c, 0.0, (lam * lam - params.b0) * c, 2.0 * params.m_const])
        real = [r.real for r in roots if abs(r.imag) < 1e-9 * max(1.0, abs(r))]
        if not real:
            raise NoRealRootError(
                f"no real root of the implicit ODE at lam={lam!r}, mu={mu!r}"
            )
        v = min(real, key=lambda r: abs(r - ref))
        for _ in range(60):
            d = df(v)
            if abs(d) < _COLLISION_DF:
                break
            step = f(v) / d
            v -= step
            if abs(step) < 1e-14 * max(1.0, abs(v)):
                break
    if abs(df(v)) < _COLLISION_DF:
        raise BranchCollisionError(
            f"root branches collide at lam={lam!r}, mu={mu!r}"
        )
    if abs(f(v)) > 1e-9:
        raise NoRealRootError(
            f"failed to locate a root of the implicit ODE at lam={lam!r}, mu={mu!r}"
        )
    return v


@dataclass(frozen=True)
class Trajectory:
    params: SubmodelParams
    mu: np.ndarray
    lam: np.ndarray
    v: np.ndarray
    h: np.ndarray
    k: np.ndarray
    terminated: str | None = None

    @property
    def nodes(self) -> int:
        return len(self.mu)

    def diagnostics(self) -> dict:
        """Conservation and consistency measures along the run."""
        p = self.params
        cosmu = np.cos(self.mu)
        bern = self.v**2 + self.lam**2 + 2.0 * self.h - p.b0
        first = self.h * self.v * cosmu - p.m_const
        kid = self.k + np.tan(self.mu)
        out = {
            "bernoulli_drift": float(np.max(np.abs(bern))),
            "first_integral": float(np.max(np.abs(first))),
            "k_identity": float(np.max(np.abs(kid))),
        }
        if self.nodes >= 3:
            # centered differences along the run check the reduced ODEs
            # VV' + H' = -lam and VH' + HV' = -KH independently
            dlam = self.lam[2:] - self.lam[:-2]
            dv = (self.v[2:] - self.v[:-2]) / dlam
            dh = (self.h[2:] - self.h[:-2]) / dlam
            vmid = self.v[1:-1]
            hmid = self.h[1:-1]
            kmid = self.k[1:-1]
            lmid = self.lam[1:-1]
            out["ode_momentum"] = float(np.max(np.abs(vmid * dv + dh + lmid)))
            out["ode_mass"] = float(np.max(np.abs(vmid * dh + hmid * dv + kmid * hmid)))
        return out

    def as_dict(self) -> dict:
        d = {
            "nodes": self.nodes,
            "mu_range": [float(self.mu[0]), float(self.mu[-1])],
            "lam_range": [float(self.lam[0]), float(self.lam[-1])],
            "terminated": self.terminated,
        }
        d.update({k: float(v) for k, v in self.diagnostics().items()})
        return d


def integrate_submodel(params: SubmodelParams, step: float | None = None) -> Trajectory:
    """March d(lam)/d(mu) = lambda'(lam, mu) with the classical RK4 scheme.

    H comes from the first integral H = m/(V cos mu) and K = -tan(mu); the
    reduced ODEs they must satisfy are checked separately in diagnostics.
    Branch collisions or root loss truncate the run instead of raising.
    """
    h = params.step if step is None else step
    if h <= 0:
        raise SubmodelError("step must be positive")
    mus = [params.mu0]
    lams = [params.lam0]
    vref = solve_lambda_prime(params.lam0, params.mu0, params, ref=params.v0)
    vs = [vref]
    terminated = None
    mu = params.mu0
    lam = params.lam0
    nsteps = int(round((params.mu_end - params.mu0) / h))
    try:
        for _ in range(nsteps):
            k1 = solve_lambda_prime(lam, mu, params, ref=vref)
            k2 = solve_lambda_prime(lam + 0.5 * h * k1, mu + 0.5 * h, params, ref=k1)
            k3 = solve_lambda_prime(lam + 0.5 * h * k2, mu + 0.5 * h, params, ref=k2)
            k4 = solve_lambda_prime(lam + h * k3, mu + h, params, ref=k3)
            lam = lam + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            mu = mu + h
            vref = solve_lambda_prime(lam, mu, params, ref=k4)
            mus.append(mu)
            lams.append(lam)
            vs.append(vref)
    except (BranchCollisionError, NoRealRootError, SubmodelError) as exc:
        terminated = str(exc)
    mu_arr = np.array(mus)
    lam_arr = np.array(lams)
    v_arr = np.array(vs)
    cosmu = np.cos(mu_arr)
    if params.m_const == 0.0:
        h_arr = np.zeros_like(mu_arr)
    else:
        h_arr = params.m_const / (v_arr * cosmu)
    k_arr = -np.tan(mu_arr)
    return Trajectory(
        params=params,
        mu=mu_arr,
        lam=lam_arr,
        v=v_arr,
        h=h_arr,
        k=k_arr,
        terminated=terminated,
    )


class FieldSampler:
    """Pointwise (u, v, h) evaluation of the reconstructed solution.

    The mu(lam) inversion uses a monotone cubic interpolant of the stored
    trajectory as a seed and then re-integrates d(mu)/d(lam) = 1/V from the
    nearest trajectory node, so samples are smooth enough for clean
    finite-difference residuals.  k_offset shifts the invariant K, which is
    only useful for sensitivity controls (a correct solution has offset 0).
    """

    def __init__(self, traj: Trajectory, params: SubmodelParams | None = None, k_offset: float = 0.0):
        self.traj = traj
        self.params = params or traj.params
        self.k_offset = k_offset
        lam = traj.lam
        dl = np.diff(lam)
        if len(lam) < 2 or not (np.all(dl > 0) or np.all(dl < 0)):
            raise SubmodelError(
                "trajectory lam values are not strictly monotone; cannot invert"
            )
        self._sign = 1.0 if lam[1] > lam[0] else -1.0
        self._lam_sorted = lam if self._sign > 0 else lam[::-1]
        self._mu_sorted = traj.mu if self._sign > 0 else traj.mu[::-1]
        self._v_sorted = traj.v if self._sign > 0 else traj.v[::-1]
        self._seed = PchipInterpolator(self._lam_sorted, self._mu_sorted)

    @property
    def lam_range(self) -> tuple:
        return (float(self._lam_sorted[0]), float(self._lam_sorted[-1]))

    def mu_v_of_lam(self, lam: float) -> tuple:
        lo, hi = self.lam_range
        if not (lo <= lam <= hi):
            raise GridRangeError(
                f"lam={lam!r} outside the trajectory range [{lo}, {hi}]"
            )
        idx = int(np.searchsorted(self._lam_sorted, lam))
        idx = min(max(idx, 0), len(self._lam_sorted) - 1)
        if idx > 0 and abs(self._lam_sorted[idx - 1] - lam) < abs(
            self._lam_sorted[idx] - lam
        ):
            idx -= 1
        lam_n = float(self._lam_sorted[idx])
        mu_n = float(self._mu_sorted[idx])
        v_n = float(self._v_sorted[idx])
        dlam = lam - lam_n
        if dlam == 0.0:
            return mu_n, v_n
        nsub = max(2, int(abs(dlam) / (0.5 * self.params.step * max(abs(v_n), 1e-6))) + 1)
        hstep = dlam / nsub
        mu = mu_n
        cur = lam_n
        vref = v_n
        p = self.params
        for _ in range(nsub):
            v1 = solve_lambda_prime(cur, mu, p, ref=vref)
            v2 = solve_lambda_prime(cur + 0.5 * hstep, mu + 0.5 * hstep / v1, p, ref=v1)
            v3 = solve_lambda_prime(cur + 0.5 * hstep, mu + 0.5 * hstep / v2, p, ref=v2)
            v4 = solve_lambda_prime(cur + hstep, mu + hstep / v3, p, ref=v3)
            mu += hstep * (1.0 / v1 + 2.0 / v2 + 2.0 / v3 + 1.0 / v4) / 6.0
            cur += hstep
            vref = v4
        v_final = solve_lambda_prime(lam, mu, p, ref=vref)
        return mu, v_final

    def seed_mu(self, lam: float) -> float:
        """Interpolated inversion without refinement (cross-check path)."""
        return float(self._seed(lam))

    def invariants_at(self, t: float, y: float) -> dict:
        """The reduced quantities at a physical point (x plays no role)."""
        p = self.params
        root = math.sqrt(t * t + 1.0)
        lam = y / root
        mu, V = self.mu_v_of_lam(lam)
        cosmu = math.cos(mu)
        K = -math.tan(mu)
        H = 0.0 if p.m_const == 0.0 else p.m_const / (V * cosmu)
        return {"lam": lam, "mu": mu, "V": V, "H": H, "K": K}

    def sample(self, t: float, x: float, y: float) -> tuple:
        p = self.params
        root = math.sqrt(t * t + 1.0)
        lam = y / root
        mu, V = self.mu_v_of_lam(lam)
        cosmu = math.cos(mu)
        K = -math.tan(mu) + self.k_offset
        if p.m_const == 0.0:
            H = 0.0
        else:
            H = p.m_const / (V * cosmu)
        U = p.g(mu - math.atan(t)) / (cosmu * root)
        k = (K + t) / (t * t + 1.0)
        u = k * x + U
        v = (V + t * lam) / root
        h = H / (t * t + 1.0)
        return u, v, h


def reconstruct_fields(traj: Trajectory, params: SubmodelParams | None = None, grid=None):
    """Rows (t, x, y, u, v, h) over the cartesian grid, or the preset grid."""
    p = params or traj.params
    sampler = FieldSampler(traj, p)
    if grid is None:
        grid = (p.grid_t, p.grid_x, p.grid_y)
    ts, xs, ys = grid
    rows = []
    for t in ts:
        for x in xs:
            for y in ys:
                u, v, h = sampler.sample(float(t), float(x), float(y))
                rows.append((float(t), float(x), float(y), u, v, h))
    return np.array(rows)


@dataclass(frozen=True)
class ResidualReport:
    h_fd: float
    points: int
    eq_momentum_x: float
    eq_momentum_y: float
    eq_mass: float
    k_offset: float = 0.0

    @property
    def max_residual(self) -> float:
        return max(self.eq_momentum_x, self.eq_momentum_y, self.eq_mass)

    def as_dict(self) -> dict:
        return {
            "h_fd": self.h_fd,
            "points": self.points,
            "eq_momentum_x": self.eq_momentum_x,
            "eq_momentum_y": self.eq_momentum_y,
            "eq_mass": self.eq_mass,
            "max_residual": self.max_residual,
            "k_offset": self.k_offset,
        }


def pde_residual(sampler: FieldSampler, grid=None, h_fd: float = 1e-4) -> ResidualReport:
    """Central-difference residuals of the original system on the samples.

    Checks u_t + u u_x + v u_y + h_x, v_t + u v_x + v v_y + h_y and
    h_t + (u h)_x + (v h)_y at every grid point; each point needs the three
    fields at the six neighbours, so the grid must keep lam(t, y) inside
    the trajectory range with an h_fd margin.
    """
    p = sampler.params
    if grid is None:
        grid = (p.grid_t, p.grid_x, p.grid_y)
    ts, xs, ys = grid
    r1 = r2 = r3 = 0.0
    count = 0
    for t in ts:
        for x in xs:
            for y in ys:
                t = float(t)
                x = float(x)
                y = float(y)
                u0, v0, h0 = sampler.sample(t, x, y)
                ut_p = sampler.sample(t + h_fd, x, y)
                ut_m = sampler.sample(t - h_fd, x, y)
                ux_p = sampler.sample(t, x + h_fd, y)
                ux_m = sampler.sample(t, x - h_fd, y)
                uy_p = sampler.sample(t, x, y + h_fd)
                uy_m = sampler.sample(t, x, y - h_fd)
                u_t, v_t, h_t = [(a - b) / (2 * h_fd) for a, b in zip(ut_p, ut_m)]
                u_x, v_x, h_x = [(a - b) / (2 * h_fd) for a, b in zip(ux_p, ux_m)]
                u_y, v_y, h_y = [(a - b) / (2 * h_fd) for a, b in zip(uy_p, uy_m)]
                e1 = u_t + u0 * u_x + v0 * u_y + h_x
                e2 = v_t + u0 * v_x + v0 * v_y + h_y
                e3 = h_t + u_x * h0 + u0 * h_x + v_y * h0 + v0 * h_y
                r1 = max(r1, abs(e1))
                r2 = max(r2, abs(e2))
                r3 = max(r3, abs(e3))
                count += 1
    return ResidualReport(
        h_fd=h_fd,
        points=count,
        eq_momentum_x=r1,
        eq_momentum_y=r2,
        eq_mass=r3,
        k_offset=sampler.k_offset,
    )


DEFAULT_TOLERANCES = {
    "bernoulli_drift": 1e-8,
    "first_integral": 1e-10,
    "k_identity": 1e-12,
    "pde_residual": 1e-5,
    "convergence_ratio_low": 3.2,
    "convergence_ratio_high": 4.8,
}


@dataclass(frozen=True)
class VerificationReport:
    params: SubmodelParams
    trajectory: Trajectory
    checks: dict
    residual: ResidualReport
    residual_half: ResidualReport
    step_halving_error: float
    tolerances: dict

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def as_dict(self) -> dict:
        return {
            "preset": self.params.name,
            "params": self.params.as_dict(),
            "trajectory": self.trajectory.as_dict(),
            "step_halving_error": self.step_halving_error,
            "residual": self.residual.as_dict(),
            "residual_half_spacing": self.residual_half.as_dict(),
            "tolerances": dict(self.tolerances),
            "checks": {k: dict(v) for k, v in self.checks.items()},
            "ok": self.ok,
        }


def verify(
    preset_name: str = "default",
    h_fd: float = 1e-4,
    tolerances: dict | None = None,
) -> VerificationReport:
    """Full pipeline: integrate, conserve, reconstruct, residual-check.

    The convergence check compares residuals at h_fd and h_fd/2; a clean
    second-order scheme gives a ratio near 4.
    """
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)
    p = preset(preset_name)
    traj = integrate_submodel(p)
    if traj.terminated is not None:
        raise SubmodelError(f"trajectory terminated early: {traj.terminated}")
    half = integrate_submodel(p, step=p.step / 2)
    diag = traj.diagnostics()
    diag_half = half.diagnostics()
    # shared nodes of the two runs: every node of the coarse run
    halving = float(np.max(np.abs(traj.lam - half.lam[::2])))
    sampler = FieldSampler(traj, p)
    res = pde_residual(sampler, h_fd=h_fd)
    res_half = pde_residual(sampler, h_fd=h_fd / 2)
    ratio = res.max_residual / res_half.max_residual if res_half.max_residual else float("inf")
    checks = {
        "bernoulli_drift": {
            "value": diag["bernoulli_drift"],
            "tolerance": tol["bernoulli_drift"],
            "passed": diag["bernoulli_drift"] <= tol["bernoulli_drift"],
        },
        "bernoulli_drift_halfstep": {
            "value": diag_half["bernoulli_drift"],
            "tolerance": tol["bernoulli_drift"],
            "passed": diag_half["bernoulli_drift"] <= tol["bernoulli_drift"],
        },
        "first_integral": {
            "value": diag["first_integral"],
            "tolerance": tol["first_integral"],
            "passed": diag["first_integral"] <= tol["first_integral"],
        },
        "k_identity": {
            "value": diag["k_identity"],
            "tolerance": tol["k_identity"],
            "passed": diag["k_identity"] <= tol["k_identity"],
        },
        "pde_residual": {
            "value": res.max_residual,
            "tolerance": tol["pde_residual"],
            "passed": res.max_residual <= tol["pde_residual"],
        },
        "convergence_ratio": {
            "value": ratio,
            "tolerance": [tol["convergence_ratio_low"], tol["convergence_ratio_high"]],
            "passed": tol["convergence_ratio_low"] <= ratio <= tol["convergence_ratio_high"],
        },
    }
    return VerificationReport(
        params=p,
        trajectory=traj,
        checks=checks,
        residual=res,
        residual_half=res_half,
        step_halving_error=halving,
        tolerances=tol,
    )
