"""Gramian-based control energy: optimal inputs, bounds, and spectra."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import IllConditionedWarning, SingularGramian
from .exact import DenseSystem

_SINGULAR_ETA = 1e-12


@dataclass
class GramianResult:
    w: np.ndarray  # reachability Gramian W(T)
    h: np.ndarray  # normalized Gramian e^{-AT} W e^{-A^T T}
    eta: np.ndarray  # eigenvalues of H, ascending
    cond: float  # condition number of W

    @property
    def singular(self):
        # controllability is read off W; H's spectrum can span a huge but
        # legitimate dynamic range for strongly stable systems
        w_eig = np.linalg.eigvalsh(self.w)
        return w_eig[0] < _SINGULAR_ETA * max(1.0, w_eig[-1])


@dataclass
class ControlTrace:
    t: np.ndarray  # time grid, shape (n_steps + 1,)
    u: np.ndarray  # sampled input, shape (n_steps + 1, M)
    x: np.ndarray  # simulated state, shape (n_steps + 1, N)
    energy: float  # v_f^T W^{-1} v_f


def gramian(sys: DenseSystem, t_final: float) -> GramianResult:
    """Reachability Gramian W(T) = ∫_0^T e^{Aτ} B Bᵀ e^{Aᵀτ} dτ.

    Evaluated through the augmented matrix exponential
    exp([[-A, BBᵀ], [0, Aᵀ]] T): the integral equals F22ᵀ F12.
    """
    if t_final <= 0:
        raise ValueError("horizon must be positive")
    a, b = sys.a, sys.b
    n = sys.n
    # the augmented exponential contains e^{-At}, which loses accuracy for
    # stable A over long horizons; halve the step until ||A|| t is modest
    # and rebuild with W(2t) = W(t) + e^{At} W(t) e^{A^T t}
    norm_a = np.linalg.norm(a, 2)
    doublings = 0
    t_step = t_final
    while norm_a * t_step > 2.0:
        t_step *= 0.5
        doublings += 1
    m = np.zeros((2 * n, 2 * n))
    m[:n, :n] = -a
    m[:n, n:] = b @ b.T
    m[n:, n:] = a.T
    f = expm(m * t_step)
    w = f[n:, n:].T @ f[:n, n:]
    w = 0.5 * (w + w.T)
    e_step = expm(a * t_step)
    for _ in range(doublings):
        w = w + e_step @ w @ e_step.T
        w = 0.5 * (w + w.T)
        e_step = e_step @ e_step
    e_neg = expm(-a * t_final)
    h = e_neg @ w @ e_neg.T
    h = 0.5 * (h + h.T)
    eta = np.linalg.eigvalsh(h)
    cond = float(np.linalg.cond(w))
    if cond > 1e12:
        warnings.warn(
            f"Gramian condition number {cond:.3e} exceeds 1e12",
            IllConditionedWarning,
        )
    return GramianResult(w, h, eta, cond)


def min_energy_input(
    sys: DenseSystem,
    x_i,
    x_f,
    t_final: float,
    n_steps: int = 1000,
) -> ControlTrace:
    """Minimum-energy input u(t) = Bᵀ e^{Aᵀ(T-t)} W⁻¹ v_f steering x_i to
    x_f over [0, T], with the closed-loop trajectory simulated alongside.
    """
    x_i = np.asarray(x_i, dtype=float)
    x_f = np.asarray(x_f, dtype=float)
    if x_i.shape != (sys.n,) or x_f.shape != (sys.n,):
        raise ValueError("state dimension mismatch")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        gr = gramian(sys, t_final)
    w_eig = np.linalg.eigvalsh(gr.w)
    if w_eig[0] <= _SINGULAR_ETA * max(1.0, w_eig[-1]):
        raise SingularGramian(
            f"Gramian numerically singular (min eigenvalue {w_eig[0]:.3e})"
        )
    a, b = sys.a, sys.b
    v_f = x_f - expm(a * t_final) @ x_i
    alpha = np.linalg.solve(gr.w, v_f)
    energy = float(v_f @ alpha)

    def u_of(t):
        return b.T @ expm(a.T * (t_final - t)) @ alpha

    sol = solve_ivp(
        lambda t, x: a @ x + b @ u_of(t),
        (0.0, t_final),
        x_i,
        t_eval=np.linspace(0.0, t_final, n_steps + 1),
        rtol=1e-10,
        atol=1e-12,
    )
    t = sol.t
    u = np.array([u_of(tk) for tk in t])
    return ControlTrace(t, u, sol.y.T, energy)


def energy_bounds(sys: DenseSystem, t_final: float):
    """Rayleigh-Ritz bounds for unit-norm targets: E_min = 1/η_max and
    E_max = 1/η_min (inf when the Gramian is singular)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        gr = gramian(sys, t_final)
    e_min = 1.0 / gr.eta[-1]
    e_max = math.inf if gr.singular else 1.0 / gr.eta[0]
    return e_min, e_max


def energy_spectrum(sys: DenseSystem, t_final: float):
    """Eigen-direction energies 1/η_i of H(T) with their eigenvectors.

    Returns (energies ascending, eigenvectors as columns aligned with the
    energies)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        gr = gramian(sys, t_final)
    if gr.singular:
        raise SingularGramian("energy spectrum undefined for singular Gramian")
    eta, vec = np.linalg.eigh(gr.h)
    energies = 1.0 / eta[::-1]
    return energies, vec[:, ::-1]


def log_binned_density(samples, n_bins: int = 20):
    """Log-binned probability density of positive samples; returns
    (bin centers, densities) with empty bins dropped."""
    samples = np.asarray(samples, dtype=float)
    samples = samples[samples > 0]
    lo, hi = samples.min(), samples.max()
    edges = np.geomspace(lo, hi * (1 + 1e-12), n_bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    widths = np.diff(edges)
    centers = np.sqrt(edges[:-1] * edges[1:])
    dens = counts / (widths * samples.size)
    keep = counts > 0
    return centers[keep], dens[keep]


def trajectory_energy(trace: ControlTrace) -> float:
    """Trapezoidal quadrature of ∫ ||u(t)||² dt along a control trace."""
    return float(np.trapezoid((trace.u**2).sum(axis=1), trace.t))
