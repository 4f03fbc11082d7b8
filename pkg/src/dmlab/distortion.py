"""Distortion of x -> ||Gamma x||_K over the unit sphere of R^d.

Four estimators, each labeled in the report so downstream comparisons never
mix certified and heuristic numbers:

  exactSpectral  LpBall(2, n) bodies; the extremes are the singular values.
  exactRowNorm   LpBall(inf, n) bodies; the supremum equals the largest row
                 norm of Gamma (sup_x max_i <row_i, x> = max_i ||row_i||_2).
                 The infimum comes from the optimizer.
  netCertified   evaluates the norm on a separated sphere net and applies the
                 convexity correction: with M = net max and slack
                 s = rho * M / (1 - rho), [net min - s, net max + s] brackets
                 the true [inf, sup].  True bounds, practical only for small d.
  multiStartOpt  projected subgradient ascent/descent from random plus axis
                 starts with per-start step halving; heuristic on both sides.

The cube witness reproduces the failure mode of a single sign-symmetric
matrix on the sup side: aligning signs with the heaviest row inflates
||M x||_inf to order sqrt(d) while the first coordinate direction stays O(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dmlab.bodies import ConvexBody, DiagonalImage, LpBall, PolarPolytope, mean_width_auto, norm_many
from dmlab.events import singular_extremes
from dmlab.nets import SphereNet
from dmlab.seeding import child_seed

_PHI_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class DistortionReport:
    sup_est: float
    inf_est: float
    sup_method: str
    inf_method: str
    ratio: float
    ell_k: float
    normalized_sup: float
    normalized_inf: float
    seed: int
    net_max: float | None = None
    net_min: float | None = None
    lipschitz_slack: float | None = None
    rho: float | None = None
    net_size: int | None = None
    starts: int | None = None
    warning: bool = False


def _pullback_subgradients(body: ConvexBody, P: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Rows of d/dx ||Gamma x||_K at points x with P = X @ Gamma^T."""
    if isinstance(body, LpBall):
        if math.isinf(body.p):
            idx = np.argmax(np.abs(P), axis=1)
            sgn = np.sign(P[np.arange(P.shape[0]), idx])
            sgn[sgn == 0.0] = 1.0
            return sgn[:, None] * gamma[idx, :]
        if body.p == 1.0:
            return np.sign(P) @ gamma
        norms = norm_many(body, P)
        safe = np.where(norms > 0.0, norms, 1.0)
        if body.p == 2.0:
            g_y = P / safe[:, None]
        else:
            g_y = np.sign(P) * (np.abs(P) / safe[:, None]) ** (body.p - 1.0)
        return g_y @ gamma
    if isinstance(body, PolarPolytope):
        idx = np.argmax(P @ body.dual_vertices.T, axis=1)
        return body.dual_vertices[idx] @ gamma
    if isinstance(body, DiagonalImage):
        return _pullback_subgradients(body.base, P / body.scales, gamma / body.scales[:, None])
    raise TypeError(f"unsupported body {type(body).__name__}")


def _multistart(body: ConvexBody, gamma: np.ndarray, starts: int, seed: int,
                mode: int, iters: int = 500) -> float:
    """Best value found by projected subgradient ascent (+1) or descent (-1)."""
    d = gamma.shape[1]
    rng = np.random.default_rng(seed)
    axes = np.concatenate([np.eye(d), -np.eye(d)], axis=0)
    rand = rng.standard_normal((starts, d))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    X = np.concatenate([axes, rand], axis=0)
    step = np.full(X.shape[0], 0.5)
    vals = norm_many(body, X @ gamma.T)
    for _ in range(iters):
        P = X @ gamma.T
        G = _pullback_subgradients(body, P, gamma)
        cand = X + mode * step[:, None] * G
        cn = np.linalg.norm(cand, axis=1, keepdims=True)
        cn[cn == 0.0] = 1.0
        cand /= cn
        cvals = norm_many(body, cand @ gamma.T)
        better = cvals > vals if mode > 0 else cvals < vals
        X[better] = cand[better]
        vals[better] = cvals[better]
        step[~better] *= 0.5
        if np.all(step < 1e-12):
            break
    return float(vals.max() if mode > 0 else vals.min())


def measure_distortion(
    body: ConvexBody,
    gamma,
    method: str,
    net: SphereNet | None = None,
    starts: int = 32,
    seed: int = 0,
    ell_k: float | None = None,
    opt_iters: int = 500,
) -> DistortionReport:
    """Sup/inf of the embedded norm over the sphere, normalized by ell(K)."""
    gamma = np.asarray(gamma, dtype=float)
    n, d = gamma.shape
    if body.n != n:
        raise ValueError(f"body dimension {body.n} does not match Gamma rows {n}")
    if ell_k is None:
        ell_k = mean_width_auto(body, seed=child_seed(seed, 7))[0]

    extras: dict = {}
    warning = False

    if method == "exactSpectral":
        if not (isinstance(body, LpBall) and body.p == 2.0):
            raise ValueError("exactSpectral requires an LpBall(2, n) body")
        # fixed iteration seed keeps the report bit-identical to a direct
        # singular_extremes call on the same matrix
        inf_est, sup_est = singular_extremes(gamma)
        sup_method = inf_method = "exactSpectral"

    elif method == "exactRowNorm":
        if not (isinstance(body, LpBall) and math.isinf(body.p)):
            raise ValueError("exactRowNorm requires an LpBall(inf, n) body")
        sup_est = float(np.linalg.norm(gamma, axis=1).max())
        sup_method = "exactRowNorm"
        inf_est = _multistart(body, gamma, starts, child_seed(seed, 1), mode=-1,
                              iters=opt_iters)
        inf_method = f"multiStartOpt({starts})"
        extras["starts"] = starts

    elif method == "netCertified":
        if net is None:
            raise ValueError("netCertified requires a sphere net")
        if net.dim != d:
            raise ValueError(f"net dimension {net.dim} does not match Gamma columns {d}")
        if net.covering_radius_estimate > net.rho:
            raise ValueError("net covering radius exceeds rho; certification unavailable")
        vals = norm_many(body, net.points @ gamma.T)
        net_max, net_min = float(vals.max()), float(vals.min())
        slack = net.rho * net_max / (1.0 - net.rho)
        sup_est = net_max + slack
        inf_est = net_min - slack
        assert sup_est >= net_max and inf_est <= net_min, "slack must widen the bracket"
        warning = inf_est <= 0.0
        tag = f"netCertified(rho={net.rho:g},size={net.size})"
        sup_method = inf_method = tag
        extras.update(net_max=net_max, net_min=net_min, lipschitz_slack=slack,
                      rho=net.rho, net_size=net.size)

    elif method == "multiStartOpt":
        sup_est = _multistart(body, gamma, starts, child_seed(seed, 0), mode=+1,
                              iters=opt_iters)
        inf_est = _multistart(body, gamma, starts, child_seed(seed, 1), mode=-1,
                              iters=opt_iters)
        sup_method = inf_method = f"multiStartOpt({starts})"
        extras["starts"] = starts

    else:
        raise ValueError(f"unknown distortion method {method!r}")

    ratio = sup_est / inf_est if inf_est > 0.0 else math.inf
    return DistortionReport(
        sup_est=sup_est, inf_est=inf_est, sup_method=sup_method, inf_method=inf_method,
        ratio=ratio, ell_k=ell_k, normalized_sup=sup_est / ell_k,
        normalized_inf=inf_est / ell_k, seed=seed, warning=warning, **extras,
    )


@dataclass(frozen=True, eq=False)
class WitnessReport:
    i_star: int
    eta: np.ndarray
    phi_witness: float
    phi_e1: float
    ratio: float


def adversarial_linf_witness(M) -> WitnessReport:
    """Sign-aligned direction that inflates ||M x||_inf versus the e_1 probe.

    i_star is the row of largest l1 mass; eta carries its signs (zeros map to
    +1); the witness value is ||M (eta/sqrt(d))||_inf against ||M e_1||_inf.
    """
    M = np.asarray(M, dtype=float)
    n, d = M.shape
    i_star = int(np.argmax(np.abs(M).sum(axis=1)))
    eta = np.where(M[i_star] >= 0.0, 1.0, -1.0)
    phi_w = float(np.abs(M @ (eta / math.sqrt(d))).max())
    phi_e1 = float(np.abs(M[:, 0]).max())
    if phi_e1 < _PHI_FLOOR:
        ratio = math.inf if phi_w > 0.0 else 0.0
    else:
        ratio = phi_w / phi_e1
    return WitnessReport(i_star=i_star, eta=eta, phi_witness=phi_w,
                         phi_e1=phi_e1, ratio=ratio)
