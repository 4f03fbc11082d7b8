"""Separated point sets: greedy sphere nets and farthest-first subsets.

A rho-net here is a maximal rho-separated subset of the candidate pool (axis
points plus uniform random sphere points), so separation is certified by
construction while maximality with respect to the whole sphere is only
approximate; the covering radius is estimated on a fresh probe sample and a
warning flag is raised when the estimate exceeds rho.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from dmlab.seeding import child_seed


@dataclass(frozen=True, eq=False)
class SphereNet:
    dim: int
    rho: float
    points: np.ndarray              # (size, dim), unit rows
    separation_certified: bool
    covering_radius_estimate: float
    covering_warning: bool          # estimate exceeded rho

    @property
    def size(self) -> int:
        return self.points.shape[0]


def build_sphere_net(
    dim: int,
    rho: float,
    candidate_budget: int,
    seed: int,
    probe_budget: int = 8192,
) -> SphereNet:
    """Greedy packing over axis seeds plus `candidate_budget` random points.

    A candidate is accepted iff it is at least rho from every earlier accept,
    tested via inner products (dist >= rho iff <x,y> <= 1 - rho^2/2).  The
    accepted set is deterministic in (dim, rho, candidate_budget, seed).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if not 0.0 < rho <= 2.0:
        raise ValueError("rho must be in (0, 2]")
    if candidate_budget < 1:
        raise ValueError("candidate_budget must be >= 1")

    rng = np.random.default_rng(child_seed(seed, 0))
    axes = np.zeros((2 * dim, dim))
    for i in range(dim):
        axes[2 * i, i] = 1.0
        axes[2 * i + 1, i] = -1.0
    rand = rng.standard_normal((candidate_budget, dim))
    norms = np.linalg.norm(rand, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    rand /= norms
    candidates = np.concatenate([axes, rand], axis=0)

    dot_cap = 1.0 - rho * rho / 2.0
    accepted = np.empty_like(candidates)
    count = 0
    for c in candidates:
        if count == 0 or (accepted[:count] @ c).max() <= dot_cap:
            accepted[count] = c
            count += 1
    points = accepted[:count].copy()

    # Volumetric bound holds for any rho-separated subset of the sphere.
    assert math.log(count) <= dim * math.log(5.0 / rho) + 1e-9, \
        "packing exceeded the volumetric bound"

    probe_rng = np.random.default_rng(child_seed(seed, 1))
    probes = probe_rng.standard_normal((probe_budget, dim))
    pn = np.linalg.norm(probes, axis=1, keepdims=True)
    pn[pn == 0.0] = 1.0
    probes /= pn
    best_dot = (probes @ points.T).max(axis=1)
    covering = float(np.sqrt(np.maximum(0.0, 2.0 - 2.0 * best_dot)).max())

    warn = covering > rho
    if warn:
        warnings.warn(
            f"net covering radius estimate {covering:.4f} exceeds rho={rho}; "
            "increase candidate_budget", stacklevel=2)
    return SphereNet(dim=dim, rho=rho, points=points, separation_certified=True,
                     covering_radius_estimate=covering, covering_warning=warn)


def pajor_subset(points, epsilon: float, max_size: int) -> np.ndarray:
    """Farthest-first subset that preserves most of the gaussian supremum.

    The traversal first exhausts the maximal epsilon-separated core (every
    new point is the farthest from the current selection, accepted while its
    distance is >= epsilon), then keeps extending in the same farthest-first
    order until `max_size` points or all distinct points are selected.  Exact
    duplicates are never selected.  Returned in selection order; prefixes are
    nested across max_size values.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0:
        raise ValueError("points must be nonempty")

    selected = [0]
    dmin = np.linalg.norm(P - P[0], axis=1)
    while len(selected) < max_size:
        i = int(np.argmax(dmin))
        if dmin[i] <= 0.0:
            break  # only duplicates of selected points remain
        selected.append(i)
        dmin = np.minimum(dmin, np.linalg.norm(P - P[i], axis=1))
    return P[np.array(selected)]
