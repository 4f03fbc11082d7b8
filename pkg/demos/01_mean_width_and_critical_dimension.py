"""Mean widths and critical dimensions of the standard bodies.

The critical dimension dStar = (ell(K) / polar radius)^2 predicts how large a
random subspace can be while the body's norm still looks Euclidean on it.
This script evaluates ell(K) three ways (closed form, quadrature, Monte
Carlo), cross-checks them, and shows the hallmark growth dStar ~ log n for
the cube against dStar ~ n for the Euclidean ball.
"""

import math

import numpy as np

from dmlab import (
    LpBall,
    critical_dimension,
    diagonal_image,
    dual_norm_sup,
    mean_width,
    polar_polytope,
)

print("=== closed forms vs Monte Carlo ===")
for body, label in [(LpBall(2, 100), "B_2^100"), (LpBall(1, 100), "B_1^100")]:
    exact, _ = mean_width(body, "closedForm")
    est, err = mean_width(body, "monteCarlo", trials=20000, seed=0)
    print(f"ell({label}) closed form {exact:9.4f}   MC {est:9.4f} +- {err:.4f}")

print("\n=== cube: quadrature vs Monte Carlo ===")
for n in (100, 1000, 10000):
    quad, _ = mean_width(LpBall(math.inf, n), "quadrature")
    est, err = mean_width(LpBall(math.inf, n), "monteCarlo", trials=5000, seed=1)
    print(f"n={n:6d}  E max|g_i| = {quad:7.4f}  (MC {est:7.4f} +- {err:.4f},"
          f"  sqrt(2 ln n) = {math.sqrt(2 * math.log(n)):7.4f})")

print("\n=== critical dimensions ===")
print("Euclidean ball: dStar is essentially the ambient dimension")
for n in (32, 256, 2048):
    c = critical_dimension(LpBall(2, n), "closedForm")
    print(f"  n={n:5d}  dStar = {c.d_star:9.2f}")

print("cube: dStar grows only logarithmically")
ns = [100, 1000, 10000]
dstars = []
for n in ns:
    c = critical_dimension(LpBall(math.inf, n), "quadrature")
    dstars.append(c.d_star)
    print(f"  n={n:6d}  ell = {c.ell_k:7.4f}  polar radius = {c.dual_sup:.1f}"
          f"  dStar = {c.d_star:7.3f}")
slope = np.polyfit(np.log(ns), dstars, 1)[0]
print(f"  fitted slope of dStar against ln n: {slope:.3f}")

print("\ncross-polytope: dStar = 2n/pi, between the two extremes")
c = critical_dimension(LpBall(1, 512), "closedForm")
print(f"  n=512  dStar = {c.d_star:8.2f}   (2n/pi = {2 * 512 / math.pi:8.2f})")

print("\n=== other body families ===")
rng = np.random.default_rng(7)
poly = polar_polytope(rng.standard_normal((24, 64)))
c = critical_dimension(poly, "monteCarlo", trials=20000, seed=2)
print(f"random 48-vertex polytope polar in R^64: ell = {c.ell_k:.3f} "
      f"+- {c.ell_k_stderr:.3f}, dStar = {c.d_star:.2f}")

squash = diagonal_image(LpBall(2, 64), np.linspace(0.5, 2.0, 64))
c = critical_dimension(squash, "monteCarlo", trials=20000, seed=3)
print(f"squashed Euclidean ball in R^64:          ell = {c.ell_k:.3f} "
      f"+- {c.ell_k_stderr:.3f}, dStar = {c.d_star:.2f}")
print(f"  (polar radius {dual_norm_sup(squash):.3f} is set by the smallest scale)")
