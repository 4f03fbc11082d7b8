"""Why a single sign-symmetric matrix fails on the cube.

A gaussian n x d matrix embeds the Euclidean ball into (R^n, ||.||_inf) with
distortion O(1) once d is a constant multiple of log n.  A matrix with iid
uniform [-1, 1] entries does not: along e_1 the image norm is at most 1,
while aligning the signs of x with the heaviest row pushes it to ~ sqrt(d)/2.
The witness ratio below grows like sqrt(d); the gaussian control stays flat.
"""

import math

import numpy as np

from dmlab import LpBall, adversarial_linf_witness, measure_distortion
from dmlab.ensembles import EnsembleSpec, sample_matrix

n = 1024
seeds = range(30)

print(f"single uniform matrix, n = {n}")
print(f"{'d':>4} {'median witness':>15} {'0.5*sqrt(d)':>12} {'phi(e1) median':>15}")
for d in (8, 16, 32, 64, 128):
    ratios, e1s = [], []
    for s in seeds:
        M = sample_matrix(EnsembleSpec("UniformPM1", n, d), 100 + s)
        w = adversarial_linf_witness(M)
        ratios.append(w.ratio)
        e1s.append(w.phi_e1)
    print(f"{d:>4} {np.median(ratios):>15.3f} {0.5 * math.sqrt(d):>12.3f} "
          f"{np.median(e1s):>15.3f}")

print("\ngaussian control: sup/inf distortion on the cube stays bounded")
body = LpBall(math.inf, n)
print(f"{'d':>4} {'median sup/inf':>15}")
for d in (8, 16, 32):
    rats = []
    for s in range(10):
        G = sample_matrix(EnsembleSpec("GaussianIID", n, d), 300 + s)
        rep = measure_distortion(body, G, "exactRowNorm", starts=32, seed=s)
        rats.append(rep.ratio)
    print(f"{d:>4} {np.median(rats):>15.3f}")

print("\nuniform matrix under the same estimators: the ratio tracks sqrt(d)")
for d in (8, 16, 32):
    rats = []
    for s in range(10):
        M = sample_matrix(EnsembleSpec("UniformPM1", n, d), 500 + s)
        rep = measure_distortion(body, M, "exactRowNorm", starts=32, seed=s)
        rats.append(rep.ratio)
    print(f"{d:>4} {np.median(rats):>15.3f}")
