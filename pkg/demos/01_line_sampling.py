"""Sampling on the real line: cardinal series, energy identity and jitter.

Run with ``python demos/01_line_sampling.py``.
"""

import numpy as np

from pwframes import band_interior_pw, build_fourier_model, evaluate
from pwframes.euclid1d import (
    exponential_frame_bounds,
    jittered_sample_points,
    parseval_check,
    regular_samples,
    shannon_reconstruct,
)

# A random function with band [-1/2, 1/2] whose transform is tapered to zero near the edges.
model = build_fourier_model(0.5, 257)
f = band_interior_pw(model, seed=0)
print(f"model: {model.size} band cells, Plancherel norm of f = {f.norm():.6f}")

# Integer samples carry the whole L2 energy; truncating the sum loses a tail that shrinks like 1/J.
for J in (500, 1000, 2000):
    r = parseval_check(f, J)
    print(f"  J={J:5d}  sample energy / norm = {r.ratio:.5f}")

# The truncated cardinal series rebuilds f between the samples.
x = np.linspace(-20, 20, 7)
approx = shannon_reconstruct(regular_samples(f, 2000), 0.5, x, 2000)
print("\ncardinal series vs direct synthesis")
for xi, a, b in zip(x, approx, evaluate(f, x)):
    print(f"  x={xi:6.2f}  series={a.real:+.6f}{a.imag:+.6f}i  exact={b.real:+.6f}{b.imag:+.6f}i")

# Jittered Nyquist points still give a frame while the jitter stays below a quarter step.
small = build_fourier_model(0.5, 16, kernel="exponential")
for delta in (0.0, 0.1, 0.2):
    pts = jittered_sample_points(0.5, 40, delta, seed=1).points
    A, B = exponential_frame_bounds(small, pts)
    print(f"jitter {delta:.1f}: frame bounds A={A:.3f}, B={B:.3f}")
