"""Tour of the single-particle model: modes, boundary conditions, couplings.

Everything the dynamics needs comes from a handful of closed forms; this
script evaluates them and checks each one against an independent numerical
route (quadrature, boundary residuals).
"""

import numpy as np

from fermidce import (
    bag_condition_residual,
    coupling_element,
    coupling_quadrature,
    mode_frequency,
    mode_function,
)

print("=== mode spectrum (l = 1, v = 1) ===")
for n in range(-3, 3):
    print(f"  w_{n:+d} = {mode_frequency(n, 1.0, 1.0):+.6f}  "
          f"(= {(n + 0.5):+.1f} * pi)")

print("\n=== confining boundary condition ===")
print("max residual of exp(i theta g5) psi = i n_mu g^mu psi at both walls:")
for n in range(-2, 3):
    res = max(bag_condition_residual(n, 1.0, th) for th in (0.0, 0.7, 1.3))
    print(f"  mode {n:+d}: {res:.2e}")

print("\n=== orthonormality (Gauss-Legendre, 200 nodes) ===")
from numpy.polynomial.legendre import leggauss

nodes, weights = leggauss(200)
l = 1.0
x = 0.5 * l * (nodes + 1)
w = 0.5 * l * weights
for m, n in ((0, 0), (0, 1), (2, -1)):
    pm, pn = mode_function(m, x, l), mode_function(n, x, l)
    overlap = np.sum(w * np.sum(pm.conj() * pn, axis=0))
    print(f"  <psi_{m}|psi_{n}> = {overlap:+.2e}")

print("\n=== mode coupling: closed form vs quadrature ===")
print("K_mn = (-1)^(m-n) (m+n+1) / (2(m-n)), antisymmetric, zero diagonal")
worst = 0.0
for m in range(-4, 5):
    for n in range(-4, 5):
        worst = max(worst, abs(coupling_quadrature(m, n) - coupling_element(m, n)))
print(f"  max |closed - quadrature| over [-4,4]^2: {worst:.2e}")

print("\nsample rows of K (m down, n across, modes -2..2):")
for m in range(-2, 3):
    row = "  ".join(f"{coupling_element(m, n):+6.3f}" for n in range(-2, 3))
    print(f"  m={m:+d}:  {row}")
