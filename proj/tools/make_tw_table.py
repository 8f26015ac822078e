#!/usr/bin/env python3
"""Regenerates the Tracy-Widom GUE CDF fixture in core/src/tw_table.cpp.

Evaluates F2(s) = det(I - K_Ai) on L^2(s, inf) with a Gauss-Legendre
Nystrom discretization of the Airy kernel (Bornemann's method), on an
81-point grid over [-5, 3].
"""
import numpy as np
from scipy.special import airy
from numpy.polynomial.legendre import leggauss


def f2(s, m=300, span=24.0):
    t, w = leggauss(m)
    x = s + (t + 1) / 2 * span
    w = w * span / 2
    ai, aip, _, _ = airy(x)
    num = ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]
    den = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(np.abs(den) > 1e-12, num / np.where(np.abs(den) > 1e-12, den, 1.0), 0.0)
    np.fill_diagonal(k, aip**2 - x * ai**2)
    sw = np.sqrt(w)
    mtx = np.eye(m) - sw[:, None] * k * sw[None, :]
    sign, logdet = np.linalg.slogdet(mtx)
    return sign * np.exp(logdet)


def main():
    xs = np.linspace(-5.0, 3.0, 81)
    fs = np.array([f2(x) for x in xs])
    for x, f in zip(xs, fs):
        print(f"    {{{x:.1f}, {f:.12e}}},")


if __name__ == "__main__":
    main()
