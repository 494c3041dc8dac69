"""Generate the first K non-trivial zeta-zero ordinates with mpmath.

Zeros are bracketed by sign changes of a Riemann-Siegel (C0) approximation of
Hardy's Z function on a fine grid, then polished with mpmath.siegelz. The
low zeros are taken from mpmath.zetazero directly, and the total count is
checked against mpmath.zetazero(K).

usage: python3 scripts/gen_zeros.py 10000 > crates/core/data/zeros_10k.txt
"""
import sys

import mpmath
import numpy as np

mpmath.mp.dps = 20
LOW = 100
STEP = 0.004


def theta(t):
    return t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8 + 1 / (48 * t) + 7 / (5760 * t**3)


def z_c0(t):
    a = np.sqrt(t / (2 * np.pi))
    n_terms = np.floor(a).astype(int)
    p = a - n_terms
    th = theta(t)
    acc = np.zeros_like(t)
    for n in range(1, int(n_terms.max()) + 1):
        mask = n <= n_terms
        acc += np.where(mask, np.cos(th - t * np.log(n)) / np.sqrt(n), 0.0)
    c = np.cos(2 * np.pi * p)
    c = np.where(np.abs(c) < 1e-9, 1e-9, c)
    psi = np.cos(2 * np.pi * (p * p - p - 1 / 16)) / c
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
    return 2 * acc + sign * (2 * np.pi / t) ** 0.25 * psi


def main():
    k = int(sys.argv[1])
    zeros = [mpmath.zetazero(n).imag for n in range(1, LOW + 1)]
    top = float(mpmath.zetazero(k).imag)
    lo = float(zeros[-1]) + 0.05
    hi = top + 0.05
    grid = np.arange(lo, hi, STEP)
    vals = np.concatenate([z_c0(chunk) for chunk in np.array_split(grid, max(1, len(grid) // 200000))])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    for i in idx:
        a, b = grid[i], grid[i + 1]
        guess = (a * abs(vals[i + 1]) + b * abs(vals[i])) / (abs(vals[i]) + abs(vals[i + 1]))
        try:
            r = mpmath.findroot(mpmath.siegelz, (guess - 1e-4, guess + 1e-4))
        except ValueError:
            r = None
        if r is None or not (a - STEP <= r <= b + STEP):
            r = mpmath.findroot(mpmath.siegelz, (a - STEP, b + STEP), solver="anderson")
        zeros.append(r)
        if len(zeros) % 500 == 0:
            print(len(zeros), file=sys.stderr, flush=True)
    if len(zeros) != k:
        raise SystemExit(f"found {len(zeros)} zeros, expected {k}")
    if abs(zeros[-1] - top) > 1e-8:
        raise SystemExit(f"last zero {zeros[-1]} != zetazero({k}) = {top}")
    for a, b in zip(zeros, zeros[1:]):
        assert b > a
    for n, g in enumerate(zeros, 1):
        print(f"{n} {mpmath.nstr(g, 18, min_fixed=-1, max_fixed=30)}")


if __name__ == "__main__":
    main()
