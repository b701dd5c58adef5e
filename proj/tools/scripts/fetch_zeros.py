#!/usr/bin/env python3
# Copyright 2026 The zrace Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Produce a plain-text table of zeta-zero ordinates, one per line.

First tries to download Odlyzko's published table. Without network access it
computes the ordinates: a vectorised Riemann-Siegel scan brackets every sign
change of Z(t), mpmath refines each bracket, and the count is checked against
mpmath.zetazero(n) at regular checkpoints so that no zero is skipped.

The first --hi-count ordinates are written with 30 decimals (they dominate
the high-order zero sums); the rest with 12.
"""
import argparse
import sys
import urllib.request

import mpmath
import numpy as np

ODLYZKO_URL = "https://www-users.cse.umn.edu/~odlyzko/zeta_tables/zeros1"


def try_download(count, timeout):
    try:
        with urllib.request.urlopen(ODLYZKO_URL, timeout=timeout) as resp:
            lines = resp.read().decode("ascii").split()
    except Exception as exc:  # noqa: BLE001
        print(f"download failed ({exc}); computing instead", file=sys.stderr)
        return None
    return [line.strip() for line in lines[:count]]


def theta(t):
    return (t / 2 * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8
            + 1 / (48 * t) + 7 / (5760 * t**3))


def z_rs(t):
    """Riemann-Siegel Z(t) with the leading remainder term, vectorised."""
    t = np.asarray(t, dtype=np.float64)
    a = np.sqrt(t / (2 * np.pi))
    n_terms = np.floor(a).astype(np.int64)
    p = a - n_terms
    th = theta(t)
    out = np.zeros_like(t)
    for n in range(1, int(n_terms.max()) + 1):
        mask = n_terms >= n
        out[mask] += np.cos(th[mask] - t[mask] * np.log(n)) / np.sqrt(n)
    out *= 2
    c0 = np.cos(2 * np.pi * (p * p - p - 1 / 16)) / np.cos(2 * np.pi * p)
    sign = np.where((n_terms - 1) % 2 == 0, 1.0, -1.0)
    out += sign * a ** -0.5 * c0
    return out


def brackets(t_max, step):
    grid = np.arange(10.0, t_max, step)
    chunks = []
    for start in range(0, grid.size, 200000):
        g = grid[start:start + 200001]
        z = z_rs(g)
        idx = np.nonzero(np.sign(z[:-1]) != np.sign(z[1:]))[0]
        chunks.extend((g[i], g[i + 1]) for i in idx)
    uniq = sorted(set(chunks))
    return uniq


def refine(a, b, dps):
    mpmath.mp.dps = dps
    root = mpmath.findroot(mpmath.siegelz, (mpmath.mpf(a), mpmath.mpf(b)),
                           solver="anderson", tol=mpmath.mpf(10) ** (-dps + 4))
    return root


def compute(count, hi_count, step):
    approx_max = float(mpmath.zetazero(count).imag) + 0.5
    br = brackets(approx_max, step)
    if len(br) < count:
        raise SystemExit(f"scan found only {len(br)} sign changes below {approx_max}")
    zeros = []
    for i, (a, b) in enumerate(br[:count]):
        dps = 40 if i < hi_count else 22
        zeros.append(refine(a, b, dps))
        if (i + 1) % 500 == 0:
            mpmath.mp.dps = 22
            ref = mpmath.zetazero(i + 1).imag
            if abs(ref - zeros[-1]) > mpmath.mpf("1e-9"):
                raise SystemExit(f"checkpoint {i + 1} mismatch: {zeros[-1]} vs {ref}")
            print(f"{i + 1} zeros verified", file=sys.stderr, flush=True)
    lines = []
    for i, z in enumerate(zeros):
        digits = 30 if i < hi_count else 12
        mpmath.mp.dps = 45
        lines.append(mpmath.nstr(z, len(str(int(z))) + digits, strip_zeros=False))
    return lines


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=10000)
    ap.add_argument("--hi-count", type=int, default=600)
    ap.add_argument("--step", type=float, default=0.02)
    ap.add_argument("--timeout", type=float, default=20.0)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    lines = try_download(args.count, args.timeout)
    if lines is None:
        lines = compute(args.count, args.hi_count, args.step)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
