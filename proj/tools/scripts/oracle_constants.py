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
"""Arbitrary-precision oracle for the literals embedded in constants.hpp.

Run once; paste the output into include/zrace/constants.hpp. The C++ build
never calls this script.
"""
import mpmath

mpmath.mp.dps = 50


def show(name, value):
    print(f"{name:<14} {mpmath.nstr(value, 40)}")


def main():
    show("euler_gamma", mpmath.euler)
    for n in (1, 2, 3, 4):
        show(f"zeta^({n})(0)", mpmath.zeta(0, derivative=n))
    for k in range(2, 17):
        show(f"zeta({k})", mpmath.zeta(k))
        show(f"zeta'({k})", mpmath.zeta(k, derivative=1))
    log2pi = mpmath.log(2 * mpmath.pi)
    z2, z3, z4 = (mpmath.zeta(0, derivative=n) for n in (2, 3, 4))
    b1 = mpmath.euler + 2 - mpmath.log(4 * mpmath.pi)
    b2 = 1 - mpmath.pi**2 / 24 + 2 * z2 + log2pi**2
    b4 = 1 - mpmath.pi**4 / 1440 - (-2 * z4 + 8 * z3 * log2pi
                                    - 12 * z2 * (z2 + 2 * log2pi**2)
                                    - 6 * log2pi**4) / 6
    show("B1", b1)
    show("B2", b2)
    show("B4", b4)
    show("B1+B2", b1 + b2)
    show("(B1-B2)/4", (b1 - b2) / 4)
    show("B1/2+B2/2-B4/4", b1 / 2 + b2 / 2 - b4 / 4)
    # Mertens-type constants through the prime zeta function P(s):
    #   C1 = C0 - sum_{k>=2} P'(k),  C2 = -C0 + sum_{k>=2} P(k)/k.
    mpmath.mp.dps = 30
    s1 = mpmath.nsum(lambda k: -mpmath.diff(mpmath.primezeta, k), [2, mpmath.inf])
    s2 = mpmath.nsum(lambda k: mpmath.primezeta(k) / k, [2, mpmath.inf])
    show("C1", mpmath.euler + s1)
    show("C2", -mpmath.euler + s2)


if __name__ == "__main__":
    main()
