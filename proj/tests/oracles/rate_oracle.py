# SPDX-License-Identifier: Apache-2.0
#
# xlma: placement optimization and simulation for movable-subarray uplinks
# Copyright (C) 2026 The xlma authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Independent numpy evaluation of the MRC closed form on the small fixture
used by tests/test_rate.cpp. Steering correlations come from explicit
vectors, auxiliary factors from the kappa form. Prints C++ initializers."""
import numpy as np

lam = 299792458.0 / 30e9
d = lam / 2
m_h, m_v = 2, 2
M = m_h * m_v
kappa = 10 ** (10 / 10)
snr = 10 ** ((10 - (-80)) / 10)

cands = [np.array([0.0, -4 + (i + 0.5), 10.0]) for i in range(8)]
grids = []
for ky in range(2):
    for kx in range(2):
        grids.append(np.array([5 + 2.5 + 5 * kx, -6 + 3 + 6 * ky, 0.0]))
rho = [0.3, 0.8, 0.5, 1.0]
xi = [[0 if (k + n) % 3 == 0 else 1 for n in range(8)] for k in range(4)]


def steer(u):
    ah = np.exp(-1j * 2 * np.pi * d / lam * np.arange(m_h) * u[1])
    av = np.exp(-1j * 2 * np.pi * d / lam * np.arange(m_v) * u[2])
    return np.kron(av, ah)


def gains(k, n):
    v = grids[k] - cands[n]
    dist = np.linalg.norm(v)
    bl = (lam / (4 * np.pi * dist)) ** 2
    bn = bl / kappa
    return v / dist, bl, bn


def sinr(support, k):
    num1 = 0.0
    num2 = 0.0
    den = 0.0
    for n in support:
        uk, blk, bnk = gains(k, n)
        a = kappa * xi[k][n]
        bk = xi[k][n] * blk + bnk
        num1 += bk
        num2 += bk ** 2 * M * (2 * a + 1) / (a + 1) ** 2
        den += M * bk
        for i in range(4):
            if i == k:
                continue
            ui, bli, bni = gains(i, n)
            b = kappa * xi[i][n]
            bi = xi[i][n] * bli + bni
            phi = abs(np.vdot(steer(uk), steer(ui))) ** 2
            g = a * b / ((a + 1) * (b + 1))
            q = M * (1 + a + b) / ((a + 1) * (b + 1))
            den += snr * rho[i] * bk * bi * (phi * g + q)
    return snr * (M * M * num1 ** 2 + num2) / den


def upper(support, k):
    s = sum(xi[k][n] * gains(k, n)[1] + gains(k, n)[2] for n in support)
    return np.log2(1 + snr * M * s)


for name, sup in [("a", [1, 4, 6]), ("b", list(range(8))), ("c", [3])]:
    vals = [sinr(sup, k) for k in range(4)]
    wsr = sum(r * np.log2(1 + v) for r, v in zip(rho, vals))
    ub = sum(r * upper(sup, k) for r, k in zip(rho, range(4)))
    print(name, "sinr", ", ".join(repr(v) for v in vals))
    print(name, "wsr", repr(wsr), "ub", repr(ub))
