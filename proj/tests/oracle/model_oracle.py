"""Independent reference for the two-domain receptor model.

Evaluates the mass-action system with numpy/scipy straight from the printed
flux formulas and stoichiometry, and relaxes it to steady state with a stiff
integrator followed by a nonlinear solve. Used to generate the frozen values in
the C++ unit tests; not part of the build.
"""
import math
import sys

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import fsolve

GAMMA = np.array([
    [-2, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0, 0, 0, 0],
    [0, -2, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0, -1, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 1, 0, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, 0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
], dtype=float)
W = np.array([1, 1, 2, 2, 1, 1, 2, 2, 2, 2, 2, 2], dtype=float)

FULL = dict(b=0.1, d=0.01, a=0.0044, c=0.026, ai=0.949, ci=0.026, bi=0.446, di=0.02, as_=0.21)
REDUCED = dict(FULL, as_=0.0021, b=0.0001)


def exchange(f, alpha, gamma_out=8.23e-6, area_um2=1000.0, r=None):
    if r is None:
        r = math.sqrt(area_um2 / (4 * math.pi))
    h = area_um2 * f / (2 * math.pi * r)
    L0 = 2 * math.pi * math.sqrt(r * r - (r - h) ** 2)
    delta = (area_um2 * 1e-8) / (L0 * 1e-4 * gamma_out)
    return L0, delta, 1 / (delta * f), alpha / (delta * (1 - f))


def fluxes(x, p):
    R1, R2, RR1, RR2, VR1, VR2, VRR1, VRR2, RVR1, RVR2, D1, D2 = x
    f, V0, beta, k1, k2 = p['f'], p['V0'], p['beta'], p['k1'], p['k2']
    g = 1 - f
    return np.array([
        2 * p['b'] / f * R1 ** 2 - p['d'] * RR1,
        2 * p['b'] / g * R2 ** 2 - p['d'] * RR2,
        p['b'] / f * R1 * VR1 - p['d'] * VRR1,
        p['b'] / g * R2 * VR2 - p['d'] * VRR2,
        2 * p['a'] * V0 * RR1 - p['c'] * VRR1,
        2 * p['a'] * V0 * RR2 - p['c'] * VRR2,
        p['ai'] * VRR1 - 2 * p['ci'] * D1,
        p['ai'] * VRR2 - 2 * p['ci'] * D2,
        p['bi'] * RVR1 - p['di'] * D1,
        p['bi'] * RVR2 - p['di'] * D2,
        p['as_'] / f * R1 * VR1 - p['c'] * RVR1,
        p['as_'] / g * R2 * VR2 - p['c'] * RVR2,
        p['a'] * V0 * R1 - p['c'] * VR1,
        p['a'] * V0 * R2 - p['c'] * VR2,
        k1 * R1 - k2 * R2,
        beta * (k1 * RR1 - k2 * RR2),
        k1 * VR1 - k2 * VR2,
        beta * (k1 * VRR1 - k2 * VRR2),
        beta * (k1 * RVR1 - k2 * RVR2),
        beta * (k1 * D1 - k2 * D2),
    ])


def params(scenario, alpha, f, V0, beta, rtotal=6.6):
    p = dict(REDUCED if scenario == 'reduced' else FULL)
    _, _, k1, k2 = exchange(f, alpha)
    p.update(f=f, V0=V0, beta=beta, k1=k1, k2=k2, alpha=alpha, rtotal=rtotal)
    return p


def steady(p):
    x0 = np.zeros(12)
    x0[0] = p['f'] * p['rtotal']
    x0[1] = (1 - p['f']) * p['rtotal']
    rhs = lambda t, x: GAMMA @ fluxes(x, p)
    sol = solve_ivp(rhs, (0, 1e6), x0, method='LSODA', rtol=1e-11, atol=1e-14)
    x = sol.y[:, -1]

    def F(z):
        r = GAMMA @ fluxes(z, p)
        r[0] = W @ z - p['rtotal']
        return r
    for _ in range(3):
        x = fsolve(F, x, xtol=1e-15)
    return x


def observables(x):
    hd = x[0] + 2 * x[2] + x[4] + 2 * x[6] + 2 * x[8] + 2 * x[10]
    ld = x[1] + 2 * x[3] + x[5] + 2 * x[7] + 2 * x[9] + 2 * x[11]
    return dict(signal_hd=x[8] + x[10], signal_ld=x[9] + x[11],
                signal_total=x[8] + x[9] + x[10] + x[11], receptors_hd=hd, receptors_ld=ld)


if __name__ == '__main__':
    np.set_printoptions(precision=17)
    scen = sys.argv[1] if len(sys.argv) > 1 else 'full'
    a, f, v0, beta = (float(v) for v in sys.argv[2:6]) if len(sys.argv) > 5 else (5, 0.1, 0.1, 0.5)
    p = params(scen, a, f, v0, beta)
    x = steady(p)
    print(repr(list(x)))
    print(observables(x))
    print('residual', np.abs(GAMMA @ fluxes(x, p)).max())
