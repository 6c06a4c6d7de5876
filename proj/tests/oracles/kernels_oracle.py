"""High-precision reference values for the special functions and kernels.

Run with `python3 tests/oracles/kernels_oracle.py`; its output is
frozen into tests/test_specfun.cpp and tests/test_kernels.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def E(z, t, b, M):
    p, q = mp.e ** (-b), mp.e ** (-t)
    S = (p + q) ** 2 - z ** 2
    D = (p - q) ** 2 - z ** 2
    a = mp.mpf(1) / 2 - M
    return 4 ** (-M) * mp.e ** (M * (b + t)) * S ** (M - mp.mpf(1) / 2) * mp.hyp2f1(a, a, 1, D / S)


def K1(z, t, M):
    return E(z, t, 0, M)


def K0(z, t, M):
    # -dE/db at b = 0; E is smooth in b there for z inside the cone.
    return -mp.diff(lambda b: E(z, t, b, M), 0)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


show("2F1(0.25,0.25;1;0.9)", mp.hyp2f1(0.25, 0.25, 1, 0.9))
show("2F1(0.5,0.5;1;0.99)", mp.hyp2f1(0.5, 0.5, 1, 0.99))
show("2F1(-1.2,-1.2;1;0.75)", mp.hyp2f1(-1.2, -1.2, 1, 0.75))
show("2F1(0.3,0.7;2.5;0.97)", mp.hyp2f1(0.3, 0.7, 2.5, 0.97))
show("2F1(-3,-3;1;0.5)", mp.hyp2f1(-3, -3, 1, 0.5))
show("I0(1)", mp.besseli(0, 1))
show("I0(12.5)", mp.besseli(0, 12.5))
show("I1(3)/3", mp.besseli(1, 3) / 3)
show("E(0.3,2,0.5,0.5)", E(0.3, 2, 0.5, 0.5))
show("E(0.5,1.5,0.2,1)", E(0.5, 1.5, 0.2, 1))
show("E(0.1,3,1,2.5)", E(0.1, 3, 1, 2.5))
show("K1(0.4,1,2)", K1(0.4, 1, 2))
show("K1(0,0.5,0.25)", K1(0, 0.5, 0.25))
show("K0(0.3,2,0.5)", K0(0.3, 2, 0.5))
show("K0(0.2,1.5,0.8)", K0(0.2, 1.5, 0.8))
show("K0(0.2,1.5,1.5)", K0(0.2, 1.5, 1.5))
show("K0(0.5,3,2.5)", K0(0.5, 3, 2.5))
