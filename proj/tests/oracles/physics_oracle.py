#!/usr/bin/env python3
"""Reference values for the closed-form link physics, computed with mpmath.

The C++ tests freeze the numbers printed here.
"""
from mpmath import mp, mpf, pi, sqrt, acos, cos, fmod

mp.dps = 40

C = mpf(299792458)
F = mpf(868e6)
LAM = C / F
K0, K1 = mpf("0.4"), mpf("0.9")
PE = mpf(10) ** (mpf(33) / 10) * mpf("1e-3")
PS = mpf(10) ** (mpf(-50) / 10) * mpf("1e-3")
G = mpf(1)
GE = mpf(10) ** (mpf(4) / 10)
D_ANT = mpf("0.17")


def avail(d):
    return PE * GE * G * LAM**2 / (4 * pi * d) ** 2


def recv(d_etx, d_link):
    return avail(d_etx) * (K0 * G * LAM) ** 2 / (4 * pi * d_link) ** 2


def theta_c(d_erx, d_etx, d_link, g=G):
    return acos(-(K0 + K1) * d_erx * LAM * g / (8 * pi * d_etx * d_link))


def dist(a, b):
    return sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2)


def pdoa(e, tx, rx):
    ex = dist(e, tx) + dist(tx, rx) - dist(e, rx)
    return fmod(2 * pi * ex / LAM, 2 * pi)


EPS = LAM**2 / (4 * pi) ** 2 * G * K0 * sqrt(PE * GE * G / PS)


def dstar(prefix):
    return (sqrt(prefix**2 + 4 * EPS) - prefix) / 2


def ladder(d1, max_tags=1000):
    d_f = 2 * D_ANT**2 / LAM
    rows = [(1, d1, d1)]
    total = d1
    while len(rows) < max_tags:
        d = dstar(total)
        if d < d_f:
            break
        total += d
        rows.append((len(rows) + 1, total, d))
    return rows


def main():
    print(f"lambda        {mp.nstr(LAM, 12)}")
    print(f"avail(3)      {mp.nstr(avail(3), 12)}")
    print(f"recv(3,2)     {mp.nstr(recv(3, 2), 12)}")
    print(f"recv(3,3)     {mp.nstr(recv(3, 3), 12)}")
    print(f"theta_c       {mp.nstr(theta_c(3, 3, 2), 12)}")
    print(f"pdoa          {mp.nstr(pdoa((0, 0), (3, 0), (3, 2)), 12)}")
    print(f"epsilon       {mp.nstr(EPS, 12)}")
    print(f"d2*           {mp.nstr(dstar(mpf(3)), 12)}")
    print(f"d_F           {mp.nstr(2 * D_ANT**2 / LAM, 12)}")
    rows = ladder(mpf(3))
    for n, r, d in rows[:5]:
        print(f"ladder {n:3d}    range {mp.nstr(r, 12)}  spacing {mp.nstr(d, 12)}")
    n, r, d = rows[-1]
    print(f"ladder last   N={n} range {mp.nstr(r, 12)} spacing {mp.nstr(d, 12)}")


if __name__ == "__main__":
    main()
