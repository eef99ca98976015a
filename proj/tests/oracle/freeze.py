"""Independent high-precision values frozen into the C++ tests.

Run: python3 tests/oracle/freeze.py
"""
from mpmath import mp, mpf, sqrt, pi, gamma, quad, inf

mp.dps = 40


def lower_bound(n, l1, l2, rho, R):
    n = mpf(n)
    return (n - 2) / (2 * n) * (l1**2 - l2**2 + (n + 2) / (n - 2) * (rho**4 / l1**2 - R**4 / l2**2)) / (R**2 - rho**2)


def chain(n, l1, l2, r1, a, d):
    n = mpf(n)
    c, k, C, t = r1 / l1, a / l2, d / l2, (l1 / l2) ** 2
    br = (k**2 * t / (t + C**2) ** 2 + (n + 2) / (n * (n - 2)) * mpf(8) ** (-n) * k**2 * t * (c / C) ** 4
          - 4 * k**2 - 2 * (n + 2) / ((n - 2) * k**2))
    return (n - 2) / (2 * n) * br


def rho_M(n, delta, alpha):
    n = mpf(n)
    db = mpf(delta) ** (2 / (n - 2))
    e = (n - 2) * (n - 2 - 2 * alpha) / (2 * (n + 2))
    lo = db**e + db ** ((n - 2) / 2)
    hi = 2 * db**e
    t = sqrt(lo * hi)
    return sqrt(t ** (-2 / (n - 2)) - 1)


def k_limit(n, l1, l2):
    n = mpf(n)
    return (l1 ** ((n + 2) / 2) + l2 ** ((n + 2) / 2)) / (l1 ** ((n - 2) / 2) + l2 ** ((n - 2) / 2)) ** ((n + 2) / (n - 2))


def absH_ball_offcenter(n, R, s):
    # |H| integrated over B(0,R) with the pole at distance s, via the mean value
    # of |y|^(2-n) over spheres: average over |y - x| = r of |y|^(2-n) is max(r, s)^(2-n).
    w = 2 * pi ** (mpf(n) / 2) / gamma(mpf(n) / 2)
    f = lambda r: w * r ** (n - 1) * max(r, s) ** (2 - n) / ((n - 2) * w)
    return quad(f, [0, s, R])


vals = {
    "bubble_lap_n3_r1": -3 * mpf(0.5) ** mpf(2.5),
    "thmA_cond1_threshold": (mpf(1) / 100) / (1 + mpf(1) / 100),
    "lower_bound_thmA": lower_bound(3, mpf("0.0099"), 1, 1, 10),
    "lower_bound_thmA_300": lower_bound(3, mpf(300), 1, 1, 10),
    "thmB_rhs_r1": 8**3 * 3 * mpf(2) ** 4 * 7,
    "thmB_rhs_r0995": 8**3 * 3 * (2 / mpf("0.995")) ** 4 * 7,
    "chain_r1": chain(3, 1 / mpf(420), 1, 1, 1, 2),
    "chain_r0995": chain(3, 1 / mpf(420), 1, mpf("0.995"), 1, 2),
    "rhoM_n5_a025_1e-3": rho_M(5, mpf("1e-3"), mpf("0.25")),
    "rhoM_n5_a025_1e-4": rho_M(5, mpf("1e-4"), mpf("0.25")),
    "rhoM_n5_a1_1e-6": rho_M(5, mpf("1e-6"), 1),
    "k_limit_n3_05_2": k_limit(3, mpf("0.5"), 2),
    "absH_n3_R1_s05": absH_ball_offcenter(3, 1, mpf("0.5")),
    "absH_n5_R2_s07": absH_ball_offcenter(5, 2, mpf("0.7")),
    "deep_n3_k0": 8**3 * 3 * (mpf(6) / 5 + 6),
}
for k, v in vals.items():
    print(f"{k:24s} {mp.nstr(v, 17)}")
