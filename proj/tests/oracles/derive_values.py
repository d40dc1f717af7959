"""Independent reference values for the unit tests.

Computed with mpmath (50 digits) and scipy, without touching the C++ code.
Run: python3 tests/oracles/derive_values.py
"""
import mpmath as mp
from scipy import stats

mp.mp.dps = 50


def c_seq(theta, gaps):
    theta = mp.mpf(theta)
    c = [1 + theta**2]
    for d in gaps:
        c.append(1 + theta**2 - theta ** (2 * mp.mpf(d)) / c[-1])
    return c


def dense_loglik(theta, sigma2, mu, times, x):
    theta, sigma2, mu = mp.mpf(theta), mp.mpf(sigma2), mp.mpf(mu)
    n = len(x)
    g = mp.zeros(n, n)
    for i in range(n):
        g[i, i] = sigma2 * (1 + theta**2)
        if i + 1 < n:
            off = sigma2 * theta ** (mp.mpf(times[i + 1]) - mp.mpf(times[i]))
            g[i, i + 1] = g[i + 1, i] = off
    r = mp.matrix([mp.mpf(v) - mu for v in x])
    quad = (r.T * mp.inverse(g) * r)[0]
    return -mp.mpf(n) / 2 * mp.log(2 * mp.pi) - mp.log(mp.det(g)) / 2 - quad / 2


def main():
    print("c(0.5; 1,1) =", [mp.nstr(v, 17) for v in c_seq(0.5, [1, 1])])
    print("c_2(0.5; 2) =", mp.nstr(c_seq(0.5, [2])[1], 17))
    print("ljung-box Q(N=100, r1=0.3) =", mp.nstr(mp.mpf(100) * 102 * mp.mpf("0.09") / 99, 17))
    q = float(mp.mpf(100) * 102 * mp.mpf("0.09") / 99)
    print("  p =", repr(stats.chi2.sf(q, 1)))
    print("chi2 sf(3.8415, 1) =", repr(stats.chi2.sf(3.8415, 1)))
    print("chi2 sf(2, 2) =", mp.nstr(mp.exp(-1), 17))
    print("Phi^-1(1/6) =", repr(stats.norm.ppf(1 / 6)))
    print("asymptotic se (0.9,100), (0.5,500) =", repr(float(mp.sqrt((1 - mp.mpf("0.81")) / 100))),
          repr(float(mp.sqrt((1 - mp.mpf("0.25")) / 500))))
    table6 = [(0.1, 100), (0.5, 100), (0.9, 100), (0.1, 500), (0.5, 500), (0.9, 500),
              (0.1, 1500), (0.5, 1500), (0.9, 1500)]
    print("table6 se column =", [round(float(mp.sqrt((1 - mp.mpf(t) ** 2) / n)), 3) for t, n in table6])
    print("perf (0.4, 0.6): se_tilde =", mp.nstr(mp.sqrt(mp.mpf("0.02")), 17))
    print("mixture mean =", 0.15 * 130 + 0.85 * 6.5)
    # fixed small instance for the likelihood unit test
    times = [0.0, 1.0, 3.5, 4.5, 9.0]
    x = [0.3, -1.2, 0.8, 2.1, -0.4]
    print("dense loglik (0.6, 1.7, 0.25) =", mp.nstr(dense_loglik(0.6, 1.7, 0.25, times, x), 17))
    print("dense loglik (0.99, 0.5, 0) =", mp.nstr(dense_loglik(0.99, 0.5, 0, times, x), 17))


if __name__ == "__main__":
    main()
