"""
Slow reference implementations used as oracles by the kernel tests.
Plain loops, no vectorisation: only for small N.
"""

import math

import numpy as np


def naive_autocorrelation(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    c = x - x.mean()
    acov = [sum(c[t] * c[t + k] for t in range(n - k)) / n for k in range(n)]
    return np.array(acov) / acov[0]


def naive_disentropy(x):
    return math.fsum(r ** 3 / (r + 1) for r in naive_autocorrelation(x))


def _chebyshev(a, b):
    return max(abs(u - v) for u, v in zip(a, b))


def naive_apen(x, m, r_factor=0.2):
    x = [float(v) for v in x]
    r = r_factor * float(np.std(x, ddof=1))

    def phi(k):
        templates = [x[i:i + k] for i in range(len(x) - k + 1)]
        n = len(templates)
        total = 0.0
        for a in templates:
            count = sum(1 for b in templates if _chebyshev(a, b) <= r)
            total += math.log(count / n)
        return total / n

    return phi(m) - phi(m + 1)


def naive_fuzen(x, m, r=0.1253):
    x = np.asarray(x, dtype=float)
    z = (x - x.mean()) / np.std(x, ddof=1)
    n = z.size - m

    def phi(k):
        templates = [z[i:i + k] for i in range(n)]
        total = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    d = _chebyshev(templates[i], templates[j])
                    total += math.exp(-d * d / (2 * r * r))
        return math.log(total / (n * (n - 1)))

    return phi(m) - phi(m + 1)
