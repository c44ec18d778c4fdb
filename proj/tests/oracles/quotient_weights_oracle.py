"""Independent oracle for quotient shift weights of <z1 + a z2> in the ball Hardy space (m=2).

Uses the explicit recurrence for the one-dimensional complement of (z1 + a z2) H_{k-1}
in H_k with Python Fractions (complex coefficients tracked as pairs).
"""
from fractions import Fraction as F
from math import factorial, sqrt
import sys


def omega(a, b):
    return F(factorial(a) * factorial(b), factorial(a + b + 1))


def cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def cabs2(x):
    return x[0] * x[0] + x[1] * x[1]


def complement(k, alpha):
    conj = (alpha[0], -alpha[1])
    c = [(F(1), F(0))]
    for j in range(k):
        r = -omega(j, k - j) / omega(j + 1, k - 1 - j)
        nxt = cmul(c[j], conj)
        c.append((nxt[0] * r, nxt[1] * r))
    return c  # c[j] is the coefficient of z1^j z2^(k-j)


def norm2(c, k):
    return sum(cabs2(c[j]) * omega(j, k - j) for j in range(k + 1))


def weight_modulus2(k, alpha):
    v = complement(k, alpha)
    w = complement(k + 1, alpha)
    # <z1 v, w> = sum_j v_j conj(w_{j+1}) omega(j+1, k-j)
    ip = (F(0), F(0))
    for j in range(k + 1):
        wc = (w[j + 1][0], -w[j + 1][1])
        t = cmul(v[j], wc)
        o = omega(j + 1, k - j)
        ip = (ip[0] + t[0] * o, ip[1] + t[1] * o)
    return cabs2(ip) / (norm2(v, k) * norm2(w, k + 1))


if __name__ == "__main__":
    for alpha in [(F(1), F(0)), (F(0), F(2))]:
        a2 = cabs2(alpha)
        for k in [0, 1, 2, 5, 20, 200]:
            w2 = weight_modulus2(k, alpha)
            norm = sqrt(float(w2 * (1 + 1 / a2)))
            print(alpha, k, float(w2), norm, abs(norm - 1))
