"""Regenerates the trace((sum_i (A^T)^i S A^i)^-1) table frozen in test_analysis.cpp.

Evaluated in 80-digit arithmetic; needs mpmath.
Context: d = 18, taps (1, 1/2, 1/8) at offsets 0, +-1, +-2, samples at the
0-based indices {0, 4, 6, 9, 12, 14, 17}.
"""
import mpmath as mp

mp.mp.dps = 80
d = 18
taps = [mp.mpf(0)] * d
taps[0] = mp.mpf(1)
taps[1] = taps[-1] = mp.mpf(1) / 2
taps[2] = taps[-2] = mp.mpf(1) / 8
A = mp.matrix([[taps[(i - j) % d] for j in range(d)] for i in range(d)])
omega = [0, 4, 6, 9, 12, 14, 17]


def trace_inverse(levels):
    gram = mp.zeros(d, d)
    power = mp.eye(d)
    for _ in range(levels):
        for w in omega:
            row = power[w, :]
            gram += row.T * row
        power = A * power
    inv = gram ** -1
    return sum(inv[k, k] for k in range(d))


for levels in (3, 5, 10, 18, 28, 38, 48, 58, 68):
    print(levels, mp.nstr(trace_inverse(levels), 17))
