"""Plain-numpy reference implementations, written without the package's
symbolic machinery.  Default convention only: |L> = (1, i)/sqrt2."""

import numpy as np

SQ2 = np.sqrt(2.0)
KET_H = np.array([1, 0], complex)
KET_V = np.array([0, 1], complex)
KET_L = np.array([1, 1j]) / SQ2
KET_R = np.array([1, -1j]) / SQ2
J = np.array([[0, -1], [1, 0]], complex)


def S(a):
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]], complex)


def K(x):
    return np.array([[-np.sin(2 * x), np.cos(2 * x)], [np.cos(2 * x), np.sin(2 * x)]], complex)


def retarder(phi, x, eta):
    """S(x) eta [[0, -e^{i phi}], [e^{-i phi}, 0]] S(-x)."""
    N = eta * np.array([[0, -np.exp(1j * phi)], [np.exp(-1j * phi), 0]])
    return S(x) @ N @ S(-x)


def H(x, eta):
    return retarder(np.pi / 2, x, eta)


def Q(x, eta):
    return retarder(np.pi / 4, x, eta)


def qhq(t, a, eta):
    return Q(t, eta) @ H(a, eta) @ Q(t, eta)


def h_prime(t, eta):
    return qhq(t, t, eta) @ KET_H


def h_double_prime(t, eta):
    return qhq(t, 2 * t, eta) @ h_prime(t, eta)


def circular(psi):
    return np.vdot(KET_L, psi), np.vdot(KET_R, psi)


def oam_components(state_fn, eta, n=64):
    """Fourier coefficients of the circular amplitudes as functions of the twist
    angle: returns dicts {k: c_k} with amplitude(t) = sum_k c_k e^{i k t}."""
    ts = 2 * np.pi * np.arange(n) / n
    amps = np.array([circular(state_fn(t, eta)) for t in ts])  # (n, 2)
    out = []
    for col in range(2):
        c = np.fft.fft(amps[:, col]) / n
        d = {}
        for idx, v in enumerate(c):
            k = idx if idx < n // 2 else idx - n
            if abs(v) > 1e-10:
                d[k] = v
        out.append(d)
    return out


def sum_alpha2(state_fn, t, eta):
    """|sum alpha^2| with alpha = (x +- y)/2 over pairs (L, a) <-> (R, -a)."""
    left, right = oam_components(state_fn, eta)
    labels = set(left) | {-k for k in right}
    total = 0j
    for a in labels:
        x = left.get(a, 0) * np.exp(1j * a * t)
        y = right.get(-a, 0) * np.exp(-1j * a * t)
        total += ((x + y) / 2) ** 2 + ((x - y) / 2) ** 2
    return total


def i_concurrence(state_fn, t, eta):
    """Schmidt-value form sqrt(2 (1 - sum s^4)) of the spin x OAM matrix."""
    left, right = oam_components(state_fn, eta)
    ks = sorted(set(left) | set(right))
    psi = np.array([[left.get(k, 0) * np.exp(1j * k * t) for k in ks],
                    [right.get(k, 0) * np.exp(1j * k * t) for k in ks]])
    s = np.linalg.svd(psi / np.linalg.norm(psi), compute_uv=False)
    return np.sqrt(max(0.0, 2 * (1 - np.sum(s ** 4))))
