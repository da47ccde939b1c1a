"""Independent oracle for the bilateral shift on a Z-window.

Baseline: the two-point taper xi_k = sqrt(k/K) d_{k-K} + sqrt((K-k)/K) d_k,
k = 0..K-1, inside the window [-2K, 2K). Value = ||[S, P]|| via a dense
eigen-decomposition of P - S P S*.

Optimizer: smoothed-max gradient descent on the frame, mirroring the
documented algorithm (temperature 1e-3 on squared sines, backtracking
halving from 0.1, QR retraction, stop when relative change < 1e-9 over 50
accepted steps).
"""
import numpy as np


def taper(K):
    lo = -2 * K
    dim = 4 * K
    F = np.zeros((dim, K))
    for k in range(K):
        F[k - K - lo, k] += np.sqrt(k / K)
        F[k - lo, k] += np.sqrt((K - k) / K)
    return F


def shift(F):
    G = np.zeros_like(F)
    G[1:] = F[:-1]
    assert np.all(F[-1] == 0)
    return G


def dense_value(F):
    P = F @ F.conj().T
    SF = shift(F)
    Q = SF @ SF.conj().T
    ev = np.linalg.eigvalsh(P - Q)
    return max(abs(ev[0]), abs(ev[-1]))


def frame_value(F):
    SF = shift(F)
    C = SF - F @ (F.conj().T @ SF)
    return np.linalg.svd(C, compute_uv=False)[0]


def smoothed(F, tau):
    SF = shift(F)
    M = F.conj().T @ SF
    mu, V = np.linalg.eigh(M.conj().T @ M)
    e = 1.0 - mu
    m = e.max()
    w = np.exp((e - m) / tau)
    s = w.sum()
    return m + tau * np.log(s), (w / s), V, M, SF


def grad(F, tau):
    f, w, V, M, SF = smoothed(F, tau)
    W = (V * w) @ V.conj().T
    # d mu gradient: 2 [ S F W M* + S* F M W ]
    A = SF @ W @ M.conj().T
    FMW = F @ M @ W
    B = np.zeros_like(FMW)
    B[:-1] = FMW[1:]
    G = -2.0 * (A + B)
    G[-1] = 0  # interior: rows whose shift stays inside
    return f, G


def retract(F):
    Q, R = np.linalg.qr(F)
    d = np.diag(R)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * ph


def optimize(F, tau=1e-3, step0=0.1, max_iter=2000, window=50, rtol=1e-9):
    f, G = grad(F, tau)
    hist = [f]
    best = frame_value(F)
    it = 0
    converged = False
    while it < max_iter:
        t = step0
        accepted = False
        while t > 1e-12:
            Fn = retract(F - t * G)
            fn, _ = smoothed(Fn, tau)[:2]
            if fn < f:
                accepted = True
                break
            t /= 2
        it += 1
        if not accepted:
            converged = True
            break
        F = Fn
        f, G = grad(F, tau)
        hist.append(f)
        best = min(best, frame_value(F))
        if len(hist) > window and (hist[-window - 1] - hist[-1]) <= rtol * abs(hist[-window - 1]):
            converged = True
            break
    return best, it, converged


if __name__ == "__main__":
    for K in (25, 50, 100):
        F = taper(K)
        print(K, repr(dense_value(F)), repr(frame_value(F)))
    import sys
    if len(sys.argv) > 1:
        for K in (25, 50, 100):
            print(K, optimize(taper(K)))
