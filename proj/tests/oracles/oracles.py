"""Reference values frozen into the C++ unit tests.

Everything here is computed without the C++ code: exact rational algebra for
the kernels, numpy for mixing matrices and least squares, mpmath quadrature
for kernel constants, direct formula evaluation for the hard instances.
Run: python3 tests/oracles/oracles.py
"""
import math

import mpmath as mp
import numpy as np
import sympy as sp

r = sp.symbols("r")
mp.mp.dps = 30


def legendre_kernel(beta):
    ell = math.ceil(beta) - 1
    cs = sp.symbols(f"c0:{ell + 1}")
    K = sum(c * sp.legendre(m, r) for m, c in enumerate(cs))
    eqs = []
    for j in range(ell + 1):
        target = 1 if j == 1 else 0
        eqs.append(sp.Eq(sp.integrate(r**j * K, (r, -1, 1)) / 2, target))
    sol = sp.solve(eqs, cs)
    return sp.expand(K.subs(sol))


def kernel_constants(K, beta):
    f = sp.lambdify(r, K, "mpmath")
    kappa = sp.integrate(K**2, (r, -1, 1)) / 2
    roots = sorted({float(x) for x in sp.Poly(K, r).real_roots() if abs(x) <= 1} | {-1.0, 0.0, 1.0})
    kb = mp.mpf(0)
    for a, b in zip(roots[:-1], roots[1:]):
        kb += mp.quad(lambda u: abs(u) ** beta * abs(f(u)), [a, b])
    return kappa, kb / 2


print("== kernels")
for beta in [2, 3, 4, 5, 6]:
    K = legendre_kernel(beta)
    kappa, kb = kernel_constants(K, beta)
    print(f"beta={beta} K={K} kappa={kappa} ({float(kappa)!r}) kappa_beta={mp.nstr(kb, 17)}")
print("beta=2.5 K =", legendre_kernel(2.5))

print("== mixing")


def metropolis(n, edges):
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    W = np.zeros((n, n))
    for i, j in edges:
        W[i, j] = W[j, i] = 1.0 / (2 * max(deg[i], deg[j]))
    for i in range(n):
        W[i, i] = 1.0 - W[i].sum()
    return W


def rho(W):
    n = W.shape[0]
    return max(abs(np.linalg.eigvalsh(W - np.ones((n, n)) / n)))


path3 = metropolis(3, [(0, 1), (1, 2)])
print("path3 W=", path3.tolist(), "rho=", rho(path3))
ring4 = metropolis(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
print("ring4 rho=", rho(ring4))
ring5 = metropolis(5, [(i, (i + 1) % 5) for i in range(5)])
print("ring5 rho=", repr(rho(ring5)), "closed form", repr(0.5 + 0.5 * math.cos(2 * math.pi / 5)))
grid_edges = []
for rr in range(3):
    for c in range(3):
        v = 3 * rr + c
        if c + 1 < 3:
            grid_edges.append((v, v + 1))
        if rr + 1 < 3:
            grid_edges.append((v, v + 3))
grid9 = metropolis(9, grid_edges)
print("grid9 rho=", repr(rho(grid9)), "W00=", grid9[0, 0], "W04?", grid9[0, 1], "center diag", grid9[4, 4])
star4 = metropolis(4, [(0, 1), (0, 2), (0, 3)])
print("star4 rho=", repr(rho(star4)))

print("== least squares")
A = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [1.0, 3.0, 1.0], [2.0, 0.0, -2.0]])
y = np.array([1.0, -1.0, 0.5, 2.0])
P = A @ np.linalg.pinv(A)
res = np.linalg.norm((np.eye(4) - P) @ y) ** 2
s = np.linalg.svd(A, compute_uv=False)
print("rank", np.linalg.matrix_rank(A), "singular", s.tolist())
print("residual f*=", repr(res), "pinv x=", (np.linalg.pinv(A) @ y).tolist(), "PL 2 smin^2=", repr(2 * s[s > 1e-10].min() ** 2))

print("== logistic")
print("A=[[1]] x=0: f=", repr(math.log(2)), "f'=0.5")
# 2-D logistic, ball of radius 1 at the origin: f* by a fine polar grid refined with mpmath.
A2 = np.array([[1.0, 0.5], [-0.3, 1.0], [0.8, -0.2]])


def flog(x):
    return float(sum(mp.log(1 + mp.exp(float(a @ x))) for a in A2))


best = None
for th in np.linspace(0, 2 * math.pi, 20001):
    for rad in [1.0]:
        x = rad * np.array([math.cos(th), math.sin(th)])
        v = flog(x)
        if best is None or v < best[0]:
            best = (v, th)
th = mp.findroot(lambda t: mp.diff(lambda u: sum(mp.log(1 + mp.exp(a[0] * mp.cos(u) + a[1] * mp.sin(u))) for a in A2), t), best[1])
fstar = sum(mp.log(1 + mp.exp(a[0] * mp.cos(th) + a[1] * mp.sin(th))) for a in A2)
g = A2.T @ (1 / (1 + np.exp(-(A2 @ np.array([float(mp.cos(th)), float(mp.sin(th))])))))
print("logistic2 f*=", mp.nstr(fstar, 17), "argmin=", float(mp.cos(th)), float(mp.sin(th)), "grad at argmin", g.tolist())

print("== hard instances")


def hard(beta, alpha, T):
    at = min(alpha, alpha**2)
    ab = min(alpha, alpha**1.5)
    h = T ** (-1.0 / (2 * beta))
    a = math.pi * math.sqrt(6) / 24 * h ** (beta - 1) / ab
    A = h ** (2 * (beta - 1)) / at
    c = 2 * math.sqrt(6) / 3 * ab * h ** (1 - beta)
    return h, a, A, c


def phi(beta, alpha, T, tau, x):
    h, a, A, c = hard(beta, alpha, T)
    v = tau * A * math.sin(c * x)
    if x < 0:
        v += x ** (2 * beta)
    elif x > a:
        v += (x - a) ** (2 * beta)
    return v


for beta, alpha, T in [(2, 1, 16), (2, 0.5, 256), (3, 0.5, 16)]:
    h, a, A, c = hard(beta, alpha, T)
    print(f"beta={beta} alpha={alpha} T={T}: h={h!r} a={a!r} A={A!r} c={c!r} c*a={c*a!r}")
print("phi(2,1,16,-1,0.1)=", repr(phi(2, 1, 16, -1, 0.1)))
print("phi(2,1,16,+1,-0.2)=", repr(phi(2, 1, 16, 1, -0.2)))
print("phi(3,0.5,16,+1,0.5)=", repr(phi(3, 0.5, 16, 1, 0.5)))
h, a, A, c = hard(2, 1, 16)
print("|f'(0)| beta2 alpha1 T16 =", repr(A * c), "vs (2 sqrt6/3) h =", repr(2 * math.sqrt(6) / 3 * h))
print("omega -1 f* on Theta =", repr(-A / 2), "closed form", -(2) / (4 * 1) * h ** (2 * (2 - 2)))
xs = np.linspace(-1, 4 * a, 2000001)
vals = np.array([phi(2, 1, 16, 1, x) for x in xs[:: 100]])
print("omega +1 bracket min (coarse)=", vals.min(), "at", xs[::100][vals.argmin()])

print("== surrogate")
print("f=1/2|x|^2 d=2 x=0: f_hat = h^2/4; h=0.3 ->", 0.09 / 4)
print("== ball moment d/(d+2):", 2 / 4, 10 / 12)

from scipy.optimize import minimize_scalar

h, a, A, c = hard(2, 1, 16)
best = minimize_scalar(lambda x: phi(2, 1, 16, 1, x), bounds=(-1, 0), method="bounded", options={"xatol": 1e-12})
print("omega +1 bracket min (refined)=", repr(best.fun), "at", repr(best.x))
