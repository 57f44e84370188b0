"""Cell problem around the unit sphere, solved by separation of variables.

u = F(r) z + H(r) Q with Q_i = n_i n_z - delta_i3 / 3 solves -lap u + u = 0,
u(R) = 0, and d_r u = c (u + z, n) n on r = 1. F uses i0/k0, H uses i2/k2.
Prints (grad, l2, surf) energies for the golden cases in the unit tests.
"""
import mpmath as mp

mp.mp.dps = 40


def i0(r): return mp.sinh(r) / r
def k0(r): return mp.exp(-r) / r
def i2(r): return (3 / r**2 + 1) * mp.sinh(r) / r - 3 * mp.cosh(r) / r**2
def k2(r): return mp.exp(-r) / r * (1 + 3 / r + 3 / r**2)


def solve(c, R):
    d = lambda f, r: mp.diff(f, r)
    # unknowns p = (c1, c2, d1, d2)
    A = mp.matrix(4, 4)
    b = mp.matrix(4, 1)
    A[0, 0], A[0, 1] = i0(R), k0(R)
    A[1, 2], A[1, 3] = i2(R), k2(R)
    # F'(1) - c/3 (F + 2H/3) = c/3
    A[2, 0] = d(i0, 1) - c / 3 * i0(1)
    A[2, 1] = d(k0, 1) - c / 3 * k0(1)
    A[2, 2] = -c / 3 * 2 * i2(1) / 3
    A[2, 3] = -c / 3 * 2 * k2(1) / 3
    b[2] = c / 3
    # H'(1) - c (F + 2H/3) = c
    A[3, 0] = -c * i0(1)
    A[3, 1] = -c * k0(1)
    A[3, 2] = d(i2, 1) - c * 2 * i2(1) / 3
    A[3, 3] = d(k2, 1) - c * 2 * k2(1) / 3
    b[3] = c
    p = mp.lu_solve(A, b)
    F = lambda r: p[0] * i0(r) + p[1] * k0(r)
    H = lambda r: p[2] * i2(r) + p[3] * k2(r)
    l2 = mp.quad(lambda r: r**2 * (4 * mp.pi * F(r)**2 + 8 * mp.pi / 9 * H(r)**2), [1, R])
    grad = mp.quad(lambda r: r**2 * (4 * mp.pi * d(F, r)**2
                                      + 8 * mp.pi / 9 * (d(H, r)**2 + 6 * H(r)**2 / r**2)), [1, R])
    surf = 4 * mp.pi * F(1)**2 + 8 * mp.pi / 9 * H(1)**2
    return grad, l2, surf


if __name__ == "__main__":
    for g, eps, alpha, kappa in [(1.0, 0.1, 1.5, 1.1), (1.0, 0.05, 1.5, 1.25), (50.0, 0.1, 1.5, 1.1)]:
        c = g * mp.mpf(eps) ** (3 - alpha)
        R = mp.mpf(eps) ** (kappa - alpha)
        grad, l2, surf = solve(c, R)
        print(f"g={g} eps={eps} alpha={alpha} kappa={kappa} R={mp.nstr(R, 17)}")
        print("  grad", mp.nstr(grad, 17), " l2", mp.nstr(l2, 17), " surf", mp.nstr(surf, 17))
