"""Reference values for the oracle tests in crates/core/tests/oracles.rs.

Every number is computed here by mpmath quadrature or root finding,
independently of the Rust code, and pasted into the test file.
Run: python3 scripts/oracles.py
"""
from mpmath import mp, mpf, quad, inf, exp, pi, sqrt, gamma, gammainc, hyp1f1, findroot, besselj

mp.dps = 30
EPS = mpf("0.01")
N = 3
OMEGA = 4 * pi


def radial(f, a=0, b=inf):
    return OMEGA * quad(lambda r: f(r) * r ** (N - 1), [a, 1, 4, b])


def riesz_gaussian(a, sigma):
    """|∇|^σ e^{-a r²} in n = 3 via the confluent form."""
    c = (4 * a) ** (sigma / 2) * gamma((N + sigma) / 2) / gamma(mpf(N) / 2)
    return lambda r: c * hyp1f1((N + sigma) / 2, mpf(N) / 2, -a * r * r)


def riesz_gaussian_hankel(a, sigma, r):
    """The same function from the Hankel integral, as a check on the formula."""
    nu = mpf(N) / 2 - 1
    ghat = lambda rho: (pi / a) ** (mpf(N) / 2) * exp(-rho ** 2 / (4 * a))
    f = lambda rho: rho ** sigma * ghat(rho) * besselj(nu, r * rho) * rho ** (N / mpf(2))
    return (2 * pi) ** (-mpf(N) / 2) * r ** (-nu) * quad(f, [0, 2, 6, 20])


def main():
    for sigma in [mpf("0.495"), mpf("-0.495")]:
        for r in [mpf("0.3"), mpf("1.7")]:
            d = riesz_gaussian(mpf("0.5"), sigma)(r) - riesz_gaussian_hankel(mpf("0.5"), sigma, r)
            assert abs(d) < mpf("1e-20"), d

    mass = radial(lambda r: 4 * exp(-2 * r * r))
    print("mass 2e^{-r^2}           ", mp.nstr(mass, 17))

    kinetic = radial(lambda r: r * r * exp(-r * r)) / 2
    print("kinetic e^{-r^2/2}       ", mp.nstr(kinetic, 17))

    # |û|² ∝ e^{-ρ²}, so the spectral mass below ρ is P(3/2, ρ²).
    median = sqrt(findroot(lambda x: gammainc(mpf(3) / 2, 0, x, regularized=True) - mpf(1) / 2, 1.2))
    print("median frequency         ", mp.nstr(median, 17))

    # Spatial and spectral tails of e^{-r²/2} coincide; η = 1/2 absolute.
    tail = findroot(lambda a: radial(lambda r: exp(-r * r), a) - mpf(1) / 2, 1.5)
    print("C(0.5)                   ", mp.nstr(tail * max(median, 1 / median), 17))

    e1 = EPS * (1 - EPS)
    aprime = lambda r: r / sqrt(1 + r * r) - e1 * r * (1 + r * r) ** (-(1 + EPS) / 2)
    kappa = 1
    morawetz = 2 * radial(lambda r: aprime(r) * kappa * r * exp(-r * r))
    print("Morawetz chirp kappa=1   ", mp.nstr(morawetz, 17))

    l2 = lambda c: sqrt(radial(lambda r: exp(-2 * c * r * r)))
    inner = lambda s: quad(lambda r: exp(-r * r) * r ** (-1 + 2), [0, s])
    bil = OMEGA ** 2 * quad(lambda s: exp(-s * s) * s ** (-2 + 2) * inner(s), [0, 1, 4, inf])
    print("bilinear ratio           ", mp.nstr(bil / l2(1) ** 2, 17))

    # ∫∫ e^{-|x|²}e^{-|y|²}|x-y|^{-2} via the Gaussian self-convolution.
    conv = (pi / 2) ** mpf(1.5)
    hls = radial(lambda z: conv * exp(-z * z / 2) / (z * z))
    lp = radial(lambda r: exp(-mpf(1.5) * r * r)) ** (mpf(2) / 3)
    print("HLS ratio                ", mp.nstr(hls / lp ** 2, 17))

    sig = (1 - EPS) / 2
    d = riesz_gaussian(mpf("0.5"), sig)
    weighted = sqrt(radial(lambda r: r ** (-(1 + EPS)) * d(r) ** 2))
    l6 = radial(lambda r: exp(-3 * r * r)) ** (mpf(1) / 6)
    print("sobolev lhs (L^6)        ", mp.nstr(l6, 17))
    print("sobolev rhs              ", mp.nstr(weighted, 17))
    mass_norm = sqrt(radial(lambda r: exp(-r * r)))
    print("s_norm single Gaussian   ", mp.nstr(weighted + mass_norm, 17))

    neg = riesz_gaussian(mpf(7) / 6, -sig)
    lhs = sqrt(radial(lambda r: r ** (1 + EPS) * neg(r) ** 2))
    rhs = mass_norm ** (mpf(4) / 3) * (weighted + mass_norm)
    print("basic nonlinear lhs      ", mp.nstr(lhs, 17))
    print("basic nonlinear rhs      ", mp.nstr(rhs, 17))


if __name__ == "__main__":
    main()
