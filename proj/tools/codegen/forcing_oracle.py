# High-precision numerical-differentiation oracle for the manufactured
# forcing fields: no symbolic differentiation anywhere, only mpmath
# numerical derivatives of the stream function at dps=40.
from mpmath import mp, mpf, sin, cos, pi, sqrt, diff

mp.dps = 40

def psi(x, y):
    return 32 * x**2 * (1 - x)**2 * y**2 * (1 - y)**2

def v1(x, y):
    return diff(lambda t: psi(x, t), y)

def v2(x, y):
    return -diff(lambda t: psi(t, y), x)

def T(x, y):
    t11 = diff(lambda t: v1(t, y), x)
    t22 = diff(lambda t: v2(x, t), y)
    t12 = (diff(lambda t: v1(x, t), y) + diff(lambda t: v2(t, y), x)) / 2
    return t11, t22, t12

ALPHAS = {
    'newtonian': lambda x, y: mpf(2),
    'shear_thinning': lambda x, y: mpf(3) / 2,
    'varexp': lambda x, y: 2 - sin(pi * x) / 2,
    'varexp_thick': lambda x, y: 2 + sin(pi * x) / 2,
}

def make_stress(alpha):
    def S(x, y):
        t11, t22, t12 = T(x, y)
        r = sqrt(t11**2 + t22**2 + 2 * t12**2)
        mu = (1 + r) ** (alpha(x, y) - 2)
        return mu * t11, mu * t22, mu * t12
    return S

def forcing(alpha, x, y):
    S = make_stress(alpha)
    dS11dx = diff(lambda t: S(t, y)[0], x)
    dS12dy = diff(lambda t: S(x, t)[2], y)
    dS12dx = diff(lambda t: S(t, y)[2], x)
    dS22dy = diff(lambda t: S(x, t)[1], y)
    c1 = v1(x, y) * diff(lambda t: v1(t, y), x) + v2(x, y) * diff(lambda t: v1(x, t), y)
    c2 = v1(x, y) * diff(lambda t: v2(t, y), x) + v2(x, y) * diff(lambda t: v2(x, t), y)
    gp1 = diff(lambda t: cos(pi * t) * cos(pi * y), x)
    gp2 = diff(lambda t: cos(pi * x) * cos(pi * t), y)
    return -(dS11dx + dS12dy) + c1 + gp1, -(dS12dx + dS22dy) + c2 + gp2

POINTS = [(mpf(3)/10, mpf(7)/10), (mpf(13)/100, mpf(41)/100), (mpf(1)/2, mpf(1)/4),
          (mpf(77)/100, mpf(77)/100), (mpf(9)/10, mpf(1)/10)]

for name, alpha in ALPHAS.items():
    for (px, py) in POINTS:
        f1, f2 = forcing(alpha, px, py)
        print(f"{name},{mp.nstr(px, 5)},{mp.nstr(py, 5)},{mp.nstr(f1, 25)},{mp.nstr(f2, 25)}")
