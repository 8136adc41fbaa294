import sympy as sp

x, y = sp.symbols('x y', real=True)
A = sp.Integer(32)
psi = A * x**2*(1-x)**2 * y**2*(1-y)**2
v1 = sp.diff(psi, y)          # velocity components (div-free by construction)
v2 = -sp.diff(psi, x)
T11 = sp.diff(v1, x)
T22 = sp.diff(v2, y)
T12 = sp.Rational(1,2)*(sp.diff(v1, y) + sp.diff(v2, x))
Tn2 = T11**2 + T22**2 + 2*T12**2
Tn  = sp.sqrt(Tn2)
p   = sp.cos(sp.pi*x)*sp.cos(sp.pi*y)

conv1 = v1*sp.diff(v1,x) + v2*sp.diff(v1,y)
conv2 = v1*sp.diff(v2,x) + v2*sp.diff(v2,y)
gp1, gp2 = sp.diff(p,x), sp.diff(p,y)

# Newtonian limit of the stress divergence (also the exact value where |T| == 0)
lim1 = -(sp.diff(T11,x) + sp.diff(T12,y)) + conv1 + gp1
lim2 = -(sp.diff(T12,x) + sp.diff(T22,y)) + conv2 + gp2

cases = {
    'newtonian':      sp.Integer(2),
    'shear_thinning': sp.Rational(3,2),
    'varexp':         2 - sp.Rational(1,2)*sp.sin(sp.pi*x),
    'varexp_thick':   2 + sp.Rational(1,2)*sp.sin(sp.pi*x),
}

def emit(name, exprs, outfile):
    # common subexpression elimination over all outputs of a case
    repl, reduced = sp.cse(exprs, optimizations='basic')
    lines = []
    for sym, ex in repl:
        lines.append(f"  const double {sym} = {sp.ccode(ex)};")
    return lines, [sp.ccode(r) for r in reduced]

out = []
out.append("// generated by tools/codegen/forcing_gen.py -- do not edit by hand")
out.append("// expects <cmath> to be included by the enclosing translation unit")
out.append("")

# velocity / pressure / strain samples shared by all cases
base_exprs = [v1, v2, p, T11, T22, T12, lim1, lim2]
names = ['vel1','vel2','pres','t11','t22','t12','flim1','flim2']
repl, reduced = sp.cse(base_exprs, optimizations='basic')
out.append("namespace gen { namespace base {")
out.append("inline void eval(double x, double y, double* r) {")
for sym, ex in repl:
    out.append(f"  const double {sym} = {sp.ccode(ex)};")
for i, r in enumerate(reduced):
    out.append(f"  r[{i}] = {sp.ccode(r)};  // {names[i]}")
out.append("}")
out.append("}} // namespace gen::base")
out.append("")

for cname, alpha in cases.items():
    mu  = (1 + Tn)**(alpha - 2)
    S11, S22, S12 = mu*T11, mu*T22, mu*T12
    f1 = -(sp.diff(S11,x) + sp.diff(S12,y)) + conv1 + gp1
    f2 = -(sp.diff(S12,x) + sp.diff(S22,y)) + conv2 + gp2
    repl, reduced = sp.cse([f1, f2, Tn2], optimizations='basic')
    out.append(f"namespace gen {{ namespace {cname} {{")
    out.append("inline void force(double x, double y, double* r) {")
    for sym, ex in repl:
        out.append(f"  const double {sym} = {sp.ccode(ex)};")
    out.append(f"  r[0] = {sp.ccode(reduced[0])};")
    out.append(f"  r[1] = {sp.ccode(reduced[1])};")
    out.append(f"  r[2] = {sp.ccode(reduced[2])};  // |T|^2, for the degenerate-point guard")
    out.append("}")
    out.append(f"}}}} // namespace gen::{cname}")
    out.append("")

with open('core/src/forcing_gen.inc', 'w') as f:
    f.write("\n".join(out) + "\n")
print("lines:", len(out))
