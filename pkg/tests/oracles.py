"""Independent sympy-based oracles for cross-checking derived values.

Everything here is deliberately naive: dense sympy expressions, textbook
formulas, no shared code with the package under test.
"""

import itertools

import sympy as sp


def sym_vars(names):
    return [sp.Symbol(n) for n in names]


def sym_bracket(a, b, coords):
    """Lie bracket of component lists of sympy expressions."""
    return [sum(a[j] * sp.diff(b[l], coords[j]) -
                b[j] * sp.diff(a[l], coords[j])
                for j in range(len(coords)))
            for l in range(len(coords))]


def sym_eval(comps, coords, point):
    subs = dict(zip(coords, point))
    return [sp.nsimplify(c).subs(subs) for c in comps]


def sym_rank(rows):
    if not rows:
        return 0
    return sp.Matrix(rows).rank()


def weak_flag_dims(frame, coords, point, max_depth=None):
    """Small growth vector at a point by brute-force left-normed words."""
    n = len(coords)
    if max_depth is None:
        max_depth = n
    levels = [list(frame)]
    values = [sym_eval(f, coords, point) for f in frame]
    dims = [sym_rank(values)]
    while len(dims) < max_depth:
        new = []
        for g in frame:
            for h in levels[-1]:
                new.append(sym_bracket(g, h, coords))
        levels.append(new)
        values += [sym_eval(f, coords, point) for f in new]
        dims.append(sym_rank(values))
        if dims[-1] == dims[-2]:
            dims.pop()
            break
        if dims[-1] == n:
            break
    return tuple(dims)


def strong_flag_dims(frame, coords, point, max_depth=None):
    """Strong derived flag dims by brute-force pairwise brackets."""
    n = len(coords)
    if max_depth is None:
        max_depth = n
    span = list(frame)
    values = [sym_eval(f, coords, point) for f in span]
    dims = [sym_rank(values)]
    while len(dims) < max_depth:
        new = [sym_bracket(a, b, coords)
               for a, b in itertools.combinations(span, 2)]
        span = span + new
        values += [sym_eval(f, coords, point) for f in new]
        dims.append(sym_rank(values))
        if dims[-1] == dims[-2]:
            dims.pop()
            break
        if dims[-1] == n:
            break
    return tuple(dims)


def monge_frame(n):
    """Monge model frame as sympy component lists (oracle copy)."""
    m = n - 3
    coords = sym_vars(["x"] + ["y%d" % i for i in range(m + 1)] + ["z"])
    x1 = [sp.Integer(0)] * n
    x1[0] = sp.Integer(1)
    for i in range(m):
        x1[1 + i] = coords[2 + i]
    x1[n - 1] = coords[1 + m] ** 2
    x2 = [sp.Integer(0)] * n
    x2[1 + m] = sp.Integer(1)
    return [x1, x2], coords


def cartan_jet_frame(k):
    coords = sym_vars(["x"] + ["y%d" % i for i in range(k + 1)])
    n = k + 2
    x1 = [sp.Integer(0)] * n
    x1[0] = sp.Integer(1)
    for i in range(k):
        x1[1 + i] = coords[2 + i]
    x2 = [sp.Integer(0)] * n
    x2[n - 1] = sp.Integer(1)
    return [x1, x2], coords


def poisson_oracle(f, g, base, momenta):
    return sum(sp.diff(f, p) * sp.diff(g, x) - sp.diff(f, x) * sp.diff(g, p)
               for x, p in zip(base, momenta))


def class_trace_oracle(n, frame, coords, base_point, momentum):
    """Cone flag dims trace at one covector, fully in sympy.

    Mirrors the definition: lift generators = vertical annihilator basis
    of D^2 plus corrected lifts of the frame Hamiltonians, then osculate
    with the characteristic field and take ranks at the covector.
    """
    momenta = sym_vars(["P%d" % i for i in range(n)])
    allv = list(coords) + list(momenta)
    x1, x2 = frame
    x3 = sym_bracket(x1, x2, coords)
    x4 = sym_bracket(x1, x3, coords)
    x5 = sym_bracket(x2, x3, coords)

    def ham(x):
        return sum(p * c for p, c in zip(momenta, x))

    h = [ham(x) for x in (x1, x2, x3, x4, x5)]

    def ham_field(f):
        return [sp.diff(f, p) for p in momenta] + \
               [-sp.diff(f, x) for x in coords]

    xc = [sp.expand(h[4] * a - h[3] * b)
          for a, b in zip(ham_field(h[0]), ham_field(h[1]))]
    # vertical annihilator fields of D^2 (generic solve)
    mat = sp.Matrix([x1, x2, x3])
    null = mat.nullspace()
    gens = []
    for v in null:
        gens.append([sp.Integer(0)] * n + [sp.simplify(v[i])
                                           for i in range(n)])
    # corrected lifts: vertical c with <c,X1>=0, <c,X2>=0, <c,X3>=rhs
    for ha, rhs in ((h[0], -h[3]), (h[1], -h[4])):
        cs = sym_vars(["C%d" % i for i in range(n)])
        sols = sp.solve([sum(c * a for c, a in zip(cs, x1)),
                         sum(c * a for c, a in zip(cs, x2)),
                         sum(c * a for c, a in zip(cs, x3)) - rhs],
                        cs, dict=True)
        sol = sols[0]
        free = {ci: sp.Integer(0) for ci in cs if ci not in sol}
        c = [sp.simplify(sol.get(ci, sp.Integer(0)).subs(free))
             for ci in cs]
        w = [a + b for a, b in zip(ham_field(ha),
                                   [sp.Integer(0)] * n + c)]
        gens.append(w)
    point = dict(zip(coords, base_point))
    point.update(zip(momenta, momentum))

    def val(f):
        return [sp.simplify(c).subs(point) for c in f]

    rows = [val(g) for g in gens]
    dims = [sym_rank(rows)]
    frontier = list(gens)
    for _ in range(n):
        new = []
        for g in frontier:
            new.append(sym_bracket(xc, g, allv))
        rows += [val(g) for g in new]
        r = sym_rank(rows)
        dims.append(r)
        if r == dims[-2]:
            break
        frontier = new
    return tuple(dims)


def symmetry_dim_oracle(frame, coords, forms, d):
    """Dimension of the degree-d polynomial symmetry space, brute force."""
    n = len(coords)
    monos = []
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            m = sp.Integer(1)
            for i in combo:
                m *= coords[i]
            monos.append(m)
    coeffs = []
    y = [sp.Integer(0)] * n
    for i in range(n):
        for m in monos:
            c = sp.Symbol("c_%d_%d" % (i, len(coeffs)))
            coeffs.append(c)
            y[i] += c * m
    rows = []
    for x in frame:
        br = sym_bracket(y, x, coords)
        for f in forms:
            e = sp.expand(sum(f[l] * br[l] for l in range(n)))
            if e != 0:
                rows.extend(sp.Poly(e, *coords).coeffs())
    a, _ = sp.linear_eq_to_matrix(rows, coeffs)
    return len(coeffs) - a.rank()
