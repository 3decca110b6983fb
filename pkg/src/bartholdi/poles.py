"""Pole structure of the Bartholdi zeta function.

Pole orders are always exact (synthetic division over the rationals);
only pole locations for the strip / critical-line checks are numeric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import (
    ONE,
    Q,
    U,
    BiPoly,
    RationalFunction,
    adjugate,
    as_rational,
    charpoly,
    format_rational,
    matmul,
    nullspace_exact,
    root_multiplicity,
    solve_on_complement,
    square_free_decomposition,
    upoly_divmod,
    upoly_eval,
    upoly_gcd,
    upoly_deriv,
)
from .errors import DegenerateStrip, ForbiddenU, NotRegular
from .graph_core import Digraph, build_matrices, graph_info, laplacian, spanning_tree_count
from .zeta import edge_zeta_inverse_at, sigma_matrix, vertex_determinant

DEFAULT_TOL = 1e-9


@dataclass
class Verdict:
    name: str
    status: str  # "holds" | "violated" | "not_applicable"
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    def as_dict(self) -> dict:
        return {"check": self.name, "verdict": self.status, **_plain(self.details)}


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, float):
        return _round(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _plain(obj.item())
    return obj


def _round(x: float) -> float:
    if math.isinf(x) or math.isnan(x):
        return x
    return float(f"{x:.12g}")


# --------------------------------------------------------------------------
# strip bounds


@dataclass(frozen=True)
class StripBounds:
    """Annulus R_min <= |q| <= R_max; ``None`` marks an unbounded R_max."""

    u0: object
    R_min: Fraction | float
    R_max: Fraction | float | None
    min_branch: str
    max_branch: str

    def contains(self, magnitude: float, tol: float) -> bool:
        lo = float(self.R_min)
        if magnitude < lo - tol * max(1.0, lo):
            return False
        if self.R_max is None:
            return True
        hi = float(self.R_max)
        return magnitude <= hi + tol * max(1.0, hi)


def critical_strip_bounds(g: Digraph, u0) -> StripBounds:
    """Bounds from the singular values {|u+t_v|} and |1-u| of B_u.

    R_min is the reciprocal of the largest candidate and R_max the reciprocal
    of the smallest, which reproduces every branch of the piecewise formula
    (including the regular case with a single distinct degree).
    """
    if isinstance(u0, complex):
        u = u0
        mag = abs
    else:
        u = as_rational(u0)

        def mag(z):
            return abs(z)

    cands = [("|u-1|", mag(u - 1))]
    for i, t in enumerate(g.distinct_t, start=1):
        cands.append((f"|u+t~{i}|", mag(u + t)))
    big = max(cands, key=lambda c: c[1])
    small = min(cands, key=lambda c: c[1])
    r_min = 1 / big[1] if isinstance(big[1], float) else Fraction(1) / big[1]
    if small[1] == 0:
        r_max = None
        max_branch = f"unbounded ({small[0]} = 0)"
    else:
        r_max = 1 / small[1] if isinstance(small[1], float) else Fraction(1) / small[1]
        max_branch = f"1/{small[0]}"
    return StripBounds(u0, r_min, r_max, f"1/{big[0]}", max_branch)


# --------------------------------------------------------------------------
# numeric poles


@dataclass
class Pole:
    value: complex
    multiplicity: int
    re_s: float | None = None
    kind: str = "nontrivial"

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass
class PoleReport:
    u0: object
    poles: list[Pole]
    r_G: float | None
    r_G_prime: float | None
    order_plus: int
    order_minus: int
    degenerate_strip: bool
    poles_at_infinity: int
    tol: float
    rh: dict | None = None

    def s_value(self, q: complex) -> float:
        if self.degenerate_strip or self.r_G is None:
            raise DegenerateStrip("r_G = r'_G: the s-parametrisation is undefined")
        return _re_s(abs(q), self.r_G, self.r_G_prime)


def _re_s(mag: float, r: float, r_prime: float) -> float:
    # |q| = r^s r'^(1-s): s = 0 on the outer boundary, s = 1 on the inner one
    return (math.log(r_prime) - math.log(mag)) / (math.log(r_prime) - math.log(r))


def _numeric_roots(coeffs: list) -> list[complex]:
    """Roots of a square-free rational polynomial, polished by Newton steps."""
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    if deg == 1:
        return [complex(-Fraction(coeffs[0]) / Fraction(coeffs[1]))]
    hi = [float(c) for c in reversed(coeffs)]
    roots = np.roots(hi)
    fc = [complex(float(c)) for c in coeffs]
    dc = [i * c for i, c in enumerate(fc)][1:]
    out = []
    for z in roots:
        z = complex(z)
        for _ in range(4):
            fz = upoly_eval(fc, z)
            dz = upoly_eval(dc, z)
            if dz == 0:
                break
            step = fz / dz
            z -= step
            if abs(step) <= 1e-17 * max(1.0, abs(z)):
                break
        out.append(z)
    return out


def exact_poles(g: Digraph, u0) -> tuple[list[tuple[list, int]], int]:
    """Square-free factors (with multiplicity) of zeta^{-1}(q, u0) and the q-degree deficit."""
    p = edge_zeta_inverse_at(g, u0).q_coeffs()
    deficit = g.n_directed - (len(p) - 1)
    if len(p) <= 1:
        return [], deficit
    _, parts = square_free_decomposition(p)
    return parts, deficit


def poles_numeric(g: Digraph, u0, tol: float = DEFAULT_TOL) -> PoleReport:
    u0 = as_rational(u0)
    if u0 == 1:
        raise ForbiddenU("u = 1 makes q = (1-u)^{-1} undefined")
    parts, deficit = exact_poles(g, u0)
    poles: list[Pole] = []
    for factor, mult in parts:
        for z in _numeric_roots(factor):
            poles.append(Pole(z, mult))
    poles = _cluster(poles, tol)
    poles.sort(key=lambda p: (round(p.magnitude, 9), round(math.atan2(p.value.imag, p.value.real), 9)))
    order_plus = pole_order_at(g, u0, +1)
    order_minus = pole_order_at(g, u0, -1)
    if poles:
        r = min(p.magnitude for p in poles)
        rp = max(p.magnitude for p in poles)
        degenerate = abs(rp - r) <= tol * rp
    else:
        r = rp = None
        degenerate = True
    if not degenerate:
        for p in poles:
            p.re_s = _re_s(p.magnitude, r, rp)
    for p in poles:
        p.kind = _classify(p.value, g, u0, tol)
    return PoleReport(u0, poles, r, rp, order_plus, order_minus, degenerate, deficit, tol)


def _cluster(poles: list[Pole], tol: float) -> list[Pole]:
    out: list[Pole] = []
    for p in poles:
        for o in out:
            if abs(o.value - p.value) <= tol * max(1.0, abs(p.value)):
                o.multiplicity += p.multiplicity
                break
        else:
            out.append(Pole(p.value, p.multiplicity))
    return out


def _classify(z: complex, g: Digraph, u0, tol: float) -> str:
    def near(x) -> bool:
        return abs(z - float(x)) <= tol * max(1.0, abs(float(x)))

    inv = Fraction(1) / (1 - u0)
    if near(inv):
        return "trivial:+1/(1-u)"
    if near(-inv):
        return "trivial:-1/(1-u)"
    t = g.regular_t()
    if t is not None and t + u0 != 0:
        if near(Fraction(1) / (t + u0)):
            return "trivial:1/(t+u)"
        if near(-Fraction(1) / (t + u0)):
            return "bipartite-mirror:-1/(t+u)"
    return "nontrivial"


def pole_order_at(g: Digraph, u0, sign: int) -> int:
    """Exact order of the pole at q = sign/(1-u0)."""
    u0 = as_rational(u0)
    if u0 == 1:
        raise ForbiddenU("u = 1 is excluded")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    p = edge_zeta_inverse_at(g, u0)
    return root_multiplicity(p, Fraction(sign) / (1 - u0))


# --------------------------------------------------------------------------
# boundary poles


def boundary_pole_simplicity(g: Digraph, u0, tol: float = DEFAULT_TOL) -> Verdict:
    """Real positive simple pole at r_G (u >= 0) or at r'_G (u <= -t~_M + 1)."""
    u0 = as_rational(u0)
    t_max = g.distinct_t[-1]
    targets = []
    if u0 >= 0:
        targets.append("r_G")
    if u0 <= -t_max + 1:
        targets.append("r_G_prime")
    if not targets:
        return Verdict("boundary-simple", "not_applicable", {"u": format_rational(u0), "reason": "0 > u > -t~_M + 1"})
    rep = poles_numeric(g, u0, tol)
    details: dict = {"u": format_rational(u0)}
    ok = True
    for target in targets:
        radius = rep.r_G if target == "r_G" else rep.r_G_prime
        if radius is None or (target == "r_G_prime" and rep.poles_at_infinity):
            details[target] = {"found": False, "reason": "no finite boundary"}
            ok = False
            continue
        on_circle = [p for p in rep.poles if abs(p.magnitude - radius) <= tol * max(1.0, radius)]
        real_pos = [p for p in on_circle if abs(p.value.imag) <= tol and p.value.real > 0]
        simple = len(real_pos) == 1 and real_pos[0].multiplicity == 1
        if simple:
            z = real_pos[0].value
            gap = min((abs(p.value - z) for p in rep.poles if p is not real_pos[0]), default=math.inf)
            simple = gap > tol
        else:
            gap = None
        details[target] = {
            "radius": radius,
            "real_positive_pole": real_pos[0].value.real if real_pos else None,
            "multiplicity": real_pos[0].multiplicity if real_pos else 0,
            "gap": gap,
        }
        ok = ok and simple
    return Verdict("boundary-simple", "holds" if ok else "violated", details)


def _require_regular(g: Digraph) -> int:
    t = g.regular_t()
    if t is None:
        raise NotRegular(f"{g.name or 'graph'} is not regular")
    return t


def regular_boundary_poles(g: Digraph, u0) -> Verdict:
    """q = 1/(1-u) and q = 1/(t+u) are exact roots whose magnitudes are {R_min, R_max}."""
    u0 = as_rational(u0)
    t = _require_regular(g)
    if u0 == 1 or u0 == -t:
        raise ForbiddenU(f"u = {format_rational(u0)} is excluded for t = {t}")
    p = edge_zeta_inverse_at(g, u0)
    a = Fraction(1) / (1 - u0)
    b = Fraction(1) / (t + u0)
    ma = root_multiplicity(p, a)
    mb = root_multiplicity(p, b)
    bounds = critical_strip_bounds(g, u0)
    mags = sorted([abs(a), abs(b)])
    saturated = bounds.R_max is not None and mags == sorted([bounds.R_min, bounds.R_max])
    status = "holds" if ma >= 1 and mb >= 1 and saturated else "violated"
    return Verdict(
        "regular-boundary",
        status,
        {
            "u": format_rational(u0),
            "pole_1/(1-u)": a,
            "order_1/(1-u)": ma,
            "pole_1/(t+u)": b,
            "order_1/(t+u)": mb,
            "R_min": bounds.R_min,
            "R_max": bounds.R_max,
        },
    )


# --------------------------------------------------------------------------
# Riemann hypothesis


def _adjacency_charpoly(g: Digraph) -> list:
    m = build_matrices(g)
    return charpoly(m.A.tolist())


def rh_check(g: Digraph, u0, tol: float = DEFAULT_TOL) -> dict:
    """Spectral hypothesis |lambda| < 2 sqrt|(1-u)(t+u)| and the critical-line conclusion."""
    u0 = as_rational(u0)
    t = _require_regular(g)
    c = (1 - u0) * (t + u0)
    if c == 0:
        raise ForbiddenU(f"(1-u)(t+u) vanishes at u = {format_rational(u0)}")
    bound_sq = 4 * abs(c)

    chi = _adjacency_charpoly(g)
    rest, rem = upoly_divmod(chi, [-(t + 1), 1])  # drop one copy of lambda = t+1
    assert not rem
    # exact tie test: a remaining eigenvalue with lambda^2 = 4|c|
    tie = upoly_gcd(rest, [-bound_sq, 0, 1]) if len(rest) > 1 else [1]
    eig = sorted(np.linalg.eigvalsh(build_matrices(g).A.astype(float)))
    eig.remove(max(eig))
    failing = []
    for lam in eig:
        if lam * lam > float(bound_sq) - 1e-9 * float(bound_sq):
            if lam * lam < float(bound_sq) + 1e-9 * float(bound_sq) and len(tie) <= 1:
                continue
            failing.append(lam)
    hypothesis = not failing

    target = abs(c) ** -0.5 if isinstance(c, int) else float(abs(c)) ** -0.5
    rep = poles_numeric(g, u0, tol)
    bipartite = graph_info(g).is_bipartite
    deviations = []
    mirror = []
    count = 0
    for p in rep.poles:
        if p.kind.startswith("trivial"):
            continue
        if p.kind.startswith("bipartite-mirror"):
            mirror.append(p.value)
            continue
        deviations.append(abs(p.magnitude - target))
        count += p.multiplicity
    max_dev = max(deviations, default=0.0)
    on_line = max_dev <= tol * max(1.0, target)
    if not hypothesis:
        verdict = "hypothesis_fails"
    else:
        verdict = "holds" if on_line else "violated"
    return {
        "u": format_rational(u0),
        "t": t,
        "c": c,
        "c_positive": c > 0,
        "hypothesis_holds": hypothesis,
        "failing_eigenvalues": [_round(x) for x in failing],
        "critical_magnitude": target,
        "nontrivial_poles": count,
        "all_on_critical_line": on_line,
        "max_deviation": max_dev,
        "bipartite_mirror_poles": mirror if bipartite else [],
        "verdict": verdict,
    }


# --------------------------------------------------------------------------
# pole orders at +-(1-u)^{-1}


@dataclass(frozen=True)
class MPConditionResult:
    value: Fraction | int
    n_edges: int

    @property
    def condition_holds(self) -> bool:
        return self.value != self.n_edges


def mp_condition(g: Digraph) -> MPConditionResult:
    """d . Delta^+ d, evaluated through the mean-free degree vector."""
    d = g.degrees
    mean = g.mean_degree
    x = solve_on_complement(laplacian(g), [di - mean for di in d])
    value = sum(di * xi for di, xi in zip(d, x))
    return MPConditionResult(as_rational(value), g.n_edges)


def _generic_points(g: Digraph) -> list:
    us = g.u_star
    pts = []
    for off in (Fraction(1, 7), Fraction(-2, 11), Fraction(3, 5)):
        x = as_rational(us + off)
        if x != 1 and x != us:
            pts.append(x)
    return pts[:2]


def enhancement_check(g: Digraph) -> Verdict:
    """Order of q = (1-u)^{-1}: n_E-n_V+1 off u_*, enhanced at u_* (exactly +1 under the MP condition)."""
    us = g.u_star
    assert us != 1
    k = g.n_edges - g.n_vertices
    tree = k == -1
    mp = mp_condition(g)
    off = {format_rational(x): pole_order_at(g, x, +1) for x in _generic_points(g)}
    at = pole_order_at(g, us, +1)
    base = 0 if tree else k + 1
    ok = all(v == base for v in off.values()) and at >= k + 2
    if mp.condition_holds:
        ok = ok and at == k + 2
    return Verdict(
        "enhancement",
        "holds" if ok else "violated",
        {
            "u_star": us,
            "order_off_u_star": off,
            "order_at_u_star": at,
            "expected_off": base,
            "expected_at": k + 2 if mp.condition_holds else f">= {k + 2}",
            "mp_value": mp.value,
        },
    )


def minus_pole_check(g: Digraph, u_values=None) -> Verdict:
    """Order at q = -(1-u)^{-1}: n_E-n_V (or absent) off bipartite, equal to the plus order on bipartite graphs."""
    info = graph_info(g)
    if u_values is None:
        u_values = [0, Fraction(1, 2), -3, g.u_star] + _generic_points(g)
    k = g.n_edges - g.n_vertices
    rows = {}
    ok = True
    for u0 in u_values:
        u0 = as_rational(u0)
        if u0 == 1:
            continue
        plus = pole_order_at(g, u0, +1)
        minus = pole_order_at(g, u0, -1)
        rows[format_rational(u0)] = {"order_plus": plus, "order_minus": minus}
        if info.is_bipartite:
            ok = ok and plus == minus
        else:
            ok = ok and minus == max(k, 0)
    return Verdict("minus-pole", "holds" if ok else "violated", {"bipartite": info.is_bipartite, "orders": rows})


# --------------------------------------------------------------------------
# Sigma lemmas


def _clear_at_reciprocal(p: BiPoly, degree: int) -> BiPoly:
    """(1-u)^degree * p(1/(1-u), u), a polynomial in u."""
    out = BiPoly()
    one_minus_u = ONE - U
    for i in range(p.degree_q() + 1):
        ci = p.coeff_q(i)
        if ci:
            out = out + ci * one_minus_u ** (degree - i)
    return out


def _eval_q(p: BiPoly, q0) -> Fraction | int:
    return p.evaluate(q=q0, u=0) if p.degree_u() <= 0 else p.evaluate(q=q0).constant_value()


@dataclass
class SigmaLemmaReport:
    kappa: int
    u_star: object
    results: dict

    @property
    def holds(self) -> bool:
        return all(self.results.values())


def sigma_lemma_checks(g: Digraph) -> SigmaLemmaReport:
    """Adjugate, first- and second-derivative and trace identities at q = (1-u)^{-1}."""
    n = g.n_vertices
    kappa = spanning_tree_count(g)
    us = g.u_star
    one_minus_u = ONE - U
    sigma = sigma_matrix(g)
    results = {}

    # (a) adjugate at the critical point, u symbolic
    cleared = [[_clear_at_reciprocal(x, 2) for x in row] for row in sigma]
    adj = adjugate(cleared)
    expected = RationalFunction(BiPoly.const(kappa), one_minus_u ** (n - 1))
    scale = one_minus_u ** (2 * (n - 1))
    results["adjugate"] = all(RationalFunction(a, scale) == expected for row in adj for a in row)

    # (b) first q-derivative of det Sigma, u symbolic
    det = vertex_determinant(g)
    d1 = det.deriv_q()
    deg = max(d1.degree_q(), 0)
    lhs = RationalFunction(_clear_at_reciprocal(d1, deg), one_minus_u**deg)
    rhs = RationalFunction((U - us) * (2 * kappa * n), one_minus_u ** (n - 1))
    results["first_derivative"] = lhs == rhs

    # (c) second q-derivative at u = u_*
    q0 = Fraction(1) / (1 - us)
    mp = mp_condition(g)
    det_star = det.evaluate(u=us)
    second = det_star.deriv_q().deriv_q().evaluate(q=q0, u=0)
    target = Fraction(-2 * kappa) / Fraction(1 - us) ** (n - 2) * (mp.value - g.n_edges)
    results["second_derivative"] = second == target

    # (d) Tr(Sigma_adj' Sigma') at the critical point and u = u_*
    sig_star = sigma_matrix(g, us)
    adj_star = adjugate(sig_star)
    adj_d = [[BiPoly.coerce(a).deriv_q() for a in row] for row in adj_star]
    sig_d = [[x.deriv_q() for x in row] for row in sig_star]
    ev = [[x.evaluate(q=q0, u=0) for x in row] for row in adj_d]
    sv = [[x.evaluate(q=q0, u=0) for x in row] for row in sig_d]
    prod = matmul(ev, sv)
    trace = sum(prod[i][i] for i in range(n))
    results["trace_identity"] = trace == Fraction(-2 * kappa) / Fraction(1 - us) ** (n - 2) * mp.value
    return SigmaLemmaReport(kappa, us, results)


# --------------------------------------------------------------------------
# eigenvectors of the bump operator


@dataclass
class BumpEigenvectors:
    minus_basis: list  # eigenvalue +(1-u)
    plus_basis: list  # eigenvalue -(1-u)
    relations_hold: bool

    @property
    def dim_minus(self) -> int:
        return len(self.minus_basis)

    @property
    def dim_plus(self) -> int:
        return len(self.plus_basis)


def bump_eigenvectors(g: Digraph) -> BumpEigenvectors:
    m = build_matrices(g)
    ker_l = nullspace_exact(m.L.T.tolist())
    ker_lt = nullspace_exact(m.L_tilde.T.tolist())
    minus = [list(a) + [-x for x in a] for a in ker_l]
    plus = [list(a) + list(a) for a in ker_lt]
    b = m.B_u.tolist()
    ok = True
    for vecs, eig in ((minus, ONE - U), (plus, U - ONE)):
        for w in vecs:
            for r, row in enumerate(b):
                lhs = BiPoly()
                for c, x in enumerate(row):
                    if w[c] and x:
                        lhs = lhs + x * w[c]
                if lhs != eig * w[r]:
                    ok = False
    return BumpEigenvectors(minus, plus, ok)


def singular_values_check(g: Digraph, u0, tol: float = DEFAULT_TOL) -> Verdict:
    """Singular values of B_u against {|d_v + u - 1|} and |1-u| repeated 2n_E - n_V times."""
    u0 = as_rational(u0)
    m = build_matrices(g)
    b = np.array([[float(x) for x in row] for row in m.B_at(u0)])
    sv = np.sort(np.linalg.svd(b, compute_uv=False))
    expected = [abs(float(d + u0 - 1)) for d in g.degrees]
    expected += [abs(float(1 - u0))] * (g.n_directed - g.n_vertices)
    expected = np.sort(np.array(expected))
    dev = float(np.max(np.abs(sv - expected)))
    scale = max(1.0, float(np.max(expected)))
    return Verdict(
        "singular-values",
        "holds" if dev <= tol * scale else "violated",
        {"u": format_rational(u0), "max_deviation": dev, "singular_values": sv.tolist()},
    )
