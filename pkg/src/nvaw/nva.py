"""Nonlocal vertex algebras with finite-dimensional underlying space.

The vertex operator is stored as a SeriesMap sending a pair of basis labels
(u, v) to the vector Y(u,x)v, a Laurent polynomial in the distinguished
variable "x".  All axiom checks report a certified outcome per instance:
an identity can hold exactly, hold on the truncation window only, fail with
a witness, or fail to admit a clearing exponent k below the cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .series import DEFAULT_RANGE, Q, Series, window_equal, Eq
from .linalg import SeriesMap, SeriesVector, Space, basis_tuples


DEFAULT_KMAX = 10


class Outcome(Enum):
    EXACT_PASS = "exact-pass"
    WINDOW_PASS = "window-pass"
    FAIL = "fail"
    NO_K_FOUND = "no-k-found"

    @property
    def ok(self):
        return self in (Outcome.EXACT_PASS, Outcome.WINDOW_PASS)


@dataclass
class CheckItem:
    name: str
    outcome: Outcome
    detail: str = ""

    @property
    def ok(self):
        return self.outcome.ok


@dataclass
class CheckReport:
    title: str
    items: list = field(default_factory=list)

    def add(self, name, outcome, detail=""):
        self.items.append(CheckItem(name, outcome, detail))

    def extend(self, other):
        self.items.extend(other.items)

    @property
    def ok(self):
        return all(item.ok for item in self.items)

    @property
    def exact(self):
        return all(item.outcome is Outcome.EXACT_PASS for item in self.items)

    def failures(self):
        return [item for item in self.items if not item.ok]

    def summary(self):
        lines = [f"== {self.title}: {'PASS' if self.ok else 'FAIL'} "
                 f"({len(self.items)} checks)"]
        for item in self.items:
            mark = "ok " if item.ok else "FAIL"
            lines.append(f"  [{mark}] {item.name}: {item.outcome.value}"
                         + (f" ({item.detail})" if item.detail else ""))
        return "\n".join(lines)


def eq_outcome(res):
    if res.kind is Eq.EXACT:
        return Outcome.EXACT_PASS
    if res.kind is Eq.WINDOW:
        return Outcome.WINDOW_PASS
    return Outcome.FAIL


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Nva:
    """A finite-dimensional nonlocal vertex algebra (V, Y, 1)."""

    name: str
    space: Space
    vacuum: str
    y: SeriesMap  # (V, V) -> (V,), series in "x"

    def __post_init__(self):
        assert self.vacuum in self.space.basis
        assert self.y.domain == (self.space, self.space)
        assert self.y.codomain == (self.space,)

    def y_at(self, var):
        if var == "x":
            return self.y
        return self.y.transform(lambda s: s.rename({"x": var}))

    def vacuum_vec(self):
        return SeriesVector.basis((self.space,), (self.vacuum,))

    def vertex(self, u, v, var="x"):
        """Y(u, var) v for basis labels u, v."""
        return self.y_at(var).column((u, v))


@dataclass(frozen=True)
class NvaModule:
    """A module W over a nonlocal vertex algebra."""

    name: str
    algebra: Nva
    space: Space
    yw: SeriesMap  # (V, W) -> (W,), series in "x"

    def __post_init__(self):
        assert self.yw.domain == (self.algebra.space, self.space)
        assert self.yw.codomain == (self.space,)

    def yw_at(self, var):
        if var == "x":
            return self.yw
        return self.yw.transform(lambda s: s.rename({"x": var}))


def adjoint_module(nva):
    return NvaModule(f"{nva.name}.adjoint", nva, nva.space, nva.y)


# ---------------------------------------------------------------------------
# vacuum axioms


def check_vacuum(nva, rng=DEFAULT_RANGE):
    rep = CheckReport(f"{nva.name}: vacuum axioms")
    one = nva.vacuum
    for v in nva.space.basis:
        got = nva.vertex(one, v)
        want = SeriesVector.basis((nva.space,), (v,))
        res = window_equal_vec(got, want)
        rep.add(f"Y(1,x){v} == {v}", eq_outcome(res), witness(res))
    for v in nva.space.basis:
        creation = nva.vertex(v, one)
        poly = all(s.is_polynomial() for s in creation.entries.values())
        limit = creation.transform(lambda s: s.extract("x", 0) if "x" in s.variables else s)
        want = SeriesVector.basis((nva.space,), (v,))
        ok = poly and not (limit - want).entries
        if ok:
            exact = creation.exact()
            rep.add(f"Y({v},x)1 regular with limit {v}",
                    Outcome.EXACT_PASS if exact else Outcome.WINDOW_PASS)
        else:
            rep.add(f"Y({v},x)1 regular with limit {v}", Outcome.FAIL,
                    "negative powers present" if not poly else "wrong limit")
    return rep


def window_equal_vec(a, b, rng=None):
    """Certified equality of SeriesVectors: worst entry-wise verdict."""
    diff = a - b
    for key in sorted(diff.entries):
        s = diff.entries[key]
        if s.coeffs:
            wit = min(s.coeffs)
            from .series import EqResult
            return EqResult(Eq.UNEQUAL, (key, wit))
    if a.exact() and b.exact():
        from .series import EqResult
        return EqResult(Eq.EXACT)
    from .series import EqResult
    return EqResult(Eq.WINDOW)


def witness(res):
    return f"witness {res.witness}" if res.witness is not None else ""


# ---------------------------------------------------------------------------
# weak associativity


def double_product(yw_outer, yw_inner, u, v, w, spaces, var1="x1", var2="x2"):
    """Y(u,var1) Y(v,var2) w as a SeriesVector over the last codomain."""
    vec = SeriesVector.basis(spaces, (u, v, w))
    vec = yw_inner.apply(vec, (1, 2))
    return yw_outer.apply(vec, (0, 1))


def pole_order(vec, var):
    """Smallest k >= 0 with var^k * vec polynomial in var."""
    k = 0
    for s in vec.entries.values():
        if var in s.variables:
            k = max(k, -min(0, s.min_degree(var)))
    return k


def clearing_exponent(vec, var, kmax):
    k = pole_order(vec, var)
    return k if k <= kmax else None


def check_weak_associativity(nva, rng=DEFAULT_RANGE, kmax=DEFAULT_KMAX):
    """(x0+x2)^k Y(u,x0+x2) Y(v,x2) w == (x0+x2)^k Y(Y(u,x0)v,x2) w."""
    rep = CheckReport(f"{nva.name}: weak associativity")
    rep.extend(weak_associativity_items(
        nva.y_at, nva.y_at, (nva.space,) * 3, rng, kmax))
    return rep


def weak_associativity_items(outer_at, inner_at, spaces, rng, kmax,
                             algebra_y_at=None):
    """Shared engine for algebra and module weak associativity.

    outer_at/inner_at produce the tables acting on W; algebra_y_at (defaults
    to outer_at) supplies the inner product Y(u,x0)v on V.
    """
    if algebra_y_at is None:
        algebra_y_at = outer_at
    rep = CheckReport("weak associativity")
    yx1, yx2 = outer_at("x1"), inner_at("x2")
    yx0, ywx2 = algebra_y_at("x0"), inner_at("x2")
    for (u, v, w) in basis_tuples(spaces):
        lhs12 = double_product(yx1, yx2, u, v, w, spaces)
        k = clearing_exponent(lhs12, "x1", kmax)
        if k is None:
            rep.add(f"assoc({u},{v},{w})", Outcome.NO_K_FOUND,
                    f"pole order exceeds kmax={kmax}")
            continue
        xk = Series.monomial("x1", k, rng)
        cleared = lhs12.transform(lambda s: s * xk)
        lhs = cleared.transform(
            lambda s: s.substitute_sum("x1", "x0", "x2", rng))
        sumk = Series.monomial("x1", k, rng).substitute_sum(
            "x1", "x0", "x2", rng)
        inner = SeriesVector.basis(spaces, (u, v, w))
        inner = yx0.apply(inner, (0, 1))      # Y(u,x0)v ⊗ w
        rhs0 = ywx2.apply(inner, (0, 1))      # Y(Y(u,x0)v,x2) w
        rhs = rhs0.transform(lambda s: s * sumk)
        res = window_equal_vec(lhs, rhs)
        rep.add(f"assoc({u},{v},{w}) k={k}", eq_outcome(res), witness(res))
    return rep


# ---------------------------------------------------------------------------
# the canonical derivation D and its exponential


def compute_D(nva):
    """D(v) = d/dx Y(v,x)1 at x=0, as a SeriesMap (V,) -> (V,)."""
    sp = (nva.space,)
    cols = {}
    for v in nva.space.basis:
        creation = nva.vertex(v, nva.vacuum)
        cols[(v,)] = creation.transform(lambda s: s.extract("x", 1))
    return SeriesMap(sp, sp, cols)


def scalar_of(vec):
    """Constant value of a one-leg SeriesVector known to be x-free."""
    out = {}
    for key, s in vec.entries.items():
        assert not s.variables or all(not any(e) for e in s.coeffs)
        out[key] = s.coeff(() if not s.variables else (0,) * len(s.variables))
    return out


def exp_xD(nva, var="x", rng=DEFAULT_RANGE, dmap=None):
    """e^{var * D} as a SeriesMap (V,) -> (V,); exact when D is nilpotent."""
    import math

    sp = (nva.space,)
    D = compute_D(nva) if dmap is None else dmap
    hi = rng[1]
    cols = {}
    for v in nva.space.basis:
        acc = SeriesVector.zero(sp)
        term = SeriesVector.basis(sp, (v,))
        k = 0
        truncated = False
        while not term.is_zero():
            if k > hi:
                truncated = True
                break
            mono = Series.monomial(var, k, rng, coeff=Q(1, math.factorial(k)))
            acc = acc + term.transform(lambda s, m=mono: s * m)
            term = D.apply(term)
            k += 1
        if truncated:
            acc = acc.transform(
                lambda s: Series(s.variables, s.coeffs, s.window, False))
        cols[(v,)] = acc
    return SeriesMap(sp, sp, cols)


def check_D_bracket(nva, rng=DEFAULT_RANGE):
    """[D, Y(v,x)] == Y(Dv,x) == d/dx Y(v,x) on every pair."""
    rep = CheckReport(f"{nva.name}: D-bracket")
    D = compute_D(nva)
    for (v, u) in basis_tuples((nva.space, nva.space)):
        yvu = nva.vertex(v, u)
        # [D, Y(v,x)]u = D(Y(v,x)u) - Y(v,x)(Du)
        term1 = D.apply(yvu)
        du = D.apply(SeriesVector.basis((nva.space,), (u,)))
        term2 = SeriesVector.zero((nva.space,))
        for (lbl,), s in du.entries.items():
            term2 = term2 + nva.vertex(v, lbl).transform(lambda t, c=s: t * c)
        bracket = term1 - term2
        dv = D.apply(SeriesVector.basis((nva.space,), (v,)))
        ydv = SeriesVector.zero((nva.space,))
        for (lbl,), s in dv.entries.items():
            ydv = ydv + nva.vertex(lbl, u).transform(lambda t, c=s: t * c)
        deriv = yvu.transform(lambda s: s.deriv("x"))
        r1 = window_equal_vec(bracket, ydv)
        r2 = window_equal_vec(ydv, deriv)
        rep.add(f"[D,Y({v},x)]{u} == Y(D{v},x){u}", eq_outcome(r1), witness(r1))
        rep.add(f"Y(D{v},x){u} == d/dx Y({v},x){u}", eq_outcome(r2), witness(r2))
    return rep


# ---------------------------------------------------------------------------
# module axioms


def check_module(mod, rng=DEFAULT_RANGE, kmax=DEFAULT_KMAX, form="substituted"):
    """Module axioms for W over V.

    form="original":   (x0+x2)^k Y_W(u,x0+x2) Y_W(v,x2) w
                        == (x0+x2)^k Y_W(Y(u,x0)v, x2) w
    form="substituted": A_k := (x1-x2)^k Y_W(u,x1) Y_W(v,x2) w, require the
                        substitution x1 -> x2+x0 of A_k to be exact
                        (regularity) and A_k|_{x1=x2+x0} == x0^k Y_W(Y(u,x0)v,x2) w.
    """
    nva = mod.algebra
    rep = CheckReport(f"{mod.name}: module axioms ({form})")
    one = nva.vacuum
    for w in mod.space.basis:
        got = mod.yw_at("x").column((one, w))
        want = SeriesVector.basis((mod.space,), (w,))
        res = window_equal_vec(got, want)
        rep.add(f"Y_W(1,x){w} == {w}", eq_outcome(res), witness(res))

    spaces = (nva.space, nva.space, mod.space)
    if form == "original":
        rep.extend(weak_associativity_items(
            mod.yw_at, mod.yw_at, spaces, rng, kmax, algebra_y_at=nva.y_at))
        return rep

    assert form == "substituted"
    yx1, yx2, yx0 = mod.yw_at("x1"), mod.yw_at("x2"), nva.y_at("x0")
    for (u, v, w) in basis_tuples(spaces):
        prod = double_product(yx1, yx2, u, v, w, spaces)
        k = None
        for kk in range(kmax + 1):
            factor = Series.monomial("x1", 1, rng).substitute_sum(
                "x1", "x1", "x2", rng, 1, -1) ** kk  # (x1-x2)^kk
            ak = prod.transform(lambda s, f=factor: s * f)
            sub = ak.transform(
                lambda s: s.substitute_sum("x1", "x2", "x0", rng))
            if sub.exact():
                k = kk
                break
        if k is None:
            rep.add(f"module({u},{v},{w})", Outcome.NO_K_FOUND,
                    f"no regular k <= {kmax}")
            continue
        inner = SeriesVector.basis(spaces, (u, v, w))
        inner = yx0.apply(inner, (0, 1))
        rhs = yx2.apply(inner, (0, 1))
        x0k = Series.monomial("x0", k, rng)
        rhs = rhs.transform(lambda s: s * x0k)
        res = window_equal_vec(sub, rhs)
        rep.add(f"module({u},{v},{w}) k={k}", eq_outcome(res), witness(res))
    return rep


def check_module_any_k(mod, u, v, w, ks, rng=DEFAULT_RANGE):
    """Second assertion of the equivalent module form: every exponent k for
    which A_k substitutes exactly also satisfies the identity."""
    nva = mod.algebra
    rep = CheckReport(f"{mod.name}: any-regular-k({u},{v},{w})")
    spaces = (nva.space, nva.space, mod.space)
    yx1, yx2, yx0 = mod.yw_at("x1"), mod.yw_at("x2"), nva.y_at("x0")
    prod = double_product(yx1, yx2, u, v, w, spaces)
    for k in ks:
        factor = Series.monomial("x1", 1, rng).substitute_sum(
            "x1", "x1", "x2", rng, 1, -1) ** k
        ak = prod.transform(lambda s, f=factor: s * f)
        sub = ak.transform(lambda s: s.substitute_sum("x1", "x2", "x0", rng))
        if not sub.exact():
            rep.add(f"k={k}", Outcome.NO_K_FOUND, "substitution not regular")
            continue
        inner = SeriesVector.basis(spaces, (u, v, w))
        inner = yx0.apply(inner, (0, 1))
        rhs = yx2.apply(inner, (0, 1))
        x0k = Series.monomial("x0", k, rng)
        rhs = rhs.transform(lambda s: s * x0k)
        res = window_equal_vec(sub, rhs)
        rep.add(f"k={k}", eq_outcome(res), witness(res))
    return rep
