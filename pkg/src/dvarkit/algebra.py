"""Exact arithmetic layer.

Multivariate polynomials and rational functions over Q, with a
distinguished time variable t, a block monomial order (fiber/auxiliary
variables first, t / parameters / adjoined constants last), Buchberger
Groebner bases, ideal dimension relative to a chosen variable set, and
matrix rank over the coordinate ring of a (user-asserted prime) ideal.

Coefficients are fractions.Fraction throughout; t is an explicit
polynomial variable, so differentiating coefficients means d/dt.
"""

from fractions import Fraction
from math import gcd as int_gcd

from .errors import (
    DenominatorVanishesOnVariety,
    DuplicateVariable,
    UnknownVariable,
    ZeroDenominator,
)
from .kernel import poly_addmul, poly_mul, vec_addmul

ROLE_TIME = "time"
ROLE_FIBER = "fiber"
ROLE_AUX = "aux"
ROLE_PARAM = "param"
ROLE_CONST = "const"

_ROLES = (ROLE_TIME, ROLE_FIBER, ROLE_AUX, ROLE_PARAM, ROLE_CONST)


class VariableRegistry:
    """Ordered list of named variables with roles; order is fixed for life.

    Roles: exactly one 'time' variable at most; 'fiber' and 'aux' make up
    the leading monomial-order block, 'time'/'param'/'const' trail as
    base-field-like symbols.
    """

    __slots__ = ("names", "roles", "_index", "_key_cache")

    def __init__(self, names, roles):
        names = tuple(names)
        roles = tuple(roles)
        if len(names) != len(roles):
            raise ValueError("names and roles must align")
        seen = set()
        for n in names:
            if n in seen:
                raise DuplicateVariable(n)
            seen.add(n)
        for r in roles:
            if r not in _ROLES:
                raise ValueError(f"unknown role {r!r}")
        if sum(1 for r in roles if r == ROLE_TIME) > 1:
            raise ValueError("at most one time variable")
        self.names = names
        self.roles = roles
        self._index = {n: i for i, n in enumerate(names)}
        self._key_cache = {}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, VariableRegistry)
            and self.names == other.names
            and self.roles == other.roles
        )

    def __hash__(self):
        return hash((self.names, self.roles))

    def __repr__(self):
        items = ", ".join(f"{n}:{r}" for n, r in zip(self.names, self.roles))
        return f"VariableRegistry({items})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    def __contains__(self, name):
        return name in self._index

    @property
    def time_index(self):
        for i, r in enumerate(self.roles):
            if r == ROLE_TIME:
                return i
        return None

    @property
    def time_name(self):
        i = self.time_index
        return None if i is None else self.names[i]

    def indices_with_role(self, *roles):
        return tuple(i for i, r in enumerate(self.roles) if r in roles)

    @property
    def fiber_indices(self):
        return self.indices_with_role(ROLE_FIBER)

    @property
    def aux_indices(self):
        return self.indices_with_role(ROLE_AUX)

    def default_blocks(self):
        """Main block (fiber+aux) then tail block (time, params, constants)."""
        main = self.indices_with_role(ROLE_FIBER, ROLE_AUX)
        tail = self.indices_with_role(ROLE_TIME, ROLE_PARAM, ROLE_CONST)
        return (main, tail)

    def order_key(self, blocks=None):
        """Monomial sort key (bigger key = bigger monomial): grevlex per block."""
        if blocks is None:
            blocks = self.default_blocks()
        blocks = tuple(tuple(b) for b in blocks)
        fn = self._key_cache.get(blocks)
        if fn is None:

            def fn(e, _blocks=blocks):
                parts = []
                for block in _blocks:
                    parts.append(sum(e[i] for i in block))
                    parts.append(tuple(-e[i] for i in reversed(block)))
                return tuple(parts)

            self._key_cache[blocks] = fn
        return fn

    def extend(self, names, role):
        """New registry with extra variables of one role appended."""
        return VariableRegistry(self.names + tuple(names), self.roles + (role,) * len(tuple(names)))


class Polynomial:
    """Sparse multivariate polynomial: exponent tuple -> Fraction."""

    __slots__ = ("registry", "terms")

    def __init__(self, registry, terms=None):
        self.registry = registry
        self.terms = {} if terms is None else terms

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, registry):
        return cls(registry)

    @classmethod
    def constant(cls, registry, value):
        q = Fraction(value)
        if q == 0:
            return cls(registry)
        return cls(registry, {(0,) * len(registry): q})

    @classmethod
    def variable(cls, registry, name):
        i = registry.index(name)
        e = [0] * len(registry)
        e[i] = 1
        return cls(registry, {tuple(e): Fraction(1)})

    # -- predicates and basic data ------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.registry), Fraction(0))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, indices):
        if not self.terms:
            return -1
        idx = set(indices)
        return max(sum(x for i, x in enumerate(e) if i in idx) for e in self.terms)

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(i)
        return used

    def leading(self, key=None):
        """(exponent, coefficient) of the largest monomial under the order."""
        if not self.terms:
            return None
        if key is None:
            key = self.registry.order_key()
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------
    def _check(self, other):
        if self.registry is not other.registry and self.registry != other.registry:
            raise ValueError("polynomials over different registries")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.registry, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        poly_addmul(out, other.terms, Fraction(1))
        return Polynomial(self.registry, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.registry, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        poly_addmul(out, other.terms, Fraction(-1))
        return Polynomial(self.registry, out)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(self.registry, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return Polynomial(self.registry)
            return Polynomial(self.registry, {e: c * q for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        return Polynomial(self.registry, poly_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = Polynomial.constant(self.registry, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.registry, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.registry == other.registry and self.terms == other.terms

    def __hash__(self):
        return hash((self.registry.names, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------
    def diff(self, var):
        """Partial derivative with respect to a variable (name or index)."""
        i = self.registry.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ee = list(e)
                ee[i] = k - 1
                out[tuple(ee)] = c * k
        return Polynomial(self.registry, out)

    def coefficient_derivation(self):
        """d/dt of the coefficients; zero when no time variable is registered."""
        i = self.registry.time_index
        if i is None:
            return Polynomial(self.registry)
        return self.diff(i)

    # -- mapping between registries -----------------------------------
    def relabel(self, new_registry):
        """Reinterpret over a registry containing (at least) the same names."""
        pos = [new_registry.index(n) for n in self.registry.names]
        width = len(new_registry)
        out = {}
        for e, c in self.terms.items():
            ee = [0] * width
            for i, x in enumerate(e):
                if x:
                    ee[pos[i]] = x
            out[tuple(ee)] = c
        return Polynomial(new_registry, out)

    # -- evaluation ---------------------------------------------------
    def evaluate(self, values):
        """Exact evaluation; values maps variable name -> Fraction."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e):
                if x:
                    term *= Fraction(values[self.registry.names[i]]) ** x
            total += term
        return total

    def eval_float(self, vec):
        """Float evaluation; vec is indexed by registry position."""
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for i, x in enumerate(e):
                if x:
                    term *= vec[i] ** x
            total += term
        return total

    # -- printing -----------------------------------------------------
    def sorted_terms(self, key=None):
        if key is None:
            key = self.registry.order_key()
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.registry.names
        chunks = []
        for e, c in self.sorted_terms():
            factors = []
            for i, x in enumerate(e):
                if x == 1:
                    factors.append(names[i])
                elif x > 1:
                    factors.append(f"{names[i]}^{x}")
            mono = "*".join(factors)
            if not mono:
                body = _frac_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_frac_str(abs(c))}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self):
        return f"Polynomial({self})"


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# polynomial division, gcd, canonical rational functions
# ---------------------------------------------------------------------------


def _divides(e, f):
    return all(a <= b for a, b in zip(e, f))


def poly_divmod(p, divisors, key=None):
    """Multivariate division: p = sum q_i g_i + r, no term of r divisible
    by any leading term of the divisors."""
    reg = p.registry
    if key is None:
        key = reg.order_key()
    lts = []
    for g in divisors:
        lead = g.leading(key)
        if lead is None:
            raise ZeroDivisionError("zero divisor in basis")
        lts.append(lead)
    work = dict(p.terms)
    quots = [{} for _ in divisors]
    rem = {}
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        for (le, lc), g, q in zip(lts, divisors, quots):
            if _divides(le, e):
                shift = tuple(a - b for a, b in zip(e, le))
                factor = c / lc
                q[shift] = q.get(shift, Fraction(0)) + factor
                poly_addmul(work, g.terms, -factor, shift)
                work.pop(e, None)
                break
        else:
            rem[e] = c
    return [Polynomial(reg, q) for q in quots], Polynomial(reg, rem)


def poly_exact_div(p, d):
    """Exact quotient p/d; raises if the division leaves a remainder."""
    if d.is_constant():
        return p * (1 / d.constant_value())
    (q,), r = poly_divmod(p, [d])
    if not r.is_zero():
        raise ValueError("division is not exact")
    return q


def _integer_normalize(p):
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if p.is_zero():
        return p
    denl = 1
    for c in p.terms.values():
        denl = denl * c.denominator // int_gcd(denl, c.denominator)
    numg = 0
    for c in p.terms.values():
        numg = int_gcd(numg, abs(c.numerator * (denl // c.denominator)))
    scale = Fraction(denl, numg)
    _, lead = p.leading()
    if lead < 0:
        scale = -scale
    return p * scale


def _univar(p, v):
    """View p as univariate in variable index v: degree -> coefficient poly."""
    reg = p.registry
    out = {}
    for e, c in p.terms.items():
        k = e[v]
        ee = list(e)
        ee[v] = 0
        coeff = out.setdefault(k, {})
        ee = tuple(ee)
        coeff[ee] = coeff.get(ee, Fraction(0)) + c
    return {k: Polynomial(reg, t) for k, t in out.items() if t}


def _from_univar(reg, d, v):
    out = {}
    for k, coeff in d.items():
        for e, c in coeff.terms.items():
            ee = list(e)
            ee[v] = k
            out[tuple(ee)] = c
    return Polynomial(reg, out)


def _univar_content(d):
    g = None
    for coeff in d.values():
        g = coeff if g is None else poly_gcd(g, coeff)
        if g.is_constant():
            break
    return g


def _univar_prem(a, b):
    """Pseudo-remainder of univariate-with-polynomial-coefficient dicts."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r.pop(dr)
        r = {k: lb * c for k, c in r.items()}
        for k, c in b.items():
            if k == db:
                continue
            kk = k + dr - db
            nc = r.get(kk, Polynomial.zero(lr.registry)) - lr * c
            if nc.is_zero():
                r.pop(kk, None)
            else:
                r[kk] = nc
    return r


def poly_gcd(a, b):
    """Polynomial gcd over Q, returned with coprime integer coefficients
    and positive leading coefficient (primitive PRS)."""
    if a.is_zero():
        return _integer_normalize(b)
    if b.is_zero():
        return _integer_normalize(a)
    used = a.variables_used() | b.variables_used()
    if not used:
        return Polynomial.constant(a.registry, 1)
    v = max(used)
    ua, ub = _univar(a, v), _univar(b, v)
    if max(ua) == 0:
        # a does not involve v after all (cannot happen with v from `used`)
        pass
    ca, cb = _univar_content(ua), _univar_content(ub)
    cont = poly_gcd(ca, cb)
    pa = {k: poly_exact_div(c, ca) for k, c in ua.items()}
    pb = {k: poly_exact_div(c, cb) for k, c in ub.items()}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while pb:
        r = _univar_prem(pa, pb)
        pa, pb = pb, r
        if pb:
            cc = _univar_content(pb)
            pb = {k: poly_exact_div(c, cc) for k, c in pb.items()}
            pb = _univar_joint_normalize(pb)
    if max(pa) == 0 and next(iter(pa.values())).is_constant():
        return _integer_normalize(cont)
    g = _from_univar(a.registry, pa, v) * cont
    return _integer_normalize(g)


def _univar_joint_normalize(d):
    # one common rational scale for every coefficient: a unit multiple of
    # the whole remainder, so the PRS stays a PRS (scaling coefficients
    # independently would change the polynomial, not just normalize it)
    denl = 1
    for coeff in d.values():
        for c in coeff.terms.values():
            denl = denl * c.denominator // int_gcd(denl, c.denominator)
    numg = 0
    for coeff in d.values():
        for c in coeff.terms.values():
            numg = int_gcd(numg, abs(c.numerator * (denl // c.denominator)))
    if numg == 0:
        return d
    s = Fraction(denl, numg)
    return {k: coeff * s for k, coeff in d.items()}


class RationalFunction:
    """Canonical fraction of polynomials: gcd removed, joint integer
    content cleared, positive leading denominator coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical=False):
        if den is None:
            den = Polynomial.constant(num.registry, 1)
        if _canonical:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDenominator("denominator is the zero polynomial")
        if num.is_zero():
            self.num = Polynomial.zero(num.registry)
            self.den = Polynomial.constant(num.registry, 1)
            return
        g = poly_gcd(num, den)
        if not (g.is_constant() and g.constant_value() == 1):
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
        num, den = _joint_normalize(num, den)
        self.num, self.den = num, den

    @classmethod
    def from_polynomial(cls, p):
        return cls(p)

    @classmethod
    def constant(cls, registry, value):
        return cls(Polynomial.constant(registry, value))

    @classmethod
    def variable(cls, registry, name):
        return cls(Polynomial.variable(registry, name))

    @property
    def registry(self):
        return self.num.registry

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self):
        return self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(self.registry, other)
        if isinstance(other, Polynomial):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDenominator("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("integer exponents only")
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.registry, other)
        return NotImplemented

    def diff(self, var):
        """Quotient-rule partial derivative, canonical form."""
        i = self.registry.index(var) if isinstance(var, str) else var
        return RationalFunction(
            self.num.diff(i) * self.den - self.num * self.den.diff(i),
            self.den * self.den,
        )

    def relabel(self, new_registry):
        return RationalFunction(self.num.relabel(new_registry), self.den.relabel(new_registry))

    def evaluate(self, values):
        d = self.den.evaluate(values)
        if d == 0:
            raise ZeroDenominator("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def eval_float(self, vec):
        return self.num.eval_float(vec) / self.den.eval_float(vec)

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1 or self.num.leading()[1] < 0:
            num = f"({num})"
        if not _reparses_as_den(self.den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"


def _reparses_as_den(den):
    # a denominator may be printed bare only when "num/den" re-parses with
    # den as the whole divisor: one term, either a constant or one plain
    # power of one variable
    if len(den.terms) != 1:
        return False
    (e, c), = den.terms.items()
    nvars = sum(1 for x in e if x)
    if nvars == 0:
        return True
    return nvars == 1 and c == 1


def _joint_normalize(num, den):
    denl = 1
    for c in list(num.terms.values()) + list(den.terms.values()):
        denl = denl * c.denominator // int_gcd(denl, c.denominator)
    numg = 0
    for c in list(num.terms.values()) + list(den.terms.values()):
        numg = int_gcd(numg, abs(c.numerator * (denl // c.denominator)))
    scale = Fraction(denl, numg)
    if den.leading()[1] < 0:
        scale = -scale
    return num * scale, den * scale


def normalize_ratfunc(num, den):
    """Canonical rational function num/den (the RationalFunction constructor)."""
    return RationalFunction(num, den)


def partial_derivative(f, var):
    """Quotient-rule derivative of a rational function or polynomial."""
    if isinstance(f, Polynomial):
        f = RationalFunction(f)
    return f.diff(var)


def coefficient_derivation(p):
    """Differentiate the coefficients (d/dt with t explicit); 0 if no t."""
    return p.coefficient_derivation()


# ---------------------------------------------------------------------------
# ideals: Groebner bases, normal forms, dimension
# ---------------------------------------------------------------------------


class IdealBasis:
    """Generators plus the block monomial order they are read under."""

    __slots__ = ("registry", "generators", "blocks", "groebner")

    def __init__(self, registry, generators, blocks=None, groebner=False):
        self.registry = registry
        self.generators = [g for g in generators if not g.is_zero()]
        self.blocks = tuple(tuple(b) for b in blocks) if blocks is not None else registry.default_blocks()
        self.groebner = groebner

    def order_key(self):
        return self.registry.order_key(self.blocks)

    def __repr__(self):
        gens = "; ".join(str(g) for g in self.generators)
        return f"IdealBasis[{gens}]"


def _monic(p, key):
    lead = p.leading(key)
    return p * (1 / lead[1])


def _spoly(f, g, key):
    ef, cf = f.leading(key)
    eg, cg = g.leading(key)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    sf = tuple(a - b for a, b in zip(lcm, ef))
    sg = tuple(a - b for a, b in zip(lcm, eg))
    reg = f.registry
    t1 = Polynomial(reg, {sf: 1 / cf}) * f
    t2 = Polynomial(reg, {sg: 1 / cg}) * g
    return t1 - t2


def groebner_basis(basis, blocks=None):
    """Reduced Groebner basis (monic generators) under the given block order."""
    reg = basis.registry
    if blocks is None:
        blocks = basis.blocks
    key = reg.order_key(blocks)
    G = []
    for g in basis.generators:
        if not g.is_zero():
            G.append(_monic(g, key))
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    while pairs:
        i, j = pairs.pop(0)
        ei, _ = G[i].leading(key)
        ej, _ = G[j].leading(key)
        # Buchberger's coprimality criterion
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        s = _spoly(G[i], G[j], key)
        _, r = poly_divmod(s, G, key)
        if not r.is_zero():
            r = _monic(r, key)
            pairs.extend((k, len(G)) for k in range(len(G)))
            G.append(r)
    # minimalize
    minimal = []
    leads = [g.leading(key)[0] for g in G]
    for i, g in enumerate(G):
        if any(j != i and _divides(leads[j], leads[i]) and (j < i or leads[j] != leads[i]) for j in range(len(G))):
            continue
        minimal.append(g)
    # inter-reduce
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        if others:
            _, g = poly_divmod(g, others, key)
        if not g.is_zero():
            reduced.append(_monic(g, key))
    reduced.sort(key=lambda p: key(p.leading(key)[0]))
    return IdealBasis(reg, reduced, blocks, groebner=True)


def normal_form(f, basis):
    """Reduction modulo the ideal; rational functions reduce their numerator."""
    key = basis.order_key()
    if isinstance(f, Polynomial):
        if not basis.generators:
            return f
        _, r = poly_divmod(f, basis.generators, key)
        return r
    num = f.num
    den = f.den
    if basis.generators:
        _, num = poly_divmod(num, basis.generators, key)
        _, dnf = poly_divmod(den, basis.generators, key)
        if dnf.is_zero():
            raise DenominatorVanishesOnVariety(f"denominator {den} lies in the ideal")
    if num.is_zero():
        return RationalFunction(Polynomial.zero(f.registry))
    return RationalFunction(num, den)


def in_ideal(p, basis):
    return normal_form(p, basis).is_zero()


def ideal_dimension(basis, counted):
    """Krull dimension relative to `counted` variable indices; the other
    variables act as base-field scalars.  Returns -1 for the unit ideal."""
    reg = basis.registry
    counted = tuple(sorted(counted))
    rest = tuple(i for i in range(len(reg)) if i not in counted)
    gb = groebner_basis(IdealBasis(reg, basis.generators, (counted, rest)))
    key = gb.order_key()
    lead_supports = []
    for g in gb.generators:
        e, _ = g.leading(key)
        support = frozenset(i for i in counted if e[i])
        if not support:
            return -1  # generator is a unit over the base field
        lead_supports.append(support)
    # maximal subset of counted variables meeting no leading-term support
    best = 0
    n = len(counted)
    for mask in range(1 << n):
        size = mask.bit_count()
        if size <= best:
            continue
        subset = {counted[i] for i in range(n) if mask >> i & 1}
        if all(not s <= subset for s in lead_supports):
            best = size
    return best


def standard_monomials(gb, counted):
    """Monomial basis of the quotient in the counted variables; None if the
    ideal is not zero-dimensional over the base field."""
    key = gb.order_key()
    leads = []
    for g in gb.generators:
        e, _ = g.leading(key)
        proj = tuple(e[i] if i in counted else 0 for i in range(len(gb.registry)))
        if not any(proj):
            return []  # unit ideal: empty quotient
        leads.append(proj)
    counted = tuple(sorted(counted))
    bounds = {}
    for v in counted:
        pure = [e[v] for e in leads if all(x == 0 for i, x in enumerate(e) if i != v)]
        if not pure:
            return None
        bounds[v] = min(pure)
    monos = [(0,) * len(gb.registry)]
    for v in counted:
        new = []
        for m in monos:
            for k in range(bounds[v]):
                mm = list(m)
                mm[v] = k
                new.append(tuple(mm))
        monos = new
    return [m for m in monos if not any(_divides(e, m) for e in leads)]


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------


def matrix_rank_mod_ideal(M, basis):
    """Rank over the fraction field of the coordinate ring (ideal assumed
    prime); zero-testing goes through normal_form."""
    rows = [[normal_form(e, basis) for e in row] for row in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if not rows[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        piv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col].is_zero():
                continue
            factor = rows[r][col] / piv
            rows[r] = [
                normal_form(a - factor * b, basis)
                for a, b in zip(rows[r], rows[rank])
            ]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rref(rows):
    """Reduced row echelon form over Q, in place; returns pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        piv = rows[r][col]
        if piv != 1:
            rows[r] = [c / piv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                vec_addmul(rows[i], rows[r], -rows[i][col])
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    del rows[r:]
    return pivots


def nullspace(rows, ncols):
    """Reduced-echelon basis of the kernel of the given Fraction matrix."""
    work = [list(row) for row in rows]
    pivots = rref(work)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -work[r][f]
        basis.append(v)
    rref(basis)
    return basis
