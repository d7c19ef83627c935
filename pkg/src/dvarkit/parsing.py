"""Problem-file DSL and rational-expression parsing.

Expressions support + - * / ^ (nonnegative integer exponents),
parentheses, integer literals (rationals are written p/q), and
registered identifiers; identifiers may carry primes (y, y', y'').
In equation lines y^(k) abbreviates y followed by k primes.

The problem file is line oriented, '#' starts a comment.  See
docs/grammar.md for the full grammar.
"""

import re
from fractions import Fraction

from .algebra import (
    ROLE_AUX,
    ROLE_FIBER,
    ROLE_PARAM,
    ROLE_TIME,
    Polynomial,
    RationalFunction,
    VariableRegistry,
)
from .errors import (
    DuplicateVariable,
    ExpressionSyntaxError,
    MissingSection,
    UnknownVariable,
    ZeroDenominator,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_]\w*'*)|(?P<op>[-+*/^()]))"
)
_DERIV_RE = re.compile(r"([A-Za-z_]\w*)\^\((\d+)\)")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.start() != pos:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(("num", int(m.group("num")), pos))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), pos))
        else:
            tokens.append(("op", m.group("op"), pos))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _ExprParser:
    """Recursive-descent parser producing canonical RationalFunctions."""

    def __init__(self, text, registry):
        self.text = text
        self.registry = registry
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise ExpressionSyntaxError(f"expected {op!r}", pos)
        self.advance()

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError("trailing input", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.advance()
                rhs = self.unary()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ExpressionSyntaxError("division by zero", pos)
                    value = value / rhs
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            nkind, nval, npos = self.peek()
            if nkind != "num":
                raise ExpressionSyntaxError("exponent must be a nonnegative integer", npos)
            self.advance()
            return base**nval
        return base

    def atom(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return RationalFunction.constant(self.registry, val)
        if kind == "ident":
            if val not in self.registry:
                raise UnknownVariable(val)
            return RationalFunction.variable(self.registry, val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ExpressionSyntaxError("expected a value", pos)


def parse_expression(text, registry):
    """Parse an expression into a canonical RationalFunction."""
    return _ExprParser(text, registry).parse()


def parse_polynomial(text, registry):
    """Parse an expression required to be polynomial."""
    rf = parse_expression(text, registry)
    if not rf.is_polynomial():
        raise ExpressionSyntaxError(f"expected a polynomial, got {rf}")
    return rf.num * (1 / rf.den.constant_value())


def rewrite_derivative_powers(text):
    """Turn y^(k) derivative notation into primes (equation lines only)."""

    def repl(m):
        return m.group(1) + "'" * int(m.group(2))

    return _DERIV_RE.sub(repl, text)


# ---------------------------------------------------------------------------
# problem files
# ---------------------------------------------------------------------------

MODE_EXPLICIT = "explicit-ode"
MODE_IMPLICIT = "implicit-ode"
MODE_DVARIETY = "dvariety"

_KEYS = ("time", "vars", "params", "ode", "ideal", "section", "aux", "integrals")


class ProblemSpec:
    """Parsed problem file: registry, mode, and the raw building blocks."""

    def __init__(self, registry, mode, ode_order=None, rhs_or_F=None,
                 ideal_gens=(), section=None, aux_w=(), candidate_integrals=()):
        self.registry = registry
        self.mode = mode
        self.ode_order = ode_order
        self.rhs_or_F = rhs_or_F
        self.ideal_gens = list(ideal_gens)
        self.section = dict(section or {})
        self.aux_w = list(aux_w)
        self.candidate_integrals = list(candidate_integrals)

    def __eq__(self, other):
        if not isinstance(other, ProblemSpec):
            return NotImplemented
        return (
            self.registry == other.registry
            and self.mode == other.mode
            and self.ode_order == other.ode_order
            and self.rhs_or_F == other.rhs_or_F
            and self.ideal_gens == other.ideal_gens
            and self.section == other.section
            and self.aux_w == other.aux_w
            and self.candidate_integrals == other.candidate_integrals
        )

    def __repr__(self):
        return f"ProblemSpec(mode={self.mode}, vars={self.registry.names})"


def _split_values(raw):
    return [part.strip() for part in raw.split(";") if part.strip()]


def _primes(name):
    base = name.rstrip("'")
    return base, len(name) - len(base)


def parse_problem_file(text):
    """Parse the problem-file DSL into a fully resolved ProblemSpec."""
    fields = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ExpressionSyntaxError(f"line {lineno}: expected 'key: value'")
        key, _, raw = line.partition(":")
        key = key.strip()
        if key not in _KEYS:
            raise ExpressionSyntaxError(f"line {lineno}: unknown key {key!r}")
        fields.setdefault(key, []).append(raw.strip())

    def single(key):
        vals = fields.get(key, [])
        if len(vals) > 1:
            raise ExpressionSyntaxError(f"duplicate {key}: line")
        return vals[0] if vals else None

    time_name = single("time") or "t"
    params = []
    for raw in fields.get("params", []):
        params.extend(n.strip() for n in raw.split(",") if n.strip())

    aux_rules = []
    for raw in fields.get("aux", []):
        for piece in _split_values(raw):
            if "=" not in piece:
                raise ExpressionSyntaxError(f"aux rule {piece!r} needs name' = expr")
            lhs, _, rhs = piece.partition("=")
            base, k = _primes(lhs.strip())
            if k != 1:
                raise ExpressionSyntaxError(f"aux rule {piece!r} must define a first derivative")
            aux_rules.append((base, rhs.strip()))
    aux_names = [n for n, _ in aux_rules]

    ode_line = single("ode")
    has_dvariety = "ideal" in fields or "section" in fields
    if ode_line is not None and has_dvariety:
        raise ExpressionSyntaxError("a file declares either ode: or ideal:/section:, not both")
    if ode_line is None and not has_dvariety:
        raise ExpressionSyntaxError("missing ode: or ideal:/section: declaration")

    if ode_line is not None:
        spec = _parse_ode_mode(ode_line, time_name, aux_rules, params)
    else:
        spec = _parse_dvariety_mode(fields, time_name, aux_rules, params)

    for raw in fields.get("integrals", []):
        for piece in _split_values(raw):
            spec.candidate_integrals.append(parse_expression(piece, spec.registry))
    return spec


def _build_registry(time_name, fiber_names, aux_names, params):
    names = [time_name] + list(fiber_names) + list(aux_names) + list(params)
    roles = (
        [ROLE_TIME]
        + [ROLE_FIBER] * len(fiber_names)
        + [ROLE_AUX] * len(aux_names)
        + [ROLE_PARAM] * len(params)
    )
    return VariableRegistry(names, roles)


def _parse_ode_mode(ode_line, time_name, aux_rules, params):
    line = rewrite_derivative_powers(ode_line)
    if "=" not in line:
        raise ExpressionSyntaxError("ode line needs '='")
    lhs_text, _, rhs_text = line.partition("=")
    lhs_text = lhs_text.strip()
    rhs_text = rhs_text.strip()

    idents = set(re.findall(r"[A-Za-z_]\w*'*", line))
    bases = {}
    for ident in idents:
        base, k = _primes(ident)
        if base == time_name or base in params or base in (n for n, _ in aux_rules):
            continue
        bases[base] = max(bases.get(base, 0), k)
    if len(bases) != 1:
        raise ExpressionSyntaxError(
            f"ode line must involve exactly one dependent variable, found {sorted(bases)}"
        )
    (dep, max_k), = bases.items()

    lhs_base, lhs_k = _primes(lhs_text) if re.fullmatch(r"[A-Za-z_]\w*'*", lhs_text) else (None, 0)
    explicit = lhs_base == dep and lhs_k >= 1 and lhs_k > _max_primes_of(rhs_text, dep)
    order = lhs_k if explicit else max_k + 1
    fiber_names = [dep + "'" * k for k in range(order)]
    aux_names = [n for n, _ in aux_rules]
    registry = _build_registry(time_name, fiber_names, aux_names, params)

    if explicit:
        rhs = parse_expression(rhs_text, registry)
        spec = ProblemSpec(registry, MODE_EXPLICIT, ode_order=order, rhs_or_F=rhs)
    else:
        wide = registry  # F may mention derivatives up to order-1 only
        lhs = parse_expression(lhs_text, wide)
        rhs = parse_expression(rhs_text, wide)
        F = lhs - rhs
        if not F.is_polynomial():
            raise ExpressionSyntaxError("implicit equation must be polynomial")
        spec = ProblemSpec(
            registry,
            MODE_IMPLICIT,
            ode_order=order,
            rhs_or_F=RationalFunction(F.num * (1 / F.den.constant_value())),
        )
    spec.aux_w = [(n, parse_expression(e, registry)) for n, e in aux_rules]
    _check_aux_rules(spec)
    return spec


def _max_primes_of(text, base):
    ks = [len(m) for m in re.findall(re.escape(base) + r"('+)", text)]
    return max(ks, default=0)


def _parse_dvariety_mode(fields, time_name, aux_rules, params):
    var_names = []
    for raw in fields.get("vars", []):
        var_names.extend(n.strip() for n in raw.split(",") if n.strip())
    if not var_names:
        raise ExpressionSyntaxError("dvariety mode needs a vars: line")
    aux_names = [n for n, _ in aux_rules]
    registry = _build_registry(time_name, var_names, aux_names, params)

    gens = []
    for raw in fields.get("ideal", []):
        for piece in _split_values(raw):
            gens.append(parse_polynomial(rewrite_derivative_powers(piece), registry))

    section = {}
    for raw in fields.get("section", []):
        for piece in _split_values(raw):
            if "=" not in piece:
                raise ExpressionSyntaxError(f"section entry {piece!r} needs var' = expr")
            lhs, _, rhs = piece.partition("=")
            lhs = lhs.strip()
            base, k = _primes(lhs)
            name = base + "'" * (k - 1) if k >= 1 else lhs
            if name not in var_names:
                raise UnknownVariable(name)
            if name in section:
                raise DuplicateVariable(name)
            section[name] = parse_expression(rewrite_derivative_powers(rhs.strip()), registry)
    missing = [n for n in var_names if n not in section]
    if missing:
        raise MissingSection(f"no section entry for {', '.join(missing)}")

    spec = ProblemSpec(registry, MODE_DVARIETY, ideal_gens=gens, section=section)
    spec.aux_w = [(n, parse_expression(e, registry)) for n, e in aux_rules]
    _check_aux_rules(spec)
    return spec


def _check_aux_rules(spec):
    reg = spec.registry
    allowed = set(reg.indices_with_role(ROLE_TIME, ROLE_AUX, ROLE_PARAM))
    for name, rf in spec.aux_w:
        used = rf.num.variables_used() | rf.den.variables_used()
        if not used <= allowed:
            bad = ", ".join(reg.names[i] for i in sorted(used - allowed))
            raise ExpressionSyntaxError(
                f"aux rule for {name!r} may only use time/aux/param variables (uses {bad})"
            )


def emit_problem_file(spec):
    """Canonical text form; parse_problem_file(emit(spec)) == spec."""
    reg = spec.registry
    lines = [f"time: {reg.time_name}"]
    params = [reg.names[i] for i in reg.indices_with_role(ROLE_PARAM)]
    if params:
        lines.append(f"params: {', '.join(params)}")
    if spec.mode == MODE_EXPLICIT:
        dep = reg.names[reg.fiber_indices[0]]
        lines.append(f"ode: {dep}{chr(39) * spec.ode_order} = {spec.rhs_or_F}")
    elif spec.mode == MODE_IMPLICIT:
        lines.append(f"ode: {spec.rhs_or_F} = 0")
    else:
        fibers = [reg.names[i] for i in reg.fiber_indices]
        lines.append(f"vars: {', '.join(fibers)}")
        if spec.ideal_gens:
            lines.append("ideal: " + "; ".join(str(g) for g in spec.ideal_gens))
        entries = "; ".join(f"{n}' = {spec.section[n]}" for n in fibers)
        lines.append(f"section: {entries}")
    for name, rf in spec.aux_w:
        lines.append(f"aux: {name}' = {rf}")
    if spec.candidate_integrals:
        lines.append("integrals: " + "; ".join(str(h) for h in spec.candidate_integrals))
    return "\n".join(lines) + "\n"
