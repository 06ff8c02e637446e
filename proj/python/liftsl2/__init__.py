"""Exact SL2/PSL2 lifting toolkit over non-archimedean local fields.

Thin pythonic layer over the _liftsl2 extension: the extension speaks JSON
strings (the same schemas the CLI emits); this package converts them to
dicts and wraps the common flows in small classes.
"""

import json

from _liftsl2 import (  # noqa: F401
    DivisionByZero,
    LiftError,
    PrecisionExhausted,
    __version__,
)
import _liftsl2 as _core


def _loads(s):
    return json.loads(s)


class Elem:
    """A field element, printed and stored in the JSON digit encoding."""

    def __init__(self, field, data):
        self.field = field
        self.data = data if isinstance(data, dict) else _loads(data)

    def _j(self):
        return json.dumps(self.data)

    def _binop(self, other, op):
        other = self.field.element(other)
        return Elem(self.field, _core.fe_arith(self.field._j(), self._j(), other._j(), op))

    def __add__(self, other):
        return self._binop(other, "add")

    def __sub__(self, other):
        return self._binop(other, "sub")

    def __mul__(self, other):
        return self._binop(other, "mul")

    def __truediv__(self, other):
        return self._binop(other, "div")

    def __neg__(self):
        return Elem(self.field, _core.fe_arith(self.field._j(), self._j(), self._j(), "neg"))

    def inv(self):
        return Elem(self.field, _core.fe_arith(self.field._j(), self._j(), self._j(), "inv"))

    def __eq__(self, other):
        other = self.field.element(other)
        return _core.fe_eq(self.field._j(), self._j(), other._j())

    def valuation(self):
        """Valuation, or None for an exact zero (+infinity)."""
        return _core.fe_valuation(self.field._j(), self._j())

    def is_square(self):
        return _core.fe_is_square(self.field._j(), self._j())

    def sqrt(self):
        return Elem(self.field, _core.fe_sqrt(self.field._j(), self._j()))

    def __repr__(self):
        return _core.fe_str(self.field._j(), self._j())


class Mat:
    """Determinant-1 matrix over K or K(i)."""

    def __init__(self, data):
        self.data = data if isinstance(data, dict) else _loads(data)

    def _j(self):
        return json.dumps(self.data)

    def __mul__(self, other):
        return Mat(_core.mat_mul(self._j(), other._j()))

    def inv(self):
        return Mat(_core.mat_inv(self._j()))

    def __neg__(self):
        return Mat(_core.mat_neg(self._j()))

    def __pow__(self, e):
        return Mat(_core.mat_pow(self._j(), e))

    def __eq__(self, other):
        return _core.mat_eq(self._j(), other._j())

    def trace(self):
        return _loads(_core.mat_trace(self._j()))

    def classify(self):
        return _loads(_core.classify(self._j()))

    def translation_length(self, depth=6):
        return _loads(_core.translation_length(self._j(), depth))

    def order(self, bound=1000):
        return _core.order(self._j(), bound)

    def proj_order(self, bound=1000):
        return _core.proj_order(self._j(), bound)

    def is_unipotent(self):
        return _core.is_unipotent(self._j())

    def fixed_set(self, depth=6):
        return _loads(_core.fixed_set(self._j(), depth))

    def lift(self, bound=0):
        return Mat(_core.lift_element(self._j(), bound))

    def act(self, vertex):
        return _loads(_core.act(self._j(), json.dumps(vertex)))

    def __repr__(self):
        return "Mat(" + json.dumps(self.data) + ")"


class Field:
    """Q_p (char 0) or F_q((t)) (char p) at a fixed working precision."""

    def __init__(self, char, p, r=1, N=32):
        self.data = _loads(_core.make_field(char, p, r, N))

    def _j(self):
        return json.dumps(self.data)

    def describe(self):
        return _core.field_describe(self._j())

    def element(self, value):
        if isinstance(value, Elem):
            return value
        if isinstance(value, dict):
            return Elem(self, value)
        return Elem(self, _core.fe_from_literal(self._j(), str(value)))

    def teichmuller(self, c, order=None):
        return Elem(self, _core.teichmuller(self._j(), c, order))

    def matrix(self, entries, ext=False):
        flat = []
        for row in entries:
            for e in row:
                if isinstance(e, Elem):
                    flat.append(e._j())
                elif ext and isinstance(e, dict):
                    flat.append(json.dumps(e))
                else:
                    flat.append(self.element(e)._j())
        return Mat(_core.mat_from_entries(self._j(), ext, flat))

    def standard_vertex(self):
        return {"n": 0, "b": {"val": "inf", "digits": []}}

    def ball(self, radius, cap=1000000):
        return [_loads(v) for v in _core.tree_ball(self._j(), radius, cap)]

    def distance(self, v1, v2):
        return _core.tree_distance(self._j(), json.dumps(v1), json.dumps(v2))


def build_family(name, field):
    return [Mat(s) for s in _core.build_family(name, field._j())]


def verify_no_lift(quad):
    return _loads(_core.verify_no_lift([m._j() for m in quad]))


def build_dense(field, lam, b="1"):
    return _loads(_core.build_dense(field._j(), str(lam), str(b)))


def trace_scan(quad, max_len, entries=False, jobs=1):
    return _loads(_core.trace_scan([m._j() for m in quad], max_len, entries, jobs))


def parity_check(family, word, field):
    return _loads(_core.parity_check(family, word, field._j()))


def eval_word(word, quad):
    return Mat(_core.eval_word(word, [m._j() for m in quad]))


def lift_subgroup(gens, cap=100000):
    return _loads(_core.lift_subgroup([m._j() for m in gens], cap))


def lift_gog(gog):
    if not isinstance(gog, str):
        gog = json.dumps(gog)
    return _loads(_core.lift_gog(gog))


def nesting_check(g, h, depth=5):
    return _loads(_core.nesting_check(g._j(), h._j(), depth))


def selftest(criterion=0, jobs=2):
    ok, text = _core.selftest(criterion, jobs)
    return ok, text
