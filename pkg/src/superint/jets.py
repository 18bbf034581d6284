"""Formal functions and their jets; substitution of explicit expressions."""

from __future__ import annotations

from .exact import ExactPoly, RatFunc, declare_function, subs_into
from .exact import symbols as S


def formal(base: str, variables=("x", "y")) -> ExactPoly:
    declare_function(base, tuple(variables))
    return ExactPoly.jet(base, (0,) * len(variables))


def jet(base: str, *orders: int) -> ExactPoly:
    return ExactPoly.jet(base, tuple(orders))


def jets_in(expr, base: str) -> dict[str, tuple[int, ...]]:
    """Jet symbols of ``base`` occurring in ``expr``: ``{name: orders}``."""
    names = expr.symbols()
    out = {}
    for n in names:
        si = S.info(S.index_of(n))
        if si.function == base:
            out[n] = si.orders
    return out


def derivatives_of(value, variables, orders_needed, rules=None):
    """``{orders: d^orders value}`` computed incrementally with caching."""
    cache = {(0,) * len(variables): value}

    def get(orders):
        if orders in cache:
            return cache[orders]
        k = next(i for i, o in enumerate(orders) if o > 0)
        prev = list(orders)
        prev[k] -= 1
        v = get(tuple(prev)).derivative(variables[k], rules)
        cache[orders] = v
        return v

    return {o: get(o) for o in orders_needed}


def substitute_jets(expr, base: str, value, rules=None):
    """Replace every jet of ``base`` in ``expr`` by the derivative of ``value``.

    ``value`` may be an ExactPoly or RatFunc; the result is a RatFunc.
    """
    found = jets_in(expr, base)
    if not found:
        return RatFunc.coerce(expr)
    variables = S.function_variables(base)
    if not isinstance(value, (ExactPoly, RatFunc)):
        value = ExactPoly.coerce(value)
    if rules is not None and isinstance(value, ExactPoly):
        value = RatFunc(value)
    ders = derivatives_of(value, variables, set(found.values()), rules)
    mapping = {n: ders[o] for n, o in found.items()}
    if isinstance(expr, RatFunc):
        return expr.subs(mapping)
    return subs_into(expr, mapping)
