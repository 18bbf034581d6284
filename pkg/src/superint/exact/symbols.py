"""Global symbol table.

Every symbol gets a fixed index on registration; monomials store exponents
keyed by that index, so the registration order is the monomial order.
Jet symbols (partial derivatives of declared functions) are registered
lazily and remember which function and derivative orders they stand for.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass


class UnknownSymbolError(KeyError):
    """Raised when an expression refers to a symbol that was never registered."""

    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown symbol: {self.name!r}"


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    index: int
    function: str | None = None
    orders: tuple[int, ...] | None = None


_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_']*$")

_lock = threading.RLock()
_by_name: dict[str, SymbolInfo] = {}
_by_index: list[SymbolInfo] = []
_functions: dict[str, tuple[str, ...]] = {}
_jets: dict[tuple[str, tuple[int, ...]], int] = {}

# Core symbols in their fixed order.  The exponent layout of every monomial
# follows this order, which also drives the graded-lex serialization.
A_NAMES = (
    "A400", "A310", "A301", "A220", "A211", "A202", "A130", "A121",
    "A112", "A103", "A040", "A031", "A022", "A013", "A004",
)
CORE_SYMBOLS = (
    "x", "y", "hbar", "omega", "alpha", "beta", "gamma", "delta", "epsilon",
    "a", "b", "c", "b1", "b2", "c1", "c2",
) + A_NAMES + ("k1", "k2", "k3", "k4", "k5")


def register(name: str) -> int:
    """Register ``name`` (idempotent) and return its index."""
    with _lock:
        info = _by_name.get(name)
        if info is not None:
            return info.index
        if not _NAME_RE.match(name):
            raise ValueError(f"invalid symbol name {name!r}")
        return _add(SymbolInfo(name, len(_by_index)))


def _add(info: SymbolInfo) -> int:
    _by_name[info.name] = info
    _by_index.append(info)
    return info.index


def index_of(name: str) -> int:
    info = _by_name.get(name)
    if info is None:
        raise UnknownSymbolError(name)
    return info.index


def info(index: int) -> SymbolInfo:
    return _by_index[index]


def name_of(index: int) -> str:
    return _by_index[index].name


def is_registered(name: str) -> bool:
    return name in _by_name


def declare_function(base: str, variables: tuple[str, ...]) -> None:
    """Declare ``base`` as a function of ``variables``; its jets become symbols."""
    variables = tuple(variables)
    with _lock:
        for v in variables:
            register(v)
        old = _functions.get(base)
        if old is not None:
            if old != variables:
                raise ValueError(f"function {base!r} already declared with variables {old}")
            return
        _functions[base] = variables
        jet_index(base, (0,) * len(variables))


def function_variables(base: str) -> tuple[str, ...]:
    try:
        return _functions[base]
    except KeyError:
        raise UnknownSymbolError(base) from None


def jet_name(base: str, orders: tuple[int, ...]) -> str:
    variables = _functions[base]
    suffix = "".join(v * k for v, k in zip(variables, orders))
    return f"{base}_{suffix}" if suffix else base


def jet_index(base: str, orders: tuple[int, ...]) -> int:
    """Index of the jet symbol ``d^orders base``, registering it if needed."""
    orders = tuple(int(k) for k in orders)
    key = (base, orders)
    idx = _jets.get(key)
    if idx is not None:
        return idx
    with _lock:
        idx = _jets.get(key)
        if idx is not None:
            return idx
        variables = function_variables(base)
        if len(orders) != len(variables) or min(orders, default=0) < 0:
            raise ValueError(f"bad derivative orders {orders} for {base}{variables}")
        name = jet_name(base, orders)
        existing = _by_name.get(name)
        if existing is not None:
            if existing.function != base:
                raise ValueError(f"jet name {name!r} collides with an existing symbol")
            _jets[key] = existing.index
            return existing.index
        idx = _add(SymbolInfo(name, len(_by_index), base, orders))
        _jets[key] = idx
        return idx


def jet_from_name(name: str) -> int | None:
    """Index of the jet spelled ``name`` (``W_yy``) for a declared function, else None."""
    base, sep, suffix = name.partition("_")
    variables = _functions.get(base)
    if variables is None:
        return None
    if not sep:
        return jet_index(base, (0,) * len(variables))
    orders = [0] * len(variables)
    for ch in suffix:
        if ch not in variables:
            return None
        orders[variables.index(ch)] += 1
    if any(orders[i] and orders[j] for i in range(len(orders)) for j in range(i)) and \
            suffix != "".join(v * k for v, k in zip(variables, orders)):
        return None
    return jet_index(base, tuple(orders))


def jet_successor(index: int, var: str) -> int | None:
    """Index of the jet obtained by differentiating symbol ``index`` in ``var``."""
    si = _by_index[index]
    if si.function is None:
        return None
    variables = _functions[si.function]
    if var not in variables:
        return None
    k = variables.index(var)
    orders = list(si.orders)
    orders[k] += 1
    return jet_index(si.function, tuple(orders))


def sort_key(index: int) -> tuple:
    """Registration-independent order: core symbols, then jets by function and order, then names."""
    si = _by_index[index]
    if index < len(CORE_SYMBOLS):
        return (0, index, "", ())
    if si.function is not None:
        return (1, sum(si.orders), si.function, tuple(-k for k in si.orders))
    return (2, 0, si.name, ())


def symbol_names() -> list[str]:
    return [s.name for s in _by_index]


for _n in CORE_SYMBOLS:
    register(_n)
del _n
