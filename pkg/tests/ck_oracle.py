"""Reference values and a naive re-implementation of the CK metrics.

``CORPUS_UNIT`` and ``CORPUS_CYCLOMATIC`` were tallied by hand from the
bundled .moo sources. The ``brute_*`` functions recompute the metrics by
direct enumeration (pairwise graph search, explicit set building) without
touching :mod:`entropia.metrics`.
"""

from __future__ import annotations

from itertools import combinations

from entropia.model import PRIMITIVE_TYPES, SELF, UNKNOWN

# class -> (wmc, dit, noc, cbo, rfc, lcom_components, lcom_percent)
CORPUS_UNIT = {
    "Point": (3, 0, 0, 0, 3, 1, 100 / 3),
    "Shape": (3, 0, 2, 1, 4, 3, 200 / 3),
    "Circle": (2, 1, 0, 1, 7, 1, 0.0),
    "Rect": (3, 1, 1, 0, 6, 1, 0.0),
    "Square": (1, 2, 0, 0, 7, 1, 0.0),
    "Ledger": (2, 0, 0, 0, 2, 1, 0.0),
    "Account": (3, 0, 1, 1, 4, 2, 400 / 9),
    "Savings": (2, 1, 0, 1, 6, 2, 50.0),
    "Bank": (2, 0, 0, 4, 7, 2, 50.0),
    "Auditor": (1, 1, 0, 1, 2, 1, 0.0),
    "Empty": (0, 0, 0, 0, 0, 0, 0.0),
    "Base": (1, 0, 1, 0, 1, 1, 0.0),
    "Summer": (1, 1, 0, 0, 2, 1, 0.0),
    "FlatSummer": (2, 0, 0, 0, 2, 1, 0.0),
    "Tally": (1, 0, 0, 0, 1, 1, 0.0),
    "LoggedTally": (1, 0, 0, 1, 2, 1, 0.0),
    "GuardedTally": (1, 0, 0, 0, 1, 1, 0.0),
    "CounterA": (2, 0, 0, 0, 2, 1, 25.0),
    "CounterB": (2, 0, 0, 0, 2, 2, 50.0),
}

# only classes whose methods contain decisions differ from the unit count
CORPUS_CYCLOMATIC = {name: row[0] for name, row in CORPUS_UNIT.items()}
CORPUS_CYCLOMATIC.update(
    Circle=3, Rect=4, Account=5, Bank=3, Auditor=3, FlatSummer=3, GuardedTally=2
)

SQUARE_RESPONSE_SET = {
    ("Point", "move", 2),
    ("Rect", "area", 0),
    ("Rect", "perimeter", 0),
    ("Rect", "scale", 1),
    ("Shape", "label", 0),
    ("Shape", "shift", 2),
    ("Square", "resize", 1),
}


def _chain(model, name):
    out = []
    cur = model.get(name)
    while cur is not None and cur.parent is not None:
        out.append(cur.parent)
        cur = model.get(cur.parent)
    return out


def brute_dit(model, cls):
    return len(_chain(model, cls.name))


def brute_noc(model, cls):
    return sum(1 for c in model.classes if c.parent == cls.name)


def brute_cbo(model, cls):
    related = {cls.name, *_chain(model, cls.name)}
    related |= {c.name for c in model.classes if cls.name in _chain(model, c.name)}
    refs = {f.declared_type for f in cls.fields}
    refs |= {k.receiver for m in cls.methods for k in m.calls}
    return len({r for r in refs if r not in related | PRIMITIVE_TYPES | {SELF, UNKNOWN}})


def _lookup(model, start, name, arity):
    """Owner of the first (name, arity) found walking up from ``start``."""
    chain = [start, *_chain(model, start)]
    for owner in chain:
        c = model.get(owner)
        if c is None:
            return owner
        if any(m.name == name and m.arity == arity for m in c.methods):
            return owner
    return start


def brute_response_set(model, cls):
    visible = {}
    for owner in [cls.name, *_chain(model, cls.name)]:
        c = model.get(owner)
        if c is None:
            break
        for m in c.methods:
            if (m.name, m.arity) not in visible:
                visible[(m.name, m.arity)] = (owner, m)
    rs = {(owner, n, a) for (n, a), (owner, _) in visible.items()}
    for owner, m in visible.values():
        for k in m.calls:
            start = cls.name if k.receiver == SELF else k.receiver
            rs.add((_lookup(model, start, k.method, k.arity), k.method, k.arity))
    return rs


def brute_lcom_components(cls):
    methods = list(cls.methods)
    adj = {i: set() for i in range(len(methods))}
    for i, j in combinations(range(len(methods)), 2):
        if methods[i].field_uses & methods[j].field_uses:
            adj[i].add(j)
            adj[j].add(i)
    seen, count = set(), 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(adj[v] - seen)
    return count


def brute_lcom_percent(cls):
    if not cls.methods or not cls.fields:
        return 0.0
    total = 0.0
    for f in cls.fields:
        users = [m for m in cls.methods if f.name in m.field_uses]
        total += 100.0 * len(users) / len(cls.methods)
    return 100.0 - total / len(cls.fields)
