"""The six Chidamber-Kemerer class metrics over a :class:`ClassModel`."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from entropia.model import PRIMITIVE_TYPES, SELF, UNKNOWN, ClassDef, ClassModel, MethodDef

MethodId = tuple[str, str, int]


class WmcWeighting(str, Enum):
    UNIT = "unit"
    CYCLOMATIC = "cyclomatic"


@dataclass(frozen=True)
class MetricVector:
    wmc: int
    dit: int
    noc: int
    cbo: int
    rfc: int
    lcom_components: int
    lcom_percent: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def wmc(cls: ClassDef, weighting: WmcWeighting = WmcWeighting.UNIT) -> int:
    """Weighted methods per class, over locally declared methods only."""
    if WmcWeighting(weighting) is WmcWeighting.UNIT:
        return len(cls.methods)
    return sum(1 + m.decision_points for m in cls.methods)


def dit(cls: ClassDef, model: ClassModel) -> int:
    # An external parent counts as one level and ends the chain.
    return len(model.ancestors(cls))


def noc(cls: ClassDef, model: ClassModel) -> int:
    return len(model.children(cls.name))


def coupled_classes(cls: ClassDef, model: ClassModel) -> set[str]:
    """Classes ``cls`` depends on through field types or call receivers.

    The class itself, its whole ancestor chain and all of its descendants
    are excluded, as are primitive types and untyped receivers.
    """
    refs = {f.declared_type for f in cls.fields}
    for m in cls.methods:
        refs.update(c.receiver for c in m.calls if c.receiver != SELF)
    related = {cls.name, *model.ancestors(cls), *model.descendants(cls.name)}
    return {r for r in refs if r not in related and r not in PRIMITIVE_TYPES and r != UNKNOWN}


def cbo(cls: ClassDef, model: ClassModel) -> int:
    return len(coupled_classes(cls, model))


def response_set(cls: ClassDef, model: ClassModel) -> set[MethodId]:
    """Methods invocable in response to a message to ``cls``.

    Local methods, inherited methods not overridden along the way, and the
    methods those call directly. Remote callees are not expanded further.
    """
    owned: dict[tuple[str, int], tuple[str, MethodDef]] = {}
    for m in cls.methods:
        owned[m.signature] = (cls.name, m)
    chain = model.ancestors(cls)
    for anc_name in chain:
        anc = model.get(anc_name)
        if anc is None:
            break
        for m in anc.methods:
            owned.setdefault(m.signature, (anc_name, m))

    unresolved_owner = chain[-1] if chain and chain[-1] not in model else cls.name
    rs: set[MethodId] = {(owner, sig[0], sig[1]) for sig, (owner, _) in owned.items()}
    for _, m in list(owned.values()):
        for call in m.calls:
            sig = (call.method, call.arity)
            if call.receiver == SELF:
                # owned is filled nearest-first, so this is the innermost match
                target = owned[sig][0] if sig in owned else unresolved_owner
            else:
                target, _ = model.resolve_method(call.receiver, *sig)
            rs.add((target, *sig))
    return rs


def rfc(cls: ClassDef, model: ClassModel) -> int:
    return len(response_set(cls, model))


def lcom_components(cls: ClassDef) -> int:
    """Connected components of the method graph linked by shared field use."""
    methods = list(cls.methods)
    parent = list(range(len(methods)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    first_user: dict[str, int] = {}
    for i, m in enumerate(methods):
        for f in m.field_uses:
            j = first_user.setdefault(f, i)
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(methods))})


def lcom_percent(cls: ClassDef) -> float:
    """100 minus the mean share of methods using each declared field.

    Classes without methods or without fields score 0.
    """
    if not cls.methods or not cls.fields:
        return 0.0
    n = len(cls.methods)
    shares = [100.0 * sum(f.name in m.field_uses for m in cls.methods) / n for f in cls.fields]
    return 100.0 - sum(shares) / len(shares)


def metric_vector(
    cls: ClassDef, model: ClassModel, weighting: WmcWeighting = WmcWeighting.UNIT
) -> MetricVector:
    return MetricVector(
        wmc=wmc(cls, weighting),
        dit=dit(cls, model),
        noc=noc(cls, model),
        cbo=cbo(cls, model),
        rfc=rfc(cls, model),
        lcom_components=lcom_components(cls),
        lcom_percent=lcom_percent(cls),
    )


def compute_metrics(
    model: ClassModel, weighting: WmcWeighting = WmcWeighting.UNIT
) -> dict[str, MetricVector]:
    """Metric vectors for every class, keyed by name in model order."""
    return {c.name: metric_vector(c, model, weighting) for c in model.classes}
