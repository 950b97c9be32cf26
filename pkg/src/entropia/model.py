"""Resolved, immutable object model read by every metric.

A :class:`ClassModel` is built once from plain :class:`ClassDef` values via
:func:`build_model`, which validates names and inheritance and resolves the
derived ``overrides`` flags. Nothing here parses or touches the filesystem.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

# Receiver marker for calls dispatched on the enclosing object. Not a legal
# identifier, so it can never collide with a class name.
SELF = "@self"
# Receiver whose static type is unknowable (e.g. the result of another call).
UNKNOWN = "?"

PRIMITIVE_TYPES = frozenset({"void", "int", "bool", "string"})


class ModelError(ValueError):
    """A set of class definitions that cannot form a valid model."""


class DuplicateClass(ModelError):
    pass


class DuplicateMember(ModelError):
    pass


class InheritanceCycle(ModelError):
    pass


class DanglingParent(ModelError):
    pass


class UnknownField(ModelError):
    pass


@dataclass(frozen=True)
class FieldDef:
    name: str
    declared_type: str


@dataclass(frozen=True)
class CallSite:
    receiver: str
    method: str
    arity: int = 0


@dataclass(frozen=True)
class MethodDef:
    name: str
    arity: int = 0
    decision_points: int = 0
    calls: tuple[CallSite, ...] = ()
    field_uses: frozenset[str] = frozenset()
    overrides: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "calls", tuple(self.calls))
        object.__setattr__(self, "field_uses", frozenset(self.field_uses))
        if self.arity < 0 or self.decision_points < 0:
            raise ValueError(f"method {self.name}: negative arity or decision count")

    @property
    def signature(self) -> tuple[str, int]:
        return (self.name, self.arity)


@dataclass(frozen=True)
class ClassDef:
    name: str
    parent: str | None = None
    fields: tuple[FieldDef, ...] = ()
    methods: tuple[MethodDef, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "fields", tuple(self.fields))
        object.__setattr__(self, "methods", tuple(self.methods))
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise DuplicateMember(f"class {self.name}: duplicate field name")
        sigs = [m.signature for m in self.methods]
        if len(set(sigs)) != len(sigs):
            raise DuplicateMember(f"class {self.name}: duplicate method signature")

    @property
    def field_names(self) -> frozenset[str]:
        return frozenset(f.name for f in self.fields)

    @property
    def signatures(self) -> frozenset[tuple[str, int]]:
        return frozenset(m.signature for m in self.methods)

    def method(self, name: str, arity: int) -> MethodDef | None:
        for m in self.methods:
            if m.name == name and m.arity == arity:
                return m
        return None

    def field(self, name: str) -> FieldDef | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class SourceStats:
    """Line and statement counts over a set of source files.

    ``inactive`` is always 0: conditional-compilation regions do not exist
    in the accepted input language.
    """

    files: int = 0
    lines: int = 0
    blank: int = 0
    comment: int = 0
    code: int = 0
    executable: int = 0
    declarative: int = 0

    def __post_init__(self) -> None:
        for name in ("files", "lines", "blank", "comment", "code", "executable", "declarative"):
            if getattr(self, name) < 0:
                raise ValueError(f"SourceStats.{name} must be non-negative")
        if self.blank + self.comment + self.code > self.lines:
            raise ValueError("blank + comment + code lines exceed total lines")

    @property
    def inactive(self) -> int:
        return 0

    @property
    def ratio_comment_code(self) -> float:
        return self.comment / self.code if self.code else 0.0

    def __add__(self, other: SourceStats) -> SourceStats:
        return SourceStats(
            files=self.files + other.files,
            lines=self.lines + other.lines,
            blank=self.blank + other.blank,
            comment=self.comment + other.comment,
            code=self.code + other.code,
            executable=self.executable + other.executable,
            declarative=self.declarative + other.declarative,
        )


@dataclass(frozen=True)
class ClassModel:
    """Validated class graph. Construct with :func:`build_model`."""

    classes: tuple[ClassDef, ...]
    external: frozenset[str] = frozenset()
    stats: SourceStats | None = None
    _index: Mapping[str, ClassDef] = field(init=False, repr=False, compare=False)
    _children: Mapping[str, tuple[str, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", MappingProxyType({c.name: c for c in self.classes}))
        children: dict[str, list[str]] = {}
        for c in self.classes:
            if c.parent is not None:
                children.setdefault(c.parent, []).append(c.name)
        object.__setattr__(
            self, "_children", MappingProxyType({k: tuple(v) for k, v in children.items()})
        )

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self) -> Iterator[ClassDef]:
        return iter(self.classes)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> ClassDef:
        return self._index[name]

    def get(self, name: str) -> ClassDef | None:
        return self._index.get(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    def ancestors(self, cls: ClassDef) -> list[str]:
        """Parent chain of ``cls``, nearest first.

        An external parent is included as the last entry; the chain stops there.
        """
        chain: list[str] = []
        parent = cls.parent
        while parent is not None:
            chain.append(parent)
            nxt = self._index.get(parent)
            parent = nxt.parent if nxt is not None else None
        return chain

    def children(self, name: str) -> tuple[str, ...]:
        return self._children.get(name, ())

    def descendants(self, name: str) -> set[str]:
        found: set[str] = set()
        stack = list(self.children(name))
        while stack:
            n = stack.pop()
            if n not in found:
                found.add(n)
                stack.extend(self.children(n))
        return found

    def visible_fields(self, cls: ClassDef) -> dict[str, FieldDef]:
        """Local fields plus fields inherited from in-model ancestors; nearest wins."""
        visible: dict[str, FieldDef] = {}
        for owner in [cls] + [self._index[a] for a in self.ancestors(cls) if a in self._index]:
            for f in owner.fields:
                visible.setdefault(f.name, f)
        return visible

    def resolve_method(self, class_name: str, name: str, arity: int) -> tuple[str, MethodDef | None]:
        """Innermost declaration of ``name/arity`` starting at ``class_name``.

        Returns ``(owner, method)``. When nothing in the model declares it, the
        owner is the first external class on the chain (or ``class_name``
        itself) and the method is ``None``.
        """
        current: str | None = class_name
        while current is not None:
            cls = self._index.get(current)
            if cls is None:
                return current, None
            m = cls.method(name, arity)
            if m is not None:
                return current, m
            current = cls.parent
        return class_name, None

    def with_class(self, cls: ClassDef) -> ClassModel:
        """A new model with ``cls`` appended (its parent must already resolve)."""
        return build_model(list(self.classes) + [cls], self.stats, external=self.external)


def build_model(
    classes: Iterable[ClassDef],
    stats: SourceStats | None = None,
    external: Iterable[str] = (),
) -> ClassModel:
    """Validate ``classes`` and return an immutable :class:`ClassModel`.

    ``external`` names library classes that may appear as parents. Call
    receivers and field types that name no model class are marked external
    automatically.
    """
    classes = list(classes)
    index: dict[str, ClassDef] = {}
    for c in classes:
        if c.name in index:
            raise DuplicateClass(f"class {c.name} defined more than once")
        index[c.name] = c
    declared_external = frozenset(external) - index.keys()

    for c in classes:
        if c.parent is not None and c.parent not in index and c.parent not in declared_external:
            raise DanglingParent(f"class {c.name} extends undefined class {c.parent}")

    for c in classes:
        seen = {c.name}
        parent = c.parent
        while parent is not None and parent in index:
            if parent in seen:
                raise InheritanceCycle(f"inheritance cycle through {c.name}")
            seen.add(parent)
            parent = index[parent].parent

    resolved = []
    for c in classes:
        inherited_sigs: set[tuple[str, int]] = set()
        visible = set(c.field_names)
        parent = c.parent
        while parent is not None and parent in index:
            anc = index[parent]
            inherited_sigs |= anc.signatures
            visible |= anc.field_names
            parent = anc.parent
        methods = []
        for m in c.methods:
            unknown = m.field_uses - visible
            if unknown:
                raise UnknownField(
                    f"{c.name}.{m.name} uses undeclared field(s) {sorted(unknown)}"
                )
            flag = m.signature in inherited_sigs
            methods.append(m if m.overrides == flag else replace(m, overrides=flag))
        resolved.append(replace(c, methods=tuple(methods)))

    referenced: set[str] = set(declared_external)
    for c in classes:
        referenced.update(f.declared_type for f in c.fields)
        for m in c.methods:
            referenced.update(call.receiver for call in m.calls if call.receiver != SELF)
    ext = frozenset(n for n in referenced if n not in index and n not in PRIMITIVE_TYPES and n != UNKNOWN)
    return ClassModel(tuple(resolved), ext, stats)


def combine(p: ClassDef, q: ClassDef, name: str | None = None) -> ClassDef:
    """Merge two classes into one (the ``P+Q`` of the monotonicity axioms).

    Methods are keyed by (name, arity). On a collision ``p``'s arity and
    decision count are kept while calls and field uses are unioned. Fields are
    unioned by name with ``p`` winning type conflicts. The result inherits
    ``p``'s parent.
    """
    methods: dict[tuple[str, int], MethodDef] = {}
    for m in p.methods:
        methods[m.signature] = replace(m, overrides=False)
    for m in q.methods:
        mine = methods.get(m.signature)
        if mine is None:
            methods[m.signature] = replace(m, overrides=False)
        else:
            calls = mine.calls + tuple(c for c in m.calls if c not in mine.calls)
            methods[m.signature] = replace(
                mine, calls=calls, field_uses=mine.field_uses | m.field_uses
            )
    fields: dict[str, FieldDef] = {f.name: f for f in p.fields}
    for f in q.fields:
        fields.setdefault(f.name, f)
    return ClassDef(
        name=name or f"{p.name}+{q.name}",
        parent=p.parent,
        fields=tuple(fields.values()),
        methods=tuple(methods.values()),
    )


def combine_in_model(model: ClassModel, p: ClassDef, q: ClassDef) -> tuple[ClassModel, ClassDef]:
    """Combine two model classes and add the result to a copy of ``model``.

    Fields that ``q``'s methods use through inheritance would be invisible
    under ``p``'s parent, so they are copied into the merged class.
    """
    reachable = set(model.visible_fields(p))
    q_visible = model.visible_fields(q)
    used = set().union(*(m.field_uses for m in q.methods)) if q.methods else set()
    extra = [q_visible[n] for n in sorted(used) if n not in reachable and q.field(n) is None]
    if extra:
        q = replace(q, fields=q.fields + tuple(extra))
    name = f"{p.name}+{q.name}"
    while name in model:
        name += "'"
    merged = combine(p, q, name=name)
    return model.with_class(merged), merged
