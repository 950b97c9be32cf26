"""Empirical checks of Weyuker's complexity-measure properties 1-6.

Properties 1, 2, 3, 5 and 6 are existential: a search either finds a
witness or exhausts its budget, which is not a proof of absence. Property 4
is universal, so the search reports either a counterexample or that the
bound held on every generated pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from entropia import metrics as ck
from entropia.model import (
    SELF,
    CallSite,
    ClassDef,
    ClassModel,
    FieldDef,
    MethodDef,
    build_model,
    combine_in_model,
)

MetricFn = Callable[[ClassDef, ClassModel], float]

METRICS: dict[str, MetricFn] = {
    "wmc": lambda c, m: ck.wmc(c, ck.WmcWeighting.UNIT),
    "dit": ck.dit,
    "noc": ck.noc,
    "cbo": ck.cbo,
    "rfc": ck.rfc,
    "lcom": lambda c, m: ck.lcom_components(c),
    "wmc_cyclomatic": lambda c, m: ck.wmc(c, ck.WmcWeighting.CYCLOMATIC),
    "lcom_percent": lambda c, m: ck.lcom_percent(c),
}
CK_METRICS = ("wmc", "dit", "noc", "cbo", "rfc", "lcom")


class Verdict(str, Enum):
    WITNESS_FOUND = "WITNESS_FOUND"
    NO_WITNESS_IN_BUDGET = "NO_WITNESS_IN_BUDGET"
    UNIVERSAL_HOLDS = "UNIVERSAL_HOLDS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"


class Subject(NamedTuple):
    """A class together with the model it is measured in."""

    model: ClassModel
    cls: ClassDef


@dataclass(frozen=True)
class PropertyVerdict:
    property_id: int
    metric: str
    verdict: Verdict
    classes: tuple[str, ...] = ()
    values: tuple[float, ...] = ()
    budget_used: int = 0
    seed: int | None = None
    # witness subjects for independent re-checking; not serialized
    subjects: tuple[Subject, ...] = field(default=(), compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "property": self.property_id,
            "metric": self.metric,
            "verdict": self.verdict.value,
            "classes": list(self.classes),
            "values": list(self.values),
            "budget_used": self.budget_used,
            "seed": self.seed,
        }


def _metric(metric: str | MetricFn) -> tuple[str, MetricFn]:
    if isinstance(metric, str):
        return metric, METRICS[metric]
    return getattr(metric, "__name__", "custom"), metric


def _mu(fn: MetricFn, s: Subject) -> float:
    return fn(s.cls, s.model)


def population_from(model: ClassModel) -> list[Subject]:
    return [Subject(model, c) for c in model.classes]


def check_property1(metric: str | MetricFn, population: Sequence[Subject]) -> PropertyVerdict:
    """Non-coarseness: some two classes differ in value."""
    name, fn = _metric(metric)
    used = 0
    if population:
        first = population[0]
        v0 = _mu(fn, first)
        for other in population[1:]:
            used += 1
            v = _mu(fn, other)
            if v != v0:
                return PropertyVerdict(
                    1, name, Verdict.WITNESS_FOUND, (first.cls.name, other.cls.name),
                    (v0, v), used, subjects=(first, other),
                )
    return PropertyVerdict(1, name, Verdict.NO_WITNESS_IN_BUDGET, budget_used=used)


def check_property2(metric: str | MetricFn, population: Sequence[Subject]) -> PropertyVerdict:
    """Non-uniqueness: two distinct classes share a value."""
    name, fn = _metric(metric)
    seen: dict[float, Subject] = {}
    used = 0
    for s in population:
        used += 1
        v = _mu(fn, s)
        prev = seen.get(v)
        if prev is not None and (prev.model is not s.model or prev.cls.name != s.cls.name):
            return PropertyVerdict(
                2, name, Verdict.WITNESS_FOUND, (prev.cls.name, s.cls.name), (v, v), used,
                subjects=(prev, s),
            )
        seen.setdefault(v, s)
    return PropertyVerdict(2, name, Verdict.NO_WITNESS_IN_BUDGET, budget_used=used)


def interface(model: ClassModel, cls: ClassDef) -> frozenset[tuple[str, int]]:
    """Signatures an instance answers to: its own plus those inherited in-model."""
    sigs = set(cls.signatures)
    for anc in model.ancestors(cls):
        a = model.get(anc)
        if a is not None:
            sigs |= a.signatures
    return frozenset(sigs)


def same_interface_pairs(model: ClassModel) -> list[tuple[Subject, Subject]]:
    """Pairs of distinct classes offering identical method signatures."""
    pairs = []
    for p, q in combinations(model.classes, 2):
        if interface(model, p) == interface(model, q) and p != q:
            pairs.append((Subject(model, p), Subject(model, q)))
    return pairs


def check_property3(
    metric: str | MetricFn, pairs: Iterable[tuple[Subject, Subject]]
) -> PropertyVerdict:
    """Design details matter: same-interface classes with different values."""
    name, fn = _metric(metric)
    used = 0
    for p, q in pairs:
        used += 1
        vp, vq = _mu(fn, p), _mu(fn, q)
        if vp != vq:
            return PropertyVerdict(
                3, name, Verdict.WITNESS_FOUND, (p.cls.name, q.cls.name), (vp, vq), used,
                subjects=(p, q),
            )
    return PropertyVerdict(3, name, Verdict.NO_WITNESS_IN_BUDGET, budget_used=used)


def combined_value(fn: MetricFn, model: ClassModel, p: ClassDef, q: ClassDef) -> tuple[float, ClassDef]:
    merged_model, merged = combine_in_model(model, p, q)
    return fn(merged, merged_model), merged


# -- generators -------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorConfig:
    classes: int = 6
    max_methods: int = 8
    max_fields: int = 6
    max_depth: int = 3
    method_pool: int = 8
    field_pool: int = 6
    externals: tuple[str, ...] = ("Lib", "Io")


def random_model(rng: random.Random, cfg: GeneratorConfig = GeneratorConfig()) -> ClassModel:
    """A random, valid class model within the configured size limits.

    Method and field names come from small pools so that merged classes
    collide often, which is what the combination properties probe.
    """
    names = [f"C{i}" for i in range(cfg.classes)]
    depth: dict[str, int] = {}
    parents: dict[str, str | None] = {}
    for i, n in enumerate(names):
        options = [p for p in names[:i] if depth[p] < cfg.max_depth]
        parent = rng.choice(options) if options and rng.random() < 0.5 else None
        if parent is None and rng.random() < 0.1:
            parent = rng.choice(cfg.externals)
            depth[n] = 1
        else:
            depth[n] = depth[parent] + 1 if parent else 0
        parents[n] = parent

    fields: dict[str, tuple[FieldDef, ...]] = {}
    for n in names:
        k = rng.randint(0, cfg.max_fields)
        chosen = rng.sample(range(cfg.field_pool), k)
        types = ["int", "int", *names, *cfg.externals]
        fields[n] = tuple(FieldDef(f"f{j}", rng.choice(types)) for j in sorted(chosen))

    classes = []
    for n in names:
        visible = {f.name for f in fields[n]}
        p = parents[n]
        while p in fields:
            visible |= {f.name for f in fields[p]}
            p = parents[p]
        visible_list = sorted(visible)
        methods = []
        for j in sorted(rng.sample(range(cfg.method_pool), rng.randint(0, cfg.max_methods))):
            uses = frozenset(
                rng.sample(visible_list, rng.randint(0, min(3, len(visible_list))))
            )
            calls = []
            for _ in range(rng.randint(0, 2)):
                receiver = rng.choice([SELF, SELF, *names, *cfg.externals])
                calls.append(CallSite(receiver, f"m{rng.randrange(cfg.method_pool)}", 0))
            methods.append(MethodDef(f"m{j}", 0, rng.randint(0, 3), tuple(dict.fromkeys(calls)), uses))
        classes.append(ClassDef(n, parents[n], fields[n], tuple(methods)))
    return build_model(classes, external=cfg.externals)


def random_pairs(
    seed: int, cfg: GeneratorConfig = GeneratorConfig()
) -> Iterator[tuple[ClassModel, ClassDef, ClassDef]]:
    rng = random.Random(seed)
    while True:
        model = random_model(rng, cfg)
        p, q = rng.sample(list(model.classes), 2)
        yield model, p, q


def random_triples(
    seed: int, cfg: GeneratorConfig = GeneratorConfig()
) -> Iterator[tuple[ClassModel, ClassDef, ClassDef, ClassDef]]:
    rng = random.Random(seed)
    while True:
        model = random_model(rng, cfg)
        p, q, r = rng.sample(list(model.classes), 3)
        yield model, p, q, r


# -- combination properties -------------------------------------------------


def check_property4(
    metric: str | MetricFn,
    pairs: Iterable[tuple[ClassModel, ClassDef, ClassDef]],
    budget: int,
    seed: int | None = None,
) -> PropertyVerdict:
    """Monotonicity: mu(P+Q) >= max(mu(P), mu(Q)) on every examined pair."""
    name, fn = _metric(metric)
    used = 0
    for model, p, q in pairs:
        if used >= budget:
            break
        used += 1
        vp, vq = fn(p, model), fn(q, model)
        vpq, merged = combined_value(fn, model, p, q)
        if vpq < vp or vpq < vq:
            return PropertyVerdict(
                4, name, Verdict.COUNTEREXAMPLE, (p.name, q.name, merged.name),
                (vp, vq, vpq), used, seed, subjects=(Subject(model, p), Subject(model, q)),
            )
    return PropertyVerdict(4, name, Verdict.UNIVERSAL_HOLDS, budget_used=used, seed=seed)


def check_property5(
    metric: str | MetricFn,
    triples: Iterable[tuple[ClassModel, ClassDef, ClassDef, ClassDef]],
    budget: int,
    seed: int | None = None,
) -> PropertyVerdict:
    """Non-equivalence of interaction: mu(P) = mu(Q) yet mu(P+R) != mu(Q+R)."""
    name, fn = _metric(metric)
    used = 0
    for model, p, q, r in triples:
        if used >= budget:
            break
        used += 1
        vp, vq = fn(p, model), fn(q, model)
        if vp != vq:
            continue
        vpr, _ = combined_value(fn, model, p, r)
        vqr, _ = combined_value(fn, model, q, r)
        if vpr != vqr:
            return PropertyVerdict(
                5, name, Verdict.WITNESS_FOUND, (p.name, q.name, r.name),
                (vp, vq, vpr, vqr), used, seed,
                subjects=(Subject(model, p), Subject(model, q), Subject(model, r)),
            )
    return PropertyVerdict(5, name, Verdict.NO_WITNESS_IN_BUDGET, budget_used=used, seed=seed)


def check_property6(
    metric: str | MetricFn,
    pairs: Iterable[tuple[ClassModel, ClassDef, ClassDef]],
    budget: int,
    seed: int | None = None,
) -> PropertyVerdict:
    """Interaction increases complexity: mu(P) + mu(Q) < mu(P+Q)."""
    name, fn = _metric(metric)
    used = 0
    for model, p, q in pairs:
        if used >= budget:
            break
        used += 1
        vp, vq = fn(p, model), fn(q, model)
        vpq, merged = combined_value(fn, model, p, q)
        if vp + vq < vpq:
            return PropertyVerdict(
                6, name, Verdict.WITNESS_FOUND, (p.name, q.name, merged.name),
                (vp, vq, vpq), used, seed, subjects=(Subject(model, p), Subject(model, q)),
            )
    return PropertyVerdict(6, name, Verdict.NO_WITNESS_IN_BUDGET, budget_used=used, seed=seed)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    budget: int = 1000
    metrics: tuple[str, ...] = CK_METRICS
    generated_models: int = 20
    generator: GeneratorConfig = GeneratorConfig()


def run_weyuker_suite(
    models: Sequence[ClassModel] = (), config: SuiteConfig = SuiteConfig()
) -> list[PropertyVerdict]:
    """All six properties for every configured metric, deterministic per seed.

    Properties 1-3 search the given models plus ``generated_models`` random
    ones; properties 4-6 draw ``budget`` random pairs or triples.
    """
    rng = random.Random(config.seed)
    generated = [random_model(rng, config.generator) for _ in range(config.generated_models)]
    all_models = list(models) + generated
    population = [s for m in all_models for s in population_from(m)]
    pairs = [pair for m in all_models for pair in same_interface_pairs(m)]

    verdicts = []
    for metric in config.metrics:
        verdicts.append(check_property1(metric, population))
        verdicts.append(check_property2(metric, population))
        verdicts.append(check_property3(metric, pairs))
        verdicts.append(
            check_property4(metric, random_pairs(config.seed, config.generator), config.budget, config.seed)
        )
        verdicts.append(
            check_property5(metric, random_triples(config.seed, config.generator), config.budget, config.seed)
        )
        verdicts.append(
            check_property6(metric, random_pairs(config.seed, config.generator), config.budget, config.seed)
        )
    return verdicts
